#pragma once

#include <memory>
#include <vector>

#include "fraclab/fractional.hpp"

namespace fraclab {

/// Interior rows of the jump kernel for a fixed interior set, with the
/// interior block LU-factored once; repeated solves against different
/// exterior data (the Harnack experiments) then cost one substitution each.
/// The interior block is a strictly diagonally dominant M-matrix on
/// connected spaces, so the factorization cannot break down and the
/// discrete maximum principle holds.
class NonlocalOperator {
public:
    /// Kernel rows from the modal resummation (mode coefficients computed
    /// once and shared across rows); avoids materializing the full kernel.
    NonlocalOperator(const SpectralDecomposition& dec, const FracConfig& cfg,
                     std::vector<int> inside);

    /// Rows sliced out of a prebuilt kernel.
    NonlocalOperator(const JumpKernel& kernel, std::vector<int> inside);

    /// f = exterior_data off the interior; sum_y K(x,y)(f(y)-f(x)) mu(y) = 0
    /// at interior x.
    std::vector<double> solve(const std::vector<double>& exterior_data) const;

    const std::vector<int>& inside() const { return inside_; }
    const DirichletSpace& space() const { return *space_; }

private:
    void factorize(std::vector<std::vector<double>> rows);

    std::shared_ptr<const DirichletSpace> space_;
    std::vector<int> inside_;
    std::vector<int> local_;               // global -> interior position
    std::vector<std::vector<double>> rows_;  // K(inside[k], .)
    std::vector<double> lu_;
    std::vector<int> piv_;
};

/// One-shot convenience wrappers.
std::vector<double> nonlocal_dirichlet_solve(
    const JumpKernel& kernel, const std::vector<int>& inside,
    const std::vector<double>& exterior_data);

std::vector<double> nonlocal_dirichlet_solve(
    const SpectralDecomposition& dec, const FracConfig& cfg,
    const std::vector<int>& inside, const std::vector<double>& exterior_data);

}  // namespace fraclab
