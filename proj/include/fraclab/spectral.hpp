#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "fraclab/space.hpp"

namespace fraclab {

/// Full eigendecomposition of the (negated) generator: -L phi_i = lambda_i
/// phi_i with lambda_0 <= ... <= lambda_{n-1} and the phi_i orthonormal in
/// L^2(mu).  Computed by symmetrizing with D^{1/2} (D = diag mu) and running
/// Jacobi rotations on the resulting dense symmetric matrix.
struct SpectralDecomposition {
    std::shared_ptr<const DirichletSpace> space;
    std::vector<double> eigenvalues;  // ascending
    std::vector<double> phi;          // row-major n x n, column i is phi_i

    int n() const { return static_cast<int>(eigenvalues.size()); }
    double phi_at(int x, int i) const {
        return phi[static_cast<std::size_t>(x) * n() + i];
    }

    /// c_i = <f, phi_i>_mu.
    std::vector<double> coefficients(const std::vector<double>& f) const;

    /// f(x) = sum_i c_i phi_i(x).
    std::vector<double> synthesize(const std::vector<double>& coeffs) const;

    /// g(-L) f = sum_i g(lambda_i) <f, phi_i>_mu phi_i.
    std::vector<double> apply_multiplier(
        const std::vector<double>& f,
        const std::function<double(double)>& g) const;

    /// Kernel of g(-L) with respect to mu, row-major n x n:
    /// (g(-L) f)(x) = sum_y k(x, y) f(y) mu(y).
    std::vector<double> multiplier_kernel(
        const std::function<double(double)>& g) const;
};

/// Dense eigensolve; refuses spaces above `max_size` vertices (use the
/// product-structure fast path for large separable fixtures).  `parallel`
/// selects the round-robin OpenMP Jacobi variant.
SpectralDecomposition spectral_decompose(
    std::shared_ptr<const DirichletSpace> space, bool parallel = true,
    int max_size = 2000);

/// Heat semigroup P_t f = e^{tL} f = sum_i e^{-t lambda_i} <f, phi_i>_mu phi_i.
std::vector<double> heat_apply(const SpectralDecomposition& dec,
                               const std::vector<double>& f, double t);

/// Heat kernel p_t(x, y) with respect to mu, row-major n x n.
std::vector<double> heat_kernel(const SpectralDecomposition& dec, double t);

/// Closed-form decomposition of a Cartesian product space whose vertex
/// (iA, iB) sits at index iA * nB + iB, measure mu_A(iA) mu_B(iB),
/// horizontal conductances w_A mu_B and vertical mu_A w_B.  Eigenpairs are
/// (lambda_a + lambda_b, phi_a tensor phi_b); avoids the dense solve.
SpectralDecomposition spectral_decompose_product(
    const SpectralDecomposition& da, const SpectralDecomposition& db,
    std::shared_ptr<const DirichletSpace> product);

}  // namespace fraclab
