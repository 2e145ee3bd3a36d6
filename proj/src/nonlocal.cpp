#include "fraclab/nonlocal.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "fraclab/errors.hpp"

namespace fraclab {

namespace {

std::vector<int> check_inside(const DirichletSpace& space,
                              const std::vector<int>& inside) {
    const int n = space.size();
    const int m = static_cast<int>(inside.size());
    require(m >= 1 && m < n, "EmptyBall",
            "interior must be a nonempty strict subset");
    std::vector<int> local(n, -1);
    for (int k = 0; k < m; ++k) {
        require(inside[k] >= 0 && inside[k] < n && local[inside[k]] < 0,
                "UnknownVertex", "interior indices must be distinct");
        local[inside[k]] = k;
    }
    return local;
}

}  // namespace

NonlocalOperator::NonlocalOperator(const SpectralDecomposition& dec,
                                   const FracConfig& cfg,
                                   std::vector<int> inside)
    : space_(dec.space), inside_(std::move(inside)) {
    local_ = check_inside(*space_, inside_);
    std::vector<std::vector<double>> rows(inside_.size());
    for (std::size_t k = 0; k < inside_.size(); ++k)
        rows[k] = jump_kernel_row(dec, cfg, inside_[k]);
    factorize(std::move(rows));
}

NonlocalOperator::NonlocalOperator(const JumpKernel& kernel,
                                   std::vector<int> inside)
    : space_(kernel.space), inside_(std::move(inside)) {
    local_ = check_inside(*space_, inside_);
    const int n = space_->size();
    std::vector<std::vector<double>> rows(inside_.size());
    for (std::size_t k = 0; k < inside_.size(); ++k)
        rows[k].assign(
            kernel.K.begin() + static_cast<std::size_t>(inside_[k]) * n,
            kernel.K.begin() + static_cast<std::size_t>(inside_[k] + 1) * n);
    factorize(std::move(rows));
}

void NonlocalOperator::factorize(std::vector<std::vector<double>> rows) {
    const int n = space_->size();
    const int m = static_cast<int>(inside_.size());
    // Row x: (sum_y K mu) f(x) - sum_{y in} K mu f(y) = sum_{y out} K mu g(y).
    std::vector<double> A(static_cast<std::size_t>(m) * m, 0.0);
    for (int k = 0; k < m; ++k) {
        const int x = inside_[k];
        double diag = 0.0;
        for (int y = 0; y < n; ++y) {
            if (y == x) continue;
            const double km = rows[k][y] * space_->mu(y);
            diag += km;
            if (local_[y] >= 0)
                A[static_cast<std::size_t>(k) * m + local_[y]] -= km;
        }
        A[static_cast<std::size_t>(k) * m + k] += diag;
        require(diag > 0.0, "SingularSystem",
                "interior vertex sees no kernel mass");
    }

    // LU with partial pivoting, stored in place.
    piv_.resize(m);
    for (int col = 0; col < m; ++col) {
        int p = col;
        for (int i = col + 1; i < m; ++i)
            if (std::abs(A[static_cast<std::size_t>(i) * m + col]) >
                std::abs(A[static_cast<std::size_t>(p) * m + col]))
                p = i;
        require(std::abs(A[static_cast<std::size_t>(p) * m + col]) > 0.0,
                "SingularSystem", "singular nonlocal Dirichlet system");
        piv_[col] = p;
        if (p != col)
            for (int j = 0; j < m; ++j)
                std::swap(A[static_cast<std::size_t>(col) * m + j],
                          A[static_cast<std::size_t>(p) * m + j]);
        const double d = A[static_cast<std::size_t>(col) * m + col];
        for (int i = col + 1; i < m; ++i) {
            const double factor = A[static_cast<std::size_t>(i) * m + col] / d;
            A[static_cast<std::size_t>(i) * m + col] = factor;
            if (factor == 0.0) continue;
            for (int j = col + 1; j < m; ++j)
                A[static_cast<std::size_t>(i) * m + j] -=
                    factor * A[static_cast<std::size_t>(col) * m + j];
        }
    }
    lu_ = std::move(A);
    rows_ = std::move(rows);
}

std::vector<double> NonlocalOperator::solve(
    const std::vector<double>& exterior_data) const {
    const int n = space_->size();
    const int m = static_cast<int>(inside_.size());
    require(static_cast<int>(exterior_data.size()) == n, "ShapeMismatch",
            "exterior data must be defined on all vertices");
    std::vector<double> b(m, 0.0);
    for (int k = 0; k < m; ++k) {
        double acc = 0.0;
        for (int y = 0; y < n; ++y)
            if (local_[y] < 0)
                acc += rows_[k][y] * space_->mu(y) * exterior_data[y];
        b[k] = acc;
    }
    for (int col = 0; col < m; ++col) {
        if (piv_[col] != col) std::swap(b[col], b[piv_[col]]);
        for (int i = col + 1; i < m; ++i)
            b[i] -= lu_[static_cast<std::size_t>(i) * m + col] * b[col];
    }
    for (int i = m - 1; i >= 0; --i) {
        double acc = b[i];
        for (int j = i + 1; j < m; ++j)
            acc -= lu_[static_cast<std::size_t>(i) * m + j] * b[j];
        b[i] = acc / lu_[static_cast<std::size_t>(i) * m + i];
    }
    std::vector<double> f(exterior_data);
    for (int k = 0; k < m; ++k) f[inside_[k]] = b[k];
    return f;
}

std::vector<double> nonlocal_dirichlet_solve(
    const JumpKernel& kernel, const std::vector<int>& inside,
    const std::vector<double>& exterior_data) {
    return NonlocalOperator(kernel, inside).solve(exterior_data);
}

std::vector<double> nonlocal_dirichlet_solve(
    const SpectralDecomposition& dec, const FracConfig& cfg,
    const std::vector<int>& inside, const std::vector<double>& exterior_data) {
    return NonlocalOperator(dec, cfg, inside).solve(exterior_data);
}

}  // namespace fraclab
