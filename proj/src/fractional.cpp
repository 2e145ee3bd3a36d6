#include "fraclab/fractional.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "fraclab/errors.hpp"
#include "fraclab/quadrature.hpp"

namespace fraclab {

namespace {

double zero_threshold(const SpectralDecomposition& dec) {
    const double lam_max = dec.eigenvalues.empty() ? 0.0 : dec.eigenvalues.back();
    return 1e-12 * std::max(1.0, lam_max);
}

// Smallest strictly positive eigenvalue, or 0 when the spectrum is {0}.
double lam_min_positive(const SpectralDecomposition& dec) {
    const double tol = zero_threshold(dec);
    for (double lam : dec.eigenvalues)
        if (lam > tol) return lam;
    return 0.0;
}

// Solves the small dense system A x = b by Gaussian elimination with
// partial pivoting (used for the Richardson ladder only).
std::vector<double> dense_solve(std::vector<double> A, std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(A[i * n + k]) > std::abs(A[piv * n + k])) piv = i;
        require(std::abs(A[piv * n + k]) > 0.0, "SingularSystem",
                "singular extrapolation system");
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(A[k * n + j], A[piv * n + j]);
            std::swap(b[k], b[piv]);
        }
        for (int i = k + 1; i < n; ++i) {
            const double m = A[i * n + k] / A[k * n + k];
            for (int j = k; j < n; ++j) A[i * n + j] -= m * A[k * n + j];
            b[i] -= m * b[k];
        }
    }
    std::vector<double> x(n);
    for (int i = n - 1; i >= 0; --i) {
        double acc = b[i];
        for (int j = i + 1; j < n; ++j) acc -= A[i * n + j] * x[j];
        x[i] = acc / A[i * n + i];
    }
    return x;
}

}  // namespace

void validate(const FracConfig& cfg) {
    require(cfg.s > 0.0 && cfg.s < 1.0, "SOutOfRange",
            "s must lie strictly in (0,1)");
    require(cfg.quad_nodes >= 8, "BadQuadratureConfig",
            "need at least 8 quadrature nodes");
}

std::vector<double> frac_spectral(const SpectralDecomposition& dec, double s,
                                  const std::vector<double>& f) {
    require(s > 0.0 && s < 1.0, "SOutOfRange", "s must lie strictly in (0,1)");
    const double tol = zero_threshold(dec);
    return dec.apply_multiplier(f, [s, tol](double lam) {
        return lam > tol ? std::pow(lam, s) : 0.0;
    });
}

std::vector<double> frac_subordination(const SpectralDecomposition& dec,
                                       const FracConfig& cfg,
                                       const std::vector<double>& f) {
    validate(cfg);
    const double tol = zero_threshold(dec);
    const double lo = lam_min_positive(dec);
    if (lo == 0.0) return std::vector<double>(f.size(), 0.0);
    const TimeQuadrature q =
        subordination_nodes(cfg.s, lo, dec.eigenvalues.back(), cfg.quad_nodes);
    const double inv_gamma = 1.0 / gamma_minus(cfg.s);
    std::vector<double> c = dec.coefficients(f);
    for (int i = 0; i < dec.n(); ++i) {
        const double lam = dec.eigenvalues[i];
        if (lam <= tol) {
            c[i] = 0.0;
            continue;
        }
        double acc = 0.0;  // int (e^{-lam t} - 1) t^{-1-s} dt
        for (std::size_t k = 0; k < q.t.size(); ++k)
            acc += q.c[k] * std::expm1(-lam * q.t[k]);
        c[i] *= inv_gamma * acc;
    }
    return dec.synthesize(c);
}

JumpKernel build_jump_kernel(const SpectralDecomposition& dec,
                             const FracConfig& cfg) {
    validate(cfg);
    const int n = dec.n();
    const double tol = zero_threshold(dec);
    const double abs_gamma = -gamma_minus(cfg.s);

    std::vector<double> J(n, 0.0);
    for (int i = 0; i < n; ++i)
        if (dec.eigenvalues[i] > tol)
            J[i] = kernel_mode_coefficient(dec.eigenvalues[i], cfg.s,
                                           cfg.quad_nodes);

    JumpKernel ker;
    ker.space = dec.space;
    ker.s = cfg.s;
    ker.normalized = false;
    ker.K.assign(static_cast<std::size_t>(n) * n, 0.0);
#pragma omp parallel for schedule(static)
    for (int x = 0; x < n; ++x)
        for (int y = x + 1; y < n; ++y) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i)
                acc += J[i] * dec.phi_at(x, i) * dec.phi_at(y, i);
            ker.K[static_cast<std::size_t>(x) * n + y] = acc;
        }
    for (const auto& e : dec.space->edges()) {
        const int x = std::min(e.u, e.v), y = std::max(e.u, e.v);
        ker.K[static_cast<std::size_t>(x) * n + y] +=
            abs_gamma * e.w / (dec.space->mu(x) * dec.space->mu(y));
    }
    for (int x = 0; x < n; ++x)
        for (int y = x + 1; y < n; ++y) {
            double v = ker.K[static_cast<std::size_t>(x) * n + y];
            if (v < 0.0) v = 0.0;  // rounding noise on distant pairs
            ker.K[static_cast<std::size_t>(x) * n + y] = v;
            ker.K[static_cast<std::size_t>(y) * n + x] = v;
        }
    return ker;
}

JumpKernel build_jump_kernel_reference(const SpectralDecomposition& dec,
                                       const FracConfig& cfg) {
    validate(cfg);
    const int n = dec.n();
    const double lo = lam_min_positive(dec);
    JumpKernel ker;
    ker.space = dec.space;
    ker.s = cfg.s;
    ker.normalized = false;
    ker.K.assign(static_cast<std::size_t>(n) * n, 0.0);
    if (lo == 0.0) return ker;
    const TimeQuadrature q =
        subordination_nodes(cfg.s, lo, dec.eigenvalues.back(), cfg.quad_nodes);
#pragma omp parallel for schedule(static)
    for (int x = 0; x < n; ++x)
        for (int y = x + 1; y < n; ++y) {
            double acc = 0.0;
            for (std::size_t k = 0; k < q.t.size(); ++k) {
                // p_t(x,y) = sum_i expm1(-t lam_i) phi phi off the diagonal
                // (the +1 terms cancel by orthogonality).
                double p = 0.0;
                for (int i = 0; i < n; ++i)
                    p += std::expm1(-dec.eigenvalues[i] * q.t[k]) *
                         dec.phi_at(x, i) * dec.phi_at(y, i);
                acc += q.c[k] * p;
            }
            ker.K[static_cast<std::size_t>(x) * n + y] = std::max(acc, 0.0);
        }
    for (int x = 0; x < n; ++x)
        for (int y = x + 1; y < n; ++y)
            ker.K[static_cast<std::size_t>(y) * n + x] =
                ker.K[static_cast<std::size_t>(x) * n + y];
    return ker;
}

std::vector<double> jump_kernel_row(const SpectralDecomposition& dec,
                                    const FracConfig& cfg, int x) {
    validate(cfg);
    const int n = dec.n();
    require(x >= 0 && x < n, "UnknownVertex", "row index out of range");
    const double tol = zero_threshold(dec);
    const double abs_gamma = -gamma_minus(cfg.s);
    std::vector<double> J(n, 0.0);
    for (int i = 0; i < n; ++i)
        if (dec.eigenvalues[i] > tol)
            J[i] = kernel_mode_coefficient(dec.eigenvalues[i], cfg.s,
                                           cfg.quad_nodes);
    std::vector<double> row(n, 0.0);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < n; ++y) {
        if (y == x) continue;
        double acc = 0.0;
        for (int i = 0; i < n; ++i)
            acc += J[i] * dec.phi_at(x, i) * dec.phi_at(y, i);
        row[y] = acc;
    }
    for (auto [y, w] : dec.space->neighbors(x))
        row[y] += abs_gamma * w / (dec.space->mu(x) * dec.space->mu(y));
    for (int y = 0; y < n; ++y) row[y] = std::max(row[y], 0.0);
    row[x] = 0.0;
    return row;
}

std::vector<double> frac_kernel_apply(const JumpKernel& kernel,
                                      const std::vector<double>& f) {
    const int n = kernel.space->size();
    require(static_cast<int>(f.size()) == n, "ShapeMismatch",
            "function length != vertex count");
    const double factor =
        kernel.normalized ? -1.0 : 1.0 / gamma_minus(kernel.s);
    std::vector<double> out(n, 0.0);
    for (int x = 0; x < n; ++x) {
        double acc = 0.0;
        const double* row = kernel.K.data() + static_cast<std::size_t>(x) * n;
        for (int y = 0; y < n; ++y)
            acc += row[y] * (f[y] - f[x]) * kernel.space->mu(y);
        out[x] = factor * acc;
    }
    return out;
}

double dtn_constant(double s) {
    require(s > 0.0 && s < 1.0, "SOutOfRange", "s must lie strictly in (0,1)");
    return std::pow(2.0, 2.0 * s - 1.0) * std::tgamma(s) / std::tgamma(1.0 - s);
}

std::vector<std::vector<double>> poisson_extend(
    const SpectralDecomposition& dec, const FracConfig& cfg,
    const std::vector<double>& f, const std::vector<double>& y_list) {
    validate(cfg);
    const std::vector<double> c = dec.coefficients(f);
    std::vector<std::vector<double>> U;
    U.reserve(y_list.size());
    for (double y : y_list) {
        require(y >= 0.0, "BadMeshParams", "extension heights must be >= 0");
        if (y == 0.0) {
            U.push_back(f);  // boundary datum reproduced exactly
            continue;
        }
        std::vector<double> cy(c);
        for (int i = 0; i < dec.n(); ++i)
            cy[i] *= poisson_multiplier(cfg.s, std::max(dec.eigenvalues[i], 0.0),
                                        y);
        U.push_back(dec.synthesize(cy));
    }
    return U;
}

std::vector<double> dtn_semi_analytic(const SpectralDecomposition& dec,
                                      const FracConfig& cfg,
                                      const std::vector<double>& f) {
    validate(cfg);
    const double s = cfg.s;
    const double tol = zero_threshold(dec);
    const double lam_max = dec.eigenvalues.empty() ? 0.0 : dec.eigenvalues.back();
    if (lam_max <= tol) return std::vector<double>(f.size(), 0.0);

    // Geometric ladder of heights; c = y^2 lam / 4 stays <= c0 for every mode.
    constexpr int kLevels = 8;
    constexpr double kC0 = 3e-2;
    constexpr double kRatio = 2.5;
    std::vector<double> ys(kLevels);
    ys[0] = 2.0 * std::sqrt(kC0 / lam_max);
    for (int k = 1; k < kLevels; ++k) ys[k] = ys[k - 1] / kRatio;

    // Correction exponents of the boundary layer: { i(2-2s) + 2j } > 0.
    const double p1 = 2.0 - 2.0 * s;
    std::set<long long> expo_keys;
    std::vector<double> expo;
    for (int i = 0; i < kLevels; ++i)
        for (int j = 0; j < 4; ++j) {
            const double p = i * p1 + 2.0 * j;
            if (p < 1e-9) continue;
            const long long key = std::llround(p * 1e9);
            if (expo_keys.insert(key).second) expo.push_back(p);
        }
    std::sort(expo.begin(), expo.end());
    expo.resize(kLevels - 1);

    // Vandermonde of the ladder (shared by all modes).
    std::vector<double> A(static_cast<std::size_t>(kLevels) * kLevels);
    for (int k = 0; k < kLevels; ++k) {
        A[static_cast<std::size_t>(k) * kLevels] = 1.0;
        for (int j = 0; j + 1 < kLevels; ++j)
            A[static_cast<std::size_t>(k) * kLevels + j + 1] =
                std::pow(ys[k], expo[j]);
    }

    const double norm = std::pow(4.0, s) * std::tgamma(1.0 + s) /
                        std::tgamma(1.0 - s);  // boundary-layer normalizer
    std::vector<double> c = dec.coefficients(f);
    for (int i = 0; i < dec.n(); ++i) {
        const double lam = dec.eigenvalues[i];
        if (lam <= tol) {
            c[i] = 0.0;
            continue;
        }
        std::vector<double> Q(kLevels);
        for (int k = 0; k < kLevels; ++k) {
            const double one_minus_m = 1.0 - poisson_multiplier(s, lam, ys[k]);
            Q[k] = norm * one_minus_m / std::pow(ys[k], 2.0 * s);
        }
        c[i] *= dense_solve(A, Q)[0];
    }
    return dec.synthesize(c);
}

}  // namespace fraclab
