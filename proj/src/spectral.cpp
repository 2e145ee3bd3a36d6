#include "fraclab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fraclab/errors.hpp"
#include "fraclab/jacobi.hpp"

namespace fraclab {

namespace {

// Deterministic sign: the first entry exceeding 1e-12 of the sup norm is
// made positive, fixing the vector up to degeneracies.
void fix_signs(std::vector<double>& phi, int n) {
    for (int i = 0; i < n; ++i) {
        double amax = 0.0;
        for (int x = 0; x < n; ++x)
            amax = std::max(amax, std::abs(phi[static_cast<std::size_t>(x) * n + i]));
        for (int x = 0; x < n; ++x) {
            const double v = phi[static_cast<std::size_t>(x) * n + i];
            if (std::abs(v) > 1e-12 * amax) {
                if (v < 0.0)
                    for (int y = 0; y < n; ++y)
                        phi[static_cast<std::size_t>(y) * n + i] *= -1.0;
                break;
            }
        }
    }
}

}  // namespace

std::vector<double> SpectralDecomposition::coefficients(
    const std::vector<double>& f) const {
    const int nn = n();
    require(static_cast<int>(f.size()) == nn, "ShapeMismatch",
            "function length != vertex count");
    std::vector<double> c(nn, 0.0);
    for (int i = 0; i < nn; ++i) {
        double acc = 0.0;
        for (int x = 0; x < nn; ++x)
            acc += space->mu(x) * f[x] * phi_at(x, i);
        c[i] = acc;
    }
    return c;
}

std::vector<double> SpectralDecomposition::synthesize(
    const std::vector<double>& coeffs) const {
    const int nn = n();
    require(static_cast<int>(coeffs.size()) == nn, "ShapeMismatch",
            "coefficient length != mode count");
    std::vector<double> f(nn, 0.0);
    for (int x = 0; x < nn; ++x) {
        double acc = 0.0;
        for (int i = 0; i < nn; ++i) acc += coeffs[i] * phi_at(x, i);
        f[x] = acc;
    }
    return f;
}

std::vector<double> SpectralDecomposition::apply_multiplier(
    const std::vector<double>& f, const std::function<double(double)>& g) const {
    std::vector<double> c = coefficients(f);
    for (int i = 0; i < n(); ++i) c[i] *= g(eigenvalues[i]);
    return synthesize(c);
}

std::vector<double> SpectralDecomposition::multiplier_kernel(
    const std::function<double(double)>& g) const {
    const int nn = n();
    std::vector<double> gl(nn);
    for (int i = 0; i < nn; ++i) gl[i] = g(eigenvalues[i]);
    std::vector<double> K(static_cast<std::size_t>(nn) * nn, 0.0);
#pragma omp parallel for schedule(static)
    for (int x = 0; x < nn; ++x)
        for (int y = 0; y < nn; ++y) {
            double acc = 0.0;
            for (int i = 0; i < nn; ++i)
                acc += gl[i] * phi_at(x, i) * phi_at(y, i);
            K[static_cast<std::size_t>(x) * nn + y] = acc;
        }
    return K;
}

SpectralDecomposition spectral_decompose(
    std::shared_ptr<const DirichletSpace> space, bool parallel, int max_size) {
    const int n = space->size();
    require(n <= max_size, "SpaceTooLarge",
            "dense eigensolve refused above " + std::to_string(max_size) +
                " vertices");

    // Symmetrization S = D^{-1/2} (Deg - W) D^{-1/2}.
    std::vector<double> S(static_cast<std::size_t>(n) * n, 0.0);
    std::vector<double> isq(n);
    for (int x = 0; x < n; ++x) isq[x] = 1.0 / std::sqrt(space->mu(x));
    for (int x = 0; x < n; ++x)
        S[static_cast<std::size_t>(x) * n + x] =
            space->weighted_degree(x) / space->mu(x);
    for (const auto& e : space->edges()) {
        const double v = -e.w * isq[e.u] * isq[e.v];
        S[static_cast<std::size_t>(e.u) * n + e.v] = v;
        S[static_cast<std::size_t>(e.v) * n + e.u] = v;
    }

    SpectralDecomposition dec;
    dec.space = std::move(space);
    std::vector<double> V;
    if (parallel)
        jacobi_eigensolve_parallel(S, n, dec.eigenvalues, V);
    else
        jacobi_eigensolve_serial(S, n, dec.eigenvalues, V);

    // phi_i = D^{-1/2} v_i is mu-orthonormal.
    dec.phi.resize(V.size());
    for (int x = 0; x < n; ++x)
        for (int i = 0; i < n; ++i)
            dec.phi[static_cast<std::size_t>(x) * n + i] =
                isq[x] * V[static_cast<std::size_t>(x) * n + i];
    fix_signs(dec.phi, n);
    // Laplacians have nonnegative spectrum; clamp rounding noise at zero.
    for (double& lam : dec.eigenvalues)
        if (lam < 0.0 && lam > -1e-10) lam = 0.0;
    return dec;
}

std::vector<double> heat_apply(const SpectralDecomposition& dec,
                               const std::vector<double>& f, double t) {
    require(t >= 0.0, "BadTime", "heat semigroup needs t >= 0");
    return dec.apply_multiplier(
        f, [t](double lam) { return std::exp(-t * lam); });
}

std::vector<double> heat_kernel(const SpectralDecomposition& dec, double t) {
    require(t >= 0.0, "BadTime", "heat semigroup needs t >= 0");
    return dec.multiplier_kernel(
        [t](double lam) { return std::exp(-t * lam); });
}

SpectralDecomposition spectral_decompose_product(
    const SpectralDecomposition& da, const SpectralDecomposition& db,
    std::shared_ptr<const DirichletSpace> product) {
    const int na = da.n(), nb = db.n(), n = na * nb;
    require(product->size() == n, "ShapeMismatch",
            "product space size != na * nb");

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> lam(n);
    for (int ia = 0; ia < na; ++ia)
        for (int ib = 0; ib < nb; ++ib)
            lam[ia * nb + ib] = da.eigenvalues[ia] + db.eigenvalues[ib];
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return lam[a] < lam[b]; });

    SpectralDecomposition dec;
    dec.space = std::move(product);
    dec.eigenvalues.resize(n);
    dec.phi.resize(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j) {
        const int ia = order[j] / nb, ib = order[j] % nb;
        dec.eigenvalues[j] = lam[order[j]];
        for (int xa = 0; xa < na; ++xa) {
            const double pa = da.phi_at(xa, ia);
            for (int xb = 0; xb < nb; ++xb)
                dec.phi[static_cast<std::size_t>(xa * nb + xb) * n + j] =
                    pa * db.phi_at(xb, ib);
        }
    }
    fix_signs(dec.phi, n);
    return dec;
}

}  // namespace fraclab
