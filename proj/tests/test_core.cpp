#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fraclab/errors.hpp"
#include "fraclab/jacobi.hpp"
#include "fraclab/spectral.hpp"

using namespace fraclab;

namespace {

std::vector<double> random_vec(int n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    std::vector<double> v(n);
    for (double& x : v) x = gauss(rng);
    return v;
}

}  // namespace

TEST_CASE("space construction validates its inputs") {
    CHECK_THROWS_AS(build_space({"a", "a"}, {1.0, 1.0}, {{"a", "a", 1.0}}, {}),
                    Error);
    CHECK_THROWS_AS(build_space({"a", "b"}, {1.0, -1.0}, {{"a", "b", 1.0}}, {}),
                    Error);
    CHECK_THROWS_AS(build_space({"a", "b"}, {1.0, 1.0}, {{"a", "c", 1.0}}, {}),
                    Error);
    // Asymmetric explicit metric.
    CHECK_THROWS_AS(build_space({"a", "b"}, {1.0, 1.0}, {{"a", "b", 1.0}},
                                std::vector<double>{0.0, 1.0, 2.0, 0.0}),
                    Error);
}

TEST_CASE("hop metric and fixture shapes") {
    const auto ring = make_ring(10);
    CHECK(ring.size() == 10);
    CHECK(ring.edges().size() == 10);
    CHECK(ring.metric(0, 5) == doctest::Approx(5.0));
    CHECK(ring.metric(0, 7) == doctest::Approx(3.0));

    const auto grid = make_grid(4, 5);
    CHECK(grid.size() == 20);
    CHECK(grid.metric(0, 19) == doctest::Approx(3.0 + 4.0));

    const auto path = make_path(8);
    CHECK(path.components() == 1);
    CHECK(path.metric(0, 7) == doctest::Approx(7.0));
}

TEST_CASE("energy measure integrates back to the form") {
    const auto sp = make_grid(5, 4, 1.3, 0.7);
    const auto u = random_vec(sp.size(), 1);
    const auto v = random_vec(sp.size(), 2);
    const auto gamma = sp.energy_measure(u, v);
    double total = 0.0;
    for (int x = 0; x < sp.size(); ++x) total += sp.mu(x) * gamma[x];
    CHECK(total == doctest::Approx(sp.dirichlet_form(u, v)).epsilon(1e-12));
}

TEST_CASE("generator is symmetric against the form") {
    const auto sp = make_ring(12, 0.8, 1.7);
    const auto u = random_vec(sp.size(), 3);
    const auto v = random_vec(sp.size(), 4);
    const auto Lu = sp.apply_generator(u);
    // E(u, v) = -<Lu, v>_mu.
    CHECK(sp.dirichlet_form(u, v) ==
          doctest::Approx(-sp.inner(Lu, v)).epsilon(1e-12));
    CHECK(sp.inner(Lu, v) == doctest::Approx(sp.inner(u, sp.apply_generator(v)))
                                 .epsilon(1e-12));
}

TEST_CASE("jacobi solvers agree with each other and with the matrix") {
    const int n = 40;
    std::mt19937_64 rng(9);
    std::normal_distribution<double> gauss;
    std::vector<double> A(n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) A[i * n + j] = A[j * n + i] = gauss(rng);
    const auto A0 = A;
    auto B = A;

    std::vector<double> ev_s, V_s, ev_p, V_p;
    jacobi_eigensolve_serial(A, n, ev_s, V_s);
    jacobi_eigensolve_parallel(B, n, ev_p, V_p);

    for (int i = 0; i < n; ++i)
        CHECK(ev_s[i] == doctest::Approx(ev_p[i]).epsilon(1e-10));
    for (int i = 1; i < n; ++i) CHECK(ev_s[i] >= ev_s[i - 1]);

    // Residual ||A v - lambda v|| and orthonormality for both variants.
    for (const auto& [ev, V] : {std::pair{&ev_s, &V_s}, {&ev_p, &V_p}}) {
        for (int j = 0; j < n; j += 7) {
            double res = 0.0;
            for (int i = 0; i < n; ++i) {
                double acc = 0.0;
                for (int k = 0; k < n; ++k)
                    acc += A0[i * n + k] * (*V)[k * n + j];
                res = std::max(res, std::abs(acc - (*ev)[j] * (*V)[i * n + j]));
            }
            CHECK(res < 1e-9);
        }
        for (int a = 0; a < n; a += 11)
            for (int b = 0; b < n; b += 5) {
                double dot = 0.0;
                for (int k = 0; k < n; ++k)
                    dot += (*V)[k * n + a] * (*V)[k * n + b];
                CHECK(dot == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-10));
            }
    }
}

TEST_CASE("ring spectrum matches the circulant closed form") {
    const int n = 16;
    auto sp = std::make_shared<DirichletSpace>(make_ring(n));
    const auto dec = spectral_decompose(sp);
    std::vector<double> exact;
    for (int k = 0; k < n; ++k)
        exact.push_back(2.0 - 2.0 * std::cos(2.0 * std::numbers::pi * k / n));
    std::sort(exact.begin(), exact.end());
    for (int i = 0; i < n; ++i)
        CHECK(dec.eigenvalues[i] == doctest::Approx(exact[i]).epsilon(1e-10));
}

TEST_CASE("two-point space has the closed-form spectrum") {
    auto sp = std::make_shared<DirichletSpace>(make_two_point());
    const auto dec = spectral_decompose(sp);
    CHECK(dec.eigenvalues[0] == doctest::Approx(0.0));
    // lambda_1 = w (1/mu_1 + 1/mu_2) with the fixture's parameters.
    const double expected = 1.0 / sp->mu(0) + 1.0 / sp->mu(1);
    CHECK(dec.eigenvalues[1] == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("eigenbasis is mu-orthonormal and reproduces the generator") {
    auto sp = std::make_shared<DirichletSpace>(make_grid(4, 4, 1.4, 0.6));
    const auto dec = spectral_decompose(sp);
    const int n = dec.n();
    for (int a = 0; a < n; a += 3)
        for (int b = 0; b < n; b += 2) {
            double dot = 0.0;
            for (int x = 0; x < n; ++x)
                dot += sp->mu(x) * dec.phi_at(x, a) * dec.phi_at(x, b);
            CHECK(dot == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-10));
        }
    const auto f = random_vec(n, 5);
    const auto Lf = sp->apply_generator(f);
    const auto minusLf = dec.apply_multiplier(f, [](double l) { return l; });
    for (int x = 0; x < n; ++x)
        CHECK(minusLf[x] == doctest::Approx(-Lf[x]).epsilon(1e-9));
}

TEST_CASE("product decomposition equals the dense one") {
    auto pa = std::make_shared<DirichletSpace>(make_path(5));
    auto pb = std::make_shared<DirichletSpace>(make_path(4));
    const auto da = spectral_decompose(pa);
    const auto db = spectral_decompose(pb);
    auto grid = std::make_shared<DirichletSpace>(make_grid(5, 4));
    const auto prod = spectral_decompose_product(da, db, grid);
    const auto dense = spectral_decompose(grid);
    for (int i = 0; i < prod.n(); ++i)
        CHECK(prod.eigenvalues[i] ==
              doctest::Approx(dense.eigenvalues[i]).epsilon(1e-10));
    // Same heat kernel even where eigenspaces are degenerate.
    const auto k1 = heat_kernel(prod, 0.7);
    const auto k2 = heat_kernel(dense, 0.7);
    for (std::size_t k = 0; k < k1.size(); ++k)
        CHECK(k1[k] == doctest::Approx(k2[k]).epsilon(1e-10));
}

TEST_CASE("heat semigroup is conservative, positive, and a semigroup") {
    auto sp = std::make_shared<DirichletSpace>(make_ring(14, 1.2, 0.9));
    const auto dec = spectral_decompose(sp);
    const std::vector<double> ones(sp->size(), 1.0);
    for (double t : {0.05, 0.8, 5.0}) {
        const auto pt1 = heat_apply(dec, ones, t);
        for (double v : pt1) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    }
    const auto u = random_vec(sp->size(), 6);
    std::vector<double> up(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) up[k] = std::abs(u[k]);
    const auto put = heat_apply(dec, up, 1.3);
    for (double v : put) CHECK(v >= -1e-12);
    const auto ab = heat_apply(dec, heat_apply(dec, u, 0.4), 0.9);
    const auto once = heat_apply(dec, u, 1.3);
    for (std::size_t k = 0; k < u.size(); ++k)
        CHECK(ab[k] == doctest::Approx(once[k]).epsilon(1e-10));
}
