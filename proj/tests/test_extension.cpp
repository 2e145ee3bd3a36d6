#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fraclab/errors.hpp"
#include "fraclab/extension.hpp"

using namespace fraclab;

namespace {

std::vector<double> random_vec(int n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    std::vector<double> v(n);
    for (double& x : v) x = gauss(rng);
    return v;
}

double max_dev(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        d = std::max(d, std::abs(a[k] - b[k]));
    return d;
}

}  // namespace

TEST_CASE("graded mesh has exact-integral masses and faces") {
    const double s = 0.3, a = 1.0 - 2.0 * s, Y = 2.5;
    const int N = 16;
    const auto mesh = build_graded_mesh(Y, N, 0.0, a);
    CHECK(mesh.y.front() == 0.0);
    CHECK(mesh.y.back() == doctest::Approx(Y));
    CHECK(static_cast<int>(mesh.y.size()) == N + 1);
    CHECK(mesh.segments() == N);
    CHECK(mesh.gamma == doctest::Approx(3.0));  // default max(3, 1/(2s))

    // Total mass equals int_0^Y y^a dy = Y^{1+a}/(1+a).
    double total = 0.0;
    for (double m : mesh.mass) total += m;
    CHECK(total == doctest::Approx(std::pow(Y, 1.0 + a) / (1.0 + a))
                       .epsilon(1e-12));

    // Interior face: beta = (int y^{-a})^{-1} over the cell.
    const double y0 = mesh.y[7], y1 = mesh.y[8];
    const double integral =
        (std::pow(y1, 1.0 - a) - std::pow(y0, 1.0 - a)) / (1.0 - a);
    CHECK(mesh.beta[7] == doctest::Approx(1.0 / integral).epsilon(1e-12));

    CHECK_THROWS_AS(build_graded_mesh(-1.0, N, 0.0, a), Error);
    CHECK_THROWS_AS(build_graded_mesh(Y, 1, 0.0, a), Error);
}

TEST_CASE("pde solve matches the semi-analytic field level by level") {
    auto sp = std::make_shared<DirichletSpace>(make_ring(10, 1.0, 0.9));
    const auto dec = spectral_decompose(sp);
    for (double s : {0.35, 0.5, 0.7}) {
        FracConfig cfg;
        cfg.s = s;
        const double Y = default_extension_height(dec);
        const auto mesh = build_graded_mesh(Y, 96, 0.0, cfg.a());
        const auto f = random_vec(sp->size(), 61);
        const auto pde = solve_extension_pde(sp, f, s, mesh, TopBC::Modal, &dec);
        const auto ana = extend_semi_analytic(dec, cfg, mesh, f);
        CHECK(pde.values.size() == ana.values.size());
        // Boundary level is the datum exactly.
        for (int x = 0; x < sp->size(); ++x)
            CHECK(pde.at(x, 0) == doctest::Approx(f[x]));
        CHECK(max_dev(pde.values, ana.values) < 6e-4);
    }
}

TEST_CASE("weak residual of the pde field is at solver tolerance") {
    auto sp = std::make_shared<DirichletSpace>(make_path(8));
    const auto dec = spectral_decompose(sp);
    const double s = 0.5;
    const auto mesh =
        build_graded_mesh(default_extension_height(dec), 48, 0.0, 0.0);
    const auto f = random_vec(sp->size(), 62);
    const auto field = solve_extension_pde(sp, f, s, mesh);
    const int n = sp->size();
    std::mt19937_64 rng(63);
    std::normal_distribution<double> gauss;
    std::vector<std::vector<double>> tests;
    for (int k = 0; k < 12; ++k) {
        std::vector<double> h(static_cast<std::size_t>(mesh.y.size()) * n, 0.0);
        for (int j = 1; j < mesh.segments(); ++j)
            for (int x = 0; x < n; ++x)
                h[static_cast<std::size_t>(j) * n + x] = gauss(rng);
        tests.push_back(std::move(h));
    }
    CHECK(weak_residual(field, tests) < 1e-7);
}

TEST_CASE("neumann trace converges to the spectral fractional power") {
    auto sp = std::make_shared<DirichletSpace>(make_ring(10));
    const auto dec = spectral_decompose(sp);
    const auto f = random_vec(sp->size(), 64);
    for (double s : {0.3, 0.5, 0.7}) {
        FracConfig cfg;
        cfg.s = s;
        const auto oracle = frac_spectral(dec, s, f);
        const double Y = default_extension_height(dec);
        const auto coarse = solve_extension_pde(
            sp, f, s, build_graded_mesh(Y, 64, 0.0, cfg.a()));
        const auto fine = solve_extension_pde(
            sp, f, s, build_graded_mesh(Y, 256, 0.0, cfg.a()));
        const double ec = max_dev(neumann_trace(coarse, s), oracle);
        const double ef = max_dev(neumann_trace(fine, s), oracle);
        CHECK(ef < 2e-3);
        CHECK(ef < 0.6 * ec);  // refinement actually helps
        // Richardson combination beats the single fine solve.
        const double er =
            max_dev(neumann_trace_richardson(sp, dec, f, s, 128), oracle);
        CHECK(er < 1e-3);
    }
}

TEST_CASE("trace of the semi-analytic field matches tightly") {
    auto sp = std::make_shared<DirichletSpace>(make_grid(3, 3));
    const auto dec = spectral_decompose(sp);
    const double s = 0.45;
    FracConfig cfg;
    cfg.s = s;
    const auto mesh = build_graded_mesh(default_extension_height(dec), 256,
                                        0.0, cfg.a());
    const auto f = random_vec(sp->size(), 65);
    const auto field = extend_semi_analytic(dec, cfg, mesh, f);
    CHECK(max_dev(neumann_trace(field, s), frac_spectral(dec, s, f)) < 5e-4);
}

TEST_CASE("extension energy is symmetric and positive") {
    auto sp = std::make_shared<DirichletSpace>(make_ring(8));
    const auto dec = spectral_decompose(sp);
    const double s = 0.5;
    const auto mesh =
        build_graded_mesh(default_extension_height(dec), 32, 0.0, 0.0);
    const auto u = random_vec(sp->size(), 66);
    const auto v = random_vec(sp->size(), 67);
    const auto U = solve_extension_pde(sp, u, s, mesh);
    const auto V = solve_extension_pde(sp, v, s, mesh);
    CHECK(extension_energy(U, V) ==
          doctest::Approx(extension_energy(V, U)).epsilon(1e-12));
    CHECK(extension_energy(U, U) > 0.0);
    // Cauchy-Schwarz.
    CHECK(extension_energy(U, V) * extension_energy(U, V) <=
          extension_energy(U, U) * extension_energy(V, V) * (1.0 + 1e-12));
}
