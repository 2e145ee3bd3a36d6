#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fraclab/errors.hpp"
#include "fraclab/fractional.hpp"
#include "fraclab/krein.hpp"

using namespace fraclab;

namespace {

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i)
        g[i] = lo * std::pow(hi / lo, n == 1 ? 0.0 : double(i) / (n - 1));
    return g;
}

}  // namespace

TEST_CASE("constant string yields psi = sqrt(lambda)") {
    const auto str = constant_string(1.0);
    for (double lam : log_grid(1e-2, 1e2, 13)) {
        const auto sol = solve_string(str, lam);
        CHECK(sol.psi == doctest::Approx(std::sqrt(lam)).epsilon(1e-9));
    }
    // Scaled constant: psi = sqrt(c lambda).
    const auto str4 = constant_string(4.0);
    CHECK(solve_string(str4, 2.0).psi ==
          doctest::Approx(std::sqrt(8.0)).epsilon(1e-9));
}

TEST_CASE("constant-string slice is the exponential profile") {
    const auto str = constant_string(1.0);
    const double lam = 3.0;
    const std::vector<double> z_eval = {0.1, 0.5, 1.0, 2.0};
    const auto sol = solve_string(str, lam, z_eval);
    CHECK(sol.R.front() == doctest::Approx(1.0));
    for (double zz : z_eval) {
        // Find the merged grid point and compare to e^{-z sqrt(lam)}.
        double got = -1.0;
        for (std::size_t k = 0; k < sol.z.size(); ++k)
            if (std::abs(sol.z[k] - zz) < 1e-12) got = sol.R[k];
        REQUIRE(got >= 0.0);
        CHECK(got == doctest::Approx(std::exp(-zz * std::sqrt(lam)))
                         .epsilon(1e-8));
    }
    for (std::size_t k = 1; k < sol.R.size(); ++k)
        CHECK(sol.R[k] <= sol.R[k - 1] + 1e-12);
}

TEST_CASE("power-law strings give fractional powers with the right constant") {
    // String A(z) = cA z^beta with beta = 2p/(1-p), p = 1-2s, produces
    // psi(lambda) = c_s lambda^s where c_s = 2^{1-2s} Gamma(1-s)/Gamma(s)
    // for the unit-prefactor weight.
    for (double s : {0.3, 0.5, 0.7}) {
        WeightFunction wt;
        wt.kind = WeightFunction::Kind::Power;
        wt.c = 1.0;
        wt.p = 1.0 - 2.0 * s;
        const auto str = string_from_weight(wt, 40.0);
        const double cs = std::pow(2.0, 1.0 - 2.0 * s) *
                          std::tgamma(1.0 - s) / std::tgamma(s);
        for (double lam : {0.5, 1.0, 4.0}) {
            const auto sol = solve_string(str, lam);
            CHECK(sol.psi ==
                  doctest::Approx(cs * std::pow(lam, s)).epsilon(1e-4));
        }
    }
}

TEST_CASE("weight to string round trip") {
    WeightFunction wt;
    wt.kind = WeightFunction::Kind::Power;
    wt.c = 1.3;
    wt.p = 0.4;
    const auto str = string_from_weight(wt, 10.0);
    CHECK(str.kind == KreinString::Kind::PowerLaw);
    CHECK(str.beta == doctest::Approx(2.0 * wt.p / (1.0 - wt.p)).epsilon(1e-12));
    const auto back = weight_from_string(str, 5.0);
    // Recovered samples should sit on the original power law.
    for (std::size_t k = 0; k < back.y.size(); k += 97) {
        if (back.y[k] <= 0.0) continue;
        CHECK(back.w[k] == doctest::Approx(wt.c * std::pow(back.y[k], wt.p))
                               .epsilon(1e-6));
    }
}

TEST_CASE("bernstein table invariants hold for varied strings") {
    const auto grid = log_grid(1e-2, 1e2, 25);
    std::mt19937_64 rng(71);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unif(0.05, 5.0);
    std::vector<KreinString> strings = {constant_string(0.7),
                                        powerlaw_string(1.0, -0.5),
                                        powerlaw_string(2.0, 1.5)};
    for (int trial = 0; trial < 3; ++trial) {
        std::vector<double> z(30), A(30);
        for (auto& v : z) v = unif(rng);
        std::sort(z.begin(), z.end());
        for (auto& v : A) v = std::exp(gauss(rng));
        strings.push_back(sampled_string(z, A));
    }
    for (const auto& str : strings) {
        const auto table = bernstein_from_string(str, grid);
        CHECK_NOTHROW(check_bernstein(table));
    }
    // A deliberately convex table must be rejected.
    BernsteinTable bad;
    bad.lambda = {1.0, 2.0, 3.0};
    bad.psi = {1.0, 2.0, 4.0};
    CHECK_THROWS_AS(check_bernstein(bad), Error);
}

TEST_CASE("g kernel sanity equals the exponential") {
    const auto str = constant_string(1.0);
    for (double zz : {0.3, 1.0, 2.5})
        for (double lam : {0.5, 2.0, 9.0})
            CHECK(g_kernel_sanity(str, zz, lam) ==
                  doctest::Approx(std::exp(-zz * std::sqrt(lam)))
                      .epsilon(1e-9));
}

TEST_CASE("general extension with the constant string is the half power") {
    auto sp = std::make_shared<DirichletSpace>(make_ring(10, 1.2, 0.7));
    const auto dec = spectral_decompose(sp);
    std::mt19937_64 rng(72);
    std::normal_distribution<double> gauss;
    std::vector<double> f(sp->size());
    for (auto& v : f) v = gauss(rng);
    const auto ext =
        general_extension(dec, f, constant_string(1.0), {0.0, 0.5, 1.0});
    const auto oracle = frac_spectral(dec, 0.5, f);
    for (int x = 0; x < sp->size(); ++x) {
        CHECK(ext.dtn[x] == doctest::Approx(oracle[x]).epsilon(1e-7));
        CHECK(ext.values[x] == doctest::Approx(f[x]));  // z = 0 level
    }
}

TEST_CASE("string validation rejects malformed inputs") {
    CHECK_THROWS_AS(constant_string(-1.0), Error);
    CHECK_THROWS_AS(powerlaw_string(1.0, -1.5), Error);
    CHECK_THROWS_AS(sampled_string({2.0, 1.0}, {1.0, 1.0}), Error);
    CHECK_THROWS_AS(sampled_string({1.0, 2.0}, {1.0, -1.0}), Error);
    CHECK_THROWS_AS(solve_string(constant_string(1.0), -2.0), Error);
}
