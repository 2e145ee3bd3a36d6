#include "fraclab/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <memory>
#include <random>

#include "fraclab/errors.hpp"
#include "fraclab/extension.hpp"
#include "fraclab/fractional.hpp"
#include "fraclab/geometry.hpp"
#include "fraclab/harnack.hpp"
#include "fraclab/krein.hpp"
#include "fraclab/lattice.hpp"
#include "fraclab/nonlocal.hpp"
#include "fraclab/product_space.hpp"
#include "fraclab/spectral.hpp"

namespace fraclab {

namespace {

std::string fmt(const char* pattern, ...) {
    char buf[512];
    va_list args;
    va_start(args, pattern);
    std::vsnprintf(buf, sizeof buf, pattern, args);
    va_end(args);
    return buf;
}

double sup_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double rel_sup_err(const std::vector<double>& a, const std::vector<double>& b) {
    double dev = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        dev = std::max(dev, std::abs(a[k] - b[k]));
    return dev / std::max(sup_abs(b), 1e-300);
}

std::vector<double> random_gaussian(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    std::vector<double> v(n);
    for (double& x : v) x = gauss(rng);
    return v;
}

std::vector<double> log_grid(double lo, double hi, int count) {
    std::vector<double> g(count);
    for (int i = 0; i < count; ++i)
        g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1));
    return g;
}

// Least-squares slope and intercept of log(y) against log(x).
std::pair<double, double> loglog_fit(const std::vector<double>& x,
                                     const std::vector<double>& y) {
    const int n = static_cast<int>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return {slope, (sy - slope * sx) / n};
}

SpectralDecomposition grid_product_dec(int n) {
    auto path = std::make_shared<DirichletSpace>(make_path(n));
    const auto dp = spectral_decompose(path);
    auto grid = std::make_shared<DirichletSpace>(make_grid(n, n));
    return spectral_decompose_product(dp, dp, grid);
}

struct Fixture {
    std::string name;
    std::shared_ptr<const DirichletSpace> space;
};

std::vector<Fixture> standard_fixtures() {
    return {{"ring10", std::make_shared<DirichletSpace>(make_ring(10))},
            {"path32", std::make_shared<DirichletSpace>(make_path(32))},
            {"grid8", std::make_shared<DirichletSpace>(make_grid(8, 8))}};
}

// ---------------------------------------------------------------- criterion 1

CriterionResult c1_four_routes(const AcceptanceOptions& opt) {
    CriterionResult res{1, "four-route agreement"};
    const double tol_quad = 1e-6 * opt.tolerance_scale;
    const double tol_pde = 1e-3 * opt.tolerance_scale;
    const double tol_dtn = 1e-4 * opt.tolerance_scale;

    double worst_sub = 0, worst_ker = 0, worst_pde = 0, worst_dtn = 0;
    for (const auto& [name, sp] : standard_fixtures()) {
        const auto dec = spectral_decompose(sp);
        for (double s : {0.25, 0.5, 0.75}) {
            FracConfig cfg;
            cfg.s = s;
            const auto kernel = build_jump_kernel(dec, cfg);
            const YMesh mesh = build_graded_mesh(
                default_extension_height(dec), 256, -1.0, cfg.a());
            std::mt19937_64 rng(opt.seed + sp->size() * 1000 +
                                static_cast<int>(100 * s));
            for (int t = 0; t < 20; ++t) {
                const auto f = random_gaussian(sp->size(), rng);
                const auto ref = frac_spectral(dec, s, f);
                worst_sub = std::max(
                    worst_sub, rel_sup_err(frac_subordination(dec, cfg, f), ref));
                worst_ker = std::max(
                    worst_ker, rel_sup_err(frac_kernel_apply(kernel, f), ref));
                const auto field = solve_extension_pde(sp, f, s, mesh);
                worst_pde = std::max(
                    worst_pde, rel_sup_err(neumann_trace(field, s), ref));
                worst_dtn = std::max(
                    worst_dtn, rel_sup_err(dtn_semi_analytic(dec, cfg, f), ref));
            }
        }
    }
    res.passed = worst_sub <= tol_quad && worst_ker <= tol_quad &&
                 worst_pde <= tol_pde && worst_dtn <= tol_dtn;
    res.detail = fmt("subord %.2e<=%.0e kernel %.2e<=%.0e pde %.2e<=%.0e "
                     "dtn %.2e<=%.0e",
                     worst_sub, tol_quad, worst_ker, tol_quad, worst_pde,
                     tol_pde, worst_dtn, tol_dtn);
    return res;
}

// ---------------------------------------------------------------- criterion 2

CriterionResult c2_dtn_constant(const AcceptanceOptions& opt) {
    CriterionResult res{2, "dtn constant at s=1/2"};
    const double tol = 1e-6 * opt.tolerance_scale;
    FracConfig cfg;
    cfg.s = 0.5;

    double worst_route = 0, worst_const = 0;
    for (const auto& [name, sp] : standard_fixtures()) {
        const auto dec = spectral_decompose(sp);
        std::mt19937_64 rng(opt.seed + 17 * sp->size());
        for (int t = 0; t < 10; ++t) {
            const auto f = random_gaussian(sp->size(), rng);
            const auto ref = frac_spectral(dec, 0.5, f);  // (-L)^{1/2} f
            // Unweighted one-sided normal derivative of the modal extension:
            // D(h) = (-3f + 4u(h) - u(2h)) / (2h) = u_y(0) + O(h^2), once
            // Richardson-combined (4 D(h) - D(2h)) / 3 to keep both the
            // truncation and the h-amplified evaluation noise small; the
            // identity says u_y(x, 0) = -(-L)^{1/2} f, constant exactly 1.
            const double h = 2e-3;
            const auto u = poisson_extend(dec, cfg, f, {h, 2 * h, 4 * h});
            std::vector<double> deriv(sp->size());
            for (int x = 0; x < sp->size(); ++x) {
                const double d1 =
                    (-3.0 * f[x] + 4.0 * u[0][x] - u[1][x]) / (2.0 * h);
                const double d2 =
                    (-3.0 * f[x] + 4.0 * u[1][x] - u[2][x]) / (4.0 * h);
                deriv[x] = (4.0 * d1 - d2) / 3.0;
            }
            std::vector<double> neg(deriv.size());
            for (std::size_t k = 0; k < deriv.size(); ++k) neg[k] = -deriv[k];
            worst_route = std::max(worst_route, rel_sup_err(neg, ref));
            // The proportionality constant via least squares.
            double num = 0, den = 0;
            for (int x = 0; x < sp->size(); ++x) {
                num += neg[x] * ref[x];
                den += ref[x] * ref[x];
            }
            worst_const = std::max(worst_const, std::abs(num / den - 1.0));
        }
    }
    res.passed = worst_route <= tol && worst_const <= tol;
    res.detail = fmt("route dev %.2e const dev %.2e <= %.0e", worst_route,
                     worst_const, tol);
    return res;
}

// ---------------------------------------------------------------- criterion 3

CriterionResult c3_krein_closed_form(const AcceptanceOptions& opt) {
    CriterionResult res{3, "krein closed form"};
    const double tol = 1e-7 * opt.tolerance_scale;

    const auto grid = log_grid(1e-2, 1e2, 25);
    const auto table = bernstein_from_string(constant_string(1.0), grid);
    double worst = 0;
    for (std::size_t k = 0; k < grid.size(); ++k)
        worst = std::max(worst, std::abs(table.psi[k] - std::sqrt(grid[k])) /
                                    std::sqrt(grid[k]));

    int bernstein_ok = 0, bernstein_total = 0;
    const auto check = [&](const KreinString& str) {
        ++bernstein_total;
        try {
            check_bernstein(bernstein_from_string(str, log_grid(1e-2, 1e2, 20)));
            ++bernstein_ok;
        } catch (const Error&) {
        }
    };
    check(constant_string(1.0));
    check(powerlaw_string(1.0, -0.5));
    std::mt19937_64 rng(opt.seed + 3);
    std::uniform_real_distribution<double> uz(0.05, 5.0);
    std::normal_distribution<double> gauss;
    for (int t = 0; t < 5; ++t) {
        std::vector<double> z(12), A(12);
        for (double& v : z) v = uz(rng);
        std::sort(z.begin(), z.end());
        for (double& v : A) v = std::exp(gauss(rng));
        check(sampled_string(z, A));
    }

    res.passed = worst <= tol && bernstein_ok == bernstein_total;
    res.detail = fmt("sqrt dev %.2e <= %.0e, bernstein %d/%d", worst, tol,
                     bernstein_ok, bernstein_total);
    return res;
}

// ---------------------------------------------------------------- criterion 4

CriterionResult c4_weight_string_loop(const AcceptanceOptions& opt) {
    CriterionResult res{4, "weight-string loop"};
    const double tol = 1e-3 * opt.tolerance_scale;

    double worst_exp = 0, worst_c = 0;
    for (double s : {0.3, 0.5, 0.7}) {
        WeightFunction weight;
        weight.kind = WeightFunction::Kind::Power;
        weight.c = 1.0;
        weight.p = 1.0 - 2.0 * s;
        const KreinString str = string_from_weight(weight, 10.0);
        const auto grid = log_grid(1e-2, 1e2, 25);
        const auto table = bernstein_from_string(str, grid);
        const auto [slope, intercept] = loglog_fit(grid, table.psi);
        const double c_target = std::pow(2.0, 1.0 - 2.0 * s) *
                                std::tgamma(1.0 - s) / std::tgamma(s);
        worst_exp = std::max(worst_exp, std::abs(slope - s));
        worst_c = std::max(worst_c,
                           std::abs(std::exp(intercept) - c_target) / c_target);
    }
    res.passed = worst_exp <= tol && worst_c <= tol;
    res.detail = fmt("exponent dev %.2e prefactor dev %.2e <= %.0e", worst_exp,
                     worst_c, tol);
    return res;
}

// ---------------------------------------------------------------- criterion 5

CriterionResult c5_kernel_decay(const AcceptanceOptions&) {
    CriterionResult res{5, "kernel decay"};
    double worst_ring = 0, worst_torus = 0;
    for (double s : {0.25, 0.5}) {
        FracConfig cfg;
        cfg.s = s;
        const auto ring = kernel_decay_profile_ring(512, cfg);
        const auto torus = kernel_decay_profile_torus(64, 64, cfg);
        worst_ring = std::max(worst_ring, std::abs(ring.slope - ring.target));
        worst_torus =
            std::max(worst_torus, std::abs(torus.slope - torus.target));
    }
    res.passed = worst_ring <= 0.3 && worst_torus <= 0.45;
    res.detail = fmt("ring dev %.3f<=0.3 torus dev %.3f<=0.45", worst_ring,
                     worst_torus);
    return res;
}

// ---------------------------------------------------------------- criterion 6

CriterionResult c6_product_geometry(const AcceptanceOptions& opt) {
    CriterionResult res{6, "product geometry"};
    const double tol_eq13 = 1e-12 * opt.tolerance_scale;

    double worst_ratio = 0, worst_eq13 = 0;
    for (int n : {16, 32, 64}) {
        auto base = std::make_shared<DirichletSpace>(make_ring(n));
        const double r = std::max(2.0, n / 16.0);
        const BallFamily base_family = make_ball_family(
            *base, {{0, r}, {n / 3, r}, {(2 * n) / 3, r}});
        const double base_doubling =
            doubling_constant(*base, base_family).constant();
        const double base_poincare =
            poincare_constant(*base, base_family, 2.0, 6, 20, opt.seed)
                .constant();
        for (double a : {-0.5, 0.0, 0.5}) {
            const double s = (1.0 - a) / 2.0;
            const ProductSpace ps = build_product_space(base, s, 4.0, 8);
            const int N = 8;
            const BallFamily prod_family = make_ball_family(
                *ps.product, {{ps.index(0, N), r},
                              {ps.index(n / 3, N), r},
                              {ps.index((2 * n) / 3, N), r}});
            const double prod_doubling =
                doubling_constant(*ps.product, prod_family).constant();
            const double prod_poincare =
                poincare_constant(*ps.product, prod_family, 2.0, 6, 20,
                                  opt.seed)
                    .constant();
            worst_ratio = std::max(
                {worst_ratio, prod_doubling / base_doubling,
                 base_doubling / prod_doubling, prod_poincare / base_poincare,
                 base_poincare / prod_poincare});

            std::mt19937_64 rng(opt.seed + n * 10 + static_cast<int>(2 * a));
            for (int t = 0; t < 100; ++t) {
                const auto u = random_gaussian(ps.product->size(), rng);
                const auto parts = product_energy_parts(ps, u, u);
                const double full = ps.product->dirichlet_form(u, u);
                worst_eq13 = std::max(
                    worst_eq13, std::abs(parts.horizontal + parts.vertical -
                                         full) /
                                    std::max(1.0, std::abs(full)));
            }
        }
    }
    res.passed = worst_ratio <= 4.0 && worst_eq13 <= tol_eq13;
    res.detail = fmt("constant ratio %.3f<=4, eq13 dev %.2e<=%.0e", worst_ratio,
                     worst_eq13, tol_eq13);
    return res;
}

// ---------------------------------------------------------------- criterion 7

CriterionResult c7_even_extension(const AcceptanceOptions& opt) {
    CriterionResult res{7, "even extension"};
    const double tol_final = 1e-6 * opt.tolerance_scale;

    auto sp = std::make_shared<DirichletSpace>(make_ring(32));
    const auto dec = spectral_decompose(sp);
    double worst_ratio = 0, worst_final = 0;
    for (double s : {0.25, 0.5, 0.75}) {
        FracConfig cfg;
        cfg.s = s;
        const auto ball = ball_members(*sp, 0, 4.0);
        std::mt19937_64 rng(opt.seed + static_cast<int>(100 * s));
        std::normal_distribution<double> gauss;
        std::vector<double> data(sp->size());
        for (double& v : data) v = std::exp(gauss(rng));
        const auto f = nonlocal_dirichlet_solve(dec, cfg, ball, data);

        double prev = 0;
        double final_residual = 0;
        for (int N : {32, 64, 128, 256}) {
            const YMesh mesh = build_graded_mesh(
                default_extension_height(dec), N, -1.0, cfg.a());
            const auto field = solve_extension_pde(sp, f, s, mesh);
            const double residual =
                even_extension_check(field, ball).constant("residual");
            if (prev > 0)
                worst_ratio = std::max(worst_ratio, residual / prev);
            prev = residual;
            final_residual = residual;
        }
        worst_final = std::max(worst_final, final_residual);
    }
    res.passed = worst_ratio <= 0.6 && worst_final <= tol_final;
    res.detail = fmt("doubling ratio %.3f<=0.6, residual(N=256) %.2e<=%.0e",
                     worst_ratio, worst_final, tol_final);
    return res;
}

// ---------------------------------------------------------------- criterion 8

CriterionResult c8_harnack(const AcceptanceOptions& opt) {
    CriterionResult res{8, "harnack"};
    const double tol_scale = 1e-12 * opt.tolerance_scale;
    FracConfig cfg;
    cfg.s = 0.5;

    struct Case {
        SpectralDecomposition dec;
        int center;
        double R;
        SpectralDecomposition refined;
        int refined_center;
        double refined_R;
    };
    auto ring64 = std::make_shared<DirichletSpace>(make_ring(64));
    auto ring128 = std::make_shared<DirichletSpace>(make_ring(128));
    auto grid16 = std::make_shared<DirichletSpace>(make_grid(16, 16));
    std::vector<Case> cases;
    cases.push_back({spectral_decompose(ring64), 0, 8.0,
                     spectral_decompose(ring128), 0, 16.0});
    cases.push_back({spectral_decompose(grid16), 8 * 16 + 8, 4.0,
                     grid_product_dec(32), 16 * 32 + 16, 8.0});

    int solves = 0, violations = 0;
    double worst_scale = 0, worst_stability = 0;
    bool monotone = true;
    for (const auto& c : cases) {
        const auto rep =
            harnack_constant(c.dec, cfg, c.center, c.R, 0.5, 200, opt.seed);
        const auto rep_small =
            harnack_constant(c.dec, cfg, c.center, c.R, 0.25, 200, opt.seed);
        const auto rep_ref = harnack_constant(c.refined, cfg, c.refined_center,
                                              c.refined_R, 0.5, 50, opt.seed);
        solves += 450;
        violations += static_cast<int>(rep.constant("violations") +
                                       rep_small.constant("violations") +
                                       rep_ref.constant("violations"));
        worst_scale = std::max(worst_scale, rep.constant("scale_dev"));
        monotone = monotone && rep_small.constant() <= rep.constant() + 1e-15;
        worst_stability = std::max(
            {worst_stability, rep_ref.constant() / rep.constant(),
             rep.constant() / rep_ref.constant()});
    }
    res.passed = violations == 0 && solves >= 400 && monotone &&
                 worst_scale <= tol_scale && worst_stability <= 2.0;
    res.detail = fmt("%d solves, %d violations, scale dev %.2e<=%.0e, "
                     "monotone %s, refinement ratio %.3f<=2",
                     solves, violations, worst_scale, tol_scale,
                     monotone ? "yes" : "no", worst_stability);
    return res;
}

// ---------------------------------------------------------------- criterion 9

CriterionResult c9_boundary_harnack(const AcceptanceOptions& opt) {
    CriterionResult res{9, "boundary harnack"};
    FracConfig cfg;
    cfg.s = 0.5;

    const auto dec24 = grid_product_dec(24);
    const auto rep = boundary_harnack_experiment(
        dec24, cfg, grid_square_domain(24, 24, 16), 4 * 24 + 4, 3.0, 50,
        opt.seed);
    const auto dec48 = grid_product_dec(48);
    const auto rep_ref = boundary_harnack_experiment(
        dec48, cfg, grid_square_domain(48, 48, 32), 8 * 48 + 8, 6.0, 16,
        opt.seed);
    const double stability = std::max(rep_ref.constant() / rep.constant(),
                                      rep.constant() / rep_ref.constant());

    // Lemma-backed sandwich on the intrinsic metric of a product space.
    auto grid8 = std::make_shared<DirichletSpace>(make_grid(8, 8));
    const ProductSpace ps = build_product_space(grid8, 0.5, 3.0, 10);
    std::mt19937_64 rng(opt.seed + 9);
    std::uniform_int_distribution<int> pick(0, ps.product->size() - 1);
    std::vector<std::pair<int, int>> pairs;
    while (pairs.size() < 20) {
        const int z = pick(rng), w = pick(rng);
        if (z != w) pairs.emplace_back(z, w);
    }
    const double sandwich =
        intrinsic_metric_bounds(ps, pairs).constant("sandwich");

    res.passed = std::isfinite(rep.constant()) && stability <= 2.0 &&
                 sandwich <= 4.0;
    res.detail = fmt("C_emp %.4f, refinement ratio %.3f<=2, sandwich "
                     "%.3f<=4",
                     rep.constant(), stability, sandwich);
    return res;
}

// --------------------------------------------------------------- criterion 10

CriterionResult c10_semigroup_axioms(const AcceptanceOptions& opt) {
    CriterionResult res{10, "semigroup and form axioms"};
    const double tol_cons = 1e-12 * opt.tolerance_scale;
    const double tol_comp = 1e-10 * opt.tolerance_scale;

    double worst_cons = 0, worst_pos = 0, worst_comp = 0, worst_contr = 0,
           worst_markov = 0;
    for (const auto& [name, sp] : standard_fixtures()) {
        const auto dec = spectral_decompose(sp);
        const int n = sp->size();
        std::mt19937_64 rng(opt.seed + 10 * n);

        const std::vector<double> ones(n, 1.0);
        for (double t : {0.1, 1.0, 10.0}) {
            const auto pt1 = heat_apply(dec, ones, t);
            for (double v : pt1)
                worst_cons = std::max(worst_cons, std::abs(v - 1.0));
        }
        for (int t = 0; t < 20; ++t) {
            const auto u = random_gaussian(n, rng);
            const auto pu = heat_apply(dec, u, 0.7);
            worst_contr = std::max(
                worst_contr, std::sqrt(sp->inner(pu, pu)) /
                                     std::sqrt(sp->inner(u, u)) -
                                 1.0);
            std::vector<double> up(n);
            for (int x = 0; x < n; ++x) up[x] = std::abs(u[x]);
            const auto pup = heat_apply(dec, up, 0.7);
            for (double v : pup)
                worst_pos = std::max(worst_pos, -v / sup_abs(up));
            const auto two_step = heat_apply(dec, heat_apply(dec, u, 0.3), 0.4);
            worst_comp = std::max(worst_comp, rel_sup_err(two_step, pu));
        }
        for (int t = 0; t < 100; ++t) {
            const auto u = random_gaussian(n, rng);
            std::vector<double> v(n);
            for (int x = 0; x < n; ++x) v[x] = std::clamp(u[x], 0.0, 1.0);
            const double eu = sp->dirichlet_form(u, u);
            const double ev = sp->dirichlet_form(v, v);
            worst_markov = std::max(worst_markov, (ev - eu) / std::max(eu, 1e-300));
        }
    }
    res.passed = worst_cons <= tol_cons && worst_contr <= tol_cons &&
                 worst_pos <= tol_cons && worst_comp <= tol_comp &&
                 worst_markov <= 0.0;
    res.detail = fmt("P_t1 %.2e contraction %.2e positivity %.2e <= %.0e, "
                     "composition %.2e<=%.0e, markov slack %.2e<=0",
                     worst_cons, worst_contr, worst_pos, tol_cons, worst_comp,
                     tol_comp, worst_markov);
    return res;
}

}  // namespace

CriterionResult run_criterion(int id, const AcceptanceOptions& opt) {
    const auto start = std::chrono::steady_clock::now();
    CriterionResult res;
    switch (id) {
        case 1: res = c1_four_routes(opt); break;
        case 2: res = c2_dtn_constant(opt); break;
        case 3: res = c3_krein_closed_form(opt); break;
        case 4: res = c4_weight_string_loop(opt); break;
        case 5: res = c5_kernel_decay(opt); break;
        case 6: res = c6_product_geometry(opt); break;
        case 7: res = c7_even_extension(opt); break;
        case 8: res = c8_harnack(opt); break;
        case 9: res = c9_boundary_harnack(opt); break;
        case 10: res = c10_semigroup_axioms(opt); break;
        default: fail("BadCriterion", "criterion id must be 1..10");
    }
    res.seconds = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    return res;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt) {
    std::vector<CriterionResult> all;
    for (int id = 1; id <= kCriteria; ++id) all.push_back(run_criterion(id, opt));
    return all;
}

}  // namespace fraclab
