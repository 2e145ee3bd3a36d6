#include "fraclab/harnack.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "fraclab/errors.hpp"
#include "fraclab/geometry.hpp"

namespace fraclab {

namespace {

// splitmix64 step; decorrelates per-trial seeds derived from the report seed.
unsigned long long mix_seed(unsigned long long seed, unsigned long long k) {
    unsigned long long z = seed + (k + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::vector<double> lognormal_data(int n, unsigned long long seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    std::vector<double> d(n);
    for (double& v : d) v = std::exp(gauss(rng));
    return d;
}

struct SupInf {
    double sup = -1e300;
    double inf = 1e300;
};

SupInf sup_inf(const std::vector<double>& f, const std::vector<int>& set) {
    SupInf r;
    for (int x : set) {
        r.sup = std::max(r.sup, f[x]);
        r.inf = std::min(r.inf, f[x]);
    }
    return r;
}

}  // namespace

ExperimentReport harnack_constant(const SpectralDecomposition& dec,
                                  const FracConfig& cfg, int center, double R,
                                  double delta, int trials,
                                  unsigned long long seed) {
    require(delta > 0.0 && delta < 1.0, "BadDelta",
            "delta must lie strictly in (0,1)");
    require(trials >= 1, "BadTrialCount", "need at least one trial");
    const DirichletSpace& space = *dec.space;
    const int n = space.size();
    const std::vector<int> ball = ball_members(space, center, R);
    const std::vector<int> probe = ball_members(space, center, delta * R);
    require(static_cast<int>(ball.size()) < n, "EmptyBall",
            "ball must not cover the whole space");
    const NonlocalOperator op(dec, cfg, ball);

    std::vector<char> inside(n, 0);
    for (int x : ball) inside[x] = 1;

    ExperimentReport rep;
    rep.kind = "harnack";
    rep.config["center"] = center;
    rep.config["R"] = R;
    rep.config["delta"] = delta;
    rep.config["trials"] = trials;
    rep.config["seed"] = static_cast<double>(seed);
    rep.config["s"] = cfg.s;
    rep.columns = {"trial", "sup", "inf", "ratio"};

    double C = 0.0;
    int violations = 0;
    double scale_dev = 0.0;
    for (int t = 0; t < trials; ++t) {
        std::vector<double> data = lognormal_data(n, mix_seed(seed, t));
        for (int x : ball) data[x] = 0.0;  // interior values are unknowns
        const auto f = op.solve(data);

        double ext_min = 1e300, ext_max = -1e300;
        for (int x = 0; x < n; ++x)
            if (!inside[x]) {
                ext_min = std::min(ext_min, f[x]);
                ext_max = std::max(ext_max, f[x]);
            }
        const double slack = 1e-12 * std::max(1.0, std::abs(ext_max));
        for (int x : ball)
            if (f[x] < ext_min - slack || f[x] > ext_max + slack) {
                ++violations;
                break;
            }

        const SupInf si = sup_inf(f, probe);
        require(si.inf > 0.0, "DegenerateProbe",
                "solution not positive on the probe ball");
        const double ratio = si.sup / si.inf;
        C = std::max(C, ratio);
        rep.trials.push_back({static_cast<double>(t), si.sup, si.inf, ratio});

        if (t == 0) {
            // Linearity: rescaling the data must leave the ratio unchanged.
            std::vector<double> scaled(f.size());
            for (int x = 0; x < n; ++x) scaled[x] = 3.7 * (inside[x] ? 0.0 : f[x]);
            const auto f2 = op.solve(scaled);
            const SupInf si2 = sup_inf(f2, probe);
            scale_dev = std::abs(si2.sup / si2.inf - ratio) / ratio;
        }
    }
    rep.constants["C"] = C;
    rep.constants["violations"] = violations;
    rep.constants["scale_dev"] = scale_dev;
    return rep;
}

ExperimentReport even_extension_check(const ExtensionField& field,
                                      const std::vector<int>& interior) {
    const DirichletSpace& base = *field.space;
    const int n = base.size();
    require(!interior.empty(), "SupportViolation", "empty interior set");
    for (int x : interior)
        require(x >= 0 && x < n, "SupportViolation",
                "interior vertex out of range");

    // Assemble the mirrored product form directly from the mesh arrays;
    // at fine meshes the explicit product graph (dense metric included)
    // would dwarf the computation.  Level indexing: j = 0..2N with y = 0 at
    // j = N; masses mirror evenly (the origin cell is the union of its two
    // half cells) and the face coefficients mirror likewise, exactly as in
    // build_product_space.
    const YMesh& hm = field.mesh;
    const int N = hm.segments();
    const int ny = 2 * N + 1;
    std::vector<double> mass(ny), beta(2 * N);
    for (int j = 0; j <= N; ++j) {
        const double m = (j == 0) ? 2.0 * hm.mass[0] : hm.mass[j];
        mass[N + j] = m;
        mass[N - j] = m;
    }
    for (int j = 0; j < N; ++j) {
        beta[N + j] = hm.beta[j];
        beta[N - 1 - j] = hm.beta[j];
    }
    const auto level = [&](int j) { return std::abs(j - N); };
    const auto ut = [&](int x, int j) { return field.at(x, level(j)); };

    double energy = 0.0;
    for (int j = 0; j < ny; ++j) {
        double lvl = 0.0;
        for (const auto& e : base.edges()) {
            const double du = ut(e.u, j) - ut(e.v, j);
            lvl += e.w * du * du;
        }
        energy += mass[j] * lvl;
    }
    for (int x = 0; x < n; ++x) {
        double line = 0.0;
        for (int j = 0; j + 1 < ny; ++j) {
            const double du = ut(x, j + 1) - ut(x, j);
            line += beta[j] * du * du;
        }
        energy += base.mu(x) * line;
    }
    require(energy > 0.0, "SupportViolation",
            "mirrored field carries no energy");
    const double inv_unorm = 1.0 / std::sqrt(energy);

    ExperimentReport rep;
    rep.kind = "even_extension";
    rep.config["N"] = N;
    rep.config["s"] = field.s;
    rep.config["Y"] = hm.y.back();
    rep.columns = {"x", "level", "residual"};

    // E_a(U~, hat at (x, j)) for all interior hats.
    const auto residual = [&](int x, int j, double* diag_out) {
        double r = 0.0, diag = 0.0;
        for (auto [x2, w] : base.neighbors(x)) {
            r += mass[j] * w * (ut(x, j) - ut(x2, j));
            diag += mass[j] * w;
        }
        const double mu = base.mu(x);
        r += mu * beta[j - 1] * (ut(x, j) - ut(x, j - 1));
        r += mu * beta[j] * (ut(x, j) - ut(x, j + 1));
        diag += mu * (beta[j - 1] + beta[j]);
        if (diag_out) *diag_out = diag;
        return r;
    };

    double worst = 0.0, antisym = 0.0;
    for (int x : interior)
        for (int j = 1; j < ny - 1; ++j) {
            double diag = 0.0;
            const double r = residual(x, j, &diag);
            const double norm = std::abs(r) * inv_unorm / std::sqrt(diag);
            if (norm > worst) worst = norm;
            rep.trials.push_back({static_cast<double>(x),
                                  static_cast<double>(j - N), norm});
        }
    // Antisymmetric pairs h(x, y) = hat(x, y) - hat(x, -y) test the exact
    // reflection symmetry of the assembly.
    for (int x : interior)
        for (int j = 1; j < N; ++j)
            antisym = std::max(antisym,
                               std::abs(residual(x, N + j, nullptr) -
                                        residual(x, N - j, nullptr)) *
                                   inv_unorm);
    rep.constants["residual"] = worst;
    rep.constants["antisym"] = antisym;
    return rep;
}

ExperimentReport intrinsic_metric_bounds(
    const ProductSpace& ps, const std::vector<std::pair<int, int>>& pairs) {
    require(!pairs.empty(), "EmptyBall", "no vertex pairs given");
    const DirichletSpace& prod = *ps.product;
    const DirichletSpace& base = *ps.base;
    const int n = base.size();
    const int ny = ps.ny();
    const int np = prod.size();

    // Feasibility rescale: largest alpha with Gamma(alpha F, alpha F) <= mu,
    // i.e. alpha = 1 / sup sqrt(dGamma/dmu).
    const auto feasible_value = [&](const std::vector<double>& F, int z,
                                    int w) -> double {
        const auto gam = prod.energy_measure(F, F);
        double peak = 0.0;
        for (double g : gam) peak = std::max(peak, g);
        if (peak <= 0.0) return 0.0;
        const double alpha = 1.0 / std::sqrt(peak);
        for (double g : gam)
            require(alpha * alpha * g <= 1.0 + 1e-12, "InfeasibleCompetitor",
                    "competitor rescale failed feasibility");
        return alpha * std::abs(F[z] - F[w]);
    };

    ExperimentReport rep;
    rep.kind = "intrinsic_metric";
    rep.config["pairs"] = static_cast<double>(pairs.size());
    rep.config["s"] = ps.s;
    rep.columns = {"z", "w", "lower", "upper", "ratio"};

    double sandwich = 0.0;
    for (auto [z, w] : pairs) {
        require(z >= 0 && z < np && w >= 0 && w < np && z != w,
                "UnknownVertex", "pair indices must be distinct product vertices");
        const int zx = z / ny, wx = w / ny;

        std::vector<std::vector<double>> candidates;
        // f = base distance to either endpoint's base vertex, lifted.
        for (int anchor : {zx, wx}) {
            std::vector<double> F(np);
            for (int x = 0; x < n; ++x)
                for (int j = 0; j < ny; ++j)
                    F[ps.index(x, j)] = base.metric(anchor, x);
            candidates.push_back(F);
            // The Lemma's competitors (f(x) +- y) / 2.
            for (double sgn : {1.0, -1.0}) {
                std::vector<double> G(np);
                for (int x = 0; x < n; ++x)
                    for (int j = 0; j < ny; ++j)
                        G[ps.index(x, j)] =
                            0.5 * (base.metric(anchor, x) + sgn * ps.y[j]);
                candidates.push_back(std::move(G));
            }
        }
        {
            std::vector<double> F(np);
            for (int x = 0; x < n; ++x)
                for (int j = 0; j < ny; ++j) F[ps.index(x, j)] = ps.y[j];
            candidates.push_back(std::move(F));
        }

        double lower = 0.0;
        for (const auto& F : candidates)
            lower = std::max(lower, feasible_value(F, z, w));
        require(lower > 0.0, "InfeasibleCompetitor",
                "no competitor separates the pair");
        const double upper = prod.metric(z, w);
        const double ratio = upper / lower;
        sandwich = std::max(sandwich, ratio);
        rep.trials.push_back({static_cast<double>(z), static_cast<double>(w),
                              lower, upper, ratio});
    }
    rep.constants["sandwich"] = sandwich;
    return rep;
}

std::vector<int> grid_square_domain(int nx, int ny, int inner) {
    require(inner >= 1 && inner <= nx && inner <= ny, "BadDomain",
            "inner square does not fit the grid");
    const int ox = (nx - inner) / 2, oy = (ny - inner) / 2;
    std::vector<int> dom;
    for (int i = ox; i < ox + inner; ++i)
        for (int j = oy; j < oy + inner; ++j) dom.push_back(i * ny + j);
    return dom;
}

std::vector<int> grid_lshape_domain(int nx, int ny, int inner) {
    require(inner >= 2 && inner <= nx && inner <= ny, "BadDomain",
            "inner square does not fit the grid");
    const int ox = (nx - inner) / 2, oy = (ny - inner) / 2;
    const int half = inner / 2;
    std::vector<int> dom;
    for (int i = ox; i < ox + inner; ++i)
        for (int j = oy; j < oy + inner; ++j) {
            if (i >= ox + half && j >= oy + half) continue;
            dom.push_back(i * ny + j);
        }
    return dom;
}

ExperimentReport boundary_harnack_experiment(const SpectralDecomposition& dec,
                                             const FracConfig& cfg,
                                             const std::vector<int>& domain,
                                             int xi, double r, int trials,
                                             unsigned long long seed,
                                             double collar_factor) {
    require(trials >= 2, "BadTrialCount", "need at least two trials to pair");
    require(r > 0.0 && collar_factor > 1.0, "BadDomain",
            "probe radius and collar factor must be positive");
    const DirichletSpace& space = *dec.space;
    const int n = space.size();
    std::vector<char> in_domain(n, 0);
    for (int x : domain) {
        require(x >= 0 && x < n, "UnknownVertex", "domain vertex out of range");
        in_domain[x] = 1;
    }
    require(in_domain[xi], "UnknownVertex", "xi must belong to the domain");

    std::vector<int> collar, probe;
    for (int x : ball_members(space, xi, collar_factor * r))
        if (in_domain[x]) collar.push_back(x);
    for (int x : ball_members(space, xi, r))
        if (in_domain[x]) probe.push_back(x);
    require(!probe.empty(), "DegenerateProbe", "probe ball misses the domain");
    require(static_cast<int>(collar.size()) <
                static_cast<int>(domain.size()),
            "BadDomain", "collar swallows the whole domain");

    const NonlocalOperator op(dec, cfg, collar);
    std::vector<char> in_collar(n, 0);
    for (int x : collar) in_collar[x] = 1;

    // Zero data off Omega (the boundary portion), random positive data on
    // the rest of Omega.
    std::vector<std::vector<double>> probe_values;
    for (int t = 0; t < trials; ++t) {
        std::vector<double> data(n, 0.0);
        std::mt19937_64 rng(mix_seed(seed, t));
        std::normal_distribution<double> gauss;
        for (int x = 0; x < n; ++x)
            if (in_domain[x] && !in_collar[x]) data[x] = std::exp(gauss(rng));
        const auto f = op.solve(data);
        std::vector<double> pv;
        for (int x : probe) {
            require(f[x] > 0.0, "DegenerateProbe",
                    "solution vanishes on the probe ball");
            pv.push_back(f[x]);
        }
        probe_values.push_back(std::move(pv));
    }

    ExperimentReport rep;
    rep.kind = "boundary_harnack";
    rep.config["xi"] = xi;
    rep.config["r"] = r;
    rep.config["collar_factor"] = collar_factor;
    rep.config["trials"] = trials;
    rep.config["seed"] = static_cast<double>(seed);
    rep.config["s"] = cfg.s;
    rep.config["domain_size"] = static_cast<double>(domain.size());
    rep.config["collar_size"] = static_cast<double>(collar.size());
    rep.config["probe_size"] = static_cast<double>(probe.size());
    rep.columns = {"trial_u", "trial_v", "ratio"};

    const int m = static_cast<int>(probe.size());
    double C = 0.0;
    for (int a = 0; a < trials; ++a)
        for (int b = a + 1; b < trials; ++b) {
            double best = 0.0;
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) {
                    const double ratio = (probe_values[a][i] *
                                          probe_values[b][j]) /
                                         (probe_values[a][j] *
                                          probe_values[b][i]);
                    best = std::max(best, ratio);
                }
            C = std::max(C, best);
            rep.trials.push_back({static_cast<double>(a),
                                  static_cast<double>(b), best});
        }
    rep.constants["C"] = C;
    return rep;
}

}  // namespace fraclab
