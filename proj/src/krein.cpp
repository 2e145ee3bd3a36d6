#include "fraclab/krein.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "fraclab/errors.hpp"

namespace fraclab {

namespace {

constexpr double kHalfPi = 1.5707963267948966;

double interp_loglinear(const std::vector<double>& zs,
                        const std::vector<double>& As, double z) {
    if (z <= zs.front()) return As.front();
    if (z >= zs.back()) return As.back();
    const auto it = std::upper_bound(zs.begin(), zs.end(), z);
    const std::size_t i = static_cast<std::size_t>(it - zs.begin()) - 1;
    const double z0 = zs[i], z1 = zs[i + 1];
    const double A0 = As[i], A1 = As[i + 1];
    const double t = (z - z0) / (z1 - z0);
    if (A0 > 0.0 && A1 > 0.0)
        return std::exp((1.0 - t) * std::log(A0) + t * std::log(A1));
    return (1.0 - t) * A0 + t * A1;
}

}  // namespace

double KreinString::at(double zz) const {
    switch (kind) {
        case Kind::Constant:
            return c;
        case Kind::PowerLaw:
            return c * std::pow(zz, beta);
        case Kind::Sampled:
            return interp_loglinear(z, A, zz);
    }
    return 0.0;
}

double KreinString::integral_from_zero(double zz) const {
    switch (kind) {
        case Kind::Constant:
            return c * zz;
        case Kind::PowerLaw:
            return c * std::pow(zz, 1.0 + beta) / (1.0 + beta);
        case Kind::Sampled:
            // Only used for the tiny closing step below the first sample.
            return A.front() * zz;
    }
    return 0.0;
}

double KreinString::z_max() const {
    return kind == Kind::Sampled ? z.back() : 0.0;
}

KreinString constant_string(double c) {
    require(c >= 0.0, "BadString", "string coefficient must be nonnegative");
    KreinString s;
    s.kind = KreinString::Kind::Constant;
    s.c = c;
    return s;
}

KreinString powerlaw_string(double c, double beta) {
    require(c >= 0.0, "BadString", "string prefactor must be nonnegative");
    require(beta > -1.0, "BadString",
            "power-law exponent must exceed -1 (local integrability)");
    KreinString s;
    s.kind = KreinString::Kind::PowerLaw;
    s.c = c;
    s.beta = beta;
    return s;
}

KreinString sampled_string(std::vector<double> z, std::vector<double> A) {
    require(z.size() == A.size() && z.size() >= 2, "BadString",
            "sampled string needs matching grids of length >= 2");
    require(z.front() > 0.0, "BadString", "sample grid must start above 0");
    for (std::size_t i = 0; i + 1 < z.size(); ++i)
        require(z[i] < z[i + 1], "BadString", "sample grid must increase");
    for (double a : A)
        require(a >= 0.0 && std::isfinite(a), "BadString",
                "string samples must be finite and nonnegative");
    KreinString s;
    s.kind = KreinString::Kind::Sampled;
    s.z = std::move(z);
    s.A = std::move(A);
    return s;
}

namespace {

double truncation_length(const KreinString& str, double lambda,
                         const StringSolveOptions& opt) {
    if (opt.z_max_override > 0.0) return opt.z_max_override;
    if (str.kind == KreinString::Kind::Sampled) return str.z.back();
    const double T = opt.decay_target;
    require(str.c > 0.0 && lambda > 0.0, "BadString",
            "degenerate string has no decay scale");
    if (str.kind == KreinString::Kind::Constant)
        return T / std::sqrt(lambda * str.c);
    // sqrt(lambda c) Z^{1 + beta/2} = T.
    return std::pow(T / std::sqrt(lambda * str.c), 1.0 / (1.0 + 0.5 * str.beta));
}

double string_slope(const KreinString& str, double zz) {
    switch (str.kind) {
        case KreinString::Kind::Constant:
            return 0.0;
        case KreinString::Kind::PowerLaw:
            return str.c * str.beta * std::pow(zz, str.beta - 1.0);
        case KreinString::Kind::Sampled: {
            const double h = 1e-4 * zz;
            return (str.at(zz) - str.at(zz - h)) / h;
        }
    }
    return 0.0;
}

}  // namespace

StringSolution solve_string(const KreinString& string, double lambda,
                            const std::vector<double>& z_eval,
                            const StringSolveOptions& opt) {
    require(lambda >= 0.0, "BadString", "lambda must be nonnegative");
    StringSolution sol;
    sol.lambda = lambda;
    if (lambda == 0.0) {
        sol.psi = 0.0;
        sol.z = {0.0};
        sol.R = {1.0};
        for (double ze : z_eval) {
            sol.z.push_back(ze);
            sol.R.push_back(1.0);
        }
        return sol;
    }

    const double Z = truncation_length(string, lambda, opt);
    const double z_cut = opt.z_cut_factor * Z;
    for (double ze : z_eval)
        require(ze >= 0.0 && ze <= Z * (1.0 + 1e-12), "TruncationTooShort",
                "evaluation point beyond the string truncation");

    // Geometric grid z_cut .. Z merged with the evaluation points.
    std::vector<double> grid;
    grid.reserve(opt.steps + z_eval.size() + 1);
    const double rho = std::pow(Z / z_cut, 1.0 / opt.steps);
    for (int k = 0; k <= opt.steps; ++k)
        grid.push_back(z_cut * std::pow(rho, k));
    grid.back() = Z;
    for (double ze : z_eval)
        if (ze > z_cut && ze < Z) grid.push_back(ze);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    const int K = static_cast<int>(grid.size()) - 1;

    // Terminal frozen-coefficient (WKB) condition at Z.
    const double AZ = string.at(Z);
    require(AZ > 0.0, "BadString", "string vanishes at the truncation end");
    double W = std::sqrt(lambda * AZ);
    // The WKB slope correction is a refinement valid only while it is a
    // small perturbation of the leading order; rough sampled strings can
    // produce arbitrarily large local slopes, where the uncorrected
    // frozen-coefficient value is the sound terminal condition.
    const double wkb = string_slope(string, Z) / (4.0 * AZ);
    if (std::abs(wkb) < 0.5 * W) W += wkb;

    std::vector<double> lnR(grid.size(), 0.0);  // relative to the top node
    std::vector<double> Wv(grid.size(), 0.0);
    Wv[K] = W;
    double R = 1.0, P = -W;
    constexpr double kGauss = 0.28867513459481287;  // sqrt(3)/6
    for (int k = K - 1; k >= 0; --k) {
        const double a = grid[k], b = grid[k + 1];
        const double h = b - a;
        const double g1 = lambda * string.at(a + h * (0.5 - kGauss));
        const double g2 = lambda * string.at(a + h * (0.5 + kGauss));
        const double gm = 0.5 * (g1 + g2);
        const double d = (h * h / 12.0) * 1.7320508075688772 * (g1 - g2);
        // v(a) = exp(-Omega) v(b), Omega = [[d, h], [h gm, -d]].
        const double th2 = d * d + h * h * gm;
        const double th = std::sqrt(std::max(th2, 0.0));
        const double ch = std::cosh(th);
        const double sh = th > 0.0 ? std::sinh(th) / th : 1.0;
        const double Ra = ch * R - sh * (d * R + h * P);
        const double Pa = ch * P - sh * (h * gm * R - d * P);
        require(Ra > 0.0, "RiccatiBlowup",
                "string integration lost positivity");
        lnR[k] = lnR[k + 1] + std::log(Ra);
        W = -Pa / Ra;
        Wv[k] = W;
        R = 1.0;
        P = -W;
    }

    // First-order closing step across [0, z_cut].
    const double W_cut = Wv[0];
    const double psi =
        W_cut - lambda * string.integral_from_zero(z_cut) + W_cut * W_cut * z_cut;
    sol.psi = psi;
    const double lnR0 = lnR[0] + 0.5 * (psi + W_cut) * z_cut;

    // Assemble the reported profile: origin, a decimated integration grid,
    // and every evaluation point.
    std::vector<char> keep(grid.size(), 0);
    const int stride = std::max(1, K / 200);
    for (int k = 0; k <= K; k += stride) keep[k] = 1;
    keep[K] = 1;
    for (double ze : z_eval) {
        const auto it = std::lower_bound(grid.begin(), grid.end(), ze);
        if (it != grid.end() && *it == ze)
            keep[static_cast<std::size_t>(it - grid.begin())] = 1;
    }
    sol.z.push_back(0.0);
    sol.R.push_back(1.0);
    for (std::size_t k = 0; k < grid.size(); ++k)
        if (keep[k]) {
            sol.z.push_back(grid[k]);
            sol.R.push_back(std::exp(lnR[k] - lnR0));
        }
    return sol;
}

BernsteinTable bernstein_from_string(const KreinString& string,
                                     const std::vector<double>& lambda_grid,
                                     const StringSolveOptions& opt) {
    BernsteinTable table;
    for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
        require(lambda_grid[i] >= 0.0 &&
                    (i == 0 || lambda_grid[i] > lambda_grid[i - 1]),
                "BadString", "lambda grid must be sorted and nonnegative");
        table.lambda.push_back(lambda_grid[i]);
        table.psi.push_back(solve_string(string, lambda_grid[i], {}, opt).psi);
    }
    return table;
}

void check_bernstein(const BernsteinTable& table) {
    const std::size_t m = table.lambda.size();
    require(m >= 1, "BernsteinViolation", "empty table");
    double scale = 0.0;
    for (double p : table.psi) scale = std::max(scale, std::abs(p));
    const double slack = 1e-8 * std::max(scale, 1.0);
    for (std::size_t i = 0; i < m; ++i) {
        require(table.psi[i] >= -slack, "BernsteinViolation",
                "psi must be nonnegative");
        if (i > 0)
            require(table.psi[i] >= table.psi[i - 1] - slack,
                    "BernsteinViolation", "psi must be nondecreasing");
    }
    for (std::size_t i = 0; i + 2 < m; ++i) {
        const double s1 = (table.psi[i + 1] - table.psi[i]) /
                          (table.lambda[i + 1] - table.lambda[i]);
        const double s2 = (table.psi[i + 2] - table.psi[i + 1]) /
                          (table.lambda[i + 2] - table.lambda[i + 1]);
        require(s2 <= s1 + slack, "BernsteinViolation",
                "psi must be concave");
    }
}

KreinString string_from_weight(const WeightFunction& weight, double y_max,
                               int samples) {
    if (weight.kind == WeightFunction::Kind::Power) {
        require(weight.c > 0.0, "WeightNotIntegrable",
                "weight prefactor must be positive");
        require(weight.p < 1.0, "WeightNotIntegrable",
                "1/w must be integrable at 0 (need exponent < 1)");
        const double beta = 2.0 * weight.p / (1.0 - weight.p);
        const double cA = weight.c * weight.c *
                          std::pow(weight.c * (1.0 - weight.p), beta);
        if (weight.p == 0.0) return constant_string(weight.c * weight.c);
        return powerlaw_string(cA, beta);
    }
    require(weight.y.size() == weight.w.size() && weight.y.size() >= 2,
            "WeightNotIntegrable", "sampled weight needs matching grids");
    (void)y_max;
    (void)samples;
    std::vector<double> zg, Ag;
    double sigma = weight.y.front() / weight.w.front();
    zg.push_back(sigma);
    Ag.push_back(weight.w.front() * weight.w.front());
    for (std::size_t i = 1; i < weight.y.size(); ++i) {
        require(weight.w[i] > 0.0, "WeightNotIntegrable",
                "weight must be positive");
        sigma += 0.5 * (1.0 / weight.w[i] + 1.0 / weight.w[i - 1]) *
                 (weight.y[i] - weight.y[i - 1]);
        zg.push_back(sigma);
        Ag.push_back(weight.w[i] * weight.w[i]);
    }
    return sampled_string(std::move(zg), std::move(Ag));
}

WeightFunction weight_from_string(const KreinString& string, double z_maxv,
                                  int samples) {
    WeightFunction w;
    if (string.kind == KreinString::Kind::Constant) {
        w.kind = WeightFunction::Kind::Power;
        w.c = std::sqrt(string.c);
        w.p = 0.0;
        return w;
    }
    if (string.kind == KreinString::Kind::PowerLaw) {
        w.kind = WeightFunction::Kind::Power;
        w.p = string.beta / (2.0 + string.beta);
        w.c = std::pow(string.c / std::pow(1.0 - w.p, string.beta),
                       1.0 / (2.0 + string.beta));
        return w;
    }
    require(z_maxv > 0.0 && samples >= 2, "BadString",
            "sampled inversion needs a range and sample count");
    w.kind = WeightFunction::Kind::Sampled;
    double y = 0.0, z_prev = 0.0, sq_prev = std::sqrt(string.at(0.0));
    for (int k = 1; k <= samples; ++k) {
        const double zk = z_maxv * k / samples;
        const double sq = std::sqrt(string.at(zk));
        y += 0.5 * (sq + sq_prev) * (zk - z_prev);
        w.y.push_back(y);
        w.w.push_back(sq);
        z_prev = zk;
        sq_prev = sq;
    }
    return w;
}

GeneralExtension general_extension(const SpectralDecomposition& dec,
                                   const std::vector<double>& f,
                                   const KreinString& string,
                                   const std::vector<double>& z_grid,
                                   const StringSolveOptions& opt) {
    const int n = dec.n();
    require(!z_grid.empty(), "BadMeshParams", "empty extension grid");
    const double lam_max = dec.eigenvalues.back();
    const double tol = 1e-12 * std::max(1.0, lam_max);

    // One string solve per distinct eigenvalue.
    std::map<long long, std::pair<std::vector<double>, double>> cache;
    auto slice = [&](double lam) -> const std::pair<std::vector<double>, double>& {
        const long long key = std::llround(lam * 1e12);
        auto it = cache.find(key);
        if (it == cache.end()) {
            StringSolution s = solve_string(string, lam, z_grid, opt);
            std::vector<double> Rv(z_grid.size());
            for (std::size_t k = 0; k < z_grid.size(); ++k) {
                const auto pos =
                    std::lower_bound(s.z.begin(), s.z.end(), z_grid[k]);
                require(pos != s.z.end(), "TruncationTooShort",
                        "evaluation point missing from the string grid");
                Rv[k] = s.R[static_cast<std::size_t>(pos - s.z.begin())];
            }
            it = cache.emplace(key, std::make_pair(std::move(Rv), s.psi)).first;
        }
        return it->second;
    };

    const std::vector<double> c = dec.coefficients(f);
    GeneralExtension ext;
    ext.z = z_grid;
    ext.values.assign(z_grid.size() * static_cast<std::size_t>(n), 0.0);
    ext.dtn.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        const double lam = dec.eigenvalues[i];
        std::vector<double> Rv(z_grid.size(), 1.0);
        double psi = 0.0;
        if (lam > tol) {
            const auto& sl = slice(lam);
            Rv = sl.first;
            psi = sl.second;
        }
        for (std::size_t k = 0; k < z_grid.size(); ++k)
            for (int x = 0; x < n; ++x)
                ext.values[k * n + x] += Rv[k] * c[i] * dec.phi_at(x, i);
        for (int x = 0; x < n; ++x)
            ext.dtn[x] += psi * c[i] * dec.phi_at(x, i);
    }
    return ext;
}

double g_kernel_sanity(const KreinString& string, double zz, double lambda) {
    require(string.kind == KreinString::Kind::Constant &&
                std::abs(string.c - 1.0) <= 1e-12,
            "NotConstantString", "the sanity fixture requires A = 1");
    require(zz >= 0.0 && lambda >= 0.0, "BadString",
            "need nonnegative arguments");
    if (lambda == 0.0 || zz == 0.0) return 1.0;

    // int e^{-t lambda} exp(-z^2/4t)/sqrt(pi t) sqrt(lambda) dt via the
    // sinh-substituted log-time trapezoid around the saddle t = z/(2 sqrt l).
    const double t0 = zz / (2.0 * std::sqrt(lambda));
    const double v_max = std::asinh(40.0 / kHalfPi);
    const int nodes = 400;
    const double h = 2.0 * v_max / (nodes - 1);
    double acc = 0.0;
    for (int k = 0; k < nodes; ++k) {
        const double v = -v_max + h * k;
        const double t = t0 * std::exp(kHalfPi * std::sinh(v));
        double g = std::exp(-t * lambda - zz * zz / (4.0 * t)) /
                   std::sqrt(3.141592653589793 * t) * std::sqrt(lambda) * t *
                   kHalfPi * std::cosh(v);
        if (k == 0 || k + 1 == nodes) g *= 0.5;
        acc += g;
    }
    return acc * h;
}

}  // namespace fraclab
