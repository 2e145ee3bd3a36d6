#include "fraclab/quadrature.hpp"

#include <cmath>

#include "fraclab/errors.hpp"

namespace fraclab {

namespace {
constexpr double kHalfPi = 1.5707963267948966;
// Decay target for the substituted integrand at the truncation ends:
// exp(-38) ~ 3e-17 keeps the truncation below double rounding.
constexpr double kDecayTarget = 38.0;
}  // namespace

double gamma_minus(double s) { return std::tgamma(-s); }

TimeQuadrature subordination_nodes(double s, double lam_min, double lam_max,
                                   std::size_t nodes) {
    require(s > 0.0 && s < 1.0, "SOutOfRange", "s must lie strictly in (0,1)");
    require(nodes >= 8, "BadQuadratureConfig", "need at least 8 nodes");
    require(lam_min > 0.0 && lam_max >= lam_min, "BadQuadratureConfig",
            "invalid spectral range");

    const double s_min = std::min(s, 1.0 - s);
    const double t_center = 1.0 / std::sqrt(lam_min * lam_max);
    // Widen the window by half the spectral log-range so every mode keeps
    // the full decay margin on both sides.
    const double span =
        kDecayTarget / s_min + 0.5 * std::log(lam_max / lam_min);
    const double v_max = std::asinh(span / kHalfPi);
    const double h = 2.0 * v_max / static_cast<double>(nodes - 1);

    TimeQuadrature q;
    q.t.resize(nodes);
    q.c.resize(nodes);
    for (std::size_t k = 0; k < nodes; ++k) {
        const double v = -v_max + h * static_cast<double>(k);
        const double t = t_center * std::exp(kHalfPi * std::sinh(v));
        double w = h * kHalfPi * std::cosh(v) * std::pow(t, -s);
        if (k == 0 || k + 1 == nodes) w *= 0.5;
        q.t[k] = t;
        q.c[k] = w;
    }
    return q;
}

double balakrishnan_integral(double lam, double s, std::size_t nodes) {
    if (lam == 0.0) return 0.0;
    const TimeQuadrature q = subordination_nodes(s, lam, lam, nodes);
    double acc = 0.0;
    for (std::size_t k = 0; k < q.t.size(); ++k)
        acc += q.c[k] * std::expm1(-lam * q.t[k]);
    return acc;
}

double kernel_mode_coefficient(double lam, double s, std::size_t nodes) {
    require(s > 0.0 && s < 1.0, "SOutOfRange", "s must lie strictly in (0,1)");
    if (lam == 0.0) return 0.0;
    // Scales 1/lam and 1 both appear; brace the quadrature window around both.
    const double lo = std::min(lam, 1.0);
    const double hi = std::max(lam, 1.0);
    const TimeQuadrature q = subordination_nodes(s, lo, hi, nodes);
    double acc = 0.0;
    for (std::size_t k = 0; k < q.t.size(); ++k) {
        const double t = q.t[k];
        acc += q.c[k] * (std::expm1(-lam * t) - lam * std::expm1(-t));
    }
    return acc;
}

double poisson_multiplier_c(double s, double c, std::size_t nodes) {
    require(s > 0.0 && s < 1.0, "SOutOfRange", "s must lie strictly in (0,1)");
    require(c >= 0.0, "BadQuadratureConfig", "c must be nonnegative");
    if (c == 0.0) return 1.0;

    // Integrand r^s e^{-r - c/r} (pi/2) cosh v in the sinh variable.  The
    // lower window must reach below r ~ c where the nonanalytic c^s
    // contribution lives.
    const double lo_span = kDecayTarget / std::min(s, 1.0) +
                           std::max(0.0, -std::log(c));
    const double hi_span = kDecayTarget + 4.0;
    const double v_lo = -std::asinh(lo_span / kHalfPi);
    const double v_hi = std::asinh(hi_span / kHalfPi);
    const double h = (v_hi - v_lo) / static_cast<double>(nodes - 1);

    double acc = 0.0;
    for (std::size_t k = 0; k < nodes; ++k) {
        const double v = v_lo + h * static_cast<double>(k);
        const double u = kHalfPi * std::sinh(v);  // log r
        const double r = std::exp(u);
        double g = std::exp(s * u - r - c / r) * kHalfPi * std::cosh(v);
        if (k == 0 || k + 1 == nodes) g *= 0.5;
        acc += g;
    }
    return acc * h / std::tgamma(s);
}

double poisson_multiplier(double s, double lam, double y, std::size_t nodes) {
    require(lam >= 0.0, "BadQuadratureConfig", "lambda must be nonnegative");
    require(y >= 0.0, "BadQuadratureConfig", "y must be nonnegative");
    return poisson_multiplier_c(s, 0.25 * y * y * lam, nodes);
}

}  // namespace fraclab
