#pragma once

#include <vector>

#include "fraclab/spectral.hpp"

namespace fraclab {

/// Krein string: the nonnegative coefficient A(z) of R_zz = lambda A R on
/// [0, Z].  Closed forms (constant, power-law A(z) = c z^beta with
/// beta > -1) or samples with log-linear interpolation.
struct KreinString {
    enum class Kind { Constant, PowerLaw, Sampled };

    Kind kind = Kind::Constant;
    double c = 1.0;     // constant value / power-law prefactor
    double beta = 0.0;  // power-law exponent, > -1
    std::vector<double> z;  // sampled grid, strictly increasing, z[0] > 0
    std::vector<double> A;  // samples at z, interpolated log-linearly

    double at(double zz) const;
    double integral_from_zero(double zz) const;  // int_0^zz A, closed form
    double z_max() const;  // sampled strings only; 0 otherwise
};

KreinString constant_string(double c);
KreinString powerlaw_string(double c, double beta);
KreinString sampled_string(std::vector<double> z, std::vector<double> A);

/// One lambda-slice of the string solution: the unique bounded
/// non-increasing R with R(0) = 1, and psi(lambda) = -R_z(0).
struct StringSolution {
    double lambda = 0.0;
    double psi = 0.0;
    std::vector<double> z;  // ascending, z[0] = 0
    std::vector<double> R;  // R[0] = 1, non-increasing, in [0, 1]
};

struct StringSolveOptions {
    int steps = 6000;            // geometric integration grid size
    double decay_target = 20.0;  // sqrt(lambda A(Z)) Z at truncation
    double z_cut_factor = 1e-14;  // closing-step cutoff relative to Z
    double z_max_override = 0.0; // force a truncation length
};

/// Backward Magnus integration of the linear system (R, R_z) from the
/// frozen-coefficient decaying terminal condition, with renormalization
/// (the bounded solution is the backward-dominant one, so the march is
/// stable); a first-order closing step crosses [0, z_cut] where power-law
/// strings may blow up integrably.  R is reported on the integration grid
/// merged with `z_eval`.
StringSolution solve_string(const KreinString& string, double lambda,
                            const std::vector<double>& z_eval = {},
                            const StringSolveOptions& opt = {});

/// psi on a lambda grid.
struct BernsteinTable {
    std::vector<double> lambda;
    std::vector<double> psi;
};

BernsteinTable bernstein_from_string(const KreinString& string,
                                     const std::vector<double>& lambda_grid,
                                     const StringSolveOptions& opt = {});

/// Necessary Bernstein-function conditions: psi >= 0, nondecreasing,
/// concave on the grid (slack 1e-8 relative).  Throws BernsteinViolation.
void check_bernstein(const BernsteinTable& table);

/// Weight function w(y) on (0, y_max]: power law w(y) = c y^p (p < 1 so
/// that 1/w is integrable at 0) or positive samples.
struct WeightFunction {
    enum class Kind { Power, Sampled };

    Kind kind = Kind::Power;
    double c = 1.0;
    double p = 0.0;
    std::vector<double> y;
    std::vector<double> w;
};

/// Change of variable z = sigma(y) = int_0^y dr / w(r); A(sigma(y)) = w(y)^2.
/// Power-law weights map to power-law strings in closed form
/// (beta = 2p / (1 - p)); sampled weights integrate 1/w on their grid.
KreinString string_from_weight(const WeightFunction& weight, double y_max,
                               int samples = 2000);

/// Inverse map y(z) = int_0^z sqrt(A), w = sqrt(A); returns a sampled weight.
WeightFunction weight_from_string(const KreinString& string, double z_maxv,
                                  int samples = 2000);

/// General extension v(x, z) = R(z, -L) f and its Dirichlet-to-Neumann
/// derivative -d_z v|_0 = psi(-L) f.
struct GeneralExtension {
    std::vector<double> z;       // ascending, starts at 0
    std::vector<double> values;  // level-major, index k * n + x
    std::vector<double> dtn;     // psi(-L) f on vertices
};

GeneralExtension general_extension(const SpectralDecomposition& dec,
                                   const std::vector<double>& f,
                                   const KreinString& string,
                                   const std::vector<double>& z_grid,
                                   const StringSolveOptions& opt = {});

/// Subordination sanity fixture for the constant string A = 1: evaluates
/// int_0^inf e^{-t lambda} G(z, t) sqrt(lambda) dt with the closed-form
/// density G(z, t) = exp(-z^2 / 4t) / sqrt(pi t); equals e^{-z sqrt(lambda)}.
double g_kernel_sanity(const KreinString& string, double zz, double lambda);

}  // namespace fraclab
