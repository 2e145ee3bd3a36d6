#pragma once

#include <utility>
#include <vector>

#include "fraclab/extension.hpp"
#include "fraclab/nonlocal.hpp"
#include "fraclab/product_space.hpp"
#include "fraclab/report.hpp"

namespace fraclab {

/// Empirical interior Harnack constant for (-L)^s.  Over `trials` random
/// nonnegative exterior data (componentwise exp of a standard normal,
/// per-trial seeds derived from `seed`), solve the nonlocal Dirichlet
/// problem in B(center, R) and record sup/inf over B(center, delta R).
/// Reported constant is the max ratio; `violations` counts trials where
/// the solution escaped the exterior data range (expected 0), and
/// `scale_dev` is the ratio deviation when the first trial's data is
/// rescaled by an arbitrary positive factor (expected 0 by linearity).
/// Trial columns: trial, sup, inf, ratio.
ExperimentReport harnack_constant(const SpectralDecomposition& dec,
                                  const FracConfig& cfg, int center, double R,
                                  double delta, int trials,
                                  unsigned long long seed);

/// Even-extension harmonicity check.  Mirrors the half-cylinder field
/// across y = 0, assembles the weighted product space on the same mesh,
/// and evaluates the product-form residual E_a(U~, h) against hat
/// functions at product nodes over `interior` base vertices and all
/// interior y levels.  Residuals are reported Cauchy-Schwarz normalized,
///   |E_a(U~, h)| / (sqrt(E_a(U~, U~)) sqrt(E_a(h, h))),
/// so they are dimensionless and invariant under scaling of the data.
/// Constants: residual (max normalized), antisym (residual against
/// antisymmetric test pairs; zero to rounding by construction).
ExperimentReport even_extension_check(const ExtensionField& field,
                                      const std::vector<int>& interior);

/// Intrinsic-metric sandwich on a product space.  For each vertex pair,
/// the upper bound is the product metric d_a and the lower bound comes
/// from explicit competitors F with energy density Gamma_a(F, F) <= mu_a:
/// lifted base distance functions f, the combinations (f +- y)/2, and
/// +-y, each rescaled to feasibility.  Trial columns: pair, lower,
/// upper, ratio; constant: sandwich = max ratio.
ExperimentReport intrinsic_metric_bounds(
    const ProductSpace& product,
    const std::vector<std::pair<int, int>>& pairs);

/// Inner square of an nx x ny grid (indices into make_grid ordering).
std::vector<int> grid_square_domain(int nx, int ny, int inner);

/// L-shaped subset of an nx x ny grid: the inner square with its upper
/// right quadrant removed.
std::vector<int> grid_lshape_domain(int nx, int ny, int inner);

/// Empirical boundary Harnack double ratio.  Pairs of nonnegative
/// solutions of the nonlocal Dirichlet problem in the collar
/// Omega intersect B(xi, collar_factor r), with zero data off Omega and
/// random positive data on the rest of Omega; reports
///   C = max over solution pairs and x, x' in B_Omega(xi, r) of
///       (u(x) v(x')) / (u(x') v(x)).
/// Trial columns: trial_u, trial_v, ratio.
ExperimentReport boundary_harnack_experiment(const SpectralDecomposition& dec,
                                             const FracConfig& cfg,
                                             const std::vector<int>& domain,
                                             int xi, double r, int trials,
                                             unsigned long long seed,
                                             double collar_factor = 3.0);

}  // namespace fraclab
