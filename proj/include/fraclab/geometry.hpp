#pragma once

#include <memory>
#include <vector>

#include "fraclab/report.hpp"
#include "fraclab/space.hpp"

namespace fraclab {

struct Ball {
    int center = 0;
    double radius = 0.0;
    std::vector<int> members;
};

struct BallFamily {
    std::vector<Ball> balls;
};

/// Vertices within metric distance r of the center (center included).
std::vector<int> ball_members(const DirichletSpace& space, int center,
                              double r);

/// Family of metric balls; radii must be positive.
BallFamily make_ball_family(
    const DirichletSpace& space,
    const std::vector<std::pair<int, double>>& centers_radii);

/// Empirical doubling constant: max over the family of
/// mu(B(x, 2r)) / mu(B(x, r)).  Trial columns: center, r, mu_r, mu_2r, ratio.
ExperimentReport doubling_constant(const DirichletSpace& space,
                                   const BallFamily& family);

/// Empirical 2-Poincare constant: max over balls and over a candidate set
/// (lowest Neumann eigenfunctions of the form restricted to the dilated
/// ball, plus heat-smoothed random functions) of
///   mean_B |u - u_B|  /  ( r * sqrt(mean_{Lambda B} Gamma(u,u)) ).
/// A lower bound on the true constant; reported as such.
ExperimentReport poincare_constant(const DirichletSpace& space,
                                   const BallFamily& family, double Lambda,
                                   int eigen_candidates = 10,
                                   int random_candidates = 50,
                                   unsigned long long seed = 1);

/// Induced sub-space on a vertex subset (inherited weights and measure);
/// `back_map` returns the original indices in subset order.
std::shared_ptr<const DirichletSpace> induced_subspace(
    const DirichletSpace& space, const std::vector<int>& subset,
    std::vector<int>* back_map = nullptr);

}  // namespace fraclab
