#pragma once

#include "fraclab/fractional.hpp"
#include "fraclab/space.hpp"

namespace fraclab {

/// Kernel-decay experiment on periodic lattices: the jump kernel from a
/// fixed origin row, averaged over hop-distance shells, and the
/// least-squares slope of log K against log d over the fit window
/// d in [3, diameter/4].  `target` is the heuristic -(dim + 2s).
struct DecayProfile {
    std::vector<double> distance;  // shell hop distances inside the window
    std::vector<double> kernel;    // shell-averaged K values
    double slope = 0.0;
    double target = 0.0;
};

/// Unit-weight, unit-measure torus fixture (ring when ny == 1); vertex
/// (i, j) is named "t{i}_{j}" and sits at index i * ny + j.
DirichletSpace make_torus(int nx, int ny);

/// Closed-form profiles: translation invariance reduces the kernel row to a
/// cosine sum of the twice-subtracted mode coefficients over the circulant
/// spectrum, so no dense eigensolve is needed at any size.
DecayProfile kernel_decay_profile_ring(int n, const FracConfig& cfg);
DecayProfile kernel_decay_profile_torus(int nx, int ny, const FracConfig& cfg);

/// Wrapper taking an actual lattice space: validates that `space` is the
/// standard torus of the stated shape, then delegates to the closed form.
DecayProfile kernel_decay_profile(const DirichletSpace& space, int nx, int ny,
                                  const FracConfig& cfg);

}  // namespace fraclab
