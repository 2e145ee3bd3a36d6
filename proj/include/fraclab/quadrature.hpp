#pragma once

#include <cstddef>
#include <vector>

namespace fraclab {

/// Nodes t_k and weights c_k of a sinh-substituted trapezoid rule so that
/// int_0^inf g(t) t^{-1-s} dt ~= sum_k c_k g(t_k) for integrands whose
/// relevant time scales lie in [1/lam_max, 1/lam_min].  The substitution
/// t = t_c exp((pi/2) sinh v) pushes both truncation ends to double-
/// exponentially small integrand values, so the trapezoid sum converges
/// spectrally in the node count.
struct TimeQuadrature {
    std::vector<double> t;
    std::vector<double> c;
};

TimeQuadrature subordination_nodes(double s, double lam_min, double lam_max,
                                   std::size_t nodes);

/// Scalar check value: int_0^inf (e^{-lam t} - 1) t^{-1-s} dt  ( = Gamma(-s) lam^s ).
double balakrishnan_integral(double lam, double s, std::size_t nodes = 256);

/// Twice-subtracted kernel coefficient
///   J(lam) = int_0^inf (e^{-lam t} - 1 + lam (1 - e^{-t})) t^{-1-s} dt,
/// finite for every lam >= 0.  Resumming J over eigenmodes gives the jump
/// kernel off the diagonal: the subtracted moments vanish (orthogonality)
/// or reduce to the adjacency term.
double kernel_mode_coefficient(double lam, double s, std::size_t nodes = 256);

/// Poisson extension multiplier
///   M_s(lam, y) = (1/Gamma(s)) int_0^inf r^{s-1} e^{-r} e^{-y^2 lam /(4r)} dr,
/// evaluated with the same sinh-substituted rule on the r-integral.
/// M_s(lam, 0) = M_s(0, y) = 1; strictly decreasing in y for lam > 0.
double poisson_multiplier(double s, double lam, double y, std::size_t nodes = 240);

/// Same quantity as a function of c = y^2 lam / 4 alone.
double poisson_multiplier_c(double s, double c, std::size_t nodes = 240);

double gamma_minus(double s);  // Gamma(-s), negative on (0,1)

}  // namespace fraclab
