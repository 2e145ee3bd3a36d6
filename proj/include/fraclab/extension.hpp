#pragma once

#include <memory>
#include <vector>

#include "fraclab/fractional.hpp"
#include "fraclab/spectral.hpp"

namespace fraclab {

/// Graded mesh 0 = y_0 < ... < y_N = Y for the extension variable, with the
/// closed-form cell masses m_j = int_cell |y|^a dy and face coefficients
/// beta_{j+1/2} = (int_{y_j}^{y_{j+1}} |y|^{-a} dy)^{-1}.  The exact-integral
/// faces make y^a U_y constant across a cell exact for the homogeneous 1-d
/// problem, reproducing the y^{2s} boundary layer.
struct YMesh {
    std::vector<double> y;     // N+1 nodes, y[0] = 0
    std::vector<double> mass;  // N+1 cell masses (half cells at the ends)
    std::vector<double> beta;  // N face coefficients, beta[j] for face j+1/2
    double a = 0.0;
    double gamma = 1.0;

    int segments() const { return static_cast<int>(beta.size()); }
};

/// y_j = Y (j/N)^gamma.  Pass gamma <= 0 to request the default grading
/// max(3, 1/(2s)), which resolves the boundary layer and the slowly decaying
/// high modes simultaneously.
YMesh build_graded_mesh(double Y, int N, double gamma, double a);

/// Truncation height with per-mode error <= e^{-12}: 12 / sqrt(lam_min+).
double default_extension_height(const SpectralDecomposition& dec);

enum class TopBC { Neumann, Modal };
enum class FieldProvenance { PdeSolve, SemiAnalytic };

/// Extension field U(x, y_j); values stored row-major by mesh level,
/// index j * n + x.  U at level 0 equals the boundary datum exactly.
struct ExtensionField {
    std::shared_ptr<const DirichletSpace> space;
    YMesh mesh;
    double s = 0.5;
    FieldProvenance provenance = FieldProvenance::PdeSolve;
    std::vector<double> values;

    double at(int x, int j) const {
        return values[static_cast<std::size_t>(j) * space->size() + x];
    }
};

/// Finite-volume solve of the weak form of (L + B_a) U = 0 with Dirichlet
/// datum f at y = 0 and `top` at y = Y (Modal needs `dec` and prescribes the
/// semi-analytic values at the top level, for validation runs).  Conjugate
/// gradients preconditioned by the per-vertex vertical tridiagonals;
/// relative residual 1e-10.
ExtensionField solve_extension_pde(std::shared_ptr<const DirichletSpace> space,
                                   const std::vector<double>& f, double s,
                                   const YMesh& mesh,
                                   TopBC top = TopBC::Neumann,
                                   const SpectralDecomposition* dec = nullptr);

/// Semi-analytic field on the same mesh (modal multipliers), for
/// cross-checking the PDE solve level by level.
ExtensionField extend_semi_analytic(const SpectralDecomposition& dec,
                                    const FracConfig& cfg, const YMesh& mesh,
                                    const std::vector<double>& f);

/// Weighted Neumann trace -C_s lim y^a U_y from the first three face fluxes
/// beta (U_{j+1} - U_j), extrapolated in the basis {1, y^{2-2s}, y^2} at the
/// face midpoints; estimates (-L)^s f.
std::vector<double> neumann_trace(const ExtensionField& field, double s);

/// Two-mesh Richardson refinement of the trace (solves at N and 2N).
std::vector<double> neumann_trace_richardson(
    std::shared_ptr<const DirichletSpace> space,
    const SpectralDecomposition& dec, const std::vector<double>& f, double s,
    int N);

/// max_h |E_a(U, h)| over the supplied test functions (same layout as the
/// field values); every h must vanish at levels 0 and N.
double weak_residual(const ExtensionField& field,
                     const std::vector<std::vector<double>>& test_functions);

/// The discrete energy E_a(U, V) of two fields on the same mesh.
double extension_energy(const ExtensionField& U, const ExtensionField& V);

}  // namespace fraclab
