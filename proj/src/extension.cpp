#include "fraclab/extension.hpp"

#include <algorithm>
#include <cmath>

#include "fraclab/errors.hpp"
#include "fraclab/quadrature.hpp"

namespace fraclab {

namespace {

// E_a(U, V) for two level-major value arrays on the same space and mesh.
double energy_bilinear(const DirichletSpace& sp, const YMesh& mesh,
                       const std::vector<double>& U,
                       const std::vector<double>& V) {
    const int n = sp.size();
    const int N = mesh.segments();
    double acc = 0.0;
    for (int j = 0; j <= N; ++j) {
        double horiz = 0.0;
        const double* Uj = U.data() + static_cast<std::size_t>(j) * n;
        const double* Vj = V.data() + static_cast<std::size_t>(j) * n;
        for (const auto& e : sp.edges())
            horiz += e.w * (Uj[e.u] - Uj[e.v]) * (Vj[e.u] - Vj[e.v]);
        acc += mesh.mass[j] * horiz;
    }
    for (int x = 0; x < n; ++x) {
        double vert = 0.0;
        for (int j = 0; j < N; ++j) {
            const double du = U[static_cast<std::size_t>(j + 1) * n + x] -
                              U[static_cast<std::size_t>(j) * n + x];
            const double dv = V[static_cast<std::size_t>(j + 1) * n + x] -
                              V[static_cast<std::size_t>(j) * n + x];
            vert += mesh.beta[j] * du * dv;
        }
        acc += sp.mu(x) * vert;
    }
    return acc;
}

}  // namespace

YMesh build_graded_mesh(double Y, int N, double gamma, double a) {
    require(Y > 0.0, "BadMeshParams", "mesh height must be positive");
    require(N >= 8, "BadMeshParams", "need at least 8 mesh segments");
    require(a > -1.0 && a < 1.0, "BadMeshParams",
            "weight exponent a must lie in (-1, 1)");
    if (gamma <= 0.0) {
        const double s = 0.5 * (1.0 - a);
        gamma = std::max(3.0, 1.0 / (2.0 * s));
    }
    require(gamma >= 1.0, "BadMeshParams", "grading exponent must be >= 1");

    YMesh mesh;
    mesh.a = a;
    mesh.gamma = gamma;
    mesh.y.resize(N + 1);
    for (int j = 0; j <= N; ++j)
        mesh.y[j] = Y * std::pow(static_cast<double>(j) / N, gamma);
    mesh.y[N] = Y;

    const double p = 1.0 + a;
    auto half = [&](int j) { return 0.5 * (mesh.y[j] + mesh.y[j + 1]); };
    mesh.mass.resize(N + 1);
    mesh.mass[0] = std::pow(half(0), p) / p;
    for (int j = 1; j < N; ++j)
        mesh.mass[j] = (std::pow(half(j), p) - std::pow(half(j - 1), p)) / p;
    mesh.mass[N] = (std::pow(Y, p) - std::pow(half(N - 1), p)) / p;

    const double q = 1.0 - a;
    mesh.beta.resize(N);
    for (int j = 0; j < N; ++j)
        mesh.beta[j] =
            q / (std::pow(mesh.y[j + 1], q) - std::pow(mesh.y[j], q));
    return mesh;
}

double default_extension_height(const SpectralDecomposition& dec) {
    const double lam_max = dec.eigenvalues.empty() ? 0.0 : dec.eigenvalues.back();
    double lo = 0.0;
    for (double lam : dec.eigenvalues)
        if (lam > 1e-12 * std::max(1.0, lam_max)) {
            lo = lam;
            break;
        }
    require(lo > 0.0, "BadMeshParams",
            "space has no positive eigenvalue; extension height undefined");
    return 12.0 / std::sqrt(lo);
}

ExtensionField solve_extension_pde(std::shared_ptr<const DirichletSpace> space,
                                   const std::vector<double>& f, double s,
                                   const YMesh& mesh, TopBC top,
                                   const SpectralDecomposition* dec) {
    require(s > 0.0 && s < 1.0, "SOutOfRange", "s must lie strictly in (0,1)");
    require(std::abs(mesh.a - (1.0 - 2.0 * s)) <= 1e-12, "BadMeshParams",
            "mesh weight exponent does not match s");
    const int n = space->size();
    require(static_cast<int>(f.size()) == n, "ShapeMismatch",
            "boundary datum length != vertex count");
    const int N = mesh.segments();

    std::vector<double> top_values;
    if (top == TopBC::Modal) {
        require(dec != nullptr, "BadTopBC",
                "modal top boundary needs a spectral decomposition");
        top_values = poisson_extend(*dec, FracConfig{s, 256}, f,
                                    {mesh.y[N]})[0];
    }
    // Unknown levels j = 1..J (top level included only for the Neumann BC).
    const int J = (top == TopBC::Neumann) ? N : N - 1;
    const std::size_t m = static_cast<std::size_t>(J) * n;
    auto idx = [n](int j, int x) {
        return static_cast<std::size_t>(j - 1) * n + x;
    };

    // A u = b with A the E_a stiffness restricted to the unknown levels.
    auto apply_A = [&](const std::vector<double>& u, std::vector<double>& out) {
        std::fill(out.begin(), out.end(), 0.0);
        for (int j = 1; j <= J; ++j) {
            const double mj = mesh.mass[j];
            const double* uj = u.data() + idx(j, 0);
            double* oj = out.data() + idx(j, 0);
            for (int x = 0; x < n; ++x) {
                double acc = 0.0;
                for (auto [y, w] : space->neighbors(x))
                    acc += w * (uj[x] - uj[y]);
                oj[x] = mj * acc;
            }
        }
        for (int x = 0; x < n; ++x) {
            const double mux = space->mu(x);
            for (int j = 1; j <= J; ++j) {
                double acc = mesh.beta[j - 1] *
                             (u[idx(j, x)] -
                              (j >= 2 ? u[idx(j - 1, x)] : 0.0));
                if (j < N)
                    acc += mesh.beta[j] *
                           (u[idx(j, x)] -
                            (j + 1 <= J ? u[idx(j + 1, x)] : 0.0));
                out[idx(j, x)] += mux * acc;
            }
        }
    };

    std::vector<double> b(m, 0.0);
    for (int x = 0; x < n; ++x)
        b[idx(1, x)] = space->mu(x) * mesh.beta[0] * f[x];
    if (top == TopBC::Modal)
        for (int x = 0; x < n; ++x)
            b[idx(J, x)] += space->mu(x) * mesh.beta[N - 1] * top_values[x];

    // Per-vertex vertical tridiagonal preconditioner (Thomas solve).
    std::vector<double> pre_d(m), pre_e(m);  // diagonal, upper off-diagonal
    for (int x = 0; x < n; ++x) {
        const double mux = space->mu(x);
        const double degx = space->weighted_degree(x);
        for (int j = 1; j <= J; ++j) {
            double d = mesh.mass[j] * degx + mux * mesh.beta[j - 1];
            if (j < N) d += mux * mesh.beta[j];
            pre_d[idx(j, x)] = d;
            pre_e[idx(j, x)] = (j + 1 <= J) ? -mux * mesh.beta[j] : 0.0;
        }
    }
    std::vector<double> cw(m), dw(m);  // Thomas scratch
    auto apply_M = [&](const std::vector<double>& r, std::vector<double>& z) {
#pragma omp parallel for schedule(static)
        for (int x = 0; x < n; ++x) {
            cw[idx(1, x)] = pre_e[idx(1, x)] / pre_d[idx(1, x)];
            dw[idx(1, x)] = r[idx(1, x)] / pre_d[idx(1, x)];
            for (int j = 2; j <= J; ++j) {
                const double a_low = pre_e[idx(j - 1, x)];
                const double den =
                    pre_d[idx(j, x)] - a_low * cw[idx(j - 1, x)];
                cw[idx(j, x)] = pre_e[idx(j, x)] / den;
                dw[idx(j, x)] =
                    (r[idx(j, x)] - a_low * dw[idx(j - 1, x)]) / den;
            }
            z[idx(J, x)] = dw[idx(J, x)];
            for (int j = J - 1; j >= 1; --j)
                z[idx(j, x)] =
                    dw[idx(j, x)] - cw[idx(j, x)] * z[idx(j + 1, x)];
        }
    };

    auto dot = [&](const std::vector<double>& a, const std::vector<double>& c) {
        double acc = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * c[i];
        return acc;
    };

    // PCG from the flat-in-y initial guess U_j = f.
    std::vector<double> u(m), r(m), z(m), p(m), Ap(m);
    for (int j = 1; j <= J; ++j)
        for (int x = 0; x < n; ++x) u[idx(j, x)] = f[x];
    apply_A(u, Ap);
    for (std::size_t i = 0; i < m; ++i) r[i] = b[i] - Ap[i];
    apply_M(r, z);
    p = z;
    double rz = dot(r, z);
    // The graded mesh makes the face coefficients span many orders of
    // magnitude; the preconditioned residual norm is the scale-balanced
    // convergence measure (plain ||r|| is dominated by the first face).
    apply_M(b, Ap);
    const double target2 = 1e-24 * std::max(dot(b, Ap), 1e-300);
    const int max_iter = 20000;
    int it = 0;
    for (; it < max_iter; ++it) {
        if (rz <= target2) break;
        apply_A(p, Ap);
        const double alpha = rz / dot(p, Ap);
        for (std::size_t i = 0; i < m; ++i) {
            u[i] += alpha * p[i];
            r[i] -= alpha * Ap[i];
        }
        apply_M(r, z);
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < m; ++i) p[i] = z[i] + beta * p[i];
    }
    require(it < max_iter, "CGNoConvergence",
            "conjugate gradients failed to reach the residual target");

    ExtensionField field;
    field.space = std::move(space);
    field.mesh = mesh;
    field.s = s;
    field.provenance = FieldProvenance::PdeSolve;
    field.values.resize(static_cast<std::size_t>(N + 1) * n);
    for (int x = 0; x < n; ++x) field.values[x] = f[x];
    for (int j = 1; j <= J; ++j)
        for (int x = 0; x < n; ++x)
            field.values[static_cast<std::size_t>(j) * n + x] = u[idx(j, x)];
    if (top == TopBC::Modal)
        for (int x = 0; x < n; ++x)
            field.values[static_cast<std::size_t>(N) * n + x] = top_values[x];
    return field;
}

ExtensionField extend_semi_analytic(const SpectralDecomposition& dec,
                                    const FracConfig& cfg, const YMesh& mesh,
                                    const std::vector<double>& f) {
    const int n = dec.n();
    const int N = mesh.segments();
    ExtensionField field;
    field.space = dec.space;
    field.mesh = mesh;
    field.s = cfg.s;
    field.provenance = FieldProvenance::SemiAnalytic;
    field.values.resize(static_cast<std::size_t>(N + 1) * n);
    const auto levels = poisson_extend(dec, cfg, f, mesh.y);
    for (int j = 0; j <= N; ++j)
        for (int x = 0; x < n; ++x)
            field.values[static_cast<std::size_t>(j) * n + x] = levels[j][x];
    return field;
}

std::vector<double> neumann_trace(const ExtensionField& field, double s) {
    const int n = field.space->size();
    const int N = field.mesh.segments();
    require(N >= 3, "MeshTooCoarse", "trace extrapolation needs >= 3 faces");
    require(std::abs(field.mesh.a - (1.0 - 2.0 * s)) <= 1e-12, "BadMeshParams",
            "field weight exponent does not match s");

    // Flux F_j = beta_{j+1/2} (U_{j+1} - U_j) approximates y^a U_y at the
    // face midpoint; fit F = c0 + c1 t^{2-2s} + c2 t^2 over the first three
    // faces and keep c0 as the weighted normal derivative at y = 0.
    double t[3], A[9];
    for (int j = 0; j < 3; ++j) {
        t[j] = 0.5 * (field.mesh.y[j] + field.mesh.y[j + 1]);
        A[j * 3 + 0] = 1.0;
        A[j * 3 + 1] = std::pow(t[j], 2.0 - 2.0 * s);
        A[j * 3 + 2] = t[j] * t[j];
    }
    // First row of the inverse via Cramer.
    const double det =
        A[0] * (A[4] * A[8] - A[5] * A[7]) -
        A[1] * (A[3] * A[8] - A[5] * A[6]) +
        A[2] * (A[3] * A[7] - A[4] * A[6]);
    require(std::abs(det) > 0.0, "MeshTooCoarse",
            "degenerate trace extrapolation stencil");
    const double w0 = (A[4] * A[8] - A[5] * A[7]) / det;
    const double w1 = -(A[1] * A[8] - A[2] * A[7]) / det;
    const double w2 = (A[1] * A[5] - A[2] * A[4]) / det;

    const double Cs = dtn_constant(s);
    std::vector<double> out(n, 0.0);
    for (int x = 0; x < n; ++x) {
        double flux[3];
        for (int j = 0; j < 3; ++j)
            flux[j] = field.mesh.beta[j] * (field.at(x, j + 1) - field.at(x, j));
        out[x] = -Cs * (w0 * flux[0] + w1 * flux[1] + w2 * flux[2]);
    }
    return out;
}

std::vector<double> neumann_trace_richardson(
    std::shared_ptr<const DirichletSpace> space,
    const SpectralDecomposition& dec, const std::vector<double>& f, double s,
    int N) {
    const double Y = default_extension_height(dec);
    const double a = 1.0 - 2.0 * s;
    const YMesh coarse = build_graded_mesh(Y, N, 0.0, a);
    const YMesh fine = build_graded_mesh(Y, 2 * N, 0.0, a);
    const auto Tc =
        neumann_trace(solve_extension_pde(space, f, s, coarse), s);
    const auto Tf = neumann_trace(solve_extension_pde(space, f, s, fine), s);
    std::vector<double> out(Tc.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = Tf[i] + (Tf[i] - Tc[i]) / 3.0;  // second-order scheme
    return out;
}

double weak_residual(const ExtensionField& field,
                     const std::vector<std::vector<double>>& test_functions) {
    const int n = field.space->size();
    const int N = field.mesh.segments();
    double sup = 0.0;
    for (const auto& h : test_functions) {
        require(static_cast<int>(h.size()) ==
                    static_cast<int>(field.values.size()),
                "ShapeMismatch", "test function has the wrong layout");
        double edge = 0.0;
        for (int x = 0; x < n; ++x)
            edge = std::max(edge,
                            std::max(std::abs(h[x]),
                                     std::abs(h[static_cast<std::size_t>(N) * n +
                                                x])));
        require(edge == 0.0, "TestFunctionSupportViolation",
                "test functions must vanish at the bottom and top levels");
        sup = std::max(sup,
                       std::abs(energy_bilinear(*field.space, field.mesh,
                                                field.values, h)));
    }
    return sup;
}

double extension_energy(const ExtensionField& U, const ExtensionField& V) {
    require(U.space.get() == V.space.get() &&
                U.values.size() == V.values.size(),
            "ShapeMismatch", "fields live on different discretizations");
    return energy_bilinear(*U.space, U.mesh, U.values, V.values);
}

}  // namespace fraclab
