#include "fraclab/product_space.hpp"

#include <cmath>

#include "fraclab/errors.hpp"

namespace fraclab {

ProductSpace build_product_space(std::shared_ptr<const DirichletSpace> base,
                                 double s, const YMesh& half_mesh) {
    require(s > 0.0 && s < 1.0, "SOutOfRange", "s must lie strictly in (0,1)");
    require(std::abs(half_mesh.a - (1.0 - 2.0 * s)) <= 1e-12, "BadMeshParams",
            "mesh weight exponent does not match s");
    const int N = half_mesh.segments();
    const int n = base->size();

    ProductSpace ps;
    ps.base = base;
    ps.s = s;
    ps.a = half_mesh.a;
    ps.y.resize(2 * N + 1);
    ps.mass.resize(2 * N + 1);
    ps.beta.resize(2 * N);
    for (int j = 0; j <= N; ++j) {
        ps.y[N + j] = half_mesh.y[j];
        ps.y[N - j] = -half_mesh.y[j];
        // |y|^a is even, so the mirrored cells carry the half-mesh masses;
        // the origin cell is the union of its two half cells.
        const double m = (j == 0) ? 2.0 * half_mesh.mass[0] : half_mesh.mass[j];
        ps.mass[N + j] = m;
        ps.mass[N - j] = m;
    }
    for (int j = 0; j < N; ++j) {
        ps.beta[N + j] = half_mesh.beta[j];
        ps.beta[N - 1 - j] = half_mesh.beta[j];
    }

    // The y-line as a weighted path Dirichlet space.
    {
        std::vector<std::string> ids;
        std::vector<double> mu(ps.mass.begin(), ps.mass.end());
        std::vector<std::tuple<std::string, std::string, double>> ed;
        for (int j = 0; j < ps.ny(); ++j) ids.push_back("y" + std::to_string(j));
        for (int j = 0; j + 1 < ps.ny(); ++j)
            ed.emplace_back(ids[j], ids[j + 1], ps.beta[j]);
        std::vector<double> metric(
            static_cast<std::size_t>(ps.ny()) * ps.ny());
        for (int i = 0; i < ps.ny(); ++i)
            for (int j = 0; j < ps.ny(); ++j)
                metric[static_cast<std::size_t>(i) * ps.ny() + j] =
                    std::abs(ps.y[i] - ps.y[j]);
        ps.y_line = std::make_shared<DirichletSpace>(build_space(
            std::move(ids), std::move(mu), ed, std::move(metric)));
    }

    // The product graph with the d_a metric.
    const int ny = ps.ny();
    const int np = n * ny;
    std::vector<std::string> ids;
    std::vector<double> mu(np);
    ids.reserve(np);
    for (int x = 0; x < n; ++x)
        for (int j = 0; j < ny; ++j) {
            ids.push_back(base->vertex_ids()[x] + "@y" + std::to_string(j));
            mu[ps.index(x, j)] = base->mu(x) * ps.mass[j];
        }
    std::vector<std::tuple<std::string, std::string, double>> ed;
    for (const auto& e : base->edges())
        for (int j = 0; j < ny; ++j)
            ed.emplace_back(ids[ps.index(e.u, j)], ids[ps.index(e.v, j)],
                            e.w * ps.mass[j]);
    for (int x = 0; x < n; ++x)
        for (int j = 0; j + 1 < ny; ++j)
            ed.emplace_back(ids[ps.index(x, j)], ids[ps.index(x, j + 1)],
                            base->mu(x) * ps.beta[j]);
    std::vector<double> metric(static_cast<std::size_t>(np) * np);
    for (int x = 0; x < n; ++x)
        for (int j = 0; j < ny; ++j) {
            const std::size_t row =
                static_cast<std::size_t>(ps.index(x, j)) * np;
            for (int x2 = 0; x2 < n; ++x2)
                for (int j2 = 0; j2 < ny; ++j2) {
                    const double d = base->metric(x, x2);
                    const double dy = ps.y[j] - ps.y[j2];
                    metric[row + ps.index(x2, j2)] =
                        std::sqrt(d * d + dy * dy);
                }
        }
    ps.product = std::make_shared<DirichletSpace>(
        build_space(std::move(ids), std::move(mu), ed, std::move(metric)));
    return ps;
}

ProductSpace build_product_space(std::shared_ptr<const DirichletSpace> base,
                                 double s, double Y, int N, double gamma) {
    return build_product_space(std::move(base), s,
                               build_graded_mesh(Y, N, gamma, 1.0 - 2.0 * s));
}

EnergyParts product_energy_parts(const ProductSpace& ps,
                                 const std::vector<double>& u,
                                 const std::vector<double>& v) {
    const int n = ps.base->size();
    const int ny = ps.ny();
    require(u.size() == v.size() &&
                static_cast<int>(u.size()) == n * ny,
            "ShapeMismatch", "function length != product vertex count");
    EnergyParts parts;
    for (int j = 0; j < ny; ++j) {
        double level = 0.0;
        for (const auto& e : ps.base->edges()) {
            const double du = u[ps.index(e.u, j)] - u[ps.index(e.v, j)];
            const double dv = v[ps.index(e.u, j)] - v[ps.index(e.v, j)];
            level += e.w * du * dv;
        }
        parts.horizontal += ps.mass[j] * level;
    }
    for (int x = 0; x < n; ++x) {
        double line = 0.0;
        for (int j = 0; j + 1 < ny; ++j) {
            const double du = u[ps.index(x, j + 1)] - u[ps.index(x, j)];
            const double dv = v[ps.index(x, j + 1)] - v[ps.index(x, j)];
            line += ps.beta[j] * du * dv;
        }
        parts.vertical += ps.base->mu(x) * line;
    }
    return parts;
}

}  // namespace fraclab
