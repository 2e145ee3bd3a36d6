#include "fraclab/lattice.hpp"

#include <cmath>
#include <map>

#include "fraclab/errors.hpp"
#include "fraclab/quadrature.hpp"

namespace fraclab {

namespace {

constexpr double kTwoPi = 6.283185307179586;

double ring_eig(int j, int n) {
    return 2.0 - 2.0 * std::cos(kTwoPi * j / n);
}

DecayProfile fit_profile(const std::map<int, std::pair<double, int>>& shells,
                         int diameter, int dim, double s) {
    const int d_hi = diameter / 4;
    require(d_hi >= 6 && diameter >= 64, "WindowTooSmall",
            "lattice diameter must be >= 64 hops");
    DecayProfile prof;
    prof.target = -(static_cast<double>(dim) + 2.0 * s);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (const auto& [d, acc] : shells) {
        if (d < 3 || d > d_hi) continue;
        const double kbar = acc.first / acc.second;
        require(kbar > 0.0, "WindowTooSmall",
                "kernel shell average vanished inside the fit window");
        prof.distance.push_back(d);
        prof.kernel.push_back(kbar);
        const double lx = std::log(static_cast<double>(d));
        const double ly = std::log(kbar);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++m;
    }
    prof.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return prof;
}

}  // namespace

DirichletSpace make_torus(int nx, int ny) {
    require(nx >= 3 && ny >= 1, "BadMeshParams", "torus needs nx >= 3");
    std::vector<std::string> ids;
    std::vector<double> mu(static_cast<std::size_t>(nx) * ny, 1.0);
    std::vector<std::tuple<std::string, std::string, double>> ed;
    auto name = [&](int i, int j) {
        return "t" + std::to_string(i) + "_" + std::to_string(j);
    };
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) ids.push_back(name(i, j));
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            ed.emplace_back(name(i, j), name((i + 1) % nx, j), 1.0);
            if (ny >= 3) ed.emplace_back(name(i, j), name(i, (j + 1) % ny), 1.0);
        }
    return build_space(std::move(ids), std::move(mu), ed);
}

DecayProfile kernel_decay_profile_ring(int n, const FracConfig& cfg) {
    validate(cfg);
    require(n >= 128, "WindowTooSmall", "ring needs diameter >= 64 hops");
    const double s = cfg.s;
    const double abs_gamma = -gamma_minus(s);

    std::vector<double> J(n, 0.0);
    for (int j = 1; j < n; ++j)
        J[j] = kernel_mode_coefficient(ring_eig(j, n), s, cfg.quad_nodes);

    std::map<int, std::pair<double, int>> shells;
    for (int d = 1; d <= n / 2; ++d) {
        double k = 0.0;
        for (int j = 1; j < n; ++j) k += J[j] * std::cos(kTwoPi * j * d / n);
        k /= n;
        if (d == 1) k += abs_gamma;  // adjacency term of the resummation
        auto& acc = shells[d];
        acc.first += k;
        acc.second += 1;
    }
    return fit_profile(shells, n / 2, 1, s);
}

DecayProfile kernel_decay_profile_torus(int nx, int ny, const FracConfig& cfg) {
    if (ny < 3) return kernel_decay_profile_ring(nx, cfg);
    validate(cfg);
    const double s = cfg.s;
    const double abs_gamma = -gamma_minus(s);

    // J over the product spectrum, then a separable cosine transform:
    // K(dx,dy) = (1/(nx ny)) sum_j cos(2 pi j dx / nx) B[j][dy].
    std::vector<double> J(static_cast<std::size_t>(nx) * ny);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < nx; ++j)
        for (int k = 0; k < ny; ++k) {
            const double lam = ring_eig(j, nx) + ring_eig(k, ny);
            J[static_cast<std::size_t>(j) * ny + k] =
                lam > 0.0 ? kernel_mode_coefficient(lam, s, cfg.quad_nodes)
                          : 0.0;
        }
    const int mdy = ny / 2;
    std::vector<double> B(static_cast<std::size_t>(nx) * (mdy + 1));
#pragma omp parallel for schedule(static)
    for (int j = 0; j < nx; ++j)
        for (int dy = 0; dy <= mdy; ++dy) {
            double acc = 0.0;
            for (int k = 0; k < ny; ++k)
                acc += J[static_cast<std::size_t>(j) * ny + k] *
                       std::cos(kTwoPi * k * dy / ny);
            B[static_cast<std::size_t>(j) * (mdy + 1) + dy] = acc;
        }

    std::map<int, std::pair<double, int>> shells;
    for (int dx = 0; dx <= nx / 2; ++dx)
        for (int dy = 0; dy <= mdy; ++dy) {
            if (dx == 0 && dy == 0) continue;
            double k = 0.0;
            for (int j = 0; j < nx; ++j)
                k += std::cos(kTwoPi * j * dx / nx) *
                     B[static_cast<std::size_t>(j) * (mdy + 1) + dy];
            k /= static_cast<double>(nx) * ny;
            if (dx + dy == 1) k += abs_gamma;
            auto& acc = shells[dx + dy];
            acc.first += k;
            acc.second += 1;
        }
    return fit_profile(shells, nx / 2 + ny / 2, 2, s);
}

DecayProfile kernel_decay_profile(const DirichletSpace& space, int nx, int ny,
                                  const FracConfig& cfg) {
    require(space.size() == nx * std::max(ny, 1), "ShapeMismatch",
            "space size does not match the stated lattice shape");
    const int expect_edges =
        (ny >= 3) ? 2 * nx * ny : (ny == 1 ? nx : -1);
    require(expect_edges == static_cast<int>(space.edges().size()),
            "ShapeMismatch", "space is not the standard torus lattice");
    for (const auto& e : space.edges())
        require(e.w == 1.0, "ShapeMismatch", "torus must carry unit weights");
    for (int x = 0; x < space.size(); ++x)
        require(space.mu(x) == 1.0, "ShapeMismatch",
                "torus must carry unit measure");
    return (ny >= 3) ? kernel_decay_profile_torus(nx, ny, cfg)
                     : kernel_decay_profile_ring(nx, cfg);
}

}  // namespace fraclab
