#include "fraclab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "fraclab/spectral.hpp"

namespace fraclab {

std::vector<int> ball_members(const DirichletSpace& space, int center,
                              double r) {
    require(center >= 0 && center < space.size(), "UnknownVertex",
            "ball center out of range");
    std::vector<int> members;
    for (int x = 0; x < space.size(); ++x)
        if (space.metric(center, x) <= r) members.push_back(x);
    return members;
}

BallFamily make_ball_family(
    const DirichletSpace& space,
    const std::vector<std::pair<int, double>>& centers_radii) {
    BallFamily family;
    for (auto [c, r] : centers_radii) {
        require(r > 0.0, "EmptyBall", "ball radius must be positive");
        Ball b;
        b.center = c;
        b.radius = r;
        b.members = ball_members(space, c, r);
        require(!b.members.empty(), "EmptyBall", "ball has no members");
        family.balls.push_back(std::move(b));
    }
    return family;
}

ExperimentReport doubling_constant(const DirichletSpace& space,
                                   const BallFamily& family) {
    require(!family.balls.empty(), "EmptyBall", "empty ball family");
    ExperimentReport rep;
    rep.kind = "doubling";
    rep.config["balls"] = static_cast<double>(family.balls.size());
    rep.columns = {"center", "radius", "mu_r", "mu_2r", "ratio"};
    double C = 0.0;
    for (const Ball& b : family.balls) {
        double mu_r = 0.0, mu_2r = 0.0;
        for (int x : b.members) mu_r += space.mu(x);
        for (int x : ball_members(space, b.center, 2.0 * b.radius))
            mu_2r += space.mu(x);
        const double ratio = mu_2r / mu_r;
        C = std::max(C, ratio);
        rep.trials.push_back({static_cast<double>(b.center), b.radius, mu_r,
                              mu_2r, ratio});
    }
    rep.constants["C"] = C;
    return rep;
}

std::shared_ptr<const DirichletSpace> induced_subspace(
    const DirichletSpace& space, const std::vector<int>& subset,
    std::vector<int>* back_map) {
    require(!subset.empty(), "EmptyBall", "empty vertex subset");
    std::vector<int> inv(space.size(), -1);
    std::vector<std::string> ids;
    std::vector<double> mu;
    for (std::size_t k = 0; k < subset.size(); ++k) {
        const int x = subset[k];
        require(x >= 0 && x < space.size() && inv[x] < 0, "UnknownVertex",
                "subset indices must be distinct and in range");
        inv[x] = static_cast<int>(k);
        ids.push_back(space.vertex_ids()[x]);
        mu.push_back(space.mu(x));
    }
    std::vector<std::tuple<std::string, std::string, double>> ed;
    for (const auto& e : space.edges())
        if (inv[e.u] >= 0 && inv[e.v] >= 0)
            ed.emplace_back(space.vertex_ids()[e.u], space.vertex_ids()[e.v],
                            e.w);
    const int m = static_cast<int>(subset.size());
    std::vector<double> metric(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            metric[static_cast<std::size_t>(i) * m + j] =
                space.metric(subset[i], subset[j]);
    if (back_map) *back_map = subset;
    return std::make_shared<DirichletSpace>(build_space(
        std::move(ids), std::move(mu), ed, std::move(metric)));
}

ExperimentReport poincare_constant(const DirichletSpace& space,
                                   const BallFamily& family, double Lambda,
                                   int eigen_candidates, int random_candidates,
                                   unsigned long long seed) {
    require(Lambda > 1.0, "DilationExceedsSpace",
            "dilation factor must exceed 1");
    require(!family.balls.empty(), "EmptyBall", "empty ball family");
    ExperimentReport rep;
    rep.kind = "poincare";
    rep.config["balls"] = static_cast<double>(family.balls.size());
    rep.config["Lambda"] = Lambda;
    rep.config["seed"] = static_cast<double>(seed);
    rep.columns = {"center", "radius", "candidate", "oscillation", "energy",
                   "ratio"};

    double C = 0.0;
    for (const Ball& b : family.balls) {
        const std::vector<int> dilated =
            ball_members(space, b.center, Lambda * b.radius);
        auto sub = induced_subspace(space, dilated);
        const int m = sub->size();
        std::vector<int> inner_local;  // positions of B inside Lambda B
        {
            std::vector<char> in_b(space.size(), 0);
            for (int x : b.members) in_b[x] = 1;
            for (int k = 0; k < m; ++k)
                if (in_b[dilated[k]]) inner_local.push_back(k);
        }
        const auto dec = spectral_decompose(sub, true);

        std::vector<std::vector<double>> candidates;
        for (int i = 0; i < std::min(eigen_candidates + 1, m); ++i) {
            if (dec.eigenvalues[i] <= 1e-12 * std::max(1.0, dec.eigenvalues.back()))
                continue;  // constants have zero oscillation and zero energy
            std::vector<double> u(m);
            for (int x = 0; x < m; ++x) u[x] = dec.phi_at(x, i);
            candidates.push_back(std::move(u));
        }
        std::mt19937_64 rng(seed * 1000003ull + static_cast<unsigned>(b.center));
        std::normal_distribution<double> gauss;
        for (int trial = 0; trial < random_candidates; ++trial) {
            std::vector<double> u(m);
            for (double& v : u) v = gauss(rng);
            // Smooth at the ball scale so the candidate is not pure noise.
            u = heat_apply(dec, u, 0.25 * b.radius * b.radius /
                                       std::max(1.0, dec.eigenvalues.back()));
            candidates.push_back(std::move(u));
        }

        double mu_b = 0.0, mu_lb = 0.0;
        for (int k : inner_local) mu_b += sub->mu(k);
        for (int k = 0; k < m; ++k) mu_lb += sub->mu(k);
        int cand_id = 0;
        for (const auto& u : candidates) {
            double mean = 0.0;
            for (int k : inner_local) mean += sub->mu(k) * u[k];
            mean /= mu_b;
            double osc = 0.0;
            for (int k : inner_local)
                osc += sub->mu(k) * std::abs(u[k] - mean);
            osc /= mu_b;
            const auto gam = sub->energy_measure(u, u);
            double energy = 0.0;
            for (int k = 0; k < m; ++k) energy += sub->mu(k) * gam[k];
            energy = std::sqrt(energy / mu_lb);
            if (energy <= 1e-14) {
                ++cand_id;
                continue;
            }
            const double ratio = osc / (b.radius * energy);
            C = std::max(C, ratio);
            rep.trials.push_back({static_cast<double>(b.center), b.radius,
                                  static_cast<double>(cand_id), osc, energy,
                                  ratio});
            ++cand_id;
        }
    }
    rep.constants["C"] = C;
    return rep;
}

}  // namespace fraclab
