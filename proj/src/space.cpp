#include "fraclab/space.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>
#include <set>
#include <tuple>

#include "fraclab/errors.hpp"

namespace fraclab {

namespace {

std::vector<double> hop_metric(int n,
                               const std::vector<std::vector<std::pair<int, double>>>& adj) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> d(static_cast<std::size_t>(n) * n, inf);
    for (int src = 0; src < n; ++src) {
        double* row = d.data() + static_cast<std::size_t>(src) * n;
        row[src] = 0.0;
        std::deque<int> queue{src};
        while (!queue.empty()) {
            int x = queue.front();
            queue.pop_front();
            for (auto [y, w] : adj[x]) {
                if (row[y] == inf) {
                    row[y] = row[x] + 1.0;
                    queue.push_back(y);
                }
            }
        }
    }
    return d;
}

void check_metric_axioms(int n, const std::vector<double>& d) {
    auto at = [&](int x, int y) { return d[static_cast<std::size_t>(x) * n + y]; };
    for (int x = 0; x < n; ++x) {
        require(at(x, x) == 0.0, "MetricAxiomViolation", "d(x,x) != 0");
        for (int y = 0; y < n; ++y) {
            require(at(x, y) >= 0.0 && std::isfinite(at(x, y)) == std::isfinite(at(y, x)),
                    "MetricAxiomViolation", "negative or mismatched distance");
            require(std::abs(at(x, y) - at(y, x)) <= 1e-12 * (1.0 + std::abs(at(x, y))),
                    "MetricAxiomViolation", "metric not symmetric");
            if (x != y)
                require(at(x, y) > 0.0, "MetricAxiomViolation",
                        "distinct vertices at distance 0");
        }
    }
    auto triangle = [&](int x, int y, int z) {
        if (std::isfinite(at(x, z)) && std::isfinite(at(z, y)))
            require(at(x, y) <= at(x, z) + at(z, y) + 1e-12,
                    "MetricAxiomViolation", "triangle inequality fails");
    };
    if (n <= 500) {
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                for (int z = 0; z < n; ++z) triangle(x, y, z);
    } else {
        std::mt19937_64 rng(0x5eedu);
        std::uniform_int_distribution<int> pick(0, n - 1);
        for (int trial = 0; trial < 200000; ++trial)
            triangle(pick(rng), pick(rng), pick(rng));
    }
}

}  // namespace

int DirichletSpace::index_of(const std::string& id) const {
    auto it = index_.find(id);
    return it == index_.end() ? -1 : it->second;
}

std::vector<double> DirichletSpace::apply_generator(const std::vector<double>& f) const {
    require(static_cast<int>(f.size()) == size(), "ShapeMismatch",
            "function length != vertex count");
    std::vector<double> out(f.size(), 0.0);
    for (int x = 0; x < size(); ++x) {
        double acc = 0.0;
        for (auto [y, w] : adj_[x]) acc += w * (f[y] - f[x]);
        out[x] = acc / mu_[x];
    }
    return out;
}

double DirichletSpace::dirichlet_form(const std::vector<double>& u,
                                      const std::vector<double>& v) const {
    require(u.size() == v.size() && static_cast<int>(u.size()) == size(),
            "ShapeMismatch", "function length != vertex count");
    double acc = 0.0;
    for (const Edge& e : edges_)
        acc += e.w * (u[e.u] - u[e.v]) * (v[e.u] - v[e.v]);
    return acc;
}

std::vector<double> DirichletSpace::energy_measure(const std::vector<double>& u,
                                                   const std::vector<double>& v) const {
    require(u.size() == v.size() && static_cast<int>(u.size()) == size(),
            "ShapeMismatch", "function length != vertex count");
    std::vector<double> g(u.size(), 0.0);
    for (int x = 0; x < size(); ++x) {
        double acc = 0.0;
        for (auto [y, w] : adj_[x]) acc += w * (u[x] - u[y]) * (v[x] - v[y]);
        g[x] = acc / (2.0 * mu_[x]);
    }
    return g;
}

double DirichletSpace::inner(const std::vector<double>& u,
                             const std::vector<double>& v) const {
    double acc = 0.0;
    for (int x = 0; x < size(); ++x) acc += mu_[x] * u[x] * v[x];
    return acc;
}

DirichletSpace build_space(
    std::vector<std::string> vertices, std::vector<double> measure,
    const std::vector<std::tuple<std::string, std::string, double>>& conductances,
    std::optional<std::vector<double>> metric_override) {
    const int n = static_cast<int>(vertices.size());
    require(n > 0, "EmptySpace", "no vertices");
    require(measure.size() == vertices.size(), "ShapeMismatch",
            "measure length != vertex count");

    DirichletSpace sp;
    sp.ids_ = std::move(vertices);
    sp.mu_ = std::move(measure);
    for (int i = 0; i < n; ++i) {
        require(sp.mu_[i] > 0.0, "NonPositiveMeasure",
                "mu(" + sp.ids_[i] + ") must be positive");
        auto [it, fresh] = sp.index_.emplace(sp.ids_[i], i);
        require(fresh, "DuplicateVertexId", "duplicate id " + sp.ids_[i]);
        sp.total_mass_ += sp.mu_[i];
    }

    // Symmetric conductances: accept each unordered pair once, or twice with
    // equal weights.
    std::map<std::pair<int, int>, double> pairs;
    for (const auto& [a, b, w] : conductances) {
        int u = sp.index_of(a), v = sp.index_of(b);
        require(u >= 0 && v >= 0, "UnknownVertex", "edge endpoint not a vertex");
        require(u != v || w == 0.0, "NonSymmetricConductance", "self loop w_xx != 0");
        require(w >= 0.0, "NonSymmetricConductance", "negative conductance");
        if (u == v || w == 0.0) continue;
        auto key = std::minmax(u, v);
        auto it = pairs.find({key.first, key.second});
        if (it == pairs.end()) {
            pairs[{key.first, key.second}] = w;
        } else {
            require(std::abs(it->second - w) <= 1e-12 * (1.0 + std::abs(w)),
                    "NonSymmetricConductance",
                    "conflicting weights for edge " + a + "-" + b);
        }
    }
    sp.adj_.assign(n, {});
    sp.wdeg_.assign(n, 0.0);
    for (const auto& [key, w] : pairs) {
        sp.edges_.push_back({key.first, key.second, w});
        sp.adj_[key.first].push_back({key.second, w});
        sp.adj_[key.second].push_back({key.first, w});
        sp.wdeg_[key.first] += w;
        sp.wdeg_[key.second] += w;
    }

    // Connected components via BFS.
    std::vector<int> comp(n, -1);
    int ncomp = 0;
    for (int src = 0; src < n; ++src) {
        if (comp[src] >= 0) continue;
        comp[src] = ncomp;
        std::deque<int> queue{src};
        while (!queue.empty()) {
            int x = queue.front();
            queue.pop_front();
            for (auto [y, w] : sp.adj_[x])
                if (comp[y] < 0) {
                    comp[y] = ncomp;
                    queue.push_back(y);
                }
        }
        ++ncomp;
    }
    sp.components_ = ncomp;

    if (metric_override) {
        require(metric_override->size() == static_cast<std::size_t>(n) * n,
                "ShapeMismatch", "metric matrix must be n x n");
        sp.metric_ = std::move(*metric_override);
    } else {
        sp.metric_ = hop_metric(n, sp.adj_);
    }
    check_metric_axioms(n, sp.metric_);
    return sp;
}

DirichletSpace make_ring(int n, double mu, double w) {
    std::vector<std::string> ids;
    std::vector<double> m(n, mu);
    std::vector<std::tuple<std::string, std::string, double>> ed;
    for (int i = 0; i < n; ++i) ids.push_back("v" + std::to_string(i));
    for (int i = 0; i < n; ++i)
        ed.emplace_back(ids[i], ids[(i + 1) % n], w);
    return build_space(std::move(ids), std::move(m), ed);
}

DirichletSpace make_path(int n, double mu, double w) {
    std::vector<std::string> ids;
    std::vector<double> m(n, mu);
    std::vector<std::tuple<std::string, std::string, double>> ed;
    for (int i = 0; i < n; ++i) ids.push_back("v" + std::to_string(i));
    for (int i = 0; i + 1 < n; ++i) ed.emplace_back(ids[i], ids[i + 1], w);
    return build_space(std::move(ids), std::move(m), ed);
}

DirichletSpace make_grid(int nx, int ny, double mu, double w) {
    std::vector<std::string> ids;
    std::vector<double> m(static_cast<std::size_t>(nx) * ny, mu);
    std::vector<std::tuple<std::string, std::string, double>> ed;
    auto name = [&](int i, int j) {
        return "g" + std::to_string(i) + "_" + std::to_string(j);
    };
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) ids.push_back(name(i, j));
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            if (i + 1 < nx) ed.emplace_back(name(i, j), name(i + 1, j), w);
            if (j + 1 < ny) ed.emplace_back(name(i, j), name(i, j + 1), w);
        }
    return build_space(std::move(ids), std::move(m), ed);
}

DirichletSpace make_two_point() {
    return build_space({"a", "b"}, {1.0, 1.0}, {{"a", "b", 1.0}});
}

}  // namespace fraclab
