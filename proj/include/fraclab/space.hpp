#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fraclab {

/// Finite weighted graph carrying a Dirichlet space: vertex measure mu,
/// symmetric edge conductances, and a metric (hop-count shortest path by
/// default, explicit override allowed).  Immutable after construction.
class DirichletSpace {
public:
    struct Edge {
        int u;
        int v;
        double w;
    };

    int size() const { return static_cast<int>(mu_.size()); }
    const std::vector<std::string>& vertex_ids() const { return ids_; }
    const std::vector<double>& measure() const { return mu_; }
    double mu(int x) const { return mu_[x]; }
    double total_mass() const { return total_mass_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<std::pair<int, double>>& neighbors(int x) const {
        return adj_[x];
    }
    double weighted_degree(int x) const { return wdeg_[x]; }
    double metric(int x, int y) const { return metric_[x * size() + y]; }
    const std::vector<double>& metric_matrix() const { return metric_; }
    int components() const { return components_; }
    int index_of(const std::string& id) const;  // -1 when absent

    /// (Lf)(x) = mu(x)^{-1} sum_y w_xy (f(y) - f(x)); non-positive generator.
    std::vector<double> apply_generator(const std::vector<double>& f) const;

    /// E(u,v) = (1/2) sum_{x,y} w_xy (u(x)-u(y))(v(x)-v(y)).
    double dirichlet_form(const std::vector<double>& u,
                          const std::vector<double>& v) const;

    /// Carre-du-champ density Gamma(u,v)(x); sums against mu back to E(u,v).
    std::vector<double> energy_measure(const std::vector<double>& u,
                                       const std::vector<double>& v) const;

    double inner(const std::vector<double>& u,
                 const std::vector<double>& v) const;  // <u,v>_mu

    friend DirichletSpace build_space(
        std::vector<std::string> vertices, std::vector<double> measure,
        const std::vector<std::tuple<std::string, std::string, double>>& conductances,
        std::optional<std::vector<double>> metric_override);

private:
    DirichletSpace() = default;

    std::vector<std::string> ids_;
    std::vector<double> mu_;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::pair<int, double>>> adj_;
    std::vector<double> wdeg_;
    std::vector<double> metric_;  // row-major size() x size()
    std::map<std::string, int> index_;
    double total_mass_ = 0.0;
    int components_ = 0;
};

/// Validates measures, conductance symmetry and the metric axioms
/// (exhaustively for <= 500 vertices, sampled above).
DirichletSpace build_space(
    std::vector<std::string> vertices, std::vector<double> measure,
    const std::vector<std::tuple<std::string, std::string, double>>& conductances,
    std::optional<std::vector<double>> metric_override = std::nullopt);

// Fixture generators.
DirichletSpace make_ring(int n, double mu = 1.0, double w = 1.0);
DirichletSpace make_path(int n, double mu = 1.0, double w = 1.0);
DirichletSpace make_grid(int nx, int ny, double mu = 1.0, double w = 1.0);
DirichletSpace make_two_point();

}  // namespace fraclab
