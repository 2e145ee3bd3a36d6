#pragma once

#include <memory>
#include <vector>

#include "fraclab/extension.hpp"
#include "fraclab/space.hpp"

namespace fraclab {

/// The product Dirichlet space X_a = X x [-Y, Y] with measure mu x nu_a:
/// a genuine DirichletSpace whose horizontal edges carry w_xx' m_j, whose
/// vertical edges carry mu(x) beta_{j+1/2}, and whose metric is
/// d_a((x,y),(x',y'))^2 = d(x,x')^2 + |y - y'|^2.  Vertex (x, j) sits at
/// index x * ny + j, so the closed-form Cartesian decomposition applies
/// with the y-line as second factor.
struct ProductSpace {
    std::shared_ptr<const DirichletSpace> base;
    std::shared_ptr<const DirichletSpace> product;
    std::shared_ptr<const DirichletSpace> y_line;  // weighted path factor
    std::vector<double> y;     // 2N+1 nodes, symmetric about 0
    std::vector<double> mass;  // nu_a cell masses per node
    std::vector<double> beta;  // 2N face coefficients
    double s = 0.5;
    double a = 0.0;

    int ny() const { return static_cast<int>(y.size()); }
    int index(int x, int j) const { return x * ny() + j; }
};

/// Mirrors the half mesh across 0 (the origin cell gets both half masses).
ProductSpace build_product_space(std::shared_ptr<const DirichletSpace> base,
                                 double s, const YMesh& half_mesh);

/// Convenience: uniform or graded half mesh of N segments up to Y.
ProductSpace build_product_space(std::shared_ptr<const DirichletSpace> base,
                                 double s, double Y, int N,
                                 double gamma = 1.0);

/// Exact split of the product form: E_a(u, v) = horizontal + vertical with
/// horizontal = sum_j m_j E(u(., y_j), v(., y_j)).
struct EnergyParts {
    double horizontal = 0.0;
    double vertical = 0.0;
    double total() const { return horizontal + vertical; }
};

EnergyParts product_energy_parts(const ProductSpace& ps,
                                 const std::vector<double>& u,
                                 const std::vector<double>& v);

}  // namespace fraclab
