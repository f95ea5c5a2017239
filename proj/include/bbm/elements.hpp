#pragma once

#include <vector>

#include <Eigen/Core>

#include "bbm/mesh.hpp"

namespace bbm {

/// Equispaced Lagrange element of degree 1-4 on the reference triangle
/// (0,0), (1,0), (0,1).
///
/// Node order: the three vertices, then degree-1 nodes per local edge k
/// (running from local vertex k to vertex k+1), then interior nodes.
class LagrangeElement {
 public:
  explicit LagrangeElement(int degree);

  int degree() const { return degree_; }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  const std::vector<Vec2>& nodes() const { return nodes_; }

  /// Shape function values at a reference point.
  Eigen::VectorXd values(const Vec2& ref) const;
  /// Reference gradients, one row per shape function.
  Eigen::MatrixX2d gradients(const Vec2& ref) const;

  /// Local nodes on local edge k, ordered from vertex k to vertex k+1, end points included.
  std::vector<int> edge_nodes(int k) const;
  int num_interior_nodes() const;

 private:
  Eigen::VectorXd monomials(const Vec2& ref) const;
  Eigen::MatrixX2d monomial_gradients(const Vec2& ref) const;

  int degree_;
  std::vector<Vec2> nodes_;
  std::vector<std::pair<int, int>> exponents_;
  Eigen::MatrixXd coefficients_;  // column i: monomial coefficients of shape function i
};

LagrangeElement lagrange_element(int degree);

/// Rule on the reference triangle; weights sum to 1/2.
struct TriangleQuadrature {
  std::vector<Vec2> points;
  std::vector<double> weights;
  int exactness = 0;

  int size() const { return static_cast<int>(points.size()); }
};

/// Gauss-Legendre rule on [0,1].
struct EdgeQuadrature {
  std::vector<double> points;
  std::vector<double> weights;
  int exactness = 0;

  int size() const { return static_cast<int>(points.size()); }
};

constexpr int kMaxTriangleExactness = 12;

/// Collapsed (Duffy) product of Gauss-Jacobi and Gauss-Legendre rules, exact
/// for polynomials of total degree <= exactness_degree.
TriangleQuadrature triangle_quadrature(int exactness_degree);

/// Smallest Gauss-Legendre rule exact to exactness_degree.
EdgeQuadrature edge_quadrature(int exactness_degree);

/// n-point Gauss-Legendre rule on [0,1] (exact to degree 2n-1).
EdgeQuadrature gauss_legendre(int n);

}  // namespace bbm
