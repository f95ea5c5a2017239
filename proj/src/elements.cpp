#include "bbm/elements.hpp"

#include <cmath>
#include <string>

#include <Eigen/LU>

#include "bbm/errors.hpp"

namespace bbm {

LagrangeElement::LagrangeElement(int degree) : degree_(degree) {
  if (degree < 1 || degree > 4) {
    throw ConfigError("lagrange_element: unsupported degree " + std::to_string(degree));
  }
  const double k = degree;
  const Vec2 corners[3] = {Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)};
  for (const auto& c : corners) nodes_.push_back(c);
  for (int e = 0; e < 3; ++e) {
    const Vec2& a = corners[e];
    const Vec2& b = corners[(e + 1) % 3];
    for (int s = 1; s < degree; ++s) nodes_.push_back(a + (b - a) * (s / k));
  }
  for (int j = 1; j < degree; ++j) {
    for (int i = 1; i + j < degree; ++i) nodes_.emplace_back(i / k, j / k);
  }

  for (int total = 0; total <= degree; ++total) {
    for (int b = 0; b <= total; ++b) exponents_.emplace_back(total - b, b);
  }

  const int n = num_nodes();
  Eigen::MatrixXd vandermonde(n, n);
  for (int i = 0; i < n; ++i) vandermonde.row(i) = monomials(nodes_[i]).transpose();
  coefficients_ = vandermonde.fullPivLu().inverse();
}

Eigen::VectorXd LagrangeElement::monomials(const Vec2& ref) const {
  Eigen::VectorXd m(exponents_.size());
  for (size_t i = 0; i < exponents_.size(); ++i) {
    const auto [a, b] = exponents_[i];
    m[i] = std::pow(ref.x(), a) * std::pow(ref.y(), b);
  }
  return m;
}

Eigen::MatrixX2d LagrangeElement::monomial_gradients(const Vec2& ref) const {
  Eigen::MatrixX2d g(exponents_.size(), 2);
  for (size_t i = 0; i < exponents_.size(); ++i) {
    const auto [a, b] = exponents_[i];
    g(i, 0) = a == 0 ? 0.0 : a * std::pow(ref.x(), a - 1) * std::pow(ref.y(), b);
    g(i, 1) = b == 0 ? 0.0 : b * std::pow(ref.x(), a) * std::pow(ref.y(), b - 1);
  }
  return g;
}

Eigen::VectorXd LagrangeElement::values(const Vec2& ref) const {
  return coefficients_.transpose() * monomials(ref);
}

Eigen::MatrixX2d LagrangeElement::gradients(const Vec2& ref) const {
  return coefficients_.transpose() * monomial_gradients(ref);
}

std::vector<int> LagrangeElement::edge_nodes(int k) const {
  std::vector<int> ids{k};
  for (int s = 0; s < degree_ - 1; ++s) ids.push_back(3 + k * (degree_ - 1) + s);
  ids.push_back((k + 1) % 3);
  return ids;
}

int LagrangeElement::num_interior_nodes() const { return (degree_ - 1) * (degree_ - 2) / 2; }

LagrangeElement lagrange_element(int degree) { return LagrangeElement(degree); }

}  // namespace bbm
