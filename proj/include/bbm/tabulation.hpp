#pragma once

#include <vector>

#include <Eigen/Core>

#include "bbm/elements.hpp"

namespace bbm {

/// Shape functions and reference gradients of one element at a fixed point set.
struct Tabulation {
  using Table = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Table values;  // points x nodes
  Table dxi;     // d/dxi
  Table deta;    // d/deta

  int num_points() const { return static_cast<int>(values.rows()); }
  int num_nodes() const { return static_cast<int>(values.cols()); }
};

inline Tabulation tabulate(const LagrangeElement& element, const std::vector<Vec2>& ref_points) {
  const auto np = static_cast<Eigen::Index>(ref_points.size());
  Tabulation t;
  t.values.resize(np, element.num_nodes());
  t.dxi.resize(np, element.num_nodes());
  t.deta.resize(np, element.num_nodes());
  for (Eigen::Index q = 0; q < np; ++q) {
    t.values.row(q) = element.values(ref_points[q]).transpose();
    const Eigen::MatrixX2d g = element.gradients(ref_points[q]);
    t.dxi.row(q) = g.col(0).transpose();
    t.deta.row(q) = g.col(1).transpose();
  }
  return t;
}

/// Reference coordinates of the edge-quadrature points on local edge k.
inline std::vector<Vec2> edge_points_on_reference(int k, const std::vector<double>& s) {
  static const Vec2 corners[3] = {Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)};
  const Vec2& a = corners[k];
  const Vec2& b = corners[(k + 1) % 3];
  std::vector<Vec2> pts;
  pts.reserve(s.size());
  for (double si : s) pts.push_back(a + si * (b - a));
  return pts;
}

}  // namespace bbm
