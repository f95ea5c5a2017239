#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "bbm/elements.hpp"
#include "bbm/mesh.hpp"

namespace bbm {

using ScalarFn = std::function<double(const Vec2&)>;
using VectorFn = std::function<Vec2(const Vec2&)>;

/// Scalar function with its gradient.
struct ScalarFunction {
  ScalarFn value;
  VectorFn gradient;
};

/// Vector function with its Jacobian J(i,j) = d u_i / d x_j.
struct VectorFunction {
  VectorFn value;
  std::function<Mat2(const Vec2&)> jacobian;

  double divergence(const Vec2& x) const { return jacobian(x).trace(); }
};

enum class Rank { Scalar = 1, Vector = 2 };

struct BoundaryDof {
  int dof = -1;  // scalar DOF index
  Vec2 normal;   // outward normal of the boundary edge the node lies on
};

/// Continuous Lagrange space S_h (scalar) or S_h x S_h (vector).
///
/// Vector coefficients are stored as two stacked scalar blocks: all
/// x-components, then all y-components.
class FunctionSpace {
 public:
  FunctionSpace(std::shared_ptr<const Mesh> mesh, int degree, Rank rank = Rank::Scalar);

  const Mesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const Mesh>& mesh_ptr() const { return mesh_; }
  const LagrangeElement& element() const { return element_; }
  int degree() const { return element_.degree(); }
  Rank rank() const { return rank_; }
  int components() const { return static_cast<int>(rank_); }

  int num_scalar_dofs() const { return num_scalar_dofs_; }
  int dim() const { return num_scalar_dofs_ * components(); }
  int nodes_per_cell() const { return element_.num_nodes(); }

  /// Scalar DOF indices of cell c, in local node order.
  std::span<const int> cell_dofs(int c) const {
    return {cell_dofs_.data() + static_cast<size_t>(c) * nodes_per_cell(),
            static_cast<size_t>(nodes_per_cell())};
  }
  const std::vector<Vec2>& dof_coords() const { return dof_coords_; }
  /// One entry per (node, boundary edge) pair; corner nodes appear twice.
  const std::vector<BoundaryDof>& boundary_dofs() const { return boundary_dofs_; }

 private:
  std::shared_ptr<const Mesh> mesh_;
  LagrangeElement element_;
  Rank rank_;
  int num_scalar_dofs_ = 0;
  std::vector<int> cell_dofs_;
  std::vector<Vec2> dof_coords_;
  std::vector<BoundaryDof> boundary_dofs_;
};

/// Closed-form scalar DOF count of a degree-d space on an nx x ny structured mesh.
inline long structured_dof_count(int nx, int ny, int degree) {
  return static_cast<long>(degree * nx + 1) * (degree * ny + 1);
}

/// Coefficient vector of a discrete function.
struct Field {
  std::shared_ptr<const FunctionSpace> space;
  Eigen::VectorXd coeffs;

  Field() = default;
  explicit Field(std::shared_ptr<const FunctionSpace> s)
      : space(std::move(s)), coeffs(Eigen::VectorXd::Zero(space->dim())) {}
  Field(std::shared_ptr<const FunctionSpace> s, Eigen::VectorXd c);

  /// Block of component k (0 or 1) of a vector field.
  auto component(int k) const {
    return coeffs.segment(static_cast<Eigen::Index>(k) * space->num_scalar_dofs(),
                          space->num_scalar_dofs());
  }
};

Field interpolate(std::shared_ptr<const FunctionSpace> space, const ScalarFn& f);
Field interpolate(std::shared_ptr<const FunctionSpace> space, const VectorFn& f);

/// L2 projection; quadrature exactness defaults to 2*degree + 3.
Field l2_project(std::shared_ptr<const FunctionSpace> space, const ScalarFn& f, int exactness = -1);
Field l2_project(std::shared_ptr<const FunctionSpace> space, const VectorFn& f, int exactness = -1);

/// Field value restricted to cell c (the point may lie on the cell boundary).
Eigen::VectorXd eval_in_cell(const Field& field, int cell, const Vec2& x);

/// Cached location of a point in a space's mesh; evaluates any field of that space.
class PointProbe {
 public:
  PointProbe(std::shared_ptr<const FunctionSpace> space, const Vec2& point);

  int cell() const { return cell_; }
  const Vec2& point() const { return point_; }
  double scalar(const Field& field) const;
  Vec2 vector(const Field& field) const;

 private:
  std::shared_ptr<const FunctionSpace> space_;
  Vec2 point_;
  int cell_ = -1;
  Eigen::VectorXd basis_;
};

double eval_scalar_at(const Field& field, const Vec2& point);
Vec2 eval_vector_at(const Field& field, const Vec2& point);

}  // namespace bbm
