#include "bbm/space.hpp"

#include <string>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "bbm/errors.hpp"
#include "bbm/tabulation.hpp"

namespace bbm {

FunctionSpace::FunctionSpace(std::shared_ptr<const Mesh> mesh, int degree, Rank rank)
    : mesh_(std::move(mesh)), element_(degree), rank_(rank) {
  const Mesh& m = *mesh_;
  const int k = degree;
  const int nv = m.num_vertices();
  const int ne = m.num_edges();
  const int per_edge = k - 1;
  const int per_cell = element_.num_interior_nodes();
  num_scalar_dofs_ = nv + ne * per_edge + m.num_cells() * per_cell;

  const int nn = element_.num_nodes();
  cell_dofs_.resize(static_cast<size_t>(m.num_cells()) * nn);
  dof_coords_.resize(num_scalar_dofs_);
  for (int c = 0; c < m.num_cells(); ++c) {
    int* dofs = cell_dofs_.data() + static_cast<size_t>(c) * nn;
    const auto& verts = m.cell(c);
    for (int i = 0; i < 3; ++i) dofs[i] = verts[i];
    for (int le = 0; le < 3; ++le) {
      const int e = m.cell_edges(c)[le];
      // Global edge DOFs run from the lower to the higher vertex index.
      const bool forward = verts[le] == m.edge(e)[0];
      for (int s = 0; s < per_edge; ++s) {
        const int gs = forward ? s : per_edge - 1 - s;
        dofs[3 + le * per_edge + s] = nv + e * per_edge + gs;
      }
    }
    for (int s = 0; s < per_cell; ++s) {
      dofs[3 + 3 * per_edge + s] = nv + ne * per_edge + c * per_cell + s;
    }
    const CellGeometry g = m.geometry(c);
    for (int i = 0; i < nn; ++i) dof_coords_[dofs[i]] = g.map(element_.nodes()[i]);
  }

  for (const auto& be : m.boundary_edges()) {
    const auto dofs = cell_dofs(be.cell);
    for (int local : element_.edge_nodes(be.local_edge)) {
      const int dof = dofs[local];
      bool seen = false;
      for (const auto& bd : boundary_dofs_) {
        if (bd.dof == dof && bd.normal.isApprox(be.normal)) {
          seen = true;
          break;
        }
      }
      if (!seen) boundary_dofs_.push_back({dof, be.normal});
    }
  }
}

Field::Field(std::shared_ptr<const FunctionSpace> s, Eigen::VectorXd c)
    : space(std::move(s)), coeffs(std::move(c)) {
  if (coeffs.size() != space->dim()) {
    throw ConfigError("Field: coefficient length " + std::to_string(coeffs.size()) +
                      " does not match space dimension " + std::to_string(space->dim()));
  }
}

Field interpolate(std::shared_ptr<const FunctionSpace> space, const ScalarFn& f) {
  if (space->rank() != Rank::Scalar) throw ConfigError("interpolate: scalar function on vector space");
  Field out(space);
  const auto& xs = space->dof_coords();
  for (int i = 0; i < space->num_scalar_dofs(); ++i) out.coeffs[i] = f(xs[i]);
  return out;
}

Field interpolate(std::shared_ptr<const FunctionSpace> space, const VectorFn& f) {
  if (space->rank() != Rank::Vector) throw ConfigError("interpolate: vector function on scalar space");
  Field out(space);
  const int n = space->num_scalar_dofs();
  const auto& xs = space->dof_coords();
  for (int i = 0; i < n; ++i) {
    const Vec2 v = f(xs[i]);
    out.coeffs[i] = v.x();
    out.coeffs[n + i] = v.y();
  }
  return out;
}

namespace {

// Scalar mass matrix and the loads (f_k, phi_i) for each component function.
Eigen::MatrixXd project_components(const FunctionSpace& space,
                                   const std::function<Eigen::VectorXd(const Vec2&)>& f,
                                   int components, int exactness) {
  const Mesh& mesh = space.mesh();
  const TriangleQuadrature quad = triangle_quadrature(exactness < 0 ? 2 * space.degree() + 3 : exactness);
  const Tabulation tab = tabulate(space.element(), quad.points);
  const int n = space.num_scalar_dofs();
  const int nn = space.nodes_per_cell();

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<size_t>(mesh.num_cells()) * nn * nn);
  Eigen::MatrixXd load = Eigen::MatrixXd::Zero(n, components);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry g = mesh.geometry(c);
    const auto dofs = space.cell_dofs(c);
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(nn, nn);
    Eigen::MatrixXd local_load = Eigen::MatrixXd::Zero(nn, components);
    for (int q = 0; q < quad.size(); ++q) {
      const double w = quad.weights[q] * std::abs(g.det);
      const auto phi = tab.values.row(q);
      local.noalias() += w * phi.transpose() * phi;
      const Eigen::VectorXd fx = f(g.map(quad.points[q]));
      local_load.noalias() += w * phi.transpose() * fx.transpose();
    }
    for (int i = 0; i < nn; ++i) {
      for (int j = 0; j < nn; ++j) triplets.emplace_back(dofs[i], dofs[j], local(i, j));
      load.row(dofs[i]) += local_load.row(i);
    }
  }
  Eigen::SparseMatrix<double> mass(n, n);
  mass.setFromTriplets(triplets.begin(), triplets.end());
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> solver(mass);
  if (solver.info() != Eigen::Success) throw NumericalError("l2_project: mass matrix factorization failed");
  Eigen::MatrixXd out(n, components);
  for (int k = 0; k < components; ++k) out.col(k) = solver.solve(load.col(k));
  return out;
}

}  // namespace

Field l2_project(std::shared_ptr<const FunctionSpace> space, const ScalarFn& f, int exactness) {
  if (space->rank() != Rank::Scalar) throw ConfigError("l2_project: scalar function on vector space");
  const Eigen::MatrixXd c = project_components(
      *space, [&](const Vec2& x) { return Eigen::VectorXd::Constant(1, f(x)); }, 1, exactness);
  return Field(space, c.col(0));
}

Field l2_project(std::shared_ptr<const FunctionSpace> space, const VectorFn& f, int exactness) {
  if (space->rank() != Rank::Vector) throw ConfigError("l2_project: vector function on scalar space");
  const Eigen::MatrixXd c = project_components(
      *space, [&](const Vec2& x) { return Eigen::VectorXd(f(x)); }, 2, exactness);
  Eigen::VectorXd coeffs(space->dim());
  coeffs << c.col(0), c.col(1);
  return Field(space, std::move(coeffs));
}

Eigen::VectorXd eval_in_cell(const Field& field, int cell, const Vec2& x) {
  const FunctionSpace& space = *field.space;
  const CellGeometry g = space.mesh().geometry(cell);
  const Eigen::VectorXd phi = space.element().values(g.to_reference(x));
  const auto dofs = space.cell_dofs(cell);
  const int n = space.num_scalar_dofs();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(space.components());
  for (int k = 0; k < space.components(); ++k) {
    for (int i = 0; i < space.nodes_per_cell(); ++i) out[k] += phi[i] * field.coeffs[k * n + dofs[i]];
  }
  return out;
}

PointProbe::PointProbe(std::shared_ptr<const FunctionSpace> space, const Vec2& point)
    : space_(std::move(space)), point_(point) {
  const auto cell = space_->mesh().locate(point);
  if (!cell) {
    throw QueryError("point (" + std::to_string(point.x()) + ", " + std::to_string(point.y()) +
                     ") lies outside the mesh");
  }
  cell_ = *cell;
  basis_ = space_->element().values(space_->mesh().geometry(cell_).to_reference(point));
}

double PointProbe::scalar(const Field& field) const {
  const auto dofs = space_->cell_dofs(cell_);
  double v = 0.0;
  for (int i = 0; i < space_->nodes_per_cell(); ++i) v += basis_[i] * field.coeffs[dofs[i]];
  return v;
}

Vec2 PointProbe::vector(const Field& field) const {
  const auto dofs = space_->cell_dofs(cell_);
  const int n = space_->num_scalar_dofs();
  Vec2 v = Vec2::Zero();
  for (int i = 0; i < space_->nodes_per_cell(); ++i) {
    v.x() += basis_[i] * field.coeffs[dofs[i]];
    v.y() += basis_[i] * field.coeffs[n + dofs[i]];
  }
  return v;
}

double eval_scalar_at(const Field& field, const Vec2& point) {
  return PointProbe(field.space, point).scalar(field);
}

Vec2 eval_vector_at(const Field& field, const Vec2& point) {
  return PointProbe(field.space, point).vector(field);
}

}  // namespace bbm
