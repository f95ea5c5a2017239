#pragma once

#include <memory>
#include <vector>

#include <Eigen/SparseCore>

#include "bbm/elements.hpp"
#include "bbm/space.hpp"
#include "bbm/tabulation.hpp"

namespace bbm {

using SparseMatrix = Eigen::SparseMatrix<double>;

struct ScalarNormMatrices {
  SparseMatrix l2;
  SparseMatrix h1;
};

struct VectorNormMatrices {
  SparseMatrix l2;
  SparseMatrix hdiv;    // ||u||^2 + ||div u||^2
  SparseMatrix h1;      // ||u||^2 + ||grad u||^2
  SparseMatrix triple;  // hdiv + h ||div u||_{dO}^2 + h^{-1} ||u.n||_{dO}^2
};

/// Cell-wise quadrature assembly on a pair of spaces sharing one mesh: a
/// scalar space for the elevation (which also carries the projected depth)
/// and a vector space for the velocity.
///
/// Forms, with D the depth field passed in:
///   A(phi, chi) = (phi, chi) + 1/6 (D grad phi, D grad chi)
///   B(phi, chi) = (D phi, D chi) + 1/6 (div(D^2 phi), div(D^2 chi))
///                 - 1/6 <div(D^2 phi), D^2 chi.n> - 1/6 <D^2 phi.n, div(D^2 chi)>
///                 + gamma/h <D^2 phi.n, chi.n>
class Assembler {
 public:
  /// Exactness defaults to 2*max(degree) + 3 for both cell and edge rules.
  Assembler(std::shared_ptr<const FunctionSpace> scalar_space,
            std::shared_ptr<const FunctionSpace> vector_space, int volume_exactness = -1,
            int edge_exactness = -1);

  const FunctionSpace& scalar_space() const { return *scalar_; }
  const FunctionSpace& vector_space() const { return *vector_; }
  const std::shared_ptr<const FunctionSpace>& scalar_space_ptr() const { return scalar_; }
  const std::shared_ptr<const FunctionSpace>& vector_space_ptr() const { return vector_; }
  const TriangleQuadrature& quadrature() const { return quad_; }
  const EdgeQuadrature& edge_rule() const { return edge_quad_; }

  SparseMatrix A(const Field& depth) const;
  /// h <= 0 selects a per-edge penalty length (diameter of the owning cell).
  SparseMatrix B(const Field& depth, double gamma, double h) const;

  /// out_i = ((D + eta) u, grad chi_i).
  void mass_rhs(const Field& depth, const Eigen::VectorXd& eta, const Eigen::VectorXd& u,
                Eigen::VectorXd& out) const;
  /// out_i = -(grad(g eta + |u|^2/2), D^2 chi_i).
  void momentum_rhs(const Field& depth, const Eigen::VectorXd& eta, const Eigen::VectorXd& u, double g,
                    Eigen::VectorXd& out) const;

  /// Depth samples at the cell quadrature points, reused by rhs().
  struct RhsCache {
    std::vector<double> flux_depth;  // D at (cell, q)
    std::vector<double> weight;      // quadrature weight * |det J| * D_w^2 at (cell, q)
    std::vector<double> jw;          // quadrature weight * |det J| at (cell, q)
  };
  RhsCache make_rhs_cache(const Field& flux_depth, const Field& weight_depth) const;
  /// mass_rhs(flux_depth) and momentum_rhs(weight_depth) in one pass over the cells.
  void rhs(const RhsCache& cache, const Eigen::VectorXd& eta, const Eigen::VectorXd& u, double g,
           Eigen::VectorXd& mass_out, Eigen::VectorXd& momentum_out) const;

  /// (f, chi_i) over the scalar space.
  Eigen::VectorXd scalar_load(const ScalarFn& f) const;
  /// (f, D^2 chi_i) over the vector space.
  Eigen::VectorXd weighted_vector_load(const VectorFn& f, const Field& depth) const;

  /// A(w, chi_i) for an analytic w.
  Eigen::VectorXd A_pairing(const Field& depth, const ScalarFunction& w) const;
  /// B(w, chi_i) for an analytic w, boundary terms included.
  Eigen::VectorXd B_pairing(const Field& depth, double gamma, double h, const VectorFunction& w) const;

  /// Values available to pointwise integrands.
  struct PointValues {
    Vec2 x;
    double depth;
    double eta;
    Vec2 u;
  };
  /// Quadrature of f over the mesh with eta, u given as coefficient vectors.
  double integrate(const Field& depth, const Eigen::VectorXd& eta, const Eigen::VectorXd& u,
                   const std::function<double(const PointValues&)>& f) const;

  ScalarNormMatrices scalar_norms() const;
  VectorNormMatrices vector_norms(double h) const;

 private:
  struct DepthAt {
    double value;
    Vec2 grad;
  };
  DepthAt depth_at(const Field& depth, int cell, const Tabulation& tab, int q) const;
  void check_depth(const Field& depth) const;

  std::shared_ptr<const FunctionSpace> scalar_;
  std::shared_ptr<const FunctionSpace> vector_;
  TriangleQuadrature quad_;
  EdgeQuadrature edge_quad_;
  Tabulation scalar_tab_;
  Tabulation vector_tab_;
  std::array<Tabulation, 3> scalar_edge_tab_;
  std::array<Tabulation, 3> vector_edge_tab_;
  std::vector<CellGeometry> geometry_;
};

SparseMatrix assemble_A(std::shared_ptr<const FunctionSpace> space_r, const Field& depth);
SparseMatrix assemble_B(std::shared_ptr<const FunctionSpace> space_p, const Field& depth, double gamma,
                        double h);
Eigen::VectorXd assemble_mass_rhs(std::shared_ptr<const FunctionSpace> space_r, const Field& depth,
                                  const Field& eta, const Field& u);
Eigen::VectorXd assemble_momentum_rhs(std::shared_ptr<const FunctionSpace> space_p, const Field& depth,
                                      const Field& eta, const Field& u, double g);

}  // namespace bbm
