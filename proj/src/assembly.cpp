#include "bbm/assembly.hpp"

#include <algorithm>
#include <cmath>

#include "bbm/errors.hpp"

namespace bbm {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

// Physical gradients of all shape functions at point q of a tabulation.
void physical_gradients(const CellGeometry& g, const Tabulation& tab, int q, double* gx, double* gy) {
  const Mat2& inv = g.inv_jacobian;
  const double* dxi = tab.dxi.row(q).data();
  const double* deta = tab.deta.row(q).data();
  for (int i = 0; i < tab.num_nodes(); ++i) {
    gx[i] = inv(0, 0) * dxi[i] + inv(1, 0) * deta[i];
    gy[i] = inv(0, 1) * dxi[i] + inv(1, 1) * deta[i];
  }
}

// Symmetrize the local matrix and scatter it.
void scatter(const Eigen::MatrixXd& local, const std::vector<int>& rows, Triplets& out) {
  const auto n = static_cast<int>(rows.size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out.emplace_back(rows[i], rows[j], 0.5 * (local(i, j) + local(j, i)));
  }
}

SparseMatrix from_triplets(int n, const Triplets& t) {
  SparseMatrix m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

double cell_diameter(const Mesh& mesh, int c) {
  const auto& t = mesh.cell(c);
  double d = 0.0;
  for (int k = 0; k < 3; ++k) d = std::max(d, (mesh.vertex(t[(k + 1) % 3]) - mesh.vertex(t[k])).norm());
  return d;
}

}  // namespace

Assembler::Assembler(std::shared_ptr<const FunctionSpace> scalar_space,
                     std::shared_ptr<const FunctionSpace> vector_space, int volume_exactness,
                     int edge_exactness)
    : scalar_(std::move(scalar_space)), vector_(std::move(vector_space)) {
  if (scalar_->rank() != Rank::Scalar || vector_->rank() != Rank::Vector) {
    throw ConfigError("Assembler: expected a scalar and a vector space");
  }
  if (&scalar_->mesh() != &vector_->mesh()) throw ConfigError("Assembler: spaces live on different meshes");
  const int pmax = std::max(scalar_->degree(), vector_->degree());
  const int default_exactness = std::min(2 * pmax + 3, kMaxTriangleExactness);
  quad_ = triangle_quadrature(volume_exactness < 0 ? default_exactness : volume_exactness);
  edge_quad_ = edge_quadrature(edge_exactness < 0 ? 2 * pmax + 3 : edge_exactness);
  scalar_tab_ = tabulate(scalar_->element(), quad_.points);
  vector_tab_ = tabulate(vector_->element(), quad_.points);
  for (int k = 0; k < 3; ++k) {
    const auto pts = edge_points_on_reference(k, edge_quad_.points);
    scalar_edge_tab_[k] = tabulate(scalar_->element(), pts);
    vector_edge_tab_[k] = tabulate(vector_->element(), pts);
  }
  const Mesh& mesh = scalar_->mesh();
  geometry_.reserve(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) geometry_.push_back(mesh.geometry(c));
}

void Assembler::check_depth(const Field& depth) const {
  if (!depth.space || depth.space->rank() != Rank::Scalar || depth.space->degree() != scalar_->degree() ||
      &depth.space->mesh() != &scalar_->mesh()) {
    throw ConfigError("Assembler: depth field must live on the scalar space");
  }
}

Assembler::DepthAt Assembler::depth_at(const Field& depth, int cell, const Tabulation& tab, int q) const {
  const auto dofs = scalar_->cell_dofs(cell);
  const double* phi = tab.values.row(q).data();
  const double* dxi = tab.dxi.row(q).data();
  const double* deta = tab.deta.row(q).data();
  double v = 0.0, gxi = 0.0, geta = 0.0;
  for (int i = 0; i < tab.num_nodes(); ++i) {
    const double d = depth.coeffs[dofs[i]];
    v += phi[i] * d;
    gxi += dxi[i] * d;
    geta += deta[i] * d;
  }
  return {v, geometry_[cell].gradient(Vec2(gxi, geta))};
}

SparseMatrix Assembler::A(const Field& depth) const {
  check_depth(depth);
  const Mesh& mesh = scalar_->mesh();
  const int nn = scalar_->nodes_per_cell();
  Triplets triplets;
  triplets.reserve(static_cast<size_t>(mesh.num_cells()) * nn * nn);
  Eigen::MatrixXd local(nn, nn);
  std::vector<double> gx(nn), gy(nn);
  std::vector<int> rows(nn);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry& g = geometry_[c];
    local.setZero();
    for (int q = 0; q < quad_.size(); ++q) {
      const double w = quad_.weights[q] * std::abs(g.det);
      const double d = depth_at(depth, c, scalar_tab_, q).value;
      const double* phi = scalar_tab_.values.row(q).data();
      physical_gradients(g, scalar_tab_, q, gx.data(), gy.data());
      const double disp = w * d * d / 6.0;
      for (int i = 0; i < nn; ++i) {
        for (int j = 0; j < nn; ++j) {
          local(i, j) += w * phi[i] * phi[j] + disp * (gx[i] * gx[j] + gy[i] * gy[j]);
        }
      }
    }
    const auto dofs = scalar_->cell_dofs(c);
    std::copy(dofs.begin(), dofs.end(), rows.begin());
    scatter(local, rows, triplets);
  }
  return from_triplets(scalar_->dim(), triplets);
}

SparseMatrix Assembler::B(const Field& depth, double gamma, double h) const {
  check_depth(depth);
  const Mesh& mesh = vector_->mesh();
  const int np = vector_->nodes_per_cell();
  const int nloc = 2 * np;
  const int ns = vector_->num_scalar_dofs();
  Triplets triplets;
  triplets.reserve(static_cast<size_t>(mesh.num_cells()) * nloc * nloc);

  // Per-cell local matrices; boundary contributions are added to the owning cell.
  std::vector<std::vector<int>> boundary_of_cell(mesh.num_cells());
  for (int b = 0; b < static_cast<int>(mesh.boundary_edges().size()); ++b) {
    boundary_of_cell[mesh.boundary_edges()[b].cell].push_back(b);
  }

  Eigen::MatrixXd local(nloc, nloc);
  std::vector<double> phi(np), gx(np), gy(np), dv(nloc);
  std::vector<int> rows(nloc);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry& g = geometry_[c];
    local.setZero();
    for (int q = 0; q < quad_.size(); ++q) {
      const double w = quad_.weights[q] * std::abs(g.det);
      const auto [d, dgrad] = depth_at(depth, c, scalar_tab_, q);
      const double d2 = d * d;
      const Vec2 grad_d2 = 2.0 * d * dgrad;
      const double* values = vector_tab_.values.row(q).data();
      physical_gradients(g, vector_tab_, q, gx.data(), gy.data());
      for (int i = 0; i < np; ++i) {
        dv[i] = grad_d2.x() * values[i] + d2 * gx[i];       // div(D^2 phi_i e_x)
        dv[np + i] = grad_d2.y() * values[i] + d2 * gy[i];  // div(D^2 phi_i e_y)
      }
      for (int a = 0; a < nloc; ++a) {
        for (int b = 0; b < nloc; ++b) local(a, b) += w * dv[a] * dv[b] / 6.0;
      }
      for (int i = 0; i < np; ++i) {
        for (int j = 0; j < np; ++j) {
          const double m = w * d2 * values[i] * values[j];
          local(i, j) += m;
          local(np + i, np + j) += m;
        }
      }
    }

    for (int b : boundary_of_cell[c]) {
      const BoundaryEdge& be = mesh.boundary_edges()[b];
      const Tabulation& vt = vector_edge_tab_[be.local_edge];
      const Tabulation& st = scalar_edge_tab_[be.local_edge];
      const double h_edge = h > 0.0 ? h : cell_diameter(mesh, c);
      const double penalty = gamma / h_edge;
      const Vec2& n = be.normal;
      for (int q = 0; q < edge_quad_.size(); ++q) {
        const double w = edge_quad_.weights[q] * be.length;
        const auto [d, dgrad] = depth_at(depth, c, st, q);
        const double d2 = d * d;
        const Vec2 grad_d2 = 2.0 * d * dgrad;
        const double* values = vt.values.row(q).data();
        physical_gradients(g, vt, q, gx.data(), gy.data());
        for (int i = 0; i < np; ++i) {
          dv[i] = grad_d2.x() * values[i] + d2 * gx[i];
          dv[np + i] = grad_d2.y() * values[i] + d2 * gy[i];
        }
        // chi.n for the local basis (component a, node i) is values[i] * n_a.
        for (int a = 0; a < nloc; ++a) {
          const double trace_a = values[a % np] * n[a / np];
          for (int b = 0; b < nloc; ++b) {
            const double trace_b = values[b % np] * n[b / np];
            local(a, b) += w * (-(dv[b] * d2 * trace_a + d2 * trace_b * dv[a]) / 6.0 +
                                penalty * d2 * trace_b * trace_a);
          }
        }
      }
    }

    const auto dofs = vector_->cell_dofs(c);
    for (int i = 0; i < np; ++i) {
      rows[i] = dofs[i];
      rows[np + i] = ns + dofs[i];
    }
    scatter(local, rows, triplets);
  }
  return from_triplets(vector_->dim(), triplets);
}

void Assembler::mass_rhs(const Field& depth, const Eigen::VectorXd& eta, const Eigen::VectorXd& u,
                         Eigen::VectorXd& out) const {
  check_depth(depth);
  const Mesh& mesh = scalar_->mesh();
  const int nr = scalar_->nodes_per_cell();
  const int np = vector_->nodes_per_cell();
  const int ns = vector_->num_scalar_dofs();
  out.setZero(scalar_->dim());
  std::vector<double> d_loc(nr), eta_loc(nr), ux(np), uy(np), acc(nr);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry& g = geometry_[c];
    const auto sd = scalar_->cell_dofs(c);
    const auto vd = vector_->cell_dofs(c);
    for (int i = 0; i < nr; ++i) {
      d_loc[i] = depth.coeffs[sd[i]];
      eta_loc[i] = eta[sd[i]];
      acc[i] = 0.0;
    }
    for (int i = 0; i < np; ++i) {
      ux[i] = u[vd[i]];
      uy[i] = u[ns + vd[i]];
    }
    const Mat2& inv = g.inv_jacobian;
    const double jac = std::abs(g.det);
    for (int q = 0; q < quad_.size(); ++q) {
      const double* phi = scalar_tab_.values.row(q).data();
      const double* psi = vector_tab_.values.row(q).data();
      double total_depth = 0.0;
      for (int i = 0; i < nr; ++i) total_depth += phi[i] * (d_loc[i] + eta_loc[i]);
      double vx = 0.0, vy = 0.0;
      for (int i = 0; i < np; ++i) {
        vx += psi[i] * ux[i];
        vy += psi[i] * uy[i];
      }
      // flux . grad chi = (J^{-1} flux) . grad_ref chi
      const double s = quad_.weights[q] * jac * total_depth;
      const double fxi = s * (inv(0, 0) * vx + inv(0, 1) * vy);
      const double feta = s * (inv(1, 0) * vx + inv(1, 1) * vy);
      const double* dxi = scalar_tab_.dxi.row(q).data();
      const double* deta = scalar_tab_.deta.row(q).data();
      for (int i = 0; i < nr; ++i) acc[i] += fxi * dxi[i] + feta * deta[i];
    }
    for (int i = 0; i < nr; ++i) out[sd[i]] += acc[i];
  }
}

void Assembler::momentum_rhs(const Field& depth, const Eigen::VectorXd& eta, const Eigen::VectorXd& u,
                             double g_accel, Eigen::VectorXd& out) const {
  check_depth(depth);
  const Mesh& mesh = vector_->mesh();
  const int nr = scalar_->nodes_per_cell();
  const int np = vector_->nodes_per_cell();
  const int ns = vector_->num_scalar_dofs();
  out.setZero(vector_->dim());
  std::vector<double> d_loc(nr), eta_loc(nr), ux(np), uy(np), ax(np), ay(np);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry& g = geometry_[c];
    const auto sd = scalar_->cell_dofs(c);
    const auto vd = vector_->cell_dofs(c);
    for (int i = 0; i < nr; ++i) {
      d_loc[i] = depth.coeffs[sd[i]];
      eta_loc[i] = eta[sd[i]];
    }
    for (int i = 0; i < np; ++i) {
      ux[i] = u[vd[i]];
      uy[i] = u[ns + vd[i]];
      ax[i] = 0.0;
      ay[i] = 0.0;
    }
    const Mat2& inv = g.inv_jacobian;
    const double jac = std::abs(g.det);
    for (int q = 0; q < quad_.size(); ++q) {
      const double* phi = scalar_tab_.values.row(q).data();
      const double* sxi = scalar_tab_.dxi.row(q).data();
      const double* seta = scalar_tab_.deta.row(q).data();
      const double* psi = vector_tab_.values.row(q).data();
      const double* vxi = vector_tab_.dxi.row(q).data();
      const double* veta = vector_tab_.deta.row(q).data();
      double d = 0.0, e_xi = 0.0, e_eta = 0.0;
      for (int i = 0; i < nr; ++i) {
        d += phi[i] * d_loc[i];
        e_xi += sxi[i] * eta_loc[i];
        e_eta += seta[i] * eta_loc[i];
      }
      double vx = 0.0, vy = 0.0, vx_xi = 0.0, vx_eta = 0.0, vy_xi = 0.0, vy_eta = 0.0;
      for (int i = 0; i < np; ++i) {
        vx += psi[i] * ux[i];
        vy += psi[i] * uy[i];
        vx_xi += vxi[i] * ux[i];
        vx_eta += veta[i] * ux[i];
        vy_xi += vxi[i] * uy[i];
        vy_eta += veta[i] * uy[i];
      }
      // Reference gradient of Q = g eta + |u|^2 / 2, mapped by J^{-T}.
      const double q_xi = g_accel * e_xi + vx * vx_xi + vy * vy_xi;
      const double q_eta = g_accel * e_eta + vx * vx_eta + vy * vy_eta;
      const double qx = inv(0, 0) * q_xi + inv(1, 0) * q_eta;
      const double qy = inv(0, 1) * q_xi + inv(1, 1) * q_eta;
      const double s = -quad_.weights[q] * jac * d * d;
      for (int i = 0; i < np; ++i) {
        ax[i] += s * qx * psi[i];
        ay[i] += s * qy * psi[i];
      }
    }
    for (int i = 0; i < np; ++i) {
      out[vd[i]] += ax[i];
      out[ns + vd[i]] += ay[i];
    }
  }
}

Assembler::RhsCache Assembler::make_rhs_cache(const Field& flux_depth, const Field& weight_depth) const {
  check_depth(flux_depth);
  check_depth(weight_depth);
  const Mesh& mesh = scalar_->mesh();
  const int nq = quad_.size();
  RhsCache cache;
  cache.flux_depth.resize(static_cast<size_t>(mesh.num_cells()) * nq);
  cache.weight.resize(cache.flux_depth.size());
  cache.jw.resize(cache.flux_depth.size());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    for (int q = 0; q < nq; ++q) {
      const size_t k = static_cast<size_t>(c) * nq + q;
      const double jw = quad_.weights[q] * std::abs(geometry_[c].det);
      const double dw = depth_at(weight_depth, c, scalar_tab_, q).value;
      cache.flux_depth[k] = depth_at(flux_depth, c, scalar_tab_, q).value;
      cache.weight[k] = jw * dw * dw;
      cache.jw[k] = jw;
    }
  }
  return cache;
}

void Assembler::rhs(const RhsCache& cache, const Eigen::VectorXd& eta, const Eigen::VectorXd& u, double g_accel,
                    Eigen::VectorXd& mass_out, Eigen::VectorXd& momentum_out) const {
  const Mesh& mesh = scalar_->mesh();
  const int nr = scalar_->nodes_per_cell();
  const int np = vector_->nodes_per_cell();
  const int ns = vector_->num_scalar_dofs();
  const int nq = quad_.size();
  mass_out.setZero(scalar_->dim());
  momentum_out.setZero(vector_->dim());
  double eta_loc[15], ux[15], uy[15], am[15], ax[15], ay[15];
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const Mat2& inv = geometry_[c].inv_jacobian;
    const auto sd = scalar_->cell_dofs(c);
    const auto vd = vector_->cell_dofs(c);
    for (int i = 0; i < nr; ++i) {
      eta_loc[i] = eta[sd[i]];
      am[i] = 0.0;
    }
    for (int i = 0; i < np; ++i) {
      ux[i] = u[vd[i]];
      uy[i] = u[ns + vd[i]];
      ax[i] = 0.0;
      ay[i] = 0.0;
    }
    const size_t base = static_cast<size_t>(c) * nq;
    for (int q = 0; q < nq; ++q) {
      const double* phi = scalar_tab_.values.row(q).data();
      const double* sxi = scalar_tab_.dxi.row(q).data();
      const double* seta = scalar_tab_.deta.row(q).data();
      const double* psi = vector_tab_.values.row(q).data();
      const double* vxi = vector_tab_.dxi.row(q).data();
      const double* veta = vector_tab_.deta.row(q).data();
      double e = 0.0, e_xi = 0.0, e_eta = 0.0;
      for (int i = 0; i < nr; ++i) {
        e += phi[i] * eta_loc[i];
        e_xi += sxi[i] * eta_loc[i];
        e_eta += seta[i] * eta_loc[i];
      }
      double vx = 0.0, vy = 0.0, vx_xi = 0.0, vx_eta = 0.0, vy_xi = 0.0, vy_eta = 0.0;
      for (int i = 0; i < np; ++i) {
        vx += psi[i] * ux[i];
        vy += psi[i] * uy[i];
        vx_xi += vxi[i] * ux[i];
        vx_eta += veta[i] * ux[i];
        vy_xi += vxi[i] * uy[i];
        vy_eta += veta[i] * uy[i];
      }
      // ((D + eta) u, grad chi) with grad chi = J^{-T} grad_ref chi
      const double s = cache.jw[base + q] * (cache.flux_depth[base + q] + e);
      const double fxi = s * (inv(0, 0) * vx + inv(0, 1) * vy);
      const double feta = s * (inv(1, 0) * vx + inv(1, 1) * vy);
      for (int i = 0; i < nr; ++i) am[i] += fxi * sxi[i] + feta * seta[i];
      // -(grad(g eta + |u|^2 / 2), D^2 chi)
      const double q_xi = g_accel * e_xi + vx * vx_xi + vy * vy_xi;
      const double q_eta = g_accel * e_eta + vx * vx_eta + vy * vy_eta;
      const double w = -cache.weight[base + q];
      const double qx = w * (inv(0, 0) * q_xi + inv(1, 0) * q_eta);
      const double qy = w * (inv(0, 1) * q_xi + inv(1, 1) * q_eta);
      for (int i = 0; i < np; ++i) {
        ax[i] += qx * psi[i];
        ay[i] += qy * psi[i];
      }
    }
    for (int i = 0; i < nr; ++i) mass_out[sd[i]] += am[i];
    for (int i = 0; i < np; ++i) {
      momentum_out[vd[i]] += ax[i];
      momentum_out[ns + vd[i]] += ay[i];
    }
  }
}

Eigen::VectorXd Assembler::scalar_load(const ScalarFn& f) const {
  const Mesh& mesh = scalar_->mesh();
  const int nr = scalar_->nodes_per_cell();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(scalar_->dim());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry& g = geometry_[c];
    const auto sd = scalar_->cell_dofs(c);
    for (int q = 0; q < quad_.size(); ++q) {
      const double w = quad_.weights[q] * std::abs(g.det) * f(g.map(quad_.points[q]));
      const double* phi = scalar_tab_.values.row(q).data();
      for (int i = 0; i < nr; ++i) out[sd[i]] += w * phi[i];
    }
  }
  return out;
}

Eigen::VectorXd Assembler::weighted_vector_load(const VectorFn& f, const Field& depth) const {
  check_depth(depth);
  const Mesh& mesh = vector_->mesh();
  const int np = vector_->nodes_per_cell();
  const int ns = vector_->num_scalar_dofs();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(vector_->dim());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry& g = geometry_[c];
    const auto vd = vector_->cell_dofs(c);
    for (int q = 0; q < quad_.size(); ++q) {
      const double d = depth_at(depth, c, scalar_tab_, q).value;
      const Vec2 fv = quad_.weights[q] * std::abs(g.det) * d * d * f(g.map(quad_.points[q]));
      const double* psi = vector_tab_.values.row(q).data();
      for (int i = 0; i < np; ++i) {
        out[vd[i]] += fv.x() * psi[i];
        out[ns + vd[i]] += fv.y() * psi[i];
      }
    }
  }
  return out;
}

Eigen::VectorXd Assembler::A_pairing(const Field& depth, const ScalarFunction& w) const {
  check_depth(depth);
  const Mesh& mesh = scalar_->mesh();
  const int nr = scalar_->nodes_per_cell();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(scalar_->dim());
  std::vector<double> gx(nr), gy(nr);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry& g = geometry_[c];
    const auto sd = scalar_->cell_dofs(c);
    for (int q = 0; q < quad_.size(); ++q) {
      const double jw = quad_.weights[q] * std::abs(g.det);
      const Vec2 x = g.map(quad_.points[q]);
      const double d = depth_at(depth, c, scalar_tab_, q).value;
      const double v = jw * w.value(x);
      const Vec2 gw = jw * d * d / 6.0 * w.gradient(x);
      const double* phi = scalar_tab_.values.row(q).data();
      physical_gradients(g, scalar_tab_, q, gx.data(), gy.data());
      for (int i = 0; i < nr; ++i) out[sd[i]] += v * phi[i] + gw.x() * gx[i] + gw.y() * gy[i];
    }
  }
  return out;
}

Eigen::VectorXd Assembler::B_pairing(const Field& depth, double gamma, double h,
                                     const VectorFunction& w) const {
  check_depth(depth);
  const Mesh& mesh = vector_->mesh();
  const int np = vector_->nodes_per_cell();
  const int ns = vector_->num_scalar_dofs();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(vector_->dim());
  std::vector<double> gx(np), gy(np);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry& g = geometry_[c];
    const auto vd = vector_->cell_dofs(c);
    for (int q = 0; q < quad_.size(); ++q) {
      const double jw = quad_.weights[q] * std::abs(g.det);
      const Vec2 x = g.map(quad_.points[q]);
      const auto [d, dgrad] = depth_at(depth, c, scalar_tab_, q);
      const double d2 = d * d;
      const Vec2 grad_d2 = 2.0 * d * dgrad;
      const Vec2 wv = w.value(x);
      const double div_w = grad_d2.dot(wv) + d2 * w.divergence(x);  // div(D^2 w)
      const double* psi = vector_tab_.values.row(q).data();
      physical_gradients(g, vector_tab_, q, gx.data(), gy.data());
      for (int i = 0; i < np; ++i) {
        const double dvx = grad_d2.x() * psi[i] + d2 * gx[i];
        const double dvy = grad_d2.y() * psi[i] + d2 * gy[i];
        out[vd[i]] += jw * (d2 * wv.x() * psi[i] + div_w * dvx / 6.0);
        out[ns + vd[i]] += jw * (d2 * wv.y() * psi[i] + div_w * dvy / 6.0);
      }
    }
  }
  std::vector<Vec2> ref_points;
  for (const BoundaryEdge& be : mesh.boundary_edges()) {
    const int c = be.cell;
    const CellGeometry& g = geometry_[c];
    const auto vd = vector_->cell_dofs(c);
    const Tabulation& vt = vector_edge_tab_[be.local_edge];
    const Tabulation& st = scalar_edge_tab_[be.local_edge];
    ref_points = edge_points_on_reference(be.local_edge, edge_quad_.points);
    const double penalty = gamma / (h > 0.0 ? h : cell_diameter(mesh, c));
    const Vec2& n = be.normal;
    for (int q = 0; q < edge_quad_.size(); ++q) {
      const double lw = edge_quad_.weights[q] * be.length;
      const Vec2 x = g.map(ref_points[q]);
      const auto [d, dgrad] = depth_at(depth, c, st, q);
      const double d2 = d * d;
      const Vec2 grad_d2 = 2.0 * d * dgrad;
      const Vec2 wv = w.value(x);
      const double div_w = grad_d2.dot(wv) + d2 * w.divergence(x);
      const double wn = d2 * wv.dot(n);  // D^2 w.n
      const double* psi = vt.values.row(q).data();
      physical_gradients(g, vt, q, gx.data(), gy.data());
      for (int i = 0; i < np; ++i) {
        const double dvx = grad_d2.x() * psi[i] + d2 * gx[i];
        const double dvy = grad_d2.y() * psi[i] + d2 * gy[i];
        out[vd[i]] += lw * (-div_w * d2 * psi[i] * n.x() / 6.0 - wn * dvx / 6.0 + penalty * wn * psi[i] * n.x());
        out[ns + vd[i]] +=
            lw * (-div_w * d2 * psi[i] * n.y() / 6.0 - wn * dvy / 6.0 + penalty * wn * psi[i] * n.y());
      }
    }
  }
  return out;
}

double Assembler::integrate(const Field& depth, const Eigen::VectorXd& eta, const Eigen::VectorXd& u,
                            const std::function<double(const PointValues&)>& f) const {
  check_depth(depth);
  const Mesh& mesh = scalar_->mesh();
  const int nr = scalar_->nodes_per_cell();
  const int np = vector_->nodes_per_cell();
  const int ns = vector_->num_scalar_dofs();
  double total = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry& g = geometry_[c];
    const auto sd = scalar_->cell_dofs(c);
    const auto vd = vector_->cell_dofs(c);
    double cell_sum = 0.0;
    for (int q = 0; q < quad_.size(); ++q) {
      const double* phi = scalar_tab_.values.row(q).data();
      const double* psi = vector_tab_.values.row(q).data();
      PointValues pv{g.map(quad_.points[q]), 0.0, 0.0, Vec2::Zero()};
      for (int i = 0; i < nr; ++i) {
        pv.depth += phi[i] * depth.coeffs[sd[i]];
        pv.eta += phi[i] * eta[sd[i]];
      }
      for (int i = 0; i < np; ++i) {
        pv.u.x() += psi[i] * u[vd[i]];
        pv.u.y() += psi[i] * u[ns + vd[i]];
      }
      cell_sum += quad_.weights[q] * f(pv);
    }
    total += std::abs(g.det) * cell_sum;
  }
  return total;
}

ScalarNormMatrices Assembler::scalar_norms() const {
  const Mesh& mesh = scalar_->mesh();
  const int nn = scalar_->nodes_per_cell();
  Triplets tl2, th1;
  Eigen::MatrixXd mass(nn, nn), stiff(nn, nn);
  std::vector<double> gx(nn), gy(nn);
  std::vector<int> rows(nn);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry& g = geometry_[c];
    mass.setZero();
    stiff.setZero();
    for (int q = 0; q < quad_.size(); ++q) {
      const double w = quad_.weights[q] * std::abs(g.det);
      const double* phi = scalar_tab_.values.row(q).data();
      physical_gradients(g, scalar_tab_, q, gx.data(), gy.data());
      for (int i = 0; i < nn; ++i) {
        for (int j = 0; j < nn; ++j) {
          mass(i, j) += w * phi[i] * phi[j];
          stiff(i, j) += w * (gx[i] * gx[j] + gy[i] * gy[j]);
        }
      }
    }
    const auto dofs = scalar_->cell_dofs(c);
    std::copy(dofs.begin(), dofs.end(), rows.begin());
    scatter(mass, rows, tl2);
    const Eigen::MatrixXd full = mass + stiff;
    scatter(full, rows, th1);
  }
  return {from_triplets(scalar_->dim(), tl2), from_triplets(scalar_->dim(), th1)};
}

VectorNormMatrices Assembler::vector_norms(double h) const {
  const Mesh& mesh = vector_->mesh();
  const int np = vector_->nodes_per_cell();
  const int nloc = 2 * np;
  const int ns = vector_->num_scalar_dofs();
  std::vector<std::vector<int>> boundary_of_cell(mesh.num_cells());
  for (int b = 0; b < static_cast<int>(mesh.boundary_edges().size()); ++b) {
    boundary_of_cell[mesh.boundary_edges()[b].cell].push_back(b);
  }
  Triplets tl2, tdiv, th1, ttriple;
  Eigen::MatrixXd mass(nloc, nloc), divdiv(nloc, nloc), grad(nloc, nloc), bnd(nloc, nloc);
  std::vector<double> gx(np), gy(np), dv(nloc);
  std::vector<int> rows(nloc);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry& g = geometry_[c];
    mass.setZero();
    divdiv.setZero();
    grad.setZero();
    bnd.setZero();
    for (int q = 0; q < quad_.size(); ++q) {
      const double w = quad_.weights[q] * std::abs(g.det);
      const double* phi = vector_tab_.values.row(q).data();
      physical_gradients(g, vector_tab_, q, gx.data(), gy.data());
      for (int i = 0; i < np; ++i) {
        dv[i] = gx[i];
        dv[np + i] = gy[i];
      }
      for (int a = 0; a < nloc; ++a) {
        for (int b = 0; b < nloc; ++b) divdiv(a, b) += w * dv[a] * dv[b];
      }
      for (int i = 0; i < np; ++i) {
        for (int j = 0; j < np; ++j) {
          const double m = w * phi[i] * phi[j];
          const double s = w * (gx[i] * gx[j] + gy[i] * gy[j]);
          mass(i, j) += m;
          mass(np + i, np + j) += m;
          grad(i, j) += s;
          grad(np + i, np + j) += s;
        }
      }
    }
    for (int b : boundary_of_cell[c]) {
      const BoundaryEdge& be = mesh.boundary_edges()[b];
      const Tabulation& vt = vector_edge_tab_[be.local_edge];
      for (int q = 0; q < edge_quad_.size(); ++q) {
        const double w = edge_quad_.weights[q] * be.length;
        const double* phi = vt.values.row(q).data();
        physical_gradients(g, vt, q, gx.data(), gy.data());
        for (int i = 0; i < np; ++i) {
          dv[i] = gx[i];
          dv[np + i] = gy[i];
        }
        for (int a = 0; a < nloc; ++a) {
          const double ta = phi[a % np] * be.normal[a / np];
          for (int bb = 0; bb < nloc; ++bb) {
            const double tb = phi[bb % np] * be.normal[bb / np];
            bnd(a, bb) += w * (h * dv[a] * dv[bb] + ta * tb / h);
          }
        }
      }
    }
    const auto dofs = vector_->cell_dofs(c);
    for (int i = 0; i < np; ++i) {
      rows[i] = dofs[i];
      rows[np + i] = ns + dofs[i];
    }
    scatter(mass, rows, tl2);
    const Eigen::MatrixXd hdiv = mass + divdiv;
    scatter(hdiv, rows, tdiv);
    const Eigen::MatrixXd h1 = mass + grad;
    scatter(h1, rows, th1);
    const Eigen::MatrixXd triple = hdiv + bnd;
    scatter(triple, rows, ttriple);
  }
  const int n = vector_->dim();
  return {from_triplets(n, tl2), from_triplets(n, tdiv), from_triplets(n, th1), from_triplets(n, ttriple)};
}

SparseMatrix assemble_A(std::shared_ptr<const FunctionSpace> space_r, const Field& depth) {
  auto vector_space = std::make_shared<const FunctionSpace>(space_r->mesh_ptr(), space_r->degree(), Rank::Vector);
  return Assembler(space_r, vector_space).A(depth);
}

SparseMatrix assemble_B(std::shared_ptr<const FunctionSpace> space_p, const Field& depth, double gamma,
                        double h) {
  return Assembler(depth.space, std::move(space_p)).B(depth, gamma, h);
}

Eigen::VectorXd assemble_mass_rhs(std::shared_ptr<const FunctionSpace> space_r, const Field& depth,
                                  const Field& eta, const Field& u) {
  Eigen::VectorXd out;
  Assembler(std::move(space_r), u.space).mass_rhs(depth, eta.coeffs, u.coeffs, out);
  return out;
}

Eigen::VectorXd assemble_momentum_rhs(std::shared_ptr<const FunctionSpace> space_p, const Field& depth,
                                      const Field& eta, const Field& u, double g) {
  Eigen::VectorXd out;
  Assembler(eta.space, std::move(space_p)).momentum_rhs(depth, eta.coeffs, u.coeffs, g, out);
  return out;
}

}  // namespace bbm
