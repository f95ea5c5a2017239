#include "bbm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "bbm/errors.hpp"
#include "bbm/tabulation.hpp"
#include "bbm/timeloop.hpp"

namespace bbm {

namespace {

int error_exactness(int degree) { return std::min(2 * degree + 5, kMaxTriangleExactness); }

struct Local {
  double value;
  Vec2 grad;
};

// Scalar DOF block `block` of field at tabulation point q of cell c.
Local local_eval(const Field& f, int block, const CellGeometry& g, std::span<const int> dofs,
                 const Tabulation& tab, int q) {
  const Eigen::Index off = static_cast<Eigen::Index>(block) * f.space->num_scalar_dofs();
  double v = 0.0, gxi = 0.0, geta = 0.0;
  for (int i = 0; i < tab.num_nodes(); ++i) {
    const double c = f.coeffs[off + dofs[i]];
    v += tab.values(q, i) * c;
    gxi += tab.dxi(q, i) * c;
    geta += tab.deta(q, i) * c;
  }
  return {v, g.gradient(Vec2(gxi, geta))};
}

}  // namespace

ScalarErrors scalar_errors(const Field& field, const ScalarFunction& exact) {
  const FunctionSpace& V = *field.space;
  if (V.rank() != Rank::Scalar) throw ConfigError("scalar_errors: field is not scalar");
  const Mesh& mesh = V.mesh();
  const TriangleQuadrature quad = triangle_quadrature(error_exactness(V.degree()));
  const Tabulation tab = tabulate(V.element(), quad.points);
  double l2 = 0.0, semi = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry g = mesh.geometry(c);
    const auto dofs = V.cell_dofs(c);
    for (int q = 0; q < quad.size(); ++q) {
      const double w = quad.weights[q] * std::abs(g.det);
      const Vec2 x = g.map(quad.points[q]);
      const Local h = local_eval(field, 0, g, dofs, tab, q);
      const double e = exact.value(x) - h.value;
      l2 += w * e * e;
      if (exact.gradient) semi += w * (exact.gradient(x) - h.grad).squaredNorm();
    }
  }
  return {std::sqrt(l2), std::sqrt(l2 + semi)};
}

VectorErrors vector_errors(const Field& field, const VectorFunction& exact, double h) {
  const FunctionSpace& V = *field.space;
  if (V.rank() != Rank::Vector) throw ConfigError("vector_errors: field is not a vector field");
  const Mesh& mesh = V.mesh();
  const TriangleQuadrature quad = triangle_quadrature(error_exactness(V.degree()));
  const EdgeQuadrature eq = edge_quadrature(2 * V.degree() + 5);
  const Tabulation tab = tabulate(V.element(), quad.points);
  std::array<Tabulation, 3> etab;
  std::array<std::vector<Vec2>, 3> eref;
  for (int k = 0; k < 3; ++k) {
    eref[k] = edge_points_on_reference(k, eq.points);
    etab[k] = tabulate(V.element(), eref[k]);
  }
  double l2 = 0.0, div = 0.0, grad = 0.0, bdiv = 0.0, trace = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry g = mesh.geometry(c);
    const auto dofs = V.cell_dofs(c);
    for (int q = 0; q < quad.size(); ++q) {
      const double w = quad.weights[q] * std::abs(g.det);
      const Vec2 x = g.map(quad.points[q]);
      const Local ux = local_eval(field, 0, g, dofs, tab, q);
      const Local uy = local_eval(field, 1, g, dofs, tab, q);
      const Mat2 J = exact.jacobian(x);
      const Vec2 e = exact.value(x) - Vec2(ux.value, uy.value);
      const double de = J.trace() - (ux.grad.x() + uy.grad.y());
      l2 += w * e.squaredNorm();
      div += w * de * de;
      grad += w * ((Vec2(J(0, 0), J(0, 1)) - ux.grad).squaredNorm() + (Vec2(J(1, 0), J(1, 1)) - uy.grad).squaredNorm());
    }
  }
  for (const BoundaryEdge& be : mesh.boundary_edges()) {
    const CellGeometry g = mesh.geometry(be.cell);
    const auto dofs = V.cell_dofs(be.cell);
    const Tabulation& t = etab[be.local_edge];
    for (int q = 0; q < eq.size(); ++q) {
      const double w = eq.weights[q] * be.length;
      const Vec2 x = g.map(eref[be.local_edge][q]);
      const Local ux = local_eval(field, 0, g, dofs, t, q);
      const Local uy = local_eval(field, 1, g, dofs, t, q);
      const double en = (exact.value(x) - Vec2(ux.value, uy.value)).dot(be.normal);
      const double de = exact.divergence(x) - (ux.grad.x() + uy.grad.y());
      trace += w * en * en;
      bdiv += w * de * de;
    }
  }
  VectorErrors r;
  r.l2 = std::sqrt(l2);
  r.div = std::sqrt(l2 + div);
  r.h1 = std::sqrt(l2 + grad);
  r.triple = std::sqrt(l2 + div + h * bdiv + trace / h);
  r.trace = std::sqrt(trace);
  return r;
}

double normal_trace_norm(const Field& u) {
  const VectorFunction zero{[](const Vec2&) { return Vec2::Zero().eval(); },
                            [](const Vec2&) { return Mat2::Zero().eval(); }};
  return vector_errors(u, zero, 1.0).trace;
}

double convergence_rate(double e_coarse, double e_fine, double h_coarse, double h_fine) {
  return std::log(e_coarse / e_fine) / std::log(h_coarse / h_fine);
}

std::vector<RateRow> convergence_rates(const ErrorReport& report) {
  const auto& r = report.rows;
  std::vector<RateRow> out;
  for (size_t i = 0; i + 1 < r.size(); ++i) {
    if (!(r[i + 1].h < r[i].h)) throw ConfigError("convergence_rates: h must be strictly decreasing");
    const double hc = r[i].h, hf = r[i + 1].h;
    out.push_back({convergence_rate(r[i].l2_eta, r[i + 1].l2_eta, hc, hf),
                   convergence_rate(r[i].h1_eta, r[i + 1].h1_eta, hc, hf),
                   convergence_rate(r[i].l2_u, r[i + 1].l2_u, hc, hf),
                   convergence_rate(r[i].div_u, r[i + 1].div_u, hc, hf),
                   convergence_rate(r[i].h1_u, r[i + 1].h1_u, hc, hf)});
  }
  return out;
}

std::vector<RateRow> ErrorReport::rates() const { return convergence_rates(*this); }

void ErrorReport::write_csv(std::ostream& os) const {
  os << "h,err_L2_eta,rate,err_H1_eta,rate,err_L2_u,rate,err_div_u,rate,err_H1_u,rate,trace_u_n\n";
  const auto rr = rates();
  for (size_t i = 0; i < rows.size(); ++i) {
    const ErrorRow& e = rows[i];
    auto rate = [&](double RateRow::*m) { return i == 0 ? std::string() : fmt(rr[i - 1].*m); };
    os << fmt(e.h) << ',' << fmt(e.l2_eta) << ',' << rate(&RateRow::l2_eta) << ',' << fmt(e.h1_eta) << ','
       << rate(&RateRow::h1_eta) << ',' << fmt(e.l2_u) << ',' << rate(&RateRow::l2_u) << ',' << fmt(e.div_u)
       << ',' << rate(&RateRow::div_u) << ',' << fmt(e.h1_u) << ',' << rate(&RateRow::h1_u) << ','
       << fmt(e.trace_u_n) << '\n';
  }
}

void ErrorReport::write_table(std::ostream& os) const {
  const auto rr = rates();
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-11s %-11s %-6s %-11s %-6s %-11s %-6s %-11s %-6s\n", "h", "L2(eta)", "rate",
                "H1(eta)", "rate", "L2(u)", "rate", "Hdiv(u)", "rate");
  os << buf;
  for (size_t i = 0; i < rows.size(); ++i) {
    const ErrorRow& e = rows[i];
    auto rate = [&](double RateRow::*m) {
      char r[16];
      if (i == 0) return std::string("-");
      std::snprintf(r, sizeof r, "%.3f", rr[i - 1].*m);
      return std::string(r);
    };
    std::snprintf(buf, sizeof buf, "%-11.3e %-11.3e %-6s %-11.3e %-6s %-11.3e %-6s %-11.3e %-6s\n", e.h, e.l2_eta,
                  rate(&RateRow::l2_eta).c_str(), e.h1_eta, rate(&RateRow::h1_eta).c_str(), e.l2_u,
                  rate(&RateRow::l2_u).c_str(), e.div_u, rate(&RateRow::div_u).c_str());
    os << buf;
  }
}

ErrorRow error_norms(const State& numeric, const ManufacturedSolution& exact, double h) {
  const ScalarErrors se = scalar_errors(numeric.eta, exact.eta_at(numeric.t));
  const VectorErrors ve = vector_errors(numeric.u, exact.u_at(numeric.t), h);
  return {h, se.l2, se.h1, ve.l2, ve.div, ve.h1, normal_trace_norm(numeric.u)};
}

Field elliptic_project_scalar(const ScalarFunction& eta0, const BbmModel& model) {
  const Eigen::VectorXd load = model.assembler().A_pairing(model.dispersion_depth(), eta0);
  return Field(model.eta_space(), model.solve_A(load));
}

Field elliptic_project_vector(const VectorFunction& u0, const BbmModel& model) {
  const OperatorSet& ops = model.operators();
  const double h = model.config().local_penalty_h ? -1.0 : ops.h_penalty;
  const Eigen::VectorXd load = model.assembler().B_pairing(model.dispersion_depth(), ops.gamma, h, u0);
  return Field(model.u_space(), model.solve_B(load));
}

double superconvergence_measure(const State& numeric, const BbmModel& model) {
  const ManufacturedSolution* ms = model.manufactured();
  if (!ms) throw ConfigError("superconvergence_measure: model has no manufactured solution");
  const Field reta = elliptic_project_scalar(ms->eta_at(numeric.t), model);
  const Field ru = elliptic_project_vector(ms->u_at(numeric.t), model);
  const ScalarNormMatrices sn = model.assembler().scalar_norms();
  const VectorNormMatrices vn = model.assembler().vector_norms(model.mesh().h_max());
  const Eigen::VectorXd th = numeric.eta.coeffs - reta.coeffs;
  const Eigen::VectorXd ze = numeric.u.coeffs - ru.coeffs;
  return std::sqrt(th.dot(sn.h1 * th)) + std::sqrt(ze.dot(vn.hdiv * ze));
}

}  // namespace bbm
