#pragma once

#include <optional>
#include <ostream>
#include <vector>

#include "bbm/model.hpp"

namespace bbm {

struct ScalarErrors {
  double l2 = 0.0;
  double h1 = 0.0;  // full H1 norm
};

struct VectorErrors {
  double l2 = 0.0;
  double div = 0.0;     // H(div) norm
  double h1 = 0.0;      // full H1 norm
  double triple = 0.0;  // H(div) + h-weighted boundary divergence + 1/h normal trace
  double trace = 0.0;   // ||(u_exact - u_h).n|| on the boundary
};

/// Norms of (exact - field), quadrature exactness 2 above the assembly rule.
ScalarErrors scalar_errors(const Field& field, const ScalarFunction& exact);
VectorErrors vector_errors(const Field& field, const VectorFunction& exact, double h);

/// ||u_h . n|| on the boundary.
double normal_trace_norm(const Field& u);

struct ErrorRow {
  double h = 0.0;
  double l2_eta = 0.0;
  double h1_eta = 0.0;
  double l2_u = 0.0;
  double div_u = 0.0;
  double h1_u = 0.0;
  double trace_u_n = 0.0;
};

struct RateRow {
  double l2_eta = 0.0;
  double h1_eta = 0.0;
  double l2_u = 0.0;
  double div_u = 0.0;
  double h1_u = 0.0;
};

struct ErrorReport {
  std::vector<ErrorRow> rows;

  /// rates()[i] compares rows[i] and rows[i+1].
  std::vector<RateRow> rates() const;
  void write_csv(std::ostream& os) const;
  /// Human-readable table with rates to 3 decimals.
  void write_table(std::ostream& os) const;
};

double convergence_rate(double e_coarse, double e_fine, double h_coarse, double h_fine);
std::vector<RateRow> convergence_rates(const ErrorReport& report);

/// Errors of a numerical state against the manufactured solution at state.t.
/// `h` is the nominal mesh size reported in the row.
ErrorRow error_norms(const State& numeric, const ManufacturedSolution& exact, double h);

/// Solve A c = A(eta0, .) with the model's operator.
Field elliptic_project_scalar(const ScalarFunction& eta0, const BbmModel& model);
/// Solve B c = B(u0, .) with the model's operator, boundary terms included.
Field elliptic_project_vector(const VectorFunction& u0, const BbmModel& model);

/// ||eta_h - R_h eta||_1 + ||u_h - R_h u||_div for the exact solution at state.t.
double superconvergence_measure(const State& numeric, const BbmModel& model);

}  // namespace bbm
