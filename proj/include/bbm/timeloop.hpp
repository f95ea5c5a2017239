#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "bbm/model.hpp"

namespace bbm {

/// One classical RK4 step for y' = f(t, y).
Eigen::VectorXd rk4_step(const Eigen::VectorXd& y, double t, double dt,
                         const std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>& f);

/// RK4 step of both fields. Throws NumericalError (tagged with step) on non-finite output.
State rk4_step(const State& state, double dt, const std::function<StateDerivative(const State&)>& rhs,
               long step = -1);

struct RunConfig {
  double dt = 1e-3;
  double t_final = 1.0;
  std::vector<Vec2> gauge_points;
  int log_every = 10;
  /// Optional CSV sinks, written and flushed as the run proceeds.
  std::ostream* gauge_sink = nullptr;
  std::ostream* conservation_sink = nullptr;
};

struct GaugeSeries {
  std::vector<Vec2> points;
  std::vector<double> t;
  std::vector<std::vector<double>> eta;  // eta[g][k] at t[k]
};

struct ConservationRecord {
  double t;
  double mass;
  double energy;
};

struct RunResult {
  State final_state;
  GaugeSeries gauges;
  std::vector<ConservationRecord> conservation;
  long steps = 0;
};

long step_count(double dt, double t_final);

/// Integrates from `initial` with ceil(T/dt) fixed steps. Gauges are sampled
/// at t0 and after every step; (M, E) at t0, every log_every steps and at the end.
RunResult run(const BbmModel& model, const State& initial, const RunConfig& cfg);

void write_gauge_header(std::ostream& os, size_t n_gauges);
void write_conservation_header(std::ostream& os);

/// Formats a double with 10 significant digits.
std::string fmt(double v);

}  // namespace bbm
