#include "bbm/timeloop.hpp"

#include <cmath>
#include <cstdio>

#include "bbm/errors.hpp"

namespace bbm {

Eigen::VectorXd rk4_step(const Eigen::VectorXd& y, double t, double dt,
                         const std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>& f) {
  const Eigen::VectorXd k1 = f(t, y);
  const Eigen::VectorXd k2 = f(t + 0.5 * dt, y + 0.5 * dt * k1);
  const Eigen::VectorXd k3 = f(t + 0.5 * dt, y + 0.5 * dt * k2);
  const Eigen::VectorXd k4 = f(t + dt, y + dt * k3);
  return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

State rk4_step(const State& s, double dt, const std::function<StateDerivative(const State&)>& rhs, long step) {
  auto stage = [&](const StateDerivative& k, double a) {
    State y{s.eta, s.u, s.t + a * dt};
    y.eta.coeffs += a * dt * k.eta;
    y.u.coeffs += a * dt * k.u;
    return y;
  };
  const StateDerivative k1 = rhs(s);
  const StateDerivative k2 = rhs(stage(k1, 0.5));
  const StateDerivative k3 = rhs(stage(k2, 0.5));
  const StateDerivative k4 = rhs(stage(k3, 1.0));
  State out{s.eta, s.u, s.t + dt};
  out.eta.coeffs += (dt / 6.0) * (k1.eta + 2.0 * k2.eta + 2.0 * k3.eta + k4.eta);
  out.u.coeffs += (dt / 6.0) * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u);
  if (!out.eta.coeffs.allFinite() || !out.u.coeffs.allFinite()) {
    throw NumericalError("time integration blew up at step " + std::to_string(step) + ", t = " + fmt(out.t),
                         step);
  }
  return out;
}

long step_count(double dt, double t_final) {
  if (!(dt > 0.0)) throw ConfigError("run: dt must be positive");
  if (!(t_final >= dt * (1.0 - 1e-12))) throw ConfigError("run: T must be at least dt");
  // Guard against T/dt landing a hair above an integer.
  return static_cast<long>(std::ceil(t_final / dt - 1e-9));
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void write_gauge_header(std::ostream& os, size_t n_gauges) {
  os << "t";
  for (size_t g = 0; g < n_gauges; ++g) os << ",gauge" << g + 1;
  os << "\n";
}

void write_conservation_header(std::ostream& os) { os << "t,M,E\n"; }

RunResult run(const BbmModel& model, const State& initial, const RunConfig& cfg) {
  const long n = step_count(cfg.dt, cfg.t_final);
  if (cfg.log_every < 1) throw ConfigError("run: log_every must be >= 1");

  std::vector<PointProbe> probes;
  for (const Vec2& p : cfg.gauge_points) probes.emplace_back(model.eta_space(), p);

  RunResult r;
  r.gauges.points = cfg.gauge_points;
  r.gauges.eta.resize(probes.size());
  if (cfg.gauge_sink) write_gauge_header(*cfg.gauge_sink, probes.size());
  if (cfg.conservation_sink) write_conservation_header(*cfg.conservation_sink);

  auto record_gauges = [&](const State& s) {
    r.gauges.t.push_back(s.t);
    if (cfg.gauge_sink) *cfg.gauge_sink << fmt(s.t);
    for (size_t g = 0; g < probes.size(); ++g) {
      const double v = probes[g].scalar(s.eta);
      r.gauges.eta[g].push_back(v);
      if (cfg.gauge_sink) *cfg.gauge_sink << ',' << fmt(v);
    }
    if (cfg.gauge_sink) *cfg.gauge_sink << '\n';
  };
  auto record_conserved = [&](const State& s) {
    const Conserved c = model.conserved_quantities(s);
    r.conservation.push_back({s.t, c.mass, c.energy});
    if (cfg.conservation_sink) {
      *cfg.conservation_sink << fmt(s.t) << ',' << fmt(c.mass) << ',' << fmt(c.energy) << '\n';
      cfg.conservation_sink->flush();
    }
  };

  State s = initial;
  record_gauges(s);
  record_conserved(s);
  const double t0 = initial.t;
  auto rhs = [&model](const State& y) { return model.rhs(y); };
  try {
    for (long k = 1; k <= n; ++k) {
      s = rk4_step(s, cfg.dt, rhs, k);
      s.t = t0 + static_cast<double>(k) * cfg.dt;  // avoid accumulated round-off in t
      record_gauges(s);
      if (k % cfg.log_every == 0 || k == n) record_conserved(s);
      r.steps = k;
    }
  } catch (...) {
    if (cfg.gauge_sink) cfg.gauge_sink->flush();
    if (cfg.conservation_sink) cfg.conservation_sink->flush();
    throw;
  }
  if (cfg.gauge_sink) cfg.gauge_sink->flush();
  r.final_state = std::move(s);
  return r;
}

}  // namespace bbm
