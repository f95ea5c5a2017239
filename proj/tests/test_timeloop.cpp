#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <sstream>

#include "bbm/errors.hpp"
#include "bbm/model.hpp"
#include "bbm/timeloop.hpp"

using namespace bbm;

namespace {

BbmModel small_model(int n = 4) {
  ModelConfig c;
  c.g = 1.0;
  c.bathymetry = gaussian_dip();
  c.eta_degree = 1;
  c.u_degree = 2;
  return BbmModel(std::make_shared<const Mesh>(structured_rect_mesh(n, n, Rectangle{})), c);
}

State bump(const BbmModel& m, double a) {
  State s = m.zero_state();
  s.eta = interpolate(m.eta_space(), [a](const Vec2& x) { return a * std::exp(-20 * (x - Vec2(0.4, 0.5)).squaredNorm()); });
  return s;
}

}  // namespace

TEST(Rk4, ScalarStep) {
  const Eigen::VectorXd y0 = Eigen::VectorXd::Ones(1);
  const Eigen::VectorXd y1 = rk4_step(y0, 0.0, 0.1, [](double, const Eigen::VectorXd& y) { return y; });
  EXPECT_NEAR(y1[0], 1.0 + 0.1 + 0.005 + 1e-3 / 6.0 + 1e-4 / 24.0, 1e-15);
  EXPECT_NEAR(y1[0], 1.1051708333333333, 1e-15);
}

TEST(Rk4, ZeroRhsLeavesStateUnchanged) {
  const BbmModel m = small_model();
  const State s = bump(m, 0.1);
  const State r = rk4_step(s, 0.1, [&](const State&) {
    return StateDerivative{Eigen::VectorXd::Zero(s.eta.coeffs.size()), Eigen::VectorXd::Zero(s.u.coeffs.size())};
  });
  EXPECT_EQ(r.eta.coeffs, s.eta.coeffs);
  EXPECT_EQ(r.u.coeffs, s.u.coeffs);
  EXPECT_DOUBLE_EQ(r.t, 0.1);
}

TEST(Rk4, FourthOrderOnLinearSystem) {
  Eigen::Matrix2d l;
  l << -0.1, 2.0, -2.0, -0.1;
  // damped rotation: exp(l) = e^{-0.1} [[cos 2, sin 2], [-sin 2, cos 2]]
  Eigen::Matrix2d el;
  el << std::cos(2.0), std::sin(2.0), -std::sin(2.0), std::cos(2.0);
  el *= std::exp(-0.1);
  const Eigen::Vector2d y0(1.0, 0.5);
  const Eigen::Vector2d exact = el * y0;
  std::vector<double> err;
  for (double dt : {0.1, 0.05, 0.025}) {
    Eigen::VectorXd y = y0;
    const int n = static_cast<int>(std::lround(1.0 / dt));
    for (int k = 0; k < n; ++k) {
      y = rk4_step(y, k * dt, dt, [&](double, const Eigen::VectorXd& v) { return Eigen::VectorXd(l * v); });
    }
    err.push_back((y - exact).norm());
  }
  EXPECT_NEAR(std::log2(err[0] / err[1]), 4.0, 0.15);
  EXPECT_NEAR(std::log2(err[1] / err[2]), 4.0, 0.15);
}

TEST(Rk4, BlowUpReportsStep) {
  const BbmModel m = small_model(2);
  const State s = m.zero_state();
  try {
    rk4_step(s, 0.1, [&](const State&) {
      StateDerivative d{Eigen::VectorXd::Zero(s.eta.coeffs.size()), Eigen::VectorXd::Zero(s.u.coeffs.size())};
      d.eta[0] = std::numeric_limits<double>::quiet_NaN();
      return d;
    }, 17);
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_EQ(e.step(), 17);
  }
}

TEST(Rk4, TimeReversal) {
  const BbmModel m = small_model();
  const State s = bump(m, 1e-3);
  auto f = [&](const State& x) { return m.rhs(x); };
  std::vector<double> diff;
  for (double dt : {0.2, 0.1}) {
    const State back = rk4_step(rk4_step(s, dt, f), -dt, f);
    diff.push_back((back.eta.coeffs - s.eta.coeffs).norm() + (back.u.coeffs - s.u.coeffs).norm());
  }
  EXPECT_GT(diff[0], 0.0);
  EXPECT_GT(std::log2(diff[0] / diff[1]), 4.5);
}

TEST(Run, StepCount) {
  EXPECT_EQ(step_count(0.1, 0.1), 1);
  EXPECT_EQ(step_count(0.1, 0.3), 3);
  EXPECT_EQ(step_count(5e-4, 1.0), 2000);
  EXPECT_EQ(step_count(1e-3, 24.0), 24000);
  EXPECT_EQ(step_count(0.3, 1.0), 4);
  EXPECT_THROW(step_count(0.0, 1.0), ConfigError);
  EXPECT_THROW(step_count(0.1, 0.05), ConfigError);
}

TEST(Run, SingleStepAndLogs) {
  const BbmModel m = small_model();
  RunConfig cfg;
  cfg.dt = 0.01;
  cfg.t_final = 0.01;
  cfg.gauge_points = {Vec2(0.4, 0.5), Vec2(1.0, 1.0)};
  std::ostringstream gauges, cons;
  cfg.gauge_sink = &gauges;
  cfg.conservation_sink = &cons;
  const State init = bump(m, 0.05);
  const RunResult r = run(m, init, cfg);
  EXPECT_EQ(r.steps, 1);
  EXPECT_DOUBLE_EQ(r.final_state.t, 0.01);
  ASSERT_EQ(r.gauges.t.size(), 2u);
  ASSERT_EQ(r.gauges.eta.size(), 2u);
  EXPECT_EQ(r.gauges.eta[0][0], eval_scalar_at(init.eta, Vec2(0.4, 0.5)));
  EXPECT_EQ(r.gauges.eta[1][1], eval_scalar_at(r.final_state.eta, Vec2(1.0, 1.0)));

  std::istringstream g(gauges.str());
  std::string line;
  std::getline(g, line);
  EXPECT_EQ(line, "t,gauge1,gauge2");
  int rows = 0;
  while (std::getline(g, line)) ++rows;
  EXPECT_EQ(rows, 2);
  EXPECT_EQ(cons.str().substr(0, 6), "t,M,E\n");
}

TEST(Run, GaugeTimesIncreaseAndLogCadence) {
  const BbmModel m = small_model();
  RunConfig cfg;
  cfg.dt = 0.01;
  cfg.t_final = 0.25;
  cfg.log_every = 10;
  cfg.gauge_points = {Vec2(0.5, 0.5)};
  const RunResult r = run(m, bump(m, 0.05), cfg);
  EXPECT_EQ(r.steps, 25);
  ASSERT_EQ(r.gauges.t.size(), 26u);
  for (size_t k = 1; k < r.gauges.t.size(); ++k) EXPECT_GT(r.gauges.t[k], r.gauges.t[k - 1]);
  // t0, steps 10 and 20, final step
  ASSERT_EQ(r.conservation.size(), 4u);
  EXPECT_DOUBLE_EQ(r.conservation.back().t, 0.25);
  EXPECT_NEAR(r.conservation.back().mass, r.conservation.front().mass, 1e-14);
}

TEST(Run, DeterministicReplay) {
  const BbmModel m = small_model();
  RunConfig cfg;
  cfg.dt = 0.02;
  cfg.t_final = 0.2;
  cfg.gauge_points = {Vec2(0.3, 0.3), Vec2(0.9, 0.1)};
  const RunResult a = run(m, bump(m, 0.1), cfg);
  const RunResult b = run(m, bump(m, 0.1), cfg);
  EXPECT_EQ(a.gauges.eta, b.gauges.eta);
  EXPECT_EQ(a.final_state.u.coeffs, b.final_state.u.coeffs);
}

TEST(Run, ZeroInitialStateStaysZero) {
  const BbmModel m = small_model();
  RunConfig cfg;
  cfg.dt = 0.05;
  cfg.t_final = 0.5;
  cfg.log_every = 1;
  const RunResult r = run(m, m.zero_state(), cfg);
  for (const auto& c : r.conservation) {
    EXPECT_EQ(c.mass, 0.0);
    EXPECT_EQ(c.energy, 0.0);
  }
}

TEST(Run, Format) {
  EXPECT_EQ(fmt(0.1), "0.1");
  EXPECT_EQ(fmt(1.0 / 3.0), "0.3333333333");
  EXPECT_EQ(fmt(2.0 / 3.0e-7), "6666666.667");
}
