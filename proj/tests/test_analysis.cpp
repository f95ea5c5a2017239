#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "bbm/analysis.hpp"
#include "bbm/errors.hpp"
#include "bbm/timeloop.hpp"

using namespace bbm;
using std::numbers::pi;

namespace {

std::shared_ptr<const Mesh> unit_mesh(int n) {
  return std::make_shared<const Mesh>(structured_rect_mesh(n, n, Rectangle{}));
}

ModelConfig config(int r, int p, Bathymetry b, bool manufactured = false) {
  ModelConfig c;
  c.eta_degree = r - 1;
  c.u_degree = p - 1;
  c.g = 1.0;
  c.bathymetry = std::move(b);
  c.manufactured = manufactured;
  return c;
}

double rate(double a, double b) { return std::log(a / b) / std::log(2.0); }

}  // namespace

TEST(Rates, Examples) {
  EXPECT_NEAR(convergence_rate(2.704e-3, 1.200e-3, 1.0 / 8, 1.0 / 12), 2.004, 5e-4);
  EXPECT_EQ(convergence_rate(0.3, 0.3, 0.1, 0.05), 0.0);
  EXPECT_NEAR(convergence_rate(0.4, 0.2, 0.1, 0.05), 1.0, 1e-15);
}

TEST(Rates, ReportRatesAndValidation) {
  ErrorReport rep;
  rep.rows.push_back({1.0 / 8, 1.0, 2.0, 3.0, 4.0, 5.0, 0.1});
  rep.rows.push_back({1.0 / 16, 0.25, 1.0, 0.75, 1.0, 2.5, 0.01});
  const auto rr = convergence_rates(rep);
  ASSERT_EQ(rr.size(), 1u);
  EXPECT_NEAR(rr[0].l2_eta, 2.0, 1e-14);
  EXPECT_NEAR(rr[0].h1_eta, 1.0, 1e-14);
  EXPECT_NEAR(rr[0].div_u, 2.0, 1e-14);
  rep.rows.push_back({1.0 / 16, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1});
  EXPECT_THROW(convergence_rates(rep), ConfigError);
}

TEST(Rates, CsvLayout) {
  ErrorReport rep;
  rep.rows.push_back({0.125, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0});
  std::ostringstream os;
  rep.write_csv(os);
  EXPECT_EQ(os.str(),
            "h,err_L2_eta,rate,err_H1_eta,rate,err_L2_u,rate,err_div_u,rate,err_H1_u,rate,trace_u_n\n"
            "0.125,1,,2,,3,,4,,5,,6\n");
  rep.rows.push_back({0.0625, 0.25, 1.0, 0.75, 1.0, 2.5, 3.0});
  std::ostringstream os2;
  rep.write_csv(os2);
  EXPECT_NE(os2.str().find("0.0625,0.25,2,1,1,0.75,2,1,2,2.5,1,3\n"), std::string::npos);
  std::ostringstream tab;
  rep.write_table(tab);
  EXPECT_NE(tab.str().find("2.000"), std::string::npos);
}

TEST(Errors, ExactPolynomialsHaveZeroError) {
  auto mesh = unit_mesh(3);
  auto s = std::make_shared<const FunctionSpace>(mesh, 2, Rank::Scalar);
  auto v = std::make_shared<const FunctionSpace>(mesh, 2, Rank::Vector);
  const ScalarFunction f{[](const Vec2& x) { return x.x() * x.y() - x.y() * x.y() + 3.0; },
                         [](const Vec2& x) { return Vec2(x.y(), x.x() - 2 * x.y()); }};
  const VectorFunction w{[](const Vec2& x) { return Vec2(x.x() * x.x(), x.x() - x.y()); },
                         [](const Vec2& x) {
                           Mat2 j;
                           j << 2 * x.x(), 0.0, 1.0, -1.0;
                           return j;
                         }};
  const ScalarErrors se = scalar_errors(interpolate(s, f.value), f);
  const VectorErrors ve = vector_errors(interpolate(v, w.value), w, mesh->h_max());
  EXPECT_LE(se.l2, 1e-10);
  EXPECT_LE(se.h1, 1e-10);
  EXPECT_LE(ve.l2, 1e-10);
  EXPECT_LE(ve.div, 1e-10);
  EXPECT_LE(ve.h1, 1e-10);
  EXPECT_LE(ve.triple, 1e-10);
  EXPECT_LE(ve.trace, 1e-10);
  // u.n is 0 on x=0, 1 on x=1, -x on y=0 and x-1 on y=1
  const double expect = std::sqrt(1.0 + 1.0 / 3.0 + 1.0 / 3.0);
  EXPECT_NEAR(normal_trace_norm(interpolate(v, w.value)), expect, 1e-12);
}

TEST(Projection, ScalarExactCases) {
  const BbmModel m(unit_mesh(4), config(3, 3, flat_bottom(0.7)));
  const ScalarFunction c{[](const Vec2&) { return 2.0; }, [](const Vec2&) { return Vec2(0, 0); }};
  const Field pc = elliptic_project_scalar(c, m);
  EXPECT_LE((pc.coeffs.array() - 2.0).abs().maxCoeff(), 1e-11);
  const ScalarFunction q{[](const Vec2& x) { return x.x() * x.x() - 0.5 * x.x() * x.y() + x.y(); },
                         [](const Vec2& x) { return Vec2(2 * x.x() - 0.5 * x.y(), 1.0 - 0.5 * x.x()); }};
  EXPECT_LE(scalar_errors(elliptic_project_scalar(q, m), q).h1, 1e-11);
}

TEST(Projection, VectorZero) {
  const BbmModel m(unit_mesh(4), config(2, 3, gaussian_dip()));
  const VectorFunction z{[](const Vec2&) { return Vec2(0, 0); }, [](const Vec2&) { return Mat2::Zero().eval(); }};
  EXPECT_EQ(elliptic_project_vector(z, m).coeffs.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Projection, ScalarOrders) {
  std::vector<ScalarErrors> e;
  const ScalarFunction f{[](const Vec2& x) { return std::cos(pi * x.x()) * std::cos(pi * x.y()); },
                         [](const Vec2& x) {
                           return Vec2(-pi * std::sin(pi * x.x()) * std::cos(pi * x.y()),
                                       -pi * std::cos(pi * x.x()) * std::sin(pi * x.y()));
                         }};
  for (int n : {8, 16, 32}) {
    const BbmModel m(unit_mesh(n), config(3, 3, gaussian_dip()));
    e.push_back(scalar_errors(elliptic_project_scalar(f, m), f));
  }
  for (int i = 0; i < 2; ++i) {
    EXPECT_NEAR(rate(e[i].h1, e[i + 1].h1), 2.0, 0.15);
    EXPECT_NEAR(rate(e[i].l2, e[i + 1].l2), 3.0, 0.15);
  }
}

TEST(Projection, VectorOrders) {
  std::vector<double> triple, trace;
  for (int n : {16, 32, 64}) {
    const BbmModel m(unit_mesh(n), config(2, 3, gaussian_dip(), true));
    const VectorFunction u0 = m.manufactured()->u_at(0.0);
    const Field pu = elliptic_project_vector(u0, m);
    triple.push_back(vector_errors(pu, u0, m.mesh().h_max()).triple);
    trace.push_back(normal_trace_norm(pu));
  }
  // the boundary divergence term decays faster on coarse meshes, so the
  // order approaches p-1 from above
  for (int i = 0; i < 2; ++i) {
    EXPECT_GE(rate(triple[i], triple[i + 1]), 2.0 - 0.2);
    EXPECT_GE(rate(trace[i], trace[i + 1]), 1.5 - 0.2);
  }
  EXPECT_NEAR(rate(triple[1], triple[2]), 2.0, 0.2);
}

// Superconvergence: distance of the numerical solution from the projections
// of the exact one decays at least like min(r, p-1).
TEST(Projection, Superconvergence) {
  std::vector<double> s;
  for (int n : {8, 16}) {
    const BbmModel m(unit_mesh(n), config(2, 3, gaussian_dip(), true));
    const ManufacturedSolution& ms = *m.manufactured();
    State init = m.zero_state();
    init.eta = elliptic_project_scalar(ms.eta_at(0.0), m);
    init.u = elliptic_project_vector(ms.u_at(0.0), m);
    RunConfig rc;
    rc.dt = 5e-3;
    rc.t_final = 0.1;
    const RunResult r = run(m, init, rc);
    s.push_back(superconvergence_measure(r.final_state, m));
  }
  EXPECT_GE(rate(s[0], s[1]), 2.0 - 0.2);
}

TEST(Errors, ManufacturedRowIsConsistent) {
  const BbmModel m(unit_mesh(4), config(2, 3, gaussian_dip(), true));
  State s = m.zero_state();
  const ErrorRow row = error_norms(s, *m.manufactured(), 0.25);
  EXPECT_EQ(row.h, 0.25);
  // ||eta||^2 = 1/4, ||grad eta||^2 = pi^2/2, ||u||^2 = 1/2, ||div u||^2 = pi^2
  EXPECT_NEAR(row.l2_eta, 0.5, 1e-6);
  EXPECT_NEAR(row.h1_eta, std::sqrt(0.25 + pi * pi / 2.0), 1e-6);
  EXPECT_NEAR(row.l2_u, std::sqrt(0.5), 1e-6);
  EXPECT_NEAR(row.div_u, std::sqrt(0.5 + pi * pi), 1e-6);
  EXPECT_EQ(row.trace_u_n, 0.0);
}
