#include "bbm/manufactured.hpp"

#include <cmath>
#include <numbers>

#include "bbm/errors.hpp"

namespace bbm {

namespace {

constexpr double kPi = std::numbers::pi;

// Spatial profiles of the exact solution (time factor removed).
struct Profile {
  double eta;
  Vec2 grad_eta;
  double lap_eta;
  Vec2 u;
  Mat2 jac_u;  // (i,j) = d u_i / d x_j
  Vec2 grad_div_u;
};

Profile profile(const Vec2& x) {
  const double sx = std::sin(kPi * x.x()), cx = std::cos(kPi * x.x());
  const double sy = std::sin(kPi * x.y()), cy = std::cos(kPi * x.y());
  Profile p;
  p.eta = cx * cy;
  p.grad_eta = Vec2(-kPi * sx * cy, -kPi * cx * sy);
  p.lap_eta = -2.0 * kPi * kPi * cx * cy;
  p.u = Vec2(sx * cy, cx * sy);
  p.jac_u << kPi * cx * cy, -kPi * sx * sy,
             -kPi * sx * sy, kPi * cx * cy;
  p.grad_div_u = -2.0 * kPi * kPi * p.u;
  return p;
}

}  // namespace

ManufacturedSolution::ManufacturedSolution(Bathymetry bathymetry, double g)
    : bathymetry_(std::move(bathymetry)), g_(g) {
  if (!bathymetry_.gradient || !bathymetry_.has_hessian()) {
    throw ConfigError("manufactured solution needs an analytic bathymetry with gradient and Hessian");
  }
}

double ManufacturedSolution::eta(const Vec2& x, double t) const { return std::exp(t) * profile(x).eta; }

Vec2 ManufacturedSolution::grad_eta(const Vec2& x, double t) const {
  return std::exp(t) * profile(x).grad_eta;
}

Vec2 ManufacturedSolution::u(const Vec2& x, double t) const { return std::exp(t) * profile(x).u; }

Mat2 ManufacturedSolution::jacobian_u(const Vec2& x, double t) const {
  return std::exp(t) * profile(x).jac_u;
}

double ManufacturedSolution::forcing_eta_linear(const Vec2& x) const {
  const Profile p = profile(x);
  const double d = bathymetry_.depth(x);
  const Vec2 gd = bathymetry_.gradient(x);
  const double div_u = p.jac_u.trace();
  const Vec2 grad_d2 = 2.0 * d * gd;
  return p.eta + gd.dot(p.u) + d * div_u - (grad_d2.dot(p.grad_eta) + d * d * p.lap_eta) / 6.0;
}

double ManufacturedSolution::forcing_eta_quadratic(const Vec2& x) const {
  const Profile p = profile(x);
  return p.grad_eta.dot(p.u) + p.eta * p.jac_u.trace();
}

Vec2 ManufacturedSolution::forcing_u_linear(const Vec2& x) const {
  const Profile p = profile(x);
  const double d = bathymetry_.depth(x);
  const Vec2 gd = bathymetry_.gradient(x);
  const Mat2 hd = bathymetry_.hessian(x);
  const Vec2 grad_d2 = 2.0 * d * gd;
  const Mat2 hess_d2 = 2.0 * (gd * gd.transpose() + d * hd);
  // grad div(D^2 u) = H(D^2) u + J_u^T grad D^2 + grad D^2 div u + D^2 grad div u
  const Vec2 grad_div =
      hess_d2 * p.u + p.jac_u.transpose() * grad_d2 + grad_d2 * p.jac_u.trace() + d * d * p.grad_div_u;
  return p.u + g_ * p.grad_eta - grad_div / 6.0;
}

Vec2 ManufacturedSolution::forcing_u_quadratic(const Vec2& x) const {
  const Profile p = profile(x);
  return p.jac_u.transpose() * p.u;  // grad |u|^2 / 2
}

double ManufacturedSolution::forcing_eta(const Vec2& x, double t) const {
  const double e = std::exp(t);
  return e * forcing_eta_linear(x) + e * e * forcing_eta_quadratic(x);
}

Vec2 ManufacturedSolution::forcing_u(const Vec2& x, double t) const {
  const double e = std::exp(t);
  return e * forcing_u_linear(x) + e * e * forcing_u_quadratic(x);
}

ScalarFunction ManufacturedSolution::eta_at(double t) const {
  return {[this, t](const Vec2& x) { return eta(x, t); },
          [this, t](const Vec2& x) { return grad_eta(x, t); }};
}

VectorFunction ManufacturedSolution::u_at(double t) const {
  return {[this, t](const Vec2& x) { return u(x, t); },
          [this, t](const Vec2& x) { return jacobian_u(x, t); }};
}

}  // namespace bbm
