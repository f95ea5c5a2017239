#pragma once

#include "bbm/bathymetry.hpp"
#include "bbm/space.hpp"

namespace bbm {

/// Exact solution used for the convergence study on [0,1]^2,
///   eta = e^t cos(pi x) cos(pi y),
///   u   = e^t (sin(pi x) cos(pi y), cos(pi x) sin(pi y)),
/// together with the forcing that makes it solve
///   eta_t + div((D + eta) u) - 1/6 div(D^2 grad eta_t) = F_eta,
///   u_t + g grad eta + 1/2 grad |u|^2 - 1/6 grad div(D^2 u_t) = F_u.
///
/// Every term is either linear in the solution (factor e^t) or quadratic
/// (factor e^{2t}); the split is exposed so load vectors can be built once.
class ManufacturedSolution {
 public:
  ManufacturedSolution(Bathymetry bathymetry, double g);

  double eta(const Vec2& x, double t) const;
  Vec2 grad_eta(const Vec2& x, double t) const;
  Vec2 u(const Vec2& x, double t) const;
  Mat2 jacobian_u(const Vec2& x, double t) const;

  double forcing_eta(const Vec2& x, double t) const;
  Vec2 forcing_u(const Vec2& x, double t) const;

  /// F_eta(x, t) = e^t linear(x) + e^{2t} quadratic(x).
  double forcing_eta_linear(const Vec2& x) const;
  double forcing_eta_quadratic(const Vec2& x) const;
  Vec2 forcing_u_linear(const Vec2& x) const;
  Vec2 forcing_u_quadratic(const Vec2& x) const;

  ScalarFunction eta_at(double t) const;
  VectorFunction u_at(double t) const;

  const Bathymetry& bathymetry() const { return bathymetry_; }
  double g() const { return g_; }

 private:
  Bathymetry bathymetry_;
  double g_;
};

}  // namespace bbm
