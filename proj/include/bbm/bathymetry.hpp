#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "bbm/space.hpp"

namespace bbm {

/// Still-water depth D(x) > 0.
struct Bathymetry {
  enum class Kind { Analytic, PiecewiseLinear };

  Kind kind = Kind::Analytic;
  std::string name;
  ScalarFn depth;
  VectorFn gradient;
  std::function<Mat2(const Vec2&)> hessian;  // empty for piecewise-linear profiles

  double operator()(const Vec2& x) const { return depth(x); }
  bool has_hessian() const { return static_cast<bool>(hessian); }
};

Bathymetry flat_bottom(double depth);

/// D(x) = 1 - 1e-2 exp(-|x|^2).
Bathymetry gaussian_dip();

/// Depth linear in x between breakpoints (x_k, D_k), constant beyond the ends.
Bathymetry piecewise_linear_profile(std::vector<std::pair<double, double>> breakpoints);

/// Flat depth D0 up to x_toe, then falling by `slope` per metre.
Bathymetry plane_beach(double depth, double x_toe, double slope, double x_end);

/// L2 projection of the bathymetry onto a scalar space. Throws ConfigError
/// when the projected depth is not strictly positive at the DOF nodes.
Field project_bathymetry(std::shared_ptr<const FunctionSpace> space, const Bathymetry& bathymetry);

}  // namespace bbm
