#include "bbm/bathymetry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bbm/errors.hpp"

namespace bbm {

Bathymetry flat_bottom(double depth) {
  if (!(depth > 0.0)) throw ConfigError("flat_bottom: depth must be positive");
  Bathymetry b;
  b.name = "flat";
  b.depth = [depth](const Vec2&) { return depth; };
  b.gradient = [](const Vec2&) { return Vec2::Zero().eval(); };
  b.hessian = [](const Vec2&) { return Mat2::Zero().eval(); };
  return b;
}

Bathymetry gaussian_dip() {
  Bathymetry b;
  b.name = "gaussian";
  b.depth = [](const Vec2& x) { return 1.0 - 1e-2 * std::exp(-x.squaredNorm()); };
  b.gradient = [](const Vec2& x) { return (2e-2 * std::exp(-x.squaredNorm()) * x).eval(); };
  b.hessian = [](const Vec2& x) {
    const double e = 2e-2 * std::exp(-x.squaredNorm());
    return (e * (Mat2::Identity() - 2.0 * x * x.transpose())).eval();
  };
  return b;
}

Bathymetry piecewise_linear_profile(std::vector<std::pair<double, double>> breakpoints) {
  if (breakpoints.empty()) throw ConfigError("piecewise_linear_profile: no breakpoints");
  std::sort(breakpoints.begin(), breakpoints.end());
  for (const auto& [x, d] : breakpoints) {
    if (!(d > 0.0)) throw ConfigError("piecewise_linear_profile: depth must be positive (non-cavitation)");
  }
  auto segment = [bp = breakpoints](double x) -> std::pair<double, double> {
    // (value, slope) at x
    if (x <= bp.front().first) return {bp.front().second, 0.0};
    if (x >= bp.back().first) return {bp.back().second, 0.0};
    const auto it = std::upper_bound(bp.begin(), bp.end(), x,
                                     [](double v, const auto& p) { return v < p.first; });
    const auto& [xa, da] = *(it - 1);
    const auto& [xb, db] = *it;
    const double slope = (db - da) / (xb - xa);
    return {da + slope * (x - xa), slope};
  };
  Bathymetry b;
  b.kind = Bathymetry::Kind::PiecewiseLinear;
  b.name = "piecewise-linear";
  b.depth = [segment](const Vec2& x) { return segment(x.x()).first; };
  b.gradient = [segment](const Vec2& x) { return Vec2(segment(x.x()).second, 0.0); };
  return b;
}

Bathymetry plane_beach(double depth, double x_toe, double slope, double x_end) {
  Bathymetry b = piecewise_linear_profile({{x_toe, depth}, {x_end, depth - slope * (x_end - x_toe)}});
  b.name = "plane-beach";
  return b;
}

Field project_bathymetry(std::shared_ptr<const FunctionSpace> space, const Bathymetry& bathymetry) {
  Field dh = l2_project(space, bathymetry.depth);
  const double dmin = dh.coeffs.minCoeff();
  if (!(dmin > 0.0)) {
    throw ConfigError("bathymetry: projected depth " + std::to_string(dmin) +
                      " violates the non-cavitation assumption D > 0");
  }
  return dh;
}

}  // namespace bbm
