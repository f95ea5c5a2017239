#include "bbm/model.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

#include "bbm/errors.hpp"

namespace bbm {

namespace {

std::unique_ptr<Eigen::SimplicialLLT<SparseMatrix>> factorize(const SparseMatrix& m) {
  auto f = std::make_unique<Eigen::SimplicialLLT<SparseMatrix>>();
  f->compute(m);
  return f;
}

// Squared spread of the Cholesky diagonal: a cheap lower bound on cond(M).
double condition_estimate(const Eigen::SimplicialLLT<SparseMatrix>& f) {
  const SparseMatrix l = f.matrixL();
  const Eigen::VectorXd d = l.diagonal().cwiseAbs();
  const double r = d.maxCoeff() / d.minCoeff();
  return r * r;
}

Eigen::VectorXd checked_solve(const Eigen::SimplicialLLT<SparseMatrix>& f, const Eigen::VectorXd& load,
                              const char* which) {
  Eigen::VectorXd x = f.solve(load);
  if (f.info() != Eigen::Success || !x.allFinite()) {
    std::ostringstream msg;
    msg << which << " solve failed (condition estimate " << condition_estimate(f) << ")";
    throw NumericalError(msg.str());
  }
  return x;
}

}  // namespace

BbmModel::BbmModel(std::shared_ptr<const Mesh> mesh, ModelConfig config)
    : config_(std::move(config)), mesh_(std::move(mesh)) {
  if (!(config_.gamma > 0.0)) throw ConfigError("model: Nitsche penalty gamma must be positive");
  if (!(config_.g > 0.0)) throw ConfigError("model: gravity must be positive");
  if (config_.variant == Variant::Simplified && !(config_.reference_depth > 0.0)) {
    throw ConfigError("model: the simplified variant needs a reference depth D0 > 0");
  }
  eta_space_ = std::make_shared<const FunctionSpace>(mesh_, config_.eta_degree, Rank::Scalar);
  u_space_ = std::make_shared<const FunctionSpace>(mesh_, config_.u_degree, Rank::Vector);
  assembler_ = std::make_unique<Assembler>(eta_space_, u_space_);

  depth_ = project_bathymetry(eta_space_, config_.bathymetry);
  dispersion_depth_ = config_.variant == Variant::Full
                          ? depth_
                          : Field(eta_space_, Eigen::VectorXd::Constant(eta_space_->dim(),
                                                                        config_.reference_depth));

  ops_.gamma = config_.gamma;
  ops_.h_penalty = config_.local_penalty_h ? 0.0 : mesh_->h_max();
  ops_.A = assembler_->A(dispersion_depth_);
  ops_.B = assembler_->B(dispersion_depth_, config_.gamma, config_.local_penalty_h ? -1.0 : mesh_->h_max());
  ops_.A_factor = factorize(ops_.A);
  if (ops_.A_factor->info() != Eigen::Success) {
    throw NumericalError("model: elevation operator is not positive definite");
  }
  ops_.B_factor = factorize(ops_.B);
  if (ops_.B_factor->info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "model: velocity operator is not positive definite for gamma = " << config_.gamma
        << "; increase the Nitsche penalty";
    throw ConfigError(msg.str());
  }

  rhs_cache_ = assembler_->make_rhs_cache(depth_, dispersion_depth_);

  if (config_.manufactured) {
    manufactured_.emplace(config_.bathymetry, config_.g);
    const ManufacturedSolution& ms = *manufactured_;
    forcing_eta_lin_ = assembler_->scalar_load([&](const Vec2& x) { return ms.forcing_eta_linear(x); });
    forcing_eta_quad_ = assembler_->scalar_load([&](const Vec2& x) { return ms.forcing_eta_quadratic(x); });
    forcing_u_lin_ = assembler_->weighted_vector_load([&](const Vec2& x) { return ms.forcing_u_linear(x); },
                                                      dispersion_depth_);
    forcing_u_quad_ = assembler_->weighted_vector_load(
        [&](const Vec2& x) { return ms.forcing_u_quadratic(x); }, dispersion_depth_);
  }
}

State BbmModel::zero_state(double t) const { return State{Field(eta_space_), Field(u_space_), t}; }

Eigen::VectorXd BbmModel::solve_A(const Eigen::VectorXd& load) const {
  return checked_solve(*ops_.A_factor, load, "elevation");
}

Eigen::VectorXd BbmModel::solve_B(const Eigen::VectorXd& load) const {
  return checked_solve(*ops_.B_factor, load, "velocity");
}

StateDerivative BbmModel::rhs(const State& state) const {
  Eigen::VectorXd mass_load, momentum_load;
  assembler_->rhs(rhs_cache_, state.eta.coeffs, state.u.coeffs, config_.g, mass_load, momentum_load);
  if (manufactured_) {
    const double e = std::exp(state.t);
    mass_load += e * forcing_eta_lin_ + (e * e) * forcing_eta_quad_;
    momentum_load += e * forcing_u_lin_ + (e * e) * forcing_u_quad_;
  }
  return {solve_A(mass_load), solve_B(momentum_load)};
}

Conserved BbmModel::conserved_quantities(const State& state) const {
  Conserved c;
  c.mass = assembler_->integrate(depth_, state.eta.coeffs, state.u.coeffs,
                                 [](const Assembler::PointValues& p) { return p.eta; });
  const double g = config_.g;
  c.energy = 0.5 * assembler_->integrate(depth_, state.eta.coeffs, state.u.coeffs,
                                         [g](const Assembler::PointValues& p) {
                                           return g * p.eta * p.eta + (p.depth + p.eta) * p.u.squaredNorm();
                                         });
  return c;
}

StateDerivative semidiscrete_rhs(const State& state, const BbmModel& model) { return model.rhs(state); }

Conserved conserved_quantities(const State& state, const BbmModel& model) {
  return model.conserved_quantities(state);
}

double SolitaryWave::speed() const { return std::sqrt(g * depth) * (1.0 + amplitude / (2.0 * depth)); }

double SolitaryWave::kappa() const {
  return std::sqrt(3.0 * amplitude / (4.0 * depth)) / (depth * std::sqrt(1.0 + amplitude / depth));
}

double SolitaryWave::eta(const Vec2& x) const {
  const double s = 1.0 / std::cosh(kappa() * (x.x() - x0));
  return amplitude * s * s;
}

Vec2 SolitaryWave::u(const Vec2& x) const {
  const double e = eta(x);
  return Vec2(speed() * e / (depth + e), 0.0);
}

State solitary_wave_ic(const BbmModel& model, double amplitude, double depth, double x0) {
  if (amplitude < 0.0 || !(depth > 0.0)) {
    throw ConfigError("solitary_wave_ic: need amplitude >= 0 and depth > 0");
  }
  if (amplitude / depth > 0.8) {
    std::cerr << "warning: solitary wave A/D0 = " << amplitude / depth
              << " is outside the Boussinesq regime\n";
  }
  const SolitaryWave wave{amplitude, depth, x0, model.config().g};
  State s;
  s.eta = interpolate(model.eta_space(), [&](const Vec2& x) { return wave.eta(x); });
  s.u = interpolate(model.u_space(), [&](const Vec2& x) { return wave.u(x); });
  s.t = 0.0;
  return s;
}

}  // namespace bbm
