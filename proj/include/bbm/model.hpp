#pragma once

#include <memory>
#include <optional>

#include <Eigen/SparseCholesky>

#include "bbm/assembly.hpp"
#include "bbm/bathymetry.hpp"
#include "bbm/manufactured.hpp"
#include "bbm/space.hpp"

namespace bbm {

enum class Variant {
  Full,        // dispersive operators carry the variable depth D
  Simplified,  // dispersive operators use a constant reference depth D0
};

struct ModelConfig {
  Variant variant = Variant::Full;
  double g = 9.81;
  Bathymetry bathymetry = flat_bottom(1.0);
  double gamma = 1000.0;
  /// Required for the simplified variant.
  double reference_depth = 0.0;
  /// Penalty length per boundary edge (owning-cell diameter) instead of global h_max.
  bool local_penalty_h = false;
  /// Add the forcing of ManufacturedSolution (bathymetry must be analytic).
  bool manufactured = false;
  /// Element degrees for elevation and velocity.
  int eta_degree = 1;
  int u_degree = 2;
};

/// Mass and momentum operators with their Cholesky factorizations, built once.
struct OperatorSet {
  SparseMatrix A;
  SparseMatrix B;
  std::unique_ptr<Eigen::SimplicialLLT<SparseMatrix>> A_factor;
  std::unique_ptr<Eigen::SimplicialLLT<SparseMatrix>> B_factor;
  double gamma = 0.0;
  double h_penalty = 0.0;
};

struct State {
  Field eta;
  Field u;
  double t = 0.0;
};

struct StateDerivative {
  Eigen::VectorXd eta;
  Eigen::VectorXd u;
};

struct Conserved {
  double mass = 0.0;
  double energy = 0.0;
};

/// Galerkin semidiscretization of the BBM-BBM system with slip walls
/// imposed weakly (Nitsche) on the velocity.
class BbmModel {
 public:
  BbmModel(std::shared_ptr<const Mesh> mesh, ModelConfig config);

  const ModelConfig& config() const { return config_; }
  const Mesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const FunctionSpace>& eta_space() const { return eta_space_; }
  const std::shared_ptr<const FunctionSpace>& u_space() const { return u_space_; }
  const Assembler& assembler() const { return *assembler_; }
  const OperatorSet& operators() const { return ops_; }
  /// Projected bathymetry D_h (flux terms and energy).
  const Field& depth() const { return depth_; }
  /// Depth used inside the dispersive operators: D_h, or D0 for the simplified variant.
  const Field& dispersion_depth() const { return dispersion_depth_; }
  const ManufacturedSolution* manufactured() const { return manufactured_ ? &*manufactured_ : nullptr; }

  State zero_state(double t = 0.0) const;
  StateDerivative rhs(const State& state) const;
  Conserved conserved_quantities(const State& state) const;

  Eigen::VectorXd solve_A(const Eigen::VectorXd& load) const;
  Eigen::VectorXd solve_B(const Eigen::VectorXd& load) const;

 private:
  ModelConfig config_;
  std::shared_ptr<const Mesh> mesh_;
  std::shared_ptr<const FunctionSpace> eta_space_;
  std::shared_ptr<const FunctionSpace> u_space_;
  std::unique_ptr<Assembler> assembler_;
  Field depth_;
  Field dispersion_depth_;
  OperatorSet ops_;
  Assembler::RhsCache rhs_cache_;
  std::optional<ManufacturedSolution> manufactured_;
  // Forcing loads split by time factor: e^t and e^{2t}.
  Eigen::VectorXd forcing_eta_lin_, forcing_eta_quad_, forcing_u_lin_, forcing_u_quad_;
};

StateDerivative semidiscrete_rhs(const State& state, const BbmModel& model);
Conserved conserved_quantities(const State& state, const BbmModel& model);

/// Line solitary wave uniform in y,
///   eta = A sech^2(kappa (x - x0)), u = (c eta / (D0 + eta), 0),
///   c = sqrt(g D0) (1 + A / (2 D0)), kappa = sqrt(3A / (4 D0)) / (D0 sqrt(1 + A/D0)).
struct SolitaryWave {
  double amplitude;
  double depth;
  double x0;
  double g;

  double speed() const;
  double kappa() const;
  double eta(const Vec2& x) const;
  Vec2 u(const Vec2& x) const;
  /// Total excess mass per unit width, 2 A / kappa.
  double mass_per_width() const { return 2.0 * amplitude / kappa(); }
};

/// Interpolates the solitary wave onto the model spaces. Warns on stderr when A/D0 > 0.8.
State solitary_wave_ic(const BbmModel& model, double amplitude, double depth, double x0);

}  // namespace bbm
