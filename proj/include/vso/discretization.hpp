#pragma once

#include <optional>
#include <stdexcept>
#include <utility>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "vso/core.hpp"
#include "vso/model.hpp"
#include "vso/observer.hpp"

namespace vso {

/// Second difference with w(0) = 0 and a ghost-node reflection at z = L
/// enforcing w_z(L) = 0. Row 0 is returned as zero.
Nodal discrete_laplacian(const Nodal& w, const Grid& grid);

/// Forward differences (w_{i+1} - w_i) / dz, one per cell.
Eigen::VectorXd cell_gradient(const Nodal& w, const Grid& grid);

struct StepperConfig {
  double dt = 1e-3;
  double solver_tol = 1e-12;
  int max_iter = 100;

  void validate() const;
};

class SolverDiverged : public std::runtime_error {
 public:
  SolverDiverged(int iterations, double residual, std::optional<long> step = std::nullopt);

  int iterations() const { return iterations_; }
  double residual() const { return residual_; }
  std::optional<long> step() const { return step_; }

 private:
  int iterations_;
  double residual_;
  std::optional<long> step_;
};

/// Implicit midpoint rule for the coupled plant/observer system
///
///   x_{n+1} = x_n + dt * F((x_n + x_{n+1}) / 2, u(t_n + dt / 2)).
///
/// The unknowns are the unpinned nodes 1..N of (w, p, w_hat, p_hat). The
/// system matrix is block diagonal and banded apart from a single rank-one
/// output-injection term, so each step is one sparse LU back-substitution
/// plus a Sherman-Morrison correction, followed by iterative refinement until
/// the residual drops below solver_tol (relative to the right-hand side).
class MidpointStepper {
 public:
  MidpointStepper(const StringConfig& cfg, const ActuatorWindow& win, const Grid& grid, const GainConfig& gain,
                  const StepperConfig& sc);

  /// Advances both states by dt. Time is read from plant.t.
  void step(FieldState& plant, ObserverState& observer, const InputSignal& u) const;

  /// The same scheme with dt negated; undoes step() up to round-off.
  MidpointStepper reversed() const;

  double dt() const { return dt_; }
  const Grid& grid() const { return grid_; }
  int last_iterations() const { return last_iterations_; }
  double last_residual() const { return last_residual_; }

 private:
  MidpointStepper(const MidpointStepper& other, double dt);
  void build();
  Eigen::VectorXd apply_system(const Eigen::VectorXd& x) const;  // (I - dt/2 A) x
  Eigen::VectorXd solve_once(const Eigen::VectorXd& rhs) const;

  StringConfig cfg_;
  ActuatorWindow win_;
  Grid grid_;
  GainConfig gain_;
  StepperConfig sc_;
  double dt_;

  int n_ = 0;                      // unpinned nodes per field
  Eigen::VectorXd profile_;        // b on nodes 1..N
  Eigen::VectorXd out_weights_;    // c on nodes 1..N
  Eigen::VectorXd k1_;             // k1 profile on nodes 1..N
  Eigen::VectorXd inject_u_;       // rank-one column U
  Eigen::VectorXd inject_v_;       // rank-one row v
  Eigen::SparseMatrix<double> band_;  // single-string block of A
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;  // (I - dt/2 band) for one string
  Eigen::VectorXd lu_u_;           // M_band^{-1} U
  double sm_denominator_ = 1.0;
  mutable int last_iterations_ = 0;
  mutable double last_residual_ = 0.0;
};

/// Single midpoint step; factors the system on every call.
std::pair<FieldState, ObserverState> step_midpoint(const FieldState& plant, const ObserverState& observer,
                                                   const InputSignal& u, const StringConfig& cfg,
                                                   const ActuatorWindow& win, const Grid& grid,
                                                   const GainConfig& gain, const StepperConfig& sc);

}  // namespace vso
