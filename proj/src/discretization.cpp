#include "vso/discretization.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace vso {

Nodal discrete_laplacian(const Nodal& w, const Grid& grid) {
  grid.require_size(w, "w");
  if (w[0] != 0.0) throw BoundaryViolation("discrete_laplacian: w[0] must be 0 (clamped end)");
  const int n = grid.n_cells();
  const double inv_dz2 = 1.0 / (grid.dz() * grid.dz());
  Nodal out(grid.n_nodes());
  out[0] = 0.0;
  for (int i = 1; i < n; ++i) out[i] = (w[i - 1] - 2.0 * w[i] + w[i + 1]) * inv_dz2;
  // Ghost node w_{N+1} = w_{N-1} reflects the Neumann condition at z = L.
  out[n] = 2.0 * (w[n - 1] - w[n]) * inv_dz2;
  return out;
}

Eigen::VectorXd cell_gradient(const Nodal& w, const Grid& grid) {
  grid.require_size(w, "w");
  const int n = grid.n_cells();
  return (w.tail(n) - w.head(n)) / grid.dz();
}

void StepperConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("stepper dt must be > 0");
  if (!(solver_tol > 0.0)) throw std::invalid_argument("stepper solver_tol must be > 0");
  if (max_iter < 1) throw std::invalid_argument("stepper max_iter must be >= 1");
}

namespace {

std::string diverged_message(int iterations, double residual, std::optional<long> step) {
  std::ostringstream os;
  os << "implicit midpoint solve did not converge after " << iterations << " iterations (residual " << residual
     << ")";
  if (step) os << " at step " << *step;
  return os.str();
}

}  // namespace

SolverDiverged::SolverDiverged(int iterations, double residual, std::optional<long> step)
    : std::runtime_error(diverged_message(iterations, residual, step)),
      iterations_(iterations),
      residual_(residual),
      step_(step) {}

MidpointStepper::MidpointStepper(const StringConfig& cfg, const ActuatorWindow& win, const Grid& grid,
                                 const GainConfig& gain, const StepperConfig& sc)
    : cfg_(cfg), win_(win), grid_(grid), gain_(gain), sc_(sc), dt_(sc.dt) {
  validate_config(cfg, win, gain);
  sc.validate();
  if (std::abs(grid.length() - cfg.L) > 1e-12 * cfg.L) throw std::invalid_argument("grid length differs from L");
  build();
}

MidpointStepper::MidpointStepper(const MidpointStepper& other, double dt)
    : cfg_(other.cfg_), win_(other.win_), grid_(other.grid_), gain_(other.gain_), sc_(other.sc_), dt_(dt) {
  build();
}

MidpointStepper MidpointStepper::reversed() const { return MidpointStepper(*this, -dt_); }

void MidpointStepper::build() {
  n_ = grid_.n_cells();
  const int n = n_;
  const double inv_dz2 = 1.0 / (grid_.dz() * grid_.dz());

  profile_ = input_profile(win_, grid_).tail(n);
  out_weights_ = cell_weights(win_, grid_).tail(n);
  k1_ = Eigen::VectorXd::Zero(n);
  if (gain_.has_k1()) {
    for (int r = 0; r < n; ++r) k1_[r] = gain_.k1_profile(grid_.node(r + 1));
  }

  // Single-string generator on (w_1..w_N, p_1..p_N).
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(5 * n);
  for (int r = 0; r < n; ++r) {
    entries.emplace_back(r, n + r, 1.0 / cfg_.rho);
    const int row = n + r;
    const int i = r + 1;
    if (i < n) {
      entries.emplace_back(row, r, -2.0 * cfg_.T * inv_dz2);
      entries.emplace_back(row, r + 1, cfg_.T * inv_dz2);
      if (r > 0) entries.emplace_back(row, r - 1, cfg_.T * inv_dz2);
    } else {
      entries.emplace_back(row, r, -2.0 * cfg_.T * inv_dz2);
      entries.emplace_back(row, r - 1, 2.0 * cfg_.T * inv_dz2);
    }
  }
  band_.resize(2 * n, 2 * n);
  band_.setFromTriplets(entries.begin(), entries.end());

  Eigen::SparseMatrix<double> system(2 * n, 2 * n);
  system.setIdentity();
  system -= 0.5 * dt_ * band_;
  system.makeCompressed();
  lu_.compute(system);
  if (lu_.info() != Eigen::Success) throw SolverDiverged(0, std::numeric_limits<double>::infinity());

  // Output injection: A += U v^T on the coupled state (plant, observer).
  inject_u_ = Eigen::VectorXd::Zero(4 * n);
  inject_u_.segment(2 * n, n) = k1_;
  inject_u_.segment(3 * n, n) = gain_.k * profile_;
  inject_v_ = Eigen::VectorXd::Zero(4 * n);
  inject_v_.segment(n, n) = out_weights_ / cfg_.rho;
  inject_v_.segment(3 * n, n) = -out_weights_ / cfg_.rho;

  lu_u_ = Eigen::VectorXd::Zero(4 * n);
  lu_u_.segment(2 * n, 2 * n) = lu_.solve(inject_u_.segment(2 * n, 2 * n));
  sm_denominator_ = 1.0 - 0.5 * dt_ * inject_v_.dot(lu_u_);
}

Eigen::VectorXd MidpointStepper::apply_system(const Eigen::VectorXd& x) const {
  const int m = 2 * n_;
  Eigen::VectorXd ax(4 * n_);
  ax.head(m) = band_ * x.head(m);
  ax.tail(m) = band_ * x.tail(m);
  ax += inject_u_ * inject_v_.dot(x);
  return x - 0.5 * dt_ * ax;
}

Eigen::VectorXd MidpointStepper::solve_once(const Eigen::VectorXd& rhs) const {
  const int m = 2 * n_;
  Eigen::VectorXd y(4 * n_);
  y.head(m) = lu_.solve(rhs.head(m));
  y.tail(m) = lu_.solve(rhs.tail(m));
  // Sherman-Morrison for the rank-one injection term.
  const double h = 0.5 * dt_;
  y += lu_u_ * (h * inject_v_.dot(y) / sm_denominator_);
  return y;
}

void MidpointStepper::step(FieldState& plant, ObserverState& observer, const InputSignal& u) const {
  plant.check(grid_);
  observer.check(grid_);
  const int n = n_;

  Eigen::VectorXd x(4 * n);
  x << plant.w.tail(n), plant.p.tail(n), observer.w_hat.tail(n), observer.p_hat.tail(n);

  const double u_mid = u(plant.t + 0.5 * dt_);
  // rhs = (I + dt/2 A) x + dt B u_mid, and (I + dt/2 A) x = 2x - (I - dt/2 A) x.
  Eigen::VectorXd rhs = 2.0 * x - apply_system(x);
  rhs.segment(n, n) += dt_ * u_mid * profile_;
  rhs.segment(3 * n, n) += dt_ * u_mid * profile_;

  const double scale = rhs.lpNorm<Eigen::Infinity>();
  Eigen::VectorXd next = solve_once(rhs);
  double residual = (rhs - apply_system(next)).lpNorm<Eigen::Infinity>();
  int iterations = 1;
  while (residual > sc_.solver_tol * scale && iterations < sc_.max_iter) {
    next += solve_once(rhs - apply_system(next));
    residual = (rhs - apply_system(next)).lpNorm<Eigen::Infinity>();
    ++iterations;
  }
  last_iterations_ = iterations;
  last_residual_ = scale > 0.0 ? residual / scale : residual;
  if (!std::isfinite(residual) || residual > sc_.solver_tol * scale) throw SolverDiverged(iterations, last_residual_);

  plant.w[0] = 0.0;
  plant.p[0] = 0.0;
  observer.w_hat[0] = 0.0;
  observer.p_hat[0] = 0.0;
  plant.w.tail(n) = next.segment(0, n);
  plant.p.tail(n) = next.segment(n, n);
  observer.w_hat.tail(n) = next.segment(2 * n, n);
  observer.p_hat.tail(n) = next.segment(3 * n, n);
  plant.t += dt_;
}

std::pair<FieldState, ObserverState> step_midpoint(const FieldState& plant, const ObserverState& observer,
                                                   const InputSignal& u, const StringConfig& cfg,
                                                   const ActuatorWindow& win, const Grid& grid,
                                                   const GainConfig& gain, const StepperConfig& sc) {
  MidpointStepper stepper(cfg, win, grid, gain, sc);
  FieldState next_plant = plant;
  ObserverState next_observer = observer;
  stepper.step(next_plant, next_observer, u);
  return {std::move(next_plant), std::move(next_observer)};
}

}  // namespace vso
