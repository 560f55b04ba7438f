#include "vso/observer.hpp"

#include "vso/discretization.hpp"

namespace vso {

ObserverState ObserverState::zero(const Grid& grid) {
  return {Nodal::Zero(grid.n_nodes()), Nodal::Zero(grid.n_nodes())};
}

void ObserverState::check(const Grid& grid) const {
  grid.require_size(w_hat, "w_hat");
  grid.require_size(p_hat, "p_hat");
}

namespace {

Nodal sample_k1(const GainConfig& gain, const Grid& grid) {
  if (!gain.has_k1()) return Nodal::Zero(grid.n_nodes());
  return grid.sample(gain.k1_profile);
}

}  // namespace

FieldRate observer_rhs(const ObserverState& obs, double u, double ybar_meas, const StringConfig& cfg,
                       const ActuatorWindow& win, const Grid& grid, const GainConfig& gain) {
  obs.check(grid);
  const Nodal weights = cell_weights(win, grid);
  const Nodal profile = input_profile(win, grid);
  const double innovation = ybar_meas - weights.dot(obs.p_hat) / cfg.rho;

  FieldRate rate;
  rate.w_dot = obs.p_hat / cfg.rho + innovation * sample_k1(gain, grid);
  rate.p_dot = cfg.T * discrete_laplacian(obs.w_hat, grid) + (u + gain.k * innovation) * profile;
  rate.w_dot[0] = 0.0;
  rate.p_dot[0] = 0.0;
  return rate;
}

ErrorState error_state(const FieldState& plant, const ObserverState& obs) {
  if (plant.w.size() != obs.w_hat.size()) throw DimensionMismatch("w_hat", plant.w.size(), obs.w_hat.size());
  if (plant.p.size() != obs.p_hat.size()) throw DimensionMismatch("p_hat", plant.p.size(), obs.p_hat.size());
  return {plant.w - obs.w_hat, plant.p - obs.p_hat};
}

double error_energy(const FieldState& plant, const ObserverState& obs, const StringConfig& cfg, const Grid& grid) {
  ErrorState e = error_state(plant, obs);
  return hamiltonian(e.w, e.p, cfg, grid);
}

double error_energy_rate(const FieldState& plant, const ObserverState& obs, const StringConfig& cfg,
                         const ActuatorWindow& win, const Grid& grid, const GainConfig& gain) {
  if (gain.has_k1()) throw GainShapeUnsupported();
  plant.check(grid);
  obs.check(grid);
  const double mismatch = cell_weights(win, grid).dot(plant.p - obs.p_hat) / cfg.rho;
  return -gain.k * mismatch * mismatch;
}

double error_energy_rate_general(const FieldState& plant, const ObserverState& obs, const StringConfig& cfg,
                                 const ActuatorWindow& win, const Grid& grid, const GainConfig& gain) {
  plant.check(grid);
  obs.check(grid);
  ErrorState e = error_state(plant, obs);
  const double mismatch = cell_weights(win, grid).dot(e.p) / cfg.rho;

  Nodal w_dot = e.p / cfg.rho - mismatch * sample_k1(gain, grid);
  Nodal p_dot = cfg.T * discrete_laplacian(e.w, grid) - gain.k * mismatch * input_profile(win, grid);
  w_dot[0] = 0.0;
  p_dot[0] = 0.0;

  const double strain = cfg.T * grid.dz() * cell_gradient(e.w, grid).dot(cell_gradient(w_dot, grid));
  const double kinetic = grid.trapezoid_weights().cwiseProduct(e.p).dot(p_dot) / cfg.rho;
  return strain + kinetic;
}

EnergyReport energy_report(const FieldState& plant, const ObserverState& obs, const StringConfig& cfg,
                           const ActuatorWindow& win, const Grid& grid, const GainConfig& gain) {
  plant.check(grid);
  obs.check(grid);
  const Nodal weights = cell_weights(win, grid);
  EnergyReport r;
  r.t = plant.t;
  r.H = hamiltonian(plant, cfg, grid);
  r.H_err = error_energy(plant, obs, cfg, grid);
  r.ybar = weights.dot(plant.p) / cfg.rho;
  r.ybar_hat = weights.dot(obs.p_hat) / cfg.rho;
  r.residual = r.ybar - r.ybar_hat;
  r.decay = r.residual == 0.0 ? 0.0 : -gain.k * r.residual * r.residual;
  return r;
}

}  // namespace vso
