#pragma once

#include <stdexcept>

#include "vso/core.hpp"
#include "vso/model.hpp"

namespace vso {

struct ObserverState {
  Nodal w_hat;
  Nodal p_hat;

  static ObserverState zero(const Grid& grid);
  static ObserverState copy_of(const FieldState& plant) { return {plant.w, plant.p}; }
  void check(const Grid& grid) const;
};

/// Observer error (w - w_hat, p - p_hat).
struct ErrorState {
  Nodal w;
  Nodal p;
};

/// Energy bookkeeping at one time instant.
struct EnergyReport {
  double t = 0.0;
  double H = 0.0;         // plant energy
  double H_err = 0.0;     // observer-error energy
  double ybar = 0.0;      // measured output
  double ybar_hat = 0.0;  // observer output
  double decay = 0.0;     // -k (ybar - ybar_hat)^2
  double residual = 0.0;  // window integral of the error velocity
};

class GainShapeUnsupported : public std::invalid_argument {
 public:
  GainShapeUnsupported()
      : std::invalid_argument("the closed-form error-energy rate requires k1 == 0; use error_energy_rate_general") {}
};

/// Observer dynamics: a copy of the plant driven by the same u plus output
/// injection k1 (ybar - ybar_hat) on the w channel and k b (ybar - ybar_hat)
/// on the p channel.
FieldRate observer_rhs(const ObserverState& obs, double u, double ybar_meas, const StringConfig& cfg,
                       const ActuatorWindow& win, const Grid& grid, const GainConfig& gain);

ErrorState error_state(const FieldState& plant, const ObserverState& obs);

double error_energy(const FieldState& plant, const ObserverState& obs, const StringConfig& cfg, const Grid& grid);

/// -k (ybar - ybar_hat)^2. Throws GainShapeUnsupported when k1 is set.
double error_energy_rate(const FieldState& plant, const ObserverState& obs, const StringConfig& cfg,
                         const ActuatorWindow& win, const Grid& grid, const GainConfig& gain);

/// Chain-rule rate of the error energy for any gain shape, including a
/// nonzero k1 whose contribution is sign-indefinite.
double error_energy_rate_general(const FieldState& plant, const ObserverState& obs, const StringConfig& cfg,
                                 const ActuatorWindow& win, const Grid& grid, const GainConfig& gain);

EnergyReport energy_report(const FieldState& plant, const ObserverState& obs, const StringConfig& cfg,
                           const ActuatorWindow& win, const Grid& grid, const GainConfig& gain);

}  // namespace vso
