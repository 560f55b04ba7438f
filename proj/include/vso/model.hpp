#pragma once

#include <variant>
#include <vector>

#include "vso/core.hpp"

namespace vso {

/// Scalar input u(t) scaling the distributed force g(z) u(t).
class InputSignal {
 public:
  struct Zero {};
  struct Step {
    double amplitude;
    double t_on;
  };
  struct RampHold {
    double amplitude;
    double t_start;
    double t_ramp;
  };
  struct Sinusoid {
    double amplitude;
    double frequency;  // Hz
    double phase;      // rad
  };
  /// Linear interpolation between samples, held constant outside.
  struct Table {
    std::vector<double> times;
    std::vector<double> values;
  };
  using Shape = std::variant<Zero, Step, RampHold, Sinusoid, Table>;

  InputSignal() = default;
  explicit InputSignal(Shape shape);

  static InputSignal zero() { return InputSignal(Zero{}); }
  static InputSignal step(double amplitude, double t_on = 0.0);
  static InputSignal ramp_hold(double amplitude, double t_ramp, double t_start = 0.0);
  static InputSignal sinusoid(double amplitude, double frequency, double phase = 0.0);
  static InputSignal table(std::vector<double> times, std::vector<double> values);

  double operator()(double t) const;
  bool is_zero() const;
  const Shape& shape() const { return shape_; }

 private:
  Shape shape_ = Zero{};
};

/// Time derivative of a (w, p) pair.
struct FieldRate {
  Nodal w_dot;
  Nodal p_dot;
};

/// w_dot = p / rho, p_dot = T * D2 w + b * u. Node 0 is clamped: both its
/// deflection and its momentum stay at zero.
FieldRate plant_rhs(const FieldState& state, double u, const StringConfig& cfg, const ActuatorWindow& win,
                    const Grid& grid);

/// Integrated output: window integral of p / rho.
double output_ybar(const FieldState& state, const StringConfig& cfg, const ActuatorWindow& win,
                   const Grid& grid);

/// Discrete energy: trapezoid kinetic term plus cell-difference strain term.
double hamiltonian(const Nodal& w, const Nodal& p, const StringConfig& cfg, const Grid& grid);
double hamiltonian(const FieldState& state, const StringConfig& cfg, const Grid& grid);

/// Static tip deflection produced by a constant input u.
double static_tip_deflection(double u, const StringConfig& cfg, const ActuatorWindow& win);

}  // namespace vso
