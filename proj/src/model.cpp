#include "vso/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vso/discretization.hpp"

namespace vso {

InputSignal::InputSignal(Shape shape) : shape_(std::move(shape)) {
  if (auto* table = std::get_if<Table>(&shape_)) {
    if (table->times.empty() || table->times.size() != table->values.size()) {
      throw std::invalid_argument("input table needs matching, non-empty times and values");
    }
    if (!std::is_sorted(table->times.begin(), table->times.end()) ||
        std::adjacent_find(table->times.begin(), table->times.end()) != table->times.end()) {
      throw std::invalid_argument("input table times must be strictly increasing");
    }
  }
  if (auto* ramp = std::get_if<RampHold>(&shape_); ramp && !(ramp->t_ramp > 0.0)) {
    throw std::invalid_argument("ramp duration must be > 0");
  }
}

InputSignal InputSignal::step(double amplitude, double t_on) { return InputSignal(Step{amplitude, t_on}); }

InputSignal InputSignal::ramp_hold(double amplitude, double t_ramp, double t_start) {
  return InputSignal(RampHold{amplitude, t_start, t_ramp});
}

InputSignal InputSignal::sinusoid(double amplitude, double frequency, double phase) {
  return InputSignal(Sinusoid{amplitude, frequency, phase});
}

InputSignal InputSignal::table(std::vector<double> times, std::vector<double> values) {
  return InputSignal(Table{std::move(times), std::move(values)});
}

double InputSignal::operator()(double t) const {
  struct Eval {
    double t;
    double operator()(const Zero&) const { return 0.0; }
    double operator()(const Step& s) const { return t >= s.t_on ? s.amplitude : 0.0; }
    double operator()(const RampHold& r) const {
      return r.amplitude * std::clamp((t - r.t_start) / r.t_ramp, 0.0, 1.0);
    }
    double operator()(const Sinusoid& s) const {
      return s.amplitude * std::sin(2.0 * std::numbers::pi * s.frequency * t + s.phase);
    }
    double operator()(const Table& tab) const {
      if (t <= tab.times.front()) return tab.values.front();
      if (t >= tab.times.back()) return tab.values.back();
      auto it = std::upper_bound(tab.times.begin(), tab.times.end(), t);
      auto hi = static_cast<std::size_t>(it - tab.times.begin());
      auto lo = hi - 1;
      double s = (t - tab.times[lo]) / (tab.times[hi] - tab.times[lo]);
      return (1.0 - s) * tab.values[lo] + s * tab.values[hi];
    }
  };
  return std::visit(Eval{t}, shape_);
}

bool InputSignal::is_zero() const {
  struct IsZero {
    bool operator()(const Zero&) const { return true; }
    bool operator()(const Step& s) const { return s.amplitude == 0.0; }
    bool operator()(const RampHold& r) const { return r.amplitude == 0.0; }
    bool operator()(const Sinusoid& s) const { return s.amplitude == 0.0; }
    bool operator()(const Table& tab) const {
      return std::all_of(tab.values.begin(), tab.values.end(), [](double v) { return v == 0.0; });
    }
  };
  return std::visit(IsZero{}, shape_);
}

FieldRate plant_rhs(const FieldState& state, double u, const StringConfig& cfg, const ActuatorWindow& win,
                    const Grid& grid) {
  state.check(grid);
  FieldRate rate{state.p / cfg.rho, cfg.T * discrete_laplacian(state.w, grid) + u * input_profile(win, grid)};
  rate.w_dot[0] = 0.0;
  rate.p_dot[0] = 0.0;
  return rate;
}

double output_ybar(const FieldState& state, const StringConfig& cfg, const ActuatorWindow& win,
                   const Grid& grid) {
  state.check(grid);
  return cell_weights(win, grid).dot(state.p) / cfg.rho;
}

double hamiltonian(const Nodal& w, const Nodal& p, const StringConfig& cfg, const Grid& grid) {
  grid.require_size(w, "w");
  grid.require_size(p, "p");
  const double kinetic = 0.5 / cfg.rho * grid.trapezoid_weights().dot(p.cwiseAbs2());
  const double strain = 0.5 * cfg.T * grid.dz() * cell_gradient(w, grid).squaredNorm();
  return kinetic + strain;
}

double hamiltonian(const FieldState& state, const StringConfig& cfg, const Grid& grid) {
  return hamiltonian(state.w, state.p, cfg, grid);
}

double static_tip_deflection(double u, const StringConfig& cfg, const ActuatorWindow& win) {
  // T w_zz = -g u with w(0) = 0, w_z(L) = 0 gives w(L) = (u / T) * int g(z) z dz.
  return u / cfg.T * 0.5 * (win.lp2 * win.lp2 - win.lp1 * win.lp1);
}

}  // namespace vso
