#include "vso/modal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "vso/model.hpp"

namespace vso {

double ModalBasis::omega(int k) const {
  if (k < 1 || k > k_max()) {
    throw IndexOutOfRange("mode index " + std::to_string(k) + " outside 1.." + std::to_string(k_max()));
  }
  return omegas[static_cast<std::size_t>(k - 1)];
}

double boundary_determinant(SpectralCase which, double mu, double L) {
  switch (which) {
    case SpectralCase::Exponential:
      // phi = A e^{mu z} + B e^{-mu z}: rows (1, 1) and (mu e^{mu L}, -mu e^{-mu L}).
      return -mu * std::exp(-mu * L) - mu * std::exp(mu * L);
    case SpectralCase::Linear:
      // phi = A z + B: rows (0, 1) and (1, 0).
      return -1.0;
    case SpectralCase::Oscillatory:
      // phi = A sin(mu z) + B cos(mu z): rows (0, 1) and (mu cos(mu L), -mu sin(mu L)).
      return -mu * std::cos(mu * L);
  }
  return 0.0;
}

ModalBasis eigenfrequencies(const StringConfig& cfg, int k_max) {
  if (k_max < 1) throw InvalidKMax(k_max);
  validate_config(cfg, {0.0, cfg.L}, {});
  ModalBasis basis;
  basis.vartheta = cfg.wave_speed();
  basis.L = cfg.L;
  basis.omegas.reserve(static_cast<std::size_t>(k_max));
  for (int k = 1; k <= k_max; ++k) {
    const double omega = (k - 0.5) * std::numbers::pi / cfg.L;
    // Only the oscillatory ansatz can satisfy both boundary conditions.
    if (std::abs(boundary_determinant(SpectralCase::Oscillatory, omega, cfg.L)) > 1e-9 * omega ||
        boundary_determinant(SpectralCase::Exponential, omega, cfg.L) == 0.0) {
      throw std::logic_error("mode " + std::to_string(k) + " fails the boundary-determinant check");
    }
    basis.omegas.push_back(omega);
  }
  return basis;
}

double eigenfunction(int k, double z, const ModalBasis& basis) {
  const double omega = basis.omega(k);
  const double slack = 1e-12 * basis.L;
  if (z < -slack || z > basis.L + slack) {
    throw IndexOutOfRange("position " + std::to_string(z) + " outside [0, L]");
  }
  return std::sin(omega * z);
}

ModalExpansion project_initial(const Nodal& w0, const Nodal& p0, const StringConfig& cfg, const Grid& grid,
                               int k_max) {
  grid.require_size(w0, "w0");
  grid.require_size(p0, "p0");
  if (w0[0] != 0.0) throw BoundaryViolation("project_initial: w0[0] must be 0");
  const ModalBasis basis = eigenfrequencies(cfg, k_max);
  const Nodal m = grid.trapezoid_weights();
  const Nodal z = grid.nodes();
  const double scale = 2.0 / cfg.L;

  ModalExpansion out;
  out.a.resize(static_cast<std::size_t>(k_max));
  out.b.resize(static_cast<std::size_t>(k_max));
  double captured = 0.0;
  for (int k = 1; k <= k_max; ++k) {
    const double omega = basis.omega(k);
    const Nodal phi = (omega * z).array().sin().matrix();
    const double a = scale * m.cwiseProduct(p0 / cfg.rho).dot(phi);
    const double b = -omega * basis.vartheta * scale * m.cwiseProduct(w0).dot(phi);
    out.a[static_cast<std::size_t>(k - 1)] = a;
    out.b[static_cast<std::size_t>(k - 1)] = b;
    out.coefficient_sum_sq += a * a + b * b;
    captured += 0.25 * cfg.rho * cfg.L * (a * a + b * b);
  }
  const double total = hamiltonian(w0, p0, cfg, grid);
  out.tail_energy_fraction = total > 0.0 ? std::max(0.0, 1.0 - captured / total) : 0.0;
  return out;
}

ModalFields analytic_solution(const ModalExpansion& expansion, const ModalBasis& basis, const Grid& grid,
                              double t) {
  const int k_max = static_cast<int>(expansion.a.size());
  if (k_max > basis.k_max()) throw IndexOutOfRange("expansion has more modes than the basis");
  const Nodal z = grid.nodes();
  ModalFields out{Nodal::Zero(grid.n_nodes()), Nodal::Zero(grid.n_nodes())};
  for (int k = 1; k <= k_max; ++k) {
    const double omega = basis.omega(k);
    const double freq = omega * basis.vartheta;
    const double c = std::cos(freq * t);
    const double s = std::sin(freq * t);
    const double a = expansion.a[static_cast<std::size_t>(k - 1)];
    const double b = expansion.b[static_cast<std::size_t>(k - 1)];
    const Nodal phi = (omega * z).array().sin().matrix();
    out.w_t += (a * c + b * s) * phi;
    out.w += ((a * s - b * c) / freq) * phi;
  }
  return out;
}

double modal_energy(const ModalExpansion& expansion, const ModalBasis& basis, const StringConfig& cfg, double t) {
  double energy = 0.0;
  for (std::size_t i = 0; i < expansion.a.size(); ++i) {
    const int k = static_cast<int>(i) + 1;
    const double omega = basis.omega(k);
    const double freq = omega * basis.vartheta;
    const double c = std::cos(freq * t);
    const double s = std::sin(freq * t);
    const double velocity = expansion.a[i] * c + expansion.b[i] * s;
    const double slope = (expansion.a[i] * s - expansion.b[i] * c) * omega / freq;
    // Both int phi_k^2 and int (phi_k' / omega_k)^2 equal L / 2.
    energy += 0.25 * cfg.L * (cfg.rho * velocity * velocity + cfg.T * slope * slope);
  }
  return energy;
}

double actuator_mode_integral(int k, const ActuatorWindow& win, const ModalBasis& basis) {
  const double omega = basis.omega(k);
  if (win.lp2 == win.lp1) return 0.0;
  return (std::cos(omega * win.lp1) - std::cos(omega * win.lp2)) / omega;
}

PlacementReport placement_check(const ActuatorWindow& win, const StringConfig& cfg, int k_max) {
  const ModalBasis basis = eigenfrequencies(cfg, k_max);
  const double tol_abs = 1e-12 * cfg.L;
  PlacementReport report;
  for (int k = 1; k <= k_max; ++k) {
    if (std::abs(actuator_mode_integral(k, win, basis)) < tol_abs) report.zero_integral_modes.push_back(k);
    const double critical = 4.0 * cfg.L / (2.0 * k - 1.0);
    if (std::abs(win.length() - critical) <= 1e-9 * critical) report.length_rule_modes.push_back(k);
  }
  std::set_difference(report.zero_integral_modes.begin(), report.zero_integral_modes.end(),
                      report.length_rule_modes.begin(), report.length_rule_modes.end(),
                      std::back_inserter(report.only_by_integral));
  std::set_difference(report.length_rule_modes.begin(), report.length_rule_modes.end(),
                      report.zero_integral_modes.begin(), report.zero_integral_modes.end(),
                      std::back_inserter(report.only_by_length_rule));
  for (int k : report.only_by_integral) {
    std::ostringstream os;
    os << "mode " << k << " has a vanishing window integral that the length rule misses";
    const double omega = basis.omega(k);
    const double by_sum = omega * (win.lp1 + win.lp2) / (2.0 * std::numbers::pi);
    const double by_diff = omega * win.length() / (2.0 * std::numbers::pi);
    if (std::abs(by_sum - std::round(by_sum)) < 1e-9) os << " (zero set by lp1 + lp2)";
    else if (std::abs(by_diff - std::round(by_diff)) < 1e-9) os << " (window spans several wavelengths)";
    report.notes.push_back(os.str());
  }
  for (int k : report.only_by_length_rule) {
    report.notes.push_back("mode " + std::to_string(k) + " meets the length rule but its integral is nonzero");
  }
  return report;
}

}  // namespace vso
