#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "vso/core.hpp"

namespace vso {

class InvalidKMax : public std::invalid_argument {
 public:
  explicit InvalidKMax(int k_max) : std::invalid_argument("k_max must be >= 1, got " + std::to_string(k_max)) {}
};

class IndexOutOfRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

inline constexpr int kDefaultModeCount = 40;

/// Modes of the clamped/free string: phi_k(z) = sin(omega_k z) with
/// omega_k = (k - 1/2) pi / L, eigenvalues +-i omega_k vartheta.
struct ModalBasis {
  std::vector<double> omegas;  // omega_k for k = 1..k_max, index k-1
  double vartheta = 1.0;
  double L = 1.0;

  int k_max() const { return static_cast<int>(omegas.size()); }
  double omega(int k) const;
  double lambda_abs(int k) const { return omega(k) * vartheta; }
};

ModalBasis eigenfrequencies(const StringConfig& cfg, int k_max);

/// Which ansatz of phi_zz = (lambda / vartheta)^2 phi is being tested.
enum class SpectralCase { Exponential, Linear, Oscillatory };

/// Determinant of the 2x2 system imposing phi(0) = 0 and phi_z(L) = 0 on the
/// two free constants of the ansatz. `mu` is |lambda| / vartheta (unused for
/// the linear case). A nonzero determinant means only phi = 0 fits.
double boundary_determinant(SpectralCase which, double mu, double L);

double eigenfunction(int k, double z, const ModalBasis& basis);

/// Real coefficients of the velocity expansion
///   w_t(z, t) = sum (a_k cos(omega_k vartheta t) + b_k sin(omega_k vartheta t)) phi_k(z).
struct ModalExpansion {
  std::vector<double> a;
  std::vector<double> b;
  double coefficient_sum_sq = 0.0;    // sum of a_k^2 + b_k^2 over the kept modes
  double tail_energy_fraction = 0.0;  // share of the discrete energy not captured by the kept modes
};

ModalExpansion project_initial(const Nodal& w0, const Nodal& p0, const StringConfig& cfg, const Grid& grid,
                               int k_max = kDefaultModeCount);

struct ModalFields {
  Nodal w;
  Nodal w_t;
};

ModalFields analytic_solution(const ModalExpansion& expansion, const ModalBasis& basis, const Grid& grid,
                              double t);

/// Kinetic plus strain energy of the expansion at time t, summed mode by
/// mode from the orthogonality of the phi_k.
double modal_energy(const ModalExpansion& expansion, const ModalBasis& basis, const StringConfig& cfg, double t);

/// Closed-form window integral of phi_k.
double actuator_mode_integral(int k, const ActuatorWindow& win, const ModalBasis& basis);

struct PlacementReport {
  std::vector<int> zero_integral_modes;  // |window integral| below 1e-12 L
  std::vector<int> length_rule_modes;    // lp2 - lp1 == 4L / (2k - 1)
  std::vector<int> only_by_integral;     // in the first list but not the second
  std::vector<int> only_by_length_rule;  // in the second list but not the first
  std::vector<std::string> notes;

  bool observable() const { return zero_integral_modes.empty(); }
};

PlacementReport placement_check(const ActuatorWindow& win, const StringConfig& cfg,
                                int k_max = kDefaultModeCount);

}  // namespace vso
