#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace vso {

/// Nodal field on a Grid: entry i holds the value at z_i = i * dz.
using Nodal = Eigen::VectorXd;

/// Physical parameters of the string.
///
/// `T` is the stiffness coefficient multiplying w_zz. It is sometimes called
/// Young's modulus for this model, but it plays the role of a tension.
struct StringConfig {
  double rho = 1.0;  // mass density per unit length (kg/m)
  double T = 1.0;    // stiffness / tension (N)
  double L = 1.0;    // length (m)

  double wave_speed() const { return std::sqrt(T / rho); }
};

/// Actuator placement [lp1, lp2] and its indicator profile g(z).
struct ActuatorWindow {
  double lp1 = 0.0;
  double lp2 = 0.0;

  double length() const { return lp2 - lp1; }

  /// g(z), closed at both edges.
  double indicator(double z) const { return (z >= lp1 && z <= lp2) ? 1.0 : 0.0; }

  /// Exact value of the integral of g over [z, +inf).
  double length_beyond(double z) const {
    double lo = std::max(z, lp1);
    return std::max(0.0, lp2 - lo);
  }
};

/// Output-injection gains. The w-channel profile k1 is empty (identically
/// zero) by default; the p-channel injection is k * g(z).
struct GainConfig {
  double k = 0.0;
  std::function<double(double)> k1_profile;

  bool has_k1() const { return static_cast<bool>(k1_profile); }
};

enum class ViolationKind { NonPositiveParameter, WindowOutOfRange, NegativeGain };

std::string to_string(ViolationKind kind);

struct ConfigViolation {
  ViolationKind kind;
  std::string field;
  std::string message;
};

/// Thrown by validate_config; carries every violated invariant.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(std::vector<ConfigViolation> violations);

  const std::vector<ConfigViolation>& violations() const { return violations_; }

 private:
  std::vector<ConfigViolation> violations_;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  DimensionMismatch(const std::string& what, long expected, long actual);
};

/// A nodal field violates the clamped-end condition w[0] = 0.
class BoundaryViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ValidatedConfig {
  StringConfig string;
  ActuatorWindow window;
  GainConfig gain;
};

/// Collects all violations without throwing.
std::vector<ConfigViolation> check_config(const StringConfig& cfg, const ActuatorWindow& win,
                                          const GainConfig& gain);

/// Returns the configuration unchanged iff every invariant holds, otherwise
/// throws ConfigError listing all of them.
ValidatedConfig validate_config(const StringConfig& cfg, const ActuatorWindow& win,
                                const GainConfig& gain);

/// Uniform grid on [0, L] with n_cells >= 4.
class Grid {
 public:
  Grid(double length, int n_cells);

  int n_cells() const { return n_cells_; }
  int n_nodes() const { return n_cells_ + 1; }
  double dz() const { return dz_; }
  double length() const { return length_; }

  double node(int i) const { return i == n_cells_ ? length_ : i * dz_; }
  Nodal nodes() const;

  /// Trapezoid weights: dz in the interior, dz/2 at both ends.
  Nodal trapezoid_weights() const;

  double integrate(const Nodal& f) const;

  template <typename F>
  Nodal sample(F&& f) const {
    Nodal out(n_nodes());
    for (int i = 0; i < n_nodes(); ++i) out[i] = f(node(i));
    return out;
  }

  void require_size(const Nodal& f, const char* name) const;

 private:
  double length_;
  int n_cells_;
  double dz_;
};

/// Plant state at one instant. p is the momentum density rho * w_t.
struct FieldState {
  Nodal w;
  Nodal p;
  double t = 0.0;

  static FieldState zero(const Grid& grid, double t = 0.0);
  void check(const Grid& grid) const;
};

/// Per-node weights c_i such that sum_i c_i f_i is the exact integral over
/// the window of the piecewise-linear interpolant of f. Window edges may fall
/// inside cells; those cells get fractional trapezoid weights. The weights
/// sum to lp2 - lp1.
Nodal cell_weights(const ActuatorWindow& win, const Grid& grid);

/// Nodal input profile b_i = c_i / M_i with M the trapezoid weights. Equals
/// g(z_i) away from the window edges. Pairs with cell_weights so that the
/// discrete input and output are power conjugate: <b u, e>_M = u * (c . e).
Nodal input_profile(const ActuatorWindow& win, const Grid& grid);

/// Integral over the window of f, given nodal samples.
double window_integral(const ActuatorWindow& win, const Grid& grid, const Nodal& f);

}  // namespace vso
