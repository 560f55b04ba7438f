#include "vso/core.hpp"

#include <sstream>

namespace vso {

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::NonPositiveParameter:
      return "NonPositiveParameter";
    case ViolationKind::WindowOutOfRange:
      return "WindowOutOfRange";
    case ViolationKind::NegativeGain:
      return "NegativeGain";
  }
  return "Unknown";
}

namespace {

std::string describe(const std::vector<ConfigViolation>& violations) {
  std::ostringstream os;
  os << "invalid configuration:";
  for (const auto& v : violations) os << " " << to_string(v.kind) << "(" << v.field << "): " << v.message << ";";
  return os.str();
}

}  // namespace

ConfigError::ConfigError(std::vector<ConfigViolation> violations)
    : std::invalid_argument(describe(violations)), violations_(std::move(violations)) {}

DimensionMismatch::DimensionMismatch(const std::string& what, long expected, long actual)
    : std::invalid_argument(what + ": expected " + std::to_string(expected) + " entries, got " +
                            std::to_string(actual)) {}

std::vector<ConfigViolation> check_config(const StringConfig& cfg, const ActuatorWindow& win,
                                          const GainConfig& gain) {
  std::vector<ConfigViolation> out;
  auto positive = [&](double v, const char* field) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      out.push_back({ViolationKind::NonPositiveParameter, field,
                     std::string(field) + " must be finite and > 0"});
    }
  };
  positive(cfg.rho, "rho");
  positive(cfg.T, "T");
  positive(cfg.L, "L");

  if (!std::isfinite(win.lp1) || win.lp1 < 0.0) {
    out.push_back({ViolationKind::WindowOutOfRange, "lp1", "lp1 must satisfy 0 <= lp1"});
  }
  if (!std::isfinite(win.lp2) || !(win.lp2 <= cfg.L)) {
    out.push_back({ViolationKind::WindowOutOfRange, "lp2", "lp2 must satisfy lp2 <= L"});
  }
  if (!(win.lp1 < win.lp2)) {
    out.push_back({ViolationKind::WindowOutOfRange, "lp1", "lp1 must be < lp2"});
  }
  if (!std::isfinite(gain.k) || gain.k < 0.0) {
    out.push_back({ViolationKind::NegativeGain, "k", "k must be finite and >= 0"});
  }
  return out;
}

ValidatedConfig validate_config(const StringConfig& cfg, const ActuatorWindow& win,
                                const GainConfig& gain) {
  auto violations = check_config(cfg, win, gain);
  if (!violations.empty()) throw ConfigError(std::move(violations));
  return {cfg, win, gain};
}

Grid::Grid(double length, int n_cells) : length_(length), n_cells_(n_cells), dz_(0.0) {
  if (!(length > 0.0) || !std::isfinite(length)) throw std::invalid_argument("grid length must be > 0");
  if (n_cells < 4) throw std::invalid_argument("grid needs n_cells >= 4, got " + std::to_string(n_cells));
  dz_ = length / n_cells;
}

Nodal Grid::nodes() const {
  return sample([](double z) { return z; });
}

Nodal Grid::trapezoid_weights() const {
  Nodal m = Nodal::Constant(n_nodes(), dz_);
  m[0] = 0.5 * dz_;
  m[n_cells_] = 0.5 * dz_;
  return m;
}

double Grid::integrate(const Nodal& f) const {
  require_size(f, "integrand");
  return trapezoid_weights().dot(f);
}

void Grid::require_size(const Nodal& f, const char* name) const {
  if (f.size() != n_nodes()) throw DimensionMismatch(name, n_nodes(), f.size());
}

FieldState FieldState::zero(const Grid& grid, double t) {
  return {Nodal::Zero(grid.n_nodes()), Nodal::Zero(grid.n_nodes()), t};
}

void FieldState::check(const Grid& grid) const {
  grid.require_size(w, "w");
  grid.require_size(p, "p");
}

Nodal cell_weights(const ActuatorWindow& win, const Grid& grid) {
  const double dz = grid.dz();
  Nodal c = Nodal::Zero(grid.n_nodes());
  for (int i = 0; i < grid.n_cells(); ++i) {
    const double z0 = grid.node(i);
    const double a = std::max(z0, win.lp1);
    const double b = std::min(grid.node(i + 1), win.lp2);
    if (!(b > a)) continue;
    const double sa = (a - z0) / dz;
    const double sb = (b - z0) / dz;
    // Integrals of the two hat functions over [a, b] within the cell.
    const double right = 0.5 * dz * (sb * sb - sa * sa);
    c[i] += (b - a) - right;
    c[i + 1] += right;
  }
  return c;
}

Nodal input_profile(const ActuatorWindow& win, const Grid& grid) {
  return cell_weights(win, grid).cwiseQuotient(grid.trapezoid_weights());
}

double window_integral(const ActuatorWindow& win, const Grid& grid, const Nodal& f) {
  grid.require_size(f, "integrand");
  return cell_weights(win, grid).dot(f);
}

}  // namespace vso
