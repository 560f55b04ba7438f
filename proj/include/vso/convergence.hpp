#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "vso/scenario.hpp"

namespace vso {

class OracleUnavailable : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Resolution {
  int n_cells;
  double dt;
};

struct ConvergenceRow {
  int n_cells = 0;
  double dt = 0.0;
  double error = 0.0;                 // max over the horizon of the energy-norm deviation
  std::optional<double> ratio;        // previous error / this error
  std::optional<double> order;        // log(ratio) / log(previous dz / this dz)
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;

  /// Smallest observed order, if there are at least two rows.
  std::optional<double> min_order() const;
};

/// Compares the free-string plant trajectory with the modal analytic
/// solution at each resolution. Needs u == 0 and no injection.
ConvergenceTable sweep_convergence(const Scenario& scenario, const std::vector<Resolution>& resolutions);

/// Resolutions (n0 * 2^i, dt0 / 2^i) for i = 0..levels-1.
std::vector<Resolution> halving_resolutions(int n_cells, double dt, int levels);

}  // namespace vso
