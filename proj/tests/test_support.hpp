#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "vso/core.hpp"

namespace vso::testing {

/// Seeded generator for hand-rolled property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double normal() { return std::normal_distribution<double>()(rng_); }

  StringConfig string_config() { return {uniform(0.2, 5.0), uniform(0.2, 5.0), uniform(0.3, 2.0)}; }

  ActuatorWindow window(double L) {
    double a = uniform(0.0, L);
    double b = uniform(0.0, L);
    if (a > b) std::swap(a, b);
    if (b - a < 1e-3 * L) b = std::min(L, a + 0.1 * L);
    return {a, b};
  }

  /// Random nodal field with the clamp applied at node 0.
  Nodal clamped(int n_nodes, double scale = 1.0) {
    Nodal v(n_nodes);
    for (int i = 0; i < n_nodes; ++i) v[i] = scale * normal();
    v[0] = 0.0;
    return v;
  }

 private:
  std::mt19937_64 rng_;
};

/// Composite Simpson rule with `panels` (even) subintervals.
template <typename F>
double simpson(F&& f, double a, double b, int panels = 2000) {
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

/// Piecewise-linear interpolant of nodal data.
inline double interpolate(const Nodal& v, const Grid& grid, double z) {
  const int cell = std::min(grid.n_cells() - 1, static_cast<int>(std::floor(z / grid.dz())));
  const double s = (z - grid.node(cell)) / grid.dz();
  return (1.0 - s) * v[cell] + s * v[cell + 1];
}

}  // namespace vso::testing
