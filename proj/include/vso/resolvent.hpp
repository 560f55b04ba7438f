#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "vso/core.hpp"

namespace vso {

/// Standard (H^1 x L^2) and energy norms of an error state, with the
/// equivalence constants c1 = min(T / (L + 1), 1 / rho) and c2 = max(T, 1 / rho).
struct NormReport {
  double std_norm_sq = 0.0;
  double energy_norm_sq = 0.0;
  double c1_bound = 0.0;
  double c2_bound = 0.0;
};

/// Pair of nodal fields, either a state (w, p) or a generator image (f, h).
struct FieldPair {
  Nodal first;
  Nodal second;
};

double standard_norm_sq(const Nodal& w, const Nodal& p, const Grid& grid);
double energy_norm_sq(const Nodal& w, const Nodal& p, const StringConfig& cfg, const Grid& grid);
NormReport norm_report(const Nodal& w, const Nodal& p, const StringConfig& cfg, const Grid& grid);

/// Energy inner product T <a_z, b_z> + (1 / rho) <a_p, b_p>.
double energy_inner(const FieldPair& a, const FieldPair& b, const StringConfig& cfg, const Grid& grid);

/// Error generator: f = p / rho, h = T D2 w - k b (c . p) / rho. Node 0 of
/// both outputs is the clamped node and is returned as zero.
FieldPair apply_A(const Nodal& w, const Nodal& p, const StringConfig& cfg, const ActuatorWindow& win,
                  const Grid& grid, const GainConfig& gain);

/// Closed-form inverse: p = rho f, and w obtained by integrating h twice
/// against w_z(L) = 0 and w(0) = 0 (cumulative trapezoid on nodes).
FieldPair apply_A_inverse(const Nodal& f, const Nodal& h, const StringConfig& cfg, const ActuatorWindow& win,
                          const Grid& grid, const GainConfig& gain);

/// Dense matrix of apply_A on the unpinned nodes 1..N, ordered (w, p).
Eigen::MatrixXd generator_matrix(const StringConfig& cfg, const ActuatorWindow& win, const Grid& grid,
                                 const GainConfig& gain);

/// LU factorisation of generator_matrix; an independent route to
/// apply_A_inverse. Throws std::runtime_error when the matrix is singular.
class GeneratorSolver {
 public:
  GeneratorSolver(const StringConfig& cfg, const ActuatorWindow& win, const Grid& grid, const GainConfig& gain);

  FieldPair solve(const Nodal& f, const Nodal& h) const;
  double rcond() const { return lu_.rcond(); }

 private:
  Grid grid_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

FieldPair solve_generator(const Nodal& f, const Nodal& h, const StringConfig& cfg, const ActuatorWindow& win,
                          const Grid& grid, const GainConfig& gain);

/// Discrete Sobolev norms. Second differences use the closure of
/// discrete_laplacian (odd reflection at 0, even reflection at L).
double l2_norm(const Nodal& f, const Grid& grid);
double h1_norm(const Nodal& f, const Grid& grid);
double h2_norm(const Nodal& w, const Grid& grid);

/// Seeded smooth random fields. Each sample draws Gaussian coefficients of a
/// short modal series, so a sample is the same function on every grid.
/// States have w(0) = p(0) = 0 and w_z(L) = 0; sources have f(0) = 0 and
/// h built from cosines (h_z(L) = 0).
class FieldSampler {
 public:
  FieldSampler(std::uint64_t seed, int modes = 8);

  FieldPair state(std::uint64_t sample, const Grid& grid) const;
  FieldPair source(std::uint64_t sample, const Grid& grid) const;

 private:
  std::vector<double> coefficients(std::uint64_t sample, int stream) const;

  std::uint64_t seed_;
  int modes_;
};

/// (||w||_H2 + ||p||_H1) / (||f||_H1 + ||h||_L2) for (w, p) = A^{-1}(f, h);
/// empty when the source is zero.
std::optional<double> boundedness_ratio(const Nodal& f, const Nodal& h, const StringConfig& cfg,
                                        const ActuatorWindow& win, const Grid& grid, const GainConfig& gain);

struct BoundednessReport {
  double max_ratio = 0.0;
  int evaluated = 0;
  int skipped = 0;
};

BoundednessReport boundedness_probe(int samples, std::uint64_t seed, const StringConfig& cfg,
                                    const ActuatorWindow& win, const Grid& grid, const GainConfig& gain);

/// Outcome of one named property check of the error generator.
struct PropertyCheck {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
  std::string detail;
};

/// Round trips A A^{-1} and A^{-1} A, agreement of the closed-form inverse
/// with the matrix solve, norm equivalence, dissipativity, and grid
/// stability of the boundedness ratio. Runs on n_cells, 2 n_cells and
/// 4 n_cells; orders are measured against 1.9.
std::vector<PropertyCheck> resolvent_property_checks(const StringConfig& cfg, const ActuatorWindow& win,
                                                     const GainConfig& gain, int n_cells, int samples,
                                                     std::uint64_t seed);

}  // namespace vso
