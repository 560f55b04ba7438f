#include "vso/resolvent.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <numbers>
#include <random>
#include <stdexcept>

#include <Eigen/LU>

#include "vso/discretization.hpp"

namespace vso {

double standard_norm_sq(const Nodal& w, const Nodal& p, const Grid& grid) {
  grid.require_size(w, "w");
  grid.require_size(p, "p");
  const Nodal m = grid.trapezoid_weights();
  return m.dot(w.cwiseAbs2()) + grid.dz() * cell_gradient(w, grid).squaredNorm() + m.dot(p.cwiseAbs2());
}

double energy_norm_sq(const Nodal& w, const Nodal& p, const StringConfig& cfg, const Grid& grid) {
  grid.require_size(w, "w");
  grid.require_size(p, "p");
  return cfg.T * grid.dz() * cell_gradient(w, grid).squaredNorm() +
         grid.trapezoid_weights().dot(p.cwiseAbs2()) / cfg.rho;
}

NormReport norm_report(const Nodal& w, const Nodal& p, const StringConfig& cfg, const Grid& grid) {
  NormReport r;
  r.std_norm_sq = standard_norm_sq(w, p, grid);
  r.energy_norm_sq = energy_norm_sq(w, p, cfg, grid);
  r.c1_bound = std::min(cfg.T / (cfg.L + 1.0), 1.0 / cfg.rho);
  r.c2_bound = std::max(cfg.T, 1.0 / cfg.rho);
  return r;
}

double energy_inner(const FieldPair& a, const FieldPair& b, const StringConfig& cfg, const Grid& grid) {
  grid.require_size(a.first, "a.w");
  grid.require_size(a.second, "a.p");
  grid.require_size(b.first, "b.w");
  grid.require_size(b.second, "b.p");
  return cfg.T * grid.dz() * cell_gradient(a.first, grid).dot(cell_gradient(b.first, grid)) +
         grid.trapezoid_weights().cwiseProduct(a.second).dot(b.second) / cfg.rho;
}

FieldPair apply_A(const Nodal& w, const Nodal& p, const StringConfig& cfg, const ActuatorWindow& win,
                  const Grid& grid, const GainConfig& gain) {
  grid.require_size(w, "w");
  grid.require_size(p, "p");
  const double mismatch = cell_weights(win, grid).dot(p) / cfg.rho;
  FieldPair out{p / cfg.rho, cfg.T * discrete_laplacian(w, grid) - gain.k * mismatch * input_profile(win, grid)};
  out.first[0] = 0.0;
  out.second[0] = 0.0;
  return out;
}

FieldPair apply_A_inverse(const Nodal& f, const Nodal& h, const StringConfig& cfg, const ActuatorWindow& win,
                          const Grid& grid, const GainConfig& gain) {
  grid.require_size(f, "f");
  grid.require_size(h, "h");
  const int n = grid.n_cells();
  const double dz = grid.dz();
  const double injected = gain.k * cell_weights(win, grid).dot(f);

  // w_z(z) = -(1/T) [ int_z^L h + k (int_z^L g) (c . f) ], so that w_z(L) = 0.
  Nodal slope(grid.n_nodes());
  double tail = 0.0;
  slope[n] = -(injected * win.length_beyond(grid.node(n))) / cfg.T;
  for (int i = n - 1; i >= 0; --i) {
    tail += 0.5 * dz * (h[i] + h[i + 1]);
    slope[i] = -(tail + injected * win.length_beyond(grid.node(i))) / cfg.T;
  }

  FieldPair out{Nodal::Zero(grid.n_nodes()), cfg.rho * f};
  for (int i = 1; i <= n; ++i) out.first[i] = out.first[i - 1] + 0.5 * dz * (slope[i - 1] + slope[i]);
  return out;
}

Eigen::MatrixXd generator_matrix(const StringConfig& cfg, const ActuatorWindow& win, const Grid& grid,
                                 const GainConfig& gain) {
  const int n = grid.n_cells();
  const double inv_dz2 = 1.0 / (grid.dz() * grid.dz());
  const Eigen::VectorXd profile = input_profile(win, grid).tail(n);
  const Eigen::VectorXd weights = cell_weights(win, grid).tail(n);

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  a.topRightCorner(n, n).diagonal().setConstant(1.0 / cfg.rho);
  for (int r = 0; r < n; ++r) {
    const int row = n + r;
    if (r + 1 < n) {
      a(row, r) = -2.0 * cfg.T * inv_dz2;
      a(row, r + 1) = cfg.T * inv_dz2;
      if (r > 0) a(row, r - 1) = cfg.T * inv_dz2;
    } else {
      a(row, r) = -2.0 * cfg.T * inv_dz2;
      a(row, r - 1) = 2.0 * cfg.T * inv_dz2;
    }
  }
  a.bottomRightCorner(n, n) -= gain.k / cfg.rho * profile * weights.transpose();
  return a;
}

GeneratorSolver::GeneratorSolver(const StringConfig& cfg, const ActuatorWindow& win, const Grid& grid,
                                 const GainConfig& gain)
    : grid_(grid), lu_(generator_matrix(cfg, win, grid, gain)) {
  if (!(lu_.rcond() > 1e-14)) throw std::runtime_error("generator matrix is singular");
}

FieldPair GeneratorSolver::solve(const Nodal& f, const Nodal& h) const {
  grid_.require_size(f, "f");
  grid_.require_size(h, "h");
  const int n = grid_.n_cells();
  Eigen::VectorXd rhs(2 * n);
  rhs << f.tail(n), h.tail(n);
  const Eigen::VectorXd x = lu_.solve(rhs);
  FieldPair out{Nodal::Zero(grid_.n_nodes()), Nodal::Zero(grid_.n_nodes())};
  out.first.tail(n) = x.head(n);
  out.second.tail(n) = x.tail(n);
  return out;
}

FieldPair solve_generator(const Nodal& f, const Nodal& h, const StringConfig& cfg, const ActuatorWindow& win,
                          const Grid& grid, const GainConfig& gain) {
  return GeneratorSolver(cfg, win, grid, gain).solve(f, h);
}

double l2_norm(const Nodal& f, const Grid& grid) {
  grid.require_size(f, "f");
  return std::sqrt(grid.trapezoid_weights().dot(f.cwiseAbs2()));
}

double h1_norm(const Nodal& f, const Grid& grid) {
  const double l2 = l2_norm(f, grid);
  return std::sqrt(l2 * l2 + grid.dz() * cell_gradient(f, grid).squaredNorm());
}

double h2_norm(const Nodal& w, const Grid& grid) {
  const double h1 = h1_norm(w, grid);
  const double second = l2_norm(discrete_laplacian(w, grid), grid);
  return std::sqrt(h1 * h1 + second * second);
}

FieldSampler::FieldSampler(std::uint64_t seed, int modes) : seed_(seed), modes_(modes) {
  if (modes < 1) throw std::invalid_argument("FieldSampler needs at least one mode");
}

std::vector<double> FieldSampler::coefficients(std::uint64_t sample, int stream) const {
  std::seed_seq seq{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
                    static_cast<std::uint32_t>(sample), static_cast<std::uint32_t>(sample >> 32),
                    static_cast<std::uint32_t>(stream)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal;
  // Leading entry is a log-amplitude so that the two components of a pair
  // come in widely different relative sizes.
  std::vector<double> c(static_cast<std::size_t>(modes_) + 1);
  c[0] = std::exp(1.5 * normal(rng));
  for (std::size_t j = 1; j < c.size(); ++j) c[j] = normal(rng) * c[0] / static_cast<double>(j * j);
  return c;
}

namespace {

Nodal sine_series(const std::vector<double>& c, const Grid& grid) {
  const double L = grid.length();
  return grid.sample([&](double z) {
    double v = 0.0;
    for (std::size_t j = 1; j < c.size(); ++j) v += c[j] * std::sin((j - 0.5) * std::numbers::pi * z / L);
    return v;
  });
}

Nodal cosine_series(const std::vector<double>& c, const Grid& grid) {
  const double L = grid.length();
  return grid.sample([&](double z) {
    double v = 0.0;
    for (std::size_t j = 1; j < c.size(); ++j) v += c[j] * std::cos((j - 1.0) * std::numbers::pi * z / L);
    return v;
  });
}

}  // namespace

FieldPair FieldSampler::state(std::uint64_t sample, const Grid& grid) const {
  FieldPair s{sine_series(coefficients(sample, 0), grid), sine_series(coefficients(sample, 1), grid)};
  s.first[0] = 0.0;
  s.second[0] = 0.0;
  return s;
}

FieldPair FieldSampler::source(std::uint64_t sample, const Grid& grid) const {
  FieldPair s{sine_series(coefficients(sample, 2), grid), cosine_series(coefficients(sample, 3), grid)};
  s.first[0] = 0.0;
  return s;
}

std::optional<double> boundedness_ratio(const Nodal& f, const Nodal& h, const StringConfig& cfg,
                                        const ActuatorWindow& win, const Grid& grid, const GainConfig& gain) {
  const double denominator = h1_norm(f, grid) + l2_norm(h, grid);
  if (!(denominator > 0.0)) return std::nullopt;
  const FieldPair x = apply_A_inverse(f, h, cfg, win, grid, gain);
  return (h2_norm(x.first, grid) + h1_norm(x.second, grid)) / denominator;
}

BoundednessReport boundedness_probe(int samples, std::uint64_t seed, const StringConfig& cfg,
                                    const ActuatorWindow& win, const Grid& grid, const GainConfig& gain) {
  if (samples < 1) throw std::invalid_argument("boundedness_probe needs samples >= 1");
  const FieldSampler sampler(seed);
  BoundednessReport report;
  for (int s = 0; s < samples; ++s) {
    const FieldPair src = sampler.source(static_cast<std::uint64_t>(s), grid);
    const auto ratio = boundedness_ratio(src.first, src.second, cfg, win, grid, gain);
    if (!ratio) {
      ++report.skipped;
      continue;
    }
    ++report.evaluated;
    report.max_ratio = std::max(report.max_ratio, *ratio);
  }
  return report;
}

}  // namespace vso

namespace vso {

namespace {

double max_abs_tail(const Nodal& v) { return v.tail(v.size() - 1).lpNorm<Eigen::Infinity>(); }

std::string order_detail(const std::vector<double>& errors) {
  std::ostringstream os;
  os.precision(4);
  os << "errors";
  for (double e : errors) os << " " << e;
  return os.str();
}

double min_order(const std::vector<double>& errors) {
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < errors.size(); ++i) worst = std::min(worst, std::log2(errors[i - 1] / errors[i]));
  return worst;
}

}  // namespace

std::vector<PropertyCheck> resolvent_property_checks(const StringConfig& cfg, const ActuatorWindow& win,
                                                     const GainConfig& gain, int n_cells, int samples,
                                                     std::uint64_t seed) {
  validate_config(cfg, win, gain);
  if (samples < 1) throw std::invalid_argument("resolvent checks need samples >= 1");
  const FieldSampler sampler(seed);
  const std::vector<int> levels{n_cells, 2 * n_cells, 4 * n_cells};

  std::vector<double> forward, backward, cross, bounded;
  long norm_violations = 0;
  double norm_slack = 0.0;
  double dissipation_error = 0.0;
  for (int n : levels) {
    const Grid grid(cfg.L, n);
    const GeneratorSolver direct_solver(cfg, win, grid, gain);
    double fwd = 0.0, bwd = 0.0, crs = 0.0;
    for (int s = 0; s < samples; ++s) {
      const auto id = static_cast<std::uint64_t>(s);
      const FieldPair src = sampler.source(id, grid);
      const FieldPair inv = apply_A_inverse(src.first, src.second, cfg, win, grid, gain);
      const FieldPair img = apply_A(inv.first, inv.second, cfg, win, grid, gain);
      fwd = std::max({fwd, max_abs_tail(img.first - src.first), max_abs_tail(img.second - src.second)});

      const FieldPair direct = direct_solver.solve(src.first, src.second);
      crs = std::max({crs, max_abs_tail(direct.first - inv.first), max_abs_tail(direct.second - inv.second)});

      const FieldPair state = sampler.state(id, grid);
      const FieldPair a_state = apply_A(state.first, state.second, cfg, win, grid, gain);
      const FieldPair back = apply_A_inverse(a_state.first, a_state.second, cfg, win, grid, gain);
      bwd = std::max({bwd, max_abs_tail(back.first - state.first), max_abs_tail(back.second - state.second)});

      if (n == n_cells) {
        const NormReport r = norm_report(state.first, state.second, cfg, grid);
        const double lower = r.c1_bound * r.std_norm_sq - r.energy_norm_sq;
        const double upper = r.energy_norm_sq - r.c2_bound * r.std_norm_sq;
        const double slack = std::max(lower, upper) / r.energy_norm_sq;
        norm_slack = std::max(norm_slack, slack);
        if (slack > 1e-10) ++norm_violations;

        const double mismatch = cell_weights(win, grid).dot(state.second) / cfg.rho;
        const double inner = energy_inner(state, a_state, cfg, grid);
        dissipation_error = std::max(dissipation_error, std::abs(inner + gain.k * mismatch * mismatch));
      }
    }
    forward.push_back(fwd);
    backward.push_back(bwd);
    cross.push_back(crs);
    bounded.push_back(boundedness_probe(samples, seed, cfg, win, grid, gain).max_ratio);
  }

  std::vector<PropertyCheck> out;
  auto order_check = [&](std::string name, const std::vector<double>& errors) {
    const double order = min_order(errors);
    out.push_back({std::move(name), order, 1.9, order >= 1.9, order_detail(errors)});
  };
  order_check("A(A^-1(f,h)) round-trip order", forward);
  order_check("A^-1(A(x)) round-trip order", backward);
  order_check("closed-form vs matrix inverse order", cross);
  {
    std::ostringstream os;
    os << norm_violations << " of " << samples << " states violate c1/c2 bounds";
    out.push_back({"norm equivalence relative slack", norm_slack, 1e-10, norm_violations == 0, os.str()});
  }
  out.push_back({"dissipativity identity error", dissipation_error, 1e-12, dissipation_error <= 1e-12,
                 "|<x, A x>_E + k (c . p / rho)^2|"});
  {
    double spread = 0.0;
    for (std::size_t i = 1; i < bounded.size(); ++i) {
      spread = std::max(spread, std::abs(bounded[i] / bounded[i - 1] - 1.0));
    }
    std::ostringstream os;
    os.precision(6);
    os << "max ratios";
    for (double b : bounded) os << " " << b;
    out.push_back({"boundedness ratio grid spread", spread, 0.05, std::isfinite(spread) && spread <= 0.05, os.str()});
  }
  return out;
}

}  // namespace vso
