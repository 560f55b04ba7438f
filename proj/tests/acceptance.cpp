// Acceptance suite. Prints one PASS/FAIL line per criterion. With a numeric
// argument only that criterion runs; the exit code is nonzero if any
// selected criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "vso/vso.hpp"

namespace {

using namespace vso;

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool passed;
  double value;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double time_limit;  // seconds
  std::function<Outcome()> run;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

double max_abs_tail(const Nodal& v) { return v.tail(v.size() - 1).lpNorm<Eigen::Infinity>(); }

Outcome eigenfrequencies_exact() {
  const auto basis = eigenfrequencies({1.0, 1.0, 1.0}, 10);
  double worst = 0.0;
  for (int k = 1; k <= 10; ++k) {
    const double exact = (k - 0.5) * kPi;
    worst = std::max(worst, std::abs(basis.lambda_abs(k) - exact) / exact);
  }
  return {worst <= 1e-14, worst, fmt("max relative error %.3e over k = 1..10 (limit 1e-14)", worst)};
}

Outcome resonance_detected() {
  const StringConfig cfg{1.0, 1.0, 1.0};
  const ActuatorWindow win{0.1, 0.9};
  const auto report = placement_check(win, cfg, 10);
  const auto has3 = [](const std::vector<int>& v) { return std::find(v.begin(), v.end(), 3) != v.end(); };
  const double integral = std::abs(actuator_mode_integral(3, win, eigenfrequencies(cfg, 3)));
  const bool ok = has3(report.length_rule_modes) && has3(report.zero_integral_modes) && integral <= 1e-14;
  return {ok, integral,
          fmt("length rule flags 3: %g, integral rule flags 3: %g, |integral| = %.3e (limit 1e-14)",
              has3(report.length_rule_modes), has3(report.zero_integral_modes), integral)};
}

Scenario lyapunov_scenario() {
  Scenario sc = figure_scenario();
  sc.gain.k = 5.0;
  return sc;
}

Outcome lyapunov_identity() {
  const Scenario sc = lyapunov_scenario();
  long strict_increases = 0;
  const auto summary = simulate(sc, nullptr, [&](const StepDiagnostics& d) {
    if (d.H_err_after > d.H_err_before) ++strict_increases;
  });
  const bool ok = summary.max_identity_error <= 1e-9 && summary.monotonicity_violations == 0;
  return {ok, summary.max_identity_error,
          fmt("max |dH_err - dt*decay| / H_err = %.3e (limit 1e-9); increases beyond solver_tol: %g; "
              "round-off-level increases: %g",
              summary.max_identity_error, static_cast<double>(summary.monotonicity_violations),
              static_cast<double>(strict_increases))};
}

Outcome observer_converges() {
  const Scenario sc = figure_scenario();
  const auto summary = simulate(sc);
  const double ratio = summary.H_err_final / summary.H_err_initial;
  return {ratio < 1e-2, ratio,
          fmt("H_err(10)/H_err(0) = %.6e with k = %g (limit < 1e-2)", ratio, sc.gain.k)};
}

Outcome observer_stagnates() {
  const Scenario sc = resonant_scenario();
  const auto summary = simulate(sc);
  const double ratio = summary.H_err_final / summary.H_err_initial;
  return {ratio >= 1.0 - 1e-6, ratio, fmt("H_err(10)/H_err(0) = %.15f (limit >= 1 - 1e-6)", ratio)};
}

Outcome resolvent_round_trip() {
  const StringConfig cfg{1.0, 1.0, 1.0};
  const ActuatorWindow win{0.25, 0.75};
  GainConfig gain;
  gain.k = 5.0;
  const FieldSampler sampler(1);
  std::vector<double> errors;
  for (int n : {64, 128, 256}) {
    const Grid grid(cfg.L, n);
    double err = 0.0;
    for (std::uint64_t s = 0; s < 100; ++s) {
      const FieldPair src = sampler.source(s, grid);
      const FieldPair inv = apply_A_inverse(src.first, src.second, cfg, win, grid, gain);
      const FieldPair img = apply_A(inv.first, inv.second, cfg, win, grid, gain);
      err = std::max({err, max_abs_tail(img.first - src.first), max_abs_tail(img.second - src.second)});
    }
    errors.push_back(err);
  }
  const double order = std::min(std::log2(errors[0] / errors[1]), std::log2(errors[1] / errors[2]));
  return {order >= 1.9, order,
          fmt("errors %.3e %.3e %.3e", errors[0], errors[1], errors[2]) + fmt(", min order %.4f (limit 1.9)", order)};
}

Outcome norm_equivalence() {
  const StringConfig cfg{1.0, 1.0, 1.0};
  const Grid grid(cfg.L, 64);
  const FieldSampler sampler(7);
  double slack = -1e300;
  long violations = 0;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const FieldPair x = sampler.state(s, grid);
    const NormReport r = norm_report(x.first, x.second, cfg, grid);
    const double rel = std::max(r.c1_bound * r.std_norm_sq - r.energy_norm_sq,
                                r.energy_norm_sq - r.c2_bound * r.std_norm_sq) /
                       r.energy_norm_sq;
    slack = std::max(slack, rel);
    if (rel > 1e-10) ++violations;
  }
  return {violations == 0, slack,
          fmt("max relative bound excess %.3e (limit 1e-10), %g of 1000 states violate", slack,
              static_cast<double>(violations))};
}

Outcome free_string_convergence() {
  const Scenario sc = free_string_scenario();
  const auto table = sweep_convergence(sc, halving_resolutions(sc.n_cells, sc.stepper.dt, 5));
  const double order = table.min_order().value_or(0.0);
  std::string detail = "errors";
  for (const auto& row : table.rows) detail += fmt(" %.3e", row.error);
  return {order >= 1.9, order, detail + fmt(", min order %.4f (limit 1.9)", order)};
}

Outcome energy_conservation() {
  const StringConfig cfg{1.0, 1.0, 1.0};
  const Grid grid(cfg.L, 128);
  StepperConfig sc;
  sc.dt = 1e-3;
  const MidpointStepper stepper(cfg, {0.25, 0.75}, grid, {}, sc);
  const FieldPair x = FieldSampler(3).state(0, grid);
  FieldState plant{x.first, x.second, 0.0};
  ObserverState obs = ObserverState::copy_of(plant);
  const double h0 = hamiltonian(plant, cfg, grid);
  double drift = 0.0;
  for (int n = 0; n < 10000; ++n) {
    stepper.step(plant, obs, InputSignal::zero());
    drift = std::max(drift, std::abs(hamiltonian(plant, cfg, grid) - h0) / h0);
  }
  return {drift <= 1e-10, drift, fmt("max relative drift of H over 1e4 steps %.3e (limit 1e-10)", drift)};
}

Outcome generator_dissipative() {
  const StringConfig cfg{1.0, 1.0, 1.0};
  const ActuatorWindow win{0.25, 0.75};
  GainConfig gain;
  gain.k = 5.0;
  const Grid grid(cfg.L, 64);
  const FieldSampler sampler(11);
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const FieldPair x = sampler.state(s, grid);
    const FieldPair ax = apply_A(x.first, x.second, cfg, win, grid, gain);
    const double mismatch = cell_weights(win, grid).dot(x.second) / cfg.rho;
    worst = std::max(worst, std::abs(energy_inner(x, ax, cfg, grid) + gain.k * mismatch * mismatch));
  }
  return {worst <= 1e-12, worst, fmt("max |<x, Ax>_E + k (c.p/rho)^2| = %.3e (limit 1e-12)", worst)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "eigenfrequency exactness", 1.0, eigenfrequencies_exact},
      {2, "resonance detection", 1.0, resonance_detected},
      {3, "discrete Lyapunov identity", 30.0, lyapunov_identity},
      {4, "observer convergence (non-resonant)", 30.0, observer_converges},
      {5, "observer stagnation (resonant)", 30.0, observer_stagnates},
      {6, "resolvent round trip", 10.0, resolvent_round_trip},
      {7, "norm equivalence", 5.0, norm_equivalence},
      {8, "free-string oracle convergence", 60.0, free_string_convergence},
      {9, "energy conservation", 30.0, energy_conservation},
      {10, "generator dissipativity", 5.0, generator_dissipative},
  };

  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);
  if (argc > 1 && (only < 1 || only > static_cast<int>(criteria.size()))) {
    std::fprintf(stderr, "usage: %s [criterion 1..%zu]\n", argv[0], criteria.size());
    return 2;
  }

  int failures = 0;
  for (const auto& c : criteria) {
    if (only && c.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::nan(""), std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.time_limit;
    const bool ok = out.passed && in_time;
    if (!ok) ++failures;
    std::printf("%s C%02d %s: %s; runtime %.3f s (limit %g s)\n", ok ? "PASS" : "FAIL", c.id, c.name,
                out.detail.c_str(), secs, c.time_limit);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
