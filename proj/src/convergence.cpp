#include "vso/convergence.hpp"

#include <algorithm>
#include <cmath>

#include "vso/modal.hpp"
#include "vso/resolvent.hpp"

namespace vso {

std::optional<double> ConvergenceTable::min_order() const {
  std::optional<double> out;
  for (const auto& row : rows) {
    if (row.order) out = out ? std::min(*out, *row.order) : *row.order;
  }
  return out;
}

std::vector<Resolution> halving_resolutions(int n_cells, double dt, int levels) {
  if (levels < 1) throw std::invalid_argument("need at least one resolution level");
  std::vector<Resolution> out;
  for (int i = 0; i < levels; ++i) out.push_back({n_cells << i, dt / static_cast<double>(1 << i)});
  return out;
}

namespace {

double max_deviation(const Scenario& base, const Resolution& res) {
  Scenario sc = base;
  sc.n_cells = res.n_cells;
  sc.stepper.dt = res.dt;
  sc.validate();

  const Grid grid = sc.grid();
  const auto& cfg = sc.string;
  const MidpointStepper stepper(cfg, sc.window, grid, sc.gain, sc.stepper);
  FieldState plant = sc.initial_plant();
  ObserverState observer = ObserverState::copy_of(plant);

  const ModalBasis basis = eigenfrequencies(cfg, kDefaultModeCount);
  const ModalExpansion expansion = project_initial(plant.w, plant.p, cfg, grid, kDefaultModeCount);

  auto deviation = [&] {
    const ModalFields exact = analytic_solution(expansion, basis, grid, plant.t);
    return std::sqrt(energy_norm_sq(plant.w - exact.w, plant.p - cfg.rho * exact.w_t, cfg, grid));
  };

  double worst = deviation();
  const long steps = sc.step_count();
  for (long n = 0; n < steps; ++n) {
    stepper.step(plant, observer, sc.input);
    plant.t = static_cast<double>(n + 1) * stepper.dt();
    worst = std::max(worst, deviation());
  }
  return worst;
}

}  // namespace

ConvergenceTable sweep_convergence(const Scenario& scenario, const std::vector<Resolution>& resolutions) {
  if (!scenario.input.is_zero()) throw OracleUnavailable("the modal oracle needs u == 0");
  if (scenario.gain.k != 0.0 || scenario.gain.has_k1()) throw OracleUnavailable("the modal oracle needs k == 0");

  ConvergenceTable table;
  for (const auto& res : resolutions) {
    ConvergenceRow row;
    row.n_cells = res.n_cells;
    row.dt = res.dt;
    row.error = max_deviation(scenario, res);
    if (!table.rows.empty()) {
      const auto& prev = table.rows.back();
      row.ratio = prev.error / row.error;
      const double refinement = static_cast<double>(res.n_cells) / prev.n_cells;
      row.order = std::log(*row.ratio) / std::log(refinement);
    }
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace vso
