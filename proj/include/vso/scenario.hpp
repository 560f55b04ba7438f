#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vso/core.hpp"
#include "vso/discretization.hpp"
#include "vso/model.hpp"
#include "vso/observer.hpp"

namespace vso {

class ScenarioError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Named initial profile for one nodal field.
struct InitialShape {
  struct Zero {};
  struct Ramp {
    double tip;  // value at z = L, linear from 0 at z = 0
  };
  struct Mode {
    int k;
    double amplitude;  // amplitude * sin(omega_k z)
  };
  struct Table {
    std::vector<double> z;
    std::vector<double> values;
  };
  std::variant<Zero, Ramp, Mode, Table> shape = Zero{};

  Nodal sample(const Grid& grid) const;
  std::string describe() const;

  /// Parses "zero", "ramp(0.1)", "mode(3, 0.01)" or "table(path)"; table
  /// files hold "z,value" rows and are resolved against base_dir.
  static InitialShape parse(std::string_view text, const std::filesystem::path& base_dir = {});
};

struct Scenario {
  StringConfig string;
  ActuatorWindow window{0.25, 0.75};
  GainConfig gain;
  int n_cells = 128;
  StepperConfig stepper;
  double horizon = 10.0;
  InputSignal input;
  InitialShape plant_w;
  InitialShape plant_p;
  InitialShape observer_w;
  InitialShape observer_p;
  int stride = 1;
  std::string output_path;

  /// Throws ConfigError or ScenarioError.
  void validate() const;
  Grid grid() const { return Grid(string.L, n_cells); }
  long step_count() const;
  FieldState initial_plant() const;
  ObserverState initial_observer() const;
};

/// Parses the plain-text scenario format: `[section]` headers followed by
/// `key = value` lines, `#` comments. Unknown sections or keys are errors.
Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& path);

/// Plant at rest, observer started on a ramp with tip 0.1, open-loop
/// ramp-and-hold input that moves the static tip deflection to 0.1.
Scenario figure_scenario();

/// Error purely in mode 3 with the window [0.1, 0.9], whose window integral
/// of that mode vanishes.
Scenario resonant_scenario();

/// Free string (k = 0, u = 0) started in mode 1, horizon one period.
Scenario free_string_scenario(int n_cells = 32, double dt = 1.0 / 64.0);

struct StepDiagnostics {
  long step = 0;
  double t = 0.0;          // time at the end of the step
  double H_err_before = 0.0;
  double H_err_after = 0.0;
  double decay_mid = 0.0;  // -k (ybar - ybar_hat)^2 at the midpoint state
  double H_before = 0.0;
  double H_after = 0.0;
};

struct SimulationSummary {
  long steps = 0;
  double H_err_initial = 0.0;
  double H_err_final = 0.0;
  long monotonicity_violations = 0;
  double max_identity_error = 0.0;  // max |dH_err - dt * decay_mid| / H_err_before
  double wall_seconds = 0.0;
  EnergyReport final_report;
};

inline constexpr const char* kCsvHeader = "t,w_L,w_hat_L,H,H_err,ybar,ybar_hat,decay,residual";

void write_csv_row(std::ostream& out, const EnergyReport& report, double w_L, double w_hat_L);

/// Steps the coupled plant/observer system over the scenario horizon. Writes
/// CSV rows to `csv` (if given) every `stride` steps, plus the final step.
/// SolverDiverged is rethrown with the failing step index.
SimulationSummary simulate(const Scenario& scenario, std::ostream* csv = nullptr,
                           const std::function<void(const StepDiagnostics&)>& on_step = {});

std::string format_summary(const SimulationSummary& summary);

}  // namespace vso
