#include "vso/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "vso/modal.hpp"

namespace vso {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view text, const std::string& what) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ScenarioError(what + ": expected a number, got '" + std::string(text) + "'");
  }
  return value;
}

int parse_int(std::string_view text, const std::string& what) {
  text = trim(text);
  int value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ScenarioError(what + ": expected an integer, got '" + std::string(text) + "'");
  }
  return value;
}

std::vector<double> parse_list(std::string_view text, const std::string& what) {
  std::vector<double> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    out.push_back(parse_double(text.substr(0, comma), what));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

Nodal InitialShape::sample(const Grid& grid) const {
  struct Sampler {
    const Grid& grid;
    Nodal operator()(const Zero&) const { return Nodal::Zero(grid.n_nodes()); }
    Nodal operator()(const Ramp& r) const {
      const double L = grid.length();
      return grid.sample([&](double z) { return r.tip * z / L; });
    }
    Nodal operator()(const Mode& m) const {
      const double omega = (m.k - 0.5) * std::numbers::pi / grid.length();
      return grid.sample([&](double z) { return m.amplitude * std::sin(omega * z); });
    }
    Nodal operator()(const Table& t) const {
      return grid.sample([&](double z) {
        if (z <= t.z.front()) return t.values.front();
        if (z >= t.z.back()) return t.values.back();
        auto hi = static_cast<std::size_t>(std::upper_bound(t.z.begin(), t.z.end(), z) - t.z.begin());
        auto lo = hi - 1;
        const double s = (z - t.z[lo]) / (t.z[hi] - t.z[lo]);
        return (1.0 - s) * t.values[lo] + s * t.values[hi];
      });
    }
  };
  return std::visit(Sampler{grid}, shape);
}

std::string InitialShape::describe() const {
  struct Describe {
    std::string operator()(const Zero&) const { return "zero"; }
    std::string operator()(const Ramp& r) const {
      std::ostringstream os;
      os << "ramp(" << r.tip << ")";
      return os.str();
    }
    std::string operator()(const Mode& m) const {
      std::ostringstream os;
      os << "mode(" << m.k << ", " << m.amplitude << ")";
      return os.str();
    }
    std::string operator()(const Table& t) const { return "table(" + std::to_string(t.z.size()) + " rows)"; }
  };
  return std::visit(Describe{}, shape);
}

InitialShape InitialShape::parse(std::string_view text, const std::filesystem::path& base_dir) {
  text = trim(text);
  if (text == "zero") return {};
  const auto open = text.find('(');
  if (open == std::string_view::npos || text.back() != ')') {
    throw ScenarioError("unknown initial shape '" + std::string(text) + "'");
  }
  const auto name = trim(text.substr(0, open));
  const auto args = text.substr(open + 1, text.size() - open - 2);
  if (name == "ramp") return {Ramp{parse_double(args, "ramp tip")}};
  if (name == "mode") {
    const auto comma = args.find(',');
    if (comma == std::string_view::npos) throw ScenarioError("mode shape needs mode(k, amplitude)");
    const int k = parse_int(args.substr(0, comma), "mode index");
    if (k < 1) throw ScenarioError("mode index must be >= 1");
    return {Mode{k, parse_double(args.substr(comma + 1), "mode amplitude")}};
  }
  if (name == "table") {
    std::filesystem::path path{std::string(trim(args))};
    if (path.is_relative()) path = base_dir / path;
    Table table;
    std::istringstream in(read_file(path));
    std::string line;
    while (std::getline(in, line)) {
      auto row = trim(line);
      if (row.empty() || row.front() == '#') continue;
      auto values = parse_list(row, path.string());
      if (values.size() != 2) throw ScenarioError(path.string() + ": rows must be 'z,value'");
      table.z.push_back(values[0]);
      table.values.push_back(values[1]);
    }
    if (table.z.empty()) throw ScenarioError(path.string() + ": empty table");
    for (std::size_t i = 1; i < table.z.size(); ++i) {
      if (!(table.z[i] > table.z[i - 1])) throw ScenarioError(path.string() + ": z must be strictly increasing");
    }
    return {std::move(table)};
  }
  throw ScenarioError("unknown initial shape '" + std::string(name) + "'");
}

void Scenario::validate() const {
  validate_config(string, window, gain);
  stepper.validate();
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ScenarioError("horizon must be > 0");
  if (stride < 1) throw ScenarioError("stride must be >= 1");
  const Grid g = grid();
  for (const auto* shape : {&plant_w, &plant_p, &observer_w, &observer_p}) {
    if (shape->sample(g)[0] != 0.0) {
      throw ScenarioError("initial shape " + shape->describe() + " must vanish at the clamped end z = 0");
    }
  }
}

long Scenario::step_count() const {
  return static_cast<long>(std::ceil(horizon / stepper.dt - 1e-9));
}

FieldState Scenario::initial_plant() const {
  const Grid g = grid();
  return {plant_w.sample(g), plant_p.sample(g), 0.0};
}

ObserverState Scenario::initial_observer() const {
  const Grid g = grid();
  return {observer_w.sample(g), observer_p.sample(g)};
}

Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir) {
  static const std::map<std::string, std::set<std::string>> schema = {
      {"string", {"rho", "T", "L"}},
      {"window", {"lp1", "lp2"}},
      {"gain", {"k", "k1"}},
      {"grid", {"n_cells"}},
      {"stepper", {"dt", "horizon", "solver_tol", "max_iter"}},
      {"input", {"kind", "amplitude", "t_on", "t_start", "t_ramp", "frequency", "phase", "times", "values"}},
      {"initial", {"plant_w", "plant_p", "observer_w", "observer_p"}},
      {"output", {"stride", "path"}},
  };
  static const std::map<std::string, std::set<std::string>> input_keys = {
      {"zero", {"kind"}},
      {"step", {"kind", "amplitude", "t_on"}},
      {"ramp_hold", {"kind", "amplitude", "t_start", "t_ramp"}},
      {"sinusoid", {"kind", "amplitude", "frequency", "phase"}},
      {"table", {"kind", "times", "values"}},
  };

  std::map<std::string, std::map<std::string, std::string>> entries;
  std::string section;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    auto line = trim(std::string_view(raw).substr(0, raw.find('#')));
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') throw ScenarioError(where + ": malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!schema.contains(section)) throw ScenarioError(where + ": unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ScenarioError(where + ": expected key = value");
    if (section.empty()) throw ScenarioError(where + ": key outside of any section");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (!schema.at(section).contains(key)) {
      throw ScenarioError(where + ": unknown key '" + key + "' in [" + section + "]");
    }
    if (!entries[section].emplace(key, value).second) {
      throw ScenarioError(where + ": duplicate key '" + key + "' in [" + section + "]");
    }
  }

  auto get = [&](const std::string& sec, const std::string& key) -> const std::string* {
    auto s = entries.find(sec);
    if (s == entries.end()) return nullptr;
    auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  };
  auto number = [&](const std::string& sec, const std::string& key, double fallback) {
    const auto* v = get(sec, key);
    return v ? parse_double(*v, sec + "." + key) : fallback;
  };
  auto required = [&](const std::string& sec, const std::string& key) {
    const auto* v = get(sec, key);
    if (!v) throw ScenarioError("missing required key " + sec + "." + key);
    return parse_double(*v, sec + "." + key);
  };

  Scenario sc;
  sc.string.rho = required("string", "rho");
  sc.string.T = required("string", "T");
  sc.string.L = required("string", "L");
  sc.window.lp1 = required("window", "lp1");
  sc.window.lp2 = required("window", "lp2");
  sc.gain.k = number("gain", "k", 0.0);
  if (const double k1 = number("gain", "k1", 0.0); k1 != 0.0) {
    sc.gain.k1_profile = [k1](double) { return k1; };
  }
  if (const auto* v = get("grid", "n_cells")) sc.n_cells = parse_int(*v, "grid.n_cells");
  sc.stepper.dt = required("stepper", "dt");
  sc.horizon = required("stepper", "horizon");
  sc.stepper.solver_tol = number("stepper", "solver_tol", sc.stepper.solver_tol);
  if (const auto* v = get("stepper", "max_iter")) sc.stepper.max_iter = parse_int(*v, "stepper.max_iter");

  const std::string kind = get("input", "kind") ? *get("input", "kind") : "zero";
  const auto allowed = input_keys.find(kind);
  if (allowed == input_keys.end()) throw ScenarioError("unknown input kind '" + kind + "'");
  if (auto s = entries.find("input"); s != entries.end()) {
    for (const auto& [key, value] : s->second) {
      if (!allowed->second.contains(key)) {
        throw ScenarioError("key input." + key + " does not apply to input kind '" + kind + "'");
      }
    }
  }
  try {
    if (kind == "zero") {
      sc.input = InputSignal::zero();
    } else if (kind == "step") {
      sc.input = InputSignal::step(required("input", "amplitude"), number("input", "t_on", 0.0));
    } else if (kind == "ramp_hold") {
      sc.input = InputSignal::ramp_hold(required("input", "amplitude"), required("input", "t_ramp"),
                                        number("input", "t_start", 0.0));
    } else if (kind == "sinusoid") {
      sc.input = InputSignal::sinusoid(required("input", "amplitude"), required("input", "frequency"),
                                       number("input", "phase", 0.0));
    } else {
      const auto* times = get("input", "times");
      const auto* values = get("input", "values");
      if (!times || !values) throw ScenarioError("table input needs input.times and input.values");
      sc.input = InputSignal::table(parse_list(*times, "input.times"), parse_list(*values, "input.values"));
    }
  } catch (const ScenarioError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(e.what());
  }

  auto shape = [&](const std::string& key) {
    const auto* v = get("initial", key);
    return v ? InitialShape::parse(*v, base_dir) : InitialShape{};
  };
  sc.plant_w = shape("plant_w");
  sc.plant_p = shape("plant_p");
  sc.observer_w = shape("observer_w");
  sc.observer_p = shape("observer_p");

  if (const auto* v = get("output", "stride")) sc.stride = parse_int(*v, "output.stride");
  if (const auto* v = get("output", "path")) sc.output_path = *v;

  sc.validate();
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  return parse_scenario(read_file(path), path.parent_path());
}

Scenario figure_scenario() {
  Scenario sc;
  sc.string = {1.0, 1.0, 1.0};
  sc.window = {0.25, 0.75};
  sc.gain.k = 20.0;
  sc.n_cells = 128;
  sc.stepper.dt = 1e-3;
  sc.horizon = 10.0;
  const double u_final = 0.1 / static_tip_deflection(1.0, sc.string, sc.window);
  sc.input = InputSignal::ramp_hold(u_final, 2.0);
  sc.observer_w = {InitialShape::Ramp{0.1}};
  sc.stride = 100;
  return sc;
}

Scenario resonant_scenario() {
  Scenario sc;
  sc.string = {1.0, 1.0, 1.0};
  sc.window = {0.1, 0.9};
  sc.gain.k = 5.0;
  sc.n_cells = 128;
  sc.stepper.dt = 1e-3;
  sc.horizon = 10.0;
  sc.plant_w = {InitialShape::Mode{3, 0.01}};
  sc.stride = 100;
  return sc;
}

Scenario free_string_scenario(int n_cells, double dt) {
  Scenario sc;
  sc.string = {1.0, 1.0, 1.0};
  sc.window = {0.25, 0.75};
  sc.gain.k = 0.0;
  sc.n_cells = n_cells;
  sc.stepper.dt = dt;
  const ModalBasis basis = eigenfrequencies(sc.string, 1);
  sc.horizon = 2.0 * std::numbers::pi / basis.lambda_abs(1);
  sc.plant_w = {InitialShape::Mode{1, 0.1}};
  sc.stride = 16;
  return sc;
}

void write_csv_row(std::ostream& out, const EnergyReport& r, double w_L, double w_hat_L) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%.16e,%.16e,%.16e,%.16e,%.16e,%.16e,%.16e,%.16e,%.16e\n", r.t, w_L, w_hat_L, r.H,
                r.H_err, r.ybar, r.ybar_hat, r.decay, r.residual);
  out << buf;
}

SimulationSummary simulate(const Scenario& scenario, std::ostream* csv,
                           const std::function<void(const StepDiagnostics&)>& on_step) {
  scenario.validate();
  const auto started = std::chrono::steady_clock::now();
  const Grid grid = scenario.grid();
  const auto& cfg = scenario.string;
  const auto& win = scenario.window;
  const auto& gain = scenario.gain;
  const MidpointStepper stepper(cfg, win, grid, gain, scenario.stepper);
  const Nodal weights = cell_weights(win, grid);
  const int tip = grid.n_cells();

  FieldState plant = scenario.initial_plant();
  ObserverState observer = scenario.initial_observer();

  auto mismatch = [&] { return weights.dot(plant.p - observer.p_hat) / cfg.rho; };
  auto emit = [&](const EnergyReport& report) {
    if (csv) write_csv_row(*csv, report, plant.w[tip], observer.w_hat[tip]);
  };

  if (csv) *csv << kCsvHeader << "\n";
  EnergyReport report = energy_report(plant, observer, cfg, win, grid, gain);
  emit(report);

  SimulationSummary summary;
  summary.H_err_initial = report.H_err;
  const long steps = scenario.step_count();
  for (long n = 1; n <= steps; ++n) {
    StepDiagnostics d;
    d.step = n;
    d.H_err_before = report.H_err;
    d.H_before = report.H;
    const double mismatch_before = mismatch();
    try {
      stepper.step(plant, observer, scenario.input);
    } catch (const SolverDiverged& e) {
      throw SolverDiverged(e.iterations(), e.residual(), n);
    }
    plant.t = static_cast<double>(n) * stepper.dt();
    report = energy_report(plant, observer, cfg, win, grid, gain);
    const double mismatch_mid = 0.5 * (mismatch_before + report.residual);
    d.t = plant.t;
    d.H_err_after = report.H_err;
    d.H_after = report.H;
    d.decay_mid = -gain.k * mismatch_mid * mismatch_mid;

    const double increase = d.H_err_after - d.H_err_before;
    if (increase > scenario.stepper.solver_tol * d.H_err_before) ++summary.monotonicity_violations;
    if (d.H_err_before > 0.0) {
      const double identity = std::abs(increase - stepper.dt() * d.decay_mid) / d.H_err_before;
      summary.max_identity_error = std::max(summary.max_identity_error, identity);
    }
    if (on_step) on_step(d);
    if (n % scenario.stride == 0 || n == steps) emit(report);
  }

  summary.steps = steps;
  summary.H_err_final = report.H_err;
  summary.final_report = report;
  summary.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return summary;
}

std::string format_summary(const SimulationSummary& s) {
  std::ostringstream os;
  os.precision(10);
  os << "steps: " << s.steps << "\n"
     << "H_err(0): " << s.H_err_initial << "\n"
     << "H_err(end): " << s.H_err_final << "\n"
     << "H_err(end)/H_err(0): " << (s.H_err_initial > 0.0 ? s.H_err_final / s.H_err_initial : 0.0) << "\n"
     << "monotonicity violations: " << s.monotonicity_violations << "\n"
     << "max Lyapunov identity error: " << s.max_identity_error << "\n"
     << "wall time (s): " << s.wall_seconds << "\n";
  return os.str();
}

}  // namespace vso
