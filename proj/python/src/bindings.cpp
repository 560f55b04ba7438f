#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "vso/vso.hpp"

namespace py = pybind11;
using namespace vso;

namespace {

py::tuple pair_of(const FieldPair& p) { return py::make_tuple(p.first, p.second); }

SimulationSummary run_simulation(const Scenario& sc, const std::optional<std::string>& csv_path) {
  if (!csv_path) {
    py::gil_scoped_release release;
    return simulate(sc);
  }
  std::ofstream csv(*csv_path);
  if (!csv) throw IoError("cannot write " + *csv_path);
  py::gil_scoped_release release;
  return simulate(sc, &csv);
}

}  // namespace

PYBIND11_MODULE(_vso, m) {
  m.doc() = "Clamped-free string with a window actuator and an output-injection observer";

  auto base_value_error = py::handle(PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", base_value_error);
  py::register_exception<ScenarioError>(m, "ScenarioError", base_value_error);
  py::register_exception<OracleUnavailable>(m, "OracleUnavailable", base_value_error);
  py::register_exception<SolverDiverged>(m, "SolverDiverged", PyExc_RuntimeError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<StringConfig>(m, "StringConfig")
      .def(py::init([](double rho, double T, double L) { return StringConfig{rho, T, L}; }), py::arg("rho") = 1.0,
           py::arg("T") = 1.0, py::arg("L") = 1.0)
      .def_readwrite("rho", &StringConfig::rho)
      .def_readwrite("T", &StringConfig::T)
      .def_readwrite("L", &StringConfig::L)
      .def_property_readonly("wave_speed", &StringConfig::wave_speed)
      .def("__repr__", [](const StringConfig& c) {
        std::ostringstream os;
        os << "StringConfig(rho=" << c.rho << ", T=" << c.T << ", L=" << c.L << ")";
        return os.str();
      });

  py::class_<ActuatorWindow>(m, "ActuatorWindow")
      .def(py::init([](double lp1, double lp2) { return ActuatorWindow{lp1, lp2}; }), py::arg("lp1"),
           py::arg("lp2"))
      .def_readwrite("lp1", &ActuatorWindow::lp1)
      .def_readwrite("lp2", &ActuatorWindow::lp2)
      .def_property_readonly("length", &ActuatorWindow::length)
      .def("indicator", &ActuatorWindow::indicator, py::arg("z"));

  py::class_<GainConfig>(m, "GainConfig")
      .def(py::init([](double k, std::function<double(double)> k1) {
             GainConfig g;
             g.k = k;
             g.k1_profile = std::move(k1);
             return g;
           }),
           py::arg("k") = 0.0, py::arg("k1_profile") = nullptr)
      .def_readwrite("k", &GainConfig::k)
      .def_readwrite("k1_profile", &GainConfig::k1_profile)
      .def_property_readonly("has_k1", &GainConfig::has_k1);

  m.def("validate_config",
        [](const StringConfig& c, const ActuatorWindow& w, const GainConfig& g) { validate_config(c, w, g); },
        "Raises ConfigError listing every violated invariant.", py::arg("cfg"), py::arg("win"),
        py::arg("gain") = GainConfig{});

  py::class_<Grid>(m, "Grid")
      .def(py::init<double, int>(), py::arg("length"), py::arg("n_cells"))
      .def_property_readonly("n_cells", &Grid::n_cells)
      .def_property_readonly("n_nodes", &Grid::n_nodes)
      .def_property_readonly("dz", &Grid::dz)
      .def_property_readonly("length", &Grid::length)
      .def("nodes", &Grid::nodes)
      .def("trapezoid_weights", &Grid::trapezoid_weights)
      .def("integrate", &Grid::integrate, py::arg("f"));

  py::class_<FieldState>(m, "FieldState")
      .def(py::init([](Nodal w, Nodal p, double t) { return FieldState{std::move(w), std::move(p), t}; }),
           py::arg("w"), py::arg("p"), py::arg("t") = 0.0)
      .def_static("zero", &FieldState::zero, py::arg("grid"), py::arg("t") = 0.0)
      .def_readwrite("w", &FieldState::w)
      .def_readwrite("p", &FieldState::p)
      .def_readwrite("t", &FieldState::t);

  py::class_<ObserverState>(m, "ObserverState")
      .def(py::init([](Nodal w, Nodal p) { return ObserverState{std::move(w), std::move(p)}; }), py::arg("w_hat"),
           py::arg("p_hat"))
      .def_static("zero", &ObserverState::zero, py::arg("grid"))
      .def_static("copy_of", &ObserverState::copy_of, py::arg("plant"))
      .def_readwrite("w_hat", &ObserverState::w_hat)
      .def_readwrite("p_hat", &ObserverState::p_hat);

  m.def("cell_weights", &cell_weights, py::arg("win"), py::arg("grid"));
  m.def("input_profile", &input_profile, py::arg("win"), py::arg("grid"));

  py::class_<InputSignal>(m, "InputSignal")
      .def_static("zero", &InputSignal::zero)
      .def_static("step", &InputSignal::step, py::arg("amplitude"), py::arg("t_on") = 0.0)
      .def_static("ramp_hold", &InputSignal::ramp_hold, py::arg("amplitude"), py::arg("t_ramp"),
                  py::arg("t_start") = 0.0)
      .def_static("sinusoid", &InputSignal::sinusoid, py::arg("amplitude"), py::arg("frequency"),
                  py::arg("phase") = 0.0)
      .def_static("table", &InputSignal::table, py::arg("times"), py::arg("values"))
      .def("__call__", &InputSignal::operator(), py::arg("t"));

  m.def(
      "plant_rhs",
      [](const FieldState& s, double u, const StringConfig& c, const ActuatorWindow& w, const Grid& g) {
        auto r = plant_rhs(s, u, c, w, g);
        return py::make_tuple(r.w_dot, r.p_dot);
      },
      "Returns (w_dot, p_dot).", py::arg("state"), py::arg("u"), py::arg("cfg"), py::arg("win"), py::arg("grid"));
  m.def("output_ybar", &output_ybar, py::arg("state"), py::arg("cfg"), py::arg("win"), py::arg("grid"));
  m.def("hamiltonian", py::overload_cast<const FieldState&, const StringConfig&, const Grid&>(&hamiltonian),
        py::arg("state"), py::arg("cfg"), py::arg("grid"));
  m.def("static_tip_deflection", &static_tip_deflection, py::arg("u"), py::arg("cfg"), py::arg("win"));

  m.def("error_energy", &error_energy, py::arg("plant"), py::arg("observer"), py::arg("cfg"), py::arg("grid"));
  m.def("error_energy_rate", &error_energy_rate, py::arg("plant"), py::arg("observer"), py::arg("cfg"),
        py::arg("win"), py::arg("grid"), py::arg("gain"));

  py::class_<EnergyReport>(m, "EnergyReport")
      .def_readonly("t", &EnergyReport::t)
      .def_readonly("H", &EnergyReport::H)
      .def_readonly("H_err", &EnergyReport::H_err)
      .def_readonly("ybar", &EnergyReport::ybar)
      .def_readonly("ybar_hat", &EnergyReport::ybar_hat)
      .def_readonly("decay", &EnergyReport::decay)
      .def_readonly("residual", &EnergyReport::residual);
  m.def("energy_report", &energy_report, py::arg("plant"), py::arg("observer"), py::arg("cfg"), py::arg("win"),
        py::arg("grid"), py::arg("gain"));

  py::class_<StepperConfig>(m, "StepperConfig")
      .def(py::init([](double dt, double tol, int max_iter) { return StepperConfig{dt, tol, max_iter}; }),
           py::arg("dt") = 1e-3, py::arg("solver_tol") = 1e-12, py::arg("max_iter") = 100)
      .def_readwrite("dt", &StepperConfig::dt)
      .def_readwrite("solver_tol", &StepperConfig::solver_tol)
      .def_readwrite("max_iter", &StepperConfig::max_iter);

  py::class_<MidpointStepper>(m, "MidpointStepper")
      .def(py::init<const StringConfig&, const ActuatorWindow&, const Grid&, const GainConfig&,
                    const StepperConfig&>(),
           py::arg("cfg"), py::arg("win"), py::arg("grid"), py::arg("gain"), py::arg("stepper") = StepperConfig{})
      .def(
          "step",
          [](const MidpointStepper& s, FieldState plant, ObserverState obs, const InputSignal& u) {
            s.step(plant, obs, u);
            return py::make_tuple(plant, obs);
          },
          "Advances one step and returns the new (plant, observer) pair.", py::arg("plant"), py::arg("observer"),
          py::arg("u") = InputSignal::zero())
      .def("reversed", &MidpointStepper::reversed)
      .def_property_readonly("dt", &MidpointStepper::dt);

  py::class_<ModalBasis>(m, "ModalBasis")
      .def_readonly("omegas", &ModalBasis::omegas)
      .def_readonly("vartheta", &ModalBasis::vartheta)
      .def_property_readonly("k_max", &ModalBasis::k_max)
      .def("omega", &ModalBasis::omega, py::arg("k"))
      .def("lambda_abs", &ModalBasis::lambda_abs, py::arg("k"));
  m.def("eigenfrequencies", &eigenfrequencies, py::arg("cfg"), py::arg("k_max") = kDefaultModeCount);
  m.def("actuator_mode_integral", &actuator_mode_integral, py::arg("k"), py::arg("win"), py::arg("basis"));

  py::class_<PlacementReport>(m, "PlacementReport")
      .def_readonly("zero_integral_modes", &PlacementReport::zero_integral_modes)
      .def_readonly("length_rule_modes", &PlacementReport::length_rule_modes)
      .def_readonly("notes", &PlacementReport::notes)
      .def_property_readonly("observable", &PlacementReport::observable);
  m.def("placement_check", &placement_check, py::arg("win"), py::arg("cfg"), py::arg("k_max") = kDefaultModeCount);

  py::class_<NormReport>(m, "NormReport")
      .def_readonly("std_norm_sq", &NormReport::std_norm_sq)
      .def_readonly("energy_norm_sq", &NormReport::energy_norm_sq)
      .def_readonly("c1_bound", &NormReport::c1_bound)
      .def_readonly("c2_bound", &NormReport::c2_bound);
  m.def("norm_report", &norm_report, py::arg("w"), py::arg("p"), py::arg("cfg"), py::arg("grid"));
  m.def(
      "apply_A",
      [](const Nodal& w, const Nodal& p, const StringConfig& c, const ActuatorWindow& win, const Grid& g,
         const GainConfig& gain) { return pair_of(apply_A(w, p, c, win, g, gain)); },
      py::arg("w"), py::arg("p"), py::arg("cfg"), py::arg("win"), py::arg("grid"), py::arg("gain"));
  m.def(
      "apply_A_inverse",
      [](const Nodal& f, const Nodal& h, const StringConfig& c, const ActuatorWindow& win, const Grid& g,
         const GainConfig& gain) { return pair_of(apply_A_inverse(f, h, c, win, g, gain)); },
      py::arg("f"), py::arg("h"), py::arg("cfg"), py::arg("win"), py::arg("grid"), py::arg("gain"));

  py::class_<PropertyCheck>(m, "PropertyCheck")
      .def_readonly("name", &PropertyCheck::name)
      .def_readonly("value", &PropertyCheck::value)
      .def_readonly("threshold", &PropertyCheck::threshold)
      .def_readonly("passed", &PropertyCheck::passed)
      .def_readonly("detail", &PropertyCheck::detail);
  m.def("resolvent_property_checks", &resolvent_property_checks, py::arg("cfg"), py::arg("win"), py::arg("gain"),
        py::arg("n_cells") = 64, py::arg("samples") = 100, py::arg("seed") = 1);

  py::class_<Scenario>(m, "Scenario")
      .def_readwrite("string", &Scenario::string)
      .def_readwrite("window", &Scenario::window)
      .def_readwrite("gain", &Scenario::gain)
      .def_readwrite("n_cells", &Scenario::n_cells)
      .def_readwrite("stepper", &Scenario::stepper)
      .def_readwrite("horizon", &Scenario::horizon)
      .def_readwrite("stride", &Scenario::stride)
      .def("validate", &Scenario::validate)
      .def("step_count", &Scenario::step_count);
  m.def("parse_scenario", [](const std::string& text) { return parse_scenario(text); }, py::arg("text"));
  m.def("load_scenario", &load_scenario, py::arg("path"));
  m.def("figure_scenario", &figure_scenario);
  m.def("resonant_scenario", &resonant_scenario);
  m.def("free_string_scenario", &free_string_scenario, py::arg("n_cells") = 32, py::arg("dt") = 1.0 / 64.0);

  py::class_<SimulationSummary>(m, "SimulationSummary")
      .def_readonly("steps", &SimulationSummary::steps)
      .def_readonly("H_err_initial", &SimulationSummary::H_err_initial)
      .def_readonly("H_err_final", &SimulationSummary::H_err_final)
      .def_readonly("monotonicity_violations", &SimulationSummary::monotonicity_violations)
      .def_readonly("max_identity_error", &SimulationSummary::max_identity_error)
      .def_readonly("wall_seconds", &SimulationSummary::wall_seconds)
      .def_readonly("final_report", &SimulationSummary::final_report)
      .def("__str__", &format_summary);
  m.def("simulate", &run_simulation, "Runs a scenario, optionally writing the CSV trajectory.",
        py::arg("scenario"), py::arg("csv_path") = std::nullopt);

  py::class_<ConvergenceRow>(m, "ConvergenceRow")
      .def_readonly("n_cells", &ConvergenceRow::n_cells)
      .def_readonly("dt", &ConvergenceRow::dt)
      .def_readonly("error", &ConvergenceRow::error)
      .def_readonly("ratio", &ConvergenceRow::ratio)
      .def_readonly("order", &ConvergenceRow::order);
  m.def(
      "sweep_convergence",
      [](const Scenario& sc, int levels) {
        return sweep_convergence(sc, halving_resolutions(sc.n_cells, sc.stepper.dt, levels)).rows;
      },
      "Halves (dz, dt) `levels - 1` times and compares against the modal solution.", py::arg("scenario"),
      py::arg("levels") = 5);
}
