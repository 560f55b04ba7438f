import math

import numpy as np
import pytest

import vso


def test_eigenfrequencies():
    basis = vso.eigenfrequencies(vso.StringConfig(), 3)
    assert basis.lambda_abs(1) == pytest.approx(math.pi / 2, rel=1e-14)
    assert basis.lambda_abs(2) == pytest.approx(3 * math.pi / 2, rel=1e-14)


def test_placement_check_flags_resonant_window():
    report = vso.placement_check(vso.ActuatorWindow(0.1, 0.9), vso.StringConfig(), 10)
    assert 3 in report.zero_integral_modes
    assert not report.observable
    assert vso.placement_check(vso.ActuatorWindow(0.25, 0.75), vso.StringConfig(), 20).observable


def test_config_errors_map_to_value_error():
    with pytest.raises(ValueError):
        vso.validate_config(vso.StringConfig(rho=-1.0), vso.ActuatorWindow(0.2, 0.4))
    with pytest.raises(vso.ConfigError):
        vso.validate_config(vso.StringConfig(), vso.ActuatorWindow(0.6, 0.4))


def test_stepper_conserves_free_energy():
    cfg = vso.StringConfig()
    grid = vso.Grid(1.0, 32)
    z = grid.nodes()
    plant = vso.FieldState(np.sin(0.5 * math.pi * z), np.zeros_like(z))
    obs = vso.ObserverState.copy_of(plant)
    stepper = vso.MidpointStepper(cfg, vso.ActuatorWindow(0.25, 0.75), grid, vso.GainConfig(),
                                  vso.StepperConfig(dt=0.01))
    h0 = vso.hamiltonian(plant, cfg, grid)
    for _ in range(100):
        plant, obs = stepper.step(plant, obs)
    assert vso.hamiltonian(plant, cfg, grid) == pytest.approx(h0, rel=1e-12)
    assert plant.t == pytest.approx(1.0)


def test_resolvent_round_trip():
    cfg = vso.StringConfig()
    win = vso.ActuatorWindow(0.25, 0.75)
    gain = vso.GainConfig(k=5.0)
    grid = vso.Grid(1.0, 16)
    h = -np.ones(grid.n_nodes)
    w, p = vso.apply_A_inverse(np.zeros(grid.n_nodes), h, cfg, win, grid, gain)
    z = grid.nodes()
    np.testing.assert_allclose(w, z - 0.5 * z * z, atol=1e-14)
    f2, h2 = vso.apply_A(w, p, cfg, win, grid, gain)
    np.testing.assert_allclose(h2[1:], h[1:], atol=1e-12)


def test_simulate_scenario_writes_csv(tmp_path):
    sc = vso.parse_scenario(
        "[string]\nrho = 1\nT = 1\nL = 1\n[window]\nlp1 = 0.25\nlp2 = 0.75\n"
        "[gain]\nk = 5\n[grid]\nn_cells = 16\n[stepper]\ndt = 0.01\nhorizon = 0.5\n"
        "[initial]\nobserver_w = ramp(0.1)\n"
    )
    out = tmp_path / "run.csv"
    summary = vso.simulate(sc, str(out))
    assert summary.steps == 50
    assert summary.monotonicity_violations == 0
    assert summary.H_err_final < summary.H_err_initial
    lines = out.read_text().splitlines()
    assert lines[0] == "t,w_L,w_hat_L,H,H_err,ybar,ybar_hat,decay,residual"
    assert len(lines) == 52


def test_scenario_errors():
    with pytest.raises(vso.ScenarioError):
        vso.parse_scenario("[string]\nrho = 1\n")
    with pytest.raises(vso.IoError):
        vso.load_scenario("/nonexistent/file.scenario")


def test_convergence_sweep():
    rows = vso.sweep_convergence(vso.free_string_scenario(), 3)
    assert len(rows) == 3
    assert rows[0].order is None
    assert rows[2].order > 1.9
