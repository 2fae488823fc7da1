import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from rdm2scm import (
    Detection,
    DivergenceError,
    EmptyResultError,
    InitialCondition,
    InvalidArgumentError,
    NonConvergenceError,
    ProcessSpec,
    RandomVariableSpec,
    StepControl,
    derive_path_seed,
    detect_equilibration,
    equilibrium_samples,
    integrate_path,
    intervene_rdm,
    make_linear_rdm,
    run_ensemble,
    scm_from_rdm,
    solve_linear_scm,
)
from rdm2scm.presets import ENZYME_RATES, oscillator_rdm
from rdm2scm.process import Trajectory
from rdm2scm.simulate import read_equilibrium_csv, write_equilibrium_csv, write_trajectories_csv

from conftest import const, point, random_stable_matrix
from test_rdm import enzyme_rhs

DECAY = make_linear_rdm([[-1.0]], [[0.0]], [const(0)])
ONE = InitialCondition(0.0, RandomVariableSpec.point_mass([1.0]))


def test_rk45_exponential():
    tr = integrate_path(DECAY, ONE, StepControl(t_end=10.0, rtol=1e-8, atol=1e-8), seed=0)
    assert tr.times[0] == 0.0 and tr.times[-1] == 10.0
    err = np.max(np.abs(tr.values[:, 0] - np.exp(-tr.times)))
    assert err < 1e-6


def rk4_max_error(h, t_end=10.0):
    tr = integrate_path(DECAY, ONE, StepControl(t_end=t_end, method="rk4", h=h), seed=0)
    return np.max(np.abs(tr.values[:, 0] - np.exp(-tr.times)))


def test_rk4_order():
    ratio = rk4_max_error(0.1) / rk4_max_error(0.05)
    assert 11 <= ratio <= 21


def test_rk4_hits_t_end():
    tr = integrate_path(DECAY, ONE, StepControl(t_end=1.0, method="rk4", h=0.3), seed=0)
    assert tr.times[-1] == pytest.approx(1.0, abs=1e-15)
    assert tr.values[-1, 0] == pytest.approx(math.exp(-1), abs=1e-4)


def test_zero_dynamics_constant():
    rdm = make_linear_rdm(np.zeros((3, 3)), np.zeros((3, 1)), [const(0)])
    c = [0.5, -2.0, 7.0]
    tr = integrate_path(rdm, InitialCondition(0.0, RandomVariableSpec.point_mass(c)), StepControl(t_end=5.0), 0)
    assert np.all(tr.values == np.array(c))


def test_intervened_coordinates_exact(oscillator, oscillator_init):
    xi = ProcessSpec.exp_transient(RandomVariableSpec.normal([3.0], [[0.01]]), point(0.5), 0.3)
    rdm = intervene_rdm(oscillator, ["Q3"], {"Q3": xi})
    for seed in (0, 1, 2):
        tr = integrate_path(rdm, oscillator_init, StepControl(t_end=30.0), seed)
        eta, _ = rdm.realize(seed)
        col = rdm.endogenous.names.index("Q3")
        assert np.all(tr.values[:, col] - eta["Q3"].value(tr.times)[:, 0] == 0.0)


def test_deterministic_per_seed(enzyme, enzyme_init):
    a = integrate_path(enzyme, enzyme_init, StepControl(t_end=20.0), 5).values
    b = integrate_path(enzyme, enzyme_init, StepControl(t_end=20.0), 5).values
    assert a.tobytes() == b.tobytes()


@pytest.mark.parametrize("seed", [0, 3])
def test_enzyme_matches_scipy(enzyme, enzyme_init, seed):
    ctrl = StepControl(t_end=60.0, rtol=1e-10, atol=1e-10)
    tr = integrate_path(enzyme, enzyme_init, ctrl, seed)
    ref = solve_ivp(lambda t, x: enzyme_rhs(x), (0, 60), tr.values[0], method="DOP853", rtol=1e-12, atol=1e-12, t_eval=tr.times)
    np.testing.assert_allclose(tr.values, ref.y.T, atol=1e-7)


def test_enzyme_long_horizon_limit(enzyme, enzyme_init):
    k_i, k_f, k_r, k_c, k_o = ENZYME_RATES
    x0 = enzyme_init.sample(enzyme, 1)
    ref = solve_ivp(lambda t, x: enzyme_rhs(x), (0, 2000), x0, method="DOP853", rtol=1e-12, atol=1e-12)
    S, E, C, P = ref.y[:, -1]
    assert C == pytest.approx(k_i / k_c, abs=1e-9)
    assert P == pytest.approx(k_i / k_o, abs=1e-9)
    assert k_f * E * S == pytest.approx((k_r + k_c) * C, abs=1e-9)
    assert E + C == pytest.approx(x0[1] + x0[2], abs=1e-9)
    tr = integrate_path(enzyme, enzyme_init, StepControl(t_end=2000.0, max_step=5.0), 1)
    np.testing.assert_allclose(tr.values[-1], ref.y[:, -1], atol=1e-7)


def test_detection_examples():
    t = np.linspace(0, 10, 101)
    const_traj = Trajectory(t, np.tile([[2.0]], (101, 1)))
    zero = make_linear_rdm([[0.0]], [[0.0]], [const(0)])
    st = detect_equilibration(const_traj, zero, 0)
    assert st.equilibrated and st.x_star.tolist() == [2.0] and st.detection_time == 0.0
    tr = integrate_path(DECAY, ONE, StepControl(t_end=40.0), 0)
    st = detect_equilibration(tr, DECAY, 0, Detection(1e-6, 1e-6))
    assert st.equilibrated and abs(st.x_star[0]) < 1e-6
    assert 13 < st.detection_time < 15  # e^-t < 1e-6 from t ~ 13.8
    short = integrate_path(DECAY, ONE, StepControl(t_end=5.0), 0)
    st = detect_equilibration(short, DECAY, 0)
    assert not st.equilibrated and st.x_star is None and st.tail_drift > 1e-6


def test_detection_needs_process_limit():
    slow = make_linear_rdm([[-1.0]], [[1.0]], [ProcessSpec.exp_transient(point(0), point(1), 0.01)])
    tr = integrate_path(slow, ONE, StepControl(t_end=100.0), 0)
    st = detect_equilibration(tr, slow, 0)
    assert not st.equilibrated and st.process_gap == pytest.approx(math.exp(-1), rel=1e-12)


def test_clamped_enzyme_drifts(enzyme, enzyme_init):
    k_i, k_c = ENZYME_RATES[0], ENZYME_RATES[3]
    rdm = intervene_rdm(enzyme, ["C"], {"C": const(0.6)})
    ens = run_ensemble(rdm, enzyme_init, StepControl(t_end=60.0), 20, 0, keep_trajectories=True)
    assert ens.n_equilibrated == 0
    for p in ens.paths:
        t, X = p.trajectory.times, p.trajectory.values
        slope = np.diff(X[:, 0] - X[:, 1]) / np.diff(t)
        np.testing.assert_allclose(slope, k_i - k_c * 0.6, atol=1e-7)
        assert np.all(np.diff(X[t >= 5.0, 0]) < 0)


def test_ensemble_single_path_matches(enzyme, enzyme_init, enzyme_ctrl):
    ens = run_ensemble(enzyme, enzyme_init, enzyme_ctrl, 1, master_seed=9, keep_trajectories=True)
    seed = derive_path_seed(9, 0)
    tr = integrate_path(enzyme, enzyme_init, enzyme_ctrl, seed)
    st = detect_equilibration(tr, enzyme, seed)
    p = ens.paths[0]
    assert p.seed == seed
    assert p.trajectory.values.tobytes() == tr.values.tobytes()
    assert p.status.equilibrated == st.equilibrated and p.status.tail_drift == st.tail_drift


def test_thread_count_invariance(oscillator, oscillator_init):
    ctrl = StepControl(t_end=100.0)
    a = run_ensemble(oscillator, oscillator_init, ctrl, 12, 4, n_workers=1)
    b = run_ensemble(oscillator, oscillator_init, ctrl, 12, 4, n_workers=4)
    assert [p.final_state.tobytes() for p in a.paths] == [p.final_state.tobytes() for p in b.paths]
    assert a.equilibrium_matrix.tobytes() == b.equilibrium_matrix.tobytes()


def test_all_constant_samples():
    rdm = make_linear_rdm(np.zeros((2, 2)), np.zeros((2, 1)), [const(4.0)])
    ens = run_ensemble(rdm, InitialCondition(0.0, RandomVariableSpec.point_mass([1.0, 2.0])), StepControl(t_end=5.0), 5)
    X, E, seeds = equilibrium_samples(ens)
    assert X.tolist() == [[1.0, 2.0]] * 5 and E.tolist() == [[4.0]] * 5 and len(seeds) == 5


def test_empty_result():
    ens = run_ensemble(DECAY, ONE, StepControl(t_end=2.0), 3)
    assert ens.n_equilibrated == 0 and ens.equilibrium_matrix.shape == (0, 1)
    with pytest.raises(EmptyResultError):
        equilibrium_samples(ens)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_linear_rows_match_solve(seed):
    rng = np.random.default_rng(seed)
    n, m = 4, 2
    B = random_stable_matrix(rng, n)
    G = rng.normal(size=(n, m))
    exo = [ProcessSpec.exp_transient(RandomVariableSpec.normal(rng.normal(size=1), [[1.0]]), point(1.0), 1.0) for _ in range(m)]
    rdm = make_linear_rdm(B, G, exo)
    init = InitialCondition(0.0, RandomVariableSpec.uniform_box([-1] * n, [1] * n))
    ens = run_ensemble(rdm, init, StepControl(t_end=120.0), 10, seed)
    assert ens.n_equilibrated == 10
    scm = scm_from_rdm(rdm)
    for x, e in zip(ens.equilibrium_matrix, ens.e_star_matrix):
        np.testing.assert_allclose(x, solve_linear_scm(scm, e), atol=1e-6)


def test_symmetric_oscillator_equilibrium():
    rdm = oscillator_rdm()
    init = InitialCondition(0.0, RandomVariableSpec.uniform_box([-1] * 10, [1] * 5 + [6] * 5))
    ens = run_ensemble(rdm, init, StepControl(t_end=200.0), 5)
    assert ens.n_equilibrated == 5
    for x in ens.equilibrium_matrix:
        np.testing.assert_allclose(x, [0] * 5 + [1, 2, 3, 4, 5], atol=1e-4)


def test_divergence_and_budget():
    grow = make_linear_rdm([[1.0]], [[0.0]], [const(0)])
    with pytest.raises(DivergenceError) as exc:
        integrate_path(grow, ONE, StepControl(t_end=100.0), 0)
    part = exc.value.partial
    assert part is not None and part.times[-1] < 100 and np.all(np.abs(part.values) <= 1e12 * 10)
    with pytest.raises(NonConvergenceError) as exc:
        integrate_path(DECAY, ONE, StepControl(t_end=100.0, max_steps=5), 0)
    assert not isinstance(exc.value, DivergenceError)
    ens = run_ensemble(grow, ONE, StepControl(t_end=100.0), 2)
    assert ens.n_equilibrated == 0 and "diverged" in ens.paths[0].status.error


def test_bad_inputs():
    with pytest.raises(InvalidArgumentError):
        StepControl(t_end=1.0, rtol=0)
    with pytest.raises(InvalidArgumentError):
        StepControl(t_end=1.0, method="euler")
    with pytest.raises(InvalidArgumentError):
        Detection(window_fraction=1.0)
    with pytest.raises(InvalidArgumentError):
        integrate_path(DECAY, InitialCondition(5.0, ONE.x0), StepControl(t_end=1.0), 0)
    with pytest.raises(InvalidArgumentError):
        run_ensemble(DECAY, ONE, StepControl(t_end=1.0), 0)


def test_x0_override_respects_interventions(enzyme, enzyme_init):
    rdm = intervene_rdm(enzyme, ["C"], {"C": const(0.3125)})
    tr = integrate_path(rdm, enzyme_init, StepControl(t_end=1.0), 0, x0=[1.0, 1.0, 9.0, 1.0])
    assert tr.values[0].tolist() == [1.0, 1.0, 0.3125, 1.0]


def test_csv_round_trip(tmp_path, enzyme, enzyme_init):
    ens = run_ensemble(enzyme, enzyme_init, StepControl(t_end=60.0), 6, 2, keep_trajectories=True)
    write_equilibrium_csv(tmp_path / "eq.csv", ens)
    cols, data = read_equilibrium_csv(tmp_path / "eq.csv")
    assert cols == ["S", "E", "C", "P"]
    assert data.tobytes() == ens.equilibrium_matrix.tobytes()
    cols, everything = read_equilibrium_csv(tmp_path / "eq.csv", only_equilibrated=False)
    assert everything.shape == (6, 4)
    write_trajectories_csv(tmp_path / "tr.csv", [p.trajectory for p in ens.paths], enzyme.endogenous.labels())
    lines = (tmp_path / "tr.csv").read_text().splitlines()
    assert lines[0] == "path_id,t,S,E,C,P"
    assert len(lines) == 1 + 6 * 601
    assert lines[1].startswith("0,0.0,")
