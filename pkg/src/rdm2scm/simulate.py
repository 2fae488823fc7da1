"""Pathwise integration of the intervened random differential equation.

The ODE state holds only the non-intervened coordinates; intervened ones are
substituted from their processes at every stage evaluation and written into
the returned trajectories from the same process evaluation used elsewhere in
the package.
"""
from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import DivergenceError, EmptyResultError, InvalidArgumentError, NonConvergenceError
from .process import Trajectory, derive_path_seed
from .rdm import CustomDynamics, InitialCondition, LinearDynamics, MassActionDynamics, RandomDynamicalModel


@dataclass(frozen=True)
class StepControl:
    """``method`` is ``"rk45"`` (adaptive) or ``"rk4"`` (fixed step ``h``)."""

    t_end: float
    method: str = "rk45"
    rtol: float = 1e-8
    atol: float = 1e-8
    max_step: float = 1.0
    h: float = 0.01
    max_steps: int = 1_000_000
    n_out: int = 601

    def __post_init__(self):
        if self.method not in ("rk45", "rk4"):
            raise InvalidArgumentError(f"unknown method {self.method!r}")
        if self.method == "rk45" and not (self.rtol > 0 and self.atol > 0 and self.max_step > 0):
            raise InvalidArgumentError("tolerances and max_step must be positive")
        if self.method == "rk4" and not self.h > 0:
            raise InvalidArgumentError("h must be positive")
        if self.n_out < 2 or self.max_steps < 1:
            raise InvalidArgumentError("n_out must be >= 2 and max_steps >= 1")


@dataclass(frozen=True)
class Detection:
    eps_drift: float = 1e-6
    eps_deriv: float = 1e-6
    window_fraction: float = 0.2

    def __post_init__(self):
        if not 0 < self.window_fraction < 1:
            raise InvalidArgumentError("window_fraction must lie in (0, 1)")
        if self.eps_drift <= 0 or self.eps_deriv <= 0:
            raise InvalidArgumentError("detection tolerances must be positive")

    @property
    def eps_accept(self) -> float:
        return 10.0 * (self.eps_drift + self.eps_deriv)


@dataclass
class EquilibriumStatus:
    equilibrated: bool
    x_star: np.ndarray | None
    detection_time: float
    tail_drift: float
    derivative_norm: float
    process_gap: float = 0.0
    error: str | None = None


# --------------------------------------------------------------------------
# kernel parameters


def _concat_tables(reals):
    if not reals:
        return np.zeros(0, dtype=np.int64), np.zeros((0, 5))
    return (
        np.concatenate([r.codes for r in reals]).astype(np.int64),
        np.concatenate([r.par for r in reals], axis=0),
    )


def kernel_setup(rdm: RandomDynamicalModel, eta_real, exo_real):
    """``(solvers, params)`` for one realized outcome."""
    free = rdm.free_coords
    fixed = rdm.fixed_coords
    ec, ep = _concat_tables([eta_real[n] for n in rdm.K])
    xc, xp = _concat_tables([exo_real[n] for n in rdm.exogenous.names])
    dyn = rdm.dynamics
    if isinstance(dyn, LinearDynamics):
        d = (np.ascontiguousarray(dyn.B[free]), np.ascontiguousarray(dyn.Gamma[free]), np.zeros(1))
        solv = kernels.solvers("linear")
    elif isinstance(dyn, MassActionDynamics):
        d = (dyn.orders, dyn.net, dyn.rates)
        solv = kernels.solvers("mass_action")
    elif isinstance(dyn, CustomDynamics):
        evaluate = dyn.evaluate

        def rhs(x, e, dy, params):
            dy[:] = np.asarray(evaluate(x, e))[params[3]]

        d = (np.zeros((1, 1)), np.zeros((1, 1)), np.zeros(1))
        solv = kernels.python_solvers(rhs)
    else:
        raise InvalidArgumentError(f"unsupported dynamics {type(dyn).__name__}")
    params = d + (free, fixed, ec, ep, xc, xp)
    return solv, params


def _assemble(rdm, times, Y, eta_real):
    X = np.empty((times.size, rdm.endogenous.size))
    X[:, rdm.free_coords] = Y
    for n, real in eta_real.items():
        X[:, rdm.endogenous.slice(n)] = real.value(times)
    return X


def integrate_path(
    rdm: RandomDynamicalModel,
    init: InitialCondition,
    ctrl: StepControl,
    seed: int,
    x0=None,
    path_id: int = 0,
    realized=None,
) -> Trajectory:
    """Solve one sample path for outcome ``seed``.

    ``x0`` overrides the sampled initial state.  Raises
    :class:`NonConvergenceError` (step budget or step-size underflow) or
    :class:`DivergenceError` with the partial trajectory attached.
    ``realized`` may pass ``rdm.realize(seed)`` when the caller already has it.
    """
    if not ctrl.t_end > init.t0:
        raise InvalidArgumentError("t_end must exceed t0")
    eta_real, exo_real = realized if realized is not None else rdm.realize(seed)
    if x0 is None:
        x_init = init.sample(rdm, seed, eta_real)
    else:
        x_init = np.array(x0, dtype=float)
        if x_init.shape != (rdm.endogenous.size,):
            raise InvalidArgumentError("x0 has the wrong dimension")
        for n, real in eta_real.items():
            x_init[rdm.endogenous.slice(n)] = real.value(init.t0)
    (rk4, rk45, _), params = kernel_setup(rdm, eta_real, exo_real)
    y0 = np.ascontiguousarray(x_init[rdm.free_coords])
    n_x, n_e = rdm.endogenous.size, rdm.exogenous.size
    if ctrl.method == "rk4":
        n_steps = max(1, int(math.ceil((ctrl.t_end - init.t0) / ctrl.h - 1e-9)))
        status, T, Y, n_filled, steps = rk4(float(init.t0), y0, float(ctrl.h), n_steps, float(ctrl.t_end), params, n_x, n_e)
    else:
        T = np.linspace(init.t0, ctrl.t_end, ctrl.n_out)
        status, Y, n_filled, steps = rk45(
            T, y0, float(ctrl.rtol), float(ctrl.atol), float(ctrl.max_step), int(ctrl.max_steps), params, n_x, n_e
        )
    T = np.asarray(T)[:n_filled]
    X = _assemble(rdm, T, np.asarray(Y)[:n_filled], eta_real)
    traj = Trajectory(T, X, path_id=path_id, seed=int(seed))
    if status == kernels.STATUS_DIVERGED:
        raise DivergenceError(f"state diverged (|X| > {kernels.DIVERGENCE_NORM:g} or non-finite) near t={T[-1]:.6g}", traj)
    if status == kernels.STATUS_MAX_STEPS:
        raise NonConvergenceError(f"max_steps={ctrl.max_steps} exhausted at t={T[-1]:.6g}", traj)
    if status == kernels.STATUS_UNDERFLOW:
        raise NonConvergenceError(f"step size underflow at t={T[-1]:.6g}", traj)
    return traj


# --------------------------------------------------------------------------
# equilibration


def detect_equilibration(
    traj: Trajectory, rdm: RandomDynamicalModel, seed: int, detection: Detection = Detection(), realized=None
) -> EquilibriumStatus:
    """Finite-horizon equilibration verdict for one trajectory.

    Equilibrated iff the tail window drift, the derivative norm at the final
    time and the distance of every intervened/exogenous process from its
    limit at the final time are all within tolerance.
    """
    t, X = traj.times, traj.values
    x_end = X[-1]
    t_end = t[-1]
    start = t_end - detection.window_fraction * (t_end - t[0])
    dist = np.linalg.norm(X - x_end, axis=1)
    tail = float(np.max(dist[t >= start]))
    outside = np.flatnonzero(dist > detection.eps_drift)
    detection_time = float(t[0]) if outside.size == 0 else float(t[min(outside[-1] + 1, t.size - 1)])
    eta_real, exo_real = realized if realized is not None else rdm.realize(seed)
    e_end = rdm.exo_values(exo_real, t_end)
    deriv = float(np.linalg.norm(rdm.F_restricted(x_end, e_end))) if rdm.free_coords.size else 0.0
    gap = 0.0
    for real in list(eta_real.values()) + list(exo_real.values()):
        gap = max(gap, float(np.linalg.norm(real.value(t_end) - real.limit)))
    ok = bool(np.all(np.isfinite(x_end))) and tail <= detection.eps_drift and deriv <= detection.eps_deriv and gap <= detection.eps_drift
    return EquilibriumStatus(ok, x_end.copy() if ok else None, detection_time, tail, deriv, gap)


# --------------------------------------------------------------------------
# ensembles


@dataclass
class PathResult:
    path_id: int
    seed: int
    status: EquilibriumStatus
    final_state: np.ndarray
    e_star: np.ndarray
    trajectory: Trajectory | None = None


@dataclass
class EnsembleResult:
    rdm: RandomDynamicalModel
    master_seed: int
    paths: list = field(default_factory=list)

    @property
    def n_paths(self) -> int:
        return len(self.paths)

    @property
    def n_equilibrated(self) -> int:
        return sum(p.status.equilibrated for p in self.paths)

    @property
    def n_failed(self) -> int:
        return self.n_paths - self.n_equilibrated

    @property
    def equilibrium_matrix(self) -> np.ndarray:
        rows = [p.status.x_star for p in self.paths if p.status.equilibrated]
        return np.array(rows).reshape(len(rows), self.rdm.endogenous.size)

    @property
    def e_star_matrix(self) -> np.ndarray:
        rows = [p.e_star for p in self.paths if p.status.equilibrated]
        return np.array(rows).reshape(len(rows), self.rdm.exogenous.size)

    @property
    def equilibrated_seeds(self) -> list:
        return [p.seed for p in self.paths if p.status.equilibrated]


def _run_one(rdm, init, ctrl, master_seed, pid, detection, keep):
    seed = derive_path_seed(master_seed, pid)
    realized = rdm.realize(seed)
    exo_real = realized[1]
    e_star = np.concatenate([exo_real[n].limit for n in rdm.exogenous.names]) if exo_real else np.zeros(0)
    try:
        traj = integrate_path(rdm, init, ctrl, seed, path_id=pid, realized=realized)
    except NonConvergenceError as exc:
        part = exc.partial
        final = part.values[-1].copy() if part is not None and part.values.shape[0] else np.full(rdm.endogenous.size, np.nan)
        st = EquilibriumStatus(False, None, math.nan, math.inf, math.inf, error=str(exc))
        return PathResult(pid, seed, st, final, e_star, part if keep else None)
    st = detect_equilibration(traj, rdm, seed, detection, realized)
    return PathResult(pid, seed, st, traj.values[-1].copy(), e_star, traj if keep else None)


def run_ensemble(
    rdm: RandomDynamicalModel,
    init: InitialCondition,
    ctrl: StepControl,
    n_paths: int,
    master_seed: int = 0,
    detection: Detection = Detection(),
    keep_trajectories: bool = False,
    n_workers: int = 1,
) -> EnsembleResult:
    """Integrate ``n_paths`` outcomes with per-path seeds derived from ``master_seed``.

    Per-path failures become non-equilibrated statuses.  Results are keyed by
    path id, so the outcome does not depend on ``n_workers``.
    """
    if n_paths < 1:
        raise InvalidArgumentError("n_paths must be >= 1")
    job = lambda pid: _run_one(rdm, init, ctrl, master_seed, pid, detection, keep_trajectories)
    if n_workers > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            results = list(pool.map(job, range(n_paths)))
    else:
        results = [job(pid) for pid in range(n_paths)]
    results.sort(key=lambda r: r.path_id)
    return EnsembleResult(rdm, int(master_seed), results)


def equilibrium_samples(ensemble: EnsembleResult):
    """``(X_star, E_star, seeds)`` over the equilibrated paths."""
    if ensemble.n_equilibrated == 0:
        raise EmptyResultError("no path equilibrated")
    return ensemble.equilibrium_matrix, ensemble.e_star_matrix, ensemble.equilibrated_seeds


# --------------------------------------------------------------------------
# CSV


def _fmt(v) -> str:
    v = float(v)
    return repr(v) if math.isfinite(v) else ("nan" if math.isnan(v) else ("inf" if v > 0 else "-inf"))


def write_trajectories_csv(path, trajectories, labels):
    """Columns ``path_id, t, <labels...>``."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["path_id", "t", *labels])
        for tr in trajectories:
            for t, row in zip(tr.times, tr.values):
                w.writerow([tr.path_id, _fmt(t), *(_fmt(v) for v in row)])


def write_equilibrium_csv(path, ensemble: EnsembleResult):
    """Columns ``path_id, equilibrated, <endogenous...>, <exogenous...>``.

    Non-equilibrated paths report their final state.
    """
    rdm = ensemble.rdm
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["path_id", "equilibrated", *rdm.endogenous.labels(), *rdm.exogenous.labels()])
        for p in ensemble.paths:
            x = p.status.x_star if p.status.equilibrated else p.final_state
            w.writerow([p.path_id, int(p.status.equilibrated), *(_fmt(v) for v in x), *(_fmt(v) for v in p.e_star)])


def read_equilibrium_csv(path, only_equilibrated=True):
    """``(columns, matrix)`` from an equilibrium CSV (``path_id``/``equilibrated`` dropped)."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise InvalidArgumentError(f"{path} is empty")
    header = rows[0]
    if header[:2] != ["path_id", "equilibrated"]:
        raise InvalidArgumentError(f"{path} is not an equilibrium CSV")
    body = [r for r in rows[1:] if r and (not only_equilibrated or r[1] == "1")]
    data = np.array([[float(v) for v in r[2:]] for r in body]).reshape(len(body), len(header) - 2)
    return header[2:], data
