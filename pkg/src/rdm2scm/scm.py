"""Structural causal models and the map from steady random dynamical models.

Every mechanism carries a ``fixed`` mapping from intervened endogenous names
to the distribution of their forced value.  A fixed value is drawn from the
``("endo", name)`` stream of the outcome seed, which is also where the
dynamical model draws the limit of its intervened process; the exogenous
variables use the ``("exo", name)`` streams.  Evaluating a model and its
associated SCM at the same seed therefore refers to the same outcome.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .errors import (
    CannotMarginalizeError,
    CannotResolveError,
    InvalidArgumentError,
    NoUniqueSolutionError,
)
from .graph import DirectedMixedGraph
from .process import RandomVariableSpec, component_rng
from .rdm import (
    NONZERO_TOL,
    LinearDynamics,
    RandomDynamicalModel,
    Variables,
    block_pattern,
    intervene_rdm,
    verify_dependencies,
)

COND_LIMIT = 1e12
PROBE_TOL = 1e-12


# --------------------------------------------------------------------------
# mechanisms


def _fixed_vector(fixed, endo, seed):
    out = {}
    for n, rv in fixed.items():
        if rv.is_degenerate:
            out[n] = rv.mean()
        elif seed is None:
            raise InvalidArgumentError(f"fixed value of {n!r} is random; pass the outcome seed")
        else:
            out[n] = rv.sample(component_rng(seed, "endo", n))
    return out


class LinearMechanism:
    """``f(x, e) = A x + Gamma e + b`` with fixed rows overridden."""

    kind = "linear"

    def __init__(self, A, Gamma, b=None, fixed=None, endogenous=None):
        self.A = np.array(A, dtype=float)
        self.Gamma = np.array(Gamma, dtype=float).reshape(self.A.shape[0], -1)
        self.b = np.zeros(self.A.shape[0]) if b is None else np.array(b, dtype=float)
        self.fixed = dict(fixed or {})
        if endogenous is not None and self.fixed:
            rows = endogenous.coords(self.fixed)
            self.A[rows] = 0.0
            self.Gamma[rows] = 0.0
            self.b[rows] = 0.0
        for a in (self.A, self.Gamma, self.b):
            a.setflags(write=False)

    def evaluate(self, x, e, endo, seed=None):
        out = np.asarray(x) @ self.A.T + np.asarray(e) @ self.Gamma.T + self.b
        for n, v in _fixed_vector(self.fixed, endo, seed).items():
            out[..., endo.slice(n)] = v
        return out

    def dependency(self, endo, exo):
        dx, de = block_pattern(self.A, endo, endo), block_pattern(self.Gamma, endo, exo)
        for n in self.fixed:
            dx[endo.names.index(n)] = False
            de[endo.names.index(n)] = False
        return dx, de

    def with_fixed(self, values, endo):
        fixed = dict(self.fixed)
        fixed.update(values)
        return LinearMechanism(self.A, self.Gamma, self.b, fixed, endo)

    def __eq__(self, other):
        return (
            isinstance(other, LinearMechanism)
            and np.array_equal(self.A, other.A)
            and np.array_equal(self.Gamma, other.Gamma)
            and np.array_equal(self.b, other.b)
            and self.fixed == other.fixed
        )


class FromRDMMechanism:
    """``f*(x, e) = (x_free + F_free(x, e), eta*_K)`` for non-linear dynamics."""

    kind = "from_rdm"

    def __init__(self, dynamics, fixed=None):
        self.dynamics = dynamics
        self.fixed = dict(fixed or {})

    def evaluate(self, x, e, endo, seed=None):
        x = np.asarray(x, dtype=float)
        out = x + self.dynamics.evaluate(x, e)
        for n, v in _fixed_vector(self.fixed, endo, seed).items():
            out[..., endo.slice(n)] = v
        return out

    def dependency(self, endo, exo):
        dx, de = self.dynamics.dependency(endo, exo)
        dx = dx.copy()
        de = de.copy()
        np.fill_diagonal(dx, True)
        for n in self.fixed:
            dx[endo.names.index(n)] = False
            de[endo.names.index(n)] = False
        return dx, de

    def with_fixed(self, values, endo):
        fixed = dict(self.fixed)
        fixed.update(values)
        return FromRDMMechanism(self.dynamics, fixed)

    def __eq__(self, other):
        return isinstance(other, FromRDMMechanism) and self.dynamics == other.dynamics and self.fixed == other.fixed


class CustomMechanism:
    """Black-box ``evaluator(x, e) -> f`` with declared parents per output."""

    kind = "custom"

    def __init__(self, evaluator: Callable, parents: Mapping, fixed=None):
        self.evaluator = evaluator
        self.parents = {str(k): frozenset(v) for k, v in parents.items()}
        self.fixed = dict(fixed or {})

    def _raw(self, x, e):
        x = np.asarray(x, dtype=float)
        e = np.asarray(e, dtype=float)
        if x.ndim == 1:
            return np.asarray(self.evaluator(x, e), dtype=float)
        eb = np.broadcast_to(e, x.shape[:-1] + e.shape[-1:])
        return np.stack([np.asarray(self.evaluator(a, b), dtype=float) for a, b in zip(x, eb)])

    def evaluate(self, x, e, endo, seed=None):
        out = self._raw(x, e)
        for n, v in _fixed_vector(self.fixed, endo, seed).items():
            out[..., endo.slice(n)] = v
        return out

    def dependency(self, endo, exo):
        dx = np.zeros((len(endo), len(endo)), dtype=bool)
        de = np.zeros((len(endo), len(exo)), dtype=bool)
        for out, ins in self.parents.items():
            if out in self.fixed:
                continue
            i = endo.names.index(out)
            for name in ins:
                if name in endo:
                    dx[i, endo.names.index(name)] = True
                else:
                    de[i, exo.names.index(name)] = True
        return dx, de

    def with_fixed(self, values, endo):
        fixed = dict(self.fixed)
        fixed.update(values)
        return CustomMechanism(self.evaluator, self.parents, fixed)

    def __eq__(self, other):
        return (
            isinstance(other, CustomMechanism)
            and self.evaluator is other.evaluator
            and self.parents == other.parents
            and self.fixed == other.fixed
        )


# --------------------------------------------------------------------------
# the model


@dataclass(frozen=True, eq=False)
class StructuralCausalModel:
    endogenous: Variables
    exogenous: Variables
    mechanism: object
    exo_spec: Mapping = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        if set(self.exo_spec) != set(self.exogenous.names):
            raise InvalidArgumentError("exogenous specs must cover exactly the exogenous variables")
        for n, rv in self.exo_spec.items():
            if rv.dimension != self.exogenous.dim(n):
                raise InvalidArgumentError(f"exogenous {n!r}: spec dimension {rv.dimension} != {self.exogenous.dim(n)}")
        for n, rv in self.mechanism.fixed.items():
            if n not in self.endogenous or rv.dimension != self.endogenous.dim(n):
                raise InvalidArgumentError(f"fixed value for {n!r} does not conform")
        object.__setattr__(self, "exo_spec", {n: self.exo_spec[n] for n in self.exogenous.names})

    @property
    def fixed(self) -> dict:
        return self.mechanism.fixed

    def f(self, x, e, seed=None) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        e = np.asarray(e, dtype=float)
        if x.shape[-1] != self.endogenous.size or e.shape[-1] != self.exogenous.size:
            raise InvalidArgumentError(
                f"expected x of size {self.endogenous.size} and e of size {self.exogenous.size}, "
                f"got {x.shape[-1]} and {e.shape[-1]}"
            )
        return self.mechanism.evaluate(x, e, self.endogenous, seed)

    def sample_exogenous(self, seed: int) -> np.ndarray:
        if not self.exo_spec:
            return np.zeros(0)
        return np.concatenate([rv.sample(component_rng(seed, "exo", n)) for n, rv in self.exo_spec.items()])

    def structurally_equal(self, other, seeds=(0,), n_probes=8) -> bool:
        return compare_scms(self, other, seeds, n_probes).equal

    @property
    def is_linear(self) -> bool:
        return isinstance(self.mechanism, LinearMechanism)


@dataclass
class SolutionSample:
    seed: int
    x: np.ndarray
    e: np.ndarray
    residual: float


def residual(scm: StructuralCausalModel, x, e, seed=None) -> float:
    """``|x - f(x, e)|_2``."""
    x = np.asarray(x, dtype=float)
    r = np.linalg.norm(x - scm.f(x, e, seed), axis=-1)
    return float(r) if x.ndim == 1 else r


def solution_sample(scm, x, e, seed) -> SolutionSample:
    return SolutionSample(int(seed), np.asarray(x, float), np.asarray(e, float), residual(scm, x, e, seed))


# --------------------------------------------------------------------------
# construction


def scm_from_rdm(rdm: RandomDynamicalModel) -> StructuralCausalModel:
    """The SCM associated with a steady model: ``f* = (x_free + F_free, eta*_K)``.

    Linear dynamics yield a :class:`LinearMechanism` with ``A = I + B``.
    """
    endo, exo = rdm.endogenous, rdm.exogenous
    fixed = {n: s.limit_spec() for n, s in rdm.intervened.items()}
    if isinstance(rdm.dynamics, LinearDynamics):
        A = np.eye(endo.size) + rdm.dynamics.B
        mech = LinearMechanism(A, rdm.dynamics.Gamma, None, fixed, endo)
    else:
        mech = FromRDMMechanism(rdm.dynamics, fixed)
    exo_spec = {n: s.limit_spec() for n, s in rdm.exo_processes.items()}
    return StructuralCausalModel(endo, exo, mech, exo_spec, name=rdm.name)


def _as_fixed_values(scm, I, xi):
    I = list(I)
    unknown = [i for i in I if i not in scm.endogenous]
    if unknown:
        raise InvalidArgumentError(f"cannot intervene on non-endogenous {unknown}")
    if isinstance(xi, Mapping):
        if set(xi) != set(I):
            raise InvalidArgumentError(f"intervention values must be given for exactly {sorted(I)}")
        items = xi.items()
    else:
        flat = np.atleast_1d(np.asarray(xi, dtype=float))
        need = sum(scm.endogenous.dim(i) for i in I)
        if flat.size != need:
            raise InvalidArgumentError(f"intervention value vector must have {need} entries, got {flat.size}")
        items, o = [], 0
        for i in I:
            d = scm.endogenous.dim(i)
            items.append((i, flat[o : o + d]))
            o += d
    out = {}
    for n, v in items:
        rv = v if isinstance(v, RandomVariableSpec) else RandomVariableSpec.point_mass(v)
        if rv.dimension != scm.endogenous.dim(n):
            raise InvalidArgumentError(f"intervention value for {n!r} has wrong dimension")
        out[n] = rv
    return out


def intervene_scm(scm: StructuralCausalModel, I, xi) -> StructuralCausalModel:
    """Perfect intervention: rows of ``I`` become the constants ``xi``.

    ``xi`` is a flat vector over ``I`` (in the given order) or a mapping from
    names to vectors or :class:`RandomVariableSpec` values.
    """
    values = _as_fixed_values(scm, I, xi)
    if not values:
        return scm
    mech = scm.mechanism.with_fixed(values, scm.endogenous)
    return StructuralCausalModel(scm.endogenous, scm.exogenous, mech, scm.exo_spec, scm.name)


# --------------------------------------------------------------------------
# solving


def _require_linear(scm, what):
    if not isinstance(scm.mechanism, LinearMechanism):
        raise InvalidArgumentError(f"{what} needs a linear mechanism, got {scm.mechanism.kind}")
    return scm.mechanism


def numerical_jacobian(scm, x, e, seed=None, h=1e-6):
    x = np.asarray(x, dtype=float)
    f0 = scm.f(x, e, seed)
    J = np.empty((x.size, x.size))
    for c in range(x.size):
        xp = x.copy()
        step = h * (1.0 + abs(x[c]))
        xp[c] += step
        J[:, c] = (scm.f(xp, e, seed) - f0) / step
    return J


def condition_number(scm) -> float:
    mech = _require_linear(scm, "condition_number")
    return float(np.linalg.cond(np.eye(scm.endogenous.size) - mech.A))


def solve_linear_scm(scm: StructuralCausalModel, e, seed=None) -> np.ndarray:
    """Unique ``x`` with ``x = A x + Gamma e + b`` (fixed rows forced).

    Raises :class:`NoUniqueSolutionError` when ``I - A`` is singular.  A
    non-linear mechanism is linearized at random probe points; if ``I - df/dx``
    is singular at all of them the system is reported as not uniquely
    solvable, otherwise the call is rejected as not linear.
    """
    n = scm.endogenous.size
    if not isinstance(scm.mechanism, LinearMechanism):
        rng = np.random.default_rng(0)
        ranks = []
        for _ in range(8):
            xp = rng.uniform(0.1, 2.0, n)
            ep = rng.normal(size=scm.exogenous.size)
            M = np.eye(n) - numerical_jacobian(scm, xp, ep, seed if seed is not None else 0)
            ranks.append(np.linalg.matrix_rank(M, tol=1e-6 * max(1.0, np.abs(M).max())))
        if max(ranks) < n:
            raise NoUniqueSolutionError(
                f"structural equations are not uniquely solvable: I - df/dx has rank {max(ranks)} < {n} "
                "at every probe point"
            )
        raise InvalidArgumentError("solve_linear_scm needs a linear mechanism")
    mech = scm.mechanism
    M = np.eye(n) - mech.A
    rhs = np.asarray(e, dtype=float) @ mech.Gamma.T + mech.b if scm.exogenous.size else mech.b.copy()
    rhs = np.array(rhs, dtype=float)
    for name, v in _fixed_vector(mech.fixed, scm.endogenous, seed).items():
        rhs[scm.endogenous.slice(name)] = v
    cond = np.linalg.cond(M)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise NoUniqueSolutionError(f"I - A is singular (condition number {cond:.3g})")
    return np.linalg.solve(M, rhs)


# --------------------------------------------------------------------------
# structural comparison and the commuting diagram


@dataclass
class ComparisonReport:
    equal: bool
    reasons: list = field(default_factory=list)
    max_probe_difference: float = 0.0
    disagreeing_probes: list = field(default_factory=list)


def compare_scms(m1, m2, seeds=(0,), n_probes=8, tol=PROBE_TOL) -> ComparisonReport:
    reasons = []
    if m1.endogenous != m2.endogenous:
        reasons.append("endogenous index sets differ")
    if m1.exogenous != m2.exogenous:
        reasons.append("exogenous index sets differ")
    if m1.exo_spec != m2.exo_spec:
        reasons.append("exogenous distributions differ")
    if set(m1.fixed) != set(m2.fixed):
        reasons.append(f"constant rows differ: {sorted(m1.fixed)} vs {sorted(m2.fixed)}")
    elif m1.fixed != m2.fixed:
        reasons.append("constant-row values differ")
    if reasons:
        return ComparisonReport(False, reasons)
    if isinstance(m1.mechanism, LinearMechanism) and isinstance(m2.mechanism, LinearMechanism):
        if not m1.mechanism == m2.mechanism:
            reasons.append("linear mechanism matrices differ")
    worst = 0.0
    bad = []
    n, m = m1.endogenous.size, m1.exogenous.size
    for seed in seeds:
        rng = np.random.default_rng([int(seed), 7])
        for k in range(n_probes):
            x = rng.uniform(0.1, 2.0, n)
            e = rng.normal(size=m)
            d = float(np.max(np.abs(m1.f(x, e, seed) - m2.f(x, e, seed)), initial=0.0))
            worst = max(worst, d)
            if not d <= tol:
                bad.append((int(seed), k, d))
    if bad:
        reasons.append(f"{len(bad)} probe(s) disagree beyond {tol:g}")
    return ComparisonReport(not reasons, reasons, worst, bad)


def check_commute(rdm: RandomDynamicalModel, I, xi: Mapping, seeds=range(4), n_probes=8) -> ComparisonReport:
    """Does intervening commute with taking the associated SCM?

    Route one maps ``rdm`` to its SCM and intervenes there with the limits of
    ``xi``; route two intervenes on ``rdm`` and then maps.  The two results are
    compared structurally.
    """
    I = list(I)
    route1 = intervene_scm(scm_from_rdm(rdm), I, {i: xi[i].limit_spec() for i in I})
    route2 = scm_from_rdm(intervene_rdm(rdm, I, {i: xi[i] for i in I}))
    return compare_scms(route1, route2, seeds, n_probes)


# --------------------------------------------------------------------------
# linear rewriting


def remove_self_loops_linear(scm: StructuralCausalModel) -> StructuralCausalModel:
    """Solve each linear equation for its own variable.

    Row block i, ``x_i = A_ii x_i + rest_i``, becomes
    ``x_i = (I - A_ii)^-1 rest_i``; the solution set is unchanged.
    """
    mech = _require_linear(scm, "remove_self_loops_linear")
    endo = scm.endogenous
    A, G, b = mech.A.copy(), mech.Gamma.copy(), mech.b.copy()
    for n in endo.names:
        if n in mech.fixed:
            continue
        s = endo.slice(n)
        Aii = A[s, s]
        if not np.any(np.abs(Aii) > NONZERO_TOL):
            continue
        M = np.eye(Aii.shape[0]) - Aii
        if np.linalg.cond(M) > COND_LIMIT:
            raise CannotResolveError(f"cannot resolve the self-loop of {n!r}: I - A_ii is singular")
        Minv = np.linalg.inv(M)
        A[s, s] = 0.0
        A[s] = Minv @ A[s]
        A[s, s] = 0.0
        G[s] = Minv @ G[s]
        b[s] = Minv @ b[s]
    return StructuralCausalModel(endo, scm.exogenous, LinearMechanism(A, G, b, mech.fixed, endo), scm.exo_spec, scm.name)


def marginalize_linear(scm: StructuralCausalModel, L) -> StructuralCausalModel:
    """Eliminate the variables ``L`` by solving their subsystem and substituting."""
    mech = _require_linear(scm, "marginalize_linear")
    endo = scm.endogenous
    unknown = set(L) - set(endo.names)
    L = [n for n in endo.names if n in set(L)]
    if unknown:
        raise InvalidArgumentError(f"unknown variables {sorted(unknown)}")
    if not L:
        return scm
    for n in L:
        if n in mech.fixed and not mech.fixed[n].kind == "point_mass":
            raise CannotMarginalizeError(f"{n!r} carries a random intervention value and cannot be eliminated")
    keep = [n for n in endo.names if n not in L]
    il, ik = endo.coords(L), endo.coords(keep)
    A, G, b = mech.A, mech.Gamma, mech.b.copy()
    for n in L:
        if n in mech.fixed:
            b[endo.slice(n)] = mech.fixed[n].params[0]
    M = np.eye(il.size) - A[np.ix_(il, il)]
    if np.linalg.cond(M) > COND_LIMIT:
        raise CannotMarginalizeError(f"subsystem of {L} is not uniquely solvable (I - A_LL singular)")
    Minv = np.linalg.inv(M)
    # x_L = Minv (A_LK x_K + G_L e + b_L)
    A_KL = A[np.ix_(ik, il)]
    A_new = A[np.ix_(ik, ik)] + A_KL @ Minv @ A[np.ix_(il, ik)]
    G_new = G[ik] + A_KL @ Minv @ G[il]
    b_new = b[ik] + A_KL @ Minv @ b[il]
    new_endo = Variables(tuple(keep), tuple(endo.dim(n) for n in keep))
    fixed = {n: v for n, v in mech.fixed.items() if n in keep}
    return StructuralCausalModel(new_endo, scm.exogenous, LinearMechanism(A_new, G_new, b_new, fixed, new_endo), scm.exo_spec, scm.name)


def eliminated_values(scm: StructuralCausalModel, L, x_keep, e) -> np.ndarray:
    """Values of the eliminated block ``L`` implied by ``x_keep`` (see :func:`marginalize_linear`)."""
    mech = _require_linear(scm, "eliminated_values")
    endo = scm.endogenous
    L = [n for n in endo.names if n in set(L)]
    keep = [n for n in endo.names if n not in L]
    il, ik = endo.coords(L), endo.coords(keep)
    b = mech.b.copy()
    for n in L:
        if n in mech.fixed:
            b[endo.slice(n)] = mech.fixed[n].params[0]
    M = np.eye(il.size) - mech.A[np.ix_(il, il)]
    rhs = mech.A[np.ix_(il, ik)] @ np.asarray(x_keep) + mech.Gamma[il] @ np.asarray(e) + b[il]
    return np.linalg.solve(M, rhs)


# --------------------------------------------------------------------------
# graphs and printing


def functional_graph_scm(scm: StructuralCausalModel, verify=True) -> DirectedMixedGraph:
    """Functional graph of the mechanism; self-loops ``i -> i`` are kept."""
    endo, exo = scm.endogenous, scm.exogenous
    mech = scm.mechanism
    if isinstance(mech, CustomMechanism) and verify:
        probe = _ProbeView(scm)
        verify_dependencies(probe, endo, exo, box=(0.1, 2.0))
    dx, de = mech.dependency(endo, exo)
    names = endo.names
    directed = {(names[i], names[j]) for j in range(len(names)) for i in range(len(names)) if dx[j, i]}
    bidirected = {
        (names[a], names[b]) for a in range(len(names)) for b in range(a + 1, len(names)) if np.any(de[a] & de[b])
    }
    return DirectedMixedGraph.make(names, directed, bidirected)


class _ProbeView:
    """Adapter exposing a custom mechanism's non-fixed rows to dependency probing."""

    def __init__(self, scm):
        self.scm = scm

    def evaluate(self, x, e):
        return self.scm.mechanism._raw(x, e) * self._mask()

    def _mask(self):
        m = np.ones(self.scm.endogenous.size)
        for n in self.scm.fixed:
            m[self.scm.endogenous.slice(n)] = 0.0
        return m

    def dependency(self, endo, exo):
        return self.scm.mechanism.dependency(endo, exo)


def _term(coef, label, first):
    mag = abs(coef)
    sign = "-" if coef < 0 else "+"
    body = label if mag == 1.0 and label else (f"{mag:.6g}*{label}" if label else f"{mag:.6g}")
    if first:
        return ("-" if coef < 0 else "") + body
    return f" {sign} {body}"


def format_linear_equations(scm: StructuralCausalModel) -> str:
    """Pretty-printed structural equations of a linear SCM, one line per coordinate."""
    mech = _require_linear(scm, "format_linear_equations")
    xl, el = scm.endogenous.labels(), scm.exogenous.labels()
    fixed_rows = set(scm.endogenous.coords(mech.fixed).tolist())
    lines = []
    owner = scm.endogenous.owner()
    for r, lab in enumerate(xl):
        if r in fixed_rows:
            name = scm.endogenous.names[owner[r]]
            rv = mech.fixed[name]
            lines.append(f"{lab} = do({rv.kind}{list(rv.params[0]) if rv.kind == 'point_mass' else ''})")
            continue
        parts = []
        for c, cl in enumerate(xl):
            if abs(mech.A[r, c]) > NONZERO_TOL:
                parts.append(_term(mech.A[r, c], cl, not parts))
        for c, cl in enumerate(el):
            if abs(mech.Gamma[r, c]) > NONZERO_TOL:
                parts.append(_term(mech.Gamma[r, c], cl, not parts))
        if abs(mech.b[r]) > NONZERO_TOL:
            parts.append(_term(mech.b[r], "", not parts))
        lines.append(f"{lab} = {''.join(parts) if parts else '0'}")
    return "\n".join(lines) + "\n"
