"""Random dynamical models: dynamics descriptors, interventions, functional graphs.

A model keeps the *full* dynamics descriptor (one output per endogenous
coordinate) together with the intervened set K; the restriction to the
outputs of the non-intervened indices is taken on demand.  Intervening
therefore never touches the descriptor, which makes interventions on disjoint
sets commute structurally.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .errors import DependencyMismatchError, InvalidArgumentError
from .graph import DirectedMixedGraph
from .process import ProcessSpec, RandomVariableSpec, component_rng, derive_path_seed, is_convergent

#: entries with absolute value at or below this are structural zeros
NONZERO_TOL = 1e-12


# --------------------------------------------------------------------------
# index sets


@dataclass(frozen=True)
class Variables:
    """Ordered named blocks of real coordinates."""

    names: tuple = ()
    dims: tuple = ()

    def __post_init__(self):
        if len(self.names) != len(self.dims):
            raise InvalidArgumentError("names and dims must align")
        if len(set(self.names)) != len(self.names):
            raise InvalidArgumentError(f"duplicate variable names in {self.names}")
        if any(int(d) < 1 for d in self.dims):
            raise InvalidArgumentError("dimensions must be positive")

    @classmethod
    def of(cls, spec) -> "Variables":
        """From ``Variables``, a list of names (dim 1), ``(name, dim)`` pairs or a mapping."""
        if isinstance(spec, Variables):
            return spec
        if isinstance(spec, Mapping):
            items = list(spec.items())
        else:
            items = [(s, 1) if isinstance(s, str) else tuple(s) for s in spec]
        return cls(tuple(str(n) for n, _ in items), tuple(int(d) for _, d in items))

    def __len__(self):
        return len(self.names)

    def __contains__(self, name):
        return name in self.names

    @property
    def size(self) -> int:
        return int(sum(self.dims))

    def offset(self, name) -> int:
        i = self.names.index(name)
        return int(sum(self.dims[:i]))

    def dim(self, name) -> int:
        return self.dims[self.names.index(name)]

    def slice(self, name) -> slice:
        o = self.offset(name)
        return slice(o, o + self.dim(name))

    def coords(self, names) -> np.ndarray:
        out = []
        for n in names:
            out.extend(range(self.slice(n).start, self.slice(n).stop))
        return np.asarray(out, dtype=np.int64)

    def labels(self) -> list:
        """Flat coordinate labels: ``name`` for scalars, ``name_k`` otherwise."""
        out = []
        for n, d in zip(self.names, self.dims):
            out.extend([n] if d == 1 else [f"{n}_{k}" for k in range(d)])
        return out

    def owner(self) -> np.ndarray:
        """Index (into ``names``) owning each flat coordinate."""
        return np.repeat(np.arange(len(self.names)), self.dims)


def block_pattern(M: np.ndarray, rows: Variables, cols: Variables, tol=NONZERO_TOL) -> np.ndarray:
    """Boolean ``(len(rows), len(cols))`` matrix: some entry of block (i, j) is non-zero."""
    nz = np.abs(M) > tol
    out = np.zeros((len(rows), len(cols)), dtype=bool)
    for a, rn in enumerate(rows.names):
        for b, cn in enumerate(cols.names):
            out[a, b] = bool(nz[rows.slice(rn), cols.slice(cn)].any())
    return out


# --------------------------------------------------------------------------
# dynamics descriptors


class LinearDynamics:
    """``F(x, e) = B x + Gamma e`` over the full endogenous vector."""

    kind = "linear"

    def __init__(self, B, Gamma):
        B = np.atleast_2d(np.asarray(B, dtype=float))
        G = np.asarray(Gamma, dtype=float)
        if G.ndim == 1:
            G = G.reshape(B.shape[0], -1) if G.size else np.zeros((B.shape[0], 0))
        if B.shape[0] != B.shape[1]:
            raise InvalidArgumentError(f"B must be square, got {B.shape}")
        if G.shape[0] != B.shape[0]:
            raise InvalidArgumentError(f"Gamma must have {B.shape[0]} rows, got {G.shape}")
        if not (np.all(np.isfinite(B)) and np.all(np.isfinite(G))):
            raise InvalidArgumentError("B and Gamma must be finite")
        self.B = B
        self.Gamma = G
        self.B.setflags(write=False)
        self.Gamma.setflags(write=False)

    def check_shapes(self, endo: Variables, exo: Variables):
        if self.B.shape[0] != endo.size or self.Gamma.shape[1] != exo.size:
            raise InvalidArgumentError(
                f"matrix shapes B{self.B.shape}, Gamma{self.Gamma.shape} do not conform "
                f"to {endo.size} endogenous / {exo.size} exogenous coordinates"
            )

    def evaluate(self, x, e):
        return np.asarray(x) @ self.B.T + np.asarray(e) @ self.Gamma.T

    def dependency(self, endo, exo):
        return block_pattern(self.B, endo, endo), block_pattern(self.Gamma, endo, exo)

    def __eq__(self, other):
        return (
            isinstance(other, LinearDynamics)
            and np.array_equal(self.B, other.B)
            and np.array_equal(self.Gamma, other.Gamma)
        )

    def __repr__(self):
        return f"LinearDynamics(B={self.B.tolist()}, Gamma={self.Gamma.tolist()})"


@dataclass(frozen=True)
class Reaction:
    reactants: tuple  # ((species, coefficient), ...)
    products: tuple
    rate: float

    @classmethod
    def make(cls, reactants: Mapping, products: Mapping, rate: float) -> "Reaction":
        if rate < 0:
            raise InvalidArgumentError("rate constants must be non-negative")
        norm = lambda m: tuple(sorted((str(k), int(v)) for k, v in m.items() if int(v) != 0))
        return cls(norm(reactants), norm(products), float(rate))


class MassActionDynamics:
    """Mass-action kinetics with zero-order inflows and first-order outflows."""

    kind = "mass_action"

    def __init__(self, species, reactions, inflow=None, outflow=None):
        self.species = tuple(species)
        self.reactions = tuple(reactions)
        self.inflow = {str(k): float(v) for k, v in (inflow or {}).items()}
        self.outflow = {str(k): float(v) for k, v in (outflow or {}).items()}
        known = set(self.species)
        for r in self.reactions:
            for s, _ in r.reactants + r.products:
                if s not in known:
                    raise InvalidArgumentError(f"reaction uses unknown species {s!r}")
        for s in list(self.inflow) + list(self.outflow):
            if s not in known:
                raise InvalidArgumentError(f"flow on unknown species {s!r}")
        self._build()

    def _build(self):
        idx = {s: i for i, s in enumerate(self.species)}
        rows = []
        for r in self.reactions:
            rows.append((dict(r.reactants), dict(r.products), r.rate))
        for s, k in self.inflow.items():
            rows.append(({}, {s: 1}, k))
        for s, k in self.outflow.items():
            rows.append(({s: 1}, {}, k))
        ns = len(self.species)
        self.orders = np.zeros((len(rows), ns))
        self.net = np.zeros((len(rows), ns))
        self.rates = np.array([k for *_, k in rows], dtype=float)
        for q, (re, pr, _) in enumerate(rows):
            for s, c in re.items():
                self.orders[q, idx[s]] += c
                self.net[q, idx[s]] -= c
            for s, c in pr.items():
                self.net[q, idx[s]] += c

    def check_shapes(self, endo: Variables, exo: Variables):
        if endo.names != self.species or endo.size != len(self.species):
            raise InvalidArgumentError("mass-action species must be exactly the scalar endogenous variables, in order")

    def evaluate(self, x, e=None):
        x = np.asarray(x, dtype=float)
        rate = self.rates * np.prod(x[..., None, :] ** self.orders, axis=-1)
        return rate @ self.net

    def dependency(self, endo, exo):
        ns = len(self.species)
        dx = np.zeros((ns, ns), dtype=bool)
        for q in range(self.orders.shape[0]):
            if self.rates[q] == 0:
                continue
            for i in np.flatnonzero(self.net[q]):
                dx[i, self.orders[q] > 0] = True
        return dx, np.zeros((ns, len(exo)), dtype=bool)

    def __eq__(self, other):
        return (
            isinstance(other, MassActionDynamics)
            and self.species == other.species
            and self.reactions == other.reactions
            and self.inflow == other.inflow
            and self.outflow == other.outflow
        )

    def __repr__(self):
        return f"MassActionDynamics(species={self.species}, reactions={len(self.reactions)})"


class CustomDynamics:
    """Black-box ``evaluator(x, e) -> dx`` with a declared dependency pattern.

    ``parents`` maps each endogenous output name to the names (endogenous or
    exogenous) it reads.  The declaration is checked by
    :func:`verify_dependencies` before it is used for graphs.
    """

    kind = "custom"

    def __init__(self, evaluator: Callable, parents: Mapping):
        self.evaluator = evaluator
        self.parents = {str(k): frozenset(v) for k, v in parents.items()}

    def check_shapes(self, endo, exo):
        unknown = set(self.parents) - set(endo.names)
        if unknown:
            raise InvalidArgumentError(f"dependency pattern names unknown outputs {sorted(unknown)}")
        for out, ins in self.parents.items():
            bad = set(ins) - set(endo.names) - set(exo.names)
            if bad:
                raise InvalidArgumentError(f"{out} declares unknown inputs {sorted(bad)}")

    def evaluate(self, x, e):
        x = np.asarray(x, dtype=float)
        e = np.asarray(e, dtype=float)
        if x.ndim == 1:
            return np.asarray(self.evaluator(x, e), dtype=float)
        return np.stack([np.asarray(self.evaluator(xi, ei), dtype=float) for xi, ei in zip(x, np.broadcast_to(e, x.shape[:-1] + e.shape[-1:]))])

    def dependency(self, endo, exo):
        dx = np.zeros((len(endo), len(endo)), dtype=bool)
        de = np.zeros((len(endo), len(exo)), dtype=bool)
        for out, ins in self.parents.items():
            i = endo.names.index(out)
            for name in ins:
                if name in endo:
                    dx[i, endo.names.index(name)] = True
                else:
                    de[i, exo.names.index(name)] = True
        return dx, de

    def __eq__(self, other):
        return isinstance(other, CustomDynamics) and self.evaluator is other.evaluator and self.parents == other.parents

    def __repr__(self):
        return f"CustomDynamics({getattr(self.evaluator, '__name__', 'evaluator')})"


# --------------------------------------------------------------------------
# dependency probing


def probe_dependencies(evaluate, endo: Variables, exo: Variables, n_points=8, seed=0, box=(-1.0, 1.0)):
    """Finite-difference dependency pattern of ``evaluate(x, e)`` at random points.

    Returns boolean ``(dx, de)``: output block i changes when input block j is
    perturbed at some probe point.
    """
    rng = np.random.default_rng(seed)
    n, m = endo.size, exo.size
    own_x, own_e, own_out = endo.owner(), exo.owner(), endo.owner()
    dx = np.zeros((len(endo), len(endo)), dtype=bool)
    de = np.zeros((len(endo), len(exo)), dtype=bool)
    for _ in range(n_points):
        x = rng.uniform(box[0], box[1], n)
        e = rng.normal(size=m)
        f0 = np.asarray(evaluate(x, e), dtype=float)
        tol = 1e-10 * (1.0 + np.abs(f0))
        for c in range(n):
            xp = x.copy()
            xp[c] += 1e-6 * (1.0 + abs(x[c]))
            changed = np.abs(np.asarray(evaluate(xp, e)) - f0) > tol
            for r in np.flatnonzero(changed):
                dx[own_out[r], own_x[c]] = True
        for c in range(m):
            ep = e.copy()
            ep[c] += 1e-6 * (1.0 + abs(e[c]))
            changed = np.abs(np.asarray(evaluate(x, ep)) - f0) > tol
            for r in np.flatnonzero(changed):
                de[own_out[r], own_e[c]] = True
    return dx, de


def verify_dependencies(dynamics, endo: Variables, exo: Variables, n_points=16, seed=0, box=(-1.0, 1.0)):
    """Raise :class:`DependencyMismatchError` unless probing reproduces the declared pattern."""
    dx, de = dynamics.dependency(endo, exo)
    px, pe = probe_dependencies(dynamics.evaluate, endo, exo, n_points=n_points, seed=seed, box=box)
    problems = []
    for i, out in enumerate(endo.names):
        for j, inp in enumerate(endo.names):
            if dx[i, j] != px[i, j]:
                problems.append(f"{out}<-{inp}: declared={bool(dx[i, j])} probed={bool(px[i, j])}")
        for j, inp in enumerate(exo.names):
            if de[i, j] != pe[i, j]:
                problems.append(f"{out}<-{inp}: declared={bool(de[i, j])} probed={bool(pe[i, j])}")
    if problems:
        raise DependencyMismatchError("dependency pattern does not match probing: " + "; ".join(problems))
    return dx, de


# --------------------------------------------------------------------------
# the model


@dataclass(frozen=True, eq=False)
class RandomDynamicalModel:
    endogenous: Variables
    exogenous: Variables
    dynamics: object
    exo_processes: Mapping = field(default_factory=dict)
    intervened: Mapping = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        endo, exo = self.endogenous, self.exogenous
        self.dynamics.check_shapes(endo, exo)
        if set(self.exo_processes) != set(exo.names):
            raise InvalidArgumentError(
                f"exogenous processes {sorted(self.exo_processes)} must cover exactly {list(exo.names)}"
            )
        for n, spec in list(self.exo_processes.items()) + list(self.intervened.items()):
            if not is_convergent(spec):
                raise InvalidArgumentError(f"process for {n!r} is not a convergent ProcessSpec")
        for n, spec in self.exo_processes.items():
            if spec.dimension != exo.dim(n):
                raise InvalidArgumentError(f"exogenous {n!r} has dimension {exo.dim(n)}, process has {spec.dimension}")
        for n, spec in self.intervened.items():
            if n not in endo:
                raise InvalidArgumentError(f"intervened {n!r} is not endogenous")
            if spec.dimension != endo.dim(n):
                raise InvalidArgumentError(f"intervened {n!r} has dimension {endo.dim(n)}, process has {spec.dimension}")
        # canonical ordering
        object.__setattr__(self, "exo_processes", {n: self.exo_processes[n] for n in exo.names})
        object.__setattr__(self, "intervened", {n: self.intervened[n] for n in endo.names if n in self.intervened})
        object.__setattr__(self, "_free_coords", endo.coords([n for n in endo.names if n not in self.intervened]))
        object.__setattr__(self, "_fixed_coords", endo.coords(list(self.intervened)))

    @property
    def K(self) -> tuple:
        return tuple(self.intervened)

    @property
    def free(self) -> tuple:
        return tuple(n for n in self.endogenous.names if n not in self.intervened)

    @property
    def free_coords(self) -> np.ndarray:
        return self._free_coords.copy()

    @property
    def fixed_coords(self) -> np.ndarray:
        return self._fixed_coords.copy()

    def F_restricted(self, x, e) -> np.ndarray:
        """Dynamics of the non-intervened coordinates, ``F_{\\K}(x, e)``."""
        return np.asarray(self.dynamics.evaluate(x, e))[..., self.free_coords]

    def realize(self, seed: int):
        """Realized intervened and exogenous processes for outcome ``seed``."""
        eta = {n: s.realize(component_rng(seed, "endo", n)) for n, s in self.intervened.items()}
        exo = {n: s.realize(component_rng(seed, "exo", n)) for n, s in self.exo_processes.items()}
        return eta, exo

    def exo_values(self, exo_real, t) -> np.ndarray:
        if not exo_real:
            return np.zeros(0) if np.ndim(t) == 0 else np.zeros((len(np.atleast_1d(t)), 0))
        parts = [exo_real[n].value(t) for n in self.exogenous.names]
        return np.concatenate(parts, axis=-1)

    def structurally_equal(self, other) -> bool:
        if not isinstance(other, RandomDynamicalModel):
            return False
        if (self.endogenous, self.exogenous, self.K) != (other.endogenous, other.exogenous, other.K):
            return False
        if self.intervened != other.intervened or self.exo_processes != other.exo_processes:
            return False
        return _restricted_equal(self, other)

    __eq__ = structurally_equal
    __hash__ = object.__hash__


def _restricted_equal(a, b) -> bool:
    fc = a.free_coords
    da, db = a.dynamics, b.dynamics
    if isinstance(da, LinearDynamics) and isinstance(db, LinearDynamics):
        return np.array_equal(da.B[fc], db.B[fc]) and np.array_equal(da.Gamma[fc], db.Gamma[fc])
    return da == db


# --------------------------------------------------------------------------
# construction and interventions


def make_linear_rdm(B, Gamma, exo_processes, endogenous=None, exogenous=None, name="linear") -> RandomDynamicalModel:
    """Observational linear model ``dX/dt = B X + Gamma E``."""
    dyn = LinearDynamics(B, Gamma)
    n, m = dyn.B.shape[0], dyn.Gamma.shape[1]
    if isinstance(exo_processes, Mapping):
        names = list(exo_processes)
        specs = exo_processes
    else:
        specs_list = list(exo_processes)
        names = [f"E{j + 1}" for j in range(len(specs_list))]
        specs = dict(zip(names, specs_list))
    endo = Variables.of(endogenous if endogenous is not None else [f"X{i + 1}" for i in range(n)])
    exo = Variables.of(exogenous if exogenous is not None else [(k, specs[k].dimension) for k in names])
    if exo.size != m:
        raise InvalidArgumentError(f"Gamma has {m} columns but exogenous variables have {exo.size} coordinates")
    return RandomDynamicalModel(endo, exo, dyn, dict(specs), {}, name=name)


def intervene_rdm(rdm: RandomDynamicalModel, I, xi: Mapping) -> RandomDynamicalModel:
    """Perfect intervention ``do(I, xi)``: force the processes of ``I`` to ``xi``."""
    I = list(I)
    unknown = [i for i in I if i not in rdm.endogenous]
    if unknown:
        raise InvalidArgumentError(f"cannot intervene on non-endogenous {unknown}")
    if set(xi) != set(I):
        raise InvalidArgumentError(f"intervention processes {sorted(xi)} must be given for exactly {sorted(I)}")
    for n, spec in xi.items():
        if not is_convergent(spec):
            raise InvalidArgumentError(f"intervention on {n!r} is not convergent; only perfect interventions are allowed")
    eta = {k: v for k, v in rdm.intervened.items() if k not in I}
    eta.update(xi)
    return RandomDynamicalModel(rdm.endogenous, rdm.exogenous, rdm.dynamics, rdm.exo_processes, eta, name=rdm.name)


def dynamics_pattern(rdm: RandomDynamicalModel, verify=True):
    endo, exo = rdm.endogenous, rdm.exogenous
    if isinstance(rdm.dynamics, CustomDynamics) and verify:
        return verify_dependencies(rdm.dynamics, endo, exo)
    return rdm.dynamics.dependency(endo, exo)


def functional_graph_rdm(rdm: RandomDynamicalModel) -> DirectedMixedGraph:
    """Functional graph of the intervened dynamics.

    ``i -> j`` when ``i != j`` and the derivative of non-intervened ``j``
    reads ``i``; a coordinate's dependence on itself is the ordinary state
    feedback of an ODE and is not drawn.  ``i <-> j`` when some exogenous
    variable is read by both.
    """
    dx, de = dynamics_pattern(rdm)
    names = rdm.endogenous.names
    free = [names.index(n) for n in rdm.free]
    directed = set()
    for j in free:
        for i in range(len(names)):
            if i != j and dx[j, i]:
                directed.add((names[i], names[j]))
    bidirected = set()
    for a in free:
        for b in free:
            if a < b and np.any(de[a] & de[b]):
                bidirected.add((names[a], names[b]))
    return DirectedMixedGraph.make(names, directed, bidirected)


# --------------------------------------------------------------------------
# diagnostics


def _box_arrays(rdm, box):
    if isinstance(box, Mapping):
        lo = np.zeros(rdm.endogenous.size)
        hi = np.zeros(rdm.endogenous.size)
        for n in rdm.endogenous.names:
            a, b = box[n]
            lo[rdm.endogenous.slice(n)] = a
            hi[rdm.endogenous.slice(n)] = b
    else:
        lo, hi = box
        lo = np.broadcast_to(np.asarray(lo, dtype=float), (rdm.endogenous.size,)).copy()
        hi = np.broadcast_to(np.asarray(hi, dtype=float), (rdm.endogenous.size,)).copy()
    if np.any(lo > hi):
        raise InvalidArgumentError("box must satisfy lower <= upper")
    return lo, hi


def estimate_lipschitz(rdm: RandomDynamicalModel, box, n_samples=2000, seed=0, t_max=10.0, n_outcomes=16) -> float:
    """Largest observed ``|F(x1) - F(x2)| / |x1 - x2|`` over random pairs in ``box``.

    Pairs differ only in the non-intervened coordinates; the intervened ones
    and the exogenous input are set from a random outcome at a random time in
    ``[0, t_max]``.  This is a lower bound on the local Lipschitz constant.
    """
    lo, hi = _box_arrays(rdm, box)
    fc = rdm.free_coords
    if fc.size == 0 or np.all(lo[fc] == hi[fc]):
        raise InvalidArgumentError("degenerate box: no free coordinate has positive width")
    rng = np.random.default_rng(seed)
    outcomes = [rdm.realize(derive_path_seed(seed, k)) for k in range(n_outcomes)]
    best = 0.0
    batch = 256
    done = 0
    while done < n_samples:
        b = min(batch, n_samples - done)
        x1 = rng.uniform(lo, hi, (b, lo.size))
        x2 = rng.uniform(lo, hi, (b, lo.size))
        ts = rng.uniform(0.0, t_max, b)
        ks = rng.integers(0, n_outcomes, b)
        e = np.zeros((b, rdm.exogenous.size))
        for r in range(b):
            eta, exo = outcomes[ks[r]]
            for n, real in eta.items():
                s = rdm.endogenous.slice(n)
                x1[r, s] = x2[r, s] = real.value(ts[r])
            if exo:
                e[r] = rdm.exo_values(exo, ts[r])
        dxn = np.linalg.norm(x1 - x2, axis=1)
        ok = dxn > 0
        if np.any(ok):
            df = np.linalg.norm(rdm.F_restricted(x1[ok], e[ok]) - rdm.F_restricted(x2[ok], e[ok]), axis=-1)
            best = max(best, float(np.max(df / dxn[ok])))
        done += b
    return best


@dataclass
class SteadyReport:
    steady: bool
    processes_convergent: dict
    continuous_on_probes: bool
    lipschitz_estimate: float
    max_real_eigenvalue: float | None = None
    warnings: list = field(default_factory=list)


def default_box(rdm):
    if isinstance(rdm.dynamics, MassActionDynamics):
        return 0.0, 2.0
    return -1.0, 1.0


def check_steady(rdm: RandomDynamicalModel, n_probes=64, seed=0) -> SteadyReport:
    """Steadiness findings: convergent processes, continuity on probes, contractivity hints."""
    conv = {f"exo:{n}": is_convergent(s) for n, s in rdm.exo_processes.items()}
    conv.update({f"endo:{n}": is_convergent(s) for n, s in rdm.intervened.items()})
    warnings = []
    lo, hi = default_box(rdm)
    rng = np.random.default_rng(seed)
    n, m = rdm.endogenous.size, rdm.exogenous.size
    continuous = True
    for _ in range(n_probes):
        x = rng.uniform(lo, hi, n)
        e = rng.normal(size=m)
        f0 = rdm.F_restricted(x, e)
        u = rng.normal(size=n)
        f1 = rdm.F_restricted(x + 1e-7 * u / np.linalg.norm(u), e)
        if not (np.all(np.isfinite(f0)) and np.all(np.isfinite(f1))) or np.max(np.abs(f1 - f0), initial=0.0) > 1e-3:
            continuous = False
    if not continuous:
        warnings.append("dynamics not continuous (or not finite) on probed points")
    lip = 0.0
    if rdm.free_coords.size:
        lip = estimate_lipschitz(rdm, (lo, hi), n_samples=1000, seed=seed)
    max_re = None
    if isinstance(rdm.dynamics, LinearDynamics) and rdm.free_coords.size:
        fc = rdm.free_coords
        eig = np.linalg.eigvals(rdm.dynamics.B[np.ix_(fc, fc)])
        max_re = float(np.max(eig.real))
        if max_re >= 0:
            warnings.append(
                f"non-contractive: restricted B has an eigenvalue with real part {max_re:.3g} >= 0; "
                "sample paths need not equilibrate"
            )
    steady = all(conv.values()) and continuous
    return SteadyReport(steady, conv, continuous, lip, max_re, warnings)


@dataclass(frozen=True)
class InitialCondition:
    """Initial time and the distribution of the full initial state.

    The intervened coordinates of a sampled state are replaced by the
    intervened processes at ``t0``, so ``(X0)_K = eta_K(t0)`` holds per seed.
    """

    t0: float
    x0: RandomVariableSpec

    def sample(self, rdm: RandomDynamicalModel, seed: int, eta_real=None) -> np.ndarray:
        if self.x0.dimension != rdm.endogenous.size:
            raise InvalidArgumentError(
                f"initial condition has dimension {self.x0.dimension}, model has {rdm.endogenous.size}"
            )
        x = self.x0.sample(component_rng(seed, "init", "X0"))
        if eta_real is None:
            eta_real, _ = rdm.realize(seed)
        for n, real in eta_real.items():
            x[rdm.endogenous.slice(n)] = real.value(self.t0)
        return x
