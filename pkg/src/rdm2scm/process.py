"""Random variables and convergent, sample-path continuous stochastic processes.

An outcome omega of the background probability space is represented by an
integer seed.  Every named random component of a model (an exogenous process,
an intervened process, the initial condition) draws from its own stream derived
from ``(seed, role, name)``, so the same seed always yields the same joint
realization no matter which subset of components is evaluated, or in which
order.

A process always draws its limit variable first.  Sampling
``spec.limit_spec()`` with the same stream therefore reproduces
``limit_variable(spec, seed)`` exactly; the SCM module relies on this.
"""
from __future__ import annotations

import zlib
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import InvalidArgumentError

# Kernel codes for a scalar process component, see ``kernels.eval_component``.
K_CONST, K_EXP, K_RAMP, K_DCOS, K_RATIONAL = 0, 1, 2, 3, 4
N_PAR = 5


# --------------------------------------------------------------------------
# seeds


def derive_path_seed(master_seed: int, path_id: int) -> int:
    """Stable per-path seed: first word of ``SeedSequence([master_seed, path_id])``."""
    if master_seed < 0 or path_id < 0:
        raise InvalidArgumentError("seeds and path ids must be non-negative")
    ss = np.random.SeedSequence([int(master_seed), int(path_id)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def component_rng(seed: int, role: str, name: str) -> np.random.Generator:
    """Generator for one named random component of the outcome ``seed``."""
    if seed < 0:
        raise InvalidArgumentError("seed must be non-negative")
    tag = zlib.crc32(f"{role}:{name}".encode())
    return np.random.default_rng(np.random.SeedSequence([int(seed), tag]))


# --------------------------------------------------------------------------
# random variables


def _vec(values, name="value"):
    arr = np.atleast_1d(np.asarray(values, dtype=float))
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidArgumentError(f"{name} must be a non-empty real vector")
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError(f"{name} must be finite")
    return tuple(float(v) for v in arr)


@dataclass(frozen=True)
class RandomVariableSpec:
    """A real random vector: ``point_mass``, ``normal`` or ``uniform_box``."""

    kind: str
    params: tuple

    def __post_init__(self):
        if self.kind not in ("point_mass", "normal", "uniform_box"):
            raise InvalidArgumentError(f"unknown random variable kind {self.kind!r}")

    @classmethod
    def point_mass(cls, value) -> "RandomVariableSpec":
        return cls("point_mass", (_vec(value),))

    @classmethod
    def normal(cls, mean, cov) -> "RandomVariableSpec":
        mean = _vec(mean, "mean")
        c = np.atleast_2d(np.asarray(cov, dtype=float))
        if c.shape != (len(mean), len(mean)):
            raise InvalidArgumentError(f"covariance must be {len(mean)}x{len(mean)}, got {c.shape}")
        if not np.allclose(c, c.T, rtol=0, atol=1e-12):
            raise InvalidArgumentError("covariance must be symmetric")
        if np.linalg.eigvalsh(c).min() < -1e-12 * max(1.0, np.abs(c).max()):
            raise InvalidArgumentError("covariance must be positive semidefinite")
        return cls("normal", (mean, tuple(tuple(float(v) for v in row) for row in c)))

    @classmethod
    def uniform_box(cls, lower, upper) -> "RandomVariableSpec":
        lo, hi = _vec(lower, "lower"), _vec(upper, "upper")
        if len(lo) != len(hi):
            raise InvalidArgumentError("lower and upper must have equal length")
        if any(a > b for a, b in zip(lo, hi)):
            raise InvalidArgumentError("lower must be <= upper componentwise")
        return cls("uniform_box", (lo, hi))

    @property
    def dimension(self) -> int:
        return len(self.params[0])

    @property
    def is_degenerate(self) -> bool:
        if self.kind == "point_mass":
            return True
        if self.kind == "normal":
            return not np.any(np.asarray(self.params[1]))
        return self.params[0] == self.params[1]

    def mean(self) -> np.ndarray:
        if self.kind == "uniform_box":
            return 0.5 * (np.asarray(self.params[0]) + np.asarray(self.params[1]))
        return np.asarray(self.params[0], dtype=float)

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        if self.kind == "point_mass":
            return np.array(self.params[0], dtype=float)
        if self.kind == "normal":
            return np.asarray(self.params[0]) + _normal_factor(self.params[1]) @ rng.standard_normal(self.dimension)
        lo, hi = np.asarray(self.params[0]), np.asarray(self.params[1])
        return rng.uniform(lo, hi)

    def to_data(self) -> dict:
        if self.kind == "point_mass":
            return {"point_mass": list(self.params[0])}
        if self.kind == "normal":
            return {"normal": {"mean": list(self.params[0]), "cov": [list(r) for r in self.params[1]]}}
        return {"uniform_box": {"lower": list(self.params[0]), "upper": list(self.params[1])}}


@lru_cache(maxsize=256)
def _normal_factor(cov: tuple) -> np.ndarray:
    # symmetric square-root factor; eigh keeps singular (PSD) covariances usable
    s, u = np.linalg.eigh(np.asarray(cov, dtype=float))
    return u * np.sqrt(np.clip(s, 0.0, None))


# --------------------------------------------------------------------------
# deterministic path families

_FAMILIES = {
    # value(t) = limit + amplitude * exp(-rate t) * cos(omega t + phase)
    "damped_cosine": ("amplitude", "rate", "omega", "phase"),
    # value(t) = limit + amplitude / (1 + t)^power   (t clipped at 0)
    "rational_decay": ("amplitude", "power"),
}


@dataclass(frozen=True)
class PathFunction:
    """Descriptor of a deterministic function of time with a known limit."""

    family: str
    params: tuple  # sorted (key, value) pairs; amplitude is a vector

    @classmethod
    def make(cls, family: str, **params) -> "PathFunction":
        if family not in _FAMILIES:
            raise InvalidArgumentError(f"unknown path family {family!r}; have {sorted(_FAMILIES)}")
        need = set(_FAMILIES[family])
        if set(params) != need:
            raise InvalidArgumentError(f"{family} needs parameters {sorted(need)}, got {sorted(params)}")
        items = []
        for k in sorted(params):
            v = params[k]
            items.append((k, _vec(v, k) if k == "amplitude" else float(v)))
        pf = cls(family, tuple(items))
        if family == "damped_cosine" and pf.get("rate") <= 0:
            raise InvalidArgumentError("damped_cosine needs rate > 0")
        if family == "rational_decay" and pf.get("power") <= 0:
            raise InvalidArgumentError("rational_decay needs power > 0")
        return pf

    def get(self, key):
        return dict(self.params)[key]

    def to_data(self) -> dict:
        out = {"family": self.family}
        for k, v in self.params:
            out[k] = list(v) if isinstance(v, tuple) else v
        return out


# --------------------------------------------------------------------------
# processes


@dataclass(frozen=True)
class ProcessSpec:
    """A convergent process; build it with one of the four constructors."""

    kind: str
    limit: RandomVariableSpec | None = None
    amplitude: RandomVariableSpec | None = None
    rate: float | None = None
    settle_time: float | None = None
    start: RandomVariableSpec | None = None
    function: PathFunction | None = None
    limit_value: tuple | None = None

    @classmethod
    def constant(cls, rv: RandomVariableSpec) -> "ProcessSpec":
        return cls("constant", limit=rv)

    @classmethod
    def exp_transient(cls, limit: RandomVariableSpec, amplitude: RandomVariableSpec, rate: float) -> "ProcessSpec":
        if limit.dimension != amplitude.dimension:
            raise InvalidArgumentError("limit and amplitude dimensions differ")
        if not rate > 0:
            raise InvalidArgumentError("rate must be positive")
        return cls("exp_transient", limit=limit, amplitude=amplitude, rate=float(rate))

    @classmethod
    def ramp_to(cls, limit: RandomVariableSpec, settle_time: float, start: RandomVariableSpec | None = None) -> "ProcessSpec":
        """Linear ramp from ``start`` (default 0) at t<=0 to ``limit`` at t>=settle_time."""
        if not settle_time > 0:
            raise InvalidArgumentError("settle_time must be positive")
        if start is None:
            start = RandomVariableSpec.point_mass(np.zeros(limit.dimension))
        if start.dimension != limit.dimension:
            raise InvalidArgumentError("start and limit dimensions differ")
        return cls("ramp_to", limit=limit, settle_time=float(settle_time), start=start)

    @classmethod
    def deterministic_path(cls, function: PathFunction, limit_value) -> "ProcessSpec":
        lv = _vec(limit_value, "limit")
        if len(function.get("amplitude")) != len(lv):
            raise InvalidArgumentError("amplitude and limit dimensions differ")
        return cls("deterministic_path", function=function, limit_value=lv)

    @property
    def dimension(self) -> int:
        if self.kind == "deterministic_path":
            return len(self.limit_value)
        return self.limit.dimension

    def limit_spec(self) -> RandomVariableSpec:
        """Distribution of the t -> infinity limit."""
        if self.kind == "deterministic_path":
            return RandomVariableSpec.point_mass(self.limit_value)
        return self.limit

    @property
    def is_time_constant(self) -> bool:
        return self.kind == "constant"

    def realize(self, rng: np.random.Generator) -> "RealizedProcess":
        dim = self.dimension
        par = np.zeros((dim, N_PAR))
        if self.kind == "deterministic_path":
            fn = self.function
            par[:, 0] = self.limit_value
            par[:, 1] = fn.get("amplitude")
            if fn.family == "damped_cosine":
                code = K_DCOS
                par[:, 2] = fn.get("rate")
                par[:, 3] = fn.get("omega")
                par[:, 4] = fn.get("phase")
            else:
                code = K_RATIONAL
                par[:, 2] = fn.get("power")
            return RealizedProcess(np.full(dim, code, dtype=np.int64), par)
        par[:, 0] = self.limit.sample(rng)  # limit always first
        if self.kind == "constant":
            code = K_CONST
        elif self.kind == "exp_transient":
            code = K_EXP
            par[:, 1] = self.amplitude.sample(rng)
            par[:, 2] = self.rate
        else:
            code = K_RAMP
            par[:, 1] = self.start.sample(rng)
            par[:, 2] = self.settle_time
        return RealizedProcess(np.full(dim, code, dtype=np.int64), par)

    def to_data(self) -> dict:
        if self.kind == "constant":
            return {"constant": self.limit.to_data()}
        if self.kind == "exp_transient":
            return {"exp_transient": {"limit": self.limit.to_data(), "amplitude": self.amplitude.to_data(), "rate": self.rate}}
        if self.kind == "ramp_to":
            return {"ramp_to": {"limit": self.limit.to_data(), "settle_time": self.settle_time, "start": self.start.to_data()}}
        return {"deterministic_path": {"function": self.function.to_data(), "limit": list(self.limit_value)}}


@dataclass(frozen=True)
class RealizedProcess:
    """One sample path, encoded as per-component kernel codes and parameters."""

    codes: np.ndarray
    par: np.ndarray = field(repr=False)

    @property
    def limit(self) -> np.ndarray:
        return self.par[:, 0].copy()

    def value(self, t) -> np.ndarray:
        """Values at times ``t``; returns shape ``(len(t), dim)`` (or ``(dim,)`` for scalar t)."""
        scalar = np.ndim(t) == 0
        tt = np.atleast_1d(np.asarray(t, dtype=float))[:, None]
        out = np.empty((tt.shape[0], self.codes.size))
        for c in range(self.codes.size):
            p = self.par[c]
            code = self.codes[c]
            col = tt[:, 0]
            if code == K_CONST:
                v = np.full_like(col, p[0])
            elif code == K_EXP:
                v = p[0] + p[1] * np.exp(-p[2] * col)
            elif code == K_RAMP:
                w = np.clip(1.0 - col / p[2], 0.0, 1.0)
                v = p[0] + (p[1] - p[0]) * w
            elif code == K_DCOS:
                v = p[0] + p[1] * np.exp(-p[2] * col) * np.cos(p[3] * col + p[4])
            else:
                v = p[0] + p[1] / (1.0 + np.maximum(col, 0.0)) ** p[2]
            out[:, c] = v
        return out[0] if scalar else out


@dataclass(frozen=True)
class Trajectory:
    """A sample path on a strictly increasing time grid."""

    times: np.ndarray
    values: np.ndarray
    path_id: int = 0
    seed: int = 0

    def __post_init__(self):
        if self.values.ndim != 2 or self.values.shape[0] != self.times.shape[0]:
            raise InvalidArgumentError("values must have one row per grid point")


def check_grid(grid) -> np.ndarray:
    g = np.asarray(grid, dtype=float)
    if g.ndim != 1 or g.size == 0:
        raise InvalidArgumentError("time grid must be a non-empty 1-d sequence")
    if not np.all(np.isfinite(g)):
        raise InvalidArgumentError("time grid must be finite")
    if np.any(np.diff(g) <= 0):
        raise InvalidArgumentError("time grid must be strictly increasing")
    return g


def sample_path(spec: ProcessSpec, seed: int, grid, path_id: int = 0) -> Trajectory:
    """Evaluate the sample path of ``spec`` for outcome ``seed`` on ``grid``."""
    g = check_grid(grid)
    real = spec.realize(np.random.default_rng(np.random.SeedSequence(int(seed))))
    return Trajectory(g, real.value(g), path_id=path_id, seed=int(seed))


def limit_variable(spec: ProcessSpec, seed: int) -> np.ndarray:
    """The sampled t -> infinity limit of ``spec`` for outcome ``seed``."""
    return spec.realize(np.random.default_rng(np.random.SeedSequence(int(seed)))).limit


def is_convergent(spec: ProcessSpec) -> bool:
    # Every constructor enforces a decaying transient, so this is structural.
    return isinstance(spec, ProcessSpec) and spec.kind in (
        "constant",
        "exp_transient",
        "ramp_to",
        "deterministic_path",
    )
