"""YAML model files.

A model file is a mapping with the keys ``name``, ``endogenous``,
``exogenous``, ``dynamics``, ``interventions`` and ``run``; see the README for
the grammar.  Parsing walks the composed YAML node tree so every error can
point at a line and column.  Unknown keys are rejected.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from importlib import resources

import numpy as np
import yaml

from . import presets
from .errors import InvalidArgumentError, ModelFileError
from .process import PathFunction, ProcessSpec, RandomVariableSpec
from .rdm import InitialCondition, LinearDynamics, MassActionDynamics, RandomDynamicalModel, Reaction, Variables, intervene_rdm
from .simulate import Detection, StepControl

PRESET_PARAMS = {
    "enzyme": {"rates"},
    "oscillator": {"d", "masses", "springs", "frictions", "L", "length_std"},
}


# --------------------------------------------------------------------------
# node helpers


class _Ctx:
    def __init__(self, source):
        self.source = source

    def fail(self, node, msg):
        m = node.start_mark if node is not None else None
        raise ModelFileError(msg, m.line + 1 if m else None, m.column + 1 if m else None, self.source)

    def mapping(self, node, allowed, required=(), what="mapping"):
        if not isinstance(node, yaml.MappingNode):
            self.fail(node, f"expected a {what}")
        out = {}
        for k, v in node.value:
            if not isinstance(k, yaml.ScalarNode):
                self.fail(k, "mapping keys must be plain strings")
            key = k.value
            if key in out:
                self.fail(k, f"duplicate key {key!r}")
            if allowed is not None and key not in allowed:
                self.fail(k, f"unknown key {key!r} (allowed: {', '.join(sorted(allowed))})")
            out[key] = (k, v)
        for r in required:
            if r not in out:
                self.fail(node, f"missing required key {r!r}")
        return out

    def single(self, node, allowed, what):
        """A one-key mapping ``{tag: body}``; returns ``(tag, body_node)``."""
        m = self.mapping(node, allowed, what=what)
        if len(m) != 1:
            self.fail(node, f"{what} needs exactly one of {', '.join(sorted(allowed))}")
        (tag, (_, body)), = m.items()
        return tag, body

    def string(self, node):
        if not isinstance(node, yaml.ScalarNode):
            self.fail(node, "expected a string")
        return node.value

    def number(self, node, positive=False, nonneg=False):
        if not isinstance(node, yaml.ScalarNode):
            self.fail(node, "expected a number")
        try:
            v = float(node.value)
        except ValueError:
            self.fail(node, f"expected a number, got {node.value!r}")
        if not math.isfinite(v):
            self.fail(node, "number must be finite")
        if positive and v <= 0:
            self.fail(node, "must be positive")
        if nonneg and v < 0:
            self.fail(node, "must be non-negative")
        return v

    def integer(self, node, minimum=None):
        if not isinstance(node, yaml.ScalarNode):
            self.fail(node, "expected an integer")
        try:
            v = int(node.value)
        except ValueError:
            self.fail(node, f"expected an integer, got {node.value!r}")
        if minimum is not None and v < minimum:
            self.fail(node, f"must be >= {minimum}")
        return v

    def vector(self, node):
        if isinstance(node, yaml.ScalarNode):
            return [self.number(node)]
        if not isinstance(node, yaml.SequenceNode) or not node.value:
            self.fail(node, "expected a number or a non-empty list of numbers")
        return [self.number(v) for v in node.value]

    def matrix(self, node):
        if not isinstance(node, yaml.SequenceNode) or not node.value:
            self.fail(node, "expected a non-empty list of rows")
        rows = [self.vector(r) for r in node.value]
        if len({len(r) for r in rows}) != 1:
            self.fail(node, "matrix rows must have equal length")
        return rows

    def guard(self, node, fn, *args):
        """Run a constructor and convert its validation errors into located ones."""
        try:
            return fn(*args)
        except InvalidArgumentError as exc:
            self.fail(node, str(exc))


# --------------------------------------------------------------------------
# random variables and processes


def _parse_rv(ctx, node) -> RandomVariableSpec:
    if isinstance(node, (yaml.ScalarNode, yaml.SequenceNode)):
        return ctx.guard(node, RandomVariableSpec.point_mass, ctx.vector(node))
    tag, body = ctx.single(node, {"point_mass", "normal", "uniform_box"}, "random variable")
    if tag == "point_mass":
        return ctx.guard(body, RandomVariableSpec.point_mass, ctx.vector(body))
    if tag == "normal":
        m = ctx.mapping(body, {"mean", "cov", "std"}, ("mean",))
        mean = ctx.vector(m["mean"][1])
        if ("cov" in m) == ("std" in m):
            ctx.fail(body, "normal needs exactly one of 'cov' or 'std'")
        if "cov" in m:
            cov = ctx.matrix(m["cov"][1])
        else:
            std = ctx.vector(m["std"][1])
            if len(std) != len(mean) or min(std) < 0:
                ctx.fail(m["std"][1], "std must be non-negative and match the mean")
            cov = np.diag(np.square(std)).tolist()
        return ctx.guard(body, RandomVariableSpec.normal, mean, cov)
    m = ctx.mapping(body, {"lower", "upper"}, ("lower", "upper"))
    return ctx.guard(body, RandomVariableSpec.uniform_box, ctx.vector(m["lower"][1]), ctx.vector(m["upper"][1]))


_PROCESS_TAGS = {"constant", "exp_transient", "ramp_to", "deterministic_path"}


def _parse_process(ctx, node) -> ProcessSpec:
    if isinstance(node, (yaml.ScalarNode, yaml.SequenceNode)):
        return ProcessSpec.constant(_parse_rv(ctx, node))
    keys = {k.value for k, _ in node.value} if isinstance(node, yaml.MappingNode) else set()
    if keys and keys <= {"point_mass", "normal", "uniform_box"}:
        return ProcessSpec.constant(_parse_rv(ctx, node))
    tag, body = ctx.single(node, _PROCESS_TAGS, "process")
    if tag == "constant":
        return ProcessSpec.constant(_parse_rv(ctx, body))
    if tag == "exp_transient":
        m = ctx.mapping(body, {"limit", "amplitude", "rate"}, ("limit", "amplitude", "rate"))
        return ctx.guard(
            body,
            ProcessSpec.exp_transient,
            _parse_rv(ctx, m["limit"][1]),
            _parse_rv(ctx, m["amplitude"][1]),
            ctx.number(m["rate"][1], positive=True),
        )
    if tag == "ramp_to":
        m = ctx.mapping(body, {"limit", "settle_time", "start"}, ("limit", "settle_time"))
        start = _parse_rv(ctx, m["start"][1]) if "start" in m else None
        return ctx.guard(
            body, ProcessSpec.ramp_to, _parse_rv(ctx, m["limit"][1]), ctx.number(m["settle_time"][1], positive=True), start
        )
    m = ctx.mapping(body, {"function", "limit"}, ("function", "limit"))
    fm = ctx.mapping(m["function"][1], None, ("family",))
    family = ctx.string(fm.pop("family")[1])
    params = {}
    for k, (_, v) in fm.items():
        params[k] = ctx.vector(v) if k == "amplitude" else ctx.number(v)
    fn = ctx.guard(m["function"][1], lambda: PathFunction.make(family, **params))
    return ctx.guard(body, ProcessSpec.deterministic_path, fn, ctx.vector(m["limit"][1]))


def _rv_data(rv: RandomVariableSpec):
    return rv.to_data()


def _process_data(spec: ProcessSpec):
    return spec.to_data()


# --------------------------------------------------------------------------
# the file


@dataclass(frozen=True)
class RunConfig:
    t0: float = 0.0
    t_end: float = 60.0
    method: str = "rk45"
    rtol: float = 1e-8
    atol: float = 1e-8
    max_step: float = 1.0
    h: float = 0.01
    max_steps: int = 1_000_000
    n_out: int = 601
    n_paths: int = 100
    master_seed: int = 0
    x0: RandomVariableSpec | None = None
    eps_drift: float = 1e-6
    eps_deriv: float = 1e-6
    window_fraction: float = 0.2

    def step_control(self) -> StepControl:
        return StepControl(self.t_end, self.method, self.rtol, self.atol, self.max_step, self.h, self.max_steps, self.n_out)

    def detection(self) -> Detection:
        return Detection(self.eps_drift, self.eps_deriv, self.window_fraction)


_RUN_FLOATS = {"t0", "t_end", "rtol", "atol", "max_step", "h"}
_RUN_INTS = {"max_steps", "n_out", "n_paths", "master_seed"}


@dataclass(frozen=True)
class ModelFile:
    """Plain-data content of a model file."""

    name: str
    dynamics: dict
    endogenous: tuple | None = None  # ((name, dim), ...)
    exogenous: dict = field(default_factory=dict)  # name -> ProcessSpec
    interventions: dict = field(default_factory=dict)  # name -> ProcessSpec
    run: RunConfig = field(default_factory=RunConfig)

    # ------------------------------------------------------------------ build

    def base_rdm(self) -> RandomDynamicalModel:
        d = self.dynamics
        kind = d["kind"]
        if kind == "preset":
            rdm = _PRESETS[d["preset"]](**d["params"])
        elif kind == "linear":
            endo = Variables.of(self.endogenous or [f"X{i + 1}" for i in range(len(d["B"]))])
            exo = Variables.of([(n, s.dimension) for n, s in self.exogenous.items()])
            B = np.array(d["B"], dtype=float)
            G = np.array(d["Gamma"], dtype=float) if d.get("Gamma") is not None else np.zeros((B.shape[0], exo.size))
            rdm = RandomDynamicalModel(endo, exo, LinearDynamics(B, G), dict(self.exogenous), {}, name=self.name)
        else:
            reactions = [Reaction.make(dict(r["reactants"]), dict(r["products"]), r["rate"]) for r in d["reactions"]]
            dyn = MassActionDynamics(d["species"], reactions, dict(d.get("inflow", ())), dict(d.get("outflow", ())))
            endo = Variables.of(list(d["species"]))
            exo = Variables.of([(n, s.dimension) for n, s in self.exogenous.items()])
            rdm = RandomDynamicalModel(endo, exo, dyn, dict(self.exogenous), {}, name=self.name)
        if kind == "preset":
            if self.endogenous is not None and tuple(self.endogenous) != tuple(zip(rdm.endogenous.names, rdm.endogenous.dims)):
                raise InvalidArgumentError(f"endogenous declaration does not match preset {d['preset']!r}")
            if self.exogenous:
                unknown = set(self.exogenous) - set(rdm.exogenous.names)
                if unknown:
                    raise InvalidArgumentError(f"preset {d['preset']!r} has no exogenous {sorted(unknown)}")
                procs = dict(rdm.exo_processes)
                procs.update(self.exogenous)
                rdm = RandomDynamicalModel(rdm.endogenous, rdm.exogenous, rdm.dynamics, procs, {}, name=self.name)
            elif rdm.name != self.name:
                rdm = RandomDynamicalModel(rdm.endogenous, rdm.exogenous, rdm.dynamics, rdm.exo_processes, {}, name=self.name)
        return rdm

    def to_rdm(self, extra_interventions=None) -> RandomDynamicalModel:
        rdm = self.base_rdm()
        xi = dict(self.interventions)
        xi.update(extra_interventions or {})
        if xi:
            rdm = intervene_rdm(rdm, list(xi), xi)
        return rdm

    def initial_condition(self, rdm=None) -> InitialCondition:
        rdm = rdm or self.base_rdm()
        x0 = self.run.x0 or RandomVariableSpec.point_mass(np.zeros(rdm.endogenous.size))
        return InitialCondition(self.run.t0, x0)

    def with_interventions(self, xi) -> "ModelFile":
        merged = dict(self.interventions)
        merged.update(xi)
        return replace(self, interventions=merged)

    # -------------------------------------------------------------- serialize

    def to_data(self) -> dict:
        out = {"name": self.name}
        if self.endogenous is not None:
            out["endogenous"] = [n if d == 1 else {"name": n, "dim": d} for n, d in self.endogenous]
        if self.exogenous:
            out["exogenous"] = {n: _process_data(s) for n, s in self.exogenous.items()}
        d = self.dynamics
        if d["kind"] == "preset":
            out["dynamics"] = {"preset": d["preset"]}
            if d["params"]:
                out["dynamics"]["params"] = {k: (list(v) if isinstance(v, tuple) else v) for k, v in d["params"].items()}
        elif d["kind"] == "linear":
            lin = {"B": [list(r) for r in d["B"]]}
            if d.get("Gamma") is not None:
                lin["Gamma"] = [list(r) for r in d["Gamma"]]
            out["dynamics"] = {"linear": lin}
        else:
            ma = {
                "species": list(d["species"]),
                "reactions": [
                    {"reactants": dict(r["reactants"]), "products": dict(r["products"]), "rate": r["rate"]} for r in d["reactions"]
                ],
            }
            if d.get("inflow"):
                ma["inflow"] = dict(d["inflow"])
            if d.get("outflow"):
                ma["outflow"] = dict(d["outflow"])
            out["dynamics"] = {"mass_action": ma}
        if self.interventions:
            out["interventions"] = {n: _process_data(s) for n, s in self.interventions.items()}
        run = {}
        defaults = RunConfig()
        for k in RunConfig.__dataclass_fields__:
            v = getattr(self.run, k)
            if k == "x0":
                if v is not None:
                    run["x0"] = _rv_data(v)
                continue
            if k in ("eps_drift", "eps_deriv", "window_fraction"):
                if v != getattr(defaults, k):
                    run.setdefault("detection", {})[k] = v
                continue
            if v != getattr(defaults, k):
                run[k] = v
        if run:
            out["run"] = run
        return out

    def dumps(self) -> str:
        return yaml.safe_dump(self.to_data(), sort_keys=False, default_flow_style=None)


def _preset_oscillator(d=5, masses=1.0, springs=1.0, frictions=1.0, L=6.0, length_std=0.0):
    return presets.oscillator_rdm(int(d), masses, springs, frictions, None, L, length_std)


_PRESETS = {
    "enzyme": lambda rates=presets.ENZYME_RATES: presets.enzyme_rdm(rates),
    "oscillator": _preset_oscillator,
}


def _parse_params(ctx, preset, node):
    m = ctx.mapping(node, PRESET_PARAMS[preset])
    out = {}
    for k, (_, v) in m.items():
        if k == "d":
            out[k] = ctx.integer(v, minimum=1)
        elif isinstance(v, yaml.SequenceNode):
            out[k] = tuple(ctx.vector(v))
        else:
            out[k] = ctx.number(v)
    return out


def _parse_dynamics(ctx, node) -> dict:
    m = ctx.mapping(node, {"preset", "params", "linear", "mass_action"})
    kinds = [k for k in ("preset", "linear", "mass_action") if k in m]
    if len(kinds) != 1:
        ctx.fail(node, "dynamics needs exactly one of 'preset', 'linear' or 'mass_action'")
    kind = kinds[0]
    if "params" in m and kind != "preset":
        ctx.fail(m["params"][0], "'params' only applies to presets")
    if kind == "preset":
        name = ctx.string(m["preset"][1])
        if name not in _PRESETS:
            ctx.fail(m["preset"][1], f"unknown preset {name!r} (known: {', '.join(sorted(_PRESETS))})")
        params = _parse_params(ctx, name, m["params"][1]) if "params" in m else {}
        return {"kind": "preset", "preset": name, "params": params}
    body = m[kind][1]
    if kind == "linear":
        lm = ctx.mapping(body, {"B", "Gamma"}, ("B",))
        B = tuple(tuple(r) for r in ctx.matrix(lm["B"][1]))
        G = tuple(tuple(r) for r in ctx.matrix(lm["Gamma"][1])) if "Gamma" in lm else None
        return {"kind": "linear", "B": B, "Gamma": G}
    mm = ctx.mapping(body, {"species", "reactions", "inflow", "outflow"}, ("species", "reactions"))
    sp = mm["species"][1]
    if not isinstance(sp, yaml.SequenceNode):
        ctx.fail(sp, "species must be a list of names")
    species = tuple(ctx.string(s) for s in sp.value)
    rn = mm["reactions"][1]
    if not isinstance(rn, yaml.SequenceNode):
        ctx.fail(rn, "reactions must be a list")
    reactions = []
    for r in rn.value:
        rm = ctx.mapping(r, {"reactants", "products", "rate"}, ("rate",))
        coeffs = {}
        for side in ("reactants", "products"):
            sm = ctx.mapping(rm[side][1], None) if side in rm else {}
            coeffs[side] = tuple((k, ctx.integer(v, minimum=0)) for k, (_, v) in sm.items())
        reactions.append({"reactants": coeffs["reactants"], "products": coeffs["products"], "rate": ctx.number(rm["rate"][1], nonneg=True)})
    flows = {}
    for side in ("inflow", "outflow"):
        if side in mm:
            flows[side] = tuple((k, ctx.number(v, nonneg=True)) for k, (_, v) in ctx.mapping(mm[side][1], None).items())
    return {"kind": "mass_action", "species": species, "reactions": tuple(reactions), **flows}


def _parse_vars(ctx, node):
    if not isinstance(node, yaml.SequenceNode):
        ctx.fail(node, "endogenous must be a list")
    out = []
    for item in node.value:
        if isinstance(item, yaml.ScalarNode):
            out.append((item.value, 1))
        else:
            m = ctx.mapping(item, {"name", "dim"}, ("name",))
            out.append((ctx.string(m["name"][1]), ctx.integer(m["dim"][1], minimum=1) if "dim" in m else 1))
    if len({n for n, _ in out}) != len(out):
        ctx.fail(node, "duplicate endogenous names")
    return tuple(out)


def _parse_run(ctx, node) -> RunConfig:
    allowed = _RUN_FLOATS | _RUN_INTS | {"method", "x0", "detection"}
    m = ctx.mapping(node, allowed)
    kw = {}
    for k, (_, v) in m.items():
        if k in _RUN_FLOATS:
            kw[k] = ctx.number(v)
        elif k in _RUN_INTS:
            kw[k] = ctx.integer(v, minimum=0 if k == "master_seed" else 1)
        elif k == "method":
            kw[k] = ctx.string(v)
            if kw[k] not in ("rk45", "rk4"):
                ctx.fail(v, "method must be 'rk45' or 'rk4'")
        elif k == "x0":
            kw[k] = _parse_rv(ctx, v)
        else:
            dm = ctx.mapping(v, {"eps_drift", "eps_deriv", "window_fraction"})
            for dk, (_, dv) in dm.items():
                kw[dk] = ctx.number(dv, positive=True)
    run = RunConfig(**kw)
    if not run.t_end > run.t0:
        ctx.fail(m["t_end"][1] if "t_end" in m else node, "t_end must exceed t0")
    ctx.guard(node, run.step_control)
    ctx.guard(node, run.detection)
    return run


def _parse_process_map(ctx, node):
    m = ctx.mapping(node, None)
    return {k: _parse_process(ctx, v) for k, (_, v) in m.items()}


def loads(text: str, source="<string>") -> ModelFile:
    """Parse model-file text; raises :class:`ModelFileError` with a location."""
    ctx = _Ctx(source)
    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.MarkedYAMLError as exc:
        m = exc.problem_mark
        raise ModelFileError(f"YAML syntax error: {exc.problem}", m.line + 1 if m else None, m.column + 1 if m else None, source) from None
    if root is None:
        raise ModelFileError("empty model file", 1, 1, source)
    m = ctx.mapping(root, {"name", "endogenous", "exogenous", "dynamics", "interventions", "run"}, ("name", "dynamics"), "model file mapping")
    name = ctx.string(m["name"][1])
    dynamics = _parse_dynamics(ctx, m["dynamics"][1])
    endo = _parse_vars(ctx, m["endogenous"][1]) if "endogenous" in m else None
    exo = _parse_process_map(ctx, m["exogenous"][1]) if "exogenous" in m else {}
    xi = _parse_process_map(ctx, m["interventions"][1]) if "interventions" in m else {}
    run = _parse_run(ctx, m["run"][1]) if "run" in m else RunConfig()
    mf = ModelFile(name, dynamics, endo, exo, xi, run)
    # semantic validation, located at the most specific block available
    try:
        rdm = mf.base_rdm()
    except InvalidArgumentError as exc:
        ctx.fail(m["dynamics"][1], str(exc))
    if xi:
        try:
            mf.to_rdm()
        except InvalidArgumentError as exc:
            ctx.fail(m["interventions"][1], str(exc))
    if run.x0 is not None and run.x0.dimension != rdm.endogenous.size:
        ctx.fail(m["run"][1], f"x0 has dimension {run.x0.dimension}, model has {rdm.endogenous.size}")
    return mf


def load(path) -> ModelFile:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read(), source=str(path))


def dump(mf: ModelFile, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(mf.dumps())


def builtin_names() -> list:
    return sorted(p.name[:-5] for p in resources.files("rdm2scm").joinpath("models").iterdir() if p.name.endswith(".yaml"))


def load_builtin(name: str) -> ModelFile:
    """Load a shipped model file by name (``enzyme``, ``oscillator``, ...)."""
    ref = resources.files("rdm2scm").joinpath("models", f"{name}.yaml")
    if not ref.is_file():
        raise InvalidArgumentError(f"no built-in model {name!r} (available: {', '.join(builtin_names())})")
    return loads(ref.read_text(encoding="utf-8"), source=f"builtin:{name}")


def resolve(spec: str) -> ModelFile:
    """A path to a model file, or ``builtin:<name>`` / a bare built-in name."""
    import os

    if spec.startswith("builtin:"):
        return load_builtin(spec[len("builtin:"):])
    if os.path.exists(spec):
        return load(spec)
    if spec in builtin_names():
        return load_builtin(spec)
    raise InvalidArgumentError(f"model file {spec!r} not found")
