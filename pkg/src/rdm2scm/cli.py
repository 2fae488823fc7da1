"""Command line interface: ``rdm2scm <command> ...``.

Exit codes: 0 success, 1 unexpected error, 2 invalid arguments, 3 model file
error, 4 a check ran and failed, 5 integration or empty-result failure,
6 structural failure (no unique solution, unresolvable self-loop or
marginalization).
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass, field

import numpy as np

from . import presets
from .analysis import ci_test_columns
from .errors import (
    CannotMarginalizeError,
    CannotResolveError,
    DegenerateDataError,
    EmptyResultError,
    InvalidArgumentError,
    ModelFileError,
    NoUniqueSolutionError,
    NonConvergenceError,
    RDMError,
)
from .graph import to_dot
from .modelfile import ModelFile, resolve
from .process import ProcessSpec, RandomVariableSpec
from .rdm import LinearDynamics, MassActionDynamics, functional_graph_rdm
from .scm import (
    FromRDMMechanism,
    LinearMechanism,
    check_commute,
    format_linear_equations,
    functional_graph_scm,
    intervene_scm,
    marginalize_linear,
    remove_self_loops_linear,
    residual,
    scm_from_rdm,
    solve_linear_scm,
)
from .simulate import (
    equilibrium_samples,
    integrate_path,
    read_equilibrium_csv,
    run_ensemble,
    write_equilibrium_csv,
    write_trajectories_csv,
)

EXIT_OK, EXIT_ERROR, EXIT_USAGE, EXIT_MODEL, EXIT_CHECK, EXIT_NUMERIC, EXIT_STRUCTURE = 0, 1, 2, 3, 4, 5, 6


class CheckFailed(RDMError):
    pass


class Inapplicable(InvalidArgumentError):
    pass


@dataclass
class ScenarioReport:
    command: str
    model: str = ""
    seed: int | None = None
    outputs: list = field(default_factory=list)
    n_paths: int | None = None
    n_equilibrated: int | None = None
    verdicts: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def to_data(self) -> dict:
        return {k: v for k, v in self.__dict__.items() if v not in (None, [], {})}

    def write(self, out_dir, name="report.json"):
        path = os.path.join(out_dir, name)
        self.outputs.append(name)
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_data(), fh, indent=2, sort_keys=True)
            fh.write("\n")
        return path


# --------------------------------------------------------------------------
# argument helpers


def _parse_value(text, name):
    """``1.5``, ``1,2`` (vector), ``normal:MEAN:STD`` or ``uniform:LO:HI``."""
    try:
        if text.startswith("normal:"):
            _, m, s = text.split(":")
            return RandomVariableSpec.normal([float(m)], [[float(s) ** 2]])
        if text.startswith("uniform:"):
            _, lo, hi = text.split(":")
            return RandomVariableSpec.uniform_box([float(lo)], [float(hi)])
        return RandomVariableSpec.point_mass([float(v) for v in text.split(";")])
    except ValueError:
        raise InvalidArgumentError(f"cannot parse intervention value {text!r} for {name!r}") from None


def parse_interventions(items, default=None) -> dict:
    """``NAME=VALUE`` items (comma separated or repeated) to constant processes.

    A bare ``NAME`` takes ``default`` (only structure-level commands allow it).
    """
    out = {}
    for item in items or []:
        for part in item.split(","):
            part = part.strip()
            if not part:
                continue
            if "=" in part:
                name, value = part.split("=", 1)
                rv = _parse_value(value.strip(), name.strip())
            elif default is not None:
                name, rv = part, RandomVariableSpec.point_mass([default])
            else:
                raise InvalidArgumentError(f"intervention {part!r} needs a value (NAME=VALUE)")
            out[name.strip()] = ProcessSpec.constant(rv)
    return out


def expand_names(tokens, names) -> list:
    """Exact names, or a prefix standing for ``<prefix><digits>`` variables."""
    out = []
    for tok in tokens:
        for t in tok.split(","):
            t = t.strip()
            if not t:
                continue
            if t in names:
                out.append(t)
                continue
            hits = [n for n in names if re.fullmatch(re.escape(t) + r"\d+", n)]
            if not hits:
                raise InvalidArgumentError(f"no variable matches {t!r}")
            out.extend(hits)
    return [n for n in names if n in set(out)]


def _model(args) -> ModelFile:
    mf = resolve(args.model)
    run = mf.run
    kw = {}
    if getattr(args, "seed", None) is not None:
        kw["master_seed"] = args.seed
    if getattr(args, "paths", None) is not None:
        kw["n_paths"] = args.paths
    if getattr(args, "t_end", None) is not None:
        kw["t_end"] = args.t_end
    if kw:
        from dataclasses import replace

        mf = replace(mf, run=replace(run, **kw))
        mf.run.step_control()
    return mf


def _out_dir(args):
    out = args.out or "."
    os.makedirs(out, exist_ok=True)
    return out


def _write_text(out, name, text, report):
    with open(os.path.join(out, name), "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    report.outputs.append(name)


# --------------------------------------------------------------------------
# serialization of SCMs


def _dynamics_data(dyn):
    if isinstance(dyn, LinearDynamics):
        return {"linear": {"B": dyn.B.tolist(), "Gamma": dyn.Gamma.tolist()}}
    if isinstance(dyn, MassActionDynamics):
        return {
            "mass_action": {
                "species": list(dyn.species),
                "reactions": [{"reactants": dict(r.reactants), "products": dict(r.products), "rate": r.rate} for r in dyn.reactions],
                "inflow": dyn.inflow,
                "outflow": dyn.outflow,
            }
        }
    return {"custom": repr(dyn)}


def scm_to_data(scm) -> dict:
    mech = scm.mechanism
    data = {
        "name": scm.name,
        "endogenous": [[n, d] for n, d in zip(scm.endogenous.names, scm.endogenous.dims)],
        "exogenous": {n: rv.to_data() for n, rv in scm.exo_spec.items()},
        "fixed": {n: rv.to_data() for n, rv in mech.fixed.items()},
    }
    if isinstance(mech, LinearMechanism):
        data["mechanism"] = {"linear": {"A": mech.A.tolist(), "Gamma": mech.Gamma.tolist(), "b": mech.b.tolist()}}
    elif isinstance(mech, FromRDMMechanism):
        data["mechanism"] = {"from_rdm": _dynamics_data(mech.dynamics)}
    else:
        data["mechanism"] = {"custom": {k: sorted(v) for k, v in sorted(mech.parents.items())}}
    return data


def _fmt_coef(c):
    return f"{c:.6g}"


def format_mass_action_equations(scm) -> str:
    """``x = x + F(x)`` rows of a mass-action SCM as text."""
    mech = scm.mechanism
    dyn = mech.dynamics
    lines = []
    for i, s in enumerate(dyn.species):
        if s in mech.fixed:
            lines.append(f"{s} = do({list(mech.fixed[s].params[0])})")
            continue
        terms = []
        for q in range(dyn.orders.shape[0]):
            c = dyn.net[q, i] * dyn.rates[q]
            if c == 0:
                continue
            mon = "*".join(f"{sp}" if o == 1 else f"{sp}^{int(o)}" for sp, o in zip(dyn.species, dyn.orders[q]) if o)
            body = f"{_fmt_coef(abs(c))}" + (f"*{mon}" if mon else "")
            terms.append(("- " if c < 0 else "+ ") + body)
        lines.append(f"{s} = {s} " + " ".join(terms))
    return "\n".join(lines) + "\n"


def format_equations(scm) -> str:
    if scm.is_linear:
        return format_linear_equations(scm)
    if isinstance(scm.mechanism, FromRDMMechanism) and isinstance(scm.mechanism.dynamics, MassActionDynamics):
        return format_mass_action_equations(scm)
    return "".join(f"{n} = f_{n}({', '.join(sorted(p))})\n" for n, p in scm.mechanism.parents.items())


# --------------------------------------------------------------------------
# shared pipeline pieces


def _is_enzyme_preset(mf: ModelFile) -> bool:
    return mf.dynamics["kind"] == "preset" and mf.dynamics["preset"] == "enzyme"


def build_scm(mf: ModelFile, rdm, marginalize=(), resolve_loops=False, intervene_after=None):
    """Associated SCM with optional marginalization and self-loop removal."""
    scm = scm_from_rdm(rdm)
    if marginalize:
        scm = marginalize_linear(scm, expand_names(marginalize, list(scm.endogenous.names)))
    if resolve_loops:
        if scm.is_linear:
            scm = remove_self_loops_linear(scm)
        elif _is_enzyme_preset(mf):
            loop_free = presets.enzyme_loop_free_scm(mf.dynamics["params"].get("rates", presets.ENZYME_RATES))
            fixed = {n: s.limit_spec() for n, s in rdm.intervened.items()}
            scm = intervene_scm(loop_free, list(fixed), fixed) if fixed else loop_free
        else:
            raise CannotResolveError("self-loop removal is only available for linear models and the enzyme preset")
    return scm


def _simulate(mf: ModelFile, rdm, workers, keep=True):
    init = mf.initial_condition(rdm)
    return run_ensemble(
        rdm, init, mf.run.step_control(), mf.run.n_paths, mf.run.master_seed, mf.run.detection(), keep, workers
    )


# --------------------------------------------------------------------------
# commands


def cmd_simulate(args) -> ScenarioReport:
    mf = _model(args)
    rdm = mf.to_rdm(parse_interventions(args.intervene))
    out = _out_dir(args)
    rep = ScenarioReport("simulate", mf.name, mf.run.master_seed)
    ens = _simulate(mf, rdm, args.workers, keep=not args.no_trajectories)
    if not args.no_trajectories:
        write_trajectories_csv(os.path.join(out, "trajectories.csv"), [p.trajectory for p in ens.paths if p.trajectory is not None], rdm.endogenous.labels())
        rep.outputs.append("trajectories.csv")
    write_equilibrium_csv(os.path.join(out, "equilibrium.csv"), ens)
    rep.outputs.append("equilibrium.csv")
    rep.n_paths, rep.n_equilibrated = ens.n_paths, ens.n_equilibrated
    errors = sorted({p.status.error for p in ens.paths if p.status.error})
    if errors:
        rep.notes.append(f"{len([p for p in ens.paths if p.status.error])} paths stopped early: {errors[0]}")
    if ens.n_equilibrated:
        X = ens.equilibrium_matrix
        rep.verdicts["equilibrium_mean"] = dict(zip(rdm.endogenous.labels(), X.mean(axis=0).tolist()))
        rep.verdicts["equilibrium_std"] = dict(zip(rdm.endogenous.labels(), X.std(axis=0, ddof=1).tolist() if len(X) > 1 else [0.0] * X.shape[1]))
    rep.write(out)
    return rep


def cmd_derive_scm(args) -> ScenarioReport:
    mf = _model(args)
    rdm = mf.to_rdm(parse_interventions(args.intervene))
    out = _out_dir(args)
    rep = ScenarioReport("derive-scm", mf.name)
    scm = build_scm(mf, rdm, args.marginalize or (), args.resolve_self_loops)
    _write_text(out, "scm.json", json.dumps(scm_to_data(scm), indent=2, sort_keys=True) + "\n", rep)
    _write_text(out, "equations.txt", format_equations(scm), rep)
    _write_text(out, "scm_graph.dot", to_dot(functional_graph_scm(scm), name=f"{mf.name}_scm"), rep)
    if scm.is_linear:
        try:
            solve_linear_scm(scm, scm.sample_exogenous(0), seed=0)
            rep.verdicts["uniquely_solvable"] = True
        except NoUniqueSolutionError as exc:
            rep.verdicts["uniquely_solvable"] = False
            rep.notes.append(str(exc))
    else:
        try:
            solve_linear_scm(scm, scm.sample_exogenous(0), seed=0)
        except NoUniqueSolutionError as exc:
            rep.verdicts["uniquely_solvable"] = False
            rep.notes.append(f"linear solver: {exc}")
        except InvalidArgumentError:
            pass
    rep.write(out)
    return rep


def _check_thm2(mf, rdm, args, rep):
    ens = _simulate(mf, rdm, args.workers, keep=False)
    scm = scm_from_rdm(rdm)
    eps = mf.run.detection().eps_accept
    res = [(p.seed, residual(scm, p.status.x_star, p.e_star, p.seed)) for p in ens.paths if p.status.equilibrated]
    rep.n_paths, rep.n_equilibrated = ens.n_paths, ens.n_equilibrated
    if not res:
        raise EmptyResultError("no path equilibrated; nothing to check")
    worst = max(r for _, r in res)
    rep.verdicts.update({"check": "thm2", "eps_accept": eps, "max_residual": worst, "passed": worst <= eps})
    rep.verdicts["residuals"] = {str(s): r for s, r in res}
    return worst <= eps


def _check_prop1(mf, rdm, args, rep):
    not_const = [n for n, s in list(rdm.intervened.items()) + list(rdm.exo_processes.items()) if not s.is_time_constant]
    if not_const:
        raise Inapplicable(f"prop1 replays a constant path and needs time-constant processes; not constant: {not_const}")
    scm = scm_from_rdm(rdm)
    init = mf.initial_condition(rdm)
    ctrl = mf.run.step_control()
    n = mf.run.n_paths
    from .process import derive_path_seed

    seeds = [derive_path_seed(mf.run.master_seed, i) for i in range(n)]
    sols = []
    try:
        for s in seeds:
            e = scm.sample_exogenous(s)
            sols.append((s, solve_linear_scm(scm, e, seed=s), e))
        rep.notes.append("solutions from the linear solve")
    except (NoUniqueSolutionError, InvalidArgumentError):
        ens = _simulate(mf, rdm, args.workers, keep=False)
        sols = [(p.seed, p.status.x_star, p.e_star) for p in ens.paths if p.status.equilibrated]
        rep.notes.append("solutions taken from equilibrated ensemble paths")
        if not sols:
            raise EmptyResultError("no SCM solutions available")
    tol = mf.run.detection().eps_accept
    worst_drift, worst_res = 0.0, 0.0
    for s, x, e in sols:
        worst_res = max(worst_res, residual(scm, x, e, s))
        tr = integrate_path(rdm, init, ctrl, s, x0=x)
        worst_drift = max(worst_drift, float(np.max(np.linalg.norm(tr.values - x, axis=1))))
    ok = worst_drift <= tol and worst_res <= tol
    rep.verdicts.update({"check": "prop1", "n_solutions": len(sols), "max_drift": worst_drift, "max_residual": worst_res, "tolerance": tol, "passed": ok})
    return ok


def _check_thm4(mf, args, rep):
    xi = dict(mf.interventions)
    xi.update(parse_interventions(args.intervene))
    if not xi:
        raise Inapplicable("thm4 needs an intervention (--intervene NAME=VALUE or an interventions block)")
    base = mf.base_rdm()
    r = check_commute(base, list(xi), xi, seeds=range(args.probe_seeds))
    rep.verdicts.update({"check": "thm4", "intervened": sorted(xi), "max_probe_difference": r.max_probe_difference, "passed": r.equal})
    if r.reasons:
        rep.notes.extend(r.reasons)
    return r.equal


def cmd_check(args) -> ScenarioReport:
    mf = _model(args)
    out = _out_dir(args)
    rep = ScenarioReport("check", mf.name, mf.run.master_seed)
    if args.check == "thm4":
        ok = _check_thm4(mf, args, rep)
    else:
        rdm = mf.to_rdm(parse_interventions(args.intervene))
        ok = _check_thm2(mf, rdm, args, rep) if args.check == "thm2" else _check_prop1(mf, rdm, args, rep)
    rep.write(out, f"check_{args.check}.json")
    if not ok:
        raise CheckFailed(f"{args.check} failed on {mf.name}")
    return rep


def cmd_ci_test(args) -> ScenarioReport:
    cols, data = read_equilibrium_csv(args.csv)
    given = [z for z in (args.given or "").split(",") if z]
    res = ci_test_columns(cols, data, args.i, args.j, given, args.alpha)
    rep = ScenarioReport("ci-test", os.path.basename(args.csv))
    rep.verdicts = {
        "i": args.i,
        "j": args.j,
        "given": given,
        "statistic": res.statistic,
        "n": res.n,
        "z_score": res.z_score,
        "p_value": res.p_value,
        "alpha": res.alpha,
        "independent": res.independent,
    }
    print(res.record(f"{args.i} _||_ {args.j} | {{{','.join(given)}}}:"))
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        rep.write(args.out, "ci_test.json")
    return rep


def graph_dot(mf: ModelFile, level, intervene=(), marginalize=(), resolve_loops=False) -> str:
    xi = parse_interventions(intervene, default=0.0)
    if level == "rdm":
        if marginalize or resolve_loops:
            raise InvalidArgumentError("--marginalize and --resolve-self-loops apply to --scm graphs")
        return to_dot(functional_graph_rdm(mf.to_rdm(xi)), name=f"{mf.name}_rdm")
    # intervene on the SCM after rewriting, which matches the figures' reading
    base = mf.to_rdm()
    scm = build_scm(mf, base, marginalize, resolve_loops)
    if xi:
        scm = intervene_scm(scm, list(xi), {n: s.limit_spec() for n, s in xi.items()})
    return to_dot(functional_graph_scm(scm), name=f"{mf.name}_scm")


def cmd_graph(args) -> ScenarioReport:
    mf = _model(args)
    level = "scm" if args.scm else "rdm"
    dot = graph_dot(mf, level, args.intervene, args.marginalize or (), args.resolve_self_loops)
    rep = ScenarioReport("graph", mf.name)
    if args.out and args.out != "-":
        d = os.path.dirname(args.out)
        if d:
            os.makedirs(d, exist_ok=True)
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(dot)
        rep.outputs.append(args.out)
    else:
        sys.stdout.write(dot)
    return rep


# --------------------------------------------------------------------------
# figure reproduction

_C_STAR = presets.ENZYME_RATES[0] / presets.ENZYME_RATES[3]  # k_i / k_c

FIGURES = {
    "fig2": ("graph", "oscillator", dict(level="rdm")),
    "fig3a": ("graph", "oscillator", dict(level="scm", marginalize=["P"], resolve_loops=True)),
    "fig3b": ("graph", "oscillator", dict(level="scm", marginalize=["P"], resolve_loops=True, intervene=["Q3"])),
    "fig5a": ("simulate", "enzyme", {}),
    "fig5b": ("simulate", "enzyme", dict(intervene=[f"C={_C_STAR!r}"])),
    "fig5c": ("simulate", "enzyme", dict(intervene=[f"C={_C_STAR!r},S=1.0"])),
    "fig7a": ("graph", "enzyme", dict(level="scm", resolve_loops=True, intervene=["C"])),
    "fig7b": ("graph", "enzyme", dict(level="scm", resolve_loops=True, intervene=["C,S"])),
}


def cmd_reproduce(args) -> ScenarioReport:
    kind, model, opts = FIGURES[args.figure]
    out = _out_dir(args)
    rep = ScenarioReport("reproduce", model)
    rep.verdicts["figure"] = args.figure
    if kind == "graph":
        mf = _model(argparse.Namespace(model=model))
        dot = graph_dot(mf, opts["level"], opts.get("intervene", ()), opts.get("marginalize", ()), opts.get("resolve_loops", False))
        _write_text(out, f"{args.figure}.dot", dot, rep)
        if opts["level"] == "scm" and opts.get("marginalize"):
            scm = build_scm(mf, mf.to_rdm(), opts["marginalize"], True)
            xi = parse_interventions(opts.get("intervene", ()), default=0.0)
            if xi:
                scm = intervene_scm(scm, list(xi), {n: s.limit_spec() for n, s in xi.items()})
            _write_text(out, f"{args.figure}_equations.txt", format_equations(scm), rep)
    else:
        ns = argparse.Namespace(
            model=model, seed=args.seed, paths=args.paths, t_end=args.t_end, out=out, workers=args.workers,
            intervene=opts.get("intervene"), no_trajectories=False,
        )
        sub = cmd_simulate(ns)
        rep.seed = sub.seed
        rep.outputs.extend(sub.outputs)
        rep.n_paths, rep.n_equilibrated = sub.n_paths, sub.n_equilibrated
        rep.verdicts.update(sub.verdicts)
        rep.outputs.remove("report.json")
    rep.write(out, f"{args.figure}_report.json")
    return rep


# --------------------------------------------------------------------------
# entry point


def _common(p, model=True):
    if model:
        p.add_argument("model", help="model file path or built-in name (enzyme, oscillator, ...)")
    p.add_argument("--seed", type=int, help="master seed (overrides the model file)")
    p.add_argument("--paths", type=int, help="number of sample paths")
    p.add_argument("--t-end", dest="t_end", type=float, help="integration horizon")
    p.add_argument("--out", help="output directory")
    p.add_argument("--workers", type=int, default=1, help="threads for the ensemble (results do not depend on it)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rdm2scm", description="Random dynamical models and their associated SCMs")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="integrate an ensemble and write trajectory/equilibrium CSV")
    _common(p)
    p.add_argument("--intervene", action="append", help="NAME=VALUE[,NAME=VALUE]; VALUE may be normal:M:S or uniform:A:B")
    p.add_argument("--no-trajectories", action="store_true", help="skip the trajectory CSV")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("derive-scm", help="write the associated SCM, its equations and graph")
    _common(p)
    p.add_argument("--intervene", action="append")
    p.add_argument("--marginalize", action="append", help="names or prefixes to eliminate (e.g. P)")
    p.add_argument("--resolve-self-loops", action="store_true")
    p.set_defaults(func=cmd_derive_scm)

    p = sub.add_parser("check", help="run a correspondence check: thm2, prop1 or thm4")
    _common(p)
    p.add_argument("check", choices=["thm2", "prop1", "thm4"])
    p.add_argument("--intervene", action="append")
    p.add_argument("--probe-seeds", type=int, default=4)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("ci-test", help="Fisher z partial-correlation test on an equilibrium CSV")
    p.add_argument("csv")
    p.add_argument("i")
    p.add_argument("j")
    p.add_argument("--given", default="", help="comma separated conditioning columns")
    p.add_argument("--alpha", type=float, default=0.01)
    p.add_argument("--out")
    p.set_defaults(func=cmd_ci_test)

    p = sub.add_parser("graph", help="functional graph as DOT")
    _common(p)
    lvl = p.add_mutually_exclusive_group()
    lvl.add_argument("--rdm", action="store_true", help="graph of the dynamical model (default)")
    lvl.add_argument("--scm", action="store_true", help="graph of the associated SCM")
    p.add_argument("--intervene", action="append", help="NAME[=VALUE], comma separated")
    p.add_argument("--marginalize", action="append")
    p.add_argument("--resolve-self-loops", action="store_true")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("reproduce", help="regenerate the data behind a figure")
    p.add_argument("figure", choices=sorted(FIGURES))
    _common(p, model=False)
    p.set_defaults(func=cmd_reproduce)
    return ap


def exit_code(exc) -> int:
    if isinstance(exc, CheckFailed):
        return EXIT_CHECK
    if isinstance(exc, ModelFileError):
        return EXIT_MODEL
    if isinstance(exc, (NonConvergenceError, EmptyResultError)):
        return EXIT_NUMERIC
    if isinstance(exc, (NoUniqueSolutionError, CannotResolveError, CannotMarginalizeError)):
        return EXIT_STRUCTURE
    if isinstance(exc, (InvalidArgumentError, DegenerateDataError)):
        return EXIT_USAGE
    return EXIT_ERROR


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        rep = args.func(args)
    except RDMError as exc:
        print(f"rdm2scm {args.command}: error: {exc}", file=sys.stderr)
        return exit_code(exc)
    except OSError as exc:
        print(f"rdm2scm {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    summary = [f"{args.command} {rep.model}".strip()]
    if rep.n_paths is not None:
        summary.append(f"equilibrated {rep.n_equilibrated}/{rep.n_paths}")
    if "passed" in rep.verdicts:
        summary.append("PASS")
    if rep.outputs and args.command != "graph":
        summary.append("wrote " + ", ".join(rep.outputs))
    if args.command != "ci-test" and not (args.command == "graph" and not rep.outputs):
        print(": ".join(summary[:1]) + (" " + "; ".join(summary[1:]) if len(summary) > 1 else ""))
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
