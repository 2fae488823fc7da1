from pathlib import Path

import numpy as np
import pytest

from rdm2scm import InvalidArgumentError, ModelFileError, ProcessSpec, StepControl
from rdm2scm import modelfile
from rdm2scm.presets import enzyme_rdm, oscillator_rdm

GOLDEN = Path(__file__).parent / "golden"


def test_builtins_round_trip():
    names = modelfile.builtin_names()
    assert {"enzyme", "oscillator", "oscillator_ci", "oscillator_symmetric"} <= set(names)
    for name in names:
        mf = modelfile.load_builtin(name)
        again = modelfile.loads(mf.dumps())
        assert again == mf
        assert again.to_rdm() == mf.to_rdm()
        assert again.dumps() == mf.dumps()


def test_builtin_content():
    enz = modelfile.load_builtin("enzyme")
    assert enz.to_rdm() == enzyme_rdm()
    assert enz.run.t_end == 60.0 and enz.run.n_paths == 100
    osc = modelfile.load_builtin("oscillator")
    assert osc.to_rdm() == oscillator_rdm(length_std=0.1)
    sym = modelfile.load_builtin("oscillator_symmetric").to_rdm()
    assert all(p.limit_spec().is_degenerate for p in sym.exo_processes.values())


def test_golden_dump():
    mf = modelfile.load(GOLDEN / "linear_demo.yaml")
    assert mf.dumps() == (GOLDEN / "linear_demo.dumped.yaml").read_text()
    assert modelfile.load(GOLDEN / "linear_demo.dumped.yaml") == mf


def test_golden_semantics():
    mf = modelfile.load(GOLDEN / "linear_demo.yaml")
    rdm = mf.to_rdm()
    assert rdm.endogenous.names == ("X", "Y") and rdm.K == ("Y",)
    np.testing.assert_array_equal(rdm.dynamics.B, [[-1, 0.5], [0, -2]])
    assert rdm.exo_processes["U"].kind == "exp_transient"
    assert rdm.exo_processes["U"].limit.params[1][0][0] == pytest.approx(0.04)
    assert mf.run.step_control() == StepControl(t_end=30.0, rtol=1e-9)
    assert mf.run.detection().eps_drift == 1e-7 and mf.run.detection().eps_deriv == 1e-6
    assert mf.run.master_seed == 7 and mf.run.n_paths == 8


def test_mass_action_form_equals_preset():
    mf = modelfile.load(GOLDEN / "enzyme_mass_action.yaml")
    assert mf.to_rdm() == enzyme_rdm()
    assert modelfile.loads(mf.dumps()) == mf


def test_shorthands_and_overrides():
    text = """
name: osc
dynamics: {preset: oscillator, params: {d: 2, springs: [1, 2, 1]}}
exogenous:
  l0: 1.5
  l1: {normal: {mean: 2, cov: [[0.01]]}}
interventions:
  Q1: [0.7]
"""
    rdm = modelfile.loads(text).to_rdm()
    assert rdm.exo_processes["l0"] == ProcessSpec.constant(modelfile.RandomVariableSpec.point_mass([1.5]))
    assert rdm.exo_processes["l1"].limit.kind == "normal"
    assert rdm.exo_processes["l2"].limit.params[0] == (2.0,)  # preset default L/(d+1)
    assert rdm.K == ("Q1",)
    mf = modelfile.loads(text)
    assert mf.with_interventions({"Q2": ProcessSpec.constant(modelfile.RandomVariableSpec.point_mass([1.0]))}).to_rdm().K == ("Q1", "Q2")


def test_deterministic_path_process():
    text = """
name: d
dynamics: {linear: {B: [[-1]], Gamma: [[1]]}}
exogenous:
  U: {deterministic_path: {function: {family: damped_cosine, amplitude: [1], rate: 0.5, omega: 2, phase: 0}, limit: [3]}}
"""
    mf = modelfile.loads(text)
    assert mf.to_rdm().exo_processes["U"].limit_spec().params[0] == (3.0,)
    assert modelfile.loads(mf.dumps()) == mf


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        ("name: a\ndynamics: {preset: enzyme}\nbogus: 1\n", 3, "unknown key 'bogus'"),
        ("name: a\ndynamics:\n  preset: enzym\n", 3, "unknown preset"),
        ("name: a\ndynamics: {preset: enzyme}\nrun:\n  t_end: 0\n", 4, "t_end must exceed t0"),
        ("name: a\ndynamics: {preset: enzyme}\nrun: {n_paths: abc}\n", 3, "expected an integer"),
        ("name: a\ndynamics: {preset: enzyme}\nrun: {rtol: -1}\n", 3, "tolerances"),
        ("name: a\ndynamics: {preset: enzyme}\nrun: {x0: [1, 2]}\n", 3, "x0 has dimension 2"),
        ("name: a\ndynamics: {preset: enzyme, params: {rates: [1, 2]}}\n", 2, "five positive"),
        ("name: a\ndynamics: {preset: enzyme}\ninterventions: {Z: 1}\n", 3, "non-endogenous"),
        ("name: a\ndynamics: {linear: {B: [[1, 2], [3]]}}\n", 2, "equal length"),
        ("name: a\nname: b\ndynamics: {preset: enzyme}\n", 2, "duplicate key"),
        ("name: a\ndynamics: {preset: enzyme, linear: {B: [[1]]}}\n", 2, "exactly one"),
        ("name: a\ndynamics: {preset: oscillator}\nexogenous:\n  l0: {normal: {mean: 0, cov: [[1, 2]]}}\n", 4, "covariance"),
        ("name: a\ndynamics: {preset: oscillator}\nexogenous:\n  l0: {gamma: 1}\n", 4, "unknown key 'gamma'"),
        ("name: a\ndynamics: [1\n", 3, "YAML syntax"),
        ("dynamics: {preset: enzyme}\n", 1, "missing required key 'name'"),
    ],
)
def test_located_errors(text, line, fragment):
    with pytest.raises(ModelFileError) as exc:
        modelfile.loads(text, source="m.yaml")
    assert exc.value.line == line
    assert fragment in str(exc.value)
    assert str(exc.value).startswith(f"m.yaml:{line}:")


def test_empty_and_missing():
    with pytest.raises(ModelFileError):
        modelfile.loads("")
    with pytest.raises(InvalidArgumentError):
        modelfile.resolve("no_such_model")
    with pytest.raises(InvalidArgumentError):
        modelfile.load_builtin("nope")
    assert modelfile.resolve("builtin:enzyme") == modelfile.resolve("enzyme")
    assert modelfile.resolve(str(GOLDEN / "linear_demo.yaml")).name == "linear_demo"


def test_file_round_trip(tmp_path):
    mf = modelfile.load_builtin("oscillator_ci")
    modelfile.dump(mf, tmp_path / "m.yaml")
    assert modelfile.load(tmp_path / "m.yaml") == mf
