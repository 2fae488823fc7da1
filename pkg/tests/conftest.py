import numpy as np
import pytest

from rdm2scm import InitialCondition, ProcessSpec, RandomVariableSpec, StepControl
from rdm2scm.presets import enzyme_rdm, oscillator_rdm

# lines collected by test_acceptance.py, echoed in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)


def point(*v):
    return RandomVariableSpec.point_mass(list(v))


def const(*v):
    return ProcessSpec.constant(point(*v))


@pytest.fixture
def enzyme():
    return enzyme_rdm()


@pytest.fixture
def enzyme_init():
    return InitialCondition(0.0, RandomVariableSpec.uniform_box([0] * 4, [2] * 4))


@pytest.fixture
def oscillator():
    return oscillator_rdm(length_std=0.1)


@pytest.fixture
def oscillator_init():
    lo = [-0.5] * 5 + [i - 0.5 for i in range(1, 6)]
    hi = [0.5] * 5 + [i + 0.5 for i in range(1, 6)]
    return InitialCondition(0.0, RandomVariableSpec.uniform_box(lo, hi))


@pytest.fixture
def enzyme_ctrl():
    return StepControl(t_end=60.0)


@pytest.fixture
def oscillator_ctrl():
    return StepControl(t_end=200.0)


def random_stable_matrix(rng, n, density=0.5):
    """Random sparse matrix with spectrum in the open left half-plane."""
    B = rng.normal(size=(n, n)) * (rng.random((n, n)) < density)
    shift = np.max(np.linalg.eigvals(B).real)
    return B - (max(shift, 0.0) + rng.uniform(0.5, 1.5)) * np.eye(n)
