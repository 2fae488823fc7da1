import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rdm2scm import (
    DegenerateDataError,
    InvalidArgumentError,
    ci_test,
    partial_correlation,
    partial_correlation_precision,
)
from rdm2scm.analysis import ci_test_columns


def gaussian_chain(rng, n):
    x = rng.standard_normal(n)
    z = x + rng.standard_normal(n)
    y = z + rng.standard_normal(n)
    return np.column_stack([x, y, z])


def test_perfectly_correlated():
    x = np.random.default_rng(0).standard_normal(100)
    X = np.column_stack([x, 3 * x + 1])
    assert partial_correlation(X, 0, 1) == pytest.approx(1.0, abs=1e-12)
    assert partial_correlation(np.column_stack([x, -x]), 0, 1) == pytest.approx(-1.0, abs=1e-12)


def test_independent_noise():
    X = np.random.default_rng(1).standard_normal((10_000, 2))
    assert abs(partial_correlation(X, 0, 1)) < 0.05


def test_gaussian_chain():
    X = gaussian_chain(np.random.default_rng(2), 10_000)
    marginal = partial_correlation(X, 0, 1)
    cond = partial_correlation(X, 0, 1, [2])
    # population values: corr(x, y) = 1/sqrt(3), partial given z = 0
    assert marginal == pytest.approx(1 / math.sqrt(3), abs=0.03)
    assert abs(cond) < 0.05 and abs(cond) < marginal / 10
    assert ci_test(X, 0, 1, [2]).independent
    assert not ci_test(X, 0, 1).independent


def test_covariance_oracle():
    # partial correlation from the population precision matrix
    rng = np.random.default_rng(3)
    L = rng.normal(size=(4, 4))
    cov = L @ L.T + np.eye(4)
    X = rng.multivariate_normal(np.zeros(4), cov, size=200_000)
    P = np.linalg.inv(cov[np.ix_([0, 1, 2], [0, 1, 2])])
    truth = -P[0, 1] / math.sqrt(P[0, 0] * P[1, 1])
    assert partial_correlation(X, 0, 1, [2]) == pytest.approx(truth, abs=0.01)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 10**6), k=st.integers(0, 3), scale=st.floats(1e-3, 1e3))
def test_scale_invariance_and_precision_route(seed, k, scale):
    rng = np.random.default_rng(seed)
    M = rng.normal(size=(2 + k, 2 + k))
    X = rng.standard_normal((300, 2 + k)) @ M
    Z = list(range(2, 2 + k))
    r = partial_correlation(X, 0, 1, Z)
    assert -1 <= r <= 1
    Y = X.copy()
    Y[:, rng.integers(0, 2 + k)] *= scale
    assert partial_correlation(Y, 0, 1, Z) == pytest.approx(r, abs=1e-12)
    assert partial_correlation_precision(X, 0, 1, Z) == pytest.approx(r, abs=1e-10)


def test_result_fields():
    X = np.random.default_rng(4).standard_normal((500, 3))
    res = ci_test(X, 0, 1, [2], alpha=0.05)
    assert res.n == 500 and res.alpha == 0.05
    assert res.z_score == pytest.approx(math.atanh(res.statistic) * math.sqrt(500 - 1 - 3))
    from scipy.stats import norm

    assert res.independent == (abs(res.z_score) < norm.ppf(1 - 0.05 / 2))
    assert res.independent == (res.p_value > 0.05)
    line = res.record("x y | z")
    assert line.startswith("x y | z r=") and "\n" not in line


def test_calibration():
    rng = np.random.default_rng(5)
    reps, alpha = 200, 0.01
    rejections = sum(not ci_test(rng.standard_normal((500, 3)), 0, 1, [2], alpha).independent for _ in range(reps))
    band = 3 * math.sqrt(reps * alpha * (1 - alpha))
    assert abs(rejections - reps * alpha) <= band


def test_degenerate_inputs():
    rng = np.random.default_rng(6)
    X = rng.standard_normal((100, 4))
    X[:, 2] = 1.0
    with pytest.raises(DegenerateDataError):
        partial_correlation(X, 0, 1, [2])
    X = rng.standard_normal((100, 4))
    X[:, 3] = 2 * X[:, 2]
    with pytest.raises(DegenerateDataError):
        partial_correlation(X, 0, 1, [2, 3])
    X = rng.standard_normal((100, 3))
    X[:, 0] = X[:, 2]
    with pytest.raises(DegenerateDataError):
        partial_correlation(X, 0, 1, [2])
    with pytest.raises(InvalidArgumentError):
        partial_correlation(X, 0, 0)
    with pytest.raises(InvalidArgumentError):
        partial_correlation(X[:4], 0, 1, [2])
    with pytest.raises(InvalidArgumentError):
        ci_test(X, 0, 1, alpha=1.5)
    with pytest.raises(InvalidArgumentError):
        partial_correlation(X, 0, 7)


def test_named_columns():
    X = gaussian_chain(np.random.default_rng(7), 2000)
    a = ci_test_columns(["x", "y", "z"], X, "x", "y", ["z"])
    assert a == ci_test(X, 0, 1, [2])
    with pytest.raises(InvalidArgumentError):
        ci_test_columns(["x", "y", "z"], X, "x", "w")
