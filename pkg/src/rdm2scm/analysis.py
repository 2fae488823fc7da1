"""Linear-Gaussian conditional independence tests on equilibrium samples."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from .errors import DegenerateDataError, InvalidArgumentError

RANK_TOL = 1e-10


@dataclass(frozen=True)
class CITestResult:
    statistic: float
    n: int
    z_score: float
    independent: bool
    alpha: float
    p_value: float

    def record(self, label="") -> str:
        head = f"{label} " if label else ""
        verdict = "independent" if self.independent else "dependent"
        return (
            f"{head}r={self.statistic:.6g} n={self.n} z={self.z_score:.6g} "
            f"p={self.p_value:.6g} alpha={self.alpha:g} {verdict}"
        )


def _prepare(samples, i, j, Z):
    X = np.asarray(samples, dtype=float)
    if X.ndim != 2:
        raise InvalidArgumentError("samples must be a 2-d matrix")
    Z = [int(z) for z in Z]
    cols = [int(i), int(j), *Z]
    if len(set(cols)) != len(cols):
        raise InvalidArgumentError("i, j and Z must be distinct columns")
    if min(cols) < 0 or max(cols) >= X.shape[1]:
        raise InvalidArgumentError("column index out of range")
    n = X.shape[0]
    if n <= len(Z) + 3:
        raise InvalidArgumentError(f"need more than {len(Z) + 3} samples, got {n}")
    if not np.all(np.isfinite(X[:, cols])):
        raise DegenerateDataError("samples contain non-finite values")
    return X, int(i), int(j), Z, n


def _design(X, Z):
    D = np.column_stack([np.ones(X.shape[0]), X[:, Z]]) if Z else np.ones((X.shape[0], 1))
    # rank test on the centred, scaled conditioning block
    if Z:
        block = X[:, Z] - X[:, Z].mean(axis=0)
        scale = np.linalg.norm(block, axis=0)
        if np.any(scale == 0):
            raise DegenerateDataError("a conditioning column is constant")
        s = np.linalg.svd(block / scale, compute_uv=False)
        if s[-1] <= RANK_TOL * s[0]:
            raise DegenerateDataError("conditioning block is rank deficient")
    return D


def _corr(a, b, scale_a, scale_b):
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    # a residual at round-off level of its column means the column is explained by Z
    if na <= RANK_TOL * scale_a or nb <= RANK_TOL * scale_b:
        raise DegenerateDataError("a residual is zero (column constant or determined by Z); correlation undefined")
    return float(np.clip(a @ b / (na * nb), -1.0, 1.0))


def partial_correlation(samples, i, j, Z=()) -> float:
    """Correlation of columns ``i`` and ``j`` after regressing out ``Z`` (with intercept)."""
    X, i, j, Z, _ = _prepare(samples, i, j, Z)
    D = _design(X, Z)
    coef, *_ = np.linalg.lstsq(D, X[:, [i, j]], rcond=None)
    R = X[:, [i, j]] - D @ coef
    scale = np.linalg.norm(X[:, [i, j]], axis=0)
    return _corr(R[:, 0], R[:, 1], scale[0], scale[1])


def partial_correlation_precision(samples, i, j, Z=()) -> float:
    """Same quantity from the inverse covariance of ``(i, j, Z)``."""
    X, i, j, Z, _ = _prepare(samples, i, j, Z)
    _design(X, Z)
    S = np.cov(X[:, [i, j, *Z]], rowvar=False)
    d = np.sqrt(np.diag(S))
    if np.any(d == 0):
        raise DegenerateDataError("a column is constant")
    R = S / np.outer(d, d)
    P = np.linalg.inv(R)
    return float(np.clip(-P[0, 1] / math.sqrt(P[0, 0] * P[1, 1]), -1.0, 1.0))


def ci_test(samples, i, j, Z=(), alpha=0.01) -> CITestResult:
    """Fisher z test of zero partial correlation between columns ``i`` and ``j`` given ``Z``."""
    if not 0 < alpha < 1:
        raise InvalidArgumentError("alpha must lie in (0, 1)")
    r = partial_correlation(samples, i, j, Z)
    n = np.asarray(samples).shape[0]
    k = len(tuple(Z))
    rr = min(abs(r), 1.0 - 1e-16)
    z = math.copysign(math.atanh(rr), r) * math.sqrt(n - k - 3)
    crit = norm.ppf(1 - alpha / 2)
    p = float(2 * norm.sf(abs(z)))
    return CITestResult(r, int(n), float(z), bool(abs(z) < crit), float(alpha), p)


def ci_test_columns(columns, samples, i, j, Z=(), alpha=0.01) -> CITestResult:
    """:func:`ci_test` with columns given by name."""
    columns = list(columns)
    missing = [c for c in [i, j, *Z] if c not in columns]
    if missing:
        raise InvalidArgumentError(f"columns not found: {missing}")
    return ci_test(samples, columns.index(i), columns.index(j), [columns.index(z) for z in Z], alpha)
