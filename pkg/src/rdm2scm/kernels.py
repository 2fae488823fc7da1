"""Hot numeric kernels: process evaluation, dynamics right-hand sides, RK4/RK45.

All functions are written in the numba-compatible subset of Python and go
through :func:`rdm2scm._jit.njit`; with ``RDM2SCM_DISABLE_NUMBA=1`` the same
code runs uncompiled.

Kernel parameter tuples have a fixed layout::

    (D0, D1, D2, free_idx, fixed_idx, eta_codes, eta_par, exo_codes, exo_par)

``D0..D2`` are dynamics-specific arrays (linear: B rows for the free outputs,
Gamma rows, unused dummy; mass action: reactant orders, net stoichiometry,
rate constants).  ``free_idx`` lists the integrated coordinates,
``fixed_idx`` the coordinates substituted from the intervened processes.
"""
import math
from functools import lru_cache

import numpy as np

from ._jit import njit

STATUS_OK = 0
STATUS_MAX_STEPS = 1
STATUS_UNDERFLOW = 2
STATUS_DIVERGED = 3

DIVERGENCE_NORM = 1e12


@njit
def eval_component(code, p, t):
    if code == 0:
        return p[0]
    if code == 1:
        return p[0] + p[1] * math.exp(-p[2] * t)
    if code == 2:
        w = 1.0 - t / p[2]
        if w < 0.0:
            w = 0.0
        elif w > 1.0:
            w = 1.0
        return p[0] + (p[1] - p[0]) * w
    if code == 3:
        return p[0] + p[1] * math.exp(-p[2] * t) * math.cos(p[3] * t + p[4])
    tt = t if t > 0.0 else 0.0
    return p[0] + p[1] / (1.0 + tt) ** p[2]


@njit
def fill_state(t, y, x, e, params):
    free = params[3]
    fixed = params[4]
    ec = params[5]
    ep = params[6]
    xc = params[7]
    xp = params[8]
    for r in range(free.shape[0]):
        x[free[r]] = y[r]
    for r in range(fixed.shape[0]):
        x[fixed[r]] = eval_component(ec[r], ep[r], t)
    for r in range(xc.shape[0]):
        e[r] = eval_component(xc[r], xp[r], t)


@njit
def linear_rhs(x, e, dy, params):
    B = params[0]
    G = params[1]
    for r in range(dy.shape[0]):
        acc = 0.0
        for j in range(x.shape[0]):
            acc += B[r, j] * x[j]
        for j in range(e.shape[0]):
            acc += G[r, j] * e[j]
        dy[r] = acc


@njit
def mass_action_rhs(x, e, dy, params):
    orders = params[0]
    net = params[1]
    k = params[2]
    free = params[3]
    for r in range(dy.shape[0]):
        dy[r] = 0.0
    for q in range(orders.shape[0]):
        rate = k[q]
        for s in range(orders.shape[1]):
            o = orders[q, s]
            if o != 0.0:
                rate *= x[s] ** o
        for r in range(free.shape[0]):
            c = net[q, free[r]]
            if c != 0.0:
                dy[r] += c * rate


@njit
def _rms(err, y, ynew, rtol, atol):
    n = err.shape[0]
    acc = 0.0
    for i in range(n):
        sc = atol + rtol * max(abs(y[i]), abs(ynew[i]))
        v = err[i] / sc
        acc += v * v
    return math.sqrt(acc / n)


@njit
def _norm2(v):
    acc = 0.0
    for i in range(v.shape[0]):
        acc += v[i] * v[i]
    return math.sqrt(acc)


# Dormand-Prince 5(4) tableau.
_C = np.array([0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0])
_A = np.array(
    [
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [1.0 / 5, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40, 9.0 / 40, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45, -56.0 / 15, 32.0 / 9, 0.0, 0.0, 0.0],
        [19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0.0, 0.0],
        [9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656, 0.0],
        [35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84],
    ]
)
_B5 = np.array([35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84, 0.0])
_B4 = np.array([5179.0 / 57600, 0.0, 7571.0 / 16695, 393.0 / 640, -92097.0 / 339200, 187.0 / 2100, 1.0 / 40])
_E = _B5 - _B4
# continuous extension: y(t + th h) = y + h sum_m K_m (P[m] . (th, th^2, th^3, th^4))
_P = np.array(
    [
        [1.0, -8048581381.0 / 2820520608, 8663915743.0 / 2820520608, -12715105075.0 / 11282082432],
        [0.0, 0.0, 0.0, 0.0],
        [0.0, 131558114200.0 / 32700410799, -68118460800.0 / 10900136933, 87487479700.0 / 32700410799],
        [0.0, -1754552775.0 / 470086768, 14199869525.0 / 1410260304, -10690763975.0 / 1880347072],
        [0.0, 127303824393.0 / 49829197408, -318862633887.0 / 49829197408, 701980252875.0 / 199316789632],
        [0.0, -282668133.0 / 205662961, 2019193451.0 / 616988883, -1453857185.0 / 822651844],
        [0.0, 40617522.0 / 29380423, -110615467.0 / 29380423, 69997945.0 / 29380423],
    ]
)


def _make_solvers(rhs):
    C, A, E, P = _C, _A, _E, _P

    @njit
    def deriv(t, y, x, e, dy, params):
        fill_state(t, y, x, e, params)
        rhs(x, e, dy, params)

    @njit
    def rk4(t0, y0, h, n_steps, t_end, params, n_x, n_e):
        nf = y0.shape[0]
        Y = np.empty((n_steps + 1, nf))
        T = np.empty(n_steps + 1)
        x = np.zeros(n_x)
        e = np.zeros(n_e)
        k1 = np.empty(nf)
        k2 = np.empty(nf)
        k3 = np.empty(nf)
        k4 = np.empty(nf)
        tmp = np.empty(nf)
        y = y0.copy()
        Y[0] = y
        T[0] = t0
        for i in range(n_steps):
            t = t0 + i * h
            hh = h
            if i == n_steps - 1:
                hh = t_end - t
            deriv(t, y, x, e, k1, params)
            for j in range(nf):
                tmp[j] = y[j] + 0.5 * hh * k1[j]
            deriv(t + 0.5 * hh, tmp, x, e, k2, params)
            for j in range(nf):
                tmp[j] = y[j] + 0.5 * hh * k2[j]
            deriv(t + 0.5 * hh, tmp, x, e, k3, params)
            for j in range(nf):
                tmp[j] = y[j] + hh * k3[j]
            deriv(t + hh, tmp, x, e, k4, params)
            for j in range(nf):
                y[j] += hh / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j])
            Y[i + 1] = y
            T[i + 1] = t_end if i == n_steps - 1 else t0 + (i + 1) * h
            nrm = _norm2(y)
            if not (nrm <= DIVERGENCE_NORM):
                return STATUS_DIVERGED, T, Y, i + 2, i + 1
        return STATUS_OK, T, Y, n_steps + 1, n_steps

    @njit
    def rk45(t_out, y0, rtol, atol, max_step, max_steps, params, n_x, n_e):
        nf = y0.shape[0]
        n_out = t_out.shape[0]
        Y = np.empty((n_out, nf))
        x = np.zeros(n_x)
        e = np.zeros(n_e)
        K = np.empty((7, nf))
        ytmp = np.empty(nf)
        ynew = np.empty(nf)
        err = np.empty(nf)
        y = y0.copy()
        Y[0] = y
        t = t_out[0]
        if nf == 0:
            for i in range(1, n_out):
                Y[i] = y
            return STATUS_OK, Y, n_out, 0

        deriv(t, y, x, e, K[0], params)
        # Hairer-Wanner starting step
        d0 = 0.0
        d1 = 0.0
        for j in range(nf):
            sc = atol + rtol * abs(y[j])
            d0 += (y[j] / sc) ** 2
            d1 += (K[0, j] / sc) ** 2
        d0 = math.sqrt(d0 / nf)
        d1 = math.sqrt(d1 / nf)
        if d0 < 1e-5 or d1 < 1e-5:
            h0 = 1e-6
        else:
            h0 = 0.01 * d0 / d1
        h0 = min(h0, max_step)
        for j in range(nf):
            ytmp[j] = y[j] + h0 * K[0, j]
        deriv(t + h0, ytmp, x, e, K[1], params)
        d2 = 0.0
        for j in range(nf):
            sc = atol + rtol * abs(y[j])
            d2 += ((K[1, j] - K[0, j]) / sc) ** 2
        d2 = math.sqrt(d2 / nf) / h0
        if max(d1, d2) <= 1e-15:
            h1 = max(1e-6, h0 * 1e-3)
        else:
            h1 = (0.01 / max(d1, d2)) ** 0.2
        h = min(100.0 * h0, h1, max_step)

        steps = 0
        k_out = 1
        t_end = t_out[n_out - 1]
        span = t_end - t_out[0]
        while k_out < n_out:
            if steps >= max_steps:
                return STATUS_MAX_STEPS, Y, k_out, steps
            hit = False
            hs = h
            if t + hs >= t_end - 1e-13 * max(1.0, abs(t_end)):
                hs = t_end - t
                hit = True
            if hs < 1e-14 * max(1.0, abs(t), span):
                return STATUS_UNDERFLOW, Y, k_out, steps
            for s in range(1, 7):
                for j in range(nf):
                    acc = y[j]
                    for m in range(s):
                        acc += hs * A[s, m] * K[m, j]
                    ytmp[j] = acc
                deriv(t + C[s] * hs, ytmp, x, e, K[s], params)
            for j in range(nf):
                ynew[j] = ytmp[j]  # stage 7 state is the 5th-order solution (FSAL)
                acc = 0.0
                for m in range(7):
                    acc += E[m] * K[m, j]
                err[j] = hs * acc
            en = _rms(err, y, ynew, rtol, atol)
            steps += 1
            if not (en == en):
                return STATUS_DIVERGED, Y, k_out, steps
            if en <= 1.0:
                t_new = t_end if hit else t + hs
                # continuous extension for the grid points inside the step
                while k_out < n_out - 1 and t_out[k_out] <= t_new:
                    th = (t_out[k_out] - t) / hs
                    for j in range(nf):
                        acc = 0.0
                        for m in range(7):
                            q = th * (P[m, 0] + th * (P[m, 1] + th * (P[m, 2] + th * P[m, 3])))
                            acc += K[m, j] * q
                        Y[k_out, j] = y[j] + hs * acc
                    k_out += 1
                t = t_new
                for j in range(nf):
                    y[j] = ynew[j]
                    K[0, j] = K[6, j]
                if not (_norm2(y) <= DIVERGENCE_NORM):
                    Y[k_out] = y
                    return STATUS_DIVERGED, Y, k_out + 1, steps
                if hit:
                    Y[n_out - 1] = y
                    k_out = n_out
                fac = 10.0 if en == 0.0 else min(10.0, max(0.2, 0.9 * en ** -0.2))
                h = min(max_step, hs * fac)
            else:
                fac = max(0.2, 0.9 * en ** -0.2)
                h = hs * fac
        return STATUS_OK, Y, n_out, steps

    @njit
    def deriv_at(t, y, params, n_x, n_e):
        x = np.zeros(n_x)
        e = np.zeros(n_e)
        dy = np.empty(y.shape[0])
        deriv(t, y, x, e, dy, params)
        return dy

    return rk4, rk45, deriv_at


@lru_cache(maxsize=None)
def solvers(kind):
    """``(rk4, rk45, deriv_at)`` kernels for dynamics kind ``'linear'`` or ``'mass_action'``."""
    if kind == "linear":
        return _make_solvers(linear_rhs)
    if kind == "mass_action":
        return _make_solvers(mass_action_rhs)
    raise KeyError(kind)


def python_solvers(rhs_py):
    """Uncompiled solvers around an arbitrary Python ``rhs(x, e, dy, params)``."""
    import rdm2scm._jit as _j

    saved = _j.HAS_NUMBA
    _j.HAS_NUMBA = False
    try:
        return _make_solvers(rhs_py)
    finally:
        _j.HAS_NUMBA = saved
