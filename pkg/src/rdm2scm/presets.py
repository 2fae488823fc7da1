"""Model builders for the enzyme reaction and the damped coupled oscillator.

The shipped model files under ``models/`` refer to these builders by name.
"""
from __future__ import annotations

import numpy as np

from .errors import InvalidArgumentError
from .process import ProcessSpec, RandomVariableSpec
from .rdm import MassActionDynamics, RandomDynamicalModel, Reaction, Variables, make_linear_rdm
from .scm import CustomMechanism, StructuralCausalModel

ENZYME_RATES = (0.5, 1.1, 0.9, 1.6, 0.6)  # k_i, k_f, k_r, k_c, k_o
ENZYME_SPECIES = ("S", "E", "C", "P")


def _rates(rates):
    rates = tuple(float(r) for r in rates)
    if len(rates) != 5 or min(rates) <= 0:
        raise InvalidArgumentError("enzyme rates are five positive numbers (k_i, k_f, k_r, k_c, k_o)")
    return rates


def enzyme_dynamics(rates=ENZYME_RATES) -> MassActionDynamics:
    k_i, k_f, k_r, k_c, k_o = _rates(rates)
    reactions = [
        Reaction.make({"E": 1, "S": 1}, {"C": 1}, k_f),
        Reaction.make({"C": 1}, {"E": 1, "S": 1}, k_r),
        Reaction.make({"C": 1}, {"E": 1, "P": 1}, k_c),
    ]
    return MassActionDynamics(ENZYME_SPECIES, reactions, inflow={"S": k_i}, outflow={"P": k_o})


def enzyme_rdm(rates=ENZYME_RATES) -> RandomDynamicalModel:
    """Basic enzyme reaction with substrate inflow and product outflow.

    There are no exogenous variables; randomness enters through the initial
    condition only.
    """
    return RandomDynamicalModel(Variables.of(ENZYME_SPECIES), Variables(), enzyme_dynamics(rates), {}, {}, name="enzyme")


def enzyme_equilibrium(rates=ENZYME_RATES, E=1.0):
    """The equilibrium with enzyme level ``E`` (S and E are not identified)."""
    k_i, k_f, k_r, k_c, k_o = _rates(rates)
    C = k_i / k_c
    S = (k_r + k_c) * C / (k_f * E)
    return np.array([S, E, C, k_i / k_o])


def enzyme_loop_free_scm(rates=ENZYME_RATES) -> StructuralCausalModel:
    """Enzyme SCM with every equation solved for its own variable.

    Row S comes from ``0 = k_i - k_f E S + k_r C``, so ``S = (k_i + k_r C)/(k_f E)``.
    Its solution set on positive concentrations equals that of the SCM
    derived from :func:`enzyme_rdm`.
    """
    k_i, k_f, k_r, k_c, k_o = _rates(rates)

    def loop_free(x, e):
        S, E, C, P = x
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.array(
                [
                    (k_i + k_r * C) / (k_f * E),
                    (k_r + k_c) * C / (k_f * S),
                    k_f * E * S / (k_r + k_c),
                    k_c * C / k_o,
                ]
            )

    parents = {"S": {"E", "C"}, "E": {"S", "C"}, "C": {"E", "S"}, "P": {"C"}}
    return StructuralCausalModel(Variables.of(ENZYME_SPECIES), Variables(), CustomMechanism(loop_free, parents), {}, name="enzyme_loop_free")


def _vector(v, n, name):
    a = np.broadcast_to(np.asarray(v, dtype=float), (n,)).copy()
    if a.shape != (n,):
        raise InvalidArgumentError(f"{name} must have {n} entries")
    return a


def oscillator_names(d):
    return [f"P{i}" for i in range(1, d + 1)] + [f"Q{i}" for i in range(1, d + 1)]


def oscillator_matrices(d, masses, springs, frictions):
    """``(B, Gamma)`` over state ``(P_1..P_d, Q_1..Q_d)`` and inputs ``(l_0..l_d, L)``."""
    m = _vector(masses, d, "masses")
    k = _vector(springs, d + 1, "springs")
    b = _vector(frictions, d, "frictions")
    if min(m) <= 0 or min(k) <= 0 or min(b) < 0:
        raise InvalidArgumentError("masses and springs must be positive, frictions non-negative")
    n = 2 * d
    B = np.zeros((n, n))
    G = np.zeros((n, d + 2))
    for i in range(1, d + 1):
        p, q = i - 1, d + i - 1
        # dP_i = k_i (Q_{i+1} - Q_i - l_i) - k_{i-1} (Q_i - Q_{i-1} - l_{i-1}) - (b_i/m_i) P_i
        B[p, q] = -(k[i] + k[i - 1])
        if i < d:
            B[p, q + 1] = k[i]
        else:
            G[p, d + 1] = k[i]  # wall at Q_{d+1} = L
        if i > 1:
            B[p, q - 1] = k[i - 1]
        G[p, i] = -k[i]
        G[p, i - 1] = k[i - 1]
        B[p, p] = -b[i - 1] / m[i - 1]
        # dQ_i = P_i / m_i
        B[q, p] = 1.0 / m[i - 1]
    return B, G


def oscillator_rdm(d=5, masses=1.0, springs=1.0, frictions=1.0, lengths=None, L=6.0, length_std=0.0) -> RandomDynamicalModel:
    """Damped chain of ``d`` masses between walls at 0 and ``L`` as a linear model.

    ``lengths`` gives the ``d + 1`` rest lengths as numbers or
    :class:`RandomVariableSpec`; by default each is ``L/(d+1)``, normal with
    standard deviation ``length_std`` when that is positive.
    """
    d = int(d)
    if d < 1:
        raise InvalidArgumentError("d must be >= 1")
    B, G = oscillator_matrices(d, masses, springs, frictions)
    if lengths is None:
        c = float(L) / (d + 1)
        rv = RandomVariableSpec.normal([c], [[length_std**2]]) if length_std > 0 else RandomVariableSpec.point_mass([c])
        lengths = [rv] * (d + 1)
    if len(lengths) != d + 1:
        raise InvalidArgumentError(f"need {d + 1} rest lengths")
    exo = {}
    for j, l in enumerate(lengths):
        rv = l if isinstance(l, RandomVariableSpec) else RandomVariableSpec.point_mass([float(l)])
        exo[f"l{j}"] = ProcessSpec.constant(rv)
    exo["L"] = ProcessSpec.constant(RandomVariableSpec.point_mass([float(L)]))
    return make_linear_rdm(B, G, exo, endogenous=oscillator_names(d), name="oscillator")


# parameters used for the conditional-independence scenario: asymmetric end
# springs make the observational dependence of Q1 and Q5 given Q3 non-zero
CI_SPRINGS = (0.5, 2.0, 2.0, 2.0, 2.0, 0.5)
CI_LENGTH_STD = 0.1


def oscillator_ci_rdm(length_std=CI_LENGTH_STD) -> RandomDynamicalModel:
    return oscillator_rdm(5, 1.0, CI_SPRINGS, 1.0, L=6.0, length_std=length_std)
