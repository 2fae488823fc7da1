"""Random dynamical models, their equilibria and associated structural causal models."""
from ._jit import backend_name
from .analysis import CITestResult, ci_test, partial_correlation, partial_correlation_precision
from .errors import (
    CannotMarginalizeError,
    CannotResolveError,
    DegenerateDataError,
    DependencyMismatchError,
    DivergenceError,
    EmptyResultError,
    InvalidArgumentError,
    ModelFileError,
    NoUniqueSolutionError,
    NonConvergenceError,
    RDMError,
)
from .graph import DirectedMixedGraph, d_separated, graph_equal, to_dot
from .process import (
    PathFunction,
    ProcessSpec,
    RandomVariableSpec,
    Trajectory,
    derive_path_seed,
    is_convergent,
    limit_variable,
    sample_path,
)
from .rdm import (
    CustomDynamics,
    InitialCondition,
    LinearDynamics,
    MassActionDynamics,
    RandomDynamicalModel,
    Reaction,
    Variables,
    check_steady,
    estimate_lipschitz,
    functional_graph_rdm,
    intervene_rdm,
    make_linear_rdm,
    verify_dependencies,
)
from .scm import (
    CustomMechanism,
    FromRDMMechanism,
    LinearMechanism,
    StructuralCausalModel,
    check_commute,
    functional_graph_scm,
    intervene_scm,
    marginalize_linear,
    remove_self_loops_linear,
    residual,
    scm_from_rdm,
    solve_linear_scm,
)
from .simulate import (
    Detection,
    EnsembleResult,
    EquilibriumStatus,
    StepControl,
    detect_equilibration,
    equilibrium_samples,
    integrate_path,
    run_ensemble,
)

__version__ = "0.1.0"
