"""Exception hierarchy shared by all modules."""


class RDMError(Exception):
    """Base class for every error raised by rdm2scm."""


class InvalidArgumentError(RDMError, ValueError):
    pass


class DependencyMismatchError(RDMError):
    """A declared dependency pattern disagrees with finite-difference probing."""


class NonConvergenceError(RDMError):
    """Integration stopped early (step underflow or step budget exhausted).

    The partial trajectory computed so far is attached as ``partial``.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class DivergenceError(NonConvergenceError):
    """The state left the finite region (non-finite or beyond the norm guard)."""


class EmptyResultError(RDMError):
    pass


class NoUniqueSolutionError(RDMError):
    """A linear structural system has no unique solution."""


class CannotResolveError(RDMError):
    pass


class CannotMarginalizeError(RDMError):
    pass


class DegenerateDataError(RDMError, ValueError):
    pass


class ModelFileError(RDMError):
    """Model file could not be parsed; carries 1-based line/column when known."""

    def __init__(self, message, line=None, column=None, source=None):
        self.line = line
        self.column = column
        self.source = source
        where = ""
        if line is not None:
            where = f"{source or '<model>'}:{line}:{column}: "
        super().__init__(where + message)
