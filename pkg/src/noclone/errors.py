"""Exception hierarchy shared by all noclone modules."""


class NocloneError(Exception):
    """Base class for all library errors."""


class DomainError(NocloneError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class PreconditionError(NocloneError, ValueError):
    """A stated precondition (e.g. a normalization constraint) is violated."""


class DimensionMismatchError(NocloneError, ValueError):
    """Two objects that must share a truncation dimension do not."""


class TruncationError(NocloneError):
    """Basis truncation too small for the requested operation.

    ``required`` carries the estimated truncation that would suffice,
    when one can be estimated.
    """

    def __init__(self, message: str, required: int | None = None):
        super().__init__(message)
        self.required = required


class GridExtentError(NocloneError, ValueError):
    """Quadrature grid too small (extent or resolution) for the state."""


class ConvergenceError(NocloneError):
    """Iterative solver failed to converge; carries the last residual."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class AccuracyError(NocloneError):
    """A quadrature/refinement pair failed its internal consistency check."""


class UnreachableBoundError(NocloneError):
    """Requested fidelity bound exceeds the supremum of the curve.

    ``supremum`` reports the achievable limit.
    """

    def __init__(self, message: str, supremum: float | None = None):
        super().__init__(message)
        self.supremum = supremum
