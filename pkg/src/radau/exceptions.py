"""Exception types shared across the package."""


class RadauError(Exception):
    """Base class for all errors raised by this package."""


class SingularMatrix(RadauError):
    """A pivot underflowed the precision-scaled singularity threshold."""


class DimensionMismatch(RadauError):
    """Operands have incompatible shapes."""


class SpectrumShapeViolation(RadauError):
    """Eigenvalue structure is not one real value plus conjugate pairs."""


class RootCountMismatch(RadauError):
    """Fewer polynomial roots were located than expected."""


class SolverFailure(RadauError):
    """Base class for integration failures."""


class StepSizeUnderflow(SolverFailure):
    """Step size fell below the precision-scaled floor."""


class MaxNewtonFailures(SolverFailure):
    """Newton iteration failed to converge repeatedly."""


class NonFiniteState(SolverFailure):
    """The right-hand side produced NaN or Inf at an accepted state."""


class UnknownProblem(RadauError):
    """Requested benchmark problem is not registered."""


class TooFewPoints(RadauError):
    """Not enough successful records to draw a work-precision curve."""
