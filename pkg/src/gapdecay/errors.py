"""Exception types raised by the numerical routines."""


class GapDecayError(Exception):
    """Base class for all library errors."""


class DomainError(GapDecayError, ValueError):
    """Input outside the mathematical domain of an operation."""


class PoleError(DomainError):
    """Evaluation requested at a pole of the function."""


class NonConvergenceError(GapDecayError):
    """A series or iteration failed to reach tolerance within its budget."""

    def __init__(self, message, partial=None, terms=None):
        super().__init__(message)
        self.partial = partial
        self.terms = terms


class SeriesHorizonError(GapDecayError):
    """The power series lost all significance before converging.

    Carries the last reliable partial sum and the ratio of the largest
    retained term to it.
    """

    def __init__(self, message, partial=None, max_term_ratio=None, t=None):
        super().__init__(message)
        self.partial = partial
        self.max_term_ratio = max_term_ratio
        self.t = t


class RootQualityError(GapDecayError):
    """Polynomial roots failed their residual bound on every solver path."""


class DegenerateRootsError(GapDecayError):
    """Roots expected to be distinct coincide within tolerance."""


class MultiplicityError(GapDecayError):
    """A root cluster of multiplicity > 2 cannot be represented reliably."""


class QuadratureError(GapDecayError):
    """Adaptive quadrature failed; carries the achieved error estimate."""

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class DivergenceError(GapDecayError):
    """An integral representation is divergent at the requested point."""


class GridResolutionError(GapDecayError):
    """A time step too coarse for the fastest retained frequency."""


class InstabilityError(GapDecayError):
    """A time stepper produced amplitudes outside the physical bound."""


class GapCoverageError(GapDecayError):
    """A requested time falls between the series horizon and the asymptotic onset."""


class UsageError(GapDecayError):
    """Bad command line or configuration input."""
