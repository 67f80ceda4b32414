"""Exception types shared across the package.

The CLI maps these onto process exit codes, so keep the hierarchy flat
and explicit rather than reusing bare ValueError everywhere.
"""


class DomainError(ValueError):
    """Parameters outside the mathematical domain of validity."""


class SubcriticalCouplingError(DomainError):
    """Coupling a below the critical threshold -((d-2)/2)**2."""


class WindowError(DomainError):
    """Order parameter (alpha or beta) outside its admissible window."""


class ResonanceError(DomainError):
    """Resonant parameter combination where a series coefficient blows up."""


class PoleError(DomainError):
    """Requested Mellin contour does not separate the two pole families."""


class GridMismatchError(ValueError):
    """Operation combining functions living on different grids."""


class BudgetExceededError(RuntimeError):
    """A series did not meet its tolerance within the allotted terms.

    Carries the partial sum and a crude tail estimate so callers can decide
    whether to accept the value anyway.
    """

    def __init__(self, message, partial=None, tail_estimate=None):
        super().__init__(message)
        self.partial = partial
        self.tail_estimate = tail_estimate


class NonconvergenceError(RuntimeError):
    """An iterative or extrapolated numerical procedure failed to settle."""


class VerificationError(RuntimeError):
    """A verification suite reported at least one failed check."""
