"""Exception and warning types shared across modules."""


class ConvergenceError(RuntimeError):
    """An iteration hit its cap before meeting its tolerance."""


class TruncationError(RuntimeError):
    """An integrand has not decayed at the cutoff of a truncated domain."""


class TruncationWarning(UserWarning):
    """A finite integration domain cuts off a non-negligible share of mass."""
