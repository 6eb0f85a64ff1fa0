"""Exception types shared across the package."""


class DomainError(ValueError):
    """Raised when quantum numbers, angles or grids fall outside their domain."""


class FitConvergenceError(RuntimeError):
    """Raised (by the CLI layer) when a least-squares fit does not converge."""
