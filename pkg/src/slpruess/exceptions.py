"""Exception types raised across the package."""


class PoleError(ValueError):
    """A closed-form expression was evaluated at (or too near) a singularity."""


class SolverError(RuntimeError):
    """Eigenvalue search failed."""


class MissedRootSuspected(SolverError):
    """The number of located roots disagrees with the asymptotic eigenvalue count."""


class ScanExhausted(SolverError):
    """The eigenvalue scan reached its ceiling before finding the requested roots."""
