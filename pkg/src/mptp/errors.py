"""Exception types shared across the package.

The command-line front end maps these onto process exit codes:
config errors -> 1, solver non-convergence -> 2, numerical failures -> 3.
"""


class ConfigError(ValueError):
    """A configuration document failed validation; message names the field path."""


class NonConvergenceError(RuntimeError):
    """An iterative solver hit its iteration cap before reaching tolerance.

    Carries the best iterate found so far in ``best`` so callers can inspect
    or restart from it.
    """

    def __init__(self, message, best=None, history=None):
        super().__init__(message)
        self.best = best
        self.history = history


class NumericalFailureError(RuntimeError):
    """NaN/inf encountered during integration or a singular linear solve."""
