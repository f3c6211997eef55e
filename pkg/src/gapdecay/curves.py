"""Shared time-series container for all solvers."""
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .reservoir import ReservoirParams

METHODS = ("closed-half", "series", "series-z1zero", "volterra", "modes", "rational", "asymptotic")


@dataclass
class DecayCurve:
    """Sampled amplitude C(t) with population p = |C|^2 and a method tag per sample.

    params is None for curves built from a bare mode grid.
    """

    params: ReservoirParams | None
    t: np.ndarray
    c: np.ndarray
    method: list
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float)
        self.c = np.asarray(self.c, dtype=complex)
        if self.t.ndim != 1 or self.t.shape != self.c.shape:
            raise DomainError("t and c must be 1-d arrays of equal length")
        if len(self.method) != len(self.t):
            raise DomainError("one method tag per sample required")
        if np.any(np.diff(self.t) <= 0.0):
            raise DomainError("time grid must be strictly increasing")
        unknown = set(self.method) - set(METHODS)
        if unknown:
            raise DomainError(f"unknown method tags: {sorted(unknown)}")

    @property
    def p(self):
        return np.abs(self.c) ** 2

    def __len__(self):
        return len(self.t)


def validate_grid(grid):
    """Sorted nonnegative 1-d float grid, as required by the population evaluators."""
    g = np.asarray(grid, dtype=float)
    if g.ndim != 1 or len(g) == 0:
        raise DomainError("grid must be a nonempty 1-d sequence")
    if np.any(g < 0.0):
        raise DomainError("grid times must be nonnegative")
    if np.any(np.diff(g) <= 0.0):
        raise DomainError("grid must be strictly increasing")
    return g
