"""Epsilon ladders and the PVEstimate record shared by all principal-value routes."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["PVEstimate", "make_ladder", "DEFAULT_RUNGS", "DEFAULT_CONVERGENCE_TOL"]

DEFAULT_RUNGS = 8
DEFAULT_CONVERGENCE_TOL = 1e-2


@dataclass(frozen=True)
class PVEstimate:
    """Value of a principal-value functional with its regularization ladder.

    ``rung_values[k]`` is the estimate at exclusion radius ``eps_ladder[k]``;
    ``value`` is the final rung, ``diag`` the largest successive-rung jump over
    the last three rungs, and ``converged`` whether ``diag`` is at or below the
    tolerance the estimate was built with.
    """

    value: float
    eps_ladder: np.ndarray = field(repr=False)
    rung_values: np.ndarray = field(repr=False)
    converged: bool
    diag: float

    def __post_init__(self):
        if len(self.eps_ladder) != len(self.rung_values):
            raise ValueError("one rung value per ladder entry")


def finish_estimate(eps_ladder, rung_values, tol=DEFAULT_CONVERGENCE_TOL,
                    value=None) -> PVEstimate:
    """Assemble a PVEstimate from computed rungs.

    ``value`` defaults to the final rung; the convergence diagnostic uses up to
    the last three rungs (zero when there is only one).
    """
    eps_ladder = np.asarray(eps_ladder, dtype=float)
    rung_values = np.asarray(rung_values, dtype=float)
    tail = rung_values[-3:]
    diag = float(np.max(np.abs(np.diff(tail)))) if tail.size >= 2 else 0.0
    return PVEstimate(
        value=float(rung_values[-1] if value is None else value),
        eps_ladder=eps_ladder,
        rung_values=rung_values,
        converged=bool(diag <= tol),
        diag=diag,
    )


def make_ladder(eps0: float, rungs: int = DEFAULT_RUNGS, factor: float = 2.0,
                floor: float | None = None) -> np.ndarray:
    """Geometric ladder eps0, eps0/factor, ..., optionally clipped at ``floor``.

    The ladder keeps every rung at or above the floor and always returns at
    least one rung (``max(eps0, floor)`` if even the first rung is too small).
    """
    if eps0 <= 0 or rungs < 1 or factor <= 1.0:
        raise ValueError("need eps0 > 0, rungs >= 1, factor > 1")
    ladder = eps0 * factor ** (-np.arange(rungs, dtype=float))
    if floor is not None:
        ladder = ladder[ladder >= floor]
        if ladder.size == 0:
            ladder = np.array([max(eps0, floor)])
    return ladder


def validate_ladder(eps_ladder) -> np.ndarray:
    ladder = np.asarray(eps_ladder, dtype=float)
    if ladder.ndim != 1 or ladder.size == 0:
        raise ValueError("epsilon ladder must be a nonempty 1-D sequence")
    if np.any(ladder <= 0) or np.any(np.diff(ladder) >= 0):
        raise ValueError("epsilon ladder must be strictly decreasing and positive")
    return ladder
