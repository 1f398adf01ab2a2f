"""The principal-value functional of an fBm path, by three independent routes.

For a level ``a`` and horizon ``t`` the object of interest is

    C_t(a) = v.p. integral over (0, t) of (2 H s^{2H-1} / (B_s - a)) ds,

estimated here by

* ``pv_time_integral`` -- symmetric epsilon-exclusion of the time integral,
* ``from_local_time``  -- the same singular integral moved to space against
  the weighted local-time field (equivalently -pi times the Hilbert
  transform of the field),
* ``qcov``             -- for rough paths (H < 1/2) a small-lag covariation
  of log|B - a| against B.

The one-sided variants split the two-sided limit as
``(+-log eps) * L(a, t) + one-sided exclusion sum``; their sum telescopes
back to the two-sided rungs exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LadderBelowResolution, LagNotOnGrid, WrongRegime
from .hilbert import SampledFunction, pv_quadrature, pv_singular_integral
from .ladders import (DEFAULT_CONVERGENCE_TOL, PVEstimate, finish_estimate,
                      make_ladder, validate_ladder)
from .model import HurstIndex
from .occupation import LocalTimeField, local_time
from .sampling import SamplePath, TimeGrid, sample_ensemble

__all__ = [
    "FunctionalSample",
    "default_time_ladder",
    "pv_time_integral",
    "one_sided",
    "from_local_time",
    "qcov",
    "bouleau_yor_sides",
    "bouleau_yor_check",
    "yamada_residual",
    "continuity_modulus",
    "scaling_pairs",
    "ROUTES",
]

ROUTES = ("time_integral", "hilbert_of_local_time", "quadratic_covariation")


@dataclass(frozen=True)
class FunctionalSample:
    """One estimate of C_t(a) with the route and seed that produced it."""

    a: float
    t: float
    route: str
    estimate: PVEstimate
    path_seed: int | None

    def __post_init__(self):
        if self.route not in ROUTES:
            raise ValueError(f"route must be one of {ROUTES}")


def default_time_ladder(grid: TimeGrid, rungs: int = 8) -> np.ndarray:
    """Geometric ladder from T^H / 4 down, floored at the path resolution."""
    eps0 = grid.horizon ** grid.h.value / 4.0
    return make_ladder(eps0, rungs=rungs, floor=grid.resolution_floor)


def _time_ladder(path: SamplePath, eps_ladder, floor: float | None) -> np.ndarray:
    grid = path.grid
    if floor is None:
        floor = grid.resolution_floor
    if eps_ladder is None:
        return make_ladder(grid.horizon ** grid.h.value / 4.0, rungs=8, floor=floor)
    ladder = validate_ladder(eps_ladder)
    if ladder[-1] < floor:
        raise LadderBelowResolution(
            f"smallest epsilon {ladder[-1]:g} is below the resolution floor "
            f"{floor:g}"
        )
    return ladder


def _cutoff_steps(grid: TimeGrid, t: float | None) -> int:
    if t is None:
        return grid.steps
    k = int(round(t / grid.dt))
    if not (1 <= k <= grid.steps) or abs(k * grid.dt - t) > 1e-9 * grid.horizon:
        raise ValueError(f"t = {t} is not a node of the path grid")
    return k


def _exclusion_rungs(left_values: np.ndarray, weights: np.ndarray, a: float,
                     ladder: np.ndarray, side: int = 0) -> np.ndarray:
    """Rung sums  sum_i 1{...} w_i / (B_i - a)  for each epsilon.

    ``side`` 0 keeps |B - a| >= eps, +1 keeps B - a >= eps, -1 keeps
    B - a <= -eps.  Works on a single path (n,) or a stack (paths, n) and
    then returns (paths, rungs).
    """
    d = np.atleast_2d(left_values) - a
    with np.errstate(divide="ignore"):
        integrand = weights / d
    integrand[d == 0.0] = 0.0          # level hits are excluded by every rung
    gate = d if side > 0 else (-d if side < 0 else np.abs(d))
    out = np.empty(d.shape[:1] + (ladder.size,))
    for k, eps in enumerate(ladder):
        out[:, k] = np.sum(integrand, axis=1, where=gate >= eps)
    return out if np.ndim(left_values) > 1 else out[0]


def pv_time_integral(path: SamplePath, a: float, eps_ladder=None,
                     tol: float = DEFAULT_CONVERGENCE_TOL,
                     t: float | None = None,
                     floor: float | None = None) -> PVEstimate:
    """Epsilon-regularized time integral of the singular kernel along the path.

    Rung k is  sum_i 1{|B(s_i) - a| >= eps_k} w_i / (B(s_i) - a)  with the
    exact ds^{2H} step weights w_i taken at left nodes.  ``floor`` overrides
    the default resolution floor T^H n^{-H}; ensemble means of the rungs are
    exact in law at any radius, so means may be compared below the default
    floor, while per-path values get noisy there.
    """
    ladder = _time_ladder(path, eps_ladder, floor)
    k = _cutoff_steps(path.grid, t)
    rungs = _exclusion_rungs(path.values[:k], path.grid.ds2h_weights[:k], a, ladder)
    return finish_estimate(ladder, rungs, tol=tol)


def one_sided(path: SamplePath, a: float, sign: int, eps_ladder=None,
              field: LocalTimeField | None = None,
              tol: float = DEFAULT_CONVERGENCE_TOL,
              floor: float | None = None) -> PVEstimate:
    """One-sided regularization: (sign * log eps) L(a, t) + one-sided sum.

    ``sign`` +1 keeps the region B - a >= eps (log eps carries +), -1 keeps
    B - a <= -eps (log eps carries -).  The weighted local time at the level
    comes from ``field`` (built from the same path when omitted), so plus and
    minus rungs sum to the two-sided rungs exactly.
    """
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    ladder = _time_ladder(path, eps_ladder, floor)
    if field is None:
        field = local_time(path, kind="weighted")
    lt = float(field.density_at(a))
    sums = _exclusion_rungs(path.values[:-1], path.grid.ds2h_weights, a, ladder,
                            side=sign)
    rungs = sign * np.log(ladder) * lt + sums
    return finish_estimate(ladder, rungs, tol=tol)


def default_field_ladder(field: LocalTimeField, a: float, rungs: int = 8) -> np.ndarray:
    """Geometric ladder inside the field's grid, floored at two bin widths."""
    span = min(field.x_max - a, a - field.x_min)
    eps0 = max(span / 4.0, 4.0 * field.width)
    return make_ladder(eps0, rungs=rungs, floor=2.0 * field.width)


def from_local_time(field: LocalTimeField, a: float, eps_ladder=None,
                    tol: float = DEFAULT_CONVERGENCE_TOL) -> PVEstimate:
    """Space-side estimate: v.p. integral of L(x, t)/(x - a) dx over the field.

    The reported value uses the subtracted-singularity rule (identical to
    ``-pi * hilbert_transform(field)`` at the level); the rung values are the
    symmetric-exclusion quadrature at the ladder radii and serve as the
    convergence diagnostic.
    """
    if field.kind != "weighted":
        raise ValueError("the space route needs a weighted local-time field")
    f = SampledFunction(x0=field.x_min + 0.5 * field.width, h=field.width,
                        values=field.mass)
    ladder = default_field_ladder(field, a) if eps_ladder is None \
        else validate_ladder(eps_ladder)
    est = pv_quadrature(f, a, ladder, tol=tol)
    value = pv_singular_integral(f, a)
    return finish_estimate(est.eps_ladder, est.rung_values, tol=tol, value=value)


def qcov(path: SamplePath, f, eps: float, t: float | None = None) -> float:
    """Small-lag covariation  eps^{-2H} sum (f(B_{s+eps}) - f(B_s)) dB ds^{2H}.

    ``eps`` must be a positive multiple of the grid step; the sum runs over
    left nodes s_i <= t - eps with the exact ds^{2H} step weights.  Only
    meaningful (and only allowed) for H < 1/2.
    """
    grid = path.grid
    if grid.h.value >= 0.5:
        raise WrongRegime("the covariation route requires H < 1/2")
    lag = eps / grid.dt
    k = int(round(lag))
    if k < 1 or abs(lag - k) > 1e-9:
        raise LagNotOnGrid(f"eps = {eps} is not a positive multiple of dt = {grid.dt}")
    horizon = grid.horizon if t is None else t
    imax = int(round((horizon - eps) / grid.dt))   # largest i with s_i <= t - eps
    if imax < 0:
        raise ValueError("lag exceeds the requested horizon")
    imax = min(imax, grid.steps - k)
    v = path.values
    fb = f(v)
    stop = imax + 1
    terms = (fb[k: k + stop] - fb[:stop]) * (v[k: k + stop] - v[:stop])
    return float(eps ** (-grid.h.two_h) * np.sum(terms * grid.ds2h_weights[:stop]))


def bouleau_yor_sides(path: SamplePath, f, f_prime, eps: float,
                      field: LocalTimeField | None = None,
                      **field_kwargs) -> tuple[float, float]:
    """Both sides of the covariation/local-time identity on one draw.

    Left: the small-lag covariation of f(B) against B.  Right: the space
    integral -integral f dL, integrated by parts to +integral f'(x) L(x, t) dx
    (f has compact support, so there are no boundary terms).
    """
    left = qcov(path, f, eps)
    if field is None:
        field = local_time(path, kind="weighted", **field_kwargs)
    right = float(np.sum(f_prime(field.centers) * field.mass) * field.width)
    return left, right


def bouleau_yor_check(path: SamplePath, f, f_prime, eps: float,
                      field: LocalTimeField | None = None,
                      **field_kwargs) -> float:
    """|covariation side - local-time side| for a C^1 compactly supported f."""
    left, right = bouleau_yor_sides(path, f, f_prime, eps, field=field,
                                    **field_kwargs)
    return abs(left - right)


def _entropy(x: np.ndarray | float):
    """F(x) = x log|x| - x with the continuity convention 0 log 0 = 0."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    nz = x != 0.0
    out[nz] = x[nz] * np.log(np.abs(x[nz])) - x[nz]
    return out if out.ndim else float(out)


def yamada_residual(path: SamplePath, a: float, eps_ladder=None) -> float:
    """Implied stochastic-integral term of the entropy-function decomposition.

    Returns F(B_T - a) - F(-a) - C_T(a)/2 with F(x) = x log|x| - x and the
    time-integral route for C.  Its ensemble mean estimates the expectation of
    a divergence-type integral and must vanish within Monte Carlo error.
    """
    bt = float(path.values[-1])
    c = pv_time_integral(path, a, eps_ladder=eps_ladder).value
    return float(_entropy(bt - a) - _entropy(-a) - 0.5 * c)


def scaling_pairs(gaps) -> list[tuple[float, float]]:
    """Horizon pairs (g, 2 g) for each gap g: gaps shrink, endpoints scale."""
    return [(float(g), 2.0 * float(g)) for g in gaps]


def continuity_modulus(h, t_pairs, paths: int, seed: int, n: int = 2048,
                       a: float = 0.0, method: str = "circulant") -> list[dict]:
    """Monte Carlo time-continuity table  E|C_{t'}(a) - C_t(a)|^2  per pair.

    The normalizing exponent is 2 H0 with H0 = H for 1/2 < H <= 2/3 and
    H0 = 1 - H/2 above; each row reports the mean square increment, its
    standard error, and the ratio against (t' - t)^{2 H0}.  Pairs from
    ``scaling_pairs`` make successive rows exact rescalings of each other,
    which turns the boundedness of the ratio into a sharp trend check.
    Requires H > 1/2.
    """
    hurst = h if isinstance(h, HurstIndex) else HurstIndex(float(h))
    if hurst.value <= 0.5:
        raise WrongRegime("the time-continuity table is for H > 1/2")
    h0 = hurst.value if hurst.value <= 2.0 / 3.0 else 1.0 - 0.5 * hurst.value
    rows = []
    for t_lo, t_hi in t_pairs:
        if not (0.0 <= t_lo < t_hi):
            raise ValueError(f"need 0 <= t < t', got ({t_lo}, {t_hi})")
        grid = TimeGrid(horizon=t_hi, steps=n, h=hurst)
        ladder = default_time_ladder(grid)
        k_lo = 0 if t_lo == 0.0 else _cutoff_steps(grid, t_lo)
        sums = 0.0
        sq = 0.0
        done = 0
        while done < paths:
            count = min(1024, paths - done)
            values = sample_ensemble(grid, seed, count, method=method, start=done)
            w = grid.ds2h_weights
            hi = _exclusion_rungs(values[:, :-1], w, a, ladder[-1:])[:, 0]
            if k_lo == 0:
                lo = np.zeros(count)
            else:
                lo = _exclusion_rungs(values[:, :k_lo], w[:k_lo], a, ladder[-1:])[:, 0]
            d2 = (hi - lo) ** 2
            sums += d2.sum()
            sq += (d2 ** 2).sum()
            done += count
        msq = sums / paths
        se = float(np.sqrt(max(sq / paths - msq ** 2, 0.0) / paths))
        gap = t_hi - t_lo
        rows.append({
            "t": t_lo,
            "t_prime": t_hi,
            "gap": gap,
            "mean_sq_increment": float(msq),
            "se": se,
            "ratio": float(msq / gap ** (2.0 * h0)),
            "h0": h0,
        })
    return rows
