"""Scalar Cauchy principal values and a discrete Hilbert transform.

Conventions, fixed once for the whole package:

* ``pv_quadrature`` and ``pv_singular_integral`` integrate against the kernel
  ``1/(x - a)``: they estimate  v.p. integral of f(x)/(x - a) dx.
* ``hilbert_transform`` uses the convolution form of the transform,
  ``(Hf)(a) = (1/pi) v.p. integral of f(x)/(a - x) dx``,
  the convention under which H is an L^2 isometry with H(Hf) = -f and the
  transform of 1/(1+x^2) is x/(1+x^2).  The two objects therefore satisfy
  ``pv_singular_integral(f, a) == -pi * (Hf)(a)`` on the same discretization.

The closed form ``pv_log_integral`` (kernel ``1/(c - x)``) pins the signs:
v.p. integral over (a, b) of dx/(c - x) = log((c - a)/(b - c)).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import fftconvolve

from .errors import LadderTooFine, OrderViolation, SingularityOffGrid
from .ladders import DEFAULT_CONVERGENCE_TOL, finish_estimate, validate_ladder

__all__ = [
    "SampledFunction",
    "pv_log_integral",
    "pv_quadrature",
    "pv_singular_integral",
    "hilbert_transform",
    "hilbert_inverse",
]

COMPACT_SUPPORT_REL = 1e-12
# Above this many nodes the transform switches to the FFT evaluation of the
# same quadrature formula (identical up to rounding).
FAST_ENGINE_MIN_NODES = 1024


@dataclass(frozen=True)
class SampledFunction:
    """Real function sampled on a uniform grid."""

    x0: float
    h: float
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", v)
        if self.h <= 0 or v.ndim != 1 or v.size < 3:
            raise ValueError("need h > 0 and at least 3 samples")

    @classmethod
    def from_grid(cls, x, values) -> "SampledFunction":
        x = np.asarray(x, dtype=float)
        steps = np.diff(x)
        if not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
            raise ValueError("grid must be uniform")
        return cls(x0=float(x[0]), h=float(steps[0]), values=np.asarray(values, float))

    @property
    def size(self) -> int:
        return self.values.size

    @property
    def x_end(self) -> float:
        return self.x0 + (self.size - 1) * self.h

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.h * np.arange(self.size)

    def interp(self, xq):
        return np.interp(xq, self.x, self.values)

    def is_compactly_supported(self) -> bool:
        top = float(np.max(np.abs(self.values)))
        if top == 0.0:
            return True
        return max(abs(self.values[0]), abs(self.values[-1])) <= COMPACT_SUPPORT_REL * top

    def write_csv(self, fname) -> None:
        with open(fname, "w", encoding="ascii") as fh:
            fh.write("x,value\n")
            for xi, vi in zip(self.x, self.values):
                fh.write(f"{xi:.17g},{vi:.17g}\n")


def _require_support(f: SampledFunction) -> None:
    if not f.is_compactly_supported():
        warnings.warn(
            "sampled function is not negligible at the grid ends; "
            "principal-value results will carry truncation error",
            stacklevel=3,
        )


def pv_log_integral(a: float, c: float, b: float) -> float:
    """Closed form v.p. integral over (a, b) of dx/(c - x) = log((c-a)/(b-c))."""
    if not (a < c < b):
        raise OrderViolation(f"need a < c < b, got a={a}, c={c}, b={b}")
    return float(np.log((c - a) / (b - c)))


def _side_integral(f: SampledFunction, a: float, cut: float, side: int) -> float:
    """Trapezoid of f(x)/(x - a) over [x0, cut] (side -1) or [cut, x_end] (+1)."""
    x, v = f.x, f.values
    if side < 0:
        if cut <= f.x0:
            return 0.0
        k = int(np.searchsorted(x, cut, side="right")) - 1
        xs, vs = x[: k + 1], v[: k + 1]
        lo, hi = xs[-1], cut
        g_node = vs[-1] / (xs[-1] - a)
    else:
        if cut >= f.x_end:
            return 0.0
        k = int(np.searchsorted(x, cut, side="left"))
        xs, vs = x[k:], v[k:]
        lo, hi = cut, xs[0]
        g_node = vs[0] / (xs[0] - a)
    g = vs / (xs - a)
    total = float(np.trapezoid(g, xs)) if xs.size > 1 else 0.0
    if hi > lo:
        g_cut = float(f.interp(cut)) / (cut - a)
        total += 0.5 * (g_cut + g_node) * (hi - lo)
    return total


def pv_quadrature(f: SampledFunction, a: float, eps_ladder,
                  tol: float = DEFAULT_CONVERGENCE_TOL):
    """Symmetric-exclusion estimate of v.p. integral of f(x)/(x - a) dx.

    Rung k integrates over {|x - a| >= eps_k} by trapezoid with the exclusion
    window cut exactly at a -/+ eps_k (function values at the cuts by linear
    interpolation).  Requires a strictly inside the grid and eps >= 2 h.
    """
    ladder = validate_ladder(eps_ladder)
    if not (f.x0 < a < f.x_end):
        raise SingularityOffGrid(f"a = {a} not strictly inside [{f.x0}, {f.x_end}]")
    if ladder[-1] < 2.0 * f.h:
        raise LadderTooFine(
            f"smallest exclusion radius {ladder[-1]:g} is below 2 h = {2 * f.h:g}"
        )
    _require_support(f)
    rungs = [
        _side_integral(f, a, a - eps, -1) + _side_integral(f, a, a + eps, +1)
        for eps in ladder
    ]
    return finish_estimate(ladder, rungs, tol=tol)


def _node_slopes(values: np.ndarray, h: float) -> np.ndarray:
    """Derivative estimates at the nodes: central differences, one-sided at ends."""
    d = np.empty_like(values)
    d[1:-1] = (values[2:] - values[:-2]) / (2.0 * h)
    d[0] = (values[1] - values[0]) / h
    d[-1] = (values[-1] - values[-2]) / h
    return d


def pv_singular_integral(f: SampledFunction, a: float) -> float:
    """v.p. integral of f(x)/(x - a) dx with the singularity removed by subtraction.

    Writes f(x)/(x-a) = (f(x) - f(a))/(x-a) + f(a)/(x-a); the first term is
    regular for Hoelder f and is integrated by trapezoid, the second has the
    exact log value over the grid.  Agrees with ``-pi * hilbert_transform(f)``
    at interior nodes by construction.
    """
    if not (f.x0 < a < f.x_end):
        raise SingularityOffGrid(f"a = {a} not strictly inside [{f.x0}, {f.x_end}]")
    _require_support(f)
    x, v, h = f.x, f.values, f.h
    fa = float(f.interp(a))
    d = x - a
    on_node = np.abs(d) < 1e-12 * max(h, abs(a))
    g = np.empty_like(v)
    np.divide(v - fa, d, out=g, where=~on_node)
    if np.any(on_node):
        g[on_node] = _node_slopes(v, h)[on_node]
    smooth = float(np.trapezoid(g, dx=h))
    return smooth + fa * float(np.log((f.x_end - a) / (a - f.x0)))


def _log_compensation(f: SampledFunction) -> np.ndarray:
    """log((x_end - x_i)/(x_i - x0)) with end distances floored at h.

    The floor only matters at the two boundary nodes, where compact support
    makes the multiplying sample negligible; it keeps the formula finite.
    """
    x, h = f.x, f.h
    up = np.maximum(f.x_end - x, h)
    down = np.maximum(x - f.x0, h)
    return np.log(up / down)


def _boundary_row(f: SampledFunction, b: int, slopes: np.ndarray) -> float:
    x, v = f.x, f.values
    d = x - x[b]
    g = np.empty(f.size)
    nz = d != 0
    g[nz] = (v[nz] - v[b]) / d[nz]
    g[b] = slopes[b]
    w = np.ones(f.size)
    w[0] = w[-1] = 0.5
    return float(g @ w)


def _transform_reference(f: SampledFunction, chunk: int = 256) -> np.ndarray:
    x, v, h = f.x, f.values, f.h
    m = f.size
    slopes = _node_slopes(v, h)
    weights = np.ones(m)
    weights[0] = weights[-1] = 0.5
    comp = _log_compensation(f)
    s = np.empty(m)
    for lo in range(0, m, chunk):
        hi = min(lo + chunk, m)
        rows = np.arange(lo, hi)
        dx = x[None, :] - x[rows, None]
        num = v[None, :] - v[rows, None]
        dx[rows - lo, rows] = 1.0
        g = num / dx
        g[rows - lo, rows] = slopes[rows]
        s[lo:hi] = g @ weights
    return -(h * s + v * comp) / np.pi


def _transform_fft(f: SampledFunction) -> np.ndarray:
    """FFT evaluation of the reference sums through one full convolution."""
    x, v, h = f.x, f.values, f.h
    m = f.size
    slopes = _node_slopes(v, h)
    comp = _log_compensation(f)

    t = np.arange(-(m - 1), m, dtype=float)
    kernel = np.divide(1.0, t, out=np.zeros_like(t), where=t != 0)
    c_i = -fftconvolve(v, kernel)[m - 1: 2 * m - 1]   # sum_{j != i} f_j / (j - i)

    harmonic = np.concatenate([[0.0], np.cumsum(1.0 / np.arange(1.0, m))])
    idx = np.arange(m)
    t_i = harmonic[m - 1 - idx] - harmonic[idx]        # sum_{j != i} 1 / (j - i)

    s = (c_i - v * t_i) / h
    # trapezoid half-weights on the two end columns, full weight on the diagonal
    with np.errstate(divide="ignore", invalid="ignore"):
        left = (v[0] - v) / (x[0] - x)
        right = (v[-1] - v) / (x[-1] - x)
    left[0] = slopes[0]
    right[-1] = slopes[-1]
    s = s - 0.5 * left - 0.5 * right + slopes
    # boundary rows mix the diagonal with an end column; rebuild them directly
    s[0] = _boundary_row(f, 0, slopes)
    s[-1] = _boundary_row(f, m - 1, slopes)
    return -(h * s + v * comp) / np.pi


def hilbert_transform(f: SampledFunction, engine: str = "auto") -> SampledFunction:
    """Discrete Hilbert transform (Hf)(a) = (1/pi) v.p. integral f(x)/(a - x) dx.

    Node values come from the subtracted-singularity trapezoid rule; ``engine``
    selects the direct O(m^2) evaluation (``"reference"``) or the FFT
    convolution form of the same sums (``"fft"``, default above
    ``FAST_ENGINE_MIN_NODES`` nodes).  The two agree to rounding.
    """
    _require_support(f)
    if engine == "auto":
        engine = "fft" if f.size >= FAST_ENGINE_MIN_NODES else "reference"
    if engine == "reference":
        values = _transform_reference(f)
    elif engine == "fft":
        values = _transform_fft(f)
    else:
        raise ValueError(f"unknown engine {engine!r}")
    return SampledFunction(x0=f.x0, h=f.h, values=values)


def hilbert_inverse(g: SampledFunction, engine: str = "auto") -> SampledFunction:
    """Inverse transform, implemented as -H (H composed with H is minus identity).

    Transforms of compactly supported functions have heavy 1/x tails, so no
    support check is applied to the argument here; the grid-truncation error
    of the round trip is borne by the caller's tolerance.
    """
    if engine == "auto":
        engine = "fft" if g.size >= FAST_ENGINE_MIN_NODES else "reference"
    values = _transform_reference(g) if engine == "reference" else _transform_fft(g)
    return SampledFunction(x0=g.x0, h=g.h, values=-values)
