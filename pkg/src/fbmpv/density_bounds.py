"""Quadrature verification of the joint-density increment and envelope bounds.

Each check evaluates both sides of an inequality at explicit parameter
points, or integrates a singular-looking (but in fact bounded) integrand by
adaptive quadrature and compares against the claimed envelope.  Parameter
samples are drawn from a seeded generator, so every report reproduces.
Infinite domains are truncated at TAIL_STDS marginal standard deviations;
the Gaussian tail beyond that is far below the quadrature tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .errors import QuadratureNonConvergence
from .model import PairStats, marginal_density, pair_density, pair_stats, psi_correction

__all__ = [
    "BoundReport",
    "check_density_increment",
    "density_increment_report",
    "lambda1_quadrature",
    "lambda1_report",
    "lambda34_quadrature",
    "log_weighted_density_integral",
    "log_weighted_report",
    "loglog_slope",
]

TAIL_STDS = 12.0
QUAD_EPSABS = 1e-10
QUAD_EPSREL = 1e-8


@dataclass(frozen=True)
class BoundReport:
    """Left sides against envelopes over a parameter sample.

    ``fitted_constant`` is the largest ratio lhs/envelope across the sample,
    so ``lhs <= fitted_constant * envelope`` holds by construction; the report
    passes iff that constant is finite.
    """

    lemma_id: str
    sample_points: list = field(repr=False)
    lhs: np.ndarray = field(repr=False)
    rhs_envelope: np.ndarray = field(repr=False)

    @property
    def ratios(self) -> np.ndarray:
        return self.lhs / self.rhs_envelope

    @property
    def fitted_constant(self) -> float:
        return float(np.max(self.ratios))

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.fitted_constant)) and bool(
            np.all(self.rhs_envelope > 0)
        )

    def rows(self) -> list[dict]:
        out = []
        for point, lhs, rhs in zip(self.sample_points, self.lhs, self.rhs_envelope):
            out.append({
                "lemma": self.lemma_id, "params": point,
                "lhs": float(lhs), "envelope": float(rhs),
                "ratio": float(lhs / rhs),
            })
        return out


def _quad(func, lo, hi, **kw):
    val, err = integrate.quad(func, lo, hi, epsabs=QUAD_EPSABS,
                              epsrel=QUAD_EPSREL, limit=300, **kw)
    if err > max(QUAD_EPSABS * 1e3, abs(val) * 1e-5):
        raise QuadratureNonConvergence(
            f"1-D quadrature error estimate {err:.2e} for value {val:.6e}",
            achieved=err,
        )
    return val


def _dblquad(func, xlo, xhi, ylo, yhi):
    val, err = integrate.dblquad(func, xlo, xhi, ylo, yhi,
                                 epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL)
    if err > max(QUAD_EPSABS * 1e4, abs(val) * 1e-4):
        raise QuadratureNonConvergence(
            f"2-D quadrature error estimate {err:.2e} for value {val:.6e}",
            achieved=err,
        )
    return val


# --------------------------------------------------------------------------
# density increments in one slot


def check_density_increment(h, s, r, x, y, z, beta) -> dict:
    """Hoelder-type increment bound of the joint density in its first slot.

    lhs = |phi(x, y) - phi(z, y)|,
    envelope = r^{beta H} / rho^{1+beta} * |x - z|^beta * exp(-beta y^2 / (2 r^{2H})).
    The displayed constant is one, so lhs <= envelope outright.
    """
    if not (0.0 <= beta <= 1.0):
        raise ValueError("beta must lie in [0, 1]")
    stats = pair_stats(h, s, r).require_nondegenerate()
    lhs = abs(pair_density(stats, x, y) - pair_density(stats, z, y))
    hv = stats.h.value
    rhs = (r ** (beta * hv) / stats.rho ** (1.0 + beta)
           * abs(x - z) ** beta * np.exp(-beta * y * y / (2.0 * r ** (2 * hv))))
    return {"h": stats.h.value, "s": s, "r": r, "x": x, "y": y, "z": z,
            "beta": beta, "lhs": float(lhs), "envelope": float(rhs)}


def density_increment_report(samples: int = 200, seed: int = 20240915) -> BoundReport:
    """Increment bound over a seeded random sample of parameters."""
    rng = np.random.default_rng(seed)
    pts, lhs, rhs = [], [], []
    for _ in range(samples):
        hv = rng.uniform(0.05, 0.95)
        r = rng.uniform(0.1, 2.0)
        s = r + rng.uniform(0.05, 2.0)
        x, y, z = rng.normal(0.0, 1.5, size=3)
        beta = rng.uniform(0.0, 1.0)
        entry = check_density_increment(hv, s, r, x, y, z, beta)
        pts.append(entry)
        lhs.append(entry["lhs"])
        rhs.append(entry["envelope"])
    return BoundReport("density-increment", pts, np.array(lhs), np.array(rhs))


# --------------------------------------------------------------------------
# the four-region singular double integral


def _corner_integrand(stats: PairStats, a: float, b: float):
    def func(y, x):
        num = abs(
            pair_density(stats, x, y) - pair_density(stats, x, b)
            - pair_density(stats, a, y) + pair_density(stats, a, b)
        )
        return num / ((x - a) * (y - b))
    return func


def lambda1_quadrature(h, s, r, a, b, beta=0.5) -> float:
    """Adaptive quadrature of the corrected-density singular double integral.

    integral over x > a, y > b of |Psi(x, y)| / ((x - a)(y - b)), split into
    the four regions where the correction reduces to second differences,
    single differences, or the bare density.  ``beta`` only labels the
    envelope this value is compared against.
    """
    stats = pair_stats(h, s, r).require_nondegenerate()
    hv = stats.h.value
    x_top = a + 1.0 + TAIL_STDS * s ** hv
    y_top = b + 1.0 + TAIL_STDS * r ** hv

    corner = _dblquad(_corner_integrand(stats, a, b), a, a + 1.0, b, b + 1.0)

    def strip_x(y, x):      # x beyond a+1, y near b
        return abs(pair_density(stats, x, y) - pair_density(stats, x, b)) \
            / ((x - a) * (y - b))

    def strip_y(y, x):      # x near a, y beyond b+1
        return abs(pair_density(stats, x, y) - pair_density(stats, a, y)) \
            / ((x - a) * (y - b))

    def far(y, x):
        return pair_density(stats, x, y) / ((x - a) * (y - b))

    band_x = _dblquad(strip_x, a + 1.0, x_top, b, b + 1.0)
    band_y = _dblquad(strip_y, a, a + 1.0, b + 1.0, y_top)
    tail = _dblquad(far, a + 1.0, x_top, b + 1.0, y_top)
    return corner + band_x + band_y + tail


def lambda1_envelope(h, s, r, beta) -> float:
    hv = float(h)
    return s ** (beta * hv / 2.0) / (r ** ((1 + beta) * hv) * (s - r) ** ((1 + beta) * hv))


def lambda1_report(samples: int = 6, seed: int = 20240916, beta: float = 0.5) -> BoundReport:
    rng = np.random.default_rng(seed)
    pts, lhs, rhs = [], [], []
    for _ in range(samples):
        hv = rng.uniform(0.55, 0.9)
        r = rng.uniform(0.2, 1.5)
        s = r + rng.uniform(0.1, 1.5)
        a, b = rng.normal(0.0, 1.0, size=2)
        val = lambda1_quadrature(hv, s, r, a, b, beta)
        pts.append({"h": hv, "s": s, "r": r, "a": a, "b": b, "beta": beta})
        lhs.append(val)
        rhs.append(lambda1_envelope(hv, s, r, beta))
    return BoundReport("corrected-density-integral", pts, np.array(lhs), np.array(rhs))


# --------------------------------------------------------------------------
# the truncated epsilon-square integrals


def lambda34_quadrature(h, s, r, a, eps, beta=0.5) -> tuple[float, float]:
    """The two epsilon-square integrals of the regularization error.

    On the square (a, a+eps)^2, with the unit-square substitution
    x = a + eps u, y = a + eps v:

    * first value: integrand (log(eps u) - u log eps)(log(eps v) - v log eps)
      against the joint density -- the value branch;
    * second: (1/(eps u) - log(eps)/eps)(1/(eps v) - log(eps)/eps) against
      |Psi| -- the derivative branch.

    ``beta`` labels the envelope used by callers for the second value.
    """
    if not (0.0 < eps < 1.0):
        raise ValueError("eps must lie in (0, 1)")
    stats = pair_stats(h, s, r).require_nondegenerate()
    log_eps = np.log(eps)

    def bracket_log(u):
        return (1.0 - u) * log_eps + np.log(u)

    def f3(v, u):
        return (bracket_log(u) * bracket_log(v)
                * pair_density(stats, a + eps * u, a + eps * v) * eps * eps)

    def bracket_inv(u):
        return (1.0 / u - log_eps) / eps

    def f4(v, u):
        psi = abs(psi_correction(stats, a, a, a + eps * u, a + eps * v))
        return bracket_inv(u) * bracket_inv(v) * psi * eps * eps

    lam3 = _dblquad(f3, 0.0, 1.0, 0.0, 1.0)
    lam4 = _dblquad(f4, 0.0, 1.0, 0.0, 1.0)
    return lam3, lam4


# --------------------------------------------------------------------------
# log-weighted integrals of the density gradient


def _density_dx(stats: PairStats, x, y):
    """d/dx of the joint density at (x, y)."""
    hv = stats.h.value
    return -pair_density(stats, x, y) * (stats.r ** (2 * hv) * x - stats.mu * y) \
        / stats.rho2


def log_weighted_density_integral(h, s, r, a, alpha=0.5) -> float:
    """integral over x > a of (1 + |log(x - a)|) |d/dx phi(x, a)| dx.

    The kink of |log| at x = a + 1 and the integrable log blow-up at x = a are
    passed to the quadrature as special points.  ``alpha`` labels the envelope
    (s - r)^{-(1+alpha) H} r^{-(1+alpha) H} the value is compared against.
    """
    if not (0.0 < alpha < 1.0):
        raise ValueError("alpha must lie in (0, 1)")
    stats = pair_stats(h, s, r).require_nondegenerate()
    hv = stats.h.value
    top = a + 1.0 + TAIL_STDS * s ** hv

    def func(x):
        u = x - a
        if u <= 0.0:
            return 0.0
        return (1.0 + abs(np.log(u))) * abs(_density_dx(stats, x, a))

    return _quad(func, a, top, points=[a + 1.0, a + 1e-6])


def log_weighted_envelope(h, s, r, alpha) -> float:
    hv = float(h)
    return (s - r) ** (-(1 + alpha) * hv) * r ** (-(1 + alpha) * hv)


def log_weighted_report(seed: int = 20240917, alpha: float = 0.5,
                        levels=(-2.0, -0.5, 0.0, 0.5, 2.0)) -> BoundReport:
    """Envelope report over both signs of the level and random pair times."""
    rng = np.random.default_rng(seed)
    pts, lhs, rhs = [], [], []
    for a in levels:
        hv = rng.uniform(0.55, 0.9)
        r = rng.uniform(0.2, 1.5)
        s = r + rng.uniform(0.1, 1.5)
        alo = max(1.0 - hv, alpha)  # keep alpha in the valid window (1-H, 1)
        aa = 0.5 * (alo + 1.0)
        val = log_weighted_density_integral(hv, s, r, a, aa)
        pts.append({"h": hv, "s": s, "r": r, "a": a, "alpha": aa})
        lhs.append(val)
        rhs.append(log_weighted_envelope(hv, s, r, aa))
    return BoundReport("log-weighted-gradient-integral", pts,
                       np.array(lhs), np.array(rhs))


def loglog_slope(xs, ys) -> float:
    """Least-squares slope of log y against log x (scaling-exponent fits)."""
    lx = np.log(np.asarray(xs, dtype=float))
    ly = np.log(np.asarray(ys, dtype=float))
    return float(np.polyfit(lx, ly, 1)[0])
