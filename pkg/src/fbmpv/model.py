"""Exact second-order structure of fractional Brownian motion.

Covariance, the long-memory kernel, marginal and bivariate Gaussian
densities, and the four-term correction function used by the singular
double integrals.  Everything here is a pure function of value inputs;
arrays broadcast in the usual numpy way.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, DegeneratePair, SingularDiagonal, WrongRegime

__all__ = [
    "Regime",
    "HurstIndex",
    "PairStats",
    "covariance",
    "pair_stats",
    "phi_kernel",
    "marginal_density",
    "pair_density",
    "psi_correction",
]

# Relative clamp window for rounding noise in the determinant factor.
_RHO2_CLAMP_REL = 1e-12


class Regime(enum.Enum):
    """Roughness regime of a Hurst index."""

    SUB = "sub"          # H < 1/2
    BROWNIAN = "brownian"  # H = 1/2
    SUPER = "super"      # H > 1/2


@dataclass(frozen=True)
class HurstIndex:
    """Validated Hurst index in the open interval (0, 1).

    Attributes
    ----------
    value : float
        The index itself.
    regime : Regime
        SUB for value < 1/2, BROWNIAN at exactly 1/2, SUPER above.
    """

    value: float

    def __post_init__(self):
        v = float(self.value)
        if not (0.0 < v < 1.0):
            raise ValueError(f"Hurst index must lie strictly in (0, 1), got {v!r}")
        object.__setattr__(self, "value", v)

    @property
    def regime(self) -> Regime:
        if self.value < 0.5:
            return Regime.SUB
        if self.value == 0.5:
            return Regime.BROWNIAN
        return Regime.SUPER

    @property
    def two_h(self) -> float:
        return 2.0 * self.value

    def __float__(self) -> float:
        return self.value


def _as_hurst(h) -> HurstIndex:
    return h if isinstance(h, HurstIndex) else HurstIndex(float(h))


def covariance(h, s, t):
    """Covariance E[B_s B_t] = (t^{2H} + s^{2H} - |t - s|^{2H}) / 2.

    Symmetric in (s, t); equals ``t**(2 H)`` on the diagonal.  Accepts
    arrays and broadcasts.
    """
    hh = _as_hurst(h).two_h
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    if np.any(s < 0) or np.any(t < 0):
        raise ValueError("covariance requires nonnegative times")
    out = 0.5 * (np.power(t, hh) + np.power(s, hh) - np.power(np.abs(t - s), hh))
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class PairStats:
    """Joint second-order data of (B_s, B_r).

    ``mu`` is the covariance of the pair, ``rho2`` the determinant factor
    (s r)^{2H} - mu^2 of the joint Gaussian; ``rho2`` vanishes exactly when
    s = r and is clamped to zero against rounding noise.
    """

    h: HurstIndex
    s: float
    r: float
    mu: float
    rho2: float

    @property
    def rho(self) -> float:
        return float(np.sqrt(self.rho2))

    @property
    def var_s(self) -> float:
        return self.s ** self.h.two_h

    @property
    def var_r(self) -> float:
        return self.r ** self.h.two_h

    def require_nondegenerate(self) -> "PairStats":
        if self.rho2 <= 0.0:
            raise DegeneratePair(
                f"pair (s={self.s}, r={self.r}) has rho2 = {self.rho2}; "
                "a strictly positive determinant factor is required"
            )
        return self


def pair_stats(h, s, r) -> PairStats:
    """Second-order statistics of the pair (B_s, B_r) for s, r > 0."""
    hi = _as_hurst(h)
    s = float(s)
    r = float(r)
    if s <= 0 or r <= 0:
        raise ValueError("pair_stats requires strictly positive times")
    mu = covariance(hi, s, r)
    scale = (r * s) ** hi.two_h
    rho2 = scale - mu * mu
    if rho2 < 0.0:
        if rho2 > -_RHO2_CLAMP_REL * scale:
            rho2 = 0.0
        else:
            raise ConsistencyError(
                f"rho2 = {rho2} at (s={s}, r={r}, H={hi.value}): exact formula "
                "guarantees nonnegativity; covariance implementation is broken"
            )
    return PairStats(h=hi, s=s, r=r, mu=mu, rho2=rho2)


def phi_kernel(h, s, r):
    """Long-memory kernel H(2H-1)|s-r|^{2H-2}, defined only for H > 1/2.

    Raises
    ------
    WrongRegime
        If H <= 1/2 (the kernel changes sign/meaning there).
    SingularDiagonal
        If s = r, where the kernel blows up.
    """
    hi = _as_hurst(h)
    if hi.regime is not Regime.SUPER:
        raise WrongRegime(f"phi_kernel requires H > 1/2, got H = {hi.value}")
    s = np.asarray(s, dtype=float)
    r = np.asarray(r, dtype=float)
    gap = np.abs(s - r)
    if np.any(gap == 0.0):
        raise SingularDiagonal("phi_kernel is singular on the diagonal s = r")
    out = hi.value * (hi.two_h - 1.0) * np.power(gap, hi.two_h - 2.0)
    return out if out.ndim else float(out)


def marginal_density(h, s, x):
    """Density of B_s at x: centered Gaussian with variance s^{2H}."""
    hi = _as_hurst(h)
    s = float(s)
    if s <= 0:
        raise ValueError("marginal_density requires s > 0")
    x = np.asarray(x, dtype=float)
    var = s ** hi.two_h
    out = np.exp(-0.5 * x * x / var) / np.sqrt(2.0 * np.pi * var)
    return out if out.ndim else float(out)


def pair_density(stats: PairStats, x, y):
    """Joint density of (B_s, B_r) at (x, y).

    Explicit bivariate Gaussian
    ``exp(-(r^{2H} x^2 - 2 mu x y + s^{2H} y^2) / (2 rho^2)) / (2 pi rho)``,
    which is symmetric under exchanging (x, s) with (y, r).
    """
    stats.require_nondegenerate()
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    q = stats.var_r * x * x - 2.0 * stats.mu * x * y + stats.var_s * y * y
    out = np.exp(-0.5 * q / stats.rho2) / (2.0 * np.pi * stats.rho)
    return out if out.ndim else float(out)


def psi_correction(stats: PairStats, a, b, x, y):
    """Four-term corrected density used inside the singular double integrals.

    phi(x, y) - phi(x, b) 1{y < 1 + b} - phi(a, y) 1{x < 1 + a}
    + phi(a, b) 1{x < 1 + a} 1{y < 1 + b},
    with phi the joint density of (B_s, B_r).  Vanishes at (x, y) = (a, b)
    and reduces to phi(x, y) once both offsets exceed one.
    """
    stats.require_nondegenerate()
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    tx = (1.0 + a - x) > 0.0
    ty = (1.0 + b - y) > 0.0
    out = (
        pair_density(stats, x, y)
        - pair_density(stats, x, b) * ty
        - pair_density(stats, a, y) * tx
        + pair_density(stats, a, b) * (tx & ty)
    )
    out = np.asarray(out)
    return out if out.ndim else float(out)
