"""Deterministic function families behind the smooth-approximation arguments.

A bump mollifier on (0, 2), its rescalings, the mollified one-sided
logarithm G_n, the dominating envelopes psi1/psi2, and the C^1 regularized
entropy family F_eps.  Everything is deterministic; the only numerics are
adaptive quadratures with absolute tolerance 1e-10.
"""

from __future__ import annotations

import numpy as np
from scipy import integrate

__all__ = [
    "ZETA_NORM_INTEGRAL",
    "ZETA_C",
    "zeta",
    "zeta_prime",
    "zeta_n",
    "g_n",
    "g_n_prime",
    "g_n_prime_cdiff",
    "psi1",
    "psi2",
    "f_eps",
    "f_eps_d1",
    "f_eps_d2",
    "entropy_plus",
]

QUAD_ABS_TOL = 1e-10

# integral over (0, 2) of exp(1/((x-1)^2 - 1)) dx, frozen from adaptive
# quadrature at 1e-14 tolerance; ZETA_C is its reciprocal, the normalizer
# that gives the bump unit mass.
ZETA_NORM_INTEGRAL = 0.4439938161680793
ZETA_C = 1.0 / ZETA_NORM_INTEGRAL

# Envelope constant: covers the 32/x (1 - log x) branch bound of the mollified
# derivative with slack, and the tail branch constant (about 2.53) trivially.
ENVELOPE_C = 34.0


def zeta(x):
    """Unit-mass bump  c exp(1/((x-1)^2 - 1)) on (0, 2), zero elsewhere."""
    x = np.asarray(x, dtype=float)
    inside = (x > 0.0) & (x < 2.0)
    out = np.zeros_like(x)
    u = x[inside] - 1.0
    out[inside] = ZETA_C * np.exp(1.0 / (u * u - 1.0))
    return out if out.ndim else float(out)


def zeta_prime(x):
    """Derivative of the bump: zeta(x) * (-2 (x-1)) / ((x-1)^2 - 1)^2 on (0, 2)."""
    x = np.asarray(x, dtype=float)
    inside = (x > 0.0) & (x < 2.0)
    out = np.zeros_like(x)
    u = x[inside] - 1.0
    w = u * u - 1.0
    out[inside] = ZETA_C * np.exp(1.0 / w) * (-2.0 * u) / (w * w)
    return out if out.ndim else float(out)


def zeta_n(n: int, x):
    """Rescaled mollifier n zeta(n x); unit mass on (0, 2/n)."""
    _check_n(n)
    x = np.asarray(x, dtype=float)
    out = n * zeta(n * x)
    return out if np.ndim(out) else float(out)


def _check_n(n: int) -> None:
    if int(n) != n or n < 2:
        raise ValueError("mollifier index n must be an integer >= 2")


def entropy_plus(x):
    """One-sided entropy F_+(x) = x log x - x for x > 0, zero at and below 0."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0.0
    out[pos] = x[pos] * np.log(x[pos]) - x[pos]
    return out if out.ndim else float(out)


def g_n(n: int, x: float) -> float:
    """Mollified one-sided logarithm  integral over (0, 2) of log(x - y/n) zeta(y) dy.

    The integrand lives on y < n x, so G_n vanishes for x <= 0 and converges
    to log x pointwise away from 0 as n grows.
    """
    _check_n(n)
    if x <= 0.0:
        return 0.0
    upper = min(2.0, n * x)
    val, err = integrate.quad(
        lambda y: np.log(x - y / n) * zeta(y), 0.0, upper,
        epsabs=QUAD_ABS_TOL, epsrel=1e-10, limit=200,
    )
    return float(val)


def g_n_prime(n: int, x: float) -> float:
    """Derivative of G_n by the analytic convolution formulas.

    For x > 2/n the logarithm is smooth on the bump's support and
    G_n'(x) = integral of zeta(y) n/(n x - y) dy; at 0 < x <= 2/n the
    derivative moves onto the mollifier instead,
    G_n'(x) = n^2 integral over (0, x) of log(y) zeta'(n (x - y)) dy.
    """
    _check_n(n)
    if x <= 0.0:
        return 0.0
    if x > 2.0 / n:
        val, _ = integrate.quad(
            lambda y: zeta(y) * n / (n * x - y), 0.0, 2.0,
            epsabs=QUAD_ABS_TOL, epsrel=1e-10, limit=200,
        )
    else:
        val, _ = integrate.quad(
            lambda y: np.log(y) * zeta_prime(n * (x - y)) * n * n, 0.0, x,
            epsabs=QUAD_ABS_TOL, epsrel=1e-10, limit=200,
        )
    return float(val)


def g_n_prime_cdiff(n: int, x: float, step: float | None = None) -> float:
    """Central-difference derivative of G_n (cross-check for the analytic form)."""
    if step is None:
        step = max(1e-6, 1e-4 * abs(x))
    return (g_n(n, x + step) - g_n(n, x - step)) / (2.0 * step)


def psi1(x, c: float = ENVELOPE_C):
    """Envelope of |G_n|: c (1 + |log x|) for x > 0, zero otherwise."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0.0
    out[pos] = c * (1.0 + np.abs(np.log(x[pos])))
    return out if out.ndim else float(out)


def psi2(x, c: float = ENVELOPE_C):
    """Envelope of |G_n'|: c (1 + |log x|) / x for x > 0, zero otherwise."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0.0
    out[pos] = c * (1.0 + np.abs(np.log(x[pos]))) / x[pos]
    return out if out.ndim else float(out)


def _check_eps(eps: float) -> None:
    if not (0.0 < eps < 1.0):
        raise ValueError("eps must lie in (0, 1)")


def f_eps(eps: float, x):
    """C^1 regularization of the one-sided entropy.

    0 for x <= 0; x^2 log eps / (2 eps) on (0, eps]; the entropy shifted by
    eps - eps log(eps)/2 beyond.  Value and slope match at both joints.
    """
    _check_eps(eps)
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    mid = (x > 0.0) & (x <= eps)
    out[mid] = x[mid] ** 2 * np.log(eps) / (2.0 * eps)
    top = x > eps
    xt = x[top]
    out[top] = eps - 0.5 * eps * np.log(eps) + xt * np.log(xt) - xt
    return out if out.ndim else float(out)


def f_eps_d1(eps: float, x):
    """First derivative of f_eps: 0, x log(eps)/eps, log x on the three pieces."""
    _check_eps(eps)
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    mid = (x > 0.0) & (x <= eps)
    out[mid] = x[mid] * np.log(eps) / eps
    top = x > eps
    out[top] = np.log(x[top])
    return out if out.ndim else float(out)


def f_eps_d2(eps: float, x):
    """Second derivative of f_eps: 0, log(eps)/eps, 1/x on the three pieces."""
    _check_eps(eps)
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    mid = (x > 0.0) & (x <= eps)
    out[mid] = np.log(eps) / eps
    top = x > eps
    out[top] = 1.0 / x[top]
    return out if out.ndim else float(out)
