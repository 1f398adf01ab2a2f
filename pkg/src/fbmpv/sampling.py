"""Exact simulation of fractional Brownian motion on uniform grids.

Two independent samplers share one seeding contract:

* ``sample_cholesky`` factors the exact Gram matrix (O(n^3), capped);
* ``sample_circulant`` embeds the stationary increment autocovariance in a
  circulant matrix and uses one FFT per path (O(n log n)).

Path ``k`` of an ensemble draws from
``numpy.random.default_rng(SeedSequence(master_seed, spawn_key=(k,)))``,
so distinct path indices never share a stream and every path is
bit-for-bit reproducible from ``(seed, grid, method)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import EmbeddingFailure, GridTooLarge, NotPositiveDefinite
from .model import HurstIndex, covariance

__all__ = [
    "TimeGrid",
    "SamplePath",
    "path_rng",
    "fgn_autocovariance",
    "sample_cholesky",
    "sample_circulant",
    "sample_ensemble",
    "increments",
    "write_path_csv",
]

CHOLESKY_CAP = 4096
# Circulant eigenvalues in (-tol * max, 0) are rounding noise and get clipped.
EIGENVALUE_TOL = 1e-9


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid on [0, T] with the step weights of the ds^{2H} measure.

    ``nodes[i] = i T / n`` and ``ds2h_weights[i] = nodes[i+1]^{2H} - nodes[i]^{2H}``,
    the exact step mass of the measure 2 H s^{2H-1} ds, so the weights
    telescope to T^{2H}.
    """

    horizon: float
    steps: int
    h: HurstIndex
    nodes: np.ndarray = field(repr=False, default=None)
    ds2h_weights: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        if self.horizon <= 0:
            raise ValueError("horizon must be positive")
        if self.steps < 1:
            raise ValueError("need at least one step")
        hurst = self.h if isinstance(self.h, HurstIndex) else HurstIndex(float(self.h))
        object.__setattr__(self, "h", hurst)
        nodes = np.linspace(0.0, self.horizon, self.steps + 1)
        w = np.diff(nodes ** hurst.two_h)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "ds2h_weights", w)

    @property
    def dt(self) -> float:
        return self.horizon / self.steps

    @property
    def resolution_floor(self) -> float:
        """Typical increment scale T^H n^{-H}; epsilon ladders stop here."""
        return self.horizon ** self.h.value * self.steps ** (-self.h.value)


@dataclass(frozen=True)
class SamplePath:
    """fBm values on a TimeGrid together with the seed that produced them."""

    grid: TimeGrid
    values: np.ndarray
    seed: int
    method: str

    def __post_init__(self):
        if len(self.values) != self.grid.steps + 1:
            raise ValueError("values length must be steps + 1")
        if self.values[0] != 0.0:
            raise ValueError("paths start at zero")


def path_rng(master_seed: int, index: int = 0) -> np.random.Generator:
    """Independent generator for path ``index`` of ensemble ``master_seed``."""
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(index,)))


def fgn_autocovariance(h: HurstIndex, dt: float, lags: np.ndarray) -> np.ndarray:
    """Autocovariance of fractional Gaussian noise increments on step dt.

    gamma(k) = dt^{2H} (|k+1|^{2H} + |k-1|^{2H} - 2 |k|^{2H}) / 2.
    """
    k = np.abs(np.asarray(lags, dtype=float))
    hh = h.two_h
    return 0.5 * dt ** hh * ((k + 1.0) ** hh + np.abs(k - 1.0) ** hh - 2.0 * k ** hh)


def _gram_matrix(h: HurstIndex, nodes: np.ndarray) -> np.ndarray:
    s = nodes[1:]
    return covariance(h, s[:, None], s[None, :])


def _grid_hurst(h, grid: TimeGrid) -> HurstIndex:
    """The grid's Hurst index; a caller-supplied one must agree with it."""
    if h is None:
        return grid.h
    hurst = h if isinstance(h, HurstIndex) else HurstIndex(float(h))
    if hurst.value != grid.h.value:
        raise ValueError(
            f"H = {hurst.value} disagrees with the grid's H = {grid.h.value}; "
            "the grid's step weights are built for its own index"
        )
    return hurst


def sample_cholesky(h, grid: TimeGrid, seed: int) -> SamplePath:
    """Exact multivariate-normal draw through a Cholesky factor of the Gram matrix.

    O(n^3); refuses grids above ``CHOLESKY_CAP``.  A factorization failure is
    reported as ``NotPositiveDefinite`` because the exact Gram matrix of fBm is
    positive definite: reaching that branch means ``covariance`` is wrong.
    """
    h = _grid_hurst(h, grid)
    if grid.steps > CHOLESKY_CAP:
        raise GridTooLarge(f"n = {grid.steps} exceeds Cholesky cap {CHOLESKY_CAP}")
    factor = _cholesky_factor(h, grid)
    z = path_rng(seed).standard_normal(grid.steps)
    values = np.zeros(grid.steps + 1)
    values[1:] = factor @ z
    return SamplePath(grid=grid, values=values, seed=int(seed), method="cholesky")


def _cholesky_factor(h: HurstIndex, grid: TimeGrid) -> np.ndarray:
    gram = _gram_matrix(h, grid.nodes)
    try:
        return np.linalg.cholesky(gram)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(
            "fBm Gram matrix failed to factor; the covariance implementation is broken"
        ) from exc


def _embedding_size(n: int) -> int:
    """First power of two >= 2 (n - 1), at least 2."""
    target = max(2 * (n - 1), 2)
    m = 1
    while m < target:
        m *= 2
    return m


def _circulant_sqrt_eigs(h: HurstIndex, grid: TimeGrid) -> np.ndarray:
    """sqrt(lambda / M) for the circulant embedding of the fGn covariance.

    With that scale the real part of the FFT of a scaled complex-normal
    vector has exactly the embedded covariance (the complex draw carries the
    covariance twice, half in each of the independent real and imaginary
    parts).
    """
    n, dt = grid.steps, grid.dt
    m = _embedding_size(n)
    half = m // 2
    gamma = fgn_autocovariance(h, dt, np.arange(half + 1))
    row = np.concatenate([gamma, gamma[-2:0:-1]])
    lam = np.fft.fft(row).real
    top = lam.max()
    if lam.min() < -EIGENVALUE_TOL * top:
        raise EmbeddingFailure(
            f"circulant eigenvalue {lam.min():.3e} below -{EIGENVALUE_TOL:g} * max"
        )
    lam = np.clip(lam, 0.0, None)
    return np.sqrt(lam / m)


def sample_circulant(h, grid: TimeGrid, seed: int) -> SamplePath:
    """fBm by cumulating exact fractional Gaussian noise from a circulant embedding.

    One complex FFT per path; same law as ``sample_cholesky``.
    """
    h = _grid_hurst(h, grid)
    scale = _circulant_sqrt_eigs(h, grid)
    values = _circulant_draw(scale, grid.steps, path_rng(seed))
    return SamplePath(grid=grid, values=values, seed=int(seed), method="circulant")


def _circulant_draw(scale: np.ndarray, n: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((2, scale.size))
    spectrum = np.fft.fft(scale * (z[0] + 1j * z[1]))
    fgn = spectrum.real[:n]
    values = np.empty(n + 1)
    values[0] = 0.0
    np.cumsum(fgn, out=values[1:])
    return values


def sample_ensemble(grid: TimeGrid, master_seed: int, count: int,
                    method: str = "circulant", start: int = 0) -> np.ndarray:
    """Stack of ``count`` paths as a (count, n+1) array, rows in path-index order.

    Row ``k`` is bit-identical to the single-path sampler called with the
    derived seed of ``master_seed`` and path index ``start + k``; batching is
    a speed detail only.
    """
    n = grid.steps
    out = np.empty((count, n + 1))
    if method == "circulant":
        scale = _circulant_sqrt_eigs(grid.h, grid)
        for k in range(count):
            out[k] = _circulant_draw(scale, n, path_rng(master_seed, start + k))
    elif method == "cholesky":
        if n > CHOLESKY_CAP:
            raise GridTooLarge(f"n = {n} exceeds Cholesky cap {CHOLESKY_CAP}")
        factor = _cholesky_factor(grid.h, grid)
        out[:, 0] = 0.0
        for k in range(count):
            z = path_rng(master_seed, start + k).standard_normal(n)
            out[k, 1:] = factor @ z
    else:
        raise ValueError(f"unknown sampling method {method!r}")
    return out


def increments(path: SamplePath) -> np.ndarray:
    """First differences of the path values (fractional Gaussian noise)."""
    return np.diff(path.values)


def write_path_csv(path: SamplePath, fname) -> None:
    """Write ``s,value`` rows with 17 significant digits (exact float round-trip)."""
    with open(fname, "w", encoding="ascii") as fh:
        fh.write("s,value\n")
        for s, v in zip(path.grid.nodes, path.values):
            fh.write(f"{s:.17g},{v:.17g}\n")
