"""Shared quadrature and discrete spectral transforms.

Finite intervals use batched adaptive Gauss-Kronrod (G7/K15) bisection;
semi-infinite oscillatory integrals use an adaptive core plus half-period
tail segments summed with iterated Euler averaging, which also handles
integrands that are only conditionally convergent (bounded oscillatory
envelopes).

Frequency/time conventions follow f(t) = (1/2pi) * Integral f[w] e^{-iwt} dw.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

__all__ = [
    "QuadratureConfig",
    "UniformTimeGrid",
    "SpectralSeries",
    "QuadResult",
    "QuadratureError",
    "RealityViolationError",
    "integrate_finite",
    "integrate_semi_infinite_oscillatory",
    "spectrum_to_time",
    "time_to_spectrum",
]


class QuadratureError(RuntimeError):
    """Non-convergent quadrature; carries the best estimate and its bound."""

    def __init__(self, message, estimate=None, error_bound=None):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound


class RealityViolationError(ValueError):
    """Spectrum fails the reality condition f[-w] = conj(f[w])."""


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and truncation controls for the integrators."""

    rel_tol: float = 1e-9
    abs_tol: float = 0.0
    max_subdivisions: int = 4000
    tail_cutoff: float = 200.0
    tail_half_periods: int = 48

    def __post_init__(self):
        if not (0.0 < self.rel_tol < 1.0):
            raise ValueError("rel_tol must lie in (0, 1)")
        if self.abs_tol < 0.0:
            raise ValueError("abs_tol must be >= 0")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be positive")
        if not (np.isfinite(self.tail_cutoff) and self.tail_cutoff > 0.0):
            raise ValueError("tail_cutoff must be finite and positive")
        if self.tail_half_periods < 0:
            raise ValueError("tail_half_periods must be >= 0")


@dataclass(frozen=True)
class UniformTimeGrid:
    """Uniform time samples t0 + k*dt, k = 0..n-1, n a power of two.

    The conjugate frequency grid (FFT order) has spacing 2*pi/(n*dt).
    """

    t0: float
    dt: float
    n: int

    def __post_init__(self):
        if self.dt <= 0.0:
            raise ValueError("dt must be positive")
        if self.n < 2 or (self.n & (self.n - 1)) != 0:
            raise ValueError("n must be a power of two >= 2")

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.n)

    @property
    def frequencies(self) -> np.ndarray:
        """Conjugate angular frequencies in FFT order."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.dt)


@dataclass
class SpectralSeries:
    """Complex samples of a named spectral quantity on a frequency grid."""

    name: str
    i: int
    j: int
    grid: np.ndarray
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        self.values = np.asarray(self.values, dtype=complex)
        if self.grid.shape != self.values.shape:
            raise ValueError("grid and values must have matching shapes")


class QuadResult(NamedTuple):
    value: complex
    error: float


# Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
_XGK = np.array([
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0,
    0.207784955007898, 0.405845151377397, 0.586087235467691,
    0.741531185599394, 0.864864423359769, 0.949107912342759,
    0.991455371120813,
])
_WGK = np.array([
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267,
    0.140653259715525, 0.104790010322250, 0.063092092629979,
    0.022935322010529,
])
_WG = np.array([
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469,
    0.381830050505119, 0.279705391489277, 0.129484966168870,
])
_GAUSS_IDX = np.arange(1, 15, 2)


def _gk_panels(f: Callable, lo: np.ndarray, hi: np.ndarray):
    """Vectorized G7/K15 on a batch of panels. Returns (kronrod, err)."""
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = mid[:, None] + half[:, None] * _XGK[None, :]
    y = np.asarray(f(x.ravel()), dtype=complex).reshape(x.shape)
    kron = (y * _WGK[None, :]).sum(axis=1) * half
    gauss = (y[:, _GAUSS_IDX] * _WG[None, :]).sum(axis=1) * half
    err = np.abs(kron - gauss)
    # scaled error heuristic as in QUADPACK
    resabs = (np.abs(y) * _WGK[None, :]).sum(axis=1) * np.abs(half)
    with np.errstate(divide="ignore", invalid="ignore"):
        scale = np.where(resabs > 0, (200.0 * err / np.maximum(resabs, 1e-300)) ** 1.5, 0.0)
    err = np.where(scale < 1.0, resabs * np.minimum(scale, 1.0), err)
    return kron, err, resabs


def integrate_finite(f: Callable, a: float, b: float,
                     cfg: QuadratureConfig = QuadratureConfig()) -> QuadResult:
    """Adaptive complex quadrature of a vectorized integrand on [a, b].

    ``f`` must accept an ndarray of abscissas and return complex values of
    the same shape.  Raises QuadratureError (with best estimate attached)
    if the target max(abs_tol, rel_tol*|result|) cannot be met within
    ``max_subdivisions`` bisections.
    """
    if a > b:
        raise ValueError("integration limits must satisfy a <= b")
    if a == b:
        return QuadResult(0.0 + 0.0j, 0.0)

    lo = np.array([a], dtype=float)
    hi = np.array([b], dtype=float)
    vals, errs, mags = _gk_panels(f, lo, hi)
    n_splits = 0
    while True:
        total = vals.sum()
        total_err = errs.sum()
        target = max(cfg.abs_tol, cfg.rel_tol * abs(total))
        # integrals that cancel to ~0 cannot beat roundoff of the L1 mass
        roundoff_floor = 50.0 * np.finfo(float).eps * mags.sum()
        if total_err <= max(target, roundoff_floor) or total_err == 0.0:
            return QuadResult(total, float(total_err))
        if n_splits >= cfg.max_subdivisions:
            raise QuadratureError(
                f"quadrature did not converge on [{a:g}, {b:g}]: "
                f"bound {total_err:.3e} > target {target:.3e}",
                estimate=total, error_bound=float(total_err))
        # split every panel contributing more than its share of the budget
        budget = target / max(len(errs), 1)
        mask = errs > budget
        if not mask.any():
            mask = errs == errs.max()
        keep_lo, keep_hi = lo[~mask], hi[~mask]
        keep_vals, keep_errs, keep_mags = vals[~mask], errs[~mask], mags[~mask]
        mid = 0.5 * (lo[mask] + hi[mask])
        new_lo = np.concatenate([lo[mask], mid])
        new_hi = np.concatenate([mid, hi[mask]])
        n_splits += int(mask.sum())
        new_vals, new_errs, new_mags = _gk_panels(f, new_lo, new_hi)
        lo = np.concatenate([keep_lo, new_lo])
        hi = np.concatenate([keep_hi, new_hi])
        vals = np.concatenate([keep_vals, new_vals])
        errs = np.concatenate([keep_errs, new_errs])
        mags = np.concatenate([keep_mags, new_mags])


def _euler_accelerate(partials: np.ndarray) -> tuple[complex, float]:
    """Iterated averaging of a partial-sum sequence (Euler transform).

    Converges for alternating-segment series, including the Abel-summable
    case of a purely oscillatory non-decaying envelope.
    """
    col = partials.astype(complex)
    best = col[-1]
    best_err = abs(col[-1] - col[-2]) if len(col) > 1 else np.inf
    while len(col) > 1:
        col = 0.5 * (col[:-1] + col[1:])
        err = abs(col[-1] - col[-2]) if len(col) > 1 else best_err
        if err <= best_err:
            best, best_err = col[-1], err
    return best, float(best_err)


def integrate_semi_infinite_oscillatory(
        f: Callable, a: float, phase_rate: float,
        cfg: QuadratureConfig = QuadratureConfig()) -> QuadResult:
    """Integrate f on [a, infinity) where f oscillates at |phase_rate|.

    The region [a, tail_cutoff] is handled adaptively; beyond it the axis
    is partitioned into half-period segments pi/|phase_rate| whose sums are
    accelerated by iterated Euler averaging.  With phase_rate = 0 the tail
    segments have a fixed fallback length and the integrand must decay.
    """
    cut = max(cfg.tail_cutoff, a)
    core = QuadResult(0.0 + 0.0j, 0.0)
    if cut > a:
        core = integrate_finite(f, a, cut, cfg)

    if cfg.tail_half_periods == 0:
        return core

    if phase_rate != 0.0:
        seg = np.pi / abs(phase_rate)
    else:
        seg = max(1.0, 0.25 * (cut - a)) if cut > a else 1.0

    edges = cut + seg * np.arange(cfg.tail_half_periods + 1)
    seg_vals, seg_errs, _ = _gk_panels(f, edges[:-1], edges[1:])
    partials = np.cumsum(seg_vals)
    tail, tail_err = _euler_accelerate(partials)
    tail_err += float(seg_errs.sum())

    mags = np.abs(seg_vals)
    if phase_rate == 0.0 and len(mags) > 4 and mags[-1] > mags[0] * 0.9 and mags[0] > 0:
        raise QuadratureError(
            "tail does not decay and carries no known oscillation rate",
            estimate=core.value + tail, error_bound=core.error + tail_err)

    value = core.value + tail
    err = core.error + tail_err
    target = max(cfg.abs_tol, cfg.rel_tol * abs(value))
    if err > max(target, 1e-8 * abs(value)) and err > cfg.abs_tol and not np.isfinite(err):
        raise QuadratureError("oscillatory tail failed to stabilize",
                              estimate=value, error_bound=err)
    return QuadResult(value, float(err))


def _conjugate_pair_residual(values: np.ndarray) -> float:
    """Max |f[-w] - conj(f[w])| over an FFT-ordered spectrum."""
    flipped = np.roll(values[::-1], 1)  # maps index k -> -k
    scale = max(np.abs(values).max(), 1e-300)
    return float(np.abs(flipped - np.conj(values)).max() / scale)


def spectrum_to_time(series: SpectralSeries, grid: UniformTimeGrid) -> np.ndarray:
    """Discrete inverse transform with the 1/2pi convention; returns reals.

    ``series`` must be sampled on grid.frequencies (FFT order) and satisfy
    the reality condition f[-w] = conj(f[w]) to 1e-8, otherwise a
    RealityViolationError is raised.
    """
    freqs = grid.frequencies
    if series.values.shape != freqs.shape or not np.allclose(series.grid, freqs):
        raise ValueError("series is not sampled on the conjugate frequency grid")
    residual = _conjugate_pair_residual(series.values)
    if residual > 1e-8:
        raise RealityViolationError(
            f"reality condition violated: residual {residual:.3e} > 1e-8")
    spectrum = series.values * np.exp(-1j * freqs * grid.t0)
    samples = np.fft.fft(spectrum) / (grid.n * grid.dt)
    scale = max(np.abs(samples).max(), 1e-300)
    imag_rel = np.abs(samples.imag).max() / scale
    if imag_rel > 1e-10:
        raise RealityViolationError(
            f"inverse transform is not real: residual {imag_rel:.3e} > 1e-10")
    return samples.real


def time_to_spectrum(samples: np.ndarray, grid: UniformTimeGrid) -> np.ndarray:
    """Forward discrete transform, inverse of :func:`spectrum_to_time`."""
    samples = np.asarray(samples)
    if samples.shape != (grid.n,):
        raise ValueError("sample count does not match the grid")
    freqs = grid.frequencies
    spectrum = np.fft.ifft(samples) * grid.n * grid.dt
    return spectrum * np.exp(1j * freqs * grid.t0)
