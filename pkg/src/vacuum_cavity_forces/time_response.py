"""Time-domain mean motional forces and echo extraction.

Given prescribed mirror trajectories dq_j(t), the mean force modification
is obtained by spectral multiplication, <dF_i[w]> = sum_j chi_ij[w] dq_j[w],
followed by an inverse transform.  The response of a high-finesse cavity is
an echo train: copies of the drive delayed by multiples of the one-way
flight time q, which :func:`extract_echoes` locates and measures.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .cavity import CavityConfig
from .numerics import (
    RealityViolationError,
    SpectralSeries,
    UniformTimeGrid,
    spectrum_to_time,
    time_to_spectrum,
)
from .susceptibility import SusceptibilitySeries

__all__ = [
    "Trajectory",
    "ResponseRecord",
    "EchoPeak",
    "response_grid",
    "force_response",
    "extract_echoes",
]

_AMPLITUDE_WARN_FRACTION = 0.01


@dataclass(frozen=True)
class Trajectory:
    """Prescribed real mirror displacements on a uniform time grid."""

    grid: UniformTimeGrid
    dq1: np.ndarray
    dq2: np.ndarray

    def __post_init__(self):
        for name in ("dq1", "dq2"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != (self.grid.n,):
                raise ValueError(f"{name} must have {self.grid.n} samples")
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} contains non-finite samples")
            object.__setattr__(self, name, arr)

    def check_linear_response(self, q: float) -> None:
        """Warn when displacements are not small against the spacing q."""
        peak = max(np.abs(self.dq1).max(), np.abs(self.dq2).max())
        if peak > _AMPLITUDE_WARN_FRACTION * q:
            warnings.warn(
                f"peak displacement {peak:g} exceeds {_AMPLITUDE_WARN_FRACTION:.0%} "
                f"of the mirror spacing {q:g}; linear response may not hold",
                stacklevel=3)


@dataclass(frozen=True)
class EchoPeak:
    """Signed extremum found in the echo window at delay ~ k*q."""

    k: int
    delay: float
    amplitude: float
    absent: bool


@dataclass
class ResponseRecord:
    """Mean force modifications on the trajectory's time grid."""

    grid: UniformTimeGrid
    dF1: np.ndarray
    dF2: np.ndarray
    method: str
    peaks: dict = field(default_factory=dict)


def response_grid(grid: UniformTimeGrid, q: float) -> UniformTimeGrid:
    """Zero-padded working grid: twice the span plus six roundtrip times.

    Padding pushes the circular-convolution wraparound beyond the echo
    train of a high-finesse cavity.
    """
    span = grid.n * grid.dt
    target = 2.0 * span + 6.0 * (2.0 * q)
    n = 1 << int(np.ceil(np.log2(target / grid.dt)))
    return UniformTimeGrid(t0=grid.t0, dt=grid.dt, n=max(n, 2 * grid.n))


def force_response(traj: Trajectory,
                   chi: Mapping[tuple, SusceptibilitySeries],
                   cfg: CavityConfig) -> ResponseRecord:
    """Mean forces <dF_1(t)>, <dF_2(t)> for the given trajectories.

    ``chi`` must hold all four susceptibility series keyed by (i, j),
    each sampled on the conjugate frequency grid of
    ``response_grid(traj.grid, cfg.q)``.
    """
    traj.check_linear_response(cfg.q)
    work = response_grid(traj.grid, cfg.q)
    freqs = work.frequencies
    for key in ((1, 1), (1, 2), (2, 1), (2, 2)):
        if key not in chi:
            raise ValueError(f"missing susceptibility series for {key}")
        series = chi[key]
        if (series.values.shape != freqs.shape
                or not np.allclose(series.grid, freqs)):
            raise ValueError(
                f"chi{key} is not sampled on the conjugate grid of the "
                "padded response grid")
    pad = work.n - traj.grid.n
    dq_w = {
        1: time_to_spectrum(np.concatenate([traj.dq1, np.zeros(pad)]), work),
        2: time_to_spectrum(np.concatenate([traj.dq2, np.zeros(pad)]), work),
    }
    forces = {}
    for i in (1, 2):
        spectrum = (chi[(i, 1)].values * dq_w[1]
                    + chi[(i, 2)].values * dq_w[2])
        # The DC and Nyquist bins are their own conjugate partners; a real
        # force keeps only their real parts.
        spectrum[0] = spectrum[0].real
        spectrum[work.n // 2] = spectrum[work.n // 2].real
        # Check the reality condition dF[-w] = conj(dF[w]) on the product
        # spectrum, then hermitize away the roundoff remainder (cubic
        # susceptibility growth amplifies high-frequency roundoff in the
        # drive spectra well above the inverse transform's residue gate).
        mirrored = np.conj(np.roll(spectrum[::-1], 1))
        scale = max(np.abs(spectrum).max(), 1e-300)
        residual = np.abs(spectrum - mirrored).max() / scale
        if residual > 1e-8:
            raise RealityViolationError(
                f"force spectrum dF{i} violates the reality condition: "
                f"residual {residual:.3e} > 1e-8")
        spectrum = 0.5 * (spectrum + mirrored)
        series = SpectralSeries(name=f"dF{i}", i=i, j=0,
                                grid=freqs, values=spectrum)
        forces[i] = spectrum_to_time(series, work)[:traj.grid.n]
    methods = {chi[key].method for key in chi}
    method = methods.pop() if len(methods) == 1 else "mixed"
    return ResponseRecord(grid=traj.grid, dF1=forces[1], dF2=forces[2],
                          method=method)


def extract_echoes(rec: ResponseRecord, q: float, n: int,
                   component: int = 1, t_center: float = 0.0,
                   floor_fraction: float = 1e-3) -> list[EchoPeak]:
    """Signed extrema near delays k*q, k = 1..n, after the drive center.

    Each window has width q/2.  The extremum value (not an integrated
    area) is reported, since a delayed-derivative train applies the same
    operator to every echo and extremum ratios then equal weight ratios.
    A window whose extremum stays below ``floor_fraction`` of the global
    peak is marked absent.
    """
    if component not in (1, 2):
        raise ValueError("component must be 1 or 2")
    if n < 1:
        raise ValueError("n must be >= 1")
    signal = rec.dF1 if component == 1 else rec.dF2
    times = rec.grid.times
    floor = floor_fraction * max(np.abs(signal).max(), 1e-300)
    peaks = []
    for k in range(1, n + 1):
        center = t_center + k * q
        mask = np.abs(times - center) <= 0.25 * q
        if not np.any(mask):
            peaks.append(EchoPeak(k=k, delay=k * q, amplitude=0.0,
                                  absent=True))
            continue
        window = signal[mask]
        idx = int(np.argmax(np.abs(window)))
        amp = float(window[idx])
        delay = float(times[mask][idx] - t_center)
        absent = bool(abs(amp) <= floor)
        peaks.append(EchoPeak(k=k, delay=delay,
                              amplitude=0.0 if absent else amp,
                              absent=absent))
    return peaks
