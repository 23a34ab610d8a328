"""Composite scattering of a two-mirror cavity.

Mirrors sit at -q/2 and +q/2 on a line.  The module builds the global
scattering matrix S of the pair, the intracavity resonance matrix R that
maps input vacuum fields to the fields between the mirrors, the feedback
matrix Q appearing in R R^dag = 1 + Q + Q^dag, and the advanced companion
Rbar = S R^dag.  All are closed-form 2x2 matrices over the counter-
propagating basis, with the round-trip denominator d = 1 - r1 r2 e^{2iwq}
carrying the cavity resonances.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .mirror import MirrorModel

__all__ = [
    "CavityConfig",
    "ResonanceSingularityError",
    "loop_denominator",
    "global_scattering",
    "resonance_matrix",
    "q_matrix",
    "rbar_matrix",
    "ETA",
    "P_PLUS",
    "P_MINUS",
]

# eta flips the sign of the leftward-propagating component
ETA = np.diag([1.0, -1.0]).astype(complex)
P_PLUS = 0.5 * (np.eye(2) + ETA)
P_MINUS = 0.5 * (np.eye(2) - ETA)

_SINGULARITY_TOL = 1e-14


class ResonanceSingularityError(ZeroDivisionError):
    """Round-trip denominator vanished at a queried frequency."""


@dataclass(frozen=True)
class CavityConfig:
    """Two mirrors separated by q, with m1 at -q/2 and m2 at +q/2."""

    q: float
    m1: MirrorModel
    m2: MirrorModel
    hbar: float = 1.0

    def __post_init__(self):
        if not (self.q > 0.0 and np.isfinite(self.q)):
            raise ValueError("mirror separation q must be positive and finite")
        if not (self.hbar > 0.0 and np.isfinite(self.hbar)):
            raise ValueError("hbar must be positive and finite")

    def mirror(self, i: int) -> MirrorModel:
        if i == 1:
            return self.m1
        if i == 2:
            return self.m2
        raise ValueError("mirror index must be 1 or 2")


def _amplitudes(cfg: CavityConfig, omega):
    """Common per-frequency ingredients (r_i, s_i, e^{iwq}, d)."""
    omega = np.asarray(omega, dtype=float)
    r1 = np.asarray(cfg.m1.reflectivity(omega), dtype=complex)
    s1 = np.asarray(cfg.m1.transmittivity(omega), dtype=complex)
    r2 = np.asarray(cfg.m2.reflectivity(omega), dtype=complex)
    s2 = np.asarray(cfg.m2.transmittivity(omega), dtype=complex)
    phase = np.exp(1j * omega * cfg.q)
    d = 1.0 - r1 * r2 * phase**2
    return omega, r1, s1, r2, s2, phase, d


def _checked_d(d, omega):
    small = np.abs(d) < _SINGULARITY_TOL
    if np.any(small):
        bad = np.asarray(omega)[small] if np.ndim(omega) else omega
        raise ResonanceSingularityError(
            f"cavity is exactly resonant (d ~ 0) at omega = {bad}")
    return d


def loop_denominator(cfg: CavityConfig, omega):
    """Round-trip denominator d[w] = 1 - r1 r2 e^{2iwq}."""
    _, _, _, _, _, _, d = _amplitudes(cfg, omega)
    return d


def _pack(a11, a12, a21, a22):
    a11, a12, a21, a22 = np.broadcast_arrays(a11, a12, a21, a22)
    out = np.empty(np.shape(a11) + (2, 2), dtype=complex)
    out[..., 0, 0] = a11
    out[..., 0, 1] = a12
    out[..., 1, 0] = a21
    out[..., 1, 1] = a22
    return out


def global_scattering(cfg: CavityConfig, omega):
    """Scattering matrix of the mirror pair, shape (..., 2, 2)."""
    omega, r1, s1, r2, s2, e, d = _amplitudes(cfg, omega)
    d = _checked_d(d, omega)
    d1 = s1**2 - r1**2
    d2 = s2**2 - r2**2
    return _pack(s1 * s2 / d,
                 (r2 / e + d2 * r1 * e) / d,
                 (r1 / e + d1 * r2 * e) / d,
                 s1 * s2 / d)


def resonance_matrix(cfg: CavityConfig, omega):
    """Input vacuum -> intracavity field matrix R, shape (..., 2, 2)."""
    omega, r1, s1, r2, s2, e, d = _amplitudes(cfg, omega)
    d = _checked_d(d, omega)
    return _pack(s1 / d, s2 * r1 * e / d, s1 * r2 * e / d, s2 / d)


def q_matrix(cfg: CavityConfig, omega):
    """Feedback matrix Q with R R^dag = 1 + Q + Q^dag."""
    omega, r1, _, r2, _, e, d = _amplitudes(cfg, omega)
    d = _checked_d(d, omega)
    loop = r1 * r2 * e**2
    return _pack(loop / d, r1 * e / d, r2 * e / d, loop / d)


def rbar_matrix(cfg: CavityConfig, omega):
    """Advanced companion Rbar = S R^dag (mirror roles swapped on the diagonal)."""
    omega, r1, s1, r2, s2, e, d = _amplitudes(cfg, omega)
    d = _checked_d(d, omega)
    return _pack(s2 / d, s2 * r1 * e / d, s1 * r2 * e / d, s1 / d)
