"""First-order modification of the field scattering by moving mirrors.

A mirror oscillating around position q_i scatters field components between
frequencies.  To first order in the displacement spectrum dq[nu], the
mirror's scattering matrix acquires an off-diagonal (two-frequency) part

    dS_i[w, w'] = i w' dq[w - w'] e^{-i eta w q_i}
                  (S_i[w] eta - eta S_i[w']) e^{i eta w' q_i},

where eta = diag(1, -1) distinguishes the two propagation directions.  The
matching modifications dR, dS of the cavity's intracavity and global
matrices are compositions of the per-mirror kernels with the static cavity
response.  The secular (zero-frequency) part of the motional coupling
Hamiltonian is governed by the kernel w w' F_j[w, w'] built on the static
force kernel.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cavity import (
    ETA,
    P_MINUS,
    P_PLUS,
    CavityConfig,
    loop_denominator,
    resonance_matrix,
)
from .fluctuations import force_kernel
from .mirror import MirrorModel

__all__ = [
    "MotionSpectrum",
    "TwoFreqKernel",
    "mirror_positions",
    "static_mirror_matrix",
    "delta_s_single",
    "delta_cavity_kernels",
    "secular_hamiltonian_kernel",
]

_EPS = {1: 1.0, 2: -1.0}
_REALITY_TOL = 1e-12


@dataclass(frozen=True)
class MotionSpectrum:
    """Discrete displacement spectrum of one mirror.

    The displacement is real in time, so the spectrum must satisfy
    dq[-nu] = dq[nu]* wherever both frequencies are present on the grid.
    """

    mirror: int
    grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if self.mirror not in (1, 2):
            raise ValueError("mirror index must be 1 or 2")
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=complex)
        if grid.ndim != 1 or grid.shape != values.shape:
            raise ValueError("grid and values must be matching 1-d arrays")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)
        order = np.argsort(grid)
        g, v = grid[order], values[order]
        idx = np.searchsorted(g, -g)
        idx = np.clip(idx, 0, len(g) - 1)
        mirrored = np.isclose(g[idx], -g, rtol=0.0, atol=1e-12)
        residual = np.abs(v[idx][mirrored] - np.conj(v[mirrored]))
        if residual.size and residual.max() > _REALITY_TOL:
            raise ValueError(
                "displacement spectrum violates the reality condition "
                f"dq[-nu] = dq[nu]* (residual {residual.max():.3e})")

    @classmethod
    def monochromatic(cls, mirror: int, nu: float, amplitude: complex):
        """Real oscillation dq(t) = Re(2 amplitude e^{-i nu t})."""
        if nu == 0.0:
            return cls(mirror, np.array([0.0]),
                       np.array([complex(amplitude).real], dtype=complex))
        return cls(mirror, np.array([-nu, nu]),
                   np.array([np.conj(amplitude), amplitude]))

    def amplitude(self, nu):
        """dq at the difference frequency nu; zero off the stored grid."""
        nu = np.asarray(nu, dtype=float)
        out = np.zeros(nu.shape, dtype=complex)
        for g, v in zip(self.grid, self.values):
            out = np.where(np.isclose(nu, g, rtol=1e-12, atol=1e-12), v, out)
        return out if out.shape else complex(out)


@dataclass
class TwoFreqKernel:
    """Matrix-valued two-frequency kernel samples K[w, w']."""

    name: str
    omega: np.ndarray
    omega_p: np.ndarray
    values: np.ndarray  # shape omega.shape + (2, 2)
    meta: dict = field(default_factory=dict)

    def reality_residual(self, evaluate) -> float:
        """max |K[-w, -w'] - K[w, w']*| over the stored sample points,
        with `evaluate(w, w')` supplying the kernel at negated points."""
        flipped = evaluate(-self.omega, -self.omega_p)
        return float(np.max(np.abs(flipped - np.conj(self.values))))


def mirror_positions(cfg: CavityConfig) -> tuple[float, float]:
    """Static positions (q_1, q_2) = (-q/2, +q/2)."""
    return -0.5 * cfg.q, 0.5 * cfg.q


def _eta_phase(theta):
    """e^{i eta theta} = diag(e^{i theta}, e^{-i theta}), shape (...,2,2)."""
    theta = np.asarray(theta, dtype=complex)
    out = np.zeros(theta.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = np.exp(1j * theta)
    out[..., 1, 1] = np.exp(-1j * theta)
    return out


def static_mirror_matrix(m: MirrorModel, q_i: float, omega):
    """Mirror scattering matrix referred to the cavity origin:
    e^{-i eta w q_i} S_i[w] e^{i eta w q_i}."""
    return (_eta_phase(-np.asarray(omega, dtype=float) * q_i)
            @ m.scattering_matrix(omega)
            @ _eta_phase(np.asarray(omega, dtype=float) * q_i))


def delta_s_single(m: MirrorModel, q_i: float, motion: MotionSpectrum,
                   omega, omega_p):
    """First-order two-frequency scattering kernel of one moving mirror."""
    w = np.asarray(omega, dtype=float)
    wp = np.asarray(omega_p, dtype=float)
    dq = motion.amplitude(w - wp)
    core = (m.scattering_matrix(w) @ ETA
            - ETA @ m.scattering_matrix(wp))
    coef = 1j * wp * dq
    return (coef[..., None, None] if np.ndim(coef) else coef) * (
        _eta_phase(-w * q_i) @ core @ _eta_phase(wp * q_i))


def _projectors(i: int):
    eps = _EPS[i]
    p_same = P_PLUS if eps > 0 else P_MINUS
    p_opp = P_MINUS if eps > 0 else P_PLUS
    return p_same, p_opp


def delta_cavity_kernels(cfg: CavityConfig, motion1: MotionSpectrum,
                         motion2: MotionSpectrum, omega, omega_p):
    """First-order kernels (dR, dS) of the cavity with both mirrors moving.

    dR[w, w'] = (1/d[w]) sum_i (P_e + P_-e Sbar_partner[w] P_e)
                dS_i[w, w'] (P_e + P_-e R[w'])
    dS[w, w'] = sum_i P_-e dS_i[w, w'] (P_e + P_-e R[w'])
                + sum_i P_-e Sbar_i[w] P_-e dR[w, w']
    """
    if motion1.mirror != 1 or motion2.mirror != 2:
        raise ValueError("motions must be supplied as (mirror 1, mirror 2)")
    w = np.asarray(omega, dtype=float)
    wp = np.asarray(omega_p, dtype=float)
    q1, q2 = mirror_positions(cfg)
    pos = {1: q1, 2: q2}
    models = {1: cfg.m1, 2: cfg.m2}
    motions = {1: motion1, 2: motion2}

    d_w = loop_denominator(cfg, w)
    r_wp = resonance_matrix(cfg, wp)

    shape = np.broadcast_shapes(w.shape, wp.shape)
    d_r = np.zeros(shape + (2, 2), dtype=complex)
    d_s_direct = np.zeros(shape + (2, 2), dtype=complex)
    sbar_self_sandwich = {}
    for i in (1, 2):
        p_same, p_opp = _projectors(i)
        partner = 3 - i
        ds_i = delta_s_single(models[i], pos[i], motions[i], w, wp)
        sbar_partner = static_mirror_matrix(models[partner], pos[partner], w)
        left = p_same + p_opp @ sbar_partner @ p_same
        right = p_same + p_opp @ r_wp
        d_r = d_r + left @ ds_i @ right
        d_s_direct = d_s_direct + p_opp @ ds_i @ right
        sbar_self_sandwich[i] = (
            p_opp @ static_mirror_matrix(models[i], pos[i], w) @ p_opp)
    d_r = d_r / (d_w[..., None, None] if np.ndim(d_w) else d_w)
    d_s = d_s_direct + (sbar_self_sandwich[1]
                        + sbar_self_sandwich[2]) @ d_r
    return d_r, d_s


def secular_hamiltonian_kernel(cfg: CavityConfig, j: int, omega, omega_p):
    """Kernel w w' F_j[w, w'] of the zero-frequency motional coupling."""
    w = np.asarray(omega, dtype=float)
    wp = np.asarray(omega_p, dtype=float)
    w, wp = np.broadcast_arrays(w, wp)
    coef = w * wp
    if np.ndim(coef) == 0:
        if coef == 0.0:
            return np.zeros((2, 2), dtype=complex)
        return coef * force_kernel(cfg, j, w, wp)
    out = np.zeros(coef.shape + (2, 2), dtype=complex)
    live = coef != 0.0
    if np.any(live):
        out[live] = (coef[live, None, None]
                     * force_kernel(cfg, j, w[live], wp[live]))
    return out
