"""Force fluctuations of the vacuum radiation pressure on the mirrors.

The force on mirror i at two frequencies is a bilinear form of the input
fields with a 2x2 kernel F_i[w, w'].  Its trace against itself gives the
two-frequency coefficient

    gamma_ij[w, w'] = Tr( F_i[w, w'] F_j[w, w']^dag ),

which splits into retarded parts, gamma_ij = gamma^R_ij + conj(gamma^R_ji)
(a fluctuation-dissipation relation).  The retarded parts have closed
forms that this module evaluates directly; the trace route is retained as
an independent verification mode.  The vacuum noise spectrum of the force
components is

    C_ij[w] = (hbar^2/2) theta(w) Int_0^w dw'/2pi w'(w-w') gamma_ij[w', w-w']

and the commutator spectrum xi_ij[w] = C_ij[w]/(2 hbar) for w > 0.
"""

from __future__ import annotations

import numpy as np

from .cavity import (
    ETA,
    P_MINUS,
    P_PLUS,
    CavityConfig,
    global_scattering,
    resonance_matrix,
)
from .numerics import QuadratureConfig, SpectralSeries, integrate_finite

__all__ = [
    "force_kernel",
    "gamma_via_trace",
    "gamma_retarded",
    "gamma_mixed_term",
    "gamma_closed_form",
    "commutator_spectrum",
    "noise_spectrum",
]

_EPS = {1: 1.0, 2: -1.0}


def _check_index(i):
    if i not in (1, 2):
        raise ValueError("mirror index must be 1 or 2")


def force_kernel(cfg: CavityConfig, i: int, omega, omega_p):
    """Two-frequency force kernel of mirror i, shape (..., 2, 2).

    Assembled from the global scattering matrix S, the intracavity matrix
    R, the counterpropagation projectors, and the phase factors locating
    mirror i at -+ q/2.
    """
    _check_index(i)
    eps = _EPS[i]
    omega = np.asarray(omega, dtype=float)
    omega_p = np.asarray(omega_p, dtype=float)
    S_w = global_scattering(cfg, omega)
    S_wp = global_scattering(cfg, omega_p)
    R_w = resonance_matrix(cfg, omega)
    R_wp = resonance_matrix(cfg, omega_p)
    p_same = P_PLUS if eps > 0 else P_MINUS
    p_opp = P_MINUS if eps > 0 else P_PLUS
    phase = np.exp(-0.5j * (omega + omega_p) * cfg.q)
    Rt_wp = np.swapaxes(R_wp, -1, -2)
    St_wp = np.swapaxes(S_wp, -1, -2)
    inner = p_same - Rt_wp @ (p_same @ R_w)
    outer = St_wp @ (p_opp @ S_w) - Rt_wp @ (p_opp @ R_w)
    phase = phase[..., None, None] if np.ndim(phase) else phase
    return eps * (phase * inner + outer / phase)


def gamma_via_trace(cfg: CavityConfig, i: int, j: int, omega, omega_p):
    """gamma_ij from the kernel trace — the brute-force route."""
    Fi = force_kernel(cfg, i, omega, omega_p)
    Fj = force_kernel(cfg, j, omega, omega_p)
    return np.trace(Fi @ np.conj(np.swapaxes(Fj, -1, -2)),
                    axis1=-2, axis2=-1)


def _pair_coefficients(m, omega, omega_p):
    """alpha = 1 - s s' + r r', beta = 1 - s s' - r r' for one mirror."""
    r_a = np.asarray(m.reflectivity(omega), dtype=complex)
    r_b = np.asarray(m.reflectivity(omega_p), dtype=complex)
    s_a = np.asarray(m.transmittivity(omega), dtype=complex)
    s_b = np.asarray(m.transmittivity(omega_p), dtype=complex)
    alpha = 1.0 - s_a * s_b + r_a * r_b
    beta = 1.0 - s_a * s_b - r_a * r_b
    return r_a, r_b, s_a, s_b, alpha, beta


def _gamma_r_11(cfg: CavityConfig, omega, omega_p):
    """Retarded coefficient of mirror 1 with itself (closed form)."""
    a = np.asarray(omega, dtype=float)
    b = np.asarray(omega_p, dtype=float)
    m1, m2, q = cfg.m1, cfg.m2, cfg.q
    r1a, r1b, s1a, s1b, alpha1, beta1 = _pair_coefficients(m1, a, b)
    r2a = np.asarray(m2.reflectivity(a), dtype=complex)
    r2b = np.asarray(m2.reflectivity(b), dtype=complex)
    d1a = s1a**2 - r1a**2
    d1b = s1b**2 - r1b**2
    ea = np.exp(2j * a * q)
    eb = np.exp(2j * b * q)
    da = 1.0 - r1a * r2a * ea
    db = 1.0 - r1b * r2b * eb
    ga = r2a * ea / da  # closed-loop reflection seen from mirror 1
    gb = r2b * eb / db
    return (2.0 * alpha1 / (da * db)
            + alpha1 * beta1 * ga * gb
            + r1b * d1a * ga
            + r1a * d1b * gb
            + (np.conj(r1a) + r1b) * (np.conj(r2a * ea) + r2b * eb)
            / (np.conj(da) * db)
            + 2.0 - 1.0 / da - 1.0 / db)


def _gamma_r_21(cfg: CavityConfig, omega, omega_p):
    """Retarded cross coefficient (force on 2, motion source 1)."""
    a = np.asarray(omega, dtype=float)
    b = np.asarray(omega_p, dtype=float)
    m1, m2, q = cfg.m1, cfg.m2, cfg.q
    r1a, r1b, _, _, alpha1, _ = _pair_coefficients(m1, a, b)
    r2a, r2b, _, _, alpha2, _ = _pair_coefficients(m2, a, b)
    ea = np.exp(1j * a * q)
    eb = np.exp(1j * b * q)
    da = 1.0 - r1a * r2a * ea**2
    db = 1.0 - r1b * r2b * eb**2
    return (-alpha1 * alpha2 * ea * eb / (da * db)
            - (r1b + np.conj(r1a)) * (r2b + np.conj(r2a)) * eb / ea
            / (np.conj(da) * db))


def _loop_denominator_analytic(cfg, z):
    """d(z) = 1 - r1 r2 e^{2izq} from the models' analytic continuations."""
    r1, _ = cfg.m1.amplitudes_analytic(z)
    r2, _ = cfg.m2.amplitudes_analytic(z)
    return 1.0 - r1 * r2 * np.exp(2j * z * cfg.q)


def _mixed_11(cfg: CavityConfig, a, b):
    q = cfg.q
    r1_ma, _ = cfg.m1.amplitudes_analytic(-a)
    r1_b, _ = cfg.m1.amplitudes_analytic(b)
    r2_ma, _ = cfg.m2.amplitudes_analytic(-a)
    r2_b, _ = cfg.m2.amplitudes_analytic(b)
    return ((r1_ma + r1_b) * (r2_ma * np.exp(-2j * a * q)
                              + r2_b * np.exp(2j * b * q))
            / (_loop_denominator_analytic(cfg, -a)
               * _loop_denominator_analytic(cfg, b)))


def _mixed_21(cfg: CavityConfig, a, b):
    q = cfg.q
    r1_ma, _ = cfg.m1.amplitudes_analytic(-a)
    r1_b, _ = cfg.m1.amplitudes_analytic(b)
    r2_ma, _ = cfg.m2.amplitudes_analytic(-a)
    r2_b, _ = cfg.m2.amplitudes_analytic(b)
    return (-(r1_b + r1_ma) * (r2_b + r2_ma)
            * np.exp(1j * (b - a) * q)
            / (_loop_denominator_analytic(cfg, -a)
               * _loop_denominator_analytic(cfg, b)))


def gamma_mixed_term(cfg: CavityConfig, i: int, j: int, a, b):
    """The one argument-exchange-asymmetric term of gamma^R_ij[a, b].

    All other terms of gamma^R are symmetric under (a, b) exchange, so
    gamma^R_ij[a, b] - gamma^R_ij[b, a] equals the exchange difference of
    this term alone.  On the real axis it reproduces the corresponding
    conjugated-denominator term of the closed form; its arguments may be
    complex (conjugations are resolved through reality, conj f(x) = f(-x),
    before continuing), which is what permits deforming the slowly
    converging tail integrals of the susceptibility off the real axis.
    """
    _check_index(i)
    _check_index(j)
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if (i, j) == (1, 1):
        return _mixed_11(cfg, a, b)
    if (i, j) == (2, 1):
        return _mixed_21(cfg, a, b)
    if (i, j) == (2, 2):
        return _mixed_11(_swapped(cfg), a, b)
    return _mixed_21(_swapped(cfg), a, b)


def _swapped(cfg: CavityConfig) -> CavityConfig:
    """The same cavity seen with the mirror roles exchanged."""
    return CavityConfig(q=cfg.q, m1=cfg.m2, m2=cfg.m1, hbar=cfg.hbar)


def gamma_retarded(cfg: CavityConfig, i: int, j: int, omega, omega_p):
    """Closed-form retarded coefficient gamma^R_ij[w, w']."""
    _check_index(i)
    _check_index(j)
    if (i, j) == (1, 1):
        return _gamma_r_11(cfg, omega, omega_p)
    if (i, j) == (2, 1):
        return _gamma_r_21(cfg, omega, omega_p)
    if (i, j) == (2, 2):
        return _gamma_r_11(_swapped(cfg), omega, omega_p)
    return _gamma_r_21(_swapped(cfg), omega, omega_p)


def gamma_closed_form(cfg: CavityConfig, i: int, j: int, omega, omega_p):
    """gamma_ij = gamma^R_ij + conj(gamma^R_ji) (fluctuation-dissipation)."""
    return (gamma_retarded(cfg, i, j, omega, omega_p)
            + np.conj(gamma_retarded(cfg, j, i, omega, omega_p)))


def _convolved(cfg, i, j, omega, quad, gamma_fn):
    """Int_0^w dw'/2pi w'(w - w') gamma_fn[w', w - w']."""
    if omega <= 0.0:
        return 0.0 + 0.0j
    def integrand(wp):
        return wp * (omega - wp) * gamma_fn(cfg, i, j, wp, omega - wp) / (2.0 * np.pi)
    val, _ = integrate_finite(integrand, 0.0, float(omega), quad)
    return val


def commutator_spectrum(cfg: CavityConfig, i: int, j: int, omega,
                        quad: QuadratureConfig = QuadratureConfig(),
                        use_trace: bool = False):
    """xi_ij[w] = (hbar/4) Int_0^w dw'/2pi w'(w-w') gamma_ij[w', w-w']."""
    gamma_fn = gamma_via_trace if use_trace else gamma_closed_form
    return cfg.hbar / 4.0 * _convolved(cfg, i, j, float(omega), quad, gamma_fn)


def noise_spectrum(cfg: CavityConfig, i: int, j: int, grid,
                   quad: QuadratureConfig = QuadratureConfig(),
                   use_trace: bool = False) -> SpectralSeries:
    """Vacuum force-noise spectrum C_ij on a frequency grid.

    Strictly zero for w < 0: the vacuum can absorb energy from the mirrors
    but cannot excite them.
    """
    grid = np.asarray(grid, dtype=float)
    gamma_fn = gamma_via_trace if use_trace else gamma_closed_form
    vals = np.array([
        cfg.hbar**2 / 2.0 * _convolved(cfg, i, j, w, quad, gamma_fn)
        for w in grid], dtype=complex)
    return SpectralSeries(name=f"C{i}{j}", i=i, j=j, grid=grid, values=vals)
