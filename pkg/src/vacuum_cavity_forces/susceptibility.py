"""Motional force susceptibilities of the cavity mirrors.

The mean force induced on mirror i by a small displacement of mirror j is
delta F_i[w] = chi_ij[w] delta q_j[w], with the two-frequency kernel

    chi_ij[w, w'] = (i hbar w w'/4) ( eps(w) gamma^R_ij[w, w']
                                    + eps(w') gamma^R_ij[w', w] )

and chi_ij[w] = Int dw'/2pi chi_ij[w - w', w'] over the whole real line.

Numerical strategy for the spectrum: split gamma^R into its symmetric and
antisymmetric parts under argument exchange.  The symmetric part only
contributes on [0, w] (sign factors cancel outside), which reproduces the
single-mirror formula exactly; the antisymmetric remainder contributes two
semi-infinite integrals whose decay is set by mirror transparency and
whose oscillation rate is the cavity roundtrip 2q.

Also provided: the quasistatic values (equal to the static force
gradients), the discrete echo expansion of the perfectly reflecting
limit, and the high-finesse resonance approximation with constant
reflectivities.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .cavity import CavityConfig
from .fluctuations import gamma_mixed_term, gamma_retarded
from .numerics import (
    QuadratureConfig,
    SpectralSeries,
    integrate_finite,
    integrate_semi_infinite_oscillatory,
)

__all__ = [
    "SusceptibilitySeries",
    "EchoTerm",
    "EchoTrain",
    "chi_two_freq",
    "chi_spectrum",
    "chi_single_mirror",
    "chi_quasistatic",
    "perfect_mirror_echo_train",
    "echo_transfer",
    "resonance_chi",
    "ResonanceDivergenceError",
]


class ResonanceDivergenceError(ZeroDivisionError):
    """Perfect reflection evaluated exactly on a mechanical resonance."""


@dataclass
class SusceptibilitySeries(SpectralSeries):
    """Spectral series tagged with the evaluation method and tail cutoff."""

    method: str = "full"
    tail_cutoff: float = float("nan")


@dataclass(frozen=True)
class EchoTerm:
    """One delayed contribution: force on mirror i from motion of mirror j,
    delayed by delay_multiple flight times q, with a dimensionless weight."""

    i: int
    j: int
    delay_multiple: int
    weight: float


@dataclass(frozen=True)
class EchoTrain:
    """Finite train of delayed derivative responses of the perfect cavity."""

    derivative_order: int
    terms: tuple[EchoTerm, ...]


def chi_two_freq(cfg: CavityConfig, i: int, j: int, omega, omega_p):
    """Two-frequency susceptibility kernel chi_ij[w, w']."""
    a = np.asarray(omega, dtype=float)
    b = np.asarray(omega_p, dtype=float)
    return (0.25j * cfg.hbar * a * b
            * (np.sign(a) * gamma_retarded(cfg, i, j, a, b)
               + np.sign(b) * gamma_retarded(cfg, i, j, b, a)))


def _gamma_sym(cfg, i, j, a, b):
    return 0.5 * (gamma_retarded(cfg, i, j, a, b)
                  + gamma_retarded(cfg, i, j, b, a))


def _gamma_anti(cfg, i, j, a, b):
    return 0.5 * (gamma_retarded(cfg, i, j, a, b)
                  - gamma_retarded(cfg, i, j, b, a))


def _tail_rotated(cfg, i, j, w, quad):
    """Combined antisymmetric tail by contour rotation.

    The two semi-infinite remainders of the convolution combine into
    -Int_0^inf u(w+u) (W[w+u, -u] - W[-u, w+u]) du, where W is the single
    argument-exchange-asymmetric term of gamma^R (all symmetric terms
    cancel between the tails).  On the real axis the integrand is a comb
    of near-resonances with an envelope decaying only at the mirror
    response scale; both orderings are analytic off the axis and decay
    like e^{-2vq} along vertical rays (the first downward, the second
    upward, each on the side away from the retarded cavity poles), so the
    rotated legs are short and smooth.
    """
    v_max = 30.0 / cfg.q

    def leg_down(v):
        u = -1j * v
        return (-1j) * u * (w + u) * gamma_mixed_term(cfg, i, j, w + u, -u)

    def leg_up(v):
        u = 1j * v
        return 1j * u * (w + u) * gamma_mixed_term(cfg, i, j, -u, w + u)

    val_1, err_1 = integrate_finite(leg_down, 0.0, v_max, quad)
    val_2, err_2 = integrate_finite(leg_up, 0.0, v_max, quad)
    return -(val_1 - val_2), err_1 + err_2


def _tail_oscillatory(cfg, i, j, w, quad, scale):
    """Real-axis fallback for mirror models without a continuation.

    Accuracy is limited by the accelerated summation of the slowly
    decaying resonant comb; closed-form models use _tail_rotated instead.
    """
    floor = quad.rel_tol * max(scale, w**3 / (2.0 * np.pi))
    tail_quad = replace(quad, abs_tol=max(quad.abs_tol, floor))

    # antisymmetric remainder on (-inf, 0]: substitute wp -> -u
    def anti_lower(u):
        return (-u) * (w + u) * _gamma_anti(cfg, i, j, w + u, -u)

    # ... and on [w, inf)
    def anti_upper(wp):
        return -wp * (w - wp) * _gamma_anti(cfg, i, j, w - wp, wp)

    val_l, err_l = integrate_semi_infinite_oscillatory(
        anti_lower, 0.0, 2.0 * cfg.q, tail_quad)
    val_u, err_u = integrate_semi_infinite_oscillatory(
        anti_upper, w, 2.0 * cfg.q, tail_quad)
    return val_l + val_u, err_l + err_u


def _chi_positive(cfg, i, j, w, quad):
    """chi_ij[w] for w > 0 via the symmetric/antisymmetric split."""
    pref = 0.5j * cfg.hbar / (2.0 * np.pi)

    def sym_part(wp):
        return wp * (w - wp) * _gamma_sym(cfg, i, j, w - wp, wp)

    # a cancellation below rel_tol of the natural scale hbar w^3 counts
    # as converged even when it defeats the pure-relative target
    sym_quad = replace(quad, abs_tol=max(
        quad.abs_tol, quad.rel_tol * w**3 / (2.0 * np.pi)))
    val_s, err_s = integrate_finite(sym_part, 0.0, w, sym_quad)

    if cfg.m1.supports_analytic and cfg.m2.supports_analytic:
        val_t, err_t = _tail_rotated(cfg, i, j, w, quad)
    else:
        val_t, err_t = _tail_oscillatory(cfg, i, j, w, quad, abs(val_s))
    return pref * (val_s + val_t), abs(pref) * (err_s + err_t)


def chi_spectrum(cfg: CavityConfig, i: int, j: int, grid,
                 quad: QuadratureConfig = QuadratureConfig(),
                 method: str = "full") -> SusceptibilitySeries:
    """chi_ij[w] on a frequency grid.

    method 'full' integrates the two-frequency kernel; 'resonance_approx'
    uses the constant-reflectivity closed form with each mirror's |r|^2
    taken at the evaluation frequency.  Negative frequencies follow from
    the reality condition chi[-w] = conj(chi[w]).
    """
    grid = np.asarray(grid, dtype=float)
    vals = np.empty(grid.shape, dtype=complex)
    errs = np.zeros(grid.shape)
    if method == "full":
        cache: dict[float, complex] = {}
        for k, w in enumerate(grid):
            aw = abs(float(w))
            if aw not in cache:
                if aw == 0.0:
                    cache[aw] = complex(chi_quasistatic(cfg, quad)[i - 1, j - 1])
                else:
                    v, e = _chi_positive(cfg, i, j, aw, quad)
                    cache[aw] = v
                    errs[k] = e
            vals[k] = cache[aw] if w >= 0 else np.conj(cache[aw])
    elif method == "resonance_approx":
        for k, w in enumerate(grid):
            if w == 0.0:
                # omega -> 0 limit of the closed form, including the
                # perfectly reflecting case where the denominator also
                # vanishes (chi ~ -w^2/12 pi q there).
                vals[k] = 0.0
                continue
            r1sq = float(np.abs(cfg.m1.reflectivity(w)) ** 2)
            r2sq = float(np.abs(cfg.m2.reflectivity(w)) ** 2)
            vals[k] = resonance_chi(r1sq, r2sq, cfg.q, i, j, float(w),
                                    hbar=cfg.hbar)
    else:
        raise ValueError(f"unknown method {method!r}")
    series = SusceptibilitySeries(
        name=f"chi{i}{j}", i=i, j=j, grid=grid, values=vals,
        method=method, tail_cutoff=quad.tail_cutoff)
    series.meta["error_bounds"] = errs
    return series


def chi_single_mirror(m, omega, quad: QuadratureConfig = QuadratureConfig(),
                      hbar: float = 1.0):
    """Susceptibility of one mirror alone in the vacuum.

    chi[w] = i hbar Int_0^w dw'/2pi w'(w - w') alpha[w', w - w'], with
    alpha = 1 - s s' + r r'.
    """
    w = float(omega)
    if w == 0.0:
        return 0.0 + 0.0j
    sign = 1.0 if w > 0 else -1.0
    w = abs(w)

    def integrand(wp):
        r_a = np.asarray(m.reflectivity(wp), dtype=complex)
        r_b = np.asarray(m.reflectivity(w - wp), dtype=complex)
        s_a = np.asarray(m.transmittivity(wp), dtype=complex)
        s_b = np.asarray(m.transmittivity(w - wp), dtype=complex)
        alpha = 1.0 - s_a * s_b + r_a * r_b
        return wp * (w - wp) * alpha / (2.0 * np.pi)

    val, _ = integrate_finite(integrand, 0.0, w, quad)
    val = 1j * hbar * val
    return val if sign > 0 else np.conj(val)


def chi_quasistatic(cfg: CavityConfig,
                    quad: QuadratureConfig = QuadratureConfig()) -> np.ndarray:
    """2x2 matrix of zero-frequency susceptibilities chi_ij[0].

    chi_ij[0] = (hbar/2pi) Int_0^inf w^2 Im gamma^R_ij[w, -w] dw, which
    equals the static-force gradient d<F_i>/dq_j.

    2 Im gamma^R_ij[w, -w] is the argument-exchange difference of
    gamma^R at (w, -w), so the integral reduces to the mixed term alone
    and is the zero-frequency case of the susceptibility tail: it is
    evaluated by the same contour rotation whenever the mirror models
    continue off the real axis, falling back to accelerated real-axis
    summation otherwise (with its limited accuracy on the resonance
    comb of high-finesse cavities).
    """
    analytic = cfg.m1.supports_analytic and cfg.m2.supports_analytic
    big = replace(quad, tail_cutoff=max(quad.tail_cutoff, 3000.0 / cfg.q))
    pref = 0.5j * cfg.hbar / (2.0 * np.pi)
    out = np.empty((2, 2))
    for i in (1, 2):
        for j in (1, 2):
            if analytic:
                val, _ = _tail_rotated(cfg, i, j, 0.0, quad)
                out[i - 1, j - 1] = (pref * val).real
            else:
                def integrand(w, i=i, j=j):
                    return w**2 * np.imag(gamma_retarded(cfg, i, j, w, -w))
                val, _ = integrate_semi_infinite_oscillatory(
                    integrand, 0.0, 2.0 * cfg.q, big)
                out[i - 1, j - 1] = cfg.hbar / (2.0 * np.pi) * val.real
    return out


def perfect_mirror_echo_train(n_echoes: int):
    """Delayed-response trains of the perfectly reflecting cavity.

    Returns (order-3 train, order-1 train) for the force on mirror 1.
    Order-3 weights are in units hbar/(6 pi); order-1 weights in units
    hbar pi/(6 q^2).  Self-response echoes sit at even multiples of the
    flight time q, cross responses at odd multiples with opposite sign.
    """
    if n_echoes < 1:
        raise ValueError("n_echoes must be >= 1")
    order3 = []
    order1 = [EchoTerm(1, 1, 0, 0.5)]
    for n in range(n_echoes):
        order3.append(EchoTerm(1, 1, 2 * n, 1.0))
        order3.append(EchoTerm(1, 2, 2 * n + 1, -1.0))
        if n >= 1:
            order1.append(EchoTerm(1, 1, 2 * n, 1.0))
        order1.append(EchoTerm(1, 2, 2 * n + 1, -1.0))
    return (EchoTrain(derivative_order=3, terms=tuple(order3)),
            EchoTrain(derivative_order=1, terms=tuple(order1)))


def echo_transfer(train: EchoTrain, j: int, omega, q: float,
                  hbar: float = 1.0):
    """Frequency response of one train: force on mirror 1 per unit motion
    of mirror j.  Each term contributes weight * (-iw)^order * e^{iw n q}."""
    omega = np.asarray(omega, dtype=complex)
    if train.derivative_order == 3:
        prefactor = hbar / (6.0 * np.pi)
    elif train.derivative_order == 1:
        prefactor = hbar * np.pi / (6.0 * q**2)
    else:
        raise ValueError("unsupported derivative order")
    out = np.zeros(omega.shape, dtype=complex)
    for term in train.terms:
        if term.j != j:
            continue
        out = out + (term.weight
                     * (-1j * omega) ** train.derivative_order
                     * np.exp(1j * omega * term.delay_multiple * q))
    return prefactor * out


def resonance_chi(r1_sq: float, r2_sq: float, q: float, i: int, j: int,
                  omega: float, hbar: float = 1.0) -> complex:
    """High-finesse closed form with constant reflection coefficients.

    chi_11[w] = (i hbar w^3/6pi) r1^2 / (1 - r^2 e^{2iwq}),
    chi_21[w] = -(i hbar w^3/6pi) r^2 e^{iwq} / (1 - r^2 e^{2iwq}),
    r^2 = r1^2 r2^2; the (2,2) and (1,2) entries follow by exchanging the
    mirrors.  Meaningful for w >> pi/q (not enforced).
    """
    for val, name in ((r1_sq, "r1_sq"), (r2_sq, "r2_sq")):
        if not 0.0 <= val <= 1.0:
            raise ValueError(f"{name} must lie in [0, 1]")
    if i not in (1, 2) or j not in (1, 2):
        raise ValueError("mirror indices must be 1 or 2")
    r_sq = r1_sq * r2_sq
    w = float(omega)
    denom = 1.0 - r_sq * np.exp(2j * w * q)
    if abs(denom) < 1e-14:
        raise ResonanceDivergenceError(
            f"perfect reflection on mechanical resonance at omega = {w:g}")
    lead = 1j * hbar * w**3 / (6.0 * np.pi)
    if i == j:
        own = r1_sq if i == 1 else r2_sq
        return lead * own / denom
    return -lead * r_sq * np.exp(1j * w * q) / denom
