"""Mirror scattering-amplitude models.

Each mirror is lossless and described by frequency-dependent reflection and
transmission amplitudes r[w], s[w] forming the 2x2 scattering matrix
[[s, r], [r, s]] on the counterpropagating field basis.  Physical models
satisfy four conditions: reality (r[-w] = conj r[w]), causality (amplitudes
analytic in the upper half-plane), unitarity (|s|^2 + |r|^2 = 1 with
Re(s conj(r)) = 0), and transparency at high frequencies.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.interpolate import PchipInterpolator

from .numerics import QuadratureConfig, integrate_finite

__all__ = [
    "MirrorModel",
    "Lorentzian",
    "IdealBand",
    "Transparent",
    "Tabulated",
    "ValidationReport",
    "validate_mirror",
    "kramers_kronig_real_part",
]


class MirrorModel:
    """Base for mirror amplitude models; instances are immutable and pure."""

    #: models that violate causality on purpose (limit checks only)
    diagnostic = False

    def reflectivity(self, omega):
        raise NotImplementedError

    def transmittivity(self, omega):
        raise NotImplementedError

    def reflectivity_imag_axis(self, y):
        """r evaluated at omega = i*y (y >= 0), where causal models are
        analytic and real.  Only available for closed-form causal models."""
        raise NotImplementedError(
            f"{type(self).__name__} has no imaginary-axis continuation")

    @property
    def supports_imag_axis(self) -> bool:
        try:
            self.reflectivity_imag_axis(np.array([1.0]))
        except NotImplementedError:
            return False
        return True

    def amplitudes_analytic(self, z):
        """(r, s) continued to complex frequencies z near the real axis.

        Only closed-form models provide this; it is used to deform
        conditionally convergent frequency integrals off the real axis.
        """
        raise NotImplementedError(
            f"{type(self).__name__} has no complex-frequency continuation")

    @property
    def supports_analytic(self) -> bool:
        try:
            self.amplitudes_analytic(np.array([0.5 + 0.5j]))
        except NotImplementedError:
            return False
        return True

    def scattering_matrix(self, omega):
        """Per-mirror 2x2 matrix [[s, r], [r, s]], shape (..., 2, 2)."""
        omega = np.asarray(omega, dtype=float)
        r = np.asarray(self.reflectivity(omega), dtype=complex)
        s = np.asarray(self.transmittivity(omega), dtype=complex)
        out = np.empty(omega.shape + (2, 2), dtype=complex)
        out[..., 0, 0] = s
        out[..., 0, 1] = r
        out[..., 1, 0] = r
        out[..., 1, 1] = s
        return out


@dataclass(frozen=True)
class Lorentzian(MirrorModel):
    """Single-pole causal mirror: r[w] = -1/(1 - iw/omega_c), s = 1 + r.

    Perfectly reflecting at DC, transparent far above omega_c, with the
    pole at w = -i*omega_c (regular in the upper half-plane).
    """

    omega_c: float

    def __post_init__(self):
        if not (self.omega_c > 0.0 and np.isfinite(self.omega_c)):
            raise ValueError("omega_c must be a positive finite frequency")

    def reflectivity(self, omega):
        omega = np.asarray(omega, dtype=float)
        return -1.0 / (1.0 - 1j * omega / self.omega_c)

    def transmittivity(self, omega):
        return 1.0 + self.reflectivity(omega)

    def reflectivity_imag_axis(self, y):
        y = np.asarray(y, dtype=float)
        return -1.0 / (1.0 + y / self.omega_c)

    def amplitudes_analytic(self, z):
        z = np.asarray(z, dtype=complex)
        r = -1.0 / (1.0 - 1j * z / self.omega_c)
        return r, 1.0 + r


@dataclass(frozen=True)
class IdealBand(MirrorModel):
    """Perfect reflector below a sharp cutoff: r = -1 for |w| < cutoff.

    The step is non-analytic, so this model is flagged diagnostic: it is
    meant for perfect-mirror limit checks, never for response functions
    that rely on causality.
    """

    cutoff: float
    diagnostic = True

    def __post_init__(self):
        if not (self.cutoff > 0.0 and np.isfinite(self.cutoff)):
            raise ValueError("cutoff must be a positive finite frequency")

    def reflectivity(self, omega):
        omega = np.asarray(omega, dtype=float)
        return np.where(np.abs(omega) < self.cutoff, -1.0 + 0.0j, 0.0 + 0.0j)

    def transmittivity(self, omega):
        omega = np.asarray(omega, dtype=float)
        return np.where(np.abs(omega) < self.cutoff, 0.0 + 0.0j, 1.0 + 0.0j)

    def amplitudes_analytic(self, z):
        # constant continuation of the in-band value off the real axis;
        # the band is read from the real part of the frequency
        z = np.asarray(z, dtype=complex)
        in_band = np.abs(z.real) < self.cutoff
        r = np.where(in_band, -1.0 + 0.0j, 0.0 + 0.0j)
        s = np.where(in_band, 0.0 + 0.0j, 1.0 + 0.0j)
        return r, s


@dataclass(frozen=True)
class Transparent(MirrorModel):
    """No mirror at all: r = 0, s = 1."""

    def reflectivity(self, omega):
        omega = np.asarray(omega, dtype=float)
        return np.zeros(omega.shape, dtype=complex)

    def transmittivity(self, omega):
        omega = np.asarray(omega, dtype=float)
        return np.ones(omega.shape, dtype=complex)

    def reflectivity_imag_axis(self, y):
        return np.zeros(np.asarray(y, dtype=float).shape)

    def amplitudes_analytic(self, z):
        z = np.asarray(z, dtype=complex)
        return np.zeros(z.shape, dtype=complex), np.ones(z.shape, dtype=complex)


class Tabulated(MirrorModel):
    """Amplitudes interpolated from sampled data.

    Real and imaginary parts are interpolated separately with monotone
    cubics.  Queries outside the node range raise (no extrapolation).  If
    the table covers only non-negative frequencies, negative-frequency
    queries use the reality condition r[-w] = conj r[w].  Unitarity of the
    data is checked by the validator, not enforced here.
    """

    def __init__(self, omega_nodes, r_samples, s_samples):
        omega_nodes = np.asarray(omega_nodes, dtype=float)
        r_samples = np.asarray(r_samples, dtype=complex)
        s_samples = np.asarray(s_samples, dtype=complex)
        if omega_nodes.ndim != 1 or len(omega_nodes) < 2:
            raise ValueError("need at least two frequency nodes")
        if np.any(np.diff(omega_nodes) <= 0.0):
            raise ValueError("frequency nodes must be strictly increasing")
        if r_samples.shape != omega_nodes.shape or s_samples.shape != omega_nodes.shape:
            raise ValueError("sample arrays must match the node array")
        self._nodes = omega_nodes
        self._interp = {
            "re_r": PchipInterpolator(omega_nodes, r_samples.real),
            "im_r": PchipInterpolator(omega_nodes, r_samples.imag),
            "re_s": PchipInterpolator(omega_nodes, s_samples.real),
            "im_s": PchipInterpolator(omega_nodes, s_samples.imag),
        }
        self._reflect_negative = omega_nodes[0] >= 0.0

    @classmethod
    def from_csv(cls, path):
        """Load from CSV with header ``omega,re_r,im_r,re_s,im_s``."""
        path = Path(path)
        with path.open(newline="") as fh:
            reader = csv.DictReader(fh)
            required = {"omega", "re_r", "im_r", "re_s", "im_s"}
            if reader.fieldnames is None or not required.issubset(reader.fieldnames):
                raise ValueError(
                    f"{path}: CSV must have header columns {sorted(required)}")
            rows = [(float(row["omega"]),
                     float(row["re_r"]) + 1j * float(row["im_r"]),
                     float(row["re_s"]) + 1j * float(row["im_s"]))
                    for row in reader]
        if not rows:
            raise ValueError(f"{path}: no data rows")
        omega, r, s = (np.array(col) for col in zip(*rows))
        return cls(omega.real.astype(float), r, s)

    def _eval(self, key_re, key_im, omega):
        omega = np.asarray(omega, dtype=float)
        query = omega
        conjugate = np.zeros(omega.shape, dtype=bool)
        if self._reflect_negative:
            conjugate = omega < 0.0
            query = np.abs(omega)
        lo, hi = self._nodes[0], self._nodes[-1]
        if np.any(query < lo) or np.any(query > hi):
            raise ValueError(
                f"frequency outside tabulated range [{lo:g}, {hi:g}]")
        vals = self._interp[key_re](query) + 1j * self._interp[key_im](query)
        return np.where(conjugate, np.conj(vals), vals)

    def reflectivity(self, omega):
        return self._eval("re_r", "im_r", omega)

    def transmittivity(self, omega):
        return self._eval("re_s", "im_s", omega)


@dataclass(frozen=True)
class ValidationReport:
    """Residuals of the four mirror conditions on a frequency grid."""

    max_reality_residual: float
    max_unitarity_residual: float
    transparency_tail_norm: float
    causality_residual: float
    reality_pass: bool
    unitarity_pass: bool
    transparency_pass: bool
    causality_pass: bool

    @property
    def passed(self) -> bool:
        return (self.reality_pass and self.unitarity_pass
                and self.transparency_pass and self.causality_pass)


def kramers_kronig_real_part(model: MirrorModel, omega_grid, tail_cutoff=None,
                             cfg: QuadratureConfig | None = None):
    """Reconstruct Re r on a grid from Im r by a dispersion integral.

    Uses Re r(w) = (2/pi) PV Int_0^inf w' Im r(w') / (w'^2 - w^2) dw',
    with the pole removed by subtraction and its principal value restored
    in closed form.  The integral is truncated at ``tail_cutoff`` (default
    100x the grid maximum), which limits accuracy to roughly the neglected
    |Im r| tail mass.
    """
    omega_grid = np.asarray(omega_grid, dtype=float)
    w_max = float(np.abs(omega_grid).max())
    cut = tail_cutoff if tail_cutoff is not None else max(100.0 * w_max, 100.0)
    if cfg is None:
        cfg = QuadratureConfig(rel_tol=1e-8, abs_tol=1e-10)

    def im_r(x):
        return np.asarray(model.reflectivity(x)).imag

    out = np.empty(omega_grid.shape, dtype=float)
    for k, w in enumerate(np.abs(omega_grid)):
        g_w = im_r(np.array([w]))[0]

        def subtracted(x, w=w, g_w=g_w):
            num = x * im_r(x) - w * g_w
            den = x * x - w * w
            # the removable point only matters if a node lands exactly on w
            safe = np.where(np.abs(den) < 1e-300, 1.0, den)
            return np.where(np.abs(den) < 1e-300, 0.0, num / safe)

        val, _ = integrate_finite(subtracted, 0.0, cut, cfg)
        if w > 0.0:
            pv = (0.5 / w) * np.log((cut - w) / (cut + w))
            val += w * g_w * pv
        out[k] = (2.0 / np.pi) * val.real
    return out


def validate_mirror(model: MirrorModel, omega_grid,
                    cfg: QuadratureConfig | None = None,
                    reality_tol=1e-8, unitarity_tol=1e-8,
                    causality_tol=1e-3, transparency_tol=0.5) -> ValidationReport:
    """Check reality, unitarity, transparency, and causality on a grid.

    The causality check compares Re r against its dispersion-integral
    reconstruction from Im r; models flagged diagnostic fail it by
    construction.  The transparency tail norm is max |r| over the top
    decade of the grid — whether that is small enough for a given
    calculation is left to the caller.
    """
    omega_grid = np.asarray(omega_grid, dtype=float)
    if omega_grid.size == 0:
        raise ValueError("frequency grid must be nonempty")

    r_pos = np.asarray(model.reflectivity(omega_grid), dtype=complex)
    s_pos = np.asarray(model.transmittivity(omega_grid), dtype=complex)
    r_neg = np.asarray(model.reflectivity(-omega_grid), dtype=complex)
    s_neg = np.asarray(model.transmittivity(-omega_grid), dtype=complex)

    reality = max(np.abs(r_neg - np.conj(r_pos)).max(),
                  np.abs(s_neg - np.conj(s_pos)).max())
    unitarity = max(np.abs(np.abs(s_pos) ** 2 + np.abs(r_pos) ** 2 - 1.0).max(),
                    np.abs((s_pos * np.conj(r_pos)).real).max())

    w_abs = np.abs(omega_grid)
    tail_mask = w_abs >= 0.9 * w_abs.max()
    tail_norm = float(np.abs(r_pos[tail_mask]).max())

    if model.diagnostic:
        causality = float("inf")
        causal_ok = False
    else:
        re_kk = kramers_kronig_real_part(model, omega_grid, cfg=cfg)
        causality = float(np.abs(r_pos.real - re_kk).max())
        causal_ok = causality < causality_tol

    return ValidationReport(
        max_reality_residual=float(reality),
        max_unitarity_residual=float(unitarity),
        transparency_tail_norm=tail_norm,
        causality_residual=causality,
        reality_pass=bool(reality < reality_tol),
        unitarity_pass=bool(unitarity < unitarity_tol),
        transparency_pass=bool(tail_norm < transparency_tol),
        causality_pass=bool(causal_ok),
    )
