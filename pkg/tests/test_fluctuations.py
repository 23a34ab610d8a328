import numpy as np
import pytest

from vacuum_cavity_forces.cavity import CavityConfig, q_matrix
from vacuum_cavity_forces.fluctuations import (
    commutator_spectrum,
    force_kernel,
    gamma_closed_form,
    gamma_retarded,
    gamma_via_trace,
    noise_spectrum,
)
from vacuum_cavity_forces.mirror import IdealBand, Lorentzian, Transparent

PAIRS = [(1, 1), (2, 1), (1, 2), (2, 2)]


def _cavity(q=0.9, w1=4.0, w2=7.0):
    return CavityConfig(q=q, m1=Lorentzian(w1), m2=Lorentzian(w2))


def _single_perfect(q=1.0, cutoff=50.0):
    return CavityConfig(q=q, m1=IdealBand(cutoff), m2=Transparent())


def test_kernel_vanishes_without_mirrors():
    cfg = CavityConfig(q=1.0, m1=Transparent(), m2=Transparent())
    assert np.abs(force_kernel(cfg, 1, 2.3, 5.1)).max() == 0.0
    assert np.abs(force_kernel(cfg, 2, 2.3, 5.1)).max() == 0.0


def test_kernel_transpose_and_adjoint_symmetry():
    cfg = _cavity()
    rng = np.random.default_rng(11)
    for _ in range(20):
        a, b = rng.uniform(-15, 15, 2)
        for i in (1, 2):
            F = force_kernel(cfg, i, a, b)
            assert np.abs(F.T - force_kernel(cfg, i, b, a)).max() < 1e-12
            assert np.abs(F.conj().T - force_kernel(cfg, i, -b, -a)).max() < 1e-12


def test_kernel_diagonal_trace_identity():
    cfg = _cavity()
    for w in (0.7, 3.9, -6.2):
        Q = q_matrix(cfg, w)
        qtrace = np.trace(Q + Q.conj().T)
        for i, eps in ((1, 1.0), (2, -1.0)):
            tr = np.trace(force_kernel(cfg, i, w, -w))
            assert tr == pytest.approx(-eps * qtrace, abs=1e-12)


def test_closed_form_equals_trace_oracle():
    cfg = _cavity()
    rng = np.random.default_rng(3)
    for _ in range(100):
        a, b = rng.uniform(-20, 20, 2)
        for i, j in PAIRS:
            t = gamma_via_trace(cfg, i, j, a, b)
            c = gamma_closed_form(cfg, i, j, a, b)
            assert abs(t - c) < 1e-10 * max(abs(t), 1.0)


def test_gamma_symmetries():
    cfg = _cavity(q=1.3, w1=2.0, w2=9.0)
    rng = np.random.default_rng(5)
    for _ in range(30):
        a, b = rng.uniform(-12, 12, 2)
        for i, j in PAIRS:
            g = gamma_closed_form(cfg, i, j, a, b)
            assert g == pytest.approx(gamma_closed_form(cfg, i, j, b, a), abs=1e-12)
            assert g == pytest.approx(np.conj(gamma_closed_form(cfg, j, i, a, b)), abs=1e-12)
            assert g == pytest.approx(gamma_closed_form(cfg, j, i, -a, -b), abs=1e-12)


def test_single_perfect_mirror_gamma_is_eight():
    cfg = _single_perfect()
    for a, b in [(3.0, 7.0), (0.5, 12.0), (20.0, 1.0)]:
        assert gamma_via_trace(cfg, 1, 1, a, b) == pytest.approx(8.0, abs=1e-12)
        assert gamma_closed_form(cfg, 1, 1, a, b) == pytest.approx(8.0, abs=1e-12)


def test_single_mirror_retarded_reductions():
    # mirror 2 removed: gamma^R_11 = 2*alpha_1 and the cross part vanishes
    cfg = CavityConfig(q=1.0, m1=Lorentzian(5.0), m2=Transparent())
    a, b = 3.0, -7.0
    r = cfg.m1.reflectivity
    s = cfg.m1.transmittivity
    alpha1 = 1.0 - s(a) * s(b) + r(a) * r(b)
    assert gamma_retarded(cfg, 1, 1, a, b) == pytest.approx(2.0 * alpha1, abs=1e-14)
    assert gamma_retarded(cfg, 2, 1, a, b) == pytest.approx(0.0, abs=1e-14)


def test_perfect_pair_in_band_simplification():
    # with r = -1, s = 0 on both mirrors the retarded coefficient collapses
    # to 2(2/d[w'] - 1)(1/d[w] + 1/d[-w] - 1) + 2
    cfg = CavityConfig(q=1.0, m1=IdealBand(50.0), m2=IdealBand(50.0))
    for a, b in [(3.3, 7.7), (1.1, 2.9), (8.0, 0.4)]:
        d = lambda w: 1.0 - np.exp(2j * w * cfg.q)
        simplified = 2.0 * (2.0 / d(b) - 1.0) * (1.0 / d(a) + 1.0 / d(-a) - 1.0) + 2.0
        assert gamma_retarded(cfg, 1, 1, a, b) == pytest.approx(simplified, abs=1e-12)


def test_commutator_zero_frequency():
    assert commutator_spectrum(_cavity(), 1, 1, 0.0) == 0.0


def test_single_perfect_mirror_commutator():
    cfg = _single_perfect(cutoff=100.0)
    for w in (1.0, 4.0, 11.0):
        xi = commutator_spectrum(cfg, 1, 1, w)
        assert xi == pytest.approx(cfg.hbar * w**3 / (6.0 * np.pi), rel=1e-9)


def test_single_perfect_mirror_noise_cube_law():
    cfg = _single_perfect(cutoff=100.0)
    grid = np.array([-3.0, 0.5, 2.0, 8.0])
    series = noise_spectrum(cfg, 1, 1, grid)
    expected = np.where(grid > 0, cfg.hbar**2 * grid**3 / (3.0 * np.pi), 0.0)
    assert np.abs(series.values - expected).max() < 1e-6 * max(expected.max(), 1.0)


def test_noise_relation_to_commutator():
    cfg = _cavity()
    for w in (0.8, 2.7):
        c = noise_spectrum(cfg, 1, 1, np.array([w])).values[0]
        xi = commutator_spectrum(cfg, 1, 1, w)
        assert c == pytest.approx(2.0 * cfg.hbar * xi, abs=1e-12)


def test_noise_hermiticity_and_positivity():
    cfg = _cavity(q=1.0, w1=6.0, w2=6.0)
    grid = np.linspace(0.5, 10.0, 8)
    c12 = noise_spectrum(cfg, 1, 2, grid).values
    c21 = noise_spectrum(cfg, 2, 1, grid).values
    assert np.abs(c12 - np.conj(c21)).max() < 1e-10
    for i in (1, 2):
        cii = noise_spectrum(cfg, i, i, grid).values
        assert np.abs(cii.imag).max() < 1e-10
        assert np.all(cii.real >= 0.0)


def test_noise_zero_for_negative_frequencies():
    series = noise_spectrum(_cavity(), 1, 1, np.array([-5.0, -0.1]))
    assert np.all(series.values == 0.0)


def test_trace_mode_matches_closed_form_spectrum():
    cfg = _cavity()
    w = 3.0
    a = commutator_spectrum(cfg, 1, 2, w, use_trace=True)
    b = commutator_spectrum(cfg, 1, 2, w, use_trace=False)
    assert a == pytest.approx(b, rel=1e-9)
