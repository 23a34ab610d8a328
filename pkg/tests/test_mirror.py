import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from vacuum_cavity_forces.mirror import (
    IdealBand,
    Lorentzian,
    Tabulated,
    Transparent,
    validate_mirror,
)


def test_lorentzian_dc_value():
    m = Lorentzian(omega_c=2.0)
    assert m.reflectivity(0.0) == pytest.approx(-1.0)
    assert m.transmittivity(0.0) == pytest.approx(0.0)


def test_lorentzian_at_pole_frequency():
    m = Lorentzian(omega_c=2.0)
    assert m.reflectivity(2.0) == pytest.approx(-(1.0 + 1.0j) / 2.0)
    assert m.transmittivity(2.0) == pytest.approx((1.0 - 1.0j) / 2.0)


def test_lorentzian_reality():
    m = Lorentzian(omega_c=2.0)
    assert m.reflectivity(-2.0) == pytest.approx(-(1.0 - 1.0j) / 2.0)


def test_transparent_everywhere():
    m = Transparent()
    w = np.linspace(-10, 10, 7)
    assert np.all(m.reflectivity(w) == 0)
    assert np.all(m.transmittivity(w) == 1)


def test_ideal_band_step():
    m = IdealBand(cutoff=10.0)
    assert m.reflectivity(5.0) == -1.0
    assert m.reflectivity(-5.0) == -1.0
    assert m.reflectivity(15.0) == 0.0
    assert m.transmittivity(5.0) == 0.0
    assert m.transmittivity(15.0) == 1.0


@settings(max_examples=60, deadline=None)
@given(st.floats(0.1, 50.0), st.floats(-100.0, 100.0))
def test_lorentzian_pointwise_unitarity_and_identities(omega_c, w):
    m = Lorentzian(omega_c=omega_c)
    r = complex(m.reflectivity(w))
    s = complex(m.transmittivity(w))
    assert abs(abs(s) ** 2 + abs(r) ** 2 - 1.0) < 1e-12
    assert abs((s * np.conj(r)).real) < 1e-12
    assert s - 1.0 == pytest.approx(r, abs=1e-14)
    assert abs(r) ** 2 == pytest.approx(omega_c**2 / (omega_c**2 + w**2), rel=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.1, 50.0), st.floats(-100.0, 100.0))
def test_scattering_matrix_unitary(omega_c, w):
    m = Lorentzian(omega_c=omega_c)
    mat = m.scattering_matrix(w)
    assert np.abs(mat @ mat.conj().T - np.eye(2)).max() < 1e-12


def test_lorentzian_validation_report():
    m = Lorentzian(omega_c=1.0)
    grid = np.linspace(0.0, 50.0, 200)
    rep = validate_mirror(m, grid)
    assert rep.max_reality_residual < 1e-8
    assert rep.max_unitarity_residual < 1e-8
    assert rep.causality_residual < 1e-3
    assert rep.passed


def test_ideal_band_validation_fails_causality_only():
    m = IdealBand(cutoff=10.0)
    grid = np.linspace(0.0, 50.0, 120)
    rep = validate_mirror(m, grid)
    assert rep.unitarity_pass
    assert rep.reality_pass
    assert not rep.causality_pass


def test_transparent_validation_all_zero():
    rep = validate_mirror(Transparent(), np.linspace(0.0, 20.0, 50))
    assert rep.max_reality_residual == 0.0
    assert rep.max_unitarity_residual == 0.0
    assert rep.transparency_tail_norm == 0.0
    assert rep.causality_residual < 1e-12
    assert rep.passed


def _write_lorentzian_csv(path, omega_c=3.0, n=1200, w_max=60.0):
    ref = Lorentzian(omega_c=omega_c)
    w = np.linspace(0.0, w_max, n)
    r = ref.reflectivity(w)
    s = ref.transmittivity(w)
    lines = ["omega,re_r,im_r,re_s,im_s"]
    for k in range(n):
        lines.append(",".join(f"{float(v):.17g}" for v in
                              (w[k], r[k].real, r[k].imag, s[k].real, s[k].imag)))
    path.write_text("\n".join(lines) + "\n")
    return ref


def test_tabulated_roundtrip_against_source_model(tmp_path):
    csv_path = tmp_path / "mirror.csv"
    ref = _write_lorentzian_csv(csv_path)
    tab = Tabulated.from_csv(csv_path)
    w = np.linspace(-55.0, 55.0, 101)
    assert np.abs(tab.reflectivity(w) - ref.reflectivity(w)).max() < 1e-6
    assert np.abs(tab.transmittivity(w) - ref.transmittivity(w)).max() < 1e-6


def test_tabulated_rejects_out_of_range(tmp_path):
    csv_path = tmp_path / "mirror.csv"
    _write_lorentzian_csv(csv_path)
    tab = Tabulated.from_csv(csv_path)
    with pytest.raises(ValueError, match="outside tabulated range"):
        tab.reflectivity(100.0)


def test_tabulated_requires_header(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("1.0,0.1,0.2,0.3,0.4\n")
    with pytest.raises(ValueError, match="header"):
        Tabulated.from_csv(bad)


def test_tabulated_requires_increasing_nodes():
    with pytest.raises(ValueError, match="strictly increasing"):
        Tabulated([0.0, 1.0, 1.0], [0, 0, 0], [1, 1, 1])


def test_validator_rejects_empty_grid():
    with pytest.raises(ValueError):
        validate_mirror(Transparent(), np.array([]))
