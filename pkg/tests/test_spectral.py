import numpy as np
import pytest

from maglap.bessel import zero_field_oracle
from maglap.discretize import build_operator, discretize
from maglap.eigensolve import count_below
from maglap.errors import DomainError
from maglap.field import FieldProfile
from maglap.spectral import (
    auxiliary_modes,
    clear_cache,
    magnetic_spectrum,
    mode_spectrum,
    mode_window,
    operator_trace_1d,
    riesz_mean,
    schrodinger_trace,
    spectrum_csv,
    spectrum_json,
)

ZERO = FieldProfile.zero()


def oracle_riesz(lam, sigma):
    return sum((lam - v) ** sigma for v in zero_field_oracle(1.0, lam))


def test_window_examples():
    assert mode_window(ZERO, 30, "magnetic") == (-6, 6)
    assert mode_window(FieldProfile.constant(1.0), 100, "magnetic") == (-11, 11)
    assert mode_window(ZERO, 0, "magnetic") == (-1, 1)
    with pytest.raises(DomainError):
        mode_window(ZERO, -1)


def test_zero_field_spectrum():
    spec = magnetic_spectrum(ZERO, 30, 4096)
    oracle = zero_field_oracle(1.0, 30)
    assert len(spec.eigenvalues) == 5
    np.testing.assert_allclose(spec.eigenvalues, oracle, rtol=1e-6)
    assert all(len(m.eigenvalues) == 0 for m in magnetic_spectrum(ZERO, 0, 4096).modes)


def test_constant_field_lower_bounds():
    lam1 = magnetic_spectrum(FieldProfile.constant(2.0), 30, 4096).eigenvalues[0]
    assert lam1 >= 5.7832 and lam1 >= 2.0


def test_riesz_examples():
    assert riesz_mean([1.0, 3.0], 2.0, 1.0) == 1.0
    assert riesz_mean([], 7.0, 1.5) == 0.0
    value = riesz_mean(magnetic_spectrum(ZERO, 30, 4096), 30, 1.5)
    assert value == pytest.approx(oracle_riesz(30, 1.5), rel=1e-8)
    assert value == pytest.approx(252.9, abs=0.05)
    with pytest.raises(DomainError):
        riesz_mean([1.0], 2.0, -0.5)


def test_zero_field_auxiliary_traces():
    lam, sigma = 30, 1.5
    expected = oracle_riesz(lam, sigma)
    assert schrodinger_trace(ZERO, "outer", lam, sigma) == pytest.approx(expected, rel=1e-8)
    assert schrodinger_trace(ZERO, "inner", lam, sigma) == pytest.approx(expected, rel=1e-8)
    l = operator_trace_1d(ZERO, "l", lam, sigma)
    assert l == pytest.approx((lam - 2.404825557695773 ** 2) ** 1.5, rel=1e-8)
    assert l == pytest.approx(119.18, abs=0.01)
    assert l == operator_trace_1d(ZERO, "ltilde", lam, sigma)
    assert operator_trace_1d(FieldProfile.constant(3.0), "l", 0, 1.5) == 0.0


@pytest.mark.parametrize("which", ["outer", "inner"])
def test_decomposition_identity(which):
    field = FieldProfile.boundary_blowup(1.0, 0.5)
    lam, sigma = 40, 2.0
    modes = auxiliary_modes(field, which, lam)
    side = 0.0
    for m in modes[1:]:
        side += riesz_mean(m, lam, sigma)
    kind = "l" if which == "outer" else "ltilde"
    assert schrodinger_trace(field, which, lam, sigma) == 2.0 * side + operator_trace_1d(
        field, kind, lam, sigma)


def test_inner_n0_is_ltilde():
    field = FieldProfile.constant(1.5)
    mode = mode_spectrum(field, "inner", 0, 50)
    assert riesz_mean(mode, 50, 1.5) == operator_trace_1d(field, "ltilde", 50, 1.5)


def test_outer_n0_potential_ordering():
    # Psi^2/r^2 grows with B0, so fewer n = 0 eigenvalues fall below a fixed level
    counts = [count_below(discretize(build_operator("l", FieldProfile.constant(b)), 1024), 200)
              for b in (0.0, 2.0, 8.0, 32.0)]
    assert counts == sorted(counts, reverse=True)
    assert schrodinger_trace(FieldProfile.constant(1.0), "outer", 30, 1.5) >= 0


@pytest.mark.parametrize("field", [FieldProfile.constant(1.0), FieldProfile.power_law(3.0, 1.0),
                                   FieldProfile.boundary_blowup(1.0, 0.5)],
                         ids=lambda f: f.descriptor)
def test_window_safety(field):
    lam, sigma = 60, 1.5
    base = riesz_mean(magnetic_spectrum(field, lam), lam, sigma)
    wide = riesz_mean(magnetic_spectrum(field, lam, pad=5), lam, sigma)
    assert abs(wide - base) <= 1e-12 * abs(base)
    for which in ("outer", "inner"):
        a = schrodinger_trace(field, which, lam, sigma)
        b = schrodinger_trace(field, which, lam, sigma, pad=5)
        assert abs(a - b) <= 1e-12 * abs(a)


def test_plus_minus_asymmetry():
    f = FieldProfile.constant(2.0)
    plus = mode_spectrum(f, "magnetic", 2, 80).eigenvalues
    minus = mode_spectrum(f, "magnetic", -2, 80).eigenvalues
    assert plus[0] < minus[0] - 1.0
    a = mode_spectrum(ZERO, "magnetic", 2, 80).eigenvalues
    b = mode_spectrum(ZERO, "magnetic", -2, 80).eigenvalues
    np.testing.assert_allclose(a, b, rtol=1e-14)


def test_riesz_monotone_and_continuous():
    f = FieldProfile.constant(1.0)
    lam1 = magnetic_spectrum(f, 20).eigenvalues[0]
    grid = lam1 + np.array([-1.0, -1e-3, -1e-9, 0.0, 1e-9, 1e-6, 1e-3, 0.5, 1.0])
    values = [riesz_mean(magnetic_spectrum(f, lam), lam, 1.5) for lam in grid]
    assert values == sorted(values)
    assert values[3] == 0.0 and values[4] < 1e-12
    assert values[2] == 0.0


def test_determinism_across_workers():
    f = FieldProfile.boundary_blowup(1.0, 0.5)
    clear_cache()
    one = spectrum_csv(magnetic_spectrum(f, 50, workers=1))
    clear_cache()
    four = spectrum_csv(magnetic_spectrum(f, 50, workers=4))
    assert one == four
    clear_cache()
    a = schrodinger_trace(f, "outer", 50, 2.0, workers=1)
    clear_cache()
    assert schrodinger_trace(f, "outer", 50, 2.0, workers=3) == a


def test_exports():
    spec = magnetic_spectrum(ZERO, 30)
    lines = spectrum_csv(spec).splitlines()
    assert lines[0] == "mode,index,eigenvalue" and len(lines) == 6
    doc = spectrum_json(spec)
    assert doc["window"] == [-6, 6] and doc["count"] == 5 and doc["lambda"] == 30.0
    assert doc["grid"] == {"n": 4096, "richardson": True}
