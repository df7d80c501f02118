import numpy as np
import pytest
from scipy.optimize import brentq

from maglap.bessel import bessel_zero
from maglap.discretize import SymTridiagonal, build_operator, discretize
from maglap.eigensolve import (
    count_below,
    eigenvalue_range,
    eigenvalues_below,
    gershgorin,
    ground_state,
    kth_eigenvalue,
)
from maglap.field import FieldProfile


def tri(diag, off):
    diag = np.asarray(diag, dtype=float)
    r = np.arange(1, len(diag) + 1, dtype=float)
    return SymTridiagonal(diag, np.asarray(off, dtype=float), np.ones_like(diag), r, 1.0)


def charpoly_roots(diag, off):
    """Roots of det(T - x I) from the three-term recurrence, bracketed on a fine mesh."""
    def p(x):
        a, b = 1.0, diag[0] - x
        for k in range(1, len(diag)):
            a, b = b, (diag[k] - x) * b - off[k - 1] ** 2 * a
        return b

    lo = min(diag - np.r_[0, np.abs(off)] - np.r_[np.abs(off), 0]) - 1
    hi = max(diag + np.r_[0, np.abs(off)] + np.r_[np.abs(off), 0]) + 1
    xs = np.linspace(lo, hi, 40001)
    ps = np.array([p(x) for x in xs])
    roots = [x for x, px in zip(xs, ps) if px == 0.0]
    roots += [brentq(p, a, b, xtol=1e-14, rtol=1e-15)
              for a, b, pa, pb in zip(xs, xs[1:], ps, ps[1:]) if pa * pb < 0]
    return np.sort(roots)


ZERO_M0 = discretize(build_operator("magnetic", FieldProfile.zero(), 0), 4096)
ZERO_M1 = discretize(build_operator("magnetic", FieldProfile.zero(), 1), 4096)


def test_two_by_two():
    T = tri([2, 2], [-1])
    assert count_below(T, 2) == 1
    assert count_below(T, 4) == 2
    np.testing.assert_allclose(eigenvalues_below(T, 4, tol=1e-12), [1.0, 3.0], atol=1e-12)
    assert ground_state(T) == pytest.approx(1.0, abs=1e-15)


def test_trivial_cases():
    assert list(eigenvalues_below(tri([5.0], []), 10)) == pytest.approx([5.0])
    assert ground_state(tri([3, 3], [0])) == 3.0


def test_zero_field_modes():
    j01, j02, j11 = bessel_zero(0, 1), bessel_zero(0, 2), bessel_zero(1, 1)
    assert j01 ** 2 < 30 < j02 ** 2
    assert count_below(ZERO_M0, 30) == 1
    vals = eigenvalues_below(ZERO_M1, 30)
    assert len(vals) == 1 and vals[0] == pytest.approx(j11 ** 2, rel=1e-5)
    assert ground_state(ZERO_M0) == pytest.approx(j01 ** 2, rel=1e-5)


def test_counts_monotone_and_complete():
    xs = np.linspace(-10, 400, 300)
    counts = [count_below(ZERO_M0, x) for x in xs]
    assert counts == sorted(counts)
    lo, hi = gershgorin(ZERO_M0)
    assert count_below(ZERO_M0, lo) == 0
    assert count_below(ZERO_M0, hi + 1) == ZERO_M0.n


def test_bracketing_invariant():
    tol = 1e-8
    for v in eigenvalues_below(ZERO_M1, 500, tol=tol):
        assert count_below(ZERO_M1, v + tol) > count_below(ZERO_M1, v - tol)


def test_values_do_not_depend_on_threshold():
    a = eigenvalues_below(ZERO_M0, 100.0, tol=0)
    b = eigenvalues_below(ZERO_M0, 1000.0, tol=0)
    assert np.array_equal(a, b[: len(a)])
    assert np.array_equal(a, eigenvalue_range(ZERO_M0, 0, len(a)))


@pytest.mark.parametrize("seed", range(25))
def test_random_against_characteristic_polynomial(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 13))
    diag = rng.uniform(-5, 5, n)
    off = rng.uniform(0.2, 3.0, n - 1) * rng.choice([-1, 1], n - 1)
    T = tri(diag, off)
    roots = charpoly_roots(diag, off)
    assert len(roots) == n
    lo, hi = gershgorin(T)
    np.testing.assert_allclose(eigenvalues_below(T, hi, tol=0), roots, atol=1e-9)
    np.testing.assert_allclose([kth_eigenvalue(T, k) for k in range(n)], roots, atol=1e-9)


def test_zero_pivot_survives():
    # exact zero pivots at x = 0 and repeated diagonal entries
    T = tri([0, 0, 0, 0], [1, 1, 1])
    np.testing.assert_allclose(eigenvalues_below(T, 3, tol=0),
                               np.linalg.eigvalsh(T.to_dense()), atol=1e-14)
    assert count_below(T, 0.0) == 2
