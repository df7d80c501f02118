"""Eigenvalues of symmetric tridiagonal matrices by Sturm-sequence bisection.

Only eigenvalues below a threshold are ever needed, and their number must
be certified, so bisection on the negative-pivot count is the only
algorithm used. The kernels are compiled with numba and release the GIL.
"""
import numpy as np
from numba import njit

from .errors import DomainError

_TINY = np.finfo(float).tiny


@njit(cache=True, nogil=True)
def _count(d, e2, x, pivmin):
    # negative pivots of the LDL^T factorization of T - x I
    count = 0
    q = d[0] - x
    if abs(q) < pivmin:
        q = -pivmin
    if q < 0.0:
        count += 1
    for i in range(1, d.shape[0]):
        q = d[i] - x - e2[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0.0:
            count += 1
    return count


@njit(cache=True, nogil=True)
def _kth(d, e2, k, lo, hi, tol, pivmin):
    # bracket [lo, hi] with count(lo) <= k < count(hi); tol <= 0 bisects to full resolution
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi or (tol > 0.0 and hi - lo <= tol):
            break
        if _count(d, e2, mid, pivmin) > k:
            hi = mid
        else:
            lo = mid
    return lo, hi


@njit(cache=True, nogil=True)
def _index_range(d, e2, k0, k1, lo, hi, tol, pivmin):
    out = np.empty(k1 - k0)
    for k in range(k0, k1):
        a, b = _kth(d, e2, k, lo, hi, tol, pivmin)
        out[k - k0] = 0.5 * (a + b)
    return out


def _arrays(T):
    d = np.ascontiguousarray(T.diag, dtype=float)
    e = np.ascontiguousarray(T.offdiag, dtype=float)
    e2 = e * e
    pivmin = _TINY * max(1.0, float(e2.max()) if e2.size else 1.0)
    return d, e2, pivmin


def gershgorin(T):
    """Interval ``(lo, hi)`` containing every eigenvalue of ``T``."""
    a = np.abs(np.asarray(T.offdiag, dtype=float))
    radius = np.zeros(T.diag.shape[0])
    radius[:-1] += a
    radius[1:] += a
    lo = float(np.min(T.diag - radius))
    hi = float(np.max(T.diag + radius))
    pad = 2.0 * np.finfo(float).eps * max(abs(lo), abs(hi), 1.0)
    return lo - pad, hi + pad


def count_below(T, x):
    """Number of eigenvalues of ``T`` strictly below ``x``."""
    x = float(x)
    if not np.isfinite(x):
        raise DomainError("threshold must be finite")
    d, e2, pivmin = _arrays(T)
    return int(_count(d, e2, x, pivmin))


def eigenvalues_below(T, x, tol=None):
    """All eigenvalues below ``x``, ascending, each bracketed to width ``tol``.

    The default ``tol`` is ``1e-10 * max(1, |x|)``; ``tol=0`` bisects down
    to floating-point resolution. Brackets start from the Gershgorin
    interval, not from ``x``, so the value returned for the ``k``-th
    eigenvalue does not depend on the threshold asked for.
    """
    x = float(x)
    if tol is None:
        tol = 1e-10 * max(1.0, abs(x))
    if tol < 0:
        raise DomainError("tolerance must be non-negative")
    d, e2, pivmin = _arrays(T)
    m = int(_count(d, e2, x, pivmin))
    if m == 0:
        return np.empty(0)
    lo, hi = gershgorin(T)
    vals = _index_range(d, e2, 0, m, lo, hi, float(tol), pivmin)
    # a midpoint within tol of x may land on or above it
    return np.minimum(vals, np.nextafter(x, -np.inf))


def kth_eigenvalue(T, k, tol=0.0):
    """The ``k``-th smallest eigenvalue (0-based) by bisection on the Gershgorin interval."""
    if not 0 <= k < T.n:
        raise DomainError("eigenvalue index %d out of range for size %d" % (k, T.n))
    d, e2, pivmin = _arrays(T)
    lo, hi = gershgorin(T)
    a, b = _kth(d, e2, int(k), lo, hi, float(tol), pivmin)
    return 0.5 * (a + b)


def ground_state(T, tol=0.0):
    """Smallest eigenvalue, bisected on the Gershgorin interval."""
    return kth_eigenvalue(T, 0, tol)


def eigenvalue_range(T, k0, k1, tol=0.0):
    """Eigenvalues with 0-based indices ``k0 <= k < k1``, ascending."""
    k0, k1 = int(k0), int(k1)
    if not 0 <= k0 <= k1 <= T.n:
        raise DomainError("index range [%d, %d) invalid for size %d" % (k0, k1, T.n))
    if k0 == k1:
        return np.empty(0)
    d, e2, pivmin = _arrays(T)
    lo, hi = gershgorin(T)
    return _index_range(d, e2, k0, k1, lo, hi, float(tol), pivmin)
