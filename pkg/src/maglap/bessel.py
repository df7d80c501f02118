"""Bessel functions of integer order and their positive zeros.

This is the zero-field oracle: the Dirichlet eigenvalues of the disk of
radius ``r0`` are ``(j_{m,k} / r0)**2``, with multiplicity two for
``m >= 1``. Nothing here depends on the discretization code.
"""
import math

from .errors import DomainError

MAX_ORDER = 20
MAX_INDEX = 50
_SCAN_STEP = 0.25
_BIG = 1e250


def bessel_j(n, x):
    """``J_n(x)`` for integer ``n >= 0`` and real ``x >= 0``.

    Miller's backward recurrence ``J_{k-1} = (2k/x) J_k - J_{k+1}`` from a
    high starting order, normalized by ``J_0 + 2 sum_k J_{2k} = 1``.
    """
    if n < 0:
        raise DomainError("order must be non-negative")
    if x < 0:
        raise DomainError("argument must be non-negative")
    if x == 0.0:
        return 1.0 if n == 0 else 0.0
    top = max(n, x)
    start = 2 * ((int(top) + 40 + int(math.sqrt(60.0 * top))) // 2)
    two_over_x = 2.0 / x
    j_next, j_cur = 0.0, 1e-30  # J_{start+1}, J_{start}
    even_sum = 0.0
    ans = 0.0
    for k in range(start, 0, -1):
        j_prev = k * two_over_x * j_cur - j_next  # J_{k-1}
        j_next, j_cur = j_cur, j_prev
        if abs(j_cur) > _BIG:
            j_cur /= _BIG
            j_next /= _BIG
            even_sum /= _BIG
            ans /= _BIG
        if k == n:
            ans = j_next
        if (k - 1) % 2 == 0 and k - 1 > 0:
            even_sum += j_cur
    if n == 0:
        ans = j_cur
    return ans / (j_cur + 2.0 * even_sum)


_zeros = {}


def _extend_zeros(m, k):
    found = _zeros.setdefault(m, [])
    x = found[-1] + _SCAN_STEP if found else m + 0.5
    f = bessel_j(m, x)
    while len(found) < k:
        x_next = x + _SCAN_STEP
        f_next = bessel_j(m, x_next)
        if f == 0.0:
            found.append(x)
        elif f * f_next < 0:
            found.append(_bisect(m, x, x_next, f))
        x, f = x_next, f_next
    return found


def _bisect(m, lo, hi, f_lo):
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi or hi - lo <= 1e-14 * hi:
            return mid
        f_mid = bessel_j(m, mid)
        if f_mid == 0.0:
            return mid
        if (f_mid < 0) == (f_lo < 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid


def bessel_zero(m, k):
    """``k``-th positive zero of ``J_m``, for ``0 <= m <= 20`` and ``1 <= k <= 50``."""
    if not (0 <= m <= MAX_ORDER and 1 <= k <= MAX_INDEX):
        raise DomainError("(m, k) = (%d, %d) is outside the oracle range m <= %d, k <= %d"
                          % (m, k, MAX_ORDER, MAX_INDEX))
    return _extend_zeros(m, k)[k - 1]


def zero_field_oracle(r0, lam):
    """Dirichlet eigenvalues of the disk of radius ``r0`` below ``lam``, with multiplicity."""
    if r0 <= 0 or lam < 0:
        raise DomainError("need r0 > 0 and lam >= 0")
    out = []
    m = 0
    while True:
        if m > MAX_ORDER:
            raise DomainError("lam=%g needs Bessel orders above %d" % (lam, MAX_ORDER))
        if (bessel_zero(m, 1) / r0) ** 2 >= lam:
            break
        k = 1
        while True:
            if k > MAX_INDEX:
                raise DomainError("lam=%g needs more than %d zeros of J_%d" % (lam, MAX_INDEX, m))
            value = (bessel_zero(m, k) / r0) ** 2
            if value >= lam:
                break
            out.extend([value] * (1 if m == 0 else 2))
            k += 1
        m += 1
    return sorted(out)
