"""Adaptive Gauss-Kronrod quadrature with an optional singular right endpoint.

Only used as the generic (slow) path for flux integrals; closed forms are
preferred whenever the profile has one.
"""
import heapq
import math

import numpy as np

from .errors import InfiniteFluxError

# 7-point Gauss / 15-point Kronrod nodes on [-1, 1]
_XK = np.array([
    -0.991455371120812639206854697526329,
    -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926,
    -0.741531185599394439863864773280788,
    -0.586087235467691130294144845693013,
    -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245,
    0.0,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144845693013,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082,
])


def _gk15(f, a, b):
    c = 0.5 * (a + b)
    hw = 0.5 * (b - a)
    fx = f(c + hw * _XK)
    kronrod = hw * np.dot(_WK, fx)
    gauss = hw * np.dot(_WG, fx[1::2])
    return kronrod, abs(kronrod - gauss)


def adaptive_gk(f, a, b, rtol=1e-12, atol=0.0, max_intervals=4000):
    """Integrate a vectorized ``f`` over ``[a, b]`` by global adaptive bisection.

    The panel with the largest error estimate is split until the summed
    estimate drops below ``max(atol, rtol * |integral|)``. Refinement that
    does not settle within ``max_intervals`` panels, or that runs into the
    floating-point resolution, is treated as a divergent integral.
    """
    if b == a:
        return 0.0
    val, err = _gk15(f, a, b)
    heap = [(-err, a, b, val)]
    total, total_err = val, err
    while total_err > max(atol, rtol * abs(total)):
        if len(heap) >= max_intervals:
            raise InfiniteFluxError(
                "adaptive refinement did not converge (estimate %.6g, error %.3g)" % (total, total_err))
        neg_err, lo, hi, v = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            raise InfiniteFluxError("adaptive refinement exhausted resolution near %.17g" % lo)
        v1, e1 = _gk15(f, lo, mid)
        v2, e2 = _gk15(f, mid, hi)
        if not (math.isfinite(v1) and math.isfinite(v2)):
            raise InfiniteFluxError("integrand is not finite on [%g, %g]" % (lo, hi))
        heapq.heappush(heap, (-e1, lo, mid, v1))
        heapq.heappush(heap, (-e2, mid, hi, v2))
        total += v1 + v2 - v
        total_err += e1 + e2 + neg_err
    return math.fsum(item[3] for item in heap)


def integrate_endpoint_singular(f, a, b, split=None, rtol=1e-12, f_from_end=None, **kwargs):
    """Integrate ``f`` over ``[a, b]`` where ``f`` may blow up at ``b``.

    The last panel ``[split, b]`` is mapped through ``s = b - t**2`` so an
    integrable ``(b - s)**(-gamma)`` singularity becomes ``t**(1 - 2*gamma)``.
    ``f_from_end(d)``, if given, evaluates ``f(b - d)`` without forming
    ``b - d``; it matters once ``t**2`` drops below the resolution of ``b``.
    """
    if split is None:
        split = a + 0.5 * (b - a)
    if f_from_end is None:
        def f_from_end(d):
            return f(b - d)

    def g(t):
        return 2.0 * t * f_from_end(t * t)

    head = adaptive_gk(f, a, split, rtol=rtol, **kwargs) if split > a else 0.0
    tail = adaptive_gk(g, 0.0, math.sqrt(b - split), rtol=rtol, **kwargs)
    return head + tail
