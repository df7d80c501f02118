"""Spectra and Riesz means assembled from angular modes.

The magnetic operator on the disk splits into the radial operators ``h_m``,
``m`` in Z; the two auxiliary Schrodinger operators with potentials
``Psi(r)**2 / r**2`` and ``Phi(r)**2 / r**2`` split into the ``n``-modes of
:mod:`maglap.discretize`. Each mode is solved on grids ``N`` and ``2N`` and
the eigenvalues are Richardson-extrapolated.

Riesz means ``sum_k (lam - lambda_k)_+ ** sigma`` can be evaluated on the
extrapolated values or on either raw grid (``grid="coarse"`` / ``"fine"``),
which is what the error proxy in :mod:`maglap.verify` uses.
"""
import math
import os
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .discretize import DEFAULT_GRID, OperatorKind, build_operator, discretize
from .eigensolve import count_below, eigenvalue_range
from .errors import DomainError, TruncationError
from .field import total_flux

GUARD_MODES = 5
GRIDS = ("extrapolated", "coarse", "fine")

_cache = {}
_cache_lock = threading.Lock()


def default_workers():
    try:
        return max(1, int(os.environ.get("MAGLAP_THREADS", "1")))
    except ValueError:
        return 1


def clear_cache():
    with _cache_lock:
        _cache.clear()
    discretize.cache_clear()


def _first_eigenvalues(spec, N, m):
    """The ``m`` lowest eigenvalues of ``spec`` on grid ``N``, memoized."""
    key = (spec, N)
    with _cache_lock:
        known = _cache.get(key)
    if known is not None and len(known) >= m:
        return known[:m]
    T = discretize(spec, N)
    start = 0 if known is None else len(known)
    extra = eigenvalue_range(T, start, m)
    vals = extra if known is None else np.concatenate((known, extra))
    with _cache_lock:
        current = _cache.get(key)
        if current is None or len(current) < len(vals):
            _cache[key] = vals
    return vals[:m]


def _count(spec, N, x):
    return count_below(discretize(spec, N), x)


def _kind(kind):
    if isinstance(kind, OperatorKind):
        return kind
    return OperatorKind(kind)


@dataclass(frozen=True)
class ModeSpectrum:
    kind: OperatorKind
    index: int
    threshold: float
    grid_n: int
    richardson: bool
    eigenvalues: tuple
    coarse: tuple
    fine: tuple

    def values(self, grid="extrapolated"):
        if grid == "extrapolated":
            return self.eigenvalues
        if grid == "coarse":
            return self.coarse
        if grid == "fine":
            return self.fine if self.richardson else self.coarse
        raise DomainError("unknown grid selector %r" % (grid,))


@dataclass(frozen=True)
class DiskSpectrum:
    threshold: float
    modes: tuple
    window: tuple
    certificate: str
    grid_n: int

    def values(self, grid="extrapolated"):
        parts = [np.asarray(m.values(grid), dtype=float) for m in self.modes]
        if not parts:
            return np.empty(0)
        return np.sort(np.concatenate(parts), kind="mergesort")

    @property
    def eigenvalues(self):
        return self.values("extrapolated")


def mode_spectrum(field, kind, index, lam, N=DEFAULT_GRID, richardson=True):
    """Eigenvalues below ``lam`` of one radial mode."""
    if lam < 0:
        raise DomainError("threshold must be non-negative")
    spec = build_operator(_kind(kind), field, index)
    lam = float(lam)
    if not richardson:
        coarse = _first_eigenvalues(spec, N, _count(spec, N, lam))
        vals = tuple(float(v) for v in coarse)
        return ModeSpectrum(spec.kind, spec.index, lam, N, False, vals, vals, ())
    # pair indices a little past lam so that extrapolated values near lam are not lost
    reach = lam + max(1.0, 0.05 * lam)
    m = max(_count(spec, N, reach), _count(spec, 2 * N, reach))
    coarse = _first_eigenvalues(spec, N, m)
    fine = _first_eigenvalues(spec, 2 * N, m)
    extrap = (4.0 * fine - coarse) / 3.0
    return ModeSpectrum(
        kind=spec.kind,
        index=spec.index,
        threshold=lam,
        grid_n=N,
        richardson=True,
        eigenvalues=tuple(float(v) for v in extrap if v < lam),
        coarse=tuple(float(v) for v in coarse if v < lam),
        fine=tuple(float(v) for v in fine if v < lam),
    )


def mode_window(field, lam, kind="magnetic"):
    """Modes that can carry eigenvalues below ``lam``, plus one guard mode per side.

    For ``m <= 0`` the magnetic potential is at least ``m**2 / r**2`` and for
    ``m >= F`` at least ``(m - F)**2 / r**2``, so the ground state of ``h_m``
    exceeds ``m**2 / r0**2`` resp. ``(m - F)**2 / r0**2``. The auxiliary
    ``n``-modes are bounded below by ``n**2 / r0**2``.
    """
    if lam < 0:
        raise DomainError("threshold must be non-negative, got %r" % (lam,))
    F, _ = total_flux(field)
    s = field.r0 * math.sqrt(lam)
    if kind == "magnetic":
        return math.ceil(-s) - 1, math.floor(F + s) + 1
    if kind in ("auxiliary", "outer", "inner"):
        n = math.floor(s) + 1
        return -n, n
    raise DomainError("unknown window kind %r" % (kind,))


def _certificate(kind, window, pad):
    if kind == "magnetic":
        rule = "m<=0: lambda1(h_m) >= m^2/r0^2; m>=F: lambda1(h_m) >= (m-F)^2/r0^2"
    else:
        rule = "lambda1(l_n) >= n^2/r0^2"
    return "%s; window [%d, %d] incl. +1 guard, +%d padding, %d-mode recheck" % (
        rule, window[0], window[1], pad, GUARD_MODES)


def _recheck(field, kind, indices, lam, N):
    # empirical check that modes just outside the window have nothing below lam
    for i in indices:
        spec = build_operator(kind, field, i)
        if _count(spec, N, lam):
            raise TruncationError("mode %s has eigenvalues below %g outside the window"
                                  % (spec.label, lam))


def _map(fn, items, workers):
    workers = default_workers() if workers is None else max(1, int(workers))
    if workers == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def magnetic_spectrum(field, lam, N=DEFAULT_GRID, richardson=True, pad=0, workers=None,
                      recheck=True):
    """Spectrum of the magnetic Dirichlet Laplacian below ``lam``.

    ``pad`` widens the mode window on both sides. The merged eigenvalues
    keep multiplicity across modes.
    """
    lo, hi = mode_window(field, lam, "magnetic")
    lo, hi = lo - pad, hi + pad
    ms = list(range(lo, hi + 1))
    modes = _map(lambda m: mode_spectrum(field, OperatorKind.MAGNETIC, m, lam, N, richardson),
                 ms, workers)
    if recheck:
        outside = list(range(lo - GUARD_MODES, lo)) + list(range(hi + 1, hi + 1 + GUARD_MODES))
        _recheck(field, OperatorKind.MAGNETIC, outside, lam, N)
    return DiskSpectrum(
        threshold=float(lam),
        modes=tuple(modes),
        window=(lo, hi),
        certificate=_certificate("magnetic", (lo, hi), pad),
        grid_n=N,
    )


def riesz_mean(spectrum, lam, sigma, grid="extrapolated"):
    """``sum_k (lam - lambda_k)_+ ** sigma``, summed in ascending eigenvalue order.

    ``spectrum`` is a :class:`DiskSpectrum`, a :class:`ModeSpectrum` or any
    iterable of eigenvalues. ``sigma = 0`` counts eigenvalues below ``lam``.
    """
    if sigma < 0:
        raise DomainError("Riesz exponent must be non-negative, got %r" % (sigma,))
    if isinstance(spectrum, (DiskSpectrum, ModeSpectrum)):
        vals = spectrum.values(grid)
    else:
        vals = spectrum
    vals = np.sort(np.asarray(list(vals), dtype=float), kind="mergesort")
    lam = float(lam)
    sigma = float(sigma)
    total = 0.0
    for v in vals:
        if v < lam:
            total += (lam - float(v)) ** sigma
    return total


def _aux_kind(which):
    if which == "outer":
        return OperatorKind.AUX_OUTER
    if which == "inner":
        return OperatorKind.AUX_INNER
    raise DomainError("which must be 'outer' or 'inner', got %r" % (which,))


def operator_trace_1d(field, kind, lam, sigma, N=DEFAULT_GRID, grid="extrapolated"):
    """Riesz mean of ``l(B)`` (``kind="l"``) or ``l~(B)`` (``kind="ltilde"``)."""
    if kind not in ("l", "ltilde"):
        raise DomainError("kind must be 'l' or 'ltilde', got %r" % (kind,))
    if lam < 0:
        raise DomainError("threshold must be non-negative")
    which = OperatorKind.AUX_OUTER if kind == "l" else OperatorKind.AUX_INNER
    return riesz_mean(mode_spectrum(field, which, 0, lam, N), lam, sigma, grid)


def auxiliary_modes(field, which, lam, N=DEFAULT_GRID, pad=0, workers=None, recheck=True):
    """Mode spectra ``n = 0, 1, ..., n_max`` of the outer or inner auxiliary operator."""
    kind = _aux_kind(which)
    _, nmax = mode_window(field, lam, "auxiliary")
    nmax += pad
    modes = _map(lambda n: mode_spectrum(field, kind, n, lam, N), list(range(nmax + 1)), workers)
    if recheck:
        _recheck(field, kind, range(nmax + 1, nmax + 1 + GUARD_MODES), lam, N)
    return modes


def schrodinger_trace(field, which, lam, sigma, N=DEFAULT_GRID, pad=0, grid="extrapolated",
                      workers=None):
    """Riesz mean of the 2-D auxiliary operator ``-Delta_D + Psi**2/r**2`` (outer)
    or ``-Delta_D + Phi**2/r**2`` (inner).

    Modes ``n`` and ``-n`` coincide, so the trace is twice the sum over
    ``n >= 1`` plus the ``n = 0`` mode, which is ``l(B)`` resp. ``l~(B)``.
    """
    if sigma < 0:
        raise DomainError("Riesz exponent must be non-negative")
    modes = auxiliary_modes(field, which, lam, N, pad, workers)
    side = 0.0
    for mode in modes[1:]:
        side += riesz_mean(mode, lam, sigma, grid)
    kind = "l" if which == "outer" else "ltilde"
    return 2.0 * side + operator_trace_1d(field, kind, lam, sigma, N, grid)


@dataclass(frozen=True)
class GroundState:
    value: float
    coarse: float
    fine: float
    mode: int

    def at(self, grid):
        return {"extrapolated": self.value, "coarse": self.coarse, "fine": self.fine}[grid]


def mode_ground_state(field, kind, index, N=DEFAULT_GRID):
    spec = build_operator(_kind(kind), field, index)
    coarse = float(_first_eigenvalues(spec, N, 1)[0])
    fine = float(_first_eigenvalues(spec, 2 * N, 1)[0])
    return GroundState((4.0 * fine - coarse) / 3.0, coarse, fine, spec.index)


def _lowest(states):
    best = states[0]
    for s in states[1:]:
        if s.value < best.value:
            best = s
    return best


def magnetic_ground_state(field, N=DEFAULT_GRID):
    """Lowest eigenvalue of the magnetic operator, minimized over the certified window."""
    F, _ = total_flux(field)
    probes = sorted({0, math.floor(F), math.ceil(F)})
    upper = min(mode_ground_state(field, OperatorKind.MAGNETIC, m, N).value for m in probes)
    lo, hi = mode_window(field, upper, "magnetic")
    return _lowest([mode_ground_state(field, OperatorKind.MAGNETIC, m, N) for m in range(lo, hi + 1)])


def auxiliary_ground_state(field, which, N=DEFAULT_GRID):
    """Spectral threshold of the 2-D auxiliary operator, minimized over its ``n``-modes."""
    kind = _aux_kind(which)
    upper = mode_ground_state(field, kind, 0, N).value
    _, nmax = mode_window(field, upper, "auxiliary")
    return _lowest([mode_ground_state(field, kind, n, N) for n in range(nmax + 1)])


def spectrum_csv(spectrum, grid="extrapolated"):
    """CSV text with columns ``mode,index,eigenvalue`` (index is 1-based within a mode)."""
    lines = ["mode,index,eigenvalue"]
    for mode in spectrum.modes:
        for k, v in enumerate(mode.values(grid), start=1):
            lines.append("%d,%d,%.17g" % (mode.index, k, v))
    return "\n".join(lines) + "\n"


def spectrum_json(spectrum):
    return {
        "lambda": spectrum.threshold,
        "window": list(spectrum.window),
        "grid": {"n": spectrum.grid_n, "richardson": all(m.richardson for m in spectrum.modes)},
        "certificate": spectrum.certificate,
        "count": int(sum(len(m.eigenvalues) for m in spectrum.modes)),
        "modes": [
            {"mode": m.index, "eigenvalues": list(m.eigenvalues)} for m in spectrum.modes
        ],
    }
