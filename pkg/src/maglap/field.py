"""Radially symmetric magnetic field profiles on the disk of radius ``r0``.

A profile is immutable. Its total normalized flux ``F = int_0^r0 s B(s) ds``
is computed once at construction (``inf`` when the integral diverges), and
the inner/outer flux functions

    Phi(r) = int_0^r s B(s) ds,      Psi(r) = int_r^r0 s B(s) ds = F - Phi(r)

are available in closed form for the analytic families and by exact
integration of the piecewise-linear interpolant for tabulated data.
"""
import csv
import enum
import math
from dataclasses import dataclass, field as dc_field
from pathlib import Path

import numpy as np

from .errors import DomainError, InfiniteFluxError, InvalidFieldError
from .quadrature import adaptive_gk, integrate_endpoint_singular

INTEGER_TOL = 1e-9
AMBIGUOUS_TOL = 1e-6
VALIDATION_SAMPLES = 2 ** 14


class FieldKind(enum.Enum):
    CONSTANT = "constant"
    POWER_LAW = "power"
    BOUNDARY_BLOWUP = "blowup"
    TABULATED = "table"


class FluxClass(enum.Enum):
    INTEGER = "Integer"
    NON_INTEGER = "NonInteger"
    NEAR_BOUNDARY_AMBIGUOUS = "NearBoundaryAmbiguous"


@dataclass(frozen=True)
class FieldProfile:
    """Radial field ``B(r) >= 0`` on ``(0, r0)``.

    Use the classmethod constructors rather than the raw initializer.
    ``params`` holds ``(B0,)``, ``(c, p)``, ``(c, gamma)`` or, for tabulated
    data, ``(r_nodes, B_nodes)`` as tuples of floats.
    """

    kind: FieldKind
    params: tuple
    r0: float = 1.0
    total: float = dc_field(init=False, compare=False, repr=False)
    _knots: tuple = dc_field(init=False, compare=False, repr=False, default=None)

    def __post_init__(self):
        if not (self.r0 > 0 and math.isfinite(self.r0)):
            raise DomainError("disk radius must be positive, got %r" % (self.r0,))
        if self.kind is FieldKind.POWER_LAW and not self.params[1] > -1:
            raise DomainError("power-law exponent must exceed -1")
        if self.kind is FieldKind.BOUNDARY_BLOWUP and not 0 < self.params[1] < 2:
            raise DomainError("blow-up exponent must lie in (0, 2)")
        if self.kind is FieldKind.TABULATED:
            object.__setattr__(self, "_knots", _table_knots(self.params, self.r0))
        object.__setattr__(self, "total", _total_flux(self))

    # constructors --------------------------------------------------------

    @classmethod
    def constant(cls, B0, r0=1.0):
        return cls(FieldKind.CONSTANT, (float(B0),), float(r0))

    @classmethod
    def zero(cls, r0=1.0):
        return cls.constant(0.0, r0)

    @classmethod
    def power_law(cls, c, p, r0=1.0):
        """``B(r) = c * r**p`` with ``p > -1``."""
        return cls(FieldKind.POWER_LAW, (float(c), float(p)), float(r0))

    @classmethod
    def boundary_blowup(cls, c, gamma, r0=1.0):
        """``B(r) = c * (r0 - r)**(-gamma)``; the flux is finite only for ``gamma < 1``."""
        return cls(FieldKind.BOUNDARY_BLOWUP, (float(c), float(gamma)), float(r0))

    @classmethod
    def tabulated(cls, r, B, r0=1.0):
        r = tuple(float(x) for x in r)
        B = tuple(float(x) for x in B)
        if len(r) != len(B) or len(r) < 1:
            raise DomainError("table needs matching, non-empty r and B columns")
        if any(b <= a for a, b in zip(r, r[1:])):
            raise DomainError("table radii must be strictly increasing")
        if r[0] < 0 or r[-1] > r0:
            raise DomainError("table radii must lie in [0, r0]")
        return cls(FieldKind.TABULATED, (r, B), float(r0))

    # conveniences --------------------------------------------------------

    @property
    def blows_up(self):
        return self.kind is FieldKind.BOUNDARY_BLOWUP

    @property
    def descriptor(self):
        if self.kind is FieldKind.TABULATED:
            return "table[%d]" % len(self.params[0])
        return "%s:%s" % (self.kind.value, ",".join(repr(float(p)).removesuffix(".0") for p in self.params))

    def B(self, r):
        return eval_B(self, r)

    def phi(self, r):
        return flux_in(self, r)

    def psi(self, r):
        return flux_out(self, r)


def _table_knots(params, r0):
    r, B = (np.asarray(p, dtype=float) for p in params)
    # constant extension outside the sampled range
    if r[0] > 0:
        r = np.concatenate(([0.0], r))
        B = np.concatenate(([B[0]], B))
    if r[-1] < r0:
        r = np.concatenate((r, [r0]))
        B = np.concatenate((B, [B[-1]]))
    if len(r) == 1:
        r = np.array([0.0, r0])
        B = np.array([B[0], B[0]])
    slope = np.diff(B) / np.diff(r)
    seg = _segment_flux(r[:-1], B[:-1], slope, r[1:])
    cum = np.concatenate(([0.0], np.cumsum(seg)))
    return r, B, slope, cum


def _segment_flux(x0, b0, slope, t):
    # int_{x0}^{t} s (b0 + slope (s - x0)) ds
    return (b0 - slope * x0) * (t * t - x0 * x0) / 2.0 + slope * (t ** 3 - x0 ** 3) / 3.0


def _blowup_unit_flux(x, gamma):
    """``int_0^x u (1-u)**(-gamma) du`` for ``0 <= x <= 1``."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = x <= 0.5
    if np.any(small):
        xs = x[small]
        term = xs * xs  # (gamma)_k / k! * x**(k+2), k = 0
        acc = term / 2.0
        for k in range(1, 200):
            term = term * xs * (gamma + k - 1) / k
            inc = term / (k + 2)
            acc = acc + inc
            if np.all(np.abs(inc) <= 1e-18 * np.abs(acc)):
                break
        out[small] = acc
    big = ~small
    if np.any(big):
        t = 1.0 - x[big]
        with np.errstate(divide="ignore"):
            if gamma == 1.0:
                out[big] = -np.log(t) - x[big]
            else:
                out[big] = ((1.0 - t ** (1.0 - gamma)) / (1.0 - gamma)
                            - (1.0 - t ** (2.0 - gamma)) / (2.0 - gamma))
    return out


def _total_flux(profile):
    kind, p, r0 = profile.kind, profile.params, profile.r0
    if kind is FieldKind.CONSTANT:
        return p[0] * r0 * r0 / 2.0
    if kind is FieldKind.POWER_LAW:
        c, q = p
        return c * r0 ** (q + 2.0) / (q + 2.0)
    if kind is FieldKind.BOUNDARY_BLOWUP:
        c, gamma = p
        if gamma >= 1.0:
            return math.inf
        return c * r0 ** (2.0 - gamma) / ((1.0 - gamma) * (2.0 - gamma))
    return float(profile._knots[3][-1])


def _check_radius(profile, r, closed):
    r = np.asarray(r, dtype=float)
    if closed:
        bad = (r < 0) | (r > profile.r0) | ~np.isfinite(r)
    else:
        bad = (r <= 0) | (r >= profile.r0) | ~np.isfinite(r)
    if np.any(bad):
        interval = "[0, r0]" if closed else "(0, r0)"
        raise DomainError("radius outside %s with r0=%g: %r" % (interval, profile.r0, r[bad].ravel()[:3]))
    return r


def _scalarize(value, like):
    return float(value) if np.ndim(like) == 0 else value


def eval_B(profile, r):
    """Field strength ``B(r)`` for ``0 < r < r0`` (scalar or array)."""
    r = _check_radius(profile, r, closed=False)
    kind, p = profile.kind, profile.params
    if kind is FieldKind.CONSTANT:
        out = np.full_like(r, p[0])
    elif kind is FieldKind.POWER_LAW:
        out = p[0] * r ** p[1]
    elif kind is FieldKind.BOUNDARY_BLOWUP:
        out = p[0] * (profile.r0 - r) ** (-p[1])
    else:
        knots, values = profile._knots[0], profile._knots[1]
        out = np.interp(r, knots, values)
    return _scalarize(out, r)


def _phi(profile, r):
    kind, p, r0 = profile.kind, profile.params, profile.r0
    if kind is FieldKind.CONSTANT:
        return p[0] * r * r / 2.0
    if kind is FieldKind.POWER_LAW:
        c, q = p
        return c * r ** (q + 2.0) / (q + 2.0)
    if kind is FieldKind.BOUNDARY_BLOWUP:
        c, gamma = p
        return c * r0 ** (2.0 - gamma) * _blowup_unit_flux(r / r0, gamma)
    x, b, slope, cum = profile._knots
    i = np.clip(np.searchsorted(x, r, side="right") - 1, 0, len(x) - 2)
    return cum[i] + _segment_flux(x[i], b[i], slope[i], r)


def flux_in(profile, r, method="auto"):
    """Inner flux ``Phi(r) = int_0^r s B(s) ds`` for ``0 <= r <= r0``.

    ``method="quad"`` forces the generic adaptive quadrature path.
    """
    r = _check_radius(profile, r, closed=True)
    if method == "quad":
        out = np.vectorize(lambda t: quad_flux(profile, t), otypes=[float])(r)
        return _scalarize(out, r)
    if not math.isfinite(profile.total) and np.any(r >= profile.r0):
        raise InfiniteFluxError("flux diverges at the boundary for %s" % profile.descriptor)
    return _scalarize(_phi(profile, r), r)


def flux_out(profile, r):
    """Outer flux ``Psi(r) = F - Phi(r)``, clipped at zero against round-off."""
    r = _check_radius(profile, r, closed=True)
    F = total_flux(profile)[0]
    out = np.maximum(F - _phi(profile, r), 0.0)
    out = np.where(r >= profile.r0, 0.0, out)
    return _scalarize(out, r)


def quad_flux(profile, r, rtol=1e-12):
    """``Phi(r)`` by adaptive Gauss-Kronrod quadrature of ``s B(s)``.

    Blow-up profiles integrated up to the boundary get the ``s = r0 - t**2``
    treatment on the last panel; a divergent flux surfaces as
    :class:`InfiniteFluxError` from the non-converging refinement.
    """
    r = float(r)
    if r == 0.0:
        return 0.0
    r0 = profile.r0

    def integrand(s):
        s = np.asarray(s, dtype=float)
        out = np.zeros_like(s)
        inside = (s > 0) & (s < r0)
        out[inside] = s[inside] * np.asarray(eval_B(profile, s[inside]))
        return out

    if profile.kind is FieldKind.BOUNDARY_BLOWUP and r >= r0:
        c, gamma = profile.params

        def from_boundary(d):
            d = np.asarray(d, dtype=float)
            out = np.zeros_like(d)
            pos = d > 0
            with np.errstate(over="ignore"):
                out[pos] = (r0 - d[pos]) * c * d[pos] ** (-gamma)
            return out

        return integrate_endpoint_singular(
            integrand, 0.0, r0, split=0.5 * r0, rtol=rtol, f_from_end=from_boundary)
    if profile.kind is FieldKind.TABULATED:
        knots = profile._knots[0]
        cuts = [0.0] + [float(k) for k in knots if 0.0 < k < r] + [r]
        return math.fsum(adaptive_gk(integrand, a, b, rtol=rtol) for a, b in zip(cuts, cuts[1:]))
    return adaptive_gk(integrand, 0.0, r, rtol=rtol)


def integer_part(F):
    """``[F]`` with values within ``INTEGER_TOL`` of an integer snapped to it."""
    n = round(F)
    if abs(F - n) < INTEGER_TOL:
        return int(n)
    return int(math.floor(F))


def classify_flux(F):
    dist = abs(F - round(F))
    if dist < INTEGER_TOL and (round(F) >= 1 or F < INTEGER_TOL):
        return FluxClass.INTEGER
    if INTEGER_TOL <= dist < AMBIGUOUS_TOL:
        return FluxClass.NEAR_BOUNDARY_AMBIGUOUS
    return FluxClass.NON_INTEGER


def total_flux(profile):
    """Return ``(F, FluxClass)``; raises :class:`InfiniteFluxError` if ``F`` diverges."""
    F = profile.total
    if not math.isfinite(F):
        raise InfiniteFluxError(
            "total flux int_0^r0 s B(s) ds diverges for %s" % profile.descriptor)
    return F, classify_flux(F)


@dataclass(frozen=True)
class FieldValidation:
    nonnegative: bool
    finite_flux: bool
    total_flux: float
    inf_B: float
    blows_up: bool
    grow_regime: bool


def _inf_B(profile, sampled_min):
    kind, p, r0 = profile.kind, profile.params, profile.r0
    if kind is FieldKind.CONSTANT:
        return p[0]
    if kind is FieldKind.POWER_LAW:
        c, q = p
        return 0.0 if q > 0 else c * r0 ** q
    if kind is FieldKind.BOUNDARY_BLOWUP:
        c = p[0]
        return c * r0 ** (-p[1]) if c >= 0 else -math.inf
    return min(sampled_min, float(np.min(profile._knots[1])))


def validate(profile):
    """Check ``B >= 0`` and finite flux, and estimate ``K = inf B``.

    Raises :class:`InvalidFieldError` on negative values and
    :class:`InfiniteFluxError` when the total flux diverges.
    """
    r0 = profile.r0
    grid = (np.arange(VALIDATION_SAMPLES) + 0.5) * (r0 / VALIDATION_SAMPLES)
    samples = np.asarray(eval_B(profile, grid))
    sampled_min = float(np.min(samples))
    K = _inf_B(profile, sampled_min)
    if sampled_min < 0 or K < 0 or (profile.kind is not FieldKind.TABULATED and profile.params[0] < 0):
        raise InvalidFieldError("field %s takes negative values" % profile.descriptor)
    F, _ = total_flux(profile)
    return FieldValidation(
        nonnegative=True,
        finite_flux=True,
        total_flux=F,
        inf_B=K,
        blows_up=profile.blows_up,
        grow_regime=profile.blows_up and K > 0,
    )


def load_table(path):
    """Read a two-column ``r,B`` CSV (header required)."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or {"r", "B"} - set(f.strip() for f in reader.fieldnames):
            raise DomainError("%s: expected CSV columns 'r,B'" % path)
        rows = [{k.strip(): v for k, v in row.items()} for row in reader]
    return [float(row["r"]) for row in rows], [float(row["B"]) for row in rows]


def parse_field_spec(text, r0=1.0):
    """Parse ``constant:B0``, ``power:c,p``, ``blowup:c,gamma`` or ``table:path.csv``."""
    kind, sep, rest = text.strip().partition(":")
    if not sep:
        raise DomainError("malformed field spec %r" % text)
    kind = kind.strip().lower()
    if kind == "table":
        r, B = load_table(Path(rest.strip()))
        return FieldProfile.tabulated(r, B, r0)
    try:
        values = [float(v) for v in rest.split(",")]
    except ValueError:
        raise DomainError("malformed field parameters in %r" % text) from None
    arity = {"constant": 1, "power": 2, "blowup": 2}
    if kind not in arity or len(values) != arity[kind]:
        raise DomainError("malformed field spec %r" % text)
    if kind == "constant":
        return FieldProfile.constant(values[0], r0)
    if kind == "power":
        return FieldProfile.power_law(values[0], values[1], r0)
    return FieldProfile.boundary_blowup(values[0], values[1], r0)
