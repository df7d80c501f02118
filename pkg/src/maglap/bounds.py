"""Closed-form bounds and the assembled right-hand side of the moment inequality.

For ``sigma >= 3/2`` the Riesz mean of the magnetic operator is bounded by

    1/2 tr(lam - H_outer)_+^s + 1/2 tr(lam - H_inner)_+^s
      + 2 L_{s,1} r0^(2s+1) / (2s+1) * [F] * lam^(s+1/2)
      +/- 1/2 tr(lam - l(B))_+^s + 1/2 tr(lam - l~(B))_+^s

with ``+`` when the total flux ``F`` is not an integer and ``-`` when it is.
"""
import enum
import math
from dataclasses import asdict, dataclass

from .discretize import DEFAULT_GRID
from .errors import DomainError
from .field import INTEGER_TOL, FluxClass, integer_part, total_flux
from .spectral import _map, operator_trace_1d, schrodinger_trace

# Lanczos approximation, g = 7, n = 9
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma_fn(x):
    """Gamma function for ``x > 0``."""
    x = float(x)
    if not x > 0 or not math.isfinite(x):
        raise DomainError("gamma_fn needs a finite x > 0, got %r" % (x,))
    if x < 0.5:
        return gamma_fn(x + 1.0) / x
    z = x - 1.0
    acc = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        acc += _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * math.exp(-t) * acc


def semiclassical_constant(sigma, d):
    """``Gamma(sigma+1) / ((4 pi)^(d/2) Gamma(sigma + 1 + d/2))``."""
    if sigma < 0:
        raise DomainError("sigma must be non-negative")
    if d not in (1, 2):
        raise DomainError("dimension must be 1 or 2, got %r" % (d,))
    return gamma_fn(sigma + 1.0) / ((4.0 * math.pi) ** (d / 2.0) * gamma_fn(sigma + 1.0 + d / 2.0))


def berezin_rhs(sigma, lam, r0):
    return semiclassical_constant(sigma, 2) * math.pi * r0 * r0 * lam ** (sigma + 1.0)


def laptev_rhs(sigma, lam, r0):
    if not 0 <= sigma < 1:
        raise DomainError("the Laptev constant applies to 0 <= sigma < 1; use berezin_rhs")
    prefactor = 2.0 * (sigma / (sigma + 1.0)) ** sigma
    return prefactor * semiclassical_constant(sigma, 2) * math.pi * r0 * r0 * lam ** (sigma + 1.0)


def middle_term(sigma, lam, r0, F):
    """Bound on the modes ``1 <= m <= [F]``; zero when ``F < 1``."""
    if sigma < 0 or lam < 0:
        raise DomainError("sigma and lam must be non-negative")
    if not (F >= 0 and math.isfinite(F)):
        raise DomainError("flux must be finite and non-negative")
    coef = 2.0 * semiclassical_constant(sigma, 1) * r0 ** (2.0 * sigma + 1.0) / (2.0 * sigma + 1.0)
    return coef * integer_part(F) * lam ** (sigma + 0.5)


class Branch(enum.Enum):
    NON_INTEGER_FLUX = "NonIntegerFlux"
    INTEGER_FLUX = "IntegerFlux"
    BOTH = "Both"


def select_branch(F, flux_class):
    if flux_class is FluxClass.NEAR_BOUNDARY_AMBIGUOUS or F < INTEGER_TOL:
        return Branch.BOTH
    if flux_class is FluxClass.INTEGER:
        return Branch.INTEGER_FLUX
    return Branch.NON_INTEGER_FLUX


@dataclass(frozen=True)
class BoundBreakdown:
    """Itemized right-hand side.

    ``l_half`` carries the sign of the selected branch. ``rhs_noninteger``
    and ``rhs_integer`` are both always filled in; ``rhs_total`` is the one
    the branch selects, the non-integer display when the branch is ``Both``.
    """

    lam: float
    sigma: float
    r0: float
    flux: float
    flux_class: FluxClass
    branch: Branch
    outer_half: float
    inner_half: float
    middle: float
    l_half: float
    ltilde_half: float
    l_trace: float
    rhs_total: float
    rhs_noninteger: float
    rhs_integer: float
    berezin_rhs: float
    laptev_rhs: object = None

    def terms(self):
        return {
            "outer": self.outer_half,
            "inner": self.inner_half,
            "middle": self.middle,
            "l": self.l_half,
            "ltilde": self.ltilde_half,
        }

    def to_dict(self):
        out = asdict(self)
        out["flux_class"] = self.flux_class.value
        out["branch"] = self.branch.value
        return out


def theorem_rhs(field, sigma, lam, N=DEFAULT_GRID, grid="extrapolated", workers=None):
    """Evaluate every term of the bound for ``field`` at ``(sigma, lam)``."""
    if sigma < 1.5:
        raise DomainError("the bound needs sigma >= 3/2, got %r" % (sigma,))
    if lam < 0:
        raise DomainError("lam must be non-negative")
    F, flux_class = total_flux(field)
    branch = select_branch(F, flux_class)
    r0 = field.r0

    jobs = [
        lambda: schrodinger_trace(field, "outer", lam, sigma, N, grid=grid),
        lambda: schrodinger_trace(field, "inner", lam, sigma, N, grid=grid),
        lambda: operator_trace_1d(field, "l", lam, sigma, N, grid),
        lambda: operator_trace_1d(field, "ltilde", lam, sigma, N, grid),
    ]
    outer, inner, l_trace, lt_trace = _map(lambda job: job(), jobs, workers)

    middle_non = middle_term(sigma, lam, r0, F)
    middle_int = middle_term(sigma, lam, r0, float(round(F)))
    common = 0.5 * outer + 0.5 * inner
    rhs_non = common + middle_non + 0.5 * l_trace + 0.5 * lt_trace
    rhs_int = common + middle_int - 0.5 * l_trace + 0.5 * lt_trace
    if branch is Branch.INTEGER_FLUX:
        rhs, middle, l_half = rhs_int, middle_int, -0.5 * l_trace
    else:
        rhs, middle, l_half = rhs_non, middle_non, 0.5 * l_trace
    return BoundBreakdown(
        lam=float(lam),
        sigma=float(sigma),
        r0=r0,
        flux=F,
        flux_class=flux_class,
        branch=branch,
        outer_half=0.5 * outer,
        inner_half=0.5 * inner,
        middle=middle,
        l_half=l_half,
        ltilde_half=0.5 * lt_trace,
        l_trace=l_trace,
        rhs_total=rhs,
        rhs_noninteger=rhs_non,
        rhs_integer=rhs_int,
        berezin_rhs=berezin_rhs(sigma, lam, r0),
    )
