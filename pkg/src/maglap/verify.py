"""End-to-end checks of the moment inequality and of the classical bounds."""
import enum
from dataclasses import dataclass

from .bessel import bessel_zero
from .bounds import BoundBreakdown, berezin_rhs, laptev_rhs, theorem_rhs
from .discretize import DEFAULT_GRID, OperatorKind
from .errors import DomainError
from .field import total_flux, validate
from .spectral import (
    _map,
    auxiliary_ground_state,
    magnetic_ground_state,
    magnetic_spectrum,
    mode_ground_state,
    riesz_mean,
)

LAMBDA1_TOL = 1e-8


class Verdict(enum.Enum):
    HOLDS = "Holds"
    HOLDS_WITHIN_ERROR = "HoldsWithinError"
    VIOLATED = "Violated"


def classify(margin, error):
    if margin > error:
        return Verdict.HOLDS
    if margin < -error:
        return Verdict.VIOLATED
    return Verdict.HOLDS_WITHIN_ERROR


@dataclass(frozen=True)
class BoundReport:
    field: str
    sigma: float
    lam: float
    grid_n: int
    lhs: float
    breakdown: BoundBreakdown
    margin: float
    numerical_error_estimate: float
    verdict: Verdict

    def to_dict(self):
        return {
            "field": self.field,
            "sigma": self.sigma,
            "lambda": self.lam,
            "grid_n": self.grid_n,
            "lhs": self.lhs,
            "margin": self.margin,
            "margin_integer_display": self.breakdown.rhs_integer - self.lhs,
            "margin_noninteger_display": self.breakdown.rhs_noninteger - self.lhs,
            "numerical_error_estimate": self.numerical_error_estimate,
            "verdict": self.verdict.value,
            "breakdown": self.breakdown.to_dict(),
        }


def _error_proxy(field, sigma, lam, N, spectrum):
    # |value(N) - value(2N)| on the raw grids, summed over the lhs and every trace term
    lhs_c = riesz_mean(spectrum, lam, sigma, grid="coarse")
    lhs_f = riesz_mean(spectrum, lam, sigma, grid="fine")
    coarse = theorem_rhs(field, sigma, lam, N, grid="coarse", workers=1)
    fine = theorem_rhs(field, sigma, lam, N, grid="fine", workers=1)
    err = abs(lhs_c - lhs_f)
    for name in ("outer", "inner", "l", "ltilde"):
        err += abs(coarse.terms()[name] - fine.terms()[name])
    return err


def bound_report(field, sigma, lam, N=DEFAULT_GRID):
    spectrum = magnetic_spectrum(field, lam, N, workers=1)
    lhs = riesz_mean(spectrum, lam, sigma)
    breakdown = theorem_rhs(field, sigma, lam, N, workers=1)
    margin = breakdown.rhs_total - lhs
    error = _error_proxy(field, sigma, lam, N, spectrum)
    return BoundReport(
        field=field.descriptor,
        sigma=float(sigma),
        lam=float(lam),
        grid_n=N,
        lhs=lhs,
        breakdown=breakdown,
        margin=margin,
        numerical_error_estimate=error,
        verdict=classify(margin, error),
    )


def check_theorem(field, sigma, lams, N=DEFAULT_GRID, workers=None):
    """One :class:`BoundReport` per threshold in ``lams``, in input order.

    A point whose verdict is inconclusive is recomputed once on the doubled grid.
    """
    if sigma < 1.5:
        raise DomainError("the bound needs sigma >= 3/2, got %r" % (sigma,))
    validate(field)

    def one(lam):
        report = bound_report(field, sigma, lam, N)
        if report.verdict is Verdict.HOLDS_WITHIN_ERROR:
            report = bound_report(field, sigma, lam, 2 * N)
        return report

    return _map(one, list(lams), workers)


@dataclass(frozen=True)
class ClassicalReport:
    field: str
    sigma: float
    lam: float
    lhs: float
    berezin: float
    berezin_asserted: bool
    berezin_holds: bool
    laptev_reference: object
    lambda1: float
    lambda1_zero_field: float
    inf_B: float
    diamagnetic_holds: bool
    form_holds: bool

    @property
    def holds(self):
        ok = self.diamagnetic_holds and self.form_holds
        return ok and (self.berezin_holds or not self.berezin_asserted)

    def to_dict(self):
        return {
            "field": self.field,
            "sigma": self.sigma,
            "lambda": self.lam,
            "lhs": self.lhs,
            "berezin": self.berezin,
            "berezin_asserted": self.berezin_asserted,
            "berezin_holds": self.berezin_holds,
            "laptev_reference": self.laptev_reference,
            "lambda1": self.lambda1,
            "lambda1_zero_field": self.lambda1_zero_field,
            "inf_B": self.inf_B,
            "diamagnetic_holds": self.diamagnetic_holds,
            "form_holds": self.form_holds,
        }


def check_classical(field, sigma, lam, N=DEFAULT_GRID):
    """Berezin bound (asserted for ``sigma >= 3/2``), diamagnetic and form lower bounds on ``lambda_1``.

    Only the first eigenvalue is compared with the zero-field one; the
    ordering fails for higher eigenvalues in general.
    """
    info = validate(field)
    lhs = riesz_mean(magnetic_spectrum(field, lam, N, workers=1), lam, sigma)
    berezin = berezin_rhs(sigma, lam, field.r0)
    lambda1 = magnetic_ground_state(field, N).value
    lambda1_zero = (bessel_zero(0, 1) / field.r0) ** 2
    return ClassicalReport(
        field=field.descriptor,
        sigma=float(sigma),
        lam=float(lam),
        lhs=lhs,
        berezin=berezin,
        berezin_asserted=sigma >= 1.5,
        berezin_holds=lhs <= berezin,
        laptev_reference=laptev_rhs(sigma, lam, field.r0) if sigma < 1 else None,
        lambda1=lambda1,
        lambda1_zero_field=lambda1_zero,
        inf_B=info.inf_B,
        diamagnetic_holds=lambda1 >= lambda1_zero - LAMBDA1_TOL,
        form_holds=lambda1 >= info.inf_B - LAMBDA1_TOL,
    )


@dataclass(frozen=True)
class ThresholdReport:
    field: str
    lambda1: float
    outer: float
    inner: float
    l: float
    ltilde: float
    threshold: float
    error: float
    margin: float
    holds: bool

    def to_dict(self):
        return dict(self.__dict__)


def threshold_bound(field, N=DEFAULT_GRID):
    """Lower bound on ``lambda_1`` by the four comparison thresholds, for flux below one."""
    F, _ = total_flux(field)
    if F >= 1:
        raise DomainError("threshold bound needs total flux < 1, got %.17g" % F)
    states = {
        "lambda1": magnetic_ground_state(field, N),
        "outer": auxiliary_ground_state(field, "outer", N),
        "inner": auxiliary_ground_state(field, "inner", N),
        "l": mode_ground_state(field, OperatorKind.AUX_OUTER, 0, N),
        "ltilde": mode_ground_state(field, OperatorKind.AUX_INNER, 0, N),
    }
    error = sum(abs(s.coarse - s.fine) for s in states.values())
    t_star = min(states[k].value for k in ("outer", "inner", "l", "ltilde"))
    margin = states["lambda1"].value - t_star
    return ThresholdReport(
        field=field.descriptor,
        lambda1=states["lambda1"].value,
        outer=states["outer"].value,
        inner=states["inner"].value,
        l=states["l"].value,
        ltilde=states["ltilde"].value,
        threshold=t_star,
        error=error,
        margin=margin,
        holds=margin >= -error,
    )
