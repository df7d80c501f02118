"""Eigenvalue moments of the magnetic Dirichlet Laplacian on a disk with a radial field."""
from .bessel import bessel_j, bessel_zero, zero_field_oracle
from .bounds import (
    BoundBreakdown,
    Branch,
    berezin_rhs,
    gamma_fn,
    laptev_rhs,
    middle_term,
    semiclassical_constant,
    theorem_rhs,
)
from .discretize import OperatorKind, RadialOperatorSpec, SymTridiagonal, build_operator, discretize
from .eigensolve import count_below, eigenvalues_below, ground_state, kth_eigenvalue
from .errors import (
    DiscretizationError,
    DomainError,
    InfiniteFluxError,
    InvalidFieldError,
    TruncationError,
)
from .field import (
    FieldKind,
    FieldProfile,
    FluxClass,
    classify_flux,
    flux_in,
    flux_out,
    parse_field_spec,
    total_flux,
    validate,
)
from .spectral import (
    DiskSpectrum,
    ModeSpectrum,
    magnetic_spectrum,
    mode_spectrum,
    mode_window,
    operator_trace_1d,
    riesz_mean,
    schrodinger_trace,
)
from .verify import BoundReport, Verdict, check_classical, check_theorem, threshold_bound

__version__ = "0.1.0"
