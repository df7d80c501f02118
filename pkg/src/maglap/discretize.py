"""Radial operators of the partial-wave decomposition and their discretization.

Every operator here has the form

    -u'' - u'/r + V(r) u    on (0, r0),  Dirichlet at r0,

in ``L^2((0, r0), r dr)``, and differs only in the potential:

    magnetic mode m        V = ((m - Phi(r)) / r)**2
    outer auxiliary n      V = (n**2 + Psi(r)**2) / r**2     (n = 0 is l(B))
    inner auxiliary n      V = (n**2 + Phi(r)**2) / r**2     (n = 0 is l~(B))

Near the origin ``r**2 V -> nu**2`` and eigenfunctions behave like ``r**nu``.
The plain stencil is second order when ``nu`` is an integer or at least 1;
for ``0 < nu < 1`` (the outer ``n = 0`` mode when the total flux is below
one) its error decays only like ``h**(2 nu)``. Those modes are discretized
for ``w = r**(-nu) u`` instead, which is smooth:

    -r**(-2nu-1) (r**(2nu+1) w')' + (V - nu**2 / r**2) w.
"""
import enum
import functools
from dataclasses import dataclass

import numpy as np

from .errors import DiscretizationError, DomainError
from .field import FieldProfile, flux_in, flux_out, total_flux

DEFAULT_GRID = 4096
MIN_GRID = 2


class OperatorKind(enum.Enum):
    MAGNETIC = "magnetic"
    AUX_OUTER = "outer"
    AUX_INNER = "inner"


_ALIASES = {
    "magnetic": (OperatorKind.MAGNETIC, None),
    "outer": (OperatorKind.AUX_OUTER, None),
    "inner": (OperatorKind.AUX_INNER, None),
    "l": (OperatorKind.AUX_OUTER, 0),
    "ltilde": (OperatorKind.AUX_INNER, 0),
}


@dataclass(frozen=True)
class RadialOperatorSpec:
    kind: OperatorKind
    index: int
    field: FieldProfile

    @property
    def r0(self):
        return self.field.r0

    @property
    def label(self):
        if self.kind is OperatorKind.MAGNETIC:
            return "h_%d" % self.index
        if self.index == 0:
            return "l" if self.kind is OperatorKind.AUX_OUTER else "ltilde"
        return ("l_%d" if self.kind is OperatorKind.AUX_OUTER else "ltilde_%d") % self.index

    def potential(self, r):
        r = np.asarray(r, dtype=float)
        n = float(self.index)
        if self.kind is OperatorKind.MAGNETIC:
            out = ((n - flux_in(self.field, r)) / r) ** 2
        elif self.kind is OperatorKind.AUX_OUTER:
            out = (n * n + flux_out(self.field, r) ** 2) / (r * r)
        else:
            out = (n * n + flux_in(self.field, r) ** 2) / (r * r)
        return float(out) if out.ndim == 0 else out

    @property
    def origin_index(self):
        """``nu = lim_{r -> 0} r * sqrt(V(r))``."""
        n = float(self.index)
        if self.kind is OperatorKind.AUX_OUTER:
            return float(np.hypot(n, total_flux(self.field)[0]))
        return abs(n)

    def residual_potential(self, r):
        """``V(r) - nu**2 / r**2``, formed without cancellation."""
        r = np.asarray(r, dtype=float)
        if self.kind is not OperatorKind.AUX_OUTER:
            return self.potential(r) - (self.origin_index / r) ** 2
        # Psi**2 - F**2 = -Phi (Psi + F)
        F = total_flux(self.field)[0]
        out = -flux_in(self.field, r) * (flux_out(self.field, r) + F) / (r * r)
        return float(out) if np.ndim(out) == 0 else out

    @property
    def weighted(self):
        """Whether :func:`discretize` factors ``r**nu`` out of the eigenfunctions."""
        return 0.0 < self.origin_index < 1.0


def build_operator(kind, field, index=0):
    """Radial operator of the given kind for ``field``.

    ``kind`` is an :class:`OperatorKind` or one of ``"magnetic"``,
    ``"outer"``, ``"inner"``, ``"l"`` and ``"ltilde"`` (the last two fix
    ``index = 0``).
    """
    if not isinstance(kind, OperatorKind):
        try:
            kind, fixed = _ALIASES[kind]
        except KeyError:
            raise DomainError("unknown operator kind %r" % (kind,)) from None
        if fixed is not None:
            index = fixed
    total_flux(field)  # raises on infinite flux
    return RadialOperatorSpec(kind, int(index), field)


@dataclass(frozen=True, eq=False)
class SymTridiagonal:
    """Symmetric tridiagonal matrix on the offset grid ``r_j = (j - 1/2) h``.

    ``weight`` holds the square roots of the cell masses (``sqrt(r_j)`` for
    the plain stencil): if ``v`` is an eigenvector of this matrix,
    ``v / weight`` is the grid function of the discretized operator.
    """

    diag: np.ndarray
    offdiag: np.ndarray
    weight: np.ndarray
    r: np.ndarray
    h: float

    @property
    def n(self):
        return self.diag.shape[0]

    def to_dense(self):
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)


def _readonly(a):
    a.setflags(write=False)
    return a


@functools.lru_cache(maxsize=256)
def discretize(spec, N=DEFAULT_GRID):
    """Finite-volume discretization of ``spec`` with ``N`` cells.

    Row ``j`` reads

        [r_{j-1/2} (u_j - u_{j-1}) - r_{j+1/2} (u_{j+1} - u_j)] / (r_j h**2) + V(r_j) u_j

    with zero flux through ``r_{1/2} = 0`` and the Dirichlet wall placed
    exactly at ``r0`` through the ghost value ``u_{N+1} = -u_N``. Conjugating
    by ``diag(sqrt(r_j))`` makes the matrix symmetric.

    For specs with ``spec.weighted`` the same stencil is applied to ``w``
    with face weights ``r**(2nu+1)``, exact cell masses of that weight and the
    residual potential ``V - nu**2 / r**2``.
    """
    N = int(N)
    if N < MIN_GRID:
        raise DomainError("grid size must be at least %d, got %d" % (MIN_GRID, N))
    h = spec.r0 / N
    j = np.arange(1, N + 1, dtype=float)
    r = (j - 0.5) * h
    r_minus = (j - 1.0) * h
    r_plus = j * h
    if spec.weighted:
        alpha = 2.0 * spec.origin_index + 1.0
        V = np.asarray(spec.residual_potential(r), dtype=float)
        face_lo, face_hi = r_minus ** alpha, r_plus ** alpha
        mass = (r_plus ** (alpha + 1.0) - r_minus ** (alpha + 1.0)) / ((alpha + 1.0) * h)
    else:
        V = np.asarray(spec.potential(r), dtype=float)
        face_lo, face_hi, mass = r_minus, r_plus, r
    bad = np.flatnonzero(~np.isfinite(V))
    if bad.size:
        k = int(bad[0]) + 1
        raise DiscretizationError("potential of %s is not finite at grid point j=%d (r=%.17g)"
                                  % (spec.label, k, r[k - 1]), index=k)
    outer = face_hi.copy()
    outer[-1] *= 2.0  # half-cell flux to the wall
    diag = (face_lo + outer) / (mass * h * h) + V
    offdiag = -face_hi[:-1] / (h * h * np.sqrt(mass[:-1] * mass[1:]))
    return SymTridiagonal(
        diag=_readonly(diag),
        offdiag=_readonly(offdiag),
        weight=_readonly(np.sqrt(mass)),
        r=_readonly(r),
        h=h,
    )


def write_matrix_csv(T, fh):
    """Dump ``j, r, diag, offdiag`` rows; the last row has an empty offdiag."""
    fh.write("j,r,diag,offdiag\n")
    for k in range(T.n):
        off = "%.17g" % T.offdiag[k] if k < T.n - 1 else ""
        fh.write("%d,%.17g,%.17g,%s\n" % (k + 1, T.r[k], T.diag[k], off))
