import numpy as np
import pytest

from maglap.discretize import OperatorKind, build_operator, discretize, write_matrix_csv
from maglap.eigensolve import ground_state
from maglap.errors import InfiniteFluxError
from maglap.field import FieldProfile, flux_in

ZERO = FieldProfile.zero()
C2 = FieldProfile.constant(2.0)


def raw_stencil(spec, N):
    """Dense non-symmetric finite-volume matrix, built straight from the stencil."""
    h = spec.r0 / N
    r = (np.arange(1, N + 1) - 0.5) * h
    edges = np.arange(0, N + 1) * h  # r_{j-1/2}, j = 1..N+1
    if spec.weighted:
        a = 2 * spec.origin_index + 1
        face = edges ** a
        mass = np.diff(edges ** (a + 1)) / ((a + 1) * h)
        V = spec.potential(r) - (spec.origin_index / r) ** 2
    else:
        face, mass, V = edges, r, spec.potential(r)
    A = np.zeros((N, N))
    for j in range(N):
        left, right = face[j], face[j + 1]
        A[j, j] = (left + right) / (mass[j] * h * h) + V[j]
        if j > 0:
            A[j, j - 1] = -left / (mass[j] * h * h)
        if j < N - 1:
            A[j, j + 1] = -right / (mass[j] * h * h)
    # Dirichlet at r0 through the reflected ghost value u_{N+1} = -u_N
    A[N - 1, N - 1] += face[N] / (mass[N - 1] * h * h)
    return A


def test_potential_examples():
    assert build_operator("magnetic", C2, 1).potential(0.5) == pytest.approx(2.25, rel=1e-14)
    assert build_operator("l", C2).potential(0.5) == pytest.approx(2.25, rel=1e-14)
    assert build_operator("ltilde", C2).potential(0.5) == pytest.approx(0.25, rel=1e-14)


def test_stencil_entries():
    T = discretize(build_operator(OperatorKind.MAGNETIC, ZERO, 0), 4)
    assert T.diag[0] == pytest.approx(32.0, rel=1e-15)
    assert T.offdiag[0] == pytest.approx(-0.25 / (0.0625 * np.sqrt(0.125 * 0.375)), rel=1e-14)
    assert T.offdiag[0] == pytest.approx(-18.4752, abs=1e-4)
    assert np.all(T.offdiag < 0)


def test_infinite_flux_rejected():
    with pytest.raises(InfiniteFluxError):
        build_operator("magnetic", FieldProfile.boundary_blowup(1.0, 1.0), 0)


@pytest.mark.parametrize("N", [2, 3, 5, 8])
@pytest.mark.parametrize("kind,index,field", [
    ("magnetic", 0, ZERO),
    ("magnetic", -2, C2),
    ("magnetic", 3, FieldProfile.power_law(3.0, 1.0)),
    ("outer", 1, FieldProfile.boundary_blowup(1.0, 0.5)),
    ("inner", 0, FieldProfile.constant(1.0, r0=1.7)),
    ("l", 0, FieldProfile.constant(0.6, r0=1.2)),
])
def test_similar_to_raw_stencil(N, kind, index, field):
    spec = build_operator(kind, field, index)
    T = discretize(spec, N)
    sym = np.linalg.eigvalsh(T.to_dense())
    raw = np.sort(np.linalg.eigvals(raw_stencil(spec, N)).real)
    np.testing.assert_allclose(sym, raw, rtol=1e-10)
    # the weights realize the similarity explicitly
    W = np.diag(T.weight)
    np.testing.assert_allclose(W @ raw_stencil(spec, N) @ np.linalg.inv(W), T.to_dense(),
                               rtol=1e-12, atol=1e-12 * np.abs(T.diag).max())


def test_gauge_identity_at_integer_flux():
    rng = np.random.default_rng(7)
    r = rng.uniform(1e-3, 1.0, 100)
    for B0, m in ((2.0, 1), (4.0, 2)):
        f = FieldProfile.constant(B0)
        np.testing.assert_allclose(build_operator("magnetic", f, m).potential(r),
                                   build_operator("l", f).potential(r), rtol=1e-12)


@pytest.mark.parametrize("field", [C2, FieldProfile.constant(3.0), FieldProfile.power_law(3.0, 1.0)],
                         ids=lambda f: f.descriptor)
def test_ground_state_monotone_above_flux(field):
    F = field.total
    start = int(np.ceil(F))
    g = [ground_state(discretize(build_operator("magnetic", field, m), 512))
         for m in range(start, start + 5)]
    assert all(b >= a for a, b in zip(g, g[1:]))


def test_second_order_convergence():
    j01 = 2.404825557695773
    errs = [ground_state(discretize(build_operator("magnetic", ZERO, 0), N)) - j01 ** 2
            for N in (256, 512, 1024, 2048)]
    ratios = [a / b for a, b in zip(errs, errs[1:])]
    assert all(3.2 <= q <= 4.8 for q in ratios), ratios


@pytest.mark.parametrize("B0", [0.02, 0.5, 1.9])
def test_low_origin_index_is_second_order(B0):
    # outer n = 0 with flux F < 1: eigenfunctions ~ r**F at the origin
    spec = build_operator("l", FieldProfile.constant(B0))
    assert spec.weighted and spec.origin_index == pytest.approx(B0 / 2)
    g = [ground_state(discretize(spec, N)) for N in (256, 512, 1024, 2048)]
    ratios = [(b - a) / (c - b) for a, b, c in zip(g, g[1:], g[2:])]
    assert all(3.8 <= q <= 4.2 for q in ratios), ratios


def test_weighting_only_where_needed():
    assert not build_operator("l", FieldProfile.constant(2.0)).weighted
    assert not build_operator("l", FieldProfile.zero()).weighted
    assert not build_operator("outer", FieldProfile.constant(1.0), 1).weighted
    assert not build_operator("magnetic", FieldProfile.constant(1.0), 0).weighted


def test_blowup_matrix_finite():
    f = FieldProfile.boundary_blowup(1.0, 0.9)
    T = discretize(build_operator("outer", f, 0), 8192)
    assert np.all(np.isfinite(T.diag))
    assert flux_in(f, 1.0) == pytest.approx(f.total)


def test_matrix_dump(tmp_path):
    T = discretize(build_operator("magnetic", ZERO, 0), 4)
    path = tmp_path / "m.csv"
    with open(path, "w") as fh:
        write_matrix_csv(T, fh)
    lines = path.read_text().splitlines()
    assert lines[0] == "j,r,diag,offdiag"
    assert len(lines) == 5 and lines[-1].endswith(",")
    assert float(lines[1].split(",")[2]) == 32.0
