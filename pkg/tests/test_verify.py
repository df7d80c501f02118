import pytest

from maglap.bounds import Branch
from maglap.errors import DomainError, InfiniteFluxError
from maglap.field import FieldProfile
from maglap.verify import Verdict, check_classical, check_theorem, classify, threshold_bound


def test_classify():
    assert classify(1.0, 0.5) is Verdict.HOLDS
    assert classify(0.5, 0.5) is Verdict.HOLDS_WITHIN_ERROR
    assert classify(0.0, 0.0) is Verdict.HOLDS_WITHIN_ERROR
    assert classify(-1.0, 0.5) is Verdict.VIOLATED


def test_constant_field_holds():
    reports = check_theorem(FieldProfile.constant(1.0), 1.5, [10, 20, 50])
    assert [r.lam for r in reports] == [10, 20, 50]
    for r in reports:
        assert r.verdict is Verdict.HOLDS
        assert r.margin == pytest.approx(r.breakdown.rhs_total - r.lhs, rel=1e-15)


def test_integer_flux_holds():
    (r,) = check_theorem(FieldProfile.constant(2.0), 2.0, [20])
    assert r.breakdown.branch is Branch.INTEGER_FLUX and r.breakdown.l_half < 0
    assert r.verdict is Verdict.HOLDS


def test_zero_field_report():
    (r,) = check_theorem(FieldProfile.zero(), 1.5, [30])
    assert r.lhs == pytest.approx(252.9, abs=0.05)
    assert r.breakdown.rhs_total == pytest.approx(372.1, abs=0.1)
    assert r.verdict is Verdict.HOLDS


def test_inconclusive_point_is_refined():
    # below the first eigenvalue both sides vanish identically
    (r,) = check_theorem(FieldProfile.constant(0.5), 1.5, [5], N=512)
    assert r.lhs == 0.0 and r.margin == 0.0
    assert r.verdict is Verdict.HOLDS_WITHIN_ERROR and r.grid_n == 1024


def test_preconditions():
    with pytest.raises(DomainError):
        check_theorem(FieldProfile.constant(1.0), 1.0, [10])
    with pytest.raises(InfiniteFluxError):
        check_theorem(FieldProfile.boundary_blowup(1.0, 1.0), 1.5, [10])


def test_classical_examples():
    rep = check_classical(FieldProfile.zero(), 1.5, 30)
    assert rep.lhs == pytest.approx(252.9, abs=0.05)
    assert rep.berezin == pytest.approx(492.95, abs=0.01) and rep.holds
    rep = check_classical(FieldProfile.constant(2.0), 1.5, 30)
    assert rep.lambda1 >= max(5.7832, 2.0) and rep.holds
    rep = check_classical(FieldProfile.boundary_blowup(1.0, 0.5), 1.5, 10)
    assert rep.inf_B == pytest.approx(1.0) and rep.lambda1 >= 1.0 and rep.holds
    rep = check_classical(FieldProfile.constant(1.0), 0.5, 20)
    assert not rep.berezin_asserted and rep.laptev_reference > rep.berezin


@pytest.mark.parametrize("B0", [0.0, 1.0, 1.9])
def test_threshold_bound(B0):
    rep = threshold_bound(FieldProfile.constant(B0))
    assert rep.holds
    assert rep.threshold == min(rep.outer, rep.inner, rep.l, rep.ltilde)
    if B0 == 0.0:
        for v in (rep.outer, rep.inner, rep.l, rep.ltilde):
            assert v == pytest.approx(2.404825557695773 ** 2, rel=1e-8)
        assert abs(rep.margin) < 1e-10


def test_threshold_needs_small_flux():
    with pytest.raises(DomainError):
        threshold_bound(FieldProfile.constant(2.0))
