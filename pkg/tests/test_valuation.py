from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from todapsi import reference as ref
from todapsi.curve import EllipticCurve
from todapsi.exact import INF, ExtInt, MultiPoly
from todapsi.psi import PsiSequence
from todapsi.valuation import (UnsupportedPointError, ValuationPoint, differential_order,
                               g_sequence, local_expansion, nonarch_norm, val, val_axioms_check,
                               val_shortcut)

QUARTER = EllipticCurve(*ref.CURVES["cubic_quarter"])
MINUS_X = EllipticCurve(*ref.CURVES["cubic_minus_x"])
NODAL = EllipticCurve(*ref.CURVES["nodal"])
Y0 = ValuationPoint.branch(QUARTER, factor=QUARTER.f)
X0 = ValuationPoint.branch(MINUS_X, b=0)


def test_psi2_at_irrational_branch():
    assert val(QUARTER.y() * -2, Y0) == 1


def test_x_at_infinity():
    assert val(QUARTER.x(), ValuationPoint.infinity(QUARTER)) == -2
    assert val(QUARTER.y(), ValuationPoint.infinity(QUARTER)) == -3


def test_psi3_at_origin_of_minus_x_curve():
    # psi3 = 3x^4 - 6x^2 - 1 does not vanish at x = 0
    psi3 = PsiSequence(MINUS_X)[3]
    assert val(psi3, X0) == 0


def test_axioms_examples():
    psi2 = QUARTER.y() * -2
    rep = val_axioms_check(psi2, psi2, Y0)
    assert rep["val_fg"] == 2 and rep["product_ok"]
    pt = ValuationPoint.generic(QUARTER, 1)
    rep = val_axioms_check(QUARTER.y(), -QUARTER.y(), pt)
    assert rep["val_sum"] == INF and rep["sum_ok"] and not rep["sum_is_min"]
    rep = val_axioms_check(QUARTER.one(), QUARTER.x() - 1, pt)
    assert rep["val_sum"] == 0 and rep["sum_is_min"]


def test_table_of_g_on_quarter_curve():
    gs = g_sequence(PsiSequence(QUARTER), Y0, 12)
    assert gs == [ExtInt.of(v) for v in ref.G_CUBIC_QUARTER_AT_Y0]
    assert g_sequence(PsiSequence(QUARTER), Y0, 24)[13:] == [ExtInt((n + 1) % 2) for n in range(13, 25)]


def test_table_of_g_on_minus_x_curve():
    # the true sequence alternates like the other branch point
    gs = g_sequence(PsiSequence(MINUS_X), X0, 12)
    assert gs == [INF] + [ExtInt((n + 1) % 2) for n in range(1, 13)]


def test_values_at_infinity_follow_degrees():
    seq = PsiSequence(QUARTER)
    pt = ValuationPoint.infinity(QUARTER)
    for n in range(1, 10):
        expected = -(n * n - 1) if n % 2 else -(n * n - 4) - 3
        assert val(seq[n], pt) == expected


def test_nodal_generic_point_sees_six_cycle():
    seq = PsiSequence(NODAL)
    pt = ValuationPoint.generic(NODAL, -1)
    assert [n for n in range(1, 13) if val(seq[n], pt) != 0] == [6, 12]


def test_branch_point_validation():
    with pytest.raises(UnsupportedPointError):
        ValuationPoint.branch(NODAL, b=0)
    with pytest.raises(UnsupportedPointError):
        ValuationPoint.branch(QUARTER, b=1)
    with pytest.raises(UnsupportedPointError):
        ValuationPoint.generic(MINUS_X, 1)


def test_linear_factor_becomes_rational_branch():
    pt = ValuationPoint.branch(MINUS_X, factor=MultiPoly.from_coeffs([-1, 1]))
    assert pt.b == 1


@pytest.mark.parametrize("pt", [Y0, X0, ValuationPoint.infinity(QUARTER),
                                ValuationPoint.generic(QUARTER, 2)])
def test_uniformizer_has_order_zero_differential(pt):
    assert differential_order(pt) == 0


def test_local_expansion_of_y_at_branch():
    s = local_expansion(MINUS_X.y(), X0, 4)
    assert s.offset + next(i for i, c in enumerate(s.coefficients) if c) == 1


@pytest.mark.parametrize("v, label", [(2, "<1"), (-14, ">1"), ("inf", "=0"), (0, "=1")])
def test_nonarch_norm(v, label):
    assert nonarch_norm(v) == label


def test_precision_cap(monkeypatch):
    from todapsi import valuation
    pt = ValuationPoint.generic(QUARTER, 2)
    e = (QUARTER.x() - 2) ** 12
    assert val(e, pt) == 12
    monkeypatch.setattr(valuation, "PRECISION_CAP", 8)
    with pytest.raises(valuation.PrecisionError):
        val(e, pt)


def test_json_round_trip():
    for pt in (Y0, X0, ValuationPoint.infinity(QUARTER), ValuationPoint.generic(QUARTER, 2)):
        assert ValuationPoint.from_json(pt.curve, pt.to_json()) == pt


# ---- the series route and the shortcut route agree ----------------------

small = st.integers(min_value=-4, max_value=4)
points = st.sampled_from([
    Y0,
    ValuationPoint.infinity(QUARTER),
    ValuationPoint.generic(QUARTER, 0),
    ValuationPoint.generic(QUARTER, 2),
    ValuationPoint.generic(QUARTER, Fraction(-1, 2)),
])


def element(a, b, c, d, k):
    x, y = QUARTER.x(), QUARTER.y()
    return (x * a + b) * (x - 2) ** k + y * (x * c + d)


@settings(max_examples=80)
@given(small, small, small, small, st.integers(min_value=0, max_value=2), points)
def test_series_route_matches_shortcut(a, b, c, d, k, pt):
    e = element(a, b, c, d, k)
    assert val(e, pt) == val_shortcut(e, pt)


@settings(max_examples=40)
@given(small, small, small, small, small, small, points)
def test_valuation_is_additive_and_ultrametric(a, b, c, d, e, f, pt):
    g, h = element(a, b, 0, c, 0), element(d, e, f, 1, 1)
    rep = val_axioms_check(g, h, pt)
    assert rep["product_ok"] and rep["sum_ok"]


@settings(max_examples=20)
@given(st.integers(min_value=1, max_value=14))
def test_psi_valuations_agree_across_routes(n):
    seq = PsiSequence(MINUS_X)
    for pt in (X0, ValuationPoint.infinity(MINUS_X), ValuationPoint.generic(MINUS_X, 2)):
        assert val(seq[n], pt) == val_shortcut(seq[n], pt)
