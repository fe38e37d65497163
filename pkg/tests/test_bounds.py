import math
from fractions import Fraction

import pytest

from twolevel import bounds
from twolevel.bounds import (REFERENCE, Level, ParityMismatch, UndefinedBound, ZeroCoefficient,
                             comparison_table, lower_bound_low_rank, naive_value_exact,
                             optimal_value, optimal_value_numeric, order_coefficient,
                             upper_bound_order)
from twolevel.kernels import SymmetryGroup as G

from conftest import ALL_GROUPS

COT = lambda t: 1 / math.tan(t)
R3 = math.sqrt(3)

# printed closed forms of c / <1, g>
CLOSED_FORMS = {
    G.SO_EVEN: (54 * R3 * COT(2 / R3) - 5) / 96,
    G.SO_ODD: (33 + 2 * R3 * COT(2 / R3)) / 32,
    G.O: (13 + 6 * R3 * COT(2 / R3)) / 24,
    G.U: (4 + 3 * COT(1)) / 12,
    G.SP: (3 + 2 * COT(2)) / 32,
}
NAIVE = {G.SO_EVEN: Fraction(5, 12), G.SO_ODD: Fraction(13, 12), G.O: Fraction(3, 4),
         G.U: Fraction(1, 2), G.SP: Fraction(1, 12)}


@pytest.mark.parametrize("group", ALL_GROUPS)
def test_naive_value_is_exact_fraction(group):
    assert naive_value_exact(group) == NAIVE[group]


@pytest.mark.parametrize("group", ALL_GROUPS)
def test_optimal_matches_closed_form(group):
    rep = optimal_value(group)
    assert rep.optimal_value == pytest.approx(CLOSED_FORMS[group], rel=1e-12)
    assert rep.provenance == "analytic"


@pytest.mark.parametrize("group", ALL_GROUPS)
def test_optimal_beats_naive(group):
    rep = optimal_value(group)
    assert rep.optimal_value <= rep.naive_value


@pytest.mark.parametrize("group", ALL_GROUPS)
def test_consistency_of_report(group):
    rep = optimal_value(group)
    assert rep.g_integral * rep.optimal_value == pytest.approx(rep.c_const, abs=1e-10)


@pytest.mark.parametrize("group", ALL_GROUPS)
def test_numeric_agrees_with_closed_form(group):
    num = optimal_value_numeric(group, 2001)
    assert num.provenance == "nystrom"
    assert abs(num.optimal_value - optimal_value(group).optimal_value) <= 1e-6


def test_report_as_dict():
    d = optimal_value(G.U).as_dict()
    assert d["group"] == "u" and d["provenance"] == "analytic"
    assert set(d) == {"group", "naive_value", "optimal_value", "g_integral", "c_const", "provenance"}


@pytest.mark.parametrize("r, c", [(0, 0), (1, 0), (2, 0), (3, 4), (4, 8), (5, 16), (6, 24),
                                  (7, 36), (2020, 4 * 1010 * 1009), (2021, 4 * 1010 ** 2)])
def test_order_coefficient(r, c):
    assert order_coefficient(r) == c


def test_order_coefficient_rejects_negative():
    with pytest.raises(ValueError):
        order_coefficient(-1)


@pytest.mark.parametrize("group, r", [(G.SO_EVEN, 3), (G.SO_ODD, 4), (G.SO_EVEN, 2021)])
def test_parity_mismatch(group, r):
    with pytest.raises(ParityMismatch):
        upper_bound_order(group, r, Level.TWO)


@pytest.mark.parametrize("group, r", [(G.SO_EVEN, 2), (G.SO_ODD, 1), (G.U, 1), (G.SP, 2)])
def test_zero_coefficient(group, r):
    with pytest.raises(ZeroCoefficient, match="coefficient vanishes at rank"):
        upper_bound_order(group, r, Level.TWO)


def test_rank_must_be_positive():
    with pytest.raises(ValueError):
        upper_bound_order(G.U, 0, Level.TWO)


def test_one_level_needs_reference_constant():
    with pytest.raises(UndefinedBound):
        upper_bound_order(G.U, 3, Level.ONE_SUPPORT2)
    with pytest.raises(UndefinedBound):
        lower_bound_low_rank(G.SP, 2, Level.ONE_SUPPORT2)


def test_rank_cap_for_groups_without_parity():
    with pytest.raises(UndefinedBound):
        lower_bound_low_rank(G.O, 3, Level.TWO)
    assert lower_bound_low_rank(G.O, 2, Level.TWO) == pytest.approx(1 - CLOSED_FORMS[G.O] / 4)


def test_upper_bound_without_parity():
    assert upper_bound_order(G.U, 3, Level.TWO) == pytest.approx(CLOSED_FORMS[G.U] / 4)
    assert upper_bound_order(G.U, 4, Level.TWO) == pytest.approx(CLOSED_FORMS[G.U] / 8)
    with pytest.raises(ZeroCoefficient):
        upper_bound_order(G.U, 2, Level.TWO)


@pytest.mark.parametrize("group, start", [(G.SO_EVEN, 4), (G.SO_ODD, 3)])
@pytest.mark.parametrize("level", [Level.TWO, Level.ONE_SUPPORT2, Level.ONE_SUPPORT3])
def test_monotone_in_rank(group, start, level):
    vals = [upper_bound_order(group, r, level) for r in range(start, start + 60, 2)]
    assert all(a >= b for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("group", [G.O, G.U, G.SP])
def test_monotone_in_rank_no_parity(group):
    vals = [upper_bound_order(group, r, Level.TWO) for r in range(3, 40)]
    assert all(a >= b for a, b in zip(vals, vals[1:]))


def test_reconstruction_identity():
    lower = lower_bound_low_rank(G.SO_EVEN, 1, Level.TWO)
    upper = upper_bound_order(G.SO_EVEN, 4, Level.TWO)
    assert 1 - lower == pytest.approx(upper * 8 / 8, abs=1e-15)


def test_lower_bound_so_odd_two_level():
    assert lower_bound_low_rank(G.SO_ODD, 1, Level.TWO) == pytest.approx(1 - CLOSED_FORMS[G.SO_ODD] / 16)


def test_lower_bound_rejects_k_zero():
    with pytest.raises(ValueError):
        lower_bound_low_rank(G.SO_EVEN, 0, Level.TWO)


def test_reference_constants():
    assert REFERENCE.one_level(G.SO_EVEN, 2) == pytest.approx((3 + COT(0.25)) / 8, rel=1e-15)
    assert REFERENCE.one_level(G.SO_ODD, 2) == pytest.approx((5 + COT(0.25)) / 8, rel=1e-15)
    assert REFERENCE.one_level(G.SO_ODD, 3) == 1.04304
    with pytest.raises(UndefinedBound):
        REFERENCE.one_level(G.SO_EVEN, 4)


def test_two_level_beats_one_level_from_order_6():
    for row in comparison_table([6, 8, 10, 20, 100], G.SO_EVEN):
        assert row.two_level < row.one_level


def test_iteration_report_shape():
    rep = bounds.iterate(G.U, 3, 401)
    d = rep.as_dict()
    assert len(d["partial_sums"]) == 4 and d["final_bound"] == rep.partial_bounds[-1]
    assert d["certified"] and d["terms_nonnegative"]


def test_iteration_partial_bounds_decrease():
    rep = bounds.iterate(G.U, 8, 801)
    pb = rep.partial_bounds
    assert all(a > b for a, b in zip(pb, pb[1:]))
    # every truncation is an upper bound for the exact iterated optimum
    assert min(pb) >= rep.nystrom_value


def test_iteration_improves_on_first_round():
    rep = bounds.iterate(G.U, 6, 801)
    assert rep.final_bound <= CLOSED_FORMS[G.U]
    assert rep.nystrom_value <= CLOSED_FORMS[G.U]
