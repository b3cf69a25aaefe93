# tests/test_bounds.py

from fractions import Fraction

import pytest

from subspace_lab.core.arith.enclosure import RealEnclosure
from subspace_lab.core.bounds.formulas import (
    OUTSIDE_RANGE,
    Form,
    bound_table,
    composition_check,
    large_height_threshold,
    roth_bound_table,
    roth_bounds,
    schmidt89_bound,
    small_bound,
    theorem21_bound,
    theorem21_window_total,
    theorem31_constants,
    theoremB_bound,
)
from subspace_lab.errors import PreconditionError


def test_roth_constants():
    bounds = roth_bounds(2, 1, 1)
    # 1 + [25600 log 4]
    assert bounds.m == 35490
    assert bounds.omega == 162 * 35490**2
    assert bounds.C_log.form == Form.LOG2
    assert bounds.small_bound.value.lower > 3
    assert bounds.small_bound.value.upper < Fraction(33, 10)


def test_roth_large_bound_outside_range():
    bounds = roth_bounds(1, 1, 1)
    assert any(OUTSIDE_RANGE in f for f in bounds.large_bound.flags)
    assert bounds.large_bound.value.upper < 0
    assert bounds.C_log.value == RealEnclosure.exact(0)


def test_roth_bound_table():
    rows = roth_bound_table(2, Fraction(1, 2), RealEnclosure(Fraction(2), Fraction(3)))
    assert [r.name for r in rows] == ["roth_large", "roth_small", "roth_C_log", "roth_total"]


def test_schmidt89():
    report = schmidt89_bound(2, 1)
    assert report.form == Form.LOG2LOG2
    assert report.log2log2 == RealEnclosure.exact(54)
    assert report.log2 == RealEnclosure.exact(Fraction(2) ** 54)
    assert schmidt89_bound(2, Fraction(1, 3)).log2log2 == RealEnclosure.exact(486)


def test_theoremB_outside_range():
    report = theoremB_bound(2, 1, 1, 1)
    assert any(OUTSIDE_RANGE in f for f in report.flags)
    assert theoremB_bound(2, 1, 3, 3).flags == []


def test_theoremB_threshold():
    report = theoremB_bound(2, Fraction(1, 2), 3, 1)
    # n^(2n/delta) = 2^8 beats 2H = 2
    assert report.threshold == "2^(8)"
    assert report.threshold_log2.lower <= 8 <= report.threshold_log2.upper
    large_H = theoremB_bound(2, 1, 3, 1, H=1000)
    assert large_H.threshold == "2000"
    assert large_H.inputs["H"] == "1000"
    assert large_height_threshold(3, 1, 1)[0] == "3^(6)"
    with pytest.raises(PreconditionError):
        theoremB_bound(2, 1, 3, 1, H=0)


def test_theoremB_far_above_theorem21():
    # n = 10, delta = 1/10: 4^361 against 10^9 2^20 10^14 10^3
    older = theoremB_bound(10, Fraction(1, 10), 10, 1)
    newer = theorem21_bound(10, Fraction(1, 10), 10, 1)
    assert older.flags == [] and newer.flags == []
    assert older.log2.lower - newer.log2.upper > 600


def test_theoremB_square_exponent_dominates():
    report = theoremB_bound(20, Fraction(1, 2), 40, 1)
    # log2 4^((n+9)^2) = 2 * 29^2 = 1682; the rest adds about 27 bits
    assert report.form == Form.LOG2
    assert 1682 < report.log2.lower
    assert report.log2.upper < 1682 + 30
    assert theorem21_bound(20, Fraction(1, 2), 40, 1).log2.upper < 200


def test_theorem21_grows_with_n():
    small = theorem21_bound(2, Fraction(1, 2), 3, 1)
    large = theorem21_bound(4, Fraction(1, 2), 3, 1)
    assert small.flags == []
    assert small.log2.upper < large.log2.lower


def test_window_total_exact_tie():
    # log(25/16) / log(5/4) = 2 exactly
    assert theorem21_window_total(1, Fraction(25, 16), 2, 1) == 4
    with pytest.raises(PreconditionError):
        theorem21_window_total(0, 2, 2, 1)
    with pytest.raises(PreconditionError):
        theorem21_window_total(1, 1, 2, 1)


def test_window_constants():
    constants = theorem31_constants(2, 1, 3, 1)
    # omega = 6 log 9
    assert constants.omega.lower > Fraction(1318, 100)
    assert constants.omega.upper < Fraction(1319, 100)
    assert constants.m > 10**12


@pytest.mark.parametrize(
    "n,delta,R,D,holds",
    [
        (2, Fraction(1), 3, 1, False),
        (2, Fraction(1, 2), 3, 1, True),
        (2, Fraction(1, 4), 3, 1, True),
        (2, Fraction(1), 10, 10, True),
        (2, Fraction(1, 2), 10, 10, True),
    ],
)
def test_composition(n, delta, R, D, holds):
    check = composition_check(n, delta, R, D)
    assert check.holds is holds
    assert (check.log2_margin.lower >= 0) is holds


def test_small_bound():
    rows = small_bound(2, 1, 1, 1)
    value = rows["rational"].value
    # 10^6 + 8 log log 4
    assert value.lower > 1000002 and value.upper < 1000003
    assert rows["general"].value.lower > 2000**2


def test_bound_table():
    rows = bound_table(2, Fraction(1, 2), 3, 1)
    assert [r.name for r in rows] == [
        "theorem21",
        "theoremB",
        "schmidt89",
        "theorem31_window_total",
        "theorem22_rational",
    ]
    assert rows[3].flags == []
    assert bound_table(2, 1, 3, 1)[3].flags == ["exceeds theorem21"]
    assert bound_table(2, Fraction(1, 2), 3, 1, d=2)[4].name == "theorem22_general"


@pytest.mark.parametrize(
    "call",
    [
        lambda: theorem21_bound(1, 1, 3, 1),
        lambda: theorem21_bound(2, 0, 3, 1),
        lambda: theorem21_bound(2, 1, 0, 1),
        lambda: theoremB_bound(2, 2, 3, 1),
        lambda: roth_bounds(0, 1, 1),
        lambda: small_bound(2, 1, 1, 0),
    ],
)
def test_preconditions(call):
    with pytest.raises(PreconditionError):
        call()
