# tests/test_gap.py

import random
from fractions import Fraction

import pytest

from subspace_lab.core.arith.algebraic import AlgebraicReal
from subspace_lab.core.arith.linalg import Subspace
from subspace_lab.core.subspace.cubic import cubic_solutions_from_u, cubic_system
from subspace_lab.core.subspace.enumeration import enumerate_solutions
from subspace_lab.core.subspace.gap import (
    HeightWindow,
    PowerValue,
    cover_interval_union,
    covering_intervals,
    fit_interval_result,
    small_solution_classes,
    small_solution_groups,
    window_determinant_chain,
    window_members,
    window_ratio,
    window_subspace,
)
from subspace_lab.errors import PreconditionError


@pytest.fixture(scope="module")
def unit_sum_solutions(unit_sum_2):
    return enumerate_solutions(unit_sum_2, 40).solutions


def test_window_ratio():
    assert window_ratio(3, Fraction(1, 2)) == Fraction(13, 12)


def test_power_values():
    assert PowerValue(Fraction(2), Fraction(1, 2)).compare(Fraction(3, 2)) == -1
    assert PowerValue(Fraction(4), Fraction(1, 2)).compare(2) == 0
    assert PowerValue(Fraction(2), Fraction(3), Fraction(2)).compare(16) == 0
    assert PowerValue(Fraction(3), Fraction(12)).to_text() == "3^(12)"


def test_height_window_is_half_open():
    window = HeightWindow(PowerValue(Fraction(4), Fraction(1)), PowerValue(Fraction(2), Fraction(3)))
    assert window.contains(4)
    assert window.contains(7)
    assert not window.contains(8)
    assert not window.contains(3)


def test_window_subspace_is_proper(unit_sum_2, unit_sum_solutions):
    # threshold n^(2n/delta) = 16; the window is [16, 32)
    span = window_subspace(unit_sum_2, unit_sum_solutions, 16)
    assert span == Subspace.span([[1, -1]])
    members = window_members(unit_sum_solutions, 16, window_ratio(2, 1))
    assert [r.x for r in members] == [(k, -k) for k in range(16, 32)]


def test_window_below_threshold(unit_sum_2, unit_sum_solutions):
    with pytest.raises(PreconditionError):
        window_subspace(unit_sum_2, unit_sum_solutions, 10)


def test_empty_window(unit_sum_2, unit_sum_solutions):
    assert window_subspace(unit_sum_2, unit_sum_solutions, 1000).is_zero


def test_determinant_chain(unit_sum_2):
    chain = window_determinant_chain(unit_sum_2, [(16, -16), (17, -17)], 16)
    assert chain.determinant == 0
    assert chain.product_direct == 0
    assert chain.holds
    # n^(n/2) Q^(-delta/2) = 2 * 16^(-1/2)
    assert chain.target.contains(Fraction(1, 2))
    assert [s.place for s in chain.steps] == ["inf"]


def test_determinant_chain_refutes_independent_vectors(unit_sum_2):
    chain = window_determinant_chain(unit_sum_2, [(1, 0), (0, 1)], 16)
    assert chain.determinant == 1
    assert not chain.holds


def test_small_solution_classes(unit_sum_2, unit_sum_solutions):
    # [2, 2 * 2^(5/4)) holds the heights 2, 3, 4
    groups = small_solution_groups(unit_sum_2, unit_sum_solutions, 2)
    assert sorted(x for members in groups.values() for x in members) == [(2, -2), (3, -3), (4, -4)]
    spans = small_solution_classes(unit_sum_2, unit_sum_solutions, 2)
    assert len(spans) == 1
    assert list(spans.values()) == [Subspace.span([[1, -1]])]


def test_small_solution_classes_at_height_one(unit_sum_2, unit_sum_solutions):
    spans = small_solution_classes(unit_sum_2, unit_sum_solutions, 1)
    assert all(U.is_proper for U in spans.values())
    assert sum(U.dim for U in spans.values()) >= 1


GRID = [(n, delta, H) for n in (2, 3, 4) for delta in (Fraction(1, 4), Fraction(1, 2), Fraction(1)) for H in (1, 10**3, 10**30)]


@pytest.mark.parametrize("n,delta,H", GRID)
def test_covering_intervals(n, delta, H):
    families = covering_intervals(n, delta, H)
    rng = random.Random(n * 1000 + delta.denominator * 100 + len(str(H)))
    for family in (families.I1, families.I2):
        assert len(family.windows) <= family.count_formula
        assert family.within_closed_form, family.name
        for prev, nxt in zip(family.windows, family.windows[1:]):
            assert prev.upper == nxt.lower
    threshold = families.I2.target_upper
    top = threshold.enclosure().upper
    for _ in range(200):
        h = rng.randint(1, min(int(top), 10**6))
        if families.I2.in_target(h):
            assert families.I2.covers(h)
    if families.I1.windows:
        lower = int(families.I1.target_lower.enclosure().upper) + 1
        upper = int(families.I1.target_upper.enclosure().lower)
        for _ in range(200):
            h = rng.randint(lower, max(lower, upper - 1))
            if families.I1.in_target(h):
                assert families.I1.covers(h)


def test_large_family_is_empty_when_2H_is_small():
    families = covering_intervals(2, Fraction(1), 1)
    assert families.I1.windows == []
    assert families.I1.count_formula == 0


def test_cover_interval_union():
    windows = cover_interval_union([2, 3], 2, 2, 1)
    # exponents 1, 5/4, 25/16, 125/64 for each start
    assert len(windows) == 8
    for h in (2, 3):
        assert any(w.contains(h) for w in windows)
    with pytest.raises(PreconditionError):
        cover_interval_union([1], 2, 2, 1)


def test_fit_interval_result():
    assert fit_interval_result([5, 2, 3, 4, 17], 2) == [2, 4, 17]
    with pytest.raises(PreconditionError):
        fit_interval_result([1, 2], 2)


def test_cubic_window_is_proper():
    # X^3 + 10^30 X - 1 has a root near 10^-30, so alpha = 0 gives solutions of large height
    xi = AlgebraicReal.parse(f"poly=[-1,{10**30},0,1];interval=[0,1/{10**29}]")
    delta = Fraction(1, 2)
    system = cubic_system(xi, delta)
    Q = 3**12  # n^(2n/delta); the window is [3^12, 3^13)
    u_values = [u for k in (3**12, 700000, 10**6, 3**13 - 1, 3**13) for u in (k, -k)]
    records = cubic_solutions_from_u(xi, delta, 0, u_range=u_values)
    assert len(records) == 10
    members = window_members(records, Q, window_ratio(3, delta))
    assert len(members) == 8
    span = window_subspace(system, records, Q)
    assert span.is_proper
    assert span == Subspace.span([[0, 1, 0], [0, 0, 1]])
