# tests/test_roth.py

from fractions import Fraction

import pytest

from subspace_lab.core.approximation.roth import (
    RothSolution,
    Side,
    SizeClass,
    audit_gap_principle,
    brute_force_scan,
    classify_solution,
    convergent_oracle,
    exhaustive_threshold,
    recheck_solution,
    roth_window_cover,
    scan_roth,
    test_candidate as check_candidate,
    window_count,
)
from subspace_lab.core.arith.enclosure import RealEnclosure
from subspace_lab.errors import PreconditionError


def _alphas(solutions):
    return [s.alpha for s in solutions]


@pytest.mark.parametrize("delta", [Fraction(1, 2), Fraction(1)])
@pytest.mark.parametrize("name", ["sqrt2", "cbrt2", "golden"])
def test_scan_matches_oracles(request, name, delta):
    xi = request.getfixturevalue(name)
    scanned = scan_roth(xi, delta, 40)
    assert _alphas(scanned) == _alphas(brute_force_scan(xi, delta, 40))
    assert _alphas(scanned) == _alphas(convergent_oracle(xi, delta, 40))
    assert audit_gap_principle(scanned, delta) == []


@pytest.mark.slow
@pytest.mark.parametrize("delta", [Fraction(1, 2), Fraction(1)])
@pytest.mark.parametrize("name", ["sqrt2", "cbrt2", "golden"])
def test_scan_matches_oracles_full_scale(request, name, delta):
    xi = request.getfixturevalue(name)
    scanned = scan_roth(xi, delta, 500)
    assert _alphas(scanned) == _alphas(brute_force_scan(xi, delta, 500))
    assert _alphas(scanned) == _alphas(convergent_oracle(xi, delta, 500))
    assert audit_gap_principle(scanned, delta) == []


def test_sqrt2_half_has_only_one(sqrt2):
    solutions = scan_roth(sqrt2, Fraction(1, 2), 100)
    assert _alphas(solutions) == [Fraction(1)]
    assert solutions[0].side == Side.BELOW
    assert solutions[0].satisfies_margin.lower > 0
    assert classify_solution(solutions[0], sqrt2) == SizeClass.SMALL
    assert recheck_solution(sqrt2, Fraction(1, 2), solutions[0])


def test_candidate_rejects_far_rationals(sqrt2):
    assert check_candidate(sqrt2, Fraction(1), Fraction(3, 2)) is None
    assert check_candidate(sqrt2, Fraction(1), Fraction(1)) is not None


def test_threads_do_not_change_the_scan(golden):
    assert _alphas(scan_roth(golden, Fraction(1), 60, threads=2)) == _alphas(scan_roth(golden, Fraction(1), 60))


def test_scan_preconditions(sqrt2):
    with pytest.raises(PreconditionError):
        scan_roth(sqrt2, Fraction(3, 2), 10)
    with pytest.raises(PreconditionError):
        scan_roth(sqrt2, 0, 10)
    assert scan_roth(sqrt2, Fraction(1), 0) == []


def _solution(alpha, side):
    alpha = Fraction(alpha)
    return RothSolution(alpha, max(abs(alpha.numerator), alpha.denominator), side, RealEnclosure.exact(0))


def test_audit_finds_crowded_window():
    # 4^2 < 3^3: both heights fall in [3, 3^(3/2))
    solutions = [_solution(Fraction(3, 2), Side.ABOVE), _solution(Fraction(4, 3), Side.ABOVE)]
    violations = audit_gap_principle(solutions, Fraction(1))
    assert len(violations) == 1
    assert violations[0].window.Q == 3


def test_audit_ignores_other_side():
    solutions = [_solution(Fraction(3, 2), Side.ABOVE), _solution(Fraction(4, 3), Side.BELOW)]
    assert audit_gap_principle(solutions, Fraction(1)) == []


def test_exhaustive_threshold():
    assert exhaustive_threshold(Fraction(1, 2)) == 3
    assert exhaustive_threshold(Fraction(1)) == 1


def test_window_count():
    # 1 + 2 log 2 / log(3/2) = 4.42...
    assert window_count(2, 1) == 5
    # E^2 = (3/2)^2 exactly, so the value is the integer 3
    assert window_count(Fraction(3, 2), 1) == 3
    with pytest.raises(PreconditionError):
        window_count(1, 1)


def test_window_cover_is_contiguous():
    windows = roth_window_cover(2, 2, 1)
    assert [(w.e_lo, w.e_hi) for w in windows] == [(1, Fraction(3, 2)), (Fraction(3, 2), Fraction(9, 4))]
    for prev, nxt in zip(windows, windows[1:]):
        assert prev.e_hi == nxt.e_lo
    assert len(windows) <= window_count(2, 1)
    for height in (2, 3):
        assert any(w.contains(height) for w in windows)


def test_window_cover_preconditions():
    with pytest.raises(PreconditionError):
        roth_window_cover(1, 2, 1)
    with pytest.raises(PreconditionError):
        roth_window_cover(2, 1, 1)
