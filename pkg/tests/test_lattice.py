# tests/test_lattice.py

from fractions import Fraction
from itertools import product

import pytest

from subspace_lab.core.subspace.lattice import (
    check_determinant_condition,
    exhaustive_min_cover,
    greedy_hyperplane_cover,
    subspace_cover,
)
from subspace_lab.core.arith.linalg import det
from subspace_lab.errors import PreconditionError

UNIT_POINTS = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)]
HALF_POINTS = [(Fraction(1, 2), 0, 0), (0, 1, 0), (0, 0, 1), (Fraction(1, 2), 1, 1)]
THREE_PLANES = [
    (0, 1, 2), (0, 3, -1), (0, 2, 5),
    (1, 0, 1), (2, 0, -3), (4, 0, 1),
    (1, 1, -2), (2, -1, -1), (3, 1, -4),
]


def _covers(cover, points):
    return all(any(U.contains(p) for U in cover) for p in points)


def test_unit_points():
    assert check_determinant_condition(UNIT_POINTS, {"inf": 1}) == []
    result = subspace_cover(UNIT_POINTS, {"inf": 1})
    assert result.size == 2
    assert result.within_bound
    assert all(U.is_proper for U in result.cover)
    assert _covers(result.cover, UNIT_POINTS)
    assert exhaustive_min_cover(UNIT_POINTS) == 2


def test_half_lattice():
    result = subspace_cover(HALF_POINTS, {"inf": 1, "2": 2})
    assert result.D == 2
    assert abs(det(result.lattice_basis)) == Fraction(1, 2)
    # every triple has |det|_2 = 2, so the first one spans M_2
    assert result.local_tuples == {"2": (0, 1, 2)}
    assert len(result.pulled_back) == len(HALF_POINTS)
    assert _covers(result.cover, HALF_POINTS)
    assert result.size >= exhaustive_min_cover(HALF_POINTS)


def test_condition_failure_is_rejected():
    points = [(1, 0, 0), (0, 1, 0), (0, 0, 3)]
    failures = check_determinant_condition(points, {"inf": 1})
    assert len(failures) == 1
    assert "|det|_inf" in failures[0]
    with pytest.raises(PreconditionError):
        subspace_cover(points, {"inf": 1})


def test_p_adic_condition():
    points = [(Fraction(1, 2), 0), (0, 1)]
    assert check_determinant_condition(points, {"inf": 1}) != []
    assert check_determinant_condition(points, {"inf": 1, "2": 2}) == []


def test_proper_span_needs_one_subspace():
    result = subspace_cover([(1, 0, 0), (0, 1, 0), (1, 1, 0)], {"inf": 1})
    assert result.size == 1
    assert result.cover[0].dim == 2


def test_bad_inputs():
    with pytest.raises(PreconditionError):
        subspace_cover([], {"inf": 1})
    with pytest.raises(PreconditionError):
        subspace_cover([(1, 0), (0, 1, 0)], {"inf": 1})
    with pytest.raises(PreconditionError):
        subspace_cover([(1, 0), (0, 1)], {"inf": 0})


def test_greedy_against_exhaustive():
    cover = greedy_hyperplane_cover(THREE_PLANES)
    assert _covers(cover, THREE_PLANES)
    assert all(U.is_proper for U in cover)
    best = exhaustive_min_cover(THREE_PLANES)
    assert best <= 3
    assert best <= len(cover) <= 2 * best


# canonical-sign vectors of {-1, 0, 1}^3: every 3 x 3 minor is at most 4
SMALL_VECTORS = sorted(
    v for v in product((-1, 0, 1), repeat=3) if any(v) and next(c for c in v if c) > 0
)
SUBSETS = [SMALL_VECTORS, SMALL_VECTORS[::2], SMALL_VECTORS[1::2], SMALL_VECTORS[:7], SMALL_VECTORS[5:]]
SCALINGS = [
    (1, 1, 1),
    (Fraction(1, 2), 1, 1),
    (1, Fraction(1, 3), 1),
    (Fraction(1, 2), 1, Fraction(1, 3)),
]
MIXED_D = {"inf": 4, "2": 2, "3": 3}


@pytest.mark.parametrize("scaling", SCALINGS)
@pytest.mark.parametrize("subset", range(len(SUBSETS)))
def test_cover_on_mixed_places(subset, scaling):
    points = [tuple(a * c for a, c in zip(scaling, v)) for v in SUBSETS[subset]]
    assert check_determinant_condition(points, MIXED_D) == []
    result = subspace_cover(points, MIXED_D)
    assert result.D == 24
    assert result.within_bound
    assert all(U.is_proper for U in result.cover)
    assert _covers(result.cover, points)
    assert all(isinstance(c, int) for p in result.pulled_back for c in p)
    if result.pulled_back:
        assert set(result.local_tuples) == {"2", "3"}
    best = exhaustive_min_cover(points)
    assert best <= result.size <= 2 * best


def test_exhaustive_budget():
    with pytest.raises(PreconditionError):
        exhaustive_min_cover(THREE_PLANES, node_budget=0)
