# tests/test_filtration.py

import random
from fractions import Fraction

import pytest

from subspace_lab.core.arith.linalg import Subspace
from subspace_lab.core.subspace.cubic import cubic_system
from subspace_lab.core.subspace.filtration import (
    check_u0_height,
    exceptional_subspace,
    form_kernels,
    mu,
    nu,
    nu_v,
    nu_v_bruteforce,
    rational_candidates,
    reduced_basis,
    unit_sum_subsets,
    vojta_closure,
)
from subspace_lab.errors import ClosureCapExceeded, PreconditionError


def test_unit_sum_two(unit_sum_2):
    report = exceptional_subspace(unit_sum_2)
    assert report.U0 == Subspace.span([[1, -1]])
    assert report.mu0 == -2
    assert not report.semistable
    assert report.verified
    assert unit_sum_subsets(report.U0) == [[0, 1]]


def test_unit_sum_two_slopes(unit_sum_2_half):
    assert mu(Subspace.span([[1, -1]]), unit_sum_2_half) == Fraction(-3, 2)
    assert mu(Subspace.span([[1, 0]]), unit_sum_2_half) == 1
    assert mu(Subspace.zero(2), unit_sum_2_half) == Fraction(-1, 4)


def test_unit_sum_three(unit_sum_3):
    report = exceptional_subspace(unit_sum_3)
    assert report.U0 == Subspace.kernel([[1, 1, 1]], 3)
    assert report.mu0 == Fraction(-5, 2)
    assert unit_sum_subsets(report.U0) == [[0, 1, 2]]
    assert "minimizers of nu and of mu differ" in report.flags
    assert not report.semistable
    assert check_u0_height(report.U0, unit_sum_3)
    for vector in reduced_basis(report.U0):
        assert report.U0.contains(vector)
    assert len(reduced_basis(report.U0)) == 2


def test_cubic_is_semistable(cubic):
    report = exceptional_subspace(cubic)
    assert report.closure_size == 8
    assert len(report.candidates) == 4
    assert report.U0.is_zero
    assert report.semistable
    assert report.mu0 == Fraction(-1, 6)
    assert all(c.mu == 1 for c in report.candidates if not c.subspace.is_zero)
    assert reduced_basis(report.U0) == []


@pytest.mark.parametrize("delta", [Fraction(1, 4), Fraction(1)])
def test_cubic_slopes_across_delta(cbrt2, delta):
    report = exceptional_subspace(cubic_system(cbrt2, delta))
    assert report.mu0 == -delta / 3
    assert report.semistable


def test_two_places(two_places):
    report = exceptional_subspace(two_places)
    assert all(c.mu == Fraction(-1, 2) for c in report.candidates)
    assert report.U0.is_zero


@pytest.mark.parametrize("name", ["unit_sum_2", "unit_sum_3", "two_places", "cubic"])
def test_greedy_nu_matches_bruteforce(request, name):
    system = request.getfixturevalue(name)
    rng = random.Random(len(name))
    subspaces, _ = rational_candidates(system)
    for _ in range(30):
        k = rng.randint(1, system.n - 1)
        subspaces.append(Subspace.span([[rng.randint(-3, 3) for _ in range(system.n)] for _ in range(k)], system.n))
    for U in subspaces:
        for place in system.places:
            assert nu_v(U, system, place) == nu_v_bruteforce(U, system, place)


def test_nu_of_full_space_is_exponent_sum(unit_sum_3):
    assert nu(Subspace.full(3), unit_sum_3) == unit_sum_3.exponent_sum


def test_mu_needs_proper_subspace(unit_sum_3):
    with pytest.raises(PreconditionError):
        mu(Subspace.full(3), unit_sum_3)
    with pytest.raises(PreconditionError):
        mu(Subspace.zero(2), unit_sum_3)


def test_closure():
    members = vojta_closure([Subspace.kernel([[1, 0, 0]], 3), Subspace.kernel([[0, 1, 0]], 3)])
    assert len(members) == 4
    assert Subspace.full(3) in members
    assert Subspace.span([[0, 0, 1]]) in members


def test_closure_cap(cubic):
    with pytest.raises(ClosureCapExceeded):
        exceptional_subspace(cubic, cap=3)


def test_unit_sum_subsets():
    assert unit_sum_subsets(Subspace.kernel([[1, 1, 0]], 3)) == [[0, 1]]
    assert unit_sum_subsets(Subspace.span([[1, 1, 0]])) is None
    assert unit_sum_subsets(Subspace.kernel([[1, 1, 0, 0], [0, 0, 1, 1]], 4)) == [[0, 1], [2, 3]]


def test_closure_is_idempotent(cubic, unit_sum_3):
    for system in (cubic, unit_sum_3):
        members = vojta_closure(form_kernels(system))
        assert vojta_closure(members) == members
    small = vojta_closure([Subspace.kernel([[1, 0, 0]], 3), Subspace.kernel([[0, 1, 0]], 3)])
    assert vojta_closure(list(reversed(small))) == list(reversed(small))
