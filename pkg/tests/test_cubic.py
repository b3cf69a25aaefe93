# tests/test_cubic.py

from fractions import Fraction

import pytest

from subspace_lab.core.arith.algebraic import AlgebraicReal
from subspace_lab.core.subspace.cubic import (
    cubic_solutions_from_u,
    cubic_system,
    roth_lower_bound_from_count,
    roth_lower_bound_holds,
)
from subspace_lab.core.subspace.enumeration import enumerate_solutions
from subspace_lab.core.subspace.systems import validate_system
from subspace_lab.errors import PreconditionError


def test_cubic_system_shape(cubic):
    assert cubic.n == 3
    assert cubic.R == 3
    assert cubic.D == 3
    assert validate_system(cubic) == []
    assert cubic.infinite_block.exponents == (Fraction(-5, 2), Fraction(1), Fraction(1))


def test_cubic_system_needs_degree_three(sqrt2, cbrt2):
    with pytest.raises(PreconditionError):
        cubic_system(sqrt2, Fraction(1, 2))
    with pytest.raises(PreconditionError):
        cubic_system(cbrt2, 0)
    with pytest.raises(PreconditionError):
        cubic_system(cbrt2, 2)


def test_far_approximations_give_no_solutions(cbrt2):
    # 2^(5/2) (1 + xi) |xi - alpha| H(alpha)^(7/2) is well above 1 here
    for alpha in (Fraction(1), Fraction(5, 4), Fraction(29, 23)):
        assert cubic_solutions_from_u(cbrt2, Fraction(1, 2), alpha) == []


def test_count_lower_bound_for_a_rational():
    bound = roth_lower_bound_from_count(AlgebraicReal.from_rational(Fraction(1)), 1, 1)
    # 2^-3 (1 + 1)^-1
    assert bound(1).contains(Fraction(1, 16))


def test_count_lower_bound_decreases(cbrt2):
    bound = roth_lower_bound_from_count(cbrt2, Fraction(1, 2), 3)
    assert bound(10).upper < bound(2).lower
    with pytest.raises(PreconditionError):
        bound(0)
    with pytest.raises(PreconditionError):
        roth_lower_bound_from_count(cbrt2, Fraction(1, 2), 0)


@pytest.mark.parametrize("alpha", [Fraction(5, 4), Fraction(29, 23), Fraction(63, 50)])
def test_lower_bound_holds_near_convergents(cbrt2, alpha):
    assert roth_lower_bound_holds(cbrt2, Fraction(1, 2), 1, alpha)


def test_close_approximation_builds_solutions():
    # X^3 + 1000X - 1 has a root near 1/1000, so alpha = 0 is a very good approximation
    xi = AlgebraicReal.parse("poly=[-1,1000,0,1];interval=[0,1/100]")
    records = cubic_solutions_from_u(xi, Fraction(1, 2), 0)
    xs = [rec.x for rec in records]
    assert xs == [(0, 0, 1)] + [(0, k, sign) for k in range(1, 5) for sign in (-1, 1)]

    enumerated = {rec.x for rec in enumerate_solutions(cubic_system(xi, Fraction(1, 2)), 4).solutions}
    assert set(xs) <= enumerated
