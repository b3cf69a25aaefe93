# tests/test_arith.py

import random
from fractions import Fraction

import pytest

from subspace_lab.config import Settings, precision_ladder
from subspace_lab.core.arith.algebraic import (
    AlgebraicReal,
    continued_fraction,
    convergents,
    height_algebraic,
)
from subspace_lab.core.arith.enclosure import (
    RealEnclosure,
    certified_le,
    floor_certified,
    rational_power,
)
from subspace_lab.core.arith.field import NumberField
from subspace_lab.core.arith.forms import LinearForm, eval_linear_form, forms_determinant
from subspace_lab.core.arith.linalg import Subspace, det, lattice_basis
from subspace_lab.core.arith.places import (
    INFINITY,
    Place,
    abs_value,
    as_rational,
    height_rational,
    height_vector,
    ord_p,
    product_formula_check,
)
from subspace_lab.core.arith.powers import compare_power
from subspace_lab.errors import ConfigError, PreconditionError, UndecidedComparison


def test_product_formula_on_random_rationals():
    rng = random.Random(1729)
    for _ in range(2000):
        num = rng.randint(-10**6, 10**6) or 1
        den = rng.randint(1, 10**6)
        assert product_formula_check(Fraction(num, den)) == 1


def test_product_formula_rejects_zero():
    with pytest.raises(PreconditionError):
        product_formula_check(0)


def test_valuations_and_absolute_values():
    assert ord_p(Fraction(12, 5), 2) == 2
    assert ord_p(Fraction(12, 5), 5) == -1
    assert abs_value(Fraction(12), Place(2)) == Fraction(1, 4)
    assert abs_value(Fraction(-3, 4), INFINITY) == Fraction(3, 4)
    assert abs_value(0, Place(3)) == 0


def test_place_parsing():
    assert Place.parse("inf") == INFINITY
    assert Place.parse("7") == Place(7)
    with pytest.raises(ConfigError):
        Place.parse("4")


def test_heights():
    assert height_rational(Fraction(-3, 7)) == 7
    assert height_vector([Fraction(1, 2), Fraction(1, 3)]) == 6
    assert height_vector([3, -5, 1]) == 5


def test_as_rational_refuses_floats():
    assert as_rational("3/4") == Fraction(3, 4)
    with pytest.raises(ConfigError):
        as_rational(0.5)


def test_algebraic_parse_round_trip(cbrt2):
    assert AlgebraicReal.parse(cbrt2.to_text()) == cbrt2
    assert cbrt2.degree == 3


@pytest.mark.parametrize(
    "text",
    [
        "poly=[-2,0,1]",  # missing interval
        "poly=[-4,0,1];interval=[1,3]",  # reducible
        "poly=[-2,0,1];interval=[-2,2]",  # two roots
    ],
)
def test_algebraic_parse_errors(text):
    with pytest.raises(ConfigError):
        AlgebraicReal.parse(text)


def test_refine_width(sqrt2):
    lo, hi = sqrt2.refine(64)
    assert hi - lo <= Fraction(1, 2**64)
    assert lo * lo <= 2 <= hi * hi


def test_compare(sqrt2):
    assert sqrt2.compare(Fraction(7, 5)) == 1
    assert sqrt2.compare(Fraction(3, 2)) == -1


def test_continued_fractions(sqrt2, golden, cbrt2):
    assert continued_fraction(sqrt2, 6) == [1, 2, 2, 2, 2, 2]
    assert continued_fraction(golden, 6) == [1] * 6
    assert continued_fraction(cbrt2, 4) == [1, 3, 1, 5]
    assert list(convergents([1, 2, 2])) == [Fraction(1), Fraction(3, 2), Fraction(7, 5)]


def test_rational_continued_fraction_terminates():
    assert continued_fraction(AlgebraicReal.from_rational(Fraction(7, 5)), 10) == [1, 2, 2]


def test_height_algebraic(sqrt2):
    enc = height_algebraic(sqrt2)
    assert enc.lower ** 2 <= 2 <= enc.upper ** 2
    assert height_algebraic(AlgebraicReal.from_rational(Fraction(3, 7))) == RealEnclosure.exact(7)


def test_compare_power_exact_cases():
    assert compare_power(4, Fraction(1, 2), 2) == 0
    assert compare_power(8, Fraction(2, 3), 4) == 0
    assert compare_power(2, Fraction(1, 2), Fraction(3, 2)) == -1
    assert compare_power(3, 12, 531441) == 0
    assert compare_power(3, 12, 531440) == 1


def test_certified_le_raises_at_cap():
    straddling = lambda bits: RealEnclosure(Fraction(-1), Fraction(1), bits)
    with pytest.raises(UndecidedComparison):
        certified_le(straddling, "never settles", cap=128)


def test_floor_certified_with_exact_tie():
    fn = lambda bits: RealEnclosure(2 - Fraction(1, 2**bits), 2 + Fraction(1, 2**bits), bits)
    assert floor_certified(fn, "two", cap=256, is_exactly=lambda k: k == 2) == 2


def test_rational_power_encloses():
    enc = rational_power(2, Fraction(1, 2), 128)
    assert enc.lower ** 2 <= 2 <= enc.upper ** 2
    assert rational_power(3, -2, 64) == RealEnclosure.exact(Fraction(1, 9), 64)


def test_enclosure_arithmetic():
    a = RealEnclosure(Fraction(1), Fraction(2))
    b = RealEnclosure(Fraction(-1), Fraction(3))
    assert (a * b).lower == -2 and (a * b).upper == 6
    assert abs(b).lower == 0
    assert (a - a).contains(0)
    with pytest.raises(PreconditionError):
        b.reciprocal()


def test_subspace_operations():
    plane_a = Subspace.kernel([[1, 0, 0]], 3)
    plane_b = Subspace.kernel([[0, 1, 0]], 3)
    line = plane_a & plane_b
    assert line == Subspace.span([[0, 0, 5]])
    assert (plane_a + plane_b).is_full
    assert plane_a.contains([0, 3, -1])
    assert not plane_a.contains([1, 0, 0])
    assert line.annihilator() == Subspace.span([[1, 0, 0], [0, 1, 0]])
    assert Subspace.span([[2, 4, 6]]).primitive_integer_basis() == [(1, 2, 3)]


def test_lattice_basis_determinant():
    basis = lattice_basis([[2, 0], [0, 2], [1, 1]])
    assert abs(det(basis)) == 2


def test_number_field_arithmetic(cbrt2):
    field = NumberField(cbrt2)
    assert field.mul(field.parse("t^2"), field.parse("t")) == field.rational(2)
    assert not field.enclose(field.parse("t"), 64).contains(Fraction(126, 100))
    assert field.enclose(field.parse("t"), 64).lower > Fraction(1259, 1000)


def test_forms(cbrt2):
    field = NumberField(cbrt2)
    forms = [
        LinearForm((field.rational(1), field.parse("t"), field.parse("t^2"))),
        LinearForm.rational([0, 1, 0], field),
        LinearForm.rational([0, 0, 1], field),
    ]
    assert forms_determinant(forms, field) == field.rational(1)
    assert eval_linear_form(forms[1], [5, -3, 2], INFINITY, field) == RealEnclosure.exact(3)
    enc = eval_linear_form(forms[0], [1, 1, -1], INFINITY, field)
    assert not enc.is_exact
    assert enc.width <= Fraction(1, 2**64)


def test_settings_env_override(monkeypatch):
    monkeypatch.setenv("SUBSPACE_LAB_PRECISION_CAP", "512")
    assert Settings().PRECISION_CAP == 512


def test_precision_ladder():
    assert list(precision_ladder(256, 64)) == [64, 128, 256]
    assert list(precision_ladder(100, 64)) == [64, 100]


def test_kernel_of_no_equations():
    assert Subspace.kernel([], 3) == Subspace.full(3)
    assert Subspace.kernel([[0, 0]]).is_full
    with pytest.raises(PreconditionError):
        Subspace.kernel([])
