# subspace_lab/core/arith/forms.py

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple, Union
import logging

from subspace_lab.config import precision_ladder, settings
from subspace_lab.core.arith.algebraic import AlgebraicReal
from subspace_lab.core.arith.enclosure import RealEnclosure
from subspace_lab.core.arith.field import Element, NumberField
from subspace_lab.core.arith.places import Place, abs_value, as_rational
from subspace_lab.errors import ConfigError, PreconditionError, UndecidedComparison

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LinearForm:
    """L = a_1 X_1 + ... + a_n X_n with coefficients in one number field."""

    coeffs: Tuple[Element, ...]

    @property
    def n(self) -> int:
        return len(self.coeffs)

    @classmethod
    def rational(cls, coeffs: Sequence, field: NumberField) -> "LinearForm":
        return cls(tuple(field.rational(c) for c in coeffs))

    @classmethod
    def from_values(cls, coeffs: Sequence[Union[AlgebraicReal, Fraction, int, str]], field: NumberField) -> "LinearForm":
        """Coefficients given as rationals or as the field's generator itself."""
        elements = []
        for c in coeffs:
            if isinstance(c, AlgebraicReal):
                if c.is_rational:
                    elements.append(field.rational(c.rational_value()))
                elif c == field.generator:
                    elements.append(field.parse("t"))
                else:
                    raise ConfigError(f"Coefficient {c.to_text()} is not the generator of {field.generator.to_text()}")
            else:
                elements.append(field.parse(c))
        return cls(tuple(elements))

    def is_rational(self, field: NumberField) -> bool:
        return all(field.is_rational(c) for c in self.coeffs)

    def value(self, field: NumberField, x: Sequence) -> Element:
        """L(x) as an exact field element."""
        total = field.zero()
        for a, xi in zip(self.coeffs, x):
            xi = as_rational(xi)
            if xi != 0:
                total = field.add(total, field.scale(a, xi))
        return total

    def to_text(self, field: NumberField) -> list:
        return [field.to_text(c) for c in self.coeffs]


def eval_linear_form(
    form: LinearForm,
    x: Sequence,
    place: Place,
    field: NumberField,
    target_width: Optional[Fraction] = None,
    cap: Optional[int] = None,
) -> RealEnclosure:
    """|L(x)|_v, exact whenever L(x) is rational, otherwise an enclosure at v = inf."""
    value = form.value(field, x)
    if field.is_rational(value):
        return RealEnclosure.exact(abs_value(value[0], place))
    if not place.is_infinite:
        raise PreconditionError(f"Form coefficients at the finite place {place} must be rational")
    target_width = Fraction(1, 2**settings.DEFAULT_PRECISION) if target_width is None else Fraction(target_width)
    enc = None
    for bits in precision_ladder(cap):
        enc = abs(field.enclose(value, bits))
        if enc.width <= target_width:
            return enc
    raise UndecidedComparison(f"|L(x)| to width {target_width} for x={list(x)}", cap or settings.PRECISION_CAP)


def forms_determinant(forms: Sequence[LinearForm], field: NumberField) -> Element:
    """det(L_1, ..., L_n) as an exact field element (Laplace expansion over the field)."""
    rows = [list(f.coeffs) for f in forms]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise PreconditionError("det needs n forms in n variables")
    return _det(field, rows)


def _det(field: NumberField, rows) -> Element:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = field.zero()
    for j in range(n):
        if all(c == 0 for c in rows[0][j]):
            continue
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        term = field.mul(rows[0][j], _det(field, minor))
        total = field.add(total, term if j % 2 == 0 else field.scale(term, -1))
    return total
