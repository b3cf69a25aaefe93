# subspace_lab/core/arith/field.py

"""
The number field Q(theta) generated by one real algebraic number theta.

Elements are tuples of ``d`` rationals, the coordinates in the power basis
1, theta, ..., theta^(d-1). Linear algebra over Q(theta) is done by
restriction of scalars: an element acts on Q^d by its multiplication matrix,
so a subspace of Q(theta)^n is handled as a theta-stable subspace of Q^(nd)
and every rank, sum and intersection stays an exact computation over Q.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple
import logging

from sympy import Poly, QQ, Symbol
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from subspace_lab.core.arith.algebraic import AlgebraicReal
from subspace_lab.core.arith.enclosure import RealEnclosure
from subspace_lab.core.arith.linalg import Subspace, from_qq, rank, to_qq
from subspace_lab.core.arith.places import as_rational, rational_str
from subspace_lab.errors import ConfigError

logger = logging.getLogger(__name__)

Element = Tuple[Fraction, ...]
GENERATOR_SYMBOL = "t"
_T = Symbol(GENERATOR_SYMBOL)


@lru_cache(maxsize=None)
def _modulus(coeffs: Tuple[int, ...]) -> Poly:
    return Poly(list(reversed(coeffs)), _T, domain=QQ)


@dataclass(frozen=True)
class NumberField:
    generator: AlgebraicReal

    @classmethod
    def rationals(cls) -> "NumberField":
        return cls(AlgebraicReal.from_rational(0))

    @property
    def degree(self) -> int:
        return self.generator.degree

    @property
    def is_rational_field(self) -> bool:
        return self.degree == 1

    # -- elements ---------------------------------------------------------

    def zero(self) -> Element:
        return tuple(Fraction(0) for _ in range(self.degree))

    def rational(self, q) -> Element:
        return (as_rational(q),) + tuple(Fraction(0) for _ in range(self.degree - 1))

    def is_rational(self, e: Element) -> bool:
        return all(c == 0 for c in e[1:])

    def rational_part(self, e: Element) -> Fraction:
        return e[0]

    def _to_poly(self, e: Element) -> Poly:
        return Poly([to_qq(c) for c in reversed(e)], _T, domain=QQ)

    def _from_poly(self, p: Poly) -> Element:
        coeffs = [from_qq(c) for c in reversed(p.rem(_modulus(self.generator.coeffs)).all_coeffs())]
        coeffs += [Fraction(0)] * (self.degree - len(coeffs))
        return tuple(coeffs[: self.degree])

    def add(self, a: Element, b: Element) -> Element:
        return tuple(x + y for x, y in zip(a, b))

    def scale(self, a: Element, q) -> Element:
        q = as_rational(q)
        return tuple(q * x for x in a)

    def mul(self, a: Element, b: Element) -> Element:
        if self.degree == 1:
            return (a[0] * b[0],)
        return self._from_poly(self._to_poly(a) * self._to_poly(b))

    def parse(self, text) -> Element:
        """Parse a polynomial expression in ``t`` (the generator) with rational coefficients."""
        if isinstance(text, (int, Fraction)):
            return self.rational(text)
        text = str(text).strip()
        try:
            return self.rational(Fraction(text))
        except (ValueError, ZeroDivisionError):
            pass
        if self.degree == 1:
            raise ConfigError(f"Coefficient {text!r} uses the generator, but the system declares none")
        try:
            expr = parse_expr(
                text,
                local_dict={GENERATOR_SYMBOL: _T},
                transformations=standard_transformations + (convert_xor,),
            )
            poly = Poly(expr, _T, domain=QQ)
        except Exception as e:
            raise ConfigError(f"Could not parse coefficient {text!r} as a polynomial in {GENERATOR_SYMBOL}") from e
        return self._from_poly(poly)

    def to_text(self, e: Element) -> str:
        terms = []
        for k, c in enumerate(e):
            if c == 0:
                continue
            if k == 0:
                terms.append(rational_str(c))
            else:
                power = GENERATOR_SYMBOL if k == 1 else f"{GENERATOR_SYMBOL}^{k}"
                terms.append(power if c == 1 else f"{rational_str(c)}*{power}")
        return " + ".join(terms) if terms else "0"

    # -- real embedding ---------------------------------------------------

    def power_enclosures(self, bits: int) -> List[RealEnclosure]:
        return _power_enclosures(self.generator, bits)

    def enclose(self, e: Element, bits: int) -> RealEnclosure:
        if self.is_rational(e):
            return RealEnclosure.exact(e[0], bits)
        powers = self.power_enclosures(bits)
        total = RealEnclosure.exact(e[0], bits)
        for c, p in zip(e[1:], powers[1:]):
            if c != 0:
                total = total + p * c
        return total

    # -- restriction of scalars -------------------------------------------

    def multiplication_matrix(self, e: Element) -> List[List[Fraction]]:
        """Rows k: coordinates of e * theta^k, so that coords(e*y) = coords(y) @ M."""
        if self.degree == 1:
            return [[e[0]]]
        return [list(m) for m in _mult_rows(self, e)]

    def expand_matrix(self, rows: Sequence[Sequence[Element]]) -> List[List[Fraction]]:
        """The rational (r*d) x (c*d) matrix of an r x c matrix over the field.

        Row-vector convention: an F-row vector y (length r) maps to y @ A, and
        on coordinates this is coords(y) @ expand(A).
        """
        d = self.degree
        out: List[List[Fraction]] = []
        for row in rows:
            blocks = [self.multiplication_matrix(e) for e in row]
            for k in range(d):
                out.append([blocks[j][k][m] for j in range(len(row)) for m in range(d)])
        return out

    def rank(self, rows: Sequence[Sequence[Element]]) -> int:
        """Rank over the field of a matrix with entries in the field."""
        if not rows:
            return 0
        if self.degree == 1:
            return rank([[e[0] for e in row] for row in rows])
        return rank(self.expand_matrix(rows)) // self.degree

    def kernel_of_forms(self, forms: Sequence[Sequence[Element]], n: int) -> Subspace:
        """{x in F^n : M(x) = 0 for each form M}, as a theta-stable subspace of Q^(nd).

        A form's coefficients (a_1..a_n) define x -> sum a_j x_j. On coordinates
        the map sends the block vector (coords(x_1), ..., coords(x_n)) to
        sum_j coords(x_j) @ mult(a_j).
        """
        d = self.degree
        equations: List[List[Fraction]] = []
        for form in forms:
            blocks = [self.multiplication_matrix(a) for a in form]
            # one equation per output coordinate m
            for m in range(d):
                equations.append([blocks[j][k][m] for j in range(n) for k in range(d)])
        return Subspace.kernel(equations, n * d)

    def extend_rational(self, U: Subspace) -> Subspace:
        """U (subspace of Q^n) tensored up to F, as a subspace of Q^(nd)."""
        d = self.degree
        if d == 1:
            return U
        vectors = []
        for b in U.basis:
            for k in range(d):
                vec = [Fraction(0)] * (U.ambient * d)
                for j, c in enumerate(b):
                    element = tuple(Fraction(0) for _ in range(d))
                    if c != 0:
                        element = self.mul(self.rational(c), _unit(d, k))
                    vec[j * d : (j + 1) * d] = element
                vectors.append(vec)
        return Subspace.span(vectors, U.ambient * d) if vectors else Subspace.zero(U.ambient * d)

    def rational_part_of(self, W: Subspace, n: int) -> Subspace:
        """W intersected with Q^n (vectors whose coordinates all lie in Q)."""
        d = self.degree
        if d == 1:
            return W
        rational_slice = Subspace.span(
            [[Fraction(1) if idx == j * d else Fraction(0) for idx in range(n * d)] for j in range(n)],
            n * d,
        )
        meet = W & rational_slice
        return Subspace.span([[row[j * d] for j in range(n)] for row in meet.basis], n) if meet.basis else Subspace.zero(n)

    def is_defined_over_rationals(self, W: Subspace, n: int) -> bool:
        """W = (W cap Q^n) tensor F, i.e. W is spanned by rational vectors."""
        rational = self.rational_part_of(W, n)
        return rational.dim * self.degree == W.dim


def _unit(d: int, k: int) -> Element:
    return tuple(Fraction(1) if i == k else Fraction(0) for i in range(d))


@lru_cache(maxsize=4096)
def _mult_rows(field: NumberField, e: Element) -> Tuple[Tuple[Fraction, ...], ...]:
    return tuple(field.mul(e, _unit(field.degree, k)) for k in range(field.degree))


@lru_cache(maxsize=512)
def _power_enclosures(generator: AlgebraicReal, bits: int) -> List[RealEnclosure]:
    theta = generator.enclosure(bits + 8)
    powers = [RealEnclosure.exact(1, bits)]
    for _ in range(1, generator.degree):
        powers.append(powers[-1] * theta)
    return powers
