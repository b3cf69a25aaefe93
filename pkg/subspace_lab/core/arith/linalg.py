# subspace_lab/core/arith/linalg.py

"""
Exact rational linear algebra on top of sympy's DomainMatrix.

``Subspace`` is the canonical representation of a linear subspace of Q^n:
the nonzero rows of the reduced row echelon form of any spanning set. Two
subspaces are equal exactly when their canonical rows are equal, which makes
them usable as dictionary keys and set members.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, List, Optional, Sequence, Tuple
import logging

from sympy import QQ, ZZ
from sympy.polys.domains import QQ_I
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import hermite_normal_form

from subspace_lab.core.arith.places import as_rational, rational_str
from subspace_lab.errors import PreconditionError

logger = logging.getLogger(__name__)

Vector = Tuple[Fraction, ...]


def to_qq(x: Fraction):
    return QQ(x.numerator, x.denominator)


def from_qq(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


def qq_matrix(rows: Sequence[Sequence], ncols: Optional[int] = None) -> DomainMatrix:
    rows = [[as_rational(e) for e in row] for row in rows]
    ncols = len(rows[0]) if rows else (ncols or 0)
    return DomainMatrix([[to_qq(e) for e in row] for row in rows], (len(rows), ncols), QQ)


def matrix_rows(m: DomainMatrix) -> List[Vector]:
    return [tuple(from_qq(e) for e in row) for row in m.to_list()]


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return qq_matrix(rows).rank()


def det(rows: Sequence[Sequence]) -> Fraction:
    """Exact determinant of a square rational matrix (rows are the vectors)."""
    if not rows:
        return Fraction(1)
    if any(len(r) != len(rows) for r in rows):
        raise PreconditionError("det needs a square matrix")
    return from_qq(qq_matrix(rows).det())


def gaussian_det(rows: Sequence[Sequence[Tuple[Fraction, Fraction]]]) -> Tuple[Fraction, Fraction]:
    """Determinant of a square matrix of Gaussian rationals given as (re, im) pairs."""
    n = len(rows)
    entries = [[QQ_I(to_qq(as_rational(re)), to_qq(as_rational(im))) for re, im in row] for row in rows]
    value = DomainMatrix(entries, (n, n), QQ_I).det()
    return from_qq(value.x), from_qq(value.y)


def _canonical_rows(rows: Sequence[Sequence], ambient: int) -> Tuple[Vector, ...]:
    if not rows:
        return ()
    reduced, pivots = qq_matrix(rows, ambient).rref()
    return tuple(tuple(from_qq(e) for e in row) for row in reduced.to_list()[: len(pivots)])


@dataclass(frozen=True)
class Subspace:
    ambient: int
    basis: Tuple[Vector, ...]

    # -- constructors -----------------------------------------------------

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient: Optional[int] = None) -> "Subspace":
        vectors = [tuple(as_rational(e) for e in v) for v in vectors]
        if ambient is None:
            if not vectors:
                raise PreconditionError("span of no vectors needs an explicit ambient dimension")
            ambient = len(vectors[0])
        if any(len(v) != ambient for v in vectors):
            raise PreconditionError(f"All vectors must have length {ambient}")
        return cls(ambient, _canonical_rows(vectors, ambient))

    @classmethod
    def zero(cls, ambient: int) -> "Subspace":
        return cls(ambient, ())

    @classmethod
    def full(cls, ambient: int) -> "Subspace":
        return cls(ambient, tuple(unit_vector(ambient, i) for i in range(ambient)))

    @classmethod
    def kernel(cls, equations: Sequence[Sequence], ambient: Optional[int] = None) -> "Subspace":
        """{x : e . x = 0 for every row e}."""
        equations = [tuple(as_rational(e) for e in row) for row in equations]
        if ambient is None:
            if not equations:
                raise PreconditionError("kernel of no equations needs an explicit ambient dimension")
            ambient = len(equations[0])
        if not equations or all(all(e == 0 for e in row) for row in equations):
            return cls.full(ambient)
        null = qq_matrix(equations, ambient).nullspace()
        return cls.span(matrix_rows(null), ambient)

    # -- queries ----------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def is_zero(self) -> bool:
        return self.dim == 0

    @property
    def is_full(self) -> bool:
        return self.dim == self.ambient

    @property
    def is_proper(self) -> bool:
        return self.dim < self.ambient

    def contains(self, vector: Sequence) -> bool:
        vector = tuple(as_rational(e) for e in vector)
        if all(e == 0 for e in vector):
            return True
        return rank(list(self.basis) + [vector]) == self.dim

    def __le__(self, other: "Subspace") -> bool:
        return all(other.contains(b) for b in self.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(list(self.basis) + list(other.basis), self.ambient)

    def annihilator(self) -> "Subspace":
        """{y : y . b = 0 for every basis vector b}."""
        if self.is_zero:
            return Subspace.full(self.ambient)
        return Subspace.kernel(self.basis, self.ambient)

    def __and__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if self.is_full:
            return other
        if other.is_full:
            return self
        return (self.annihilator() + other.annihilator()).annihilator()

    def _check(self, other: "Subspace"):
        if self.ambient != other.ambient:
            raise PreconditionError(f"Ambient dimensions differ: {self.ambient} vs {other.ambient}")

    def primitive_integer_basis(self) -> List[Tuple[int, ...]]:
        """Each canonical row scaled to a primitive integer vector."""
        return [primitive_integer(row) for row in self.basis]

    def to_text(self) -> List[List[str]]:
        return [[rational_str(e) for e in row] for row in self.basis]

    def __str__(self) -> str:
        if self.is_zero:
            return f"(0) in Q^{self.ambient}"
        return "span(" + ", ".join("(" + ", ".join(r) + ")" for r in self.to_text()) + ")"


def unit_vector(n: int, i: int) -> Vector:
    return tuple(Fraction(1) if j == i else Fraction(0) for j in range(n))


def primitive_integer(vector: Sequence[Fraction]) -> Tuple[int, ...]:
    vector = [as_rational(e) for e in vector]
    common = reduce(lcm, (e.denominator for e in vector), 1)
    ints = [int(e * common) for e in vector]
    g = reduce(gcd, (abs(i) for i in ints), 0)
    if g == 0:
        return tuple(ints)
    ints = [i // g for i in ints]
    first = next(i for i in ints if i != 0)
    return tuple(-i for i in ints) if first < 0 else tuple(ints)


def lattice_basis(points: Sequence[Sequence]) -> List[Vector]:
    """A Z-basis of the lattice generated by rational points (HNF of the cleared matrix)."""
    points = [[as_rational(e) for e in p] for p in points]
    n = len(points[0])
    common = reduce(lcm, (e.denominator for p in points for e in p), 1)
    # hermite_normal_form works on columns: columns of the result span the column lattice
    columns = DomainMatrix(
        [[ZZ(int(points[k][i] * common)) for k in range(len(points))] for i in range(n)],
        (n, len(points)),
        ZZ,
    )
    hnf = hermite_normal_form(columns).to_list()
    r = len(hnf[0]) if hnf else 0
    return [tuple(Fraction(int(hnf[i][j]), common) for i in range(n)) for j in range(r)]


def lll_reduce(basis: Sequence[Sequence[int]]) -> List[Tuple[int, ...]]:
    """LLL-reduced basis for independent integer rows."""
    if not basis:
        return []
    m = DomainMatrix([[ZZ(int(e)) for e in row] for row in basis], (len(basis), len(basis[0])), ZZ)
    return [tuple(int(e) for e in row) for row in m.lll().to_list()]


def solve_coordinates(basis: Sequence[Sequence], vector: Sequence) -> Vector:
    """Coordinates u with sum u_i * basis_i = vector for a square invertible basis."""
    m = qq_matrix(basis)
    inverse = m.inv()
    v = qq_matrix([vector])
    return matrix_rows(v * inverse)[0]
