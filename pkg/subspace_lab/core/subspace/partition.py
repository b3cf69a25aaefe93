# subspace_lab/core/subspace/partition.py

"""
Partition of C^n into classes with small determinants.

Every y != 0 is written as lambda * z with |lambda| = ||y|| (max-norm),
z_i = 1 at the first index i where |y_i| is maximal, and |z_j| < 1 for j < i.
The class of y is i together with the subcube of [-1, 1]^(2n-2) holding the
real and imaginary parts w of the other coordinates of z. With subcubes of
side at most (sqrt(2) K)^-1 and K = (M n^(n/2))^(1/(n-1)), any n vectors of
one class satisfy

    |det(y_1, ..., y_n)| <= M^-1 ||y_1|| ... ||y_n||.

M may be irrational (e.g. (9/2)^(n/2)), so the grid is parametrised by the
rational M^2. K is replaced by a dyadic K_hat >= K, which only shrinks the
subcubes. Boxes are half-open per axis, except the last one on each axis,
which also holds w = 1.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import floor, isqrt
from typing import Callable, List, Optional, Sequence, Tuple
import logging

from subspace_lab.core.arith.enclosure import (
    RealEnclosure,
    certified_sign,
    dyadic_round_up,
    floor_certified,
    rational_power,
)
from subspace_lab.core.arith.linalg import gaussian_det
from subspace_lab.core.arith.places import as_rational, rational_str
from subspace_lab.errors import PreconditionError

logger = logging.getLogger(__name__)

Complex = Tuple[Fraction, Fraction]
GRID_BITS = 32


@dataclass(frozen=True)
class PartitionClass:
    max_index: int  # 1-based
    cube_coords: Tuple[int, ...]
    M_squared: Fraction
    n: int

    def label(self) -> str:
        return f"({self.max_index}, [{', '.join(str(k) for k in self.cube_coords)}])"


def _modulus_squared(c: Complex) -> Fraction:
    return c[0] * c[0] + c[1] * c[1]


def _divide(a: Complex, b: Complex) -> Complex:
    """a / b for Gaussian rationals."""
    norm = _modulus_squared(b)
    return ((a[0] * b[0] + a[1] * b[1]) / norm, (a[1] * b[0] - a[0] * b[1]) / norm)


def as_complex_vector(y: Sequence) -> Tuple[Complex, ...]:
    """Accepts rationals (real vectors) or (re, im) pairs."""
    out = []
    for c in y:
        if isinstance(c, (tuple, list)):
            out.append((as_rational(c[0]), as_rational(c[1])))
        else:
            out.append((as_rational(c), Fraction(0)))
    return tuple(out)


@dataclass(frozen=True)
class PartitionGrid:
    """The rounded grid for dimension n and parameter M (given as M^2)."""

    n: int
    M_squared: Fraction

    def __post_init__(self):
        object.__setattr__(self, "M_squared", as_rational(self.M_squared))
        if self.n < 2:
            raise PreconditionError(f"Partition needs n >= 2, got {self.n}")
        if self.M_squared < 1:
            raise PreconditionError(f"Partition needs M >= 1, got M^2 = {rational_str(self.M_squared)}")

    @classmethod
    def from_M(cls, n: int, M) -> "PartitionGrid":
        M = as_rational(M)
        return cls(n, M * M)

    @cached_property
    def K_power(self) -> Fraction:
        """K^(2(n-1)) = M^2 n^n, exact."""
        return self.M_squared * Fraction(self.n) ** self.n

    @cached_property
    def K_hat(self) -> Fraction:
        """A dyadic rational >= K."""
        exponent = Fraction(1, 2 * (self.n - 1))
        k_hat = dyadic_round_up(rational_power(self.K_power, exponent, GRID_BITS + 16).upper, GRID_BITS)
        if k_hat ** (2 * (self.n - 1)) < self.K_power:
            raise PreconditionError("rounded grid constant fell below K")
        return k_hat

    @cached_property
    def axis_count(self) -> int:
        """Smallest N with 2/N <= (sqrt(2) K_hat)^-1, i.e. N^2 >= 8 K_hat^2."""
        target = 8 * self.K_hat * self.K_hat
        N = isqrt(floor(target)) + 1
        while (N - 1) > 0 and (N - 1) ** 2 >= target:
            N -= 1
        return N

    @property
    def side(self) -> Fraction:
        return Fraction(2, self.axis_count)

    @property
    def class_count(self) -> int:
        return self.n * self.axis_count ** (2 * self.n - 2)

    def axis_index(self, w: Fraction) -> int:
        N = self.axis_count
        return min(N - 1, floor((w + 1) * N / 2))

    def _class(self, i: int, w: Sequence[Fraction]) -> PartitionClass:
        return PartitionClass(i, tuple(self.axis_index(c) for c in w), self.M_squared, self.n)

    def assign(self, y: Sequence) -> PartitionClass:
        """Class of an exact complex rational vector."""
        y = as_complex_vector(y)
        if len(y) != self.n:
            raise PreconditionError(f"Expected a vector of length {self.n}")
        moduli = [_modulus_squared(c) for c in y]
        top = max(moduli)
        if top == 0:
            return self._class(1, [Fraction(0)] * (2 * self.n - 2))
        i = moduli.index(top)
        w: List[Fraction] = []
        for j, c in enumerate(y):
            if j == i:
                continue
            z = _divide(c, y[i])
            w.extend(z)
        return self._class(i + 1, w)

    def assign_enclosed(
        self,
        nonzero: Sequence[bool],
        ratio: Callable[[int, int, int], RealEnclosure],
        cap: Optional[int] = None,
    ) -> PartitionClass:
        """Class of a real vector known through certified ratios.

        ``ratio(j, k, bits)`` encloses y_j / y_k (called only for nonzero y_k);
        ``nonzero[j]`` tells whether y_j is exactly zero.
        """
        n = self.n
        if not any(nonzero):
            return self._class(1, [Fraction(0)] * (2 * n - 2))
        best = nonzero.index(True)
        for j in range(best + 1, n):
            if not nonzero[j]:
                continue
            # |y_j| > |y_best|  <=>  |y_j / y_best| > 1
            s = certified_sign(lambda bits, j=j, b=best: abs(ratio(j, b, bits)) - 1, f"|y_{j}| vs |y_{best}|", cap)
            if s > 0:
                best = j
        w_indices: List[int] = []
        middle = self.axis_index(Fraction(0))
        N = self.axis_count
        for j in range(n):
            if j == best:
                continue
            if not nonzero[j]:
                w_indices.extend([middle, middle])
                continue

            def scaled(bits: int, j=j) -> RealEnclosure:
                return (ratio(j, best, bits) + 1) * Fraction(N, 2)

            k = floor_certified(scaled, f"axis index of y_{j}/y_{best}", cap)
            w_indices.extend([min(N - 1, k), middle])
        return PartitionClass(best + 1, tuple(w_indices), self.M_squared, n)


def partition_assign(y: Sequence, M_squared) -> PartitionClass:
    return PartitionGrid(len(y), M_squared).assign(y)


# ---------------------------------------------------------------------------
# determinant check

@dataclass(frozen=True)
class DeterminantCheck:
    det_abs_squared: Fraction
    bound_squared: Fraction  # M^-2 prod ||y_k||^2
    holds: bool


def verify_class_determinant(samples: Sequence[Sequence], M_squared) -> DeterminantCheck:
    """|det(y_1..y_n)|^2 <= M^-2 prod ||y_k||^2 for n vectors of one class, exactly."""
    M_squared = as_rational(M_squared)
    vectors = [as_complex_vector(y) for y in samples]
    n = len(vectors)
    if n == 0 or any(len(v) != n for v in vectors):
        raise PreconditionError("verify_class_determinant needs n vectors of length n")
    grid = PartitionGrid(n, M_squared)
    classes = {grid.assign(v) for v in vectors}
    if len(classes) != 1:
        raise PreconditionError(f"Samples fall into {len(classes)} different classes")
    re, im = gaussian_det(vectors)
    det_sq = re * re + im * im
    bound = Fraction(1) / M_squared
    for v in vectors:
        bound *= max(_modulus_squared(c) for c in v)
    holds = det_sq <= bound
    if not holds:
        logger.error(f"Determinant bound fails in class {classes.pop().label()}: {det_sq} > {bound}")
    return DeterminantCheck(det_sq, bound, holds)


def same_class_tuples(vectors: Sequence[Sequence], M_squared, limit: Optional[int] = None) -> List[Tuple[int, ...]]:
    """Index n-tuples of vectors sharing a class, grouped class by class."""
    vectors = [as_complex_vector(v) for v in vectors]
    if not vectors:
        return []
    grid = PartitionGrid(len(vectors[0]), M_squared)
    groups = {}
    for idx, v in enumerate(vectors):
        groups.setdefault(grid.assign(v), []).append(idx)
    out: List[Tuple[int, ...]] = []
    for members in groups.values():
        for combo in combinations(members, grid.n):
            out.append(combo)
            if limit is not None and len(out) >= limit:
                return out
    return out


# ---------------------------------------------------------------------------
# class counts

@dataclass(frozen=True)
class ClassCountBound:
    general_bound: Fraction  # (20n)^n M^2
    small_solution_bound: int  # (90n)^(nd)
    rational_bound: int  # 200^n
    actual_grid_count: int


def class_count_bound(n: int, M_squared, d: int = 1) -> ClassCountBound:
    if n < 2 or d < 1:
        raise PreconditionError("class_count_bound needs n >= 2 and d >= 1")
    grid = PartitionGrid(n, M_squared)
    return ClassCountBound(
        general_bound=Fraction(20 * n) ** n * grid.M_squared,
        small_solution_bound=(90 * n) ** (n * d),
        rational_bound=200**n,
        actual_grid_count=grid.class_count,
    )
