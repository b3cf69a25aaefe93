# subspace_lab/core/subspace/lattice.py

"""
Covering point sets by proper subspaces when all n x n determinants are small.

Given T in Q^n with |det(x_1..x_n)|_v <= D_v for every place v, T lies in
the lattice M = intersection of the local modules M_v. At each finite v of
S an n-tuple of T maximizing |det|_v is chosen; by Cramer's rule every point
has v-integral coordinates in it, so its Z_v-span is M_v. The Z-span of T
localizes to exactly these modules (same |det|_v as the tuple) and is used
as M. Its determinant, the gcd of the n x n minors, equals
prod_v max|det|_v^-1. Pulling T back through a basis of M gives integer points whose determinants
are bounded by D = prod D_v, and those are covered greedily by hyperplanes.
The cover size is compared with 100^n D^(1/(n-1)).
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import combinations
from typing import Dict, List, Sequence, Tuple
import logging

from sympy import factorint

from subspace_lab.core.arith.linalg import Subspace, det, lattice_basis, solve_coordinates
from subspace_lab.core.arith.places import INFINITY, Place, abs_value, as_rational, ord_p, rational_str
from subspace_lab.errors import InvariantViolation, PreconditionError

logger = logging.getLogger(__name__)

EXHAUSTIVE_NODE_BUDGET = 2_000_000


@dataclass(frozen=True)
class CoverResult:
    cover: List[Subspace]
    bound_power: Fraction  # (100^n)^(n-1) * D, compared with |cover|^(n-1)
    D: Fraction
    lattice_basis: List[Tuple[Fraction, ...]] = field(default_factory=list)
    pulled_back: List[Tuple[int, ...]] = field(default_factory=list)
    within_bound: bool = True
    local_tuples: Dict[str, Tuple[int, ...]] = field(default_factory=dict)  # place -> indices spanning M_v

    @property
    def size(self) -> int:
        return len(self.cover)


def _as_points(points: Sequence[Sequence]) -> List[Tuple[Fraction, ...]]:
    out = [tuple(as_rational(c) for c in p) for p in points]
    if not out:
        raise PreconditionError("subspace_cover needs at least one point")
    n = len(out[0])
    if n < 2 or any(len(p) != n for p in out):
        raise PreconditionError("points must share one dimension n >= 2")
    return out


def _parse_places(D_v: Dict) -> Dict[Place, Fraction]:
    parsed = {}
    for key, value in D_v.items():
        place = key if isinstance(key, Place) else Place.parse(key)
        value = as_rational(value)
        if value <= 0:
            raise PreconditionError(f"D_{place} must be positive, got {rational_str(value)}")
        parsed[place] = value
    return parsed


def check_determinant_condition(points: Sequence[Sequence], D_v: Dict) -> List[str]:
    """Tuples breaking |det|_v <= D_v (places not listed have D_v = 1)."""
    points = _as_points(points)
    D_v = _parse_places(D_v)
    n = len(points[0])
    failures = []
    for combo in combinations(range(len(points)), n):
        value = det([points[i] for i in combo])
        if value == 0:
            continue
        primes = set(D_v) - {INFINITY}
        for part in (value.numerator, value.denominator):
            primes |= {Place(p) for p in _prime_factors(abs(part))}
        for place in primes | {INFINITY}:
            bound = D_v.get(place, Fraction(1))
            if abs_value(value, place) > bound:
                failures.append(f"points {list(combo)}: |det|_{place} = {rational_str(abs_value(value, place))} > {rational_str(bound)}")
    return failures


def _prime_factors(k: int) -> List[int]:
    return list(factorint(k)) if k > 1 else []


def _covering_bound(n: int, D: Fraction) -> Fraction:
    """(100^n D^(1/(n-1)))^(n-1)."""
    return Fraction(100) ** (n * (n - 1)) * D


def _within(size: int, n: int, D: Fraction) -> bool:
    return Fraction(size) ** (n - 1) <= _covering_bound(n, D)


def _spanned_hyperplanes(points: Sequence[Tuple[Fraction, ...]]) -> Dict[int, Subspace]:
    """Hyperplanes spanned by n-1 of the points, keyed by the bitmask of points they contain."""
    n = len(points[0])
    planes: Dict[int, Subspace] = {}
    seen = set()
    for combo in combinations(range(len(points)), n - 1):
        plane = Subspace.span([points[i] for i in combo], n)
        if plane.dim != n - 1 or plane in seen:
            continue
        seen.add(plane)
        normal = plane.annihilator().basis[0]
        mask = 0
        for idx, p in enumerate(points):
            if sum(a * b for a, b in zip(normal, p)) == 0:
                mask |= 1 << idx
        planes[mask] = plane
    return planes


def greedy_hyperplane_cover(points: Sequence[Sequence]) -> List[Subspace]:
    """Repeatedly take the hyperplane through the most uncovered points."""
    points = [tuple(as_rational(c) for c in p) for p in points]
    n = len(points[0])
    points = [p for p in points if any(c != 0 for c in p)]
    if not points:
        return [Subspace.zero(n)]
    planes = _spanned_hyperplanes(points)
    uncovered = (1 << len(points)) - 1
    cover: List[Subspace] = []
    while uncovered:
        remaining = [p for i, p in enumerate(points) if uncovered >> i & 1]
        span = Subspace.span(remaining, n)
        if span.is_proper:
            cover.append(span)
            break
        mask = max(planes, key=lambda m: (bin(m & uncovered).count("1"), -m))
        cover.append(planes[mask])
        uncovered &= ~mask
    return cover


def subspace_cover(points: Sequence[Sequence], D_v: Dict) -> CoverResult:
    """Cover T by proper subspaces via the lattice pullback; |cover| <= 100^n D^(1/(n-1))."""
    points = _as_points(points)
    D_places = _parse_places(D_v)
    n = len(points[0])
    D = reduce(lambda a, b: a * b, D_places.values(), Fraction(1))
    failures = check_determinant_condition(points, D_places)
    if failures:
        raise PreconditionError(f"{len(failures)} determinant conditions fail, first: {failures[0]}")

    span = Subspace.span(points, n)
    if span.is_proper:
        logger.info(f"Points span a proper subspace of dimension {span.dim}; cover has one member")
        return CoverResult([span], _covering_bound(n, D), D, within_bound=_within(1, n, D))

    local_tuples = {
        str(place): _local_module(points, place) for place in sorted(D_places, key=Place.sort_key) if not place.is_infinite
    }

    basis = lattice_basis(points)
    if len(basis) != n:
        raise InvariantViolation(f"lattice of full-rank points has rank {len(basis)}")
    delta = abs(det(basis))
    expected = _determinant_gcd(points)
    if delta != expected:
        raise InvariantViolation(f"lattice determinant {delta} differs from the gcd of the minors {expected}")
    for name, combo in local_tuples.items():
        place = Place.parse(name)
        local = abs_value(det([points[i] for i in combo]), place)
        if abs_value(delta, place) != local:
            raise InvariantViolation(f"Z-span of the points is not M_{place}: |det|_{place} {abs_value(delta, place)} vs {local}")

    pulled: List[Tuple[int, ...]] = []
    for p in points:
        coords = solve_coordinates(basis, p)
        if any(c.denominator != 1 for c in coords):
            raise InvariantViolation(f"point {[rational_str(c) for c in p]} is not in the lattice")
        pulled.append(tuple(int(c) for c in coords))

    integer_cover = greedy_hyperplane_cover(pulled)
    cover = [_push_forward(U, basis) for U in integer_cover]
    within = _within(len(cover), n, D)
    if not within:
        logger.error(f"Cover of size {len(cover)} exceeds 100^{n} D^(1/{n - 1}) with D = {rational_str(D)}")
    logger.info(f"Covered {len(points)} points by {len(cover)} proper subspaces (lattice determinant {rational_str(delta)})")
    return CoverResult(cover, _covering_bound(n, D), D, list(basis), pulled, within, local_tuples)


def _local_module(points: Sequence[Tuple[Fraction, ...]], place: Place) -> Tuple[int, ...]:
    """Indices of an n-tuple maximizing |det|_v; every point is v-integral in it."""
    n = len(points[0])
    best, best_value = None, Fraction(0)
    for combo in combinations(range(len(points)), n):
        value = abs_value(det([points[i] for i in combo]), place)
        if value > best_value:
            best, best_value = combo, value
    tuple_basis = [points[i] for i in best]
    for p in points:
        coords = solve_coordinates(tuple_basis, p)
        if any(abs_value(c, place) > 1 for c in coords if c != 0):
            raise InvariantViolation(f"point {[rational_str(c) for c in p]} is not {place}-integral in tuple {list(best)}")
    logger.debug(f"M_{place} spanned by points {list(best)} with |det|_{place} = {rational_str(best_value)}")
    return best


def _push_forward(U: Subspace, basis: Sequence[Sequence[Fraction]]) -> Subspace:
    """phi(U) for phi(u) = sum u_i z_i."""
    n = len(basis)
    if U.is_zero:
        return Subspace.zero(n)
    images = [tuple(sum((u[i] * basis[i][k] for i in range(n)), Fraction(0)) for k in range(n)) for u in U.basis]
    return Subspace.span(images, n)


def _determinant_gcd(points: Sequence[Sequence[Fraction]]) -> Fraction:
    """gcd of all n x n minors as a positive rational: prod_p p^(min ord_p)."""
    n = len(points[0])
    values = [abs(det([points[i] for i in combo])) for combo in combinations(range(len(points)), n)]
    values = [v for v in values if v != 0]
    primes = set()
    for v in values:
        primes.update(_prime_factors(v.numerator))
        primes.update(_prime_factors(v.denominator))
    result = Fraction(1)
    for p in primes:
        result *= Fraction(p) ** min(ord_p(v, p) for v in values)
    return result


# ---------------------------------------------------------------------------
# exhaustive oracle

def exhaustive_min_cover(points: Sequence[Sequence], node_budget: int = EXHAUSTIVE_NODE_BUDGET) -> int:
    """Exact minimum number of proper subspaces covering the points (small instances only)."""
    points = [tuple(as_rational(c) for c in p) for p in points]
    points = [p for p in points if any(c != 0 for c in p)]
    if not points:
        return 1
    n = len(points[0])
    if Subspace.span(points, n).is_proper:
        return 1
    # every proper subspace lies in a hyperplane; hyperplanes through n-1 independent points suffice,
    # and a point set of rank < n-1 fits in a single hyperplane
    planes = _spanned_hyperplanes(points)
    masks = [m for m in planes if not any(m != other and m & other == m for other in planes)]
    full = (1 << len(points)) - 1
    largest = max(bin(m).count("1") for m in masks)
    by_point = [[m for m in masks if m >> i & 1] for i in range(len(points))]
    best = len(greedy_hyperplane_cover(points))
    nodes = 0

    def search(covered: int, used: int):
        nonlocal best, nodes
        nodes += 1
        if nodes > node_budget:
            raise PreconditionError(f"exhaustive cover exceeded {node_budget} search nodes")
        if covered == full:
            best = min(best, used)
            return
        uncovered = bin(full & ~covered).count("1")
        if used + -(-uncovered // largest) >= best:
            return
        first = (full & ~covered & -(full & ~covered)).bit_length() - 1
        for mask in sorted(by_point[first], key=lambda m: -bin(m & ~covered).count("1")):
            search(covered | mask, used + 1)

    search(0, 0)
    return best
