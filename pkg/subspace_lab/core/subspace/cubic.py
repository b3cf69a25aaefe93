# subspace_lab/core/subspace/cubic.py

"""
The cubic system

    |x_1 + x_2 xi + x_3 xi^2| <= H(x)^(-2-delta),  |x_2| <= H(x),  |x_3| <= H(x)

and the solutions it inherits from a single rational approximation alpha = r/s
of xi: every integer u with |u|^(3+delta) X <= 1, where

    X = 2^(2+delta) (1 + |xi|) |xi - alpha| H(alpha)^(3+delta),

gives the solution x with x_1 + x_2 T + x_3 T^2 = (u + T)(r - s T). A bound N
on the number of solutions therefore turns into a lower bound for |xi - alpha|.
"""

from fractions import Fraction
from math import ceil, gcd
from typing import Callable, Iterable, List, Optional
import logging

from subspace_lab.core.arith.algebraic import AlgebraicReal, height_algebraic
from subspace_lab.core.arith.enclosure import (
    RealEnclosure,
    certified_le,
    floor_certified,
    rational_power,
)
from subspace_lab.core.arith.field import NumberField
from subspace_lab.core.arith.forms import LinearForm
from subspace_lab.core.arith.places import INFINITY, as_rational, rational_str
from subspace_lab.core.subspace.enumeration import check_vector, solution_record
from subspace_lab.core.subspace.systems import FormSystem, PlaceBlock, SolutionRecord
from subspace_lab.errors import InvariantViolation, PreconditionError

logger = logging.getLogger(__name__)


def _check_delta(delta: Fraction):
    if not (0 < delta <= 1):
        raise PreconditionError(f"delta must lie in (0, 1], got {rational_str(delta)}")


def cubic_system(xi: AlgebraicReal, delta) -> FormSystem:
    """The system above for a real algebraic xi of degree at least 3."""
    delta = as_rational(delta)
    _check_delta(delta)
    if xi.degree < 3:
        raise PreconditionError(f"xi must have degree >= 3, got {xi.degree}")
    field = NumberField(xi)
    forms = (
        LinearForm((field.rational(1), field.parse("t"), field.parse("t^2"))),
        LinearForm.rational([0, 1, 0], field),
        LinearForm.rational([0, 0, 1], field),
    )
    block = PlaceBlock(INFINITY, forms, (-2 - delta, Fraction(1), Fraction(1)), Fraction(1))
    H = max(Fraction(1), Fraction(ceil(height_algebraic(xi).upper)))
    return FormSystem(
        n=3, delta=delta, field=field, blocks=(block,), H=H, D=xi.degree, R=3, name=f"cubic[{xi.to_text()}]"
    )


def _approximation_measure(xi: AlgebraicReal, delta: Fraction, alpha: Fraction, bits: int) -> RealEnclosure:
    """2^(2+delta) (1 + |xi|) |xi - alpha| H(alpha)^(3+delta)."""
    enc = xi.enclosure(bits)
    height = max(abs(alpha.numerator), alpha.denominator)
    return (
        rational_power(2, 2 + delta, bits)
        * (1 + abs(enc))
        * abs(enc - alpha)
        * rational_power(height, 3 + delta, bits)
    )


def _u_admissible(xi: AlgebraicReal, delta: Fraction, alpha: Fraction, u: int, cap: Optional[int]) -> bool:
    if u == 0:
        return True
    return certified_le(
        lambda bits: 1 - rational_power(abs(u), 3 + delta, bits) * _approximation_measure(xi, delta, alpha, bits),
        f"|u|^(3+delta) X <= 1 for u={u}",
        cap,
    )


def _canonical(x: List[int]) -> List[int]:
    first = next(c for c in x if c != 0)
    return [-c for c in x] if first < 0 else x


def cubic_solutions_from_u(
    xi: AlgebraicReal,
    delta,
    alpha,
    u_range: Optional[Iterable[int]] = None,
    cap: Optional[int] = None,
) -> List[SolutionRecord]:
    """Solutions of the cubic system built from alpha = r/s and each admissible u."""
    delta, alpha = as_rational(delta), as_rational(alpha)
    system = cubic_system(xi, delta)
    r, s = alpha.numerator, alpha.denominator

    def measure(bits: int) -> RealEnclosure:
        return _approximation_measure(xi, delta, alpha, bits)

    if not certified_le(lambda bits: 1 - measure(bits), f"alpha={rational_str(alpha)} close enough to xi", cap):
        logger.info(f"alpha={rational_str(alpha)} is too far from xi; no solutions from u")
        return []

    if u_range is None:
        limit = floor_certified(
            lambda bits: rational_power(measure(bits), Fraction(-1) / (3 + delta), bits),
            "largest admissible |u|",
            cap,
        )
        u_range = range(-limit, limit + 1)

    records: List[SolutionRecord] = []
    seen = set()
    for u in u_range:
        if not _u_admissible(xi, delta, alpha, u, cap):
            continue
        x = [u * r, r - u * s, -s]
        if gcd(gcd(x[0], x[1]), x[2]) != 1:
            logger.error(f"x={x} from u={u}, alpha={rational_str(alpha)} is not primitive")
            raise InvariantViolation(f"vector {x} built from u={u} has a common factor")
        x = tuple(_canonical(x))
        if x in seen:
            continue
        seen.add(x)
        if not check_vector(system, x, cap=cap):
            logger.error(f"x={list(x)} from u={u} fails the cubic system")
            raise InvariantViolation(f"vector {list(x)} built from u={u} is not a solution")
        records.append(solution_record(system, x))
    records.sort(key=lambda rec: (rec.height, rec.x))
    logger.info(f"alpha={rational_str(alpha)} yields {len(records)} solutions")
    return records


def roth_lower_bound_from_count(xi: AlgebraicReal, delta, N: int, bits: int = 128) -> Callable[[object], RealEnclosure]:
    """H(alpha) -> 2^(-2-delta) (1 + |xi|)^-1 N^(-3-delta) H(alpha)^(-3-delta)."""
    delta = as_rational(delta)
    _check_delta(delta)
    if N < 1:
        raise PreconditionError("N must be at least 1")
    constant = (
        rational_power(2, -2 - delta, bits)
        / (1 + abs(xi.enclosure(bits)))
        * rational_power(N, -3 - delta, bits)
    )

    def bound(height) -> RealEnclosure:
        height = as_rational(height)
        if height < 1:
            raise PreconditionError("heights are at least 1")
        return constant * rational_power(height, -3 - delta, bits)

    return bound


def roth_lower_bound_holds(xi: AlgebraicReal, delta, N: int, alpha, cap: Optional[int] = None) -> bool:
    """|xi - alpha| >= the count-derived lower bound at H(alpha), certified."""
    delta, alpha = as_rational(delta), as_rational(alpha)
    height = max(abs(alpha.numerator), alpha.denominator)

    def diff(bits: int) -> RealEnclosure:
        return abs(xi.enclosure(bits) - alpha) - roth_lower_bound_from_count(xi, delta, N, bits)(height)

    return certified_le(diff, f"lower bound at alpha={rational_str(alpha)}", cap)
