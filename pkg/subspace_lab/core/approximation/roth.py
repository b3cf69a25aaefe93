# subspace_lab/core/approximation/roth.py

"""
Rational approximations to a real algebraic number xi:

    |xi - alpha| <= H(alpha)^(-2-delta),   alpha in Q.

Provides the certified scan, the convergent-based oracle, the large/small
classification, the one-solution-per-window gap audit and the window count
that follows from it.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import ceil, floor, gcd
from typing import List, Optional, Sequence, Tuple
import logging

from subspace_lab.config import settings
from subspace_lab.core.arith.algebraic import (
    AlgebraicReal,
    continued_fraction,
    convergents,
    height_algebraic,
)
from subspace_lab.core.arith.enclosure import (
    RealEnclosure,
    ceil_certified,
    certified_le,
    log_enclosure,
    rational_power,
)
from subspace_lab.core.arith.field import NumberField
from subspace_lab.core.arith.places import as_rational, height_rational
from subspace_lab.core.arith.powers import compare_power
from subspace_lab.errors import PreconditionError

logger = logging.getLogger(__name__)


class Side(str, Enum):
    ABOVE = "above"
    BELOW = "below"


class SizeClass(str, Enum):
    LARGE = "large"
    SMALL = "small"


@dataclass(frozen=True)
class RothSolution:
    alpha: Fraction
    height: int
    side: Side
    satisfies_margin: RealEnclosure  # H(alpha)^(-2-delta) - |xi - alpha|


@dataclass(frozen=True)
class GapWindow:
    Q: Fraction
    exponent: Fraction
    side: Side


@dataclass(frozen=True)
class GapViolation:
    first: RothSolution
    second: RothSolution
    window: GapWindow


def _check_delta(delta: Fraction):
    if not (0 < delta <= 1):
        raise PreconditionError(f"delta must lie in (0, 1], got {delta}")


def _check_xi(xi: AlgebraicReal):
    if xi.is_rational:
        raise PreconditionError("xi must be irrational")


# ---------------------------------------------------------------------------
# single-candidate test

def _exact_tie(xi: AlgebraicReal, alpha: Fraction, delta: Fraction, height: int) -> bool:
    """|xi - alpha|^q == H^-(2q+p) exactly, decided in Q(xi)."""
    field = NumberField(xi)
    p, q = delta.numerator, delta.denominator
    diff = field.add(field.parse("t"), field.rational(-alpha))
    power = field.rational(1)
    for _ in range(q):
        power = field.mul(power, diff)
    if not field.is_rational(power):
        return False
    return abs(power[0]) == Fraction(1, height ** (2 * q + p))


def test_candidate(
    xi: AlgebraicReal, delta: Fraction, alpha: Fraction, cap: Optional[int] = None
) -> Optional[RothSolution]:
    """RothSolution if alpha satisfies the inequality, else None (certified)."""
    alpha = as_rational(alpha)
    height = height_rational(alpha)
    p, q = delta.numerator, delta.denominator
    # compare |xi - alpha|^q with H^-(2q+p) to stay inside Q
    bound = Fraction(1, height ** (2 * q + p))
    tie_checked = False

    def diff(bits: int) -> RealEnclosure:
        nonlocal tie_checked
        distance = abs(xi.enclosure(bits) - alpha) ** q
        if distance.lower <= bound <= distance.upper and not tie_checked and bits > settings.DEFAULT_PRECISION:
            tie_checked = True
            if _exact_tie(xi, alpha, delta, height):
                return RealEnclosure.exact(0, bits)
        return RealEnclosure.exact(bound, bits) - distance

    if not certified_le(diff, f"|xi - {alpha}| <= H^(-2-delta)", cap):
        return None
    side = Side.ABOVE if xi.compare(alpha) < 0 else Side.BELOW
    bits = 2 * settings.DEFAULT_PRECISION
    margin = rational_power(height, -2 - delta, bits) - abs(xi.enclosure(bits) - alpha)
    return RothSolution(alpha=alpha, height=height, side=side, satisfies_margin=margin)


def recheck_solution(xi: AlgebraicReal, delta: Fraction, solution: RothSolution, cap: Optional[int] = None) -> bool:
    """Re-verify starting at doubled precision."""
    start = 2 * settings.DEFAULT_PRECISION
    p, q = delta.numerator, delta.denominator
    bound = Fraction(1, solution.height ** (2 * q + p))
    return certified_le(
        lambda bits: RealEnclosure.exact(bound) - abs(xi.enclosure(bits + start) - solution.alpha) ** q,
        f"recheck of {solution.alpha}",
        cap,
    )


# ---------------------------------------------------------------------------
# scans

def _scan_denominators(xi: AlgebraicReal, delta: Fraction, y_lo: int, y_hi: int, B: int, cap: Optional[int]) -> List[RothSolution]:
    lo, hi = xi.refine(settings.DEFAULT_PRECISION)
    found: List[RothSolution] = []
    for y in range(y_lo, y_hi + 1):
        # H >= y forces |y*xi - x| <= 1/y
        x_min = max(-B, ceil(y * lo - Fraction(1, y)))
        x_max = min(B, floor(y * hi + Fraction(1, y)))
        for x in range(x_min, x_max + 1):
            if gcd(x, y) != 1:
                continue
            solution = test_candidate(xi, delta, Fraction(x, y), cap)
            if solution is not None:
                found.append(solution)
    return found


def _sort(solutions: Sequence[RothSolution]) -> List[RothSolution]:
    return sorted(solutions, key=lambda s: (s.height, s.alpha))


def scan_roth(
    xi: AlgebraicReal,
    delta,
    B: int,
    threads: Optional[int] = None,
    cap: Optional[int] = None,
) -> List[RothSolution]:
    """Every alpha with H(alpha) <= B satisfying the inequality, sorted by height."""
    delta = as_rational(delta)
    _check_delta(delta)
    _check_xi(xi)
    if B < 1:
        return []
    threads = threads or settings.THREADS
    logger.info(f"Scanning rationals up to height {B} near {xi.to_text()} with delta={delta} ({threads} workers)")
    if threads == 1:
        found = _scan_denominators(xi, delta, 1, B, B, cap)
    else:
        chunk = max(1, B // (4 * threads))
        ranges = [(start, min(B, start + chunk - 1)) for start in range(1, B + 1, chunk)]
        found = []
        with ProcessPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(_scan_denominators, xi, delta, a, b, B, cap) for a, b in ranges]
            for future in futures:
                found.extend(future.result())
    solutions = _sort(found)
    logger.info(f"Found {len(solutions)} solutions up to height {B}")
    return solutions


def brute_force_scan(xi: AlgebraicReal, delta, B: int, cap: Optional[int] = None) -> List[RothSolution]:
    """Every coprime x/y with max(|x|, y) <= B tested directly; oracle for scan_roth."""
    delta = as_rational(delta)
    _check_delta(delta)
    found = []
    for y in range(1, B + 1):
        for x in range(-B, B + 1):
            if gcd(x, y) != 1:
                continue
            solution = test_candidate(xi, delta, Fraction(x, y), cap)
            if solution is not None:
                found.append(solution)
    return _sort(found)


def exhaustive_threshold(delta: Fraction) -> int:
    """Largest height h with h^delta < 2 (below 2^(1/delta) solutions need not be convergents)."""
    p, q = delta.numerator, delta.denominator
    h = 1
    while (h + 1) ** p < 2**q:
        h += 1
    return h


def convergent_oracle(xi: AlgebraicReal, delta, B: int, cap: Optional[int] = None) -> List[RothSolution]:
    """Convergents of xi that qualify, plus an exhaustive scan below 2^(1/delta).

    A solution with H >= 2^(1/delta) has |xi - alpha| <= 1/(2 H^2) <= 1/(2 y^2),
    so it is a convergent (Legendre).
    """
    delta = as_rational(delta)
    _check_delta(delta)
    _check_xi(xi)
    if B < 1:
        return []
    small_limit = min(B, exhaustive_threshold(delta))
    found = {s.alpha: s for s in brute_force_scan(xi, delta, small_limit, cap)}

    count = 8
    while True:
        quotients = continued_fraction(xi, count, cap)
        approximants = list(convergents(quotients))
        if height_rational(approximants[-1]) > B:
            break
        count *= 2
    for alpha in approximants:
        h = height_rational(alpha)
        if h > B or h <= small_limit:
            continue
        solution = test_candidate(xi, delta, alpha, cap)
        if solution is not None:
            found[alpha] = solution
    return _sort(found.values())


# ---------------------------------------------------------------------------
# classification and gap principle

def classify_solution(solution: RothSolution, xi: AlgebraicReal, cap: Optional[int] = None) -> SizeClass:
    """Large iff H(alpha) >= max(H(xi), 2)."""
    if solution.height < 2:
        return SizeClass.SMALL
    if xi.is_rational:
        return SizeClass.LARGE if solution.height >= height_rational(xi.rational_value()) else SizeClass.SMALL
    large = certified_le(
        lambda bits: RealEnclosure.exact(solution.height) - height_algebraic(xi, Fraction(1, 2**bits), cap),
        f"H(alpha)={solution.height} >= H(xi)",
        cap,
    )
    return SizeClass.LARGE if large else SizeClass.SMALL


def audit_gap_principle(solutions: Sequence[RothSolution], delta) -> List[GapViolation]:
    """Pairs on one side with Q <= H1 <= H2 < Q^(1+delta/2) for some Q >= 2.

    The best Q for a pair is H1 itself, so the test is H1 >= 2 and
    H2^(2q) < H1^(2q+p) with delta = p/q.
    """
    delta = as_rational(delta)
    p, q = delta.numerator, delta.denominator
    exponent = 1 + delta / 2
    violations: List[GapViolation] = []
    for side in (Side.ABOVE, Side.BELOW):
        same_side = sorted((s for s in solutions if s.side == side), key=lambda s: (s.height, s.alpha))
        for i, first in enumerate(same_side):
            if first.height < 2:
                continue
            for second in same_side[i + 1 :]:
                if second.height ** (2 * q) >= first.height ** (2 * q + p):
                    break
                violations.append(GapViolation(first, second, GapWindow(Fraction(first.height), exponent, side)))
    if violations:
        logger.error(f"Gap principle audit found {len(violations)} violating pairs")
    return violations


def window_count(E, delta, cap: Optional[int] = None) -> int:
    """ceil(1 + 2 log E / log(1 + delta/2))."""
    E, delta = as_rational(E), as_rational(delta)
    if E <= 1:
        raise PreconditionError(f"window_count needs E > 1, got {E}")
    _check_delta(delta)
    ratio = 1 + delta / 2

    def value(bits: int) -> RealEnclosure:
        return 1 + 2 * log_enclosure(E, bits) / log_enclosure(ratio, bits)

    # the value equals k exactly iff E^2 == ratio^(k-1)
    return ceil_certified(value, f"window count for E={E}", cap, is_exactly=lambda k: k >= 1 and E**2 == ratio ** (k - 1))


@dataclass(frozen=True)
class RothWindow:
    """[Q^e_lo, Q^e_hi) with exponents kept exact."""

    Q: Fraction
    e_lo: Fraction
    e_hi: Fraction

    def contains(self, height) -> bool:
        return compare_power(self.Q, self.e_lo, height) <= 0 and compare_power(self.Q, self.e_hi, height) > 0


def roth_window_cover(Q, E, delta) -> List[RothWindow]:
    """Contiguous windows [Q_k, Q_k^(1+delta/2)) with Q_0 = Q covering [Q, Q^E)."""
    Q, E, delta = as_rational(Q), as_rational(E), as_rational(delta)
    if Q < 2:
        raise PreconditionError(f"Q must be >= 2, got {Q}")
    if E <= 1:
        raise PreconditionError(f"E must be > 1, got {E}")
    ratio = 1 + delta / 2
    windows: List[RothWindow] = []
    exponent = Fraction(1)
    while exponent < E:
        windows.append(RothWindow(Q, exponent, exponent * ratio))
        exponent *= ratio
    return windows
