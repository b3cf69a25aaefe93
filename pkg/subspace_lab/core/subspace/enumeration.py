# subspace_lab/core/subspace/enumeration.py

"""
Box enumeration of the integer solutions of a FormSystem.

The inequality with the most negative exponent at infinity pins one
coordinate (the pivot) to a short interval once the other coordinates are
fixed, so the scan walks the (n-1)-dimensional box of the other coordinates
and tests only the few pivot values left. The bound used for pruning is
C * m^ceil(c) when c <= 0, with m the max-norm of the other coordinates, and
C * B^ceil(c) when c > 0. Both are at least C * H(x)^c for every x in the box.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import ceil, floor
from typing import List, Optional, Sequence, Tuple
import logging

from subspace_lab.config import settings
from subspace_lab.core.arith.enclosure import RealEnclosure, certified_le, rational_power
from subspace_lab.core.arith.places import abs_value
from subspace_lab.core.arith.powers import compare_power
from subspace_lab.core.subspace.systems import (
    FormSystem,
    SolutionRecord,
    large_threshold_reached,
    require_valid,
)
from subspace_lab.core.approximation.roth import SizeClass
from subspace_lab.errors import UndecidedComparison

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EnumerationResult:
    solutions: List[SolutionRecord]
    boundary: List[Tuple[int, ...]] = field(default_factory=list)
    B: int = 0
    precision_cap: int = 0
    threads: int = 1


# ---------------------------------------------------------------------------
# single vector

def _max_norm(x: Sequence[int]) -> int:
    return max(abs(c) for c in x)


def _is_canonical(x: Sequence[int]) -> bool:
    for c in x:
        if c != 0:
            return c > 0
    return False


def check_vector(system: FormSystem, x: Sequence[int], start: int = 0, cap: Optional[int] = None) -> bool:
    """True iff x satisfies every inequality of the system (certified).

    ``start`` offsets every refinement step, so ``start = DEFAULT_PRECISION``
    re-runs the same decisions at doubled precision.
    """
    height = _max_norm(x)
    if height == 0:
        return False
    f = system.field
    for block in system.blocks:
        for form, c in zip(block.forms, block.exponents):
            value = form.value(f, x)
            if f.is_rational(value):
                size = abs_value(value[0], block.place)
                if size == 0:
                    continue
                # size <= C * H^c  <=>  H^c >= size / C
                if compare_power(height, c, size / block.constant, cap) < 0:
                    return False
                continue

            def diff(bits: int, value=value, c=c, constant=block.constant) -> RealEnclosure:
                b = bits + start
                return rational_power(height, c, b) * constant - abs(f.enclose(value, b))

            if not certified_le(diff, f"|L(x)| <= C H^c at x={list(x)}", cap):
                return False
    return True


def recheck_solution(system: FormSystem, x: Sequence[int], bits: Optional[int] = None, cap: Optional[int] = None) -> bool:
    """Re-verify one vector with every refinement shifted up by ``bits`` (default: doubled precision)."""
    return check_vector(system, x, start=settings.DEFAULT_PRECISION if bits is None else bits, cap=cap)


def solution_record(system: FormSystem, x: Sequence[int]) -> SolutionRecord:
    height = Fraction(_max_norm(x))
    bits = settings.DEFAULT_PRECISION
    values = []
    for block in system.blocks:
        for i, form in enumerate(block.forms):
            value = form.value(system.field, x)
            if system.field.is_rational(value):
                enc = RealEnclosure.exact(abs_value(value[0], block.place))
            else:
                enc = abs(system.field.enclose(value, bits))
            values.append((str(block.place), i, enc))
    size = SizeClass.LARGE if large_threshold_reached(height, system.n, system.delta, system.H) else SizeClass.SMALL
    return SolutionRecord(tuple(int(c) for c in x), height, tuple(values), size)


# ---------------------------------------------------------------------------
# pruning

@dataclass(frozen=True)
class _Pruner:
    pivot: int
    pivot_lower: Fraction
    pivot_upper: Fraction
    lower_nums: Tuple[int, ...]  # dyadic numerators of the other coefficients, scale 2^bits
    upper_nums: Tuple[int, ...]
    bits: int
    constant: Fraction
    exponent_ceiling: int


def _dyadic_bounds(enc: RealEnclosure, bits: int) -> Tuple[int, int]:
    scale = 1 << bits
    return floor(enc.lower * scale), ceil(enc.upper * scale)


def _build_pruner(system: FormSystem, B: int) -> _Pruner:
    block = system.infinite_block
    f = system.field
    i = min(range(system.n), key=lambda k: block.exponents[k])
    form = block.forms[i]
    nonzero = [k for k, a in enumerate(form.coeffs) if any(a)]
    rational = [k for k in nonzero if f.is_rational(form.coeffs[k])]
    pivot = rational[0] if rational else nonzero[0]

    bits = settings.DEFAULT_PRECISION + 2 * B.bit_length()
    a = form.coeffs[pivot]
    if f.is_rational(a):
        lower = upper = a[0]
    else:
        b = bits
        while True:
            enc = f.enclose(a, b)
            if enc.sign() is not None:
                lower, upper = enc.lower, enc.upper
                break
            b *= 2
    lower_nums, upper_nums = [], []
    for k, coeff in enumerate(form.coeffs):
        lo, hi = _dyadic_bounds(f.enclose(coeff, bits + 4), bits) if k != pivot else (0, 0)
        lower_nums.append(lo)
        upper_nums.append(hi)
    logger.info(
        f"Pruning with form {i} at infinity (c={block.exponents[i]}), pivot coordinate {pivot}, {bits} bits"
    )
    return _Pruner(
        pivot, lower, upper, tuple(lower_nums), tuple(upper_nums), bits, block.constant, ceil(block.exponents[i])
    )


def _pivot_range(pruner: _Pruner, others: Sequence[Tuple[int, int]], B: int) -> range:
    """Pivot values compatible with the pruning inequality for fixed other coordinates."""
    e = pruner.exponent_ceiling
    # H(x) >= m when e <= 0, H(x) <= B when e > 0
    m = max([1] + [abs(v) for _, v in others]) if e <= 0 else B
    bound = pruner.constant * (Fraction(m) ** e)
    s_lo = s_hi = 0
    for k, v in others:
        if v >= 0:
            s_lo += pruner.lower_nums[k] * v
            s_hi += pruner.upper_nums[k] * v
        else:
            s_lo += pruner.upper_nums[k] * v
            s_hi += pruner.lower_nums[k] * v
    scale = 1 << pruner.bits
    # a_pivot * x_pivot lies in [t_lo, t_hi]
    t_lo = Fraction(-s_hi, scale) - bound
    t_hi = Fraction(-s_lo, scale) + bound
    if pruner.pivot_lower == pruner.pivot_upper:
        corners = (t_lo / pruner.pivot_lower, t_hi / pruner.pivot_lower)
    else:
        corners = tuple(t / a for t in (t_lo, t_hi) for a in (pruner.pivot_lower, pruner.pivot_upper))
    lo = max(-B, ceil(min(corners)))
    hi = min(B, floor(max(corners)))
    return range(lo, hi + 1)


def _scan_slab(
    system: FormSystem, pruner: _Pruner, B: int, first_lo: int, first_hi: int, cap: Optional[int]
) -> Tuple[List[SolutionRecord], List[Tuple[int, ...]]]:
    n = system.n
    free = [k for k in range(n) if k != pruner.pivot]
    ranges = [range(first_lo, first_hi + 1)] + [range(-B, B + 1)] * (len(free) - 1)
    found: List[SolutionRecord] = []
    boundary: List[Tuple[int, ...]] = []
    for values in product(*ranges):
        others = list(zip(free, values))
        for pivot_value in _pivot_range(pruner, others, B):
            x = [0] * n
            for k, v in others:
                x[k] = v
            x[pruner.pivot] = pivot_value
            if not _is_canonical(x):
                continue
            try:
                ok = check_vector(system, x, cap=cap)
            except UndecidedComparison as e:
                logger.warning(f"Boundary candidate {x}: {e}")
                boundary.append(tuple(x))
                continue
            if ok:
                found.append(solution_record(system, x))
    return found, boundary


def enumerate_solutions(
    system: FormSystem, B: int, threads: Optional[int] = None, cap: Optional[int] = None
) -> EnumerationResult:
    """All canonical-sign nonzero x in Z^n with max-norm <= B solving the system."""
    require_valid(system, cap)
    threads = threads or settings.THREADS
    precision_cap = cap or settings.PRECISION_CAP
    if B < 1:
        return EnumerationResult([], [], B, precision_cap, threads)

    pruner = _build_pruner(system, B)
    logger.info(f"Enumerating solutions of {system.name} with max-norm <= {B} ({threads} workers)")
    if threads == 1:
        found, boundary = _scan_slab(system, pruner, B, -B, B, cap)
    else:
        width = 2 * B + 1
        chunk = max(1, width // (4 * threads))
        slabs = [(lo, min(B, lo + chunk - 1)) for lo in range(-B, B + 1, chunk)]
        found, boundary = [], []
        with ProcessPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(_scan_slab, system, pruner, B, lo, hi, cap) for lo, hi in slabs]
            for future in futures:
                part, edge = future.result()
                found.extend(part)
                boundary.extend(edge)

    solutions = sorted(found, key=lambda r: (r.height, r.x))
    boundary = sorted(set(boundary), key=lambda x: (_max_norm(x), x))
    logger.info(f"Found {len(solutions)} solutions and {len(boundary)} boundary candidates up to {B}")
    return EnumerationResult(solutions, boundary, B, precision_cap, threads)

