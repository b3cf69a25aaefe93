# subspace_lab/core/subspace/gap.py

"""
Gap principles on enumerated data and the height windows they are applied to.

* Large solutions in one window [Q, Q^(1+delta/2n)) with Q >= n^(2n/delta)
  span a proper subspace (window_subspace, window_determinant_chain).
* Solutions with Q <= H(x) < 2 Q^(1+delta/2n) split into partition classes,
  each spanning a proper subspace (small_solution_classes).
* The two window families covering [n^(2n/delta), max(2H, n^(2n/delta)))
  and [1, n^(2n/delta)) (covering_intervals), and the covering of an
  interval union by windows (cover_interval_union, fit_interval_result).

Window endpoints are rational powers factor * b^e kept symbolic; every
membership test is an exact comparison of rational powers.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple
import logging

from subspace_lab.core.arith.enclosure import (
    RealEnclosure,
    certified_le,
    floor_certified,
    log_enclosure,
    rational_power,
)
from subspace_lab.core.arith.forms import forms_determinant
from subspace_lab.core.arith.linalg import Subspace, det
from subspace_lab.core.arith.places import abs_value, as_rational, rational_str
from subspace_lab.core.arith.powers import compare_power, is_power_equal
from subspace_lab.core.bounds.formulas import small_bound
from subspace_lab.core.subspace.partition import PartitionClass, PartitionGrid
from subspace_lab.core.subspace.systems import FormSystem, SolutionRecord
from subspace_lab.errors import InvariantViolation, PreconditionError

logger = logging.getLogger(__name__)

DETERMINANT_SAMPLE = 500
SMALL_SOLUTION_M_SQUARED_BASE = Fraction(9, 2)  # M = (9/2)^(n/2)

__all__ = [
    "HeightWindow",
    "PowerValue",
    "WindowChain",
    "WindowFamily",
    "CoveringIntervals",
    "window_members",
    "window_subspace",
    "window_determinant_chain",
    "small_solution_grid",
    "small_solution_groups",
    "small_solution_classes",
    "covering_intervals",
    "cover_interval_union",
    "fit_interval_result",
    "small_bound",
]


def window_ratio(n: int, delta) -> Fraction:
    """1 + delta/2n, the exponent of a window."""
    return 1 + as_rational(delta) / (2 * n)


@dataclass(frozen=True)
class PowerValue:
    """factor * base ** exponent, kept symbolic."""

    base: Fraction
    exponent: Fraction
    factor: Fraction = Fraction(1)

    def compare(self, y) -> int:
        """Sign of self - y."""
        y = as_rational(y)
        if y <= 0:
            return 1
        return compare_power(self.base, self.exponent, y / self.factor)

    def enclosure(self, bits: int = 64) -> RealEnclosure:
        return rational_power(self.base, self.exponent, bits) * self.factor

    def to_text(self) -> str:
        prefix = "" if self.factor == 1 else f"{rational_str(self.factor)}*"
        return f"{prefix}{rational_str(self.base)}^({rational_str(self.exponent)})"


@dataclass(frozen=True)
class HeightWindow:
    lower: PowerValue
    upper: PowerValue

    def contains(self, height) -> bool:
        """lower <= height < upper."""
        return self.lower.compare(height) <= 0 and self.upper.compare(height) > 0

    def to_text(self) -> str:
        return f"[{self.lower.to_text()}, {self.upper.to_text()})"


# ---------------------------------------------------------------------------
# first gap principle

def _check_window_Q(system: FormSystem, Q: Fraction):
    if compare_power(system.n, Fraction(2 * system.n) / system.delta, Q) > 0:
        raise PreconditionError(f"Q = {rational_str(Q)} is below n^(2n/delta)")


def window_members(
    solutions: Sequence[SolutionRecord], Q, ratio: Fraction, factor: Fraction = Fraction(1)
) -> List[SolutionRecord]:
    """Records with Q <= H(x) < factor * Q^ratio."""
    Q = as_rational(Q)
    upper = PowerValue(Q, ratio, factor)
    return [r for r in solutions if Q <= r.height and upper.compare(r.height) > 0]


def _certify_dependent(vectors: Sequence[Sequence[int]], n: int, sample: int = DETERMINANT_SAMPLE) -> int:
    """Check det = 0 exactly on up to ``sample`` n-tuples; returns the number checked."""
    checked = 0
    for combo in combinations(vectors, n):
        if det([list(v) for v in combo]) != 0:
            raise InvariantViolation(f"n-tuple {[list(v) for v in combo]} has nonzero determinant")
        checked += 1
        if checked >= sample:
            break
    return checked


def window_subspace(system: FormSystem, solutions: Sequence[SolutionRecord], Q) -> Subspace:
    """Span of the solutions with Q <= H(x) < Q^(1+delta/2n); always proper."""
    Q = as_rational(Q)
    _check_window_Q(system, Q)
    n = system.n
    members = window_members(solutions, Q, window_ratio(n, system.delta))
    if not members:
        return Subspace.zero(n)
    span = Subspace.span([r.x for r in members], n)
    if span.is_full:
        logger.error(f"Window at Q={rational_str(Q)} spans Q^{n} with {len(members)} solutions")
        raise InvariantViolation(f"solutions in the window at Q = {rational_str(Q)} span the whole space")
    checked = _certify_dependent([r.x for r in members], n)
    logger.info(
        f"Window Q={rational_str(Q)}: {len(members)} solutions, span dim {span.dim}, {checked} determinants certified 0"
    )
    return span


@dataclass(frozen=True)
class PlaceChainStep:
    place: str
    direct: Fraction  # |det(x_1..x_n)|_v
    bound: RealEnclosure
    holds: bool


@dataclass(frozen=True)
class WindowChain:
    determinant: Fraction
    steps: List[PlaceChainStep]
    product_direct: Fraction  # 0 or 1 by the product formula
    product_bound: RealEnclosure
    target: RealEnclosure  # n^(n/2) Q^(-delta/2)
    holds: bool


def window_determinant_chain(system: FormSystem, vectors: Sequence[Sequence[int]], Q, bits: int = 128) -> WindowChain:
    """Per-place determinant bounds for n solutions of one window and their product.

    At infinity the bound is n^(n/2) Delta^-1 C^n Q^(sum c + delta/2), at a
    finite v in S it is Delta_v^-1 C_v^n Q^(sum c), elsewhere 1. Their product
    is at most n^(n/2) Q^(-delta/2) < 1, which forces det = 0.
    """
    Q = as_rational(Q)
    n = system.n
    if len(vectors) != n:
        raise PreconditionError(f"window_determinant_chain needs {n} vectors")
    d = det([list(v) for v in vectors])
    f = system.field
    steps: List[PlaceChainStep] = []
    product_bound = RealEnclosure.exact(1, bits)
    for block in system.blocks:
        forms_det = forms_determinant(block.forms, f)
        if f.is_rational(forms_det):
            delta_v = RealEnclosure.exact(abs_value(forms_det[0], block.place), bits)
        else:
            delta_v = abs(f.enclose(forms_det, bits))
        exponent = sum(block.exponents, Fraction(0))
        scale = RealEnclosure.exact(1, bits)
        if block.place.is_infinite:
            exponent += system.delta / 2
            scale = rational_power(n, Fraction(n, 2), bits)
        bound = scale * rational_power(Q, exponent, bits) * (block.constant**n) / delta_v
        direct = abs_value(d, block.place) if d != 0 else Fraction(0)
        steps.append(PlaceChainStep(str(block.place), direct, bound, direct <= bound.upper))
        product_bound = product_bound * bound
    target = rational_power(n, Fraction(n, 2), bits) * rational_power(Q, -system.delta / 2, bits)
    product_direct = Fraction(0) if d == 0 else Fraction(1)
    holds = (
        all(s.holds for s in steps)
        and product_direct <= product_bound.upper
        and product_bound.lower <= target.upper
    )
    if not holds:
        logger.error(f"Determinant chain fails at Q={rational_str(Q)} for {[list(v) for v in vectors]}")
    return WindowChain(d, steps, product_direct, product_bound, target, holds)


# ---------------------------------------------------------------------------
# second gap principle

def _phi_ratio(system: FormSystem, x: Sequence[int], Q: Fraction):
    """nonzero flags and certified ratios phi_j / phi_k for phi(x)_i = Q^(-c_i) L_i(x) at infinity."""
    block = system.infinite_block
    f = system.field
    values = [form.value(f, x) for form in block.forms]
    nonzero = [any(v) for v in values]

    def ratio(j: int, k: int, bits: int) -> RealEnclosure:
        scale = rational_power(Q, block.exponents[k] - block.exponents[j], bits)
        if f.is_rational(values[j]) and f.is_rational(values[k]):
            return scale * (values[j][0] / values[k][0])
        return scale * f.enclose(values[j], bits) / f.enclose(values[k], bits)

    return nonzero, ratio


def small_solution_grid(n: int) -> PartitionGrid:
    return PartitionGrid(n, SMALL_SOLUTION_M_SQUARED_BASE**n)


def small_solution_groups(
    system: FormSystem, solutions: Sequence[SolutionRecord], Q, cap: Optional[int] = None
) -> Dict[PartitionClass, List[Tuple[int, ...]]]:
    """Solutions with Q <= H(x) < 2 Q^(1+delta/2n) grouped by the class of phi(x), in label order."""
    Q = as_rational(Q)
    if Q < 1:
        raise PreconditionError("Q must be >= 1")
    grid = small_solution_grid(system.n)
    members = window_members(solutions, Q, window_ratio(system.n, system.delta), Fraction(2))
    groups: Dict[PartitionClass, List[Tuple[int, ...]]] = {}
    for record in members:
        nonzero, ratio = _phi_ratio(system, record.x, Q)
        groups.setdefault(grid.assign_enclosed(nonzero, ratio, cap), []).append(record.x)
    return {label: groups[label] for label in sorted(groups, key=lambda c: (c.max_index, c.cube_coords))}


def small_solution_classes(
    system: FormSystem, solutions: Sequence[SolutionRecord], Q, cap: Optional[int] = None
) -> Dict[PartitionClass, Subspace]:
    """Span of each class of small_solution_groups; each span is proper."""
    Q = as_rational(Q)
    n = system.n
    groups = small_solution_groups(system, solutions, Q, cap)
    spans: Dict[PartitionClass, Subspace] = {}
    for label, vectors in groups.items():
        span = Subspace.span(vectors, n)
        if span.is_full:
            logger.error(f"Class {label.label()} at Q={rational_str(Q)} spans the whole space")
            raise InvariantViolation(f"class {label.label()} spans Q^{n}")
        _certify_dependent(vectors, n)
        spans[label] = span
    logger.info(f"Small-solution range Q={rational_str(Q)}: {sum(len(v) for v in groups.values())} solutions in {len(spans)} classes")
    return spans


# ---------------------------------------------------------------------------
# covering windows

@dataclass(frozen=True)
class WindowFamily:
    name: str
    target_lower: PowerValue
    target_upper: PowerValue
    windows: List[HeightWindow]
    count_formula: int  # A or B
    closed_form: RealEnclosure
    within_closed_form: bool

    def covers(self, height) -> bool:
        return any(w.contains(height) for w in self.windows)

    def in_target(self, height) -> bool:
        return self.target_lower.compare(height) <= 0 and self.target_upper.compare(height) > 0


@dataclass(frozen=True)
class CoveringIntervals:
    I1: WindowFamily
    I2: WindowFamily


def _power_below(base: Fraction, exponent: Fraction, other: PowerValue, cap: Optional[int] = None) -> bool:
    """base^exponent < other.base^other.exponent for positive rationals."""
    if other.factor != 1 or other.exponent <= 0:
        raise PreconditionError("comparison expects an unscaled power with positive exponent")
    if exponent == 0:
        return other.base > 1
    if is_power_equal(base, exponent / other.exponent, other.base):
        return False

    def diff(bits: int) -> RealEnclosure:
        return log_enclosure(other.base, bits) * other.exponent - log_enclosure(base, bits) * exponent

    return certified_le(diff, f"{rational_str(base)}^{rational_str(exponent)} < {other.to_text()}", cap)


def _large_family(n: int, delta: Fraction, H: Fraction, bits: int) -> WindowFamily:
    """Q_h = n^(e_h), e_h = (2n/delta) r^h, windows [Q_h, Q_h^r) up to 2H."""
    r = window_ratio(n, delta)
    e0 = Fraction(2 * n) / delta
    start = PowerValue(Fraction(n), e0)
    closed = log_enclosure(log_enclosure(4 * H, bits), bits) * Fraction(4 * n) / delta
    if start.compare(2 * H) >= 0:
        return WindowFamily("I1", start, start, [], 0, closed, True)

    end = PowerValue(2 * H, Fraction(1))

    def quotient(b: int) -> RealEnclosure:
        inner = log_enclosure(log_enclosure(2 * H, b) / (log_enclosure(Fraction(n), b) * e0), b)
        return inner / log_enclosure(r, b)

    A = 1 + floor_certified(
        quotient,
        "A for the large-height windows",
        is_exactly=lambda k: k >= 0 and compare_power(n, e0 * r**k, 2 * H) == 0,
    )
    windows: List[HeightWindow] = []
    exponent = e0
    while compare_power(n, exponent, 2 * H) < 0:
        windows.append(HeightWindow(PowerValue(Fraction(n), exponent), PowerValue(Fraction(n), exponent * r)))
        exponent *= r
    return WindowFamily("I1", start, end, windows, A, closed, A <= closed.lower)


def _small_family(n: int, delta: Fraction, bits: int) -> WindowFamily:
    """Q_h = 2^(gamma_h), gamma_0 = 0, gamma_(h+1) = r gamma_h + 1, windows [Q_h, 2 Q_h^r)."""
    r = window_ratio(n, delta)
    e0 = Fraction(2 * n) / delta
    end = PowerValue(Fraction(n), e0)

    def quotient(b: int) -> RealEnclosure:
        inner = log_enclosure(1 + log_enclosure(Fraction(n), b) / log_enclosure(Fraction(2), b), b)
        return inner / log_enclosure(r, b)

    B = 1 + floor_certified(
        quotient,
        "B for the small-height windows",
        is_exactly=lambda k: k >= 0 and compare_power(2, r**k, 2 * n) == 0,
    )
    windows: List[HeightWindow] = []
    gamma = Fraction(0)
    # 2 Q_h^r = 2^(1 + r gamma_h) = Q_(h+1), so consecutive windows touch
    while _power_below(Fraction(2), gamma, end):
        windows.append(HeightWindow(PowerValue(Fraction(2), gamma), PowerValue(Fraction(2), 1 + r * gamma)))
        gamma = 1 + r * gamma
    closed = log_enclosure(3 * log_enclosure(Fraction(n), bits), bits) * Fraction(4 * n) / delta
    return WindowFamily("I2", PowerValue(Fraction(1), Fraction(1)), end, windows, B, closed, B <= closed.lower)


def covering_intervals(n: int, delta, H, bits: int = 128) -> CoveringIntervals:
    delta, H = as_rational(delta), as_rational(H)
    if n < 2 or not (0 < delta <= 1) or H < 1:
        raise PreconditionError("covering_intervals needs n >= 2, 0 < delta <= 1, H >= 1")
    large = _large_family(n, delta, H, bits)
    small = _small_family(n, delta, bits)
    logger.info(
        f"Covering windows n={n}, delta={rational_str(delta)}, H={rational_str(H)}: "
        f"A={large.count_formula} ({len(large.windows)} used), B={small.count_formula} ({len(small.windows)} used)"
    )
    return CoveringIntervals(large, small)


# ---------------------------------------------------------------------------
# interval unions

def cover_interval_union(Qs: Sequence, omega, n: int, delta) -> List[HeightWindow]:
    """Windows [Q^e, Q^(e r)) covering each [Q_i, Q_i^omega), about log(omega)/log(r) per interval."""
    delta, omega = as_rational(delta), as_rational(omega)
    if omega <= 1:
        raise PreconditionError("omega must exceed 1")
    r = window_ratio(n, delta)
    windows: List[HeightWindow] = []
    for Q in Qs:
        Q = as_rational(Q)
        if Q <= 1:
            raise PreconditionError(f"interval start {rational_str(Q)} must exceed 1")
        exponent = Fraction(1)
        while exponent < omega:
            windows.append(HeightWindow(PowerValue(Q, exponent), PowerValue(Q, exponent * r)))
            exponent *= r
    return windows


def fit_interval_result(heights: Sequence, omega) -> List[Fraction]:
    """Greedy starts Q_i such that every height lies in some [Q_i, Q_i^omega)."""
    omega = as_rational(omega)
    if omega <= 1:
        raise PreconditionError("omega must exceed 1")
    starts: List[Fraction] = []
    for h in sorted(as_rational(h) for h in heights):
        if h <= 1:
            raise PreconditionError("heights must exceed 1 to be covered by [Q, Q^omega)")
        if starts and compare_power(starts[-1], omega, h) > 0:
            continue
        starts.append(h)
    return starts
