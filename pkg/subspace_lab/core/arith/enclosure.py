# subspace_lab/core/arith/enclosure.py

"""
Certified real enclosures with rational endpoints.

Irrational quantities (algebraic numbers, logarithms, fractional powers) are
never handled as floats. They are carried as closed intervals [lower, upper]
with exact ``Fraction`` endpoints, produced either by rational interval
arithmetic or by mpmath's ``iv`` context and converted back exactly.

Decisions (``<=``, sign, floor) refine by doubling the precision until they
are settled, and raise ``UndecidedComparison`` at the configured cap.
"""

from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from math import floor, ceil
from typing import Callable, Optional, Union
import logging

from mpmath import iv
from mpmath.libmp import to_rational

from subspace_lab.config import precision_ladder, settings
from subspace_lab.errors import PreconditionError, UndecidedComparison

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RealEnclosure:
    lower: Fraction
    upper: Fraction
    precision: int = 0

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError(f"Enclosure endpoints out of order: [{self.lower}, {self.upper}]")

    @classmethod
    def exact(cls, value, precision: int = 0) -> "RealEnclosure":
        value = Fraction(value)
        return cls(value, value, precision)

    @property
    def is_exact(self) -> bool:
        return self.lower == self.upper

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    @property
    def midpoint(self) -> Fraction:
        return (self.lower + self.upper) / 2

    def contains(self, value) -> bool:
        return self.lower <= value <= self.upper

    def refines(self, other: "RealEnclosure") -> bool:
        return other.lower <= self.lower and self.upper <= other.upper

    def sign(self) -> Optional[int]:
        """+1 / -1 / 0 when settled by the endpoints, None when the enclosure straddles 0."""
        if self.lower > 0:
            return 1
        if self.upper < 0:
            return -1
        if self.is_exact:
            return 0
        return None

    def _coerce(self, other) -> "RealEnclosure":
        if isinstance(other, RealEnclosure):
            return other
        return RealEnclosure.exact(other, self.precision)

    def __add__(self, other):
        other = self._coerce(other)
        return RealEnclosure(self.lower + other.lower, self.upper + other.upper, min(self.precision, other.precision))

    __radd__ = __add__

    def __neg__(self):
        return RealEnclosure(-self.upper, -self.lower, self.precision)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        products = (
            self.lower * other.lower,
            self.lower * other.upper,
            self.upper * other.lower,
            self.upper * other.upper,
        )
        return RealEnclosure(min(products), max(products), min(self.precision, other.precision))

    __rmul__ = __mul__

    def __abs__(self):
        if self.lower >= 0:
            return self
        if self.upper <= 0:
            return -self
        return RealEnclosure(Fraction(0), max(-self.lower, self.upper), self.precision)

    def reciprocal(self) -> "RealEnclosure":
        if self.lower <= 0 <= self.upper:
            raise PreconditionError(f"Cannot invert an enclosure containing 0: {self.to_text()}")
        return RealEnclosure(1 / self.upper, 1 / self.lower, self.precision)

    def __truediv__(self, other):
        return self * self._coerce(other).reciprocal()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("RealEnclosure only supports integer powers; use rational_power")
        if k < 0:
            return (self ** (-k)).reciprocal()
        if k == 0:
            return RealEnclosure.exact(1, self.precision)
        if k % 2 == 1 or self.lower >= 0:
            lo, hi = self.lower ** k, self.upper ** k
            return RealEnclosure(min(lo, hi), max(lo, hi), self.precision)
        magnitude = abs(self)
        return RealEnclosure(magnitude.lower ** k, magnitude.upper ** k, self.precision)

    def max_with(self, value) -> "RealEnclosure":
        value = Fraction(value)
        return RealEnclosure(max(self.lower, value), max(self.upper, value), self.precision)

    def hull(self, other: "RealEnclosure") -> "RealEnclosure":
        return RealEnclosure(min(self.lower, other.lower), max(self.upper, other.upper), min(self.precision, other.precision))

    def to_text(self) -> str:
        if self.is_exact:
            return _fraction_text(self.lower)
        return f"[{_fraction_text(self.lower)}, {_fraction_text(self.upper)}]"

    def __str__(self) -> str:
        return self.to_text()


def _fraction_text(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


Enclosable = Union[Fraction, int, RealEnclosure]


# ---------------------------------------------------------------------------
# mpmath bridge

@contextmanager
def iv_precision(bits: int):
    saved = iv.prec
    iv.prec = max(bits, 53)
    try:
        yield iv
    finally:
        iv.prec = saved


def to_iv(value: Enclosable):
    """An mpmath interval that contains ``value`` (outward rounded)."""
    if isinstance(value, RealEnclosure):
        lo = iv.mpf(value.lower.numerator) / value.lower.denominator
        hi = iv.mpf(value.upper.numerator) / value.upper.denominator
        return iv.mpf((lo.a, hi.b))
    value = Fraction(value)
    return iv.mpf(value.numerator) / value.denominator


def from_iv(value, bits: int) -> RealEnclosure:
    a, b = value._mpi_
    lo = Fraction(*map(int, to_rational(a)))
    hi = Fraction(*map(int, to_rational(b)))
    return RealEnclosure(lo, hi, bits)


def log_enclosure(x: Enclosable, bits: int) -> RealEnclosure:
    """Natural logarithm of a positive quantity."""
    if isinstance(x, RealEnclosure):
        if x.lower <= 0:
            raise PreconditionError(f"log of a non-positive enclosure {x.to_text()}")
    elif Fraction(x) <= 0:
        raise PreconditionError(f"log of non-positive value {x}")
    if not isinstance(x, RealEnclosure) and Fraction(x) == 1:
        return RealEnclosure.exact(0, bits)
    with iv_precision(bits):
        return from_iv(iv.ln(to_iv(x)), bits)


def exp_enclosure(x: Enclosable, bits: int) -> RealEnclosure:
    with iv_precision(bits):
        return from_iv(iv.exp(to_iv(x)), bits)


def rational_power(x: Enclosable, exponent, bits: int) -> RealEnclosure:
    """x ** exponent for x > 0 and rational exponent; exact for integer exponents."""
    exponent = Fraction(exponent)
    if exponent.denominator == 1:
        base = x if isinstance(x, RealEnclosure) else RealEnclosure.exact(x, bits)
        return base ** int(exponent)
    with iv_precision(bits):
        y = iv.exp(to_iv(exponent) * iv.ln(to_iv(x)))
        return from_iv(y, bits)


def sqrt_enclosure(x: Enclosable, bits: int) -> RealEnclosure:
    with iv_precision(bits):
        return from_iv(iv.sqrt(to_iv(x)), bits)


# ---------------------------------------------------------------------------
# certified decisions

EnclosureFn = Callable[[int], RealEnclosure]


def certified_sign(fn: EnclosureFn, what: str, cap: Optional[int] = None) -> int:
    """Sign of a quantity given as a precision -> enclosure function.

    An exact zero is only recognized when the function returns an exact
    enclosure; a straddling enclosure at the cap is undecided.
    """
    last_bits = cap or settings.PRECISION_CAP
    for bits in precision_ladder(cap):
        enc = fn(bits)
        s = enc.sign()
        if s is not None:
            return s
        last_bits = bits
    raise UndecidedComparison(what, last_bits)


def certified_le(diff_fn: EnclosureFn, what: str, cap: Optional[int] = None) -> bool:
    """Decide ``0 <= q`` where ``diff_fn`` encloses q = rhs - lhs.

    True as soon as the lower endpoint is >= 0 (which also covers an exact 0),
    False as soon as the upper endpoint is < 0.
    """
    last_bits = cap or settings.PRECISION_CAP
    for bits in precision_ladder(cap):
        enc = diff_fn(bits)
        if enc.lower >= 0:
            return True
        if enc.upper < 0:
            return False
        last_bits = bits
    raise UndecidedComparison(what, last_bits)


def floor_certified(
    fn: EnclosureFn,
    what: str,
    cap: Optional[int] = None,
    is_exactly: Optional[Callable[[int], bool]] = None,
) -> int:
    """floor(x) for x given by enclosures, refined until unambiguous.

    ``is_exactly(k)`` may be supplied to settle the case where the enclosure
    keeps straddling an integer k because x == k exactly.
    """
    last_bits = cap or settings.PRECISION_CAP
    for bits in precision_ladder(cap):
        enc = fn(bits)
        lo, hi = floor(enc.lower), floor(enc.upper)
        # equal floors settle it: if upper is an integer k then lower >= k forces lower == k
        if lo == hi:
            return lo
        if is_exactly is not None and hi == lo + 1 and is_exactly(hi):
            return hi
        last_bits = bits
    raise UndecidedComparison(f"floor of {what}", last_bits)


def ceil_certified(
    fn: EnclosureFn,
    what: str,
    cap: Optional[int] = None,
    is_exactly: Optional[Callable[[int], bool]] = None,
) -> int:
    negated = (lambda k: is_exactly(-k)) if is_exactly is not None else None
    return -floor_certified(lambda bits: -fn(bits), what, cap, negated)


def dyadic_round_up(x: Fraction, bits: int) -> Fraction:
    """Smallest multiple of 2^-bits that is >= x."""
    scale = 1 << bits
    return Fraction(ceil(x * scale), scale)
