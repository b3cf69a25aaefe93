# subspace_lab/core/arith/algebraic.py

"""
Real algebraic numbers given by a minimal polynomial and an isolating interval.

Textual form (used by configs and the CLI):

    poly = [c0, c1, ..., cd]; interval = [lo, hi]

with integer coefficients in ascending degree order and rational endpoints.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, floor
from typing import Iterator, List, Optional, Sequence, Tuple
import logging
import re

from sympy import Poly, Rational, Symbol

from subspace_lab.config import precision_ladder, settings
from subspace_lab.core.arith.enclosure import (
    RealEnclosure,
    iv_precision,
    from_iv,
    to_iv,
)
from subspace_lab.core.arith.places import as_rational, height_rational, rational_str
from subspace_lab.errors import ConfigError, PreconditionError, UndecidedComparison

from mpmath import iv

logger = logging.getLogger(__name__)

_X = Symbol("X")
_TEXT = re.compile(r"^\s*poly\s*=\s*\[(?P<poly>[^\]]*)\]\s*;\s*interval\s*=\s*\[(?P<interval>[^\]]*)\]\s*$")


def _sympy_rational(x: Fraction) -> Rational:
    return Rational(x.numerator, x.denominator)


def _fraction(x) -> Fraction:
    return Fraction(int(x.p), int(x.q))


@lru_cache(maxsize=None)
def _poly(coeffs: Tuple[int, ...]) -> Poly:
    return Poly(list(reversed(coeffs)), _X)


@lru_cache(maxsize=4096)
def _refined(coeffs: Tuple[int, ...], lower: Fraction, upper: Fraction, bits: int) -> Tuple[Fraction, Fraction]:
    poly = _poly(coeffs)
    if poly.degree() == 1:
        root = Fraction(-coeffs[0], coeffs[1])
        return root, root
    s, t = poly.refine_root(
        _sympy_rational(lower), _sympy_rational(upper), eps=Rational(1, 2**bits)
    )
    return _fraction(s), _fraction(t)


@dataclass(frozen=True)
class AlgebraicReal:
    """A real algebraic number: irreducible integral minpoly plus isolating interval.

    ``coeffs`` are in ascending degree order with positive leading coefficient
    and content 1.
    """

    coeffs: Tuple[int, ...]
    lower: Fraction
    upper: Fraction

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "lower", as_rational(self.lower))
        object.__setattr__(self, "upper", as_rational(self.upper))
        if len(coeffs) < 2 or coeffs[-1] == 0:
            raise ConfigError(f"Minimal polynomial {list(coeffs)} must have degree >= 1")
        if coeffs[-1] < 0:
            raise ConfigError("Minimal polynomial must have a positive leading coefficient")
        content = 0
        for c in coeffs:
            content = gcd(content, c)
        if content != 1:
            raise ConfigError(f"Minimal polynomial {list(coeffs)} has content {content}, expected 1")
        if self.lower > self.upper:
            raise ConfigError(f"Isolating interval [{self.lower}, {self.upper}] is empty")
        poly = _poly(coeffs)
        if not poly.is_irreducible:
            raise ConfigError(f"Polynomial {poly.as_expr()} is reducible over Q")
        count = poly.count_roots(_sympy_rational(self.lower), _sympy_rational(self.upper))
        if count != 1:
            raise ConfigError(
                f"Interval [{self.lower}, {self.upper}] contains {count} roots of {poly.as_expr()}, expected exactly 1"
            )

    # -- construction -----------------------------------------------------

    @classmethod
    def from_rational(cls, q) -> "AlgebraicReal":
        q = as_rational(q)
        return cls((-q.numerator, q.denominator), q, q)

    @classmethod
    def parse(cls, text: str) -> "AlgebraicReal":
        match = _TEXT.match(text or "")
        if not match:
            raise ConfigError(f"Expected 'poly=[c0,...,cd];interval=[lo,hi]', got {text!r}")
        try:
            coeffs = tuple(int(c) for c in match.group("poly").split(",") if c.strip())
        except ValueError as e:
            raise ConfigError(f"Polynomial coefficients must be integers in {text!r}") from e
        bounds = [b for b in match.group("interval").split(",") if b.strip()]
        if len(bounds) != 2:
            raise ConfigError(f"Interval needs exactly two endpoints in {text!r}")
        return cls(coeffs, as_rational(bounds[0]), as_rational(bounds[1]))

    def to_text(self) -> str:
        poly = ",".join(str(c) for c in self.coeffs)
        return f"poly=[{poly}];interval=[{rational_str(self.lower)},{rational_str(self.upper)}]"

    # -- basic properties -------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1]

    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    def rational_value(self) -> Fraction:
        if not self.is_rational:
            raise PreconditionError(f"{self.to_text()} is irrational")
        return Fraction(-self.coeffs[0], self.coeffs[1])

    @property
    def poly(self) -> Poly:
        return _poly(self.coeffs)

    # -- refinement -------------------------------------------------------

    def refine(self, bits: int) -> Tuple[Fraction, Fraction]:
        """Isolating interval of width <= 2^-bits."""
        return _refined(self.coeffs, self.lower, self.upper, bits)

    def enclosure(self, bits: int) -> RealEnclosure:
        lo, hi = self.refine(bits)
        return RealEnclosure(lo, hi, bits)

    def compare(self, q) -> int:
        """Sign of self - q; refinement always separates an irrational root from q."""
        q = as_rational(q)
        if self.is_rational:
            v = self.rational_value()
            return (v > q) - (v < q)
        for bits in precision_ladder():
            lo, hi = self.refine(bits)
            if lo > q:
                return 1
            if hi < q:
                return -1
        raise UndecidedComparison(f"{self.to_text()} vs {q}", settings.PRECISION_CAP)

    def sign(self) -> int:
        return self.compare(0)

    def __str__(self) -> str:
        return self.to_text()


def parse_algebraic(text: str) -> AlgebraicReal:
    return AlgebraicReal.parse(text)


# ---------------------------------------------------------------------------
# heights

def _max_one_abs_squared(lo: Fraction, hi: Fraction) -> Tuple[Fraction, Fraction]:
    """Enclosure of max(1, x^2) for x in [lo, hi]."""
    if lo <= 0 <= hi:
        low_sq = Fraction(0)
    else:
        low_sq = min(lo * lo, hi * hi)
    high_sq = max(lo * lo, hi * hi)
    return max(Fraction(1), low_sq), max(Fraction(1), high_sq)


def _mahler_squared(xi: AlgebraicReal, bits: int) -> Tuple[Fraction, Fraction]:
    """Enclosure of (a * prod max(1, |conjugate|))^2 from a complex root isolation."""
    eps = Rational(1, 2**bits)
    real_part, complex_part = xi.poly.intervals(all=True, eps=eps)
    lower = Fraction(xi.leading ** 2)
    upper = Fraction(xi.leading ** 2)
    for (s, t), _ in real_part:
        lo_sq, hi_sq = _max_one_abs_squared(_fraction(s), _fraction(t))
        lower *= lo_sq
        upper *= hi_sq
    for (corner_a, corner_b), _ in complex_part:
        u, v = (_fraction(c) for c in corner_a.as_real_imag())
        s, t = (_fraction(c) for c in corner_b.as_real_imag())
        re_lo, re_hi = min(u, s), max(u, s)
        im_lo, im_hi = min(v, t), max(v, t)
        near_re = Fraction(0) if re_lo <= 0 <= re_hi else min(abs(re_lo), abs(re_hi))
        near_im = Fraction(0) if im_lo <= 0 <= im_hi else min(abs(im_lo), abs(im_hi))
        far_re = max(abs(re_lo), abs(re_hi))
        far_im = max(abs(im_lo), abs(im_hi))
        lower *= max(Fraction(1), near_re**2 + near_im**2)
        upper *= max(Fraction(1), far_re**2 + far_im**2)
    return lower, upper


def height_algebraic(xi: AlgebraicReal, target_width: Optional[Fraction] = None, cap: Optional[int] = None) -> RealEnclosure:
    """Certified enclosure of H(xi) = (a * prod_i max(1, |xi_i|))^(1/d).

    Exact for rational xi: H(x/y) = max(|x|, |y|).
    """
    if xi.is_rational:
        return RealEnclosure.exact(height_rational(xi.rational_value()))
    target_width = Fraction(1, 2**settings.DEFAULT_PRECISION) if target_width is None else Fraction(target_width)
    exponent = Fraction(1, 2 * xi.degree)
    enc = None
    for bits in precision_ladder(cap):
        lower, upper = _mahler_squared(xi, bits)
        with iv_precision(bits + 16):
            value = iv.exp(to_iv(exponent) * iv.ln(to_iv(RealEnclosure(lower, upper))))
            enc = from_iv(value, bits)
        if enc.width <= target_width:
            return enc
    raise UndecidedComparison(
        f"height of {xi.to_text()} to width {target_width} (reached {enc.width if enc else '?'})",
        cap or settings.PRECISION_CAP,
    )


# ---------------------------------------------------------------------------
# continued fractions

def _expand_interval(lower: Fraction, upper: Fraction, count: int) -> List[int]:
    """Partial quotients shared by every real number in [lower, upper]."""
    quotients: List[int] = []
    lo, hi = lower, upper
    while len(quotients) < count:
        a_lo, a_hi = floor(lo), floor(hi)
        if a_lo != a_hi:
            break
        quotients.append(a_lo)
        lo_frac, hi_frac = lo - a_lo, hi - a_lo
        if lo_frac == 0:
            # tail may be 0 or arbitrarily large; needs a narrower interval
            break
        lo, hi = 1 / hi_frac, 1 / lo_frac
    return quotients


def continued_fraction(xi: AlgebraicReal, count: int, cap: Optional[int] = None) -> List[int]:
    """The first ``count`` partial quotients of xi, each certified.

    Rational xi yields its full (finite) expansion when it is shorter.
    """
    if xi.is_rational:
        value = xi.rational_value()
        quotients = []
        while len(quotients) < count:
            a = floor(value)
            quotients.append(a)
            if value == a:
                break
            value = 1 / (value - a)
        return quotients
    best: List[int] = []
    for bits in precision_ladder(cap, start=max(settings.DEFAULT_PRECISION, 8 * count)):
        lo, hi = xi.refine(bits)
        best = _expand_interval(lo, hi, count)
        if len(best) >= count:
            return best
    raise UndecidedComparison(
        f"partial quotient {len(best) + 1} of {xi.to_text()}", cap or settings.PRECISION_CAP
    )


def convergents(quotients: Sequence[int]) -> Iterator[Fraction]:
    """p_k / q_k for the partial quotients a_0, a_1, ..."""
    p_prev, p = 1, None
    q_prev, q = 0, None
    for k, a in enumerate(quotients):
        if k == 0:
            p, q = a, 1
        else:
            p, p_prev = a * p + p_prev, p
            q, q_prev = a * q + q_prev, q
        yield Fraction(p, q)
