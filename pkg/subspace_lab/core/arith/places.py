# subspace_lab/core/arith/places.py

"""
Places of Q and their normalized absolute values.

A place is either the archimedean place (written ``inf``) or a prime p, with
|p|_p = 1/p. Everything here is exact: values are ``Fraction`` objects.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Optional, Sequence
import logging

from sympy import factorint, isprime, multiplicity

from subspace_lab.errors import ConfigError, PreconditionError

logger = logging.getLogger(__name__)

Rational = Fraction


def as_rational(value) -> Fraction:
    """Exact conversion from int, Fraction, str ('3/4', '-2') or a sympy Rational."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ConfigError(f"Expected a rational, got boolean {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ConfigError(f"Could not parse rational {value!r}") from e
    if hasattr(value, "p") and hasattr(value, "q"):
        return Fraction(int(value.p), int(value.q))
    if hasattr(value, "numerator") and hasattr(value, "denominator") and not isinstance(value, float):
        return Fraction(int(value.numerator), int(value.denominator))
    raise ConfigError(f"Refusing inexact or unknown value {value!r} where a rational is required")


def rational_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Place:
    """A place of Q. ``prime is None`` means the infinite place."""

    prime: Optional[int] = None

    def __post_init__(self):
        if self.prime is not None and not isprime(self.prime):
            raise ConfigError(f"Finite place must be a prime, got {self.prime}")

    @property
    def is_infinite(self) -> bool:
        return self.prime is None

    @property
    def s(self) -> int:
        """s(v) for K = Q: 1 at infinity, 0 at finite places."""
        return 1 if self.is_infinite else 0

    @classmethod
    def parse(cls, text) -> "Place":
        token = str(text).strip().lower()
        if token in ("inf", "infinity", "oo", "∞"):
            return INFINITY
        try:
            return cls(int(token))
        except ValueError as e:
            raise ConfigError(f"Unknown place {text!r}; use 'inf' or a prime") from e

    def sort_key(self) -> int:
        return 0 if self.prime is None else self.prime

    def __str__(self) -> str:
        return "inf" if self.prime is None else str(self.prime)


INFINITY = Place(None)


def ord_p(x: Fraction, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    x = as_rational(x)
    if x == 0:
        raise PreconditionError("ord_p is undefined at 0")
    return multiplicity(p, abs(x.numerator)) - multiplicity(p, x.denominator)


def abs_value(x, v: Place) -> Fraction:
    """|x|_v, exactly."""
    x = as_rational(x)
    if v.is_infinite:
        return abs(x)
    if x == 0:
        return Fraction(0)
    return Fraction(v.prime) ** (-ord_p(x, v.prime))


def _prime_support(values: Iterable[Fraction], denominators_only: bool = False) -> list:
    primes = set()
    for x in values:
        if x == 0:
            continue
        primes.update(factorint(x.denominator))
        if not denominators_only:
            primes.update(factorint(abs(x.numerator)))
    return sorted(primes)


def relevant_places(values: Iterable[Fraction]) -> list:
    """Infinity plus every prime dividing a numerator or denominator."""
    return [INFINITY] + [Place(p) for p in _prime_support([as_rational(v) for v in values])]


def product_formula_check(x) -> Fraction:
    """Product of |x|_v over every place where |x|_v != 1. Equals 1 for x != 0."""
    x = as_rational(x)
    if x == 0:
        raise PreconditionError("The product formula needs a nonzero rational")
    return reduce(lambda acc, v: acc * abs_value(x, v), relevant_places([x]), Fraction(1))


def height_vector(xs: Sequence) -> Fraction:
    """H(x) = prod_v max(1, |x_1|_v, ..., |x_n|_v)."""
    if len(xs) == 0:
        raise PreconditionError("height_vector needs n >= 1")
    values = [as_rational(x) for x in xs]
    result = max([Fraction(1)] + [abs(x) for x in values])
    # only primes in a denominator can push max(1, |x_i|_p) above 1
    for p in _prime_support(values, denominators_only=True):
        place = Place(p)
        result *= max([Fraction(1)] + [abs_value(x, place) for x in values])
    return result


def height_rational(x) -> int:
    """H(x/y) = max(|x|, |y|) in lowest terms."""
    x = as_rational(x)
    return max(abs(x.numerator), x.denominator)
