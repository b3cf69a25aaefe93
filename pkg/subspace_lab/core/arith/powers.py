# subspace_lab/core/arith/powers.py

"""
Exact comparisons between rational powers of positive rationals.

``compare_power(b, e, y)`` returns the sign of b^e - y without ever forming
b^e. Equality is decided from prime factorizations (b^e == y iff
e * ord_p(b) == ord_p(y) for every prime p); once equality is excluded the
sign follows from certified logarithms, which always terminates.
"""

from fractions import Fraction
from functools import lru_cache
from typing import Dict, Optional
import logging

from sympy import factorint

from subspace_lab.core.arith.enclosure import certified_sign, log_enclosure
from subspace_lab.core.arith.places import as_rational
from subspace_lab.errors import PreconditionError

logger = logging.getLogger(__name__)


@lru_cache(maxsize=8192)
def _valuations(x: Fraction) -> Dict[int, int]:
    out: Dict[int, int] = dict(factorint(x.numerator))
    for p, k in factorint(x.denominator).items():
        out[p] = out.get(p, 0) - k
    return out


def is_power_equal(base, exponent, value) -> bool:
    base, exponent, value = as_rational(base), as_rational(exponent), as_rational(value)
    if base <= 0 or value <= 0:
        raise PreconditionError("compare_power needs positive base and value")
    vb, vy = _valuations(base), _valuations(value)
    primes = set(vb) | set(vy)
    return all(exponent * vb.get(p, 0) == vy.get(p, 0) for p in primes)


def compare_power(base, exponent, value, cap: Optional[int] = None) -> int:
    """Sign of base**exponent - value for positive rationals and rational exponent."""
    base, exponent, value = as_rational(base), as_rational(exponent), as_rational(value)
    if is_power_equal(base, exponent, value):
        return 0
    if exponent.denominator == 1 and abs(exponent.numerator) <= 64:
        lhs = base ** int(exponent)
        return (lhs > value) - (lhs < value)

    def diff(bits: int):
        return log_enclosure(base, bits) * exponent - log_enclosure(value, bits)

    return certified_sign(diff, f"{base}^({exponent}) vs {value}", cap)


def power_le(base, exponent, value, cap: Optional[int] = None) -> bool:
    """base**exponent <= value."""
    return compare_power(base, exponent, value, cap) <= 0


def power_lt(base, exponent, value, cap: Optional[int] = None) -> bool:
    return compare_power(base, exponent, value, cap) < 0
