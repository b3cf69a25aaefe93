# subspace_lab/core/bounds/formulas.py

"""
Calculators for the explicit bounds on the number of solutions / subspaces.

All logarithms are natural logarithms. Every value is computed as a certified
mpmath interval and converted to rational endpoints. Values above 2^1024 are
reported through their base-2 logarithm only, and the doubly exponential
bound through log2 log2.
"""

from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import comb
from typing import Dict, List, Optional, Tuple, Union
import logging

from mpmath import iv

from subspace_lab.core.arith.enclosure import (
    RealEnclosure,
    floor_certified,
    from_iv,
    iv_precision,
    to_iv,
)
from subspace_lab.core.arith.places import as_rational, rational_str
from subspace_lab.core.arith.powers import compare_power
from subspace_lab.errors import PreconditionError, UndecidedComparison

logger = logging.getLogger(__name__)

DEFAULT_BITS = 128
LOG_FORM_THRESHOLD = 1024  # log2 above which only the log form is reported
OUTSIDE_RANGE = "outside the implicit parameter range"


class Form:
    VALUE = "value"
    LOG2 = "log2"
    LOG2LOG2 = "log2log2"


@dataclass(frozen=True)
class BoundReport:
    name: str
    form: str
    log2: Optional[RealEnclosure]
    value: Optional[RealEnclosure] = None
    log2log2: Optional[RealEnclosure] = None
    inputs: Dict[str, str] = field(default_factory=dict)
    flags: List[str] = field(default_factory=list)
    threshold: Optional[str] = None
    threshold_log2: Optional[RealEnclosure] = None

    @property
    def reported(self) -> RealEnclosure:
        if self.form == Form.VALUE:
            return self.value
        if self.form == Form.LOG2:
            return self.log2
        return self.log2log2


def _inputs(**kwargs) -> Dict[str, str]:
    out = {}
    for k, v in kwargs.items():
        if isinstance(v, Fraction):
            out[k] = rational_str(v)
        elif isinstance(v, RealEnclosure):
            out[k] = v.to_text()
        else:
            out[k] = str(v)
    return out


def _check_common(n: Optional[int], delta: Fraction, R=None, D=None):
    if n is not None and n < 2:
        raise PreconditionError(f"n must be >= 2, got {n}")
    if not (0 < delta <= 1):
        raise PreconditionError(f"delta must lie in (0, 1], got {delta}")
    if R is not None and R < 1:
        raise PreconditionError(f"R must be >= 1, got {R}")
    if D is not None and D < 1:
        raise PreconditionError(f"D must be >= 1, got {D}")


def _q(x) -> "iv.mpf":
    return to_iv(as_rational(x))


def _report_from_iv(name: str, value, bits: int, inputs: Dict[str, str], flags: List[str]) -> BoundReport:
    """Pick the reported form for a value held as an mpmath interval."""
    enc = from_iv(value, bits)
    log2 = from_iv(iv.ln(value) / iv.ln(2), bits) if enc.lower > 0 else None
    if log2 is None or log2.upper <= LOG_FORM_THRESHOLD:
        return BoundReport(name, Form.VALUE, log2, value=enc, inputs=inputs, flags=flags)
    return BoundReport(name, Form.LOG2, log2, inputs=inputs, flags=flags)


def _loglog_factor(inner, flags: List[str], label: str):
    """log(inner) with a flag when inner <= 1 makes it non-positive."""
    if from_iv(inner, iv.prec).upper <= 1:
        flags.append(f"{label}: {OUTSIDE_RANGE}")
        logger.warning(f"{label} is non-positive; reporting the raw value")
    return iv.ln(inner)


# ---------------------------------------------------------------------------
# quantitative Roth theorem

@dataclass(frozen=True)
class RothBounds:
    large_bound: BoundReport
    small_bound: BoundReport
    m: int
    omega: Fraction
    C_log: BoundReport


def roth_bounds(d: int, delta, H_xi: Union[RealEnclosure, Fraction, int], bits: int = DEFAULT_BITS) -> RothBounds:
    delta = as_rational(delta)
    _check_common(None, delta)
    if d < 1:
        raise PreconditionError(f"d must be >= 1, got {d}")
    H_xi = H_xi if isinstance(H_xi, RealEnclosure) else RealEnclosure.exact(as_rational(H_xi))
    inputs = _inputs(d=d, delta=delta, H_xi=H_xi)

    with iv_precision(bits):
        large_flags: List[str] = []
        log2d = iv.ln(iv.mpf(2 * d))
        large = iv.mpf(2) ** 25 * _q(delta) ** -3 * log2d * _loglog_factor(log2d / _q(delta), large_flags, "log(delta^-1 log 2d)")
        large_report = _report_from_iv("roth_large", large, bits, inputs, large_flags)

        small_flags: List[str] = []
        inner = to_iv(H_xi.max_with(4))
        small = 10 * _q(1 / delta) * iv.ln(iv.ln(inner))
        small_report = _report_from_iv("roth_small", small, bits, inputs, small_flags)

    def m_enclosure(b: int) -> RealEnclosure:
        with iv_precision(b):
            return from_iv(25600 * _q(delta) ** -2 * iv.ln(iv.mpf(2 * d)), b)

    m = 1 + floor_certified(m_enclosure, "25600 delta^-2 log(2d)")
    omega = 162 * Fraction(m) ** 2 / delta

    binom = comb(d, 2)
    with iv_precision(bits):
        if binom == 0:
            c_log = BoundReport("roth_C_log", Form.VALUE, None, value=RealEnclosure.exact(0), inputs=inputs)
        else:
            # log2(C_log) = log2(3 m binom / delta) + m log2(240 m^2 / delta) + log2(log(36 H))
            ln2 = iv.ln(2)
            log2_clog = (
                iv.ln(_q(Fraction(3 * m * binom) / delta)) / ln2
                + m * iv.ln(_q(Fraction(240 * m * m) / delta)) / ln2
                + iv.ln(iv.ln(36 * to_iv(H_xi))) / ln2
            )
            log2_enc = from_iv(log2_clog, bits)
            if log2_enc.upper <= LOG_FORM_THRESHOLD:
                value = iv.exp(log2_clog * ln2)
                c_log = BoundReport("roth_C_log", Form.VALUE, log2_enc, value=from_iv(value, bits), inputs=inputs)
            else:
                c_log = BoundReport("roth_C_log", Form.LOG2, log2_enc, inputs=inputs)
    return RothBounds(large_report, small_report, m, omega, c_log)


def roth_total_bound(d: int, delta, H_xi, bits: int = DEFAULT_BITS) -> BoundReport:
    """large_bound + small_bound as a single row."""
    bounds = roth_bounds(d, delta, H_xi, bits)
    flags = bounds.large_bound.flags + bounds.small_bound.flags
    with iv_precision(bits):
        total = to_iv(bounds.large_bound.value) + to_iv(bounds.small_bound.value)
        return _report_from_iv("roth_total", total, bits, bounds.large_bound.inputs, flags)


# ---------------------------------------------------------------------------
# subspace theorem bounds

def theorem21_bound(n: int, delta, R: int, D: int, bits: int = DEFAULT_BITS) -> BoundReport:
    """10^9 2^(2n) n^14 delta^-3 log(3 delta^-1 R D) log(delta^-1 log 3RD)."""
    delta = as_rational(delta)
    _check_common(n, delta, R, D)
    flags: List[str] = []
    with iv_precision(bits):
        log3rd = iv.ln(iv.mpf(3 * R * D))
        value = (
            iv.mpf(10) ** 9
            * iv.mpf(2) ** (2 * n)
            * iv.mpf(n) ** 14
            * _q(delta) ** -3
            * iv.ln(_q(3 * R * D / delta))
            * _loglog_factor(log3rd / _q(delta), flags, "log(delta^-1 log 3RD)")
        )
        return _report_from_iv("theorem21", value, bits, _inputs(n=n, delta=delta, R=R, D=D), flags)


def large_height_threshold(n: int, delta, H=1, bits: int = DEFAULT_BITS) -> Tuple[str, RealEnclosure]:
    """max(2H, n^(2n/delta)) as text and as a log2 enclosure."""
    delta, H = as_rational(delta), as_rational(H)
    exponent = Fraction(2 * n) / delta
    with iv_precision(bits):
        if compare_power(n, exponent, 2 * H) <= 0:
            return rational_str(2 * H), from_iv(iv.ln(_q(2 * H)) / iv.ln(2), bits)
        return f"{n}^({rational_str(exponent)})", from_iv(_q(exponent) * iv.ln(n) / iv.ln(2), bits)


def theoremB_bound(n: int, delta, R: int, D: int, H=1, bits: int = DEFAULT_BITS) -> BoundReport:
    """4^((n+9)^2) delta^(-n-4) log(2RD) log log(2RD), valid for heights >= max(2H, n^(2n/delta))."""
    delta, H = as_rational(delta), as_rational(H)
    _check_common(n, delta, R, D)
    if H < 1:
        raise PreconditionError(f"H must be >= 1, got {rational_str(H)}")
    threshold, threshold_log2 = large_height_threshold(n, delta, H, bits)
    flags: List[str] = []
    with iv_precision(bits):
        log2rd = iv.ln(iv.mpf(2 * R * D))
        value = (
            iv.mpf(4) ** ((n + 9) ** 2)
            * _q(delta) ** (-n - 4)
            * log2rd
            * _loglog_factor(log2rd, flags, "log log(2RD)")
        )
        report = _report_from_iv("theoremB", value, bits, _inputs(n=n, delta=delta, R=R, D=D, H=H), flags)
    return replace(report, threshold=threshold, threshold_log2=threshold_log2)


def schmidt89_bound(n: int, delta) -> BoundReport:
    """2^(2^(27 n delta^-2)), reported as log2 log2 = 27 n delta^-2."""
    delta = as_rational(delta)
    _check_common(n, delta)
    loglog = Fraction(27 * n) / delta**2
    log2 = RealEnclosure.exact(Fraction(2) ** int(loglog)) if loglog.denominator == 1 and loglog <= 4096 else None
    return BoundReport(
        "schmidt89",
        Form.LOG2LOG2,
        log2,
        log2log2=RealEnclosure.exact(loglog),
        inputs=_inputs(n=n, delta=delta),
    )


@dataclass(frozen=True)
class WindowConstants:
    m: int
    omega: RealEnclosure


def theorem31_constants(n: int, delta, R: int, D: int, bits: int = DEFAULT_BITS) -> WindowConstants:
    """m = [10^8 2^(2n) n^14 delta^-2 log(3 delta^-1 RD)], omega = 3 n delta^-1 log 3RD."""
    delta = as_rational(delta)
    _check_common(n, delta, R, D)

    def m_enclosure(b: int) -> RealEnclosure:
        with iv_precision(b):
            value = iv.mpf(10) ** 8 * iv.mpf(2) ** (2 * n) * iv.mpf(n) ** 14 * _q(delta) ** -2 * iv.ln(_q(3 * R * D / delta))
            return from_iv(value, b)

    m = floor_certified(m_enclosure, "10^8 2^(2n) n^14 delta^-2 log(3 delta^-1 RD)")
    with iv_precision(bits):
        omega = from_iv(3 * n * _q(1 / delta) * iv.ln(iv.mpf(3 * R * D)), bits)
    return WindowConstants(m, omega)


def theorem21_window_total(m: int, omega: Union[RealEnclosure, Fraction], n: int, delta, bits: int = DEFAULT_BITS) -> int:
    """m * (1 + [log omega / log(1 + delta/2n)]) + 1."""
    delta = as_rational(delta)
    if m < 1:
        raise PreconditionError(f"m must be >= 1, got {m}")
    ratio = 1 + delta / (2 * n)
    exact_omega = None
    if not isinstance(omega, RealEnclosure):
        exact_omega = as_rational(omega)
        omega = RealEnclosure.exact(exact_omega)
    if omega.upper <= 1:
        raise PreconditionError(f"omega must exceed 1, got {omega.to_text()}")

    def quotient(b: int) -> RealEnclosure:
        with iv_precision(b):
            return from_iv(iv.ln(to_iv(omega)) / iv.ln(to_iv(ratio)), b)

    is_exactly = None
    if exact_omega is not None:
        is_exactly = lambda k: k >= 0 and exact_omega == ratio**k
    k = floor_certified(quotient, "log omega / log(1 + delta/2n)", is_exactly=is_exactly)
    return m * (1 + k) + 1


@dataclass(frozen=True)
class CompositionCheck:
    window_total: int
    theorem21: BoundReport
    holds: bool
    log2_margin: RealEnclosure  # log2(theorem21) - log2(window_total)


def composition_check(n: int, delta, R: int, D: int, bits: int = DEFAULT_BITS) -> CompositionCheck:
    """theorem21_window_total(theorem31_constants) against theorem21_bound."""
    constants = theorem31_constants(n, delta, R, D, bits)
    total = theorem21_window_total(constants.m, constants.omega, n, delta, bits)
    bound = theorem21_bound(n, delta, R, D, bits)
    with iv_precision(bits):
        margin = from_iv(to_iv(bound.log2) - iv.ln(iv.mpf(total)) / iv.ln(2), bits)
    if margin.sign() is None:
        raise UndecidedComparison(f"composition margin {margin.to_text()}", bits)
    holds = margin.lower >= 0
    if not holds:
        logger.warning(f"Window total {total} exceeds theorem21 bound at n={n}, delta={delta}, R={R}, D={D}")
    return CompositionCheck(total, bound, holds, margin)


# ---------------------------------------------------------------------------
# small solutions

def small_bound(n: int, d: int, delta, H, bits: int = DEFAULT_BITS) -> Dict[str, BoundReport]:
    """delta^-1((10^3 n)^(nd) + 4n log log 4H) and the K = Q variant delta^-1(10^(3n) + 4n log log 4H)."""
    delta, H = as_rational(delta), as_rational(H)
    _check_common(n, delta)
    if d < 1 or H < 1:
        raise PreconditionError("small_bound needs d >= 1 and H >= 1")
    inputs = _inputs(n=n, d=d, delta=delta, H=H)
    with iv_precision(bits):
        loglog = 4 * n * iv.ln(iv.ln(_q(4 * H)))
        general = _q(1 / delta) * (iv.mpf(1000 * n) ** (n * d) + loglog)
        rational = _q(1 / delta) * (iv.mpf(10) ** (3 * n) + loglog)
        return {
            "general": _report_from_iv("theorem22_general", general, bits, inputs, []),
            "rational": _report_from_iv("theorem22_rational", rational, bits, inputs, []),
        }


def bound_table(n: int, delta, R: int, D: int, d: int = 1, H=1, bits: int = DEFAULT_BITS) -> List[BoundReport]:
    """The five comparison rows behind ``subspace bounds``."""
    delta = as_rational(delta)
    check = composition_check(n, delta, R, D, bits)
    with iv_precision(bits):
        total = iv.mpf(check.window_total)
        total_row = _report_from_iv(
            "theorem31_window_total", total, bits, _inputs(n=n, delta=delta, R=R, D=D), [] if check.holds else ["exceeds theorem21"]
        )
    small = small_bound(n, d, delta, H, bits)
    return [
        theorem21_bound(n, delta, R, D, bits),
        theoremB_bound(n, delta, R, D, H, bits=bits),
        schmidt89_bound(n, delta),
        total_row,
        small["rational"] if d == 1 else small["general"],
    ]


def roth_bound_table(d: int, delta, H_xi, bits: int = DEFAULT_BITS) -> List[BoundReport]:
    bounds = roth_bounds(d, delta, H_xi, bits)
    return [bounds.large_bound, bounds.small_bound, bounds.C_log, roth_total_bound(d, delta, H_xi, bits)]
