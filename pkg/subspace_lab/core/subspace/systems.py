# subspace_lab/core/subspace/systems.py

"""
Systems of inequalities

    |L_i^(v)(x)|_v <= C_v * H(x)^(c_iv)     (v in S, i = 1..n)

over K = Q, in x in Z^n. A system is immutable once built; it is loaded from
TOML (or an equivalent mapping posted to the API) and validated against the
technical conditions every count in this package relies on.

TOML layout::

    name = "cubic"
    n = 3
    delta = "1/2"
    generator = "poly=[-2,0,0,1];interval=[1,2]"   # optional, coefficients may use t

    [meta]
    H = "2"
    D = 3
    R = 3

    [[places]]
    place = "inf"
    constant = "1"
    forms = [["1", "t", "t^2"], ["0", "1", "0"], ["0", "0", "1"]]
    exponents = ["-5/2", "1", "1"]
"""

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union
import logging

from pydantic import BaseModel, Field, ValidationError

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from subspace_lab.core.approximation.roth import SizeClass
from subspace_lab.core.arith.algebraic import AlgebraicReal
from subspace_lab.core.arith.enclosure import RealEnclosure, certified_le
from subspace_lab.core.arith.field import NumberField
from subspace_lab.core.arith.forms import LinearForm, forms_determinant
from subspace_lab.core.arith.places import INFINITY, Place, abs_value, as_rational, rational_str
from subspace_lab.core.arith.powers import compare_power
from subspace_lab.errors import ConfigError, PreconditionError

logger = logging.getLogger(__name__)

Scalar = Union[str, int]


# ---------------------------------------------------------------------------
# file / request models

class PlaceBlockModel(BaseModel):
    place: Scalar = Field(..., description="'inf' or a prime number")
    constant: Scalar = Field("1", description="C_v as an exact rational string")
    forms: List[List[Scalar]] = Field(..., description="n forms, each a list of n coefficients")
    exponents: List[Scalar] = Field(..., description="c_iv for each form, exact rationals")


class MetaModel(BaseModel):
    H: Scalar = Field("1", description="Upper bound for the heights of the form coefficients")
    D: int = Field(1, ge=1, description="Degree bound for the coefficient field")
    R: Optional[int] = Field(None, ge=1, description="Number of distinct forms; defaults to n*|S|")


class FormSystemModel(BaseModel):
    name: str = Field("system")
    n: int = Field(..., ge=2)
    delta: Scalar
    generator: Optional[str] = Field(None, description="poly=[...];interval=[lo,hi] for the symbol t")
    meta: MetaModel = Field(default_factory=MetaModel)
    places: List[PlaceBlockModel]


# ---------------------------------------------------------------------------
# domain types

@dataclass(frozen=True)
class PlaceBlock:
    place: Place
    forms: Tuple[LinearForm, ...]
    exponents: Tuple[Fraction, ...]
    constant: Fraction


@dataclass(frozen=True)
class FormSystem:
    n: int
    delta: Fraction
    field: NumberField
    blocks: Tuple[PlaceBlock, ...]
    H: Fraction
    D: int
    R: Optional[int] = None
    name: str = "system"

    @property
    def places(self) -> List[Place]:
        return [b.place for b in self.blocks]

    def block(self, place: Place) -> PlaceBlock:
        for b in self.blocks:
            if b.place == place:
                return b
        raise PreconditionError(f"System {self.name} has no block for place {place}")

    @property
    def infinite_block(self) -> PlaceBlock:
        return self.block(INFINITY)

    @property
    def exponent_sum(self) -> Fraction:
        return sum((c for b in self.blocks for c in b.exponents), Fraction(0))

    @property
    def effective_R(self) -> int:
        return self.R if self.R is not None else default_R(self)

    def with_exponents(self, place: Place, exponents) -> "FormSystem":
        blocks = tuple(
            PlaceBlock(b.place, b.forms, tuple(as_rational(c) for c in exponents), b.constant) if b.place == place else b
            for b in self.blocks
        )
        return FormSystem(self.n, self.delta, self.field, blocks, self.H, self.D, self.R, self.name)

    def to_mapping(self) -> Dict:
        data = {
            "name": self.name,
            "n": self.n,
            "delta": rational_str(self.delta),
            "meta": {"H": rational_str(self.H), "D": self.D},
            "places": [
                {
                    "place": str(b.place),
                    "constant": rational_str(b.constant),
                    "forms": [f.to_text(self.field) for f in b.forms],
                    "exponents": [rational_str(c) for c in b.exponents],
                }
                for b in self.blocks
            ],
        }
        if self.R is not None:
            data["meta"]["R"] = self.R
        if not self.field.is_rational_field:
            data["generator"] = self.field.generator.to_text()
        return data


@dataclass(frozen=True)
class SolutionRecord:
    x: Tuple[int, ...]
    height: Fraction
    values: Tuple[Tuple[str, int, RealEnclosure], ...]  # (place, form index, |L_i(x)|_v)
    size_class: SizeClass


# ---------------------------------------------------------------------------
# loading

def system_from_mapping(data: Dict) -> FormSystem:
    try:
        model = FormSystemModel.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"Invalid system definition: {e}") from e

    field = NumberField(AlgebraicReal.parse(model.generator)) if model.generator else NumberField.rationals()
    delta = as_rational(model.delta)
    blocks = []
    seen = set()
    for raw in model.places:
        place = Place.parse(raw.place)
        if place in seen:
            raise ConfigError(f"Place {place} appears twice")
        seen.add(place)
        if len(raw.forms) != model.n or len(raw.exponents) != model.n:
            raise ConfigError(f"Place {place} needs exactly {model.n} forms and {model.n} exponents")
        forms = []
        for coeffs in raw.forms:
            if len(coeffs) != model.n:
                raise ConfigError(f"Form {coeffs} at place {place} must have {model.n} coefficients")
            form = LinearForm(tuple(field.parse(c) for c in coeffs))
            if not place.is_infinite and not form.is_rational(field):
                raise ConfigError(f"Forms at the finite place {place} must have rational coefficients")
            forms.append(form)
        constant = as_rational(raw.constant)
        blocks.append(PlaceBlock(place, tuple(forms), tuple(as_rational(c) for c in raw.exponents), constant))
    blocks.sort(key=lambda b: b.place.sort_key())
    system = FormSystem(
        n=model.n,
        delta=delta,
        field=field,
        blocks=tuple(blocks),
        H=as_rational(model.meta.H),
        D=model.meta.D,
        R=model.meta.R,
        name=model.name,
    )
    logger.info(f"Loaded system {system.name}: n={system.n}, delta={rational_str(delta)}, places={[str(p) for p in system.places]}")
    return system


def load_system(path: Union[str, Path]) -> FormSystem:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"System file {path} does not exist")
    try:
        with path.open("rb") as f:
            data = tomllib.load(f)
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"{path}: {e}") from e
    data.setdefault("name", path.stem)
    return system_from_mapping(data)


# ---------------------------------------------------------------------------
# validation

def distinct_form_count(system: FormSystem) -> int:
    return len({form.coeffs for b in system.blocks for form in b.forms})


def default_R(system: FormSystem) -> int:
    """n * |S|, the convenience value for R."""
    return system.n * len(system.blocks)


def _determinant_abs(system: FormSystem, block: PlaceBlock):
    """|det(L_1..L_n)|_v: exact Fraction, or a precision -> enclosure function at inf."""
    value = forms_determinant(block.forms, system.field)
    if system.field.is_rational(value):
        return abs_value(value[0], block.place)
    return lambda bits: abs(system.field.enclose(value, bits))


def validate_system(system: FormSystem, cap: Optional[int] = None) -> List[str]:
    """Violated technical conditions, as readable strings; empty means valid."""
    problems: List[str] = []
    n, delta = system.n, system.delta
    if not (0 < delta <= 1):
        problems.append(f"delta must lie in (0, 1], got {rational_str(delta)}")
    if INFINITY not in system.places:
        problems.append("the infinite place must be in S")
    if system.H < 1:
        problems.append(f"meta H must be >= 1, got {rational_str(system.H)}")
    if system.D < system.field.degree:
        problems.append(f"meta D = {system.D} is below the coefficient field degree {system.field.degree}")
    if system.R is not None and system.R < distinct_form_count(system):
        problems.append(f"meta R = {system.R} is below the number of distinct forms {distinct_form_count(system)}")

    determinants = []
    for block in system.blocks:
        if len(block.forms) != n or any(f.n != n for f in block.forms):
            problems.append(f"place {block.place}: expected {n} forms in {n} variables")
            continue
        if block.constant <= 0:
            problems.append(f"place {block.place}: C_v must be positive, got {rational_str(block.constant)}")
        if max(block.exponents) != block.place.s:
            problems.append(
                f"place {block.place}: max c_iv = {rational_str(max(block.exponents))} but s(v) = {block.place.s}"
            )
        det_abs = _determinant_abs(system, block)
        if isinstance(det_abs, Fraction) and det_abs == 0:
            problems.append(f"place {block.place}: forms are linearly dependent (zero determinant)")
            continue
        determinants.append(det_abs)

    total = system.exponent_sum
    if total > -delta:
        problems.append(f"sum of exponents {rational_str(total)} exceeds -delta = {rational_str(-delta)}")

    if len(determinants) == len(system.blocks) and all(b.constant > 0 for b in system.blocks):
        if not _constants_within_determinants(system, determinants, cap):
            problems.append("product of C_v exceeds prod |det|_v^(1/n)")

    for problem in problems:
        logger.warning(f"System {system.name}: {problem}")
    return problems


def _constants_within_determinants(system: FormSystem, determinants, cap: Optional[int]) -> bool:
    """(prod C_v)^n <= prod |det_v|_v, certified."""
    lhs = Fraction(1)
    for b in system.blocks:
        lhs *= b.constant
    lhs = lhs ** system.n
    exact = Fraction(1)
    irrational = []
    for d in determinants:
        if isinstance(d, Fraction):
            exact *= d
        else:
            irrational.append(d)
    if not irrational:
        return lhs <= exact

    def diff(bits: int) -> RealEnclosure:
        product = RealEnclosure.exact(exact, bits)
        for fn in irrational:
            product = product * fn(bits)
        return product - lhs

    return certified_le(diff, "prod C_v <= prod |det|_v^(1/n)", cap)


def require_valid(system: FormSystem, cap: Optional[int] = None):
    problems = validate_system(system, cap)
    if problems:
        raise PreconditionError(f"System {system.name} is not valid: " + "; ".join(problems))


# ---------------------------------------------------------------------------
# size classes

def large_threshold_reached(height, n: int, delta, H) -> bool:
    """height >= max(H, n^(2n/delta)), exact (rational powers via prime valuations or certified logs)."""
    height, delta, H = as_rational(height), as_rational(delta), as_rational(H)
    if height < H:
        return False
    return compare_power(n, Fraction(2 * n) / delta, height) <= 0


def classify_size(record: SolutionRecord, system: FormSystem) -> SizeClass:
    if large_threshold_reached(record.height, system.n, system.delta, system.H):
        return SizeClass.LARGE
    return SizeClass.SMALL
