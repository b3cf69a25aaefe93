# subspace_lab/core/subspace/filtration.py

"""
Slopes of a FormSystem and its exceptional subspace U_0.

For a subspace U of Q^n of dimension u,

    nu_v(U) = min over u forms at v that are independent on U of their exponent sum,
    nu(U)   = sum over v of nu_v(U),
    mu(U)   = (nu(Q^n) - nu(U)) / (n - dim U).

Independence on U is a rank condition on the restricted forms, so the
minimum is reached greedily: take the forms in order of increasing exponent
and keep each one that raises the rank.

U_0 is the intersection of the slope minimizers among the rational members
of the closure of the form kernels under sum and intersection, plus (0).
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import combinations
from typing import List, Optional, Sequence, Tuple
import logging

from subspace_lab.config import settings
from subspace_lab.core.arith.linalg import Subspace, lll_reduce
from subspace_lab.core.arith.places import Place, rational_str
from subspace_lab.core.subspace.systems import FormSystem, PlaceBlock
from subspace_lab.errors import ClosureCapExceeded, InvariantViolation, PreconditionError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Candidate:
    subspace: Subspace
    nu: Fraction
    mu: Fraction


@dataclass(frozen=True)
class FiltrationReport:
    candidates: List[Candidate]
    mu0: Fraction
    minimizers: List[Subspace]
    U0: Subspace
    semistable: bool
    closure_size: int = 0
    nu_minimizers: List[Subspace] = field(default_factory=list)
    flags: List[str] = field(default_factory=list)

    @property
    def verified(self) -> bool:
        return not any(f.startswith("mu(U0)") for f in self.flags)


# ---------------------------------------------------------------------------
# nu and mu

def _restricted_rows(system: FormSystem, block: PlaceBlock, U: Subspace) -> List[list]:
    """Row i: the values L_i(b_1), ..., L_i(b_u) on the canonical basis of U."""
    return [[form.value(system.field, b) for b in U.basis] for form in block.forms]


def _check_ambient(U: Subspace, system: FormSystem):
    if U.ambient != system.n:
        raise PreconditionError(f"Subspace lives in Q^{U.ambient}, system has n = {system.n}")


def nu_v(U: Subspace, system: FormSystem, place: Place) -> Fraction:
    _check_ambient(U, system)
    if U.is_zero:
        return Fraction(0)
    block = system.block(place)
    rows = _restricted_rows(system, block, U)
    order = sorted(range(system.n), key=lambda i: (block.exponents[i], i))
    chosen: List[list] = []
    total = Fraction(0)
    for i in order:
        if system.field.rank(chosen + [rows[i]]) > len(chosen):
            chosen.append(rows[i])
            total += block.exponents[i]
            if len(chosen) == U.dim:
                return total
    logger.error(f"No {U.dim} forms at {place} are independent on {U}")
    raise InvariantViolation(f"forms at {place} have rank {len(chosen)} on a subspace of dimension {U.dim}")


def nu_v_bruteforce(U: Subspace, system: FormSystem, place: Place) -> Fraction:
    """Minimum over every u-subset of forms, for cross-checking nu_v."""
    _check_ambient(U, system)
    if U.is_zero:
        return Fraction(0)
    block = system.block(place)
    rows = _restricted_rows(system, block, U)
    best: Optional[Fraction] = None
    for subset in combinations(range(system.n), U.dim):
        if system.field.rank([rows[i] for i in subset]) == U.dim:
            total = sum((block.exponents[i] for i in subset), Fraction(0))
            best = total if best is None else min(best, total)
    if best is None:
        raise InvariantViolation(f"no {U.dim} forms at {place} are independent on {U}")
    return best


def nu(U: Subspace, system: FormSystem) -> Fraction:
    return sum((nu_v(U, system, place) for place in system.places), Fraction(0))


def mu(U: Subspace, system: FormSystem) -> Fraction:
    _check_ambient(U, system)
    if U.is_full:
        raise PreconditionError("mu is defined for proper subspaces only")
    return (system.exponent_sum - nu(U, system)) / (system.n - U.dim)


# ---------------------------------------------------------------------------
# closure

def vojta_closure(hyperplanes: Sequence[Subspace], cap: Optional[int] = None) -> List[Subspace]:
    """Closure of the inputs under pairwise + and intersection, in discovery order."""
    cap = cap or settings.CLOSURE_CAP
    members: List[Subspace] = []
    seen = set()
    for H in hyperplanes:
        if H not in seen:
            seen.add(H)
            members.append(H)
    if len(members) > cap:
        raise ClosureCapExceeded(len(members), cap)

    done = 0
    while done < len(members):
        current = members[done]
        for other in members[: done + 1]:
            for combined in (current + other, current & other):
                if combined in seen:
                    continue
                seen.add(combined)
                members.append(combined)
                if len(members) > cap:
                    logger.error(f"Closure passed {cap} subspaces")
                    raise ClosureCapExceeded(len(members), cap)
        done += 1
    logger.info(f"Closure of {len(hyperplanes)} subspaces has {len(members)} members")
    return members


def form_kernels(system: FormSystem) -> List[Subspace]:
    """Kernels of all forms over the coefficient field, as subspaces of Q^(nd)."""
    f = system.field
    return [f.kernel_of_forms([form.coeffs], system.n) for block in system.blocks for form in block.forms]


def rational_candidates(system: FormSystem, cap: Optional[int] = None) -> Tuple[List[Subspace], int]:
    """Proper rational members of the kernel closure plus (0); also returns the closure size."""
    f, n = system.field, system.n
    closure = vojta_closure(form_kernels(system), cap)
    zero = Subspace.zero(n)
    candidates = [zero]
    for W in closure:
        if not f.is_defined_over_rationals(W, n):
            continue
        U = f.rational_part_of(W, n)
        if U.is_full or U in candidates:
            continue
        candidates.append(U)
    return candidates, len(closure)


# ---------------------------------------------------------------------------
# exceptional subspace

def exceptional_subspace(system: FormSystem, cap: Optional[int] = None) -> FiltrationReport:
    n = system.n
    subspaces, closure_size = rational_candidates(system, cap)
    candidates = [Candidate(U, nu(U, system), mu(U, system)) for U in subspaces]
    candidates.sort(key=lambda c: (c.subspace.dim, c.subspace.basis))

    mu0 = min(c.mu for c in candidates)
    minimizers = [c.subspace for c in candidates if c.mu == mu0]
    U0 = reduce(lambda a, b: a & b, minimizers, Subspace.full(n))

    flags: List[str] = []
    mu_U0 = mu(U0, system)
    if mu_U0 != mu0:
        flags.append(f"mu(U0) = {rational_str(mu_U0)} differs from mu0 = {rational_str(mu0)}")
    if any(c.mu < mu_U0 for c in candidates):
        flags.append("some candidate has slope below mu(U0)")

    nu0 = min(c.nu for c in candidates if not c.subspace.is_zero) if len(candidates) > 1 else Fraction(0)
    nu_minimizers = [c.subspace for c in candidates if not c.subspace.is_zero and c.nu == nu0]
    if nu_minimizers and set(nu_minimizers) != set(minimizers):
        flags.append("minimizers of nu and of mu differ")

    for flag in flags:
        logger.warning(f"System {system.name}: {flag}")
    logger.info(
        f"System {system.name}: {len(candidates)} candidates, mu0 = {rational_str(mu0)}, dim U0 = {U0.dim}"
    )
    return FiltrationReport(
        candidates=candidates,
        mu0=mu0,
        minimizers=minimizers,
        U0=U0,
        semistable=U0.is_zero,
        closure_size=closure_size,
        nu_minimizers=nu_minimizers,
        flags=flags,
    )


# ---------------------------------------------------------------------------
# bases of U_0

def reduced_basis(U: Subspace) -> List[Tuple[int, ...]]:
    """Primitive integer basis of U, LLL-reduced."""
    if U.is_zero:
        return []
    return lll_reduce(U.primitive_integer_basis())


def check_u0_height(U0: Subspace, system: FormSystem) -> bool:
    """Every reduced basis vector has max-norm at most (sqrt(n) H)^(4^n)."""
    n = system.n
    limit = (n * system.H * system.H) ** (4**n)
    for vector in reduced_basis(U0):
        if max(abs(c) for c in vector) ** 2 > limit:
            logger.warning(f"Basis vector {vector} of U0 exceeds (sqrt(n) H)^(4^n)")
            return False
    return True


def unit_sum_subsets(U0: Subspace) -> Optional[List[List[int]]]:
    """Disjoint index sets I_i with U0 = {x : sum_(j in I_i) x_j = 0 for all i}, or None.

    Such equations are 0/1 rows with disjoint supports, which is already the
    reduced echelon form of the space they span.
    """
    equations = U0.annihilator()
    subsets: List[List[int]] = []
    used = set()
    for row in equations.basis:
        if any(c not in (0, 1) for c in row):
            return None
        support = [j for j, c in enumerate(row) if c == 1]
        if used & set(support):
            return None
        used.update(support)
        subsets.append(support)
    return subsets
