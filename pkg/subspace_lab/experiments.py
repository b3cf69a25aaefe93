# subspace_lab/experiments.py

"""
Experiment runners behind both the CLI and the HTTP API.

Each runner takes parsed parameters, drives the core modules and returns a
report model. Runners raise SubspaceLabError subclasses; the surfaces
translate them into exit codes or HTTP statuses.
"""

from fractions import Fraction
from typing import Dict, List, Optional, Sequence
import logging

from subspace_lab.core.approximation.roth import (
    audit_gap_principle,
    classify_solution,
    roth_window_cover,
    scan_roth,
    window_count,
)
from subspace_lab.core.arith.algebraic import AlgebraicReal, height_algebraic
from subspace_lab.core.arith.places import as_rational, rational_str
from subspace_lab.core.bounds.formulas import bound_table, composition_check, roth_bound_table, roth_bounds
from subspace_lab.core.subspace.enumeration import enumerate_solutions
from subspace_lab.core.subspace.filtration import check_u0_height, exceptional_subspace
from subspace_lab.core.subspace.gap import (
    PowerValue,
    covering_intervals,
    small_solution_classes,
    small_solution_groups,
    window_determinant_chain,
    window_members,
    window_ratio,
    window_subspace,
)
from subspace_lab.core.subspace.lattice import subspace_cover
from subspace_lab.core.subspace.partition import PartitionGrid
from subspace_lab.core.subspace.systems import FormSystem, SizeClass
from subspace_lab.errors import PreconditionError, UndecidedComparison
from subspace_lab.reports import (
    BoundRowModel,
    BoundsReport,
    ClassSpanModel,
    ClusterReport,
    CompositionModel,
    CoverReport,
    FiltrationReportModel,
    GapViolationModel,
    PartitionReport,
    PartitionRowModel,
    RothBoundsReport,
    RothCoverReport,
    RothScanReport,
    RothSolutionModel,
    SolutionModel,
    SubspaceModel,
    SubspaceScanReport,
    WindowSpanModel,
    family_summary,
)

logger = logging.getLogger(__name__)


def _positive_delta(delta) -> Fraction:
    delta = as_rational(delta)
    if not (0 < delta <= 1):
        raise PreconditionError(f"delta must lie in (0, 1], got {rational_str(delta)}")
    return delta


# ---------------------------------------------------------------------------
# roth

def run_roth_scan(xi: AlgebraicReal, delta, max_height: int, threads: Optional[int] = None, cap: Optional[int] = None) -> RothScanReport:
    delta = _positive_delta(delta)
    if max_height < 1:
        raise PreconditionError("max height must be at least 1")
    solutions = scan_roth(xi, delta, max_height, threads, cap)
    violations = audit_gap_principle(solutions, delta)
    return RothScanReport(
        xi=xi.to_text(),
        delta=rational_str(delta),
        max_height=max_height,
        solutions=[RothSolutionModel.of(s, classify_solution(s, xi, cap)) for s in solutions],
        gap_violations=[GapViolationModel.of(v) for v in violations],
        gap_principle_holds=not violations,
    )


def run_roth_bounds(xi: AlgebraicReal, delta) -> RothBoundsReport:
    delta = _positive_delta(delta)
    H_xi = height_algebraic(xi)
    bounds = roth_bounds(xi.degree, delta, H_xi)
    rows = roth_bound_table(xi.degree, delta, H_xi)
    return RothBoundsReport(m=bounds.m, omega=rational_str(bounds.omega), rows=[BoundRowModel.of(r) for r in rows])


def run_roth_cover(Q, E, delta) -> RothCoverReport:
    delta = _positive_delta(delta)
    windows = roth_window_cover(Q, E, delta)
    return RothCoverReport(
        Q=rational_str(as_rational(Q)),
        E=rational_str(as_rational(E)),
        delta=rational_str(delta),
        window_count=window_count(E, delta),
        windows=[RothCoverReport.window(w) for w in windows],
    )


# ---------------------------------------------------------------------------
# subspace

def run_subspace_scan(system: FormSystem, max_height: int, threads: Optional[int] = None, cap: Optional[int] = None) -> SubspaceScanReport:
    result = enumerate_solutions(system, max_height, threads, cap)
    return SubspaceScanReport(
        system=system.name,
        max_height=max_height,
        precision_cap=result.precision_cap,
        threads=result.threads,
        solutions=[SolutionModel.of(r) for r in result.solutions],
        boundary=[list(x) for x in result.boundary],
    )


def _default_window_starts(system: FormSystem, solutions) -> List[Fraction]:
    """One window per large-solution height, each starting at that height."""
    return sorted({r.height for r in solutions if r.size_class == SizeClass.LARGE})


def run_cluster(
    system: FormSystem,
    max_height: int,
    window_Q: Optional[Sequence] = None,
    threads: Optional[int] = None,
    cap: Optional[int] = None,
) -> ClusterReport:
    """Window spans for Q >= n^(2n/delta), partition-class spans for smaller Q.

    Without explicit Q values, one window starts at each large-solution height.
    """
    result = enumerate_solutions(system, max_height, threads, cap)
    if result.boundary:
        raise UndecidedComparison(
            f"{len(result.boundary)} boundary candidates, first {list(result.boundary[0])}", result.precision_cap
        )
    solutions = result.solutions
    n = system.n
    threshold = PowerValue(Fraction(n), Fraction(2 * n) / system.delta)
    starts = [as_rational(Q) for Q in window_Q] if window_Q else _default_window_starts(system, solutions)

    windows: List[WindowSpanModel] = []
    classes: List[ClassSpanModel] = []
    ratio = window_ratio(n, system.delta)
    for Q in starts:
        if threshold.compare(Q) <= 0:
            span = window_subspace(system, solutions, Q)
            members = window_members(solutions, Q, ratio)
            chain = None
            if len(members) >= n:
                chain = window_determinant_chain(system, [r.x for r in members[:n]], Q).holds
            windows.append(
                WindowSpanModel(Q=rational_str(Q), members=len(members), subspace=SubspaceModel.of(span), chain_holds=chain)
            )
            continue
        groups = small_solution_groups(system, solutions, Q, cap)
        spans = small_solution_classes(system, solutions, Q, cap)
        for label, U in spans.items():
            classes.append(
                ClassSpanModel(Q=rational_str(Q), label=label.label(), members=len(groups[label]), subspace=SubspaceModel.of(U))
            )
    return ClusterReport(
        system=system.name,
        max_height=max_height,
        large_threshold=threshold.to_text(),
        windows=windows,
        small_classes=classes,
    )


def run_u0(system: FormSystem, closure_cap: Optional[int] = None) -> FiltrationReportModel:
    report = exceptional_subspace(system, closure_cap)
    return FiltrationReportModel.of(system.name, report, check_u0_height(report.U0, system))


def run_bounds(n: int, delta, R: Optional[int], D: int, d: int = 1, H=1, places: int = 1) -> BoundsReport:
    """Comparison table; R defaults to n times the number of places."""
    delta = _positive_delta(delta)
    R = R if R is not None else n * places
    rows = bound_table(n, delta, R, D, d, H)
    covering = covering_intervals(n, delta, H)
    return BoundsReport(
        rows=[BoundRowModel.of(r) for r in rows],
        composition=CompositionModel.of(composition_check(n, delta, R, D)),
        covering=[family_summary(covering.I1), family_summary(covering.I2)],
    )


def run_partition(vectors: Sequence[Sequence], M_squared) -> PartitionReport:
    if not vectors:
        raise PreconditionError("no vectors to assign")
    grid = PartitionGrid(len(vectors[0]), M_squared)
    rows = []
    for y in vectors:
        label = grid.assign(y)
        rows.append(PartitionRowModel(vector=[_component_text(c) for c in y], label=label.label()))
    return PartitionReport.header(grid, rows)


def _component_text(c) -> str:
    if isinstance(c, (tuple, list)):
        return f"{rational_str(as_rational(c[0]))}+{rational_str(as_rational(c[1]))}i"
    return rational_str(as_rational(c))


def run_cover(points: Sequence[Sequence], D_v: Dict) -> CoverReport:
    return CoverReport.of(subspace_cover(points, D_v))
