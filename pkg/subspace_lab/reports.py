# subspace_lab/reports.py

"""
Report models shared by the CLI and the HTTP API.

Every number is an exact rational string or an enclosure "[lo, hi]" with
rational endpoints. JSON comes from ``model_dump_json``; CSV from a pandas
DataFrame built from each report's ``table()``.
"""

from pathlib import Path
from typing import Dict, List, Optional
import logging

import pandas as pd
from pydantic import BaseModel, Field

from subspace_lab.core.approximation.roth import GapViolation, RothSolution, RothWindow, SizeClass
from subspace_lab.core.arith.enclosure import RealEnclosure
from subspace_lab.core.arith.linalg import Subspace
from subspace_lab.core.arith.places import rational_str
from subspace_lab.core.bounds.formulas import BoundReport, CompositionCheck
from subspace_lab.core.subspace.filtration import FiltrationReport, reduced_basis, unit_sum_subsets
from subspace_lab.core.subspace.gap import HeightWindow, WindowFamily
from subspace_lab.core.subspace.lattice import CoverResult
from subspace_lab.core.subspace.partition import PartitionGrid
from subspace_lab.core.subspace.systems import SolutionRecord
from subspace_lab.errors import ConfigError

logger = logging.getLogger(__name__)


def _enc(value: Optional[RealEnclosure]) -> Optional[str]:
    return None if value is None else value.to_text()


# ---------------------------------------------------------------------------
# building blocks

class SubspaceModel(BaseModel):
    dim: int = Field(..., description="Dimension of the subspace")
    basis: List[List[str]] = Field(..., description="Canonical reduced echelon basis, exact rationals")

    @classmethod
    def of(cls, U: Subspace) -> "SubspaceModel":
        return cls(dim=U.dim, basis=U.to_text())


class RothSolutionModel(BaseModel):
    alpha: str
    height: int
    side: str
    size_class: str
    margin: str = Field(..., description="H(alpha)^(-2-delta) - |xi - alpha| as an enclosure")

    @classmethod
    def of(cls, solution: RothSolution, size_class: SizeClass) -> "RothSolutionModel":
        return cls(
            alpha=rational_str(solution.alpha),
            height=solution.height,
            side=solution.side.value,
            size_class=size_class.value,
            margin=solution.satisfies_margin.to_text(),
        )


class GapViolationModel(BaseModel):
    first: str
    second: str
    side: str
    Q: str

    @classmethod
    def of(cls, violation: GapViolation) -> "GapViolationModel":
        return cls(
            first=rational_str(violation.first.alpha),
            second=rational_str(violation.second.alpha),
            side=violation.window.side.value,
            Q=rational_str(violation.window.Q),
        )


class SolutionModel(BaseModel):
    x: List[int]
    height: str
    size_class: str
    values: List[str] = Field(default_factory=list, description="place:index=|L_i(x)|_v")

    @classmethod
    def of(cls, record: SolutionRecord) -> "SolutionModel":
        return cls(
            x=list(record.x),
            height=rational_str(record.height),
            size_class=record.size_class.value,
            values=[f"{place}:{i}={enc.to_text()}" for place, i, enc in record.values],
        )


class BoundRowModel(BaseModel):
    name: str
    form: str = Field(..., description="value, log2 or log2log2")
    reported: Optional[str]
    value: Optional[str] = None
    log2: Optional[str] = None
    log2log2: Optional[str] = None
    inputs: Dict[str, str] = Field(default_factory=dict)
    flags: List[str] = Field(default_factory=list)
    threshold: Optional[str] = Field(None, description="smallest height the bound applies to")
    threshold_log2: Optional[str] = None

    @classmethod
    def of(cls, report: BoundReport) -> "BoundRowModel":
        return cls(
            name=report.name,
            form=report.form,
            reported=_enc(report.reported),
            value=_enc(report.value),
            log2=_enc(report.log2),
            log2log2=_enc(report.log2log2),
            inputs=report.inputs,
            flags=list(report.flags),
            threshold=report.threshold,
            threshold_log2=_enc(report.threshold_log2),
        )


class WindowModel(BaseModel):
    lower: str
    upper: str

    @classmethod
    def of(cls, window: HeightWindow) -> "WindowModel":
        return cls(lower=window.lower.to_text(), upper=window.upper.to_text())


# ---------------------------------------------------------------------------
# reports

class Report(BaseModel):
    kind: str

    def table(self) -> List[dict]:
        return [self.model_dump()]


class RothScanReport(Report):
    kind: str = "roth_scan"
    xi: str
    delta: str
    max_height: int
    solutions: List[RothSolutionModel]
    gap_violations: List[GapViolationModel] = Field(default_factory=list)
    gap_principle_holds: bool = True

    def table(self) -> List[dict]:
        return [s.model_dump() for s in self.solutions]


class RothBoundsReport(Report):
    kind: str = "roth_bounds"
    m: int
    omega: str
    rows: List[BoundRowModel]

    def table(self) -> List[dict]:
        return [r.model_dump() for r in self.rows]


class RothCoverReport(Report):
    kind: str = "roth_cover"
    Q: str
    E: str
    delta: str
    window_count: int
    windows: List[WindowModel]

    @staticmethod
    def window(w: RothWindow) -> WindowModel:
        Q = rational_str(w.Q)
        return WindowModel(lower=f"{Q}^({rational_str(w.e_lo)})", upper=f"{Q}^({rational_str(w.e_hi)})")

    def table(self) -> List[dict]:
        return [w.model_dump() for w in self.windows]


class SubspaceScanReport(Report):
    kind: str = "subspace_scan"
    system: str
    max_height: int
    precision_cap: int
    threads: int
    solutions: List[SolutionModel]
    boundary: List[List[int]] = Field(default_factory=list, description="Candidates undecided at the precision cap")

    def table(self) -> List[dict]:
        return [s.model_dump() for s in self.solutions]


class WindowSpanModel(BaseModel):
    Q: str
    members: int
    subspace: SubspaceModel
    chain_holds: Optional[bool] = None


class ClassSpanModel(BaseModel):
    Q: str
    label: str
    members: int
    subspace: SubspaceModel


class ClusterReport(Report):
    kind: str = "subspace_cluster"
    system: str
    max_height: int
    large_threshold: str = Field(..., description="n^(2n/delta); windows start at or above it")
    windows: List[WindowSpanModel] = Field(default_factory=list)
    small_classes: List[ClassSpanModel] = Field(default_factory=list)

    def table(self) -> List[dict]:
        rows = [
            {"group": f"window Q={w.Q}", "members": w.members, "dim": w.subspace.dim, "basis": w.subspace.basis}
            for w in self.windows
        ]
        rows += [
            {"group": f"Q={c.Q} class {c.label}", "members": c.members, "dim": c.subspace.dim, "basis": c.subspace.basis}
            for c in self.small_classes
        ]
        return rows


class CandidateModel(BaseModel):
    subspace: SubspaceModel
    nu: str
    mu: str


class FiltrationReportModel(Report):
    kind: str = "subspace_u0"
    system: str
    candidates: List[CandidateModel]
    mu0: str
    minimizers: List[SubspaceModel]
    U0: SubspaceModel
    U0_reduced_basis: List[List[int]]
    U0_height_ok: bool
    unit_sum_subsets: Optional[List[List[int]]] = None
    semistable: bool
    closure_size: int
    flags: List[str] = Field(default_factory=list)

    @classmethod
    def of(cls, name: str, report: FiltrationReport, height_ok: bool) -> "FiltrationReportModel":
        return cls(
            system=name,
            candidates=[
                CandidateModel(subspace=SubspaceModel.of(c.subspace), nu=rational_str(c.nu), mu=rational_str(c.mu))
                for c in report.candidates
            ],
            mu0=rational_str(report.mu0),
            minimizers=[SubspaceModel.of(U) for U in report.minimizers],
            U0=SubspaceModel.of(report.U0),
            U0_reduced_basis=[list(v) for v in reduced_basis(report.U0)],
            U0_height_ok=height_ok,
            unit_sum_subsets=unit_sum_subsets(report.U0),
            semistable=report.semistable,
            closure_size=report.closure_size,
            flags=list(report.flags),
        )

    def table(self) -> List[dict]:
        return [
            {"dim": c.subspace.dim, "basis": c.subspace.basis, "nu": c.nu, "mu": c.mu, "is_U0": c.subspace == self.U0}
            for c in self.candidates
        ]


class CompositionModel(BaseModel):
    window_total: int
    holds: bool
    log2_margin: str

    @classmethod
    def of(cls, check: CompositionCheck) -> "CompositionModel":
        return cls(window_total=check.window_total, holds=check.holds, log2_margin=check.log2_margin.to_text())


class BoundsReport(Report):
    kind: str = "subspace_bounds"
    rows: List[BoundRowModel]
    composition: Optional[CompositionModel] = None
    covering: List[dict] = Field(default_factory=list, description="Window families and their counts")

    def table(self) -> List[dict]:
        return [r.model_dump() for r in self.rows]


def family_summary(family: WindowFamily) -> dict:
    return {
        "name": family.name,
        "target": f"[{family.target_lower.to_text()}, {family.target_upper.to_text()})",
        "windows": len(family.windows),
        "count": family.count_formula,
        "closed_form": family.closed_form.to_text(),
        "within_closed_form": family.within_closed_form,
    }


class PartitionRowModel(BaseModel):
    vector: List[str]
    label: str


class PartitionReport(Report):
    kind: str = "subspace_partition"
    n: int
    M_squared: str
    K_hat: str
    axis_count: int
    class_count: int
    rows: List[PartitionRowModel]

    @classmethod
    def header(cls, grid: PartitionGrid, rows: List[PartitionRowModel]) -> "PartitionReport":
        return cls(
            n=grid.n,
            M_squared=rational_str(grid.M_squared),
            K_hat=rational_str(grid.K_hat),
            axis_count=grid.axis_count,
            class_count=grid.class_count,
            rows=rows,
        )

    def table(self) -> List[dict]:
        return [r.model_dump() for r in self.rows]


class CoverReport(Report):
    kind: str = "subspace_cover"
    D: str
    bound_power: str = Field(..., description="(100^n)^(n-1) D, compared with |cover|^(n-1)")
    size: int
    within_bound: bool
    cover: List[SubspaceModel]
    pulled_back: List[List[int]] = Field(default_factory=list)

    @classmethod
    def of(cls, result: CoverResult) -> "CoverReport":
        return cls(
            D=rational_str(result.D),
            bound_power=rational_str(result.bound_power),
            size=result.size,
            within_bound=result.within_bound,
            cover=[SubspaceModel.of(U) for U in result.cover],
            pulled_back=[list(p) for p in result.pulled_back],
        )

    def table(self) -> List[dict]:
        return [{"dim": U.dim, "basis": U.basis} for U in self.cover]


# ---------------------------------------------------------------------------
# writing

def render(report: Report, fmt: str) -> str:
    if fmt == "json":
        return report.model_dump_json(indent=2)
    if fmt == "csv":
        return pd.DataFrame(report.table()).to_csv(index=False)
    raise ConfigError(f"Unknown report format {fmt!r}; use json or csv")


def write_report(report: Report, fmt: str, out: Optional[Path] = None) -> str:
    text = render(report, fmt)
    if out is not None:
        out = Path(out)
        out.write_text(text)
        logger.info(f"Wrote {report.kind} report to {out}")
    return text
