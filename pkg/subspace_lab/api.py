# subspace_lab/api.py

import logging
from typing import Dict, List, Optional, Union

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from subspace_lab import experiments
from subspace_lab.config import settings
from subspace_lab.core.arith.algebraic import AlgebraicReal
from subspace_lab.core.subspace.systems import system_from_mapping
from subspace_lab.errors import SubspaceLabError
from subspace_lab.reports import (
    BoundsReport,
    ClusterReport,
    CoverReport,
    FiltrationReportModel,
    PartitionReport,
    RothBoundsReport,
    RothCoverReport,
    RothScanReport,
    SubspaceScanReport,
)

logger = logging.getLogger(__name__)

origins = ["*"]

app = FastAPI(
    title="Subspace Lab API",
    description="Certified experiments on rational approximations and systems of linear form inequalities.",
    version="1.0.0",
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=origins,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

Scalar = Union[str, int]


# Request models

class RunOptions(BaseModel):
    precision_cap: Optional[int] = Field(None, ge=64, description="Overrides SUBSPACE_LAB_PRECISION_CAP")
    threads: Optional[int] = Field(None, ge=1)

    def cap(self) -> int:
        return self.precision_cap or settings.PRECISION_CAP

    def workers(self) -> int:
        return self.threads or settings.THREADS


class RothScanRequest(RunOptions):
    xi: str = Field(..., description="poly=[c0,...,cd];interval=[lo,hi]")
    delta: Scalar
    max_height: int = Field(..., ge=1)


class RothBoundsRequest(BaseModel):
    xi: str
    delta: Scalar


class RothCoverRequest(BaseModel):
    Q: Scalar
    E: Scalar
    delta: Scalar


class SystemRequest(RunOptions):
    system: Dict = Field(..., description="The same mapping a system TOML file holds")


class SystemScanRequest(SystemRequest):
    max_height: int = Field(..., ge=1)


class ClusterRequest(SystemScanRequest):
    window_Q: List[Scalar] = Field(default_factory=list)


class BoundsRequest(BaseModel):
    n: int = Field(..., ge=2)
    delta: Scalar
    R: Optional[int] = None
    D: int = 1
    d: int = 1
    H: Scalar = "1"
    places: int = 1


class PartitionRequest(BaseModel):
    vectors: List[List[Union[Scalar, List[Scalar]]]]
    M_squared: Scalar


class CoverRequest(BaseModel):
    points: List[List[Scalar]]
    D: Dict[str, Scalar]


def _fail(e: SubspaceLabError, endpoint: str):
    logger.error(f"{endpoint}: {type(e).__name__}: {e}")
    raise HTTPException(status_code=e.http_status, detail=f"{type(e).__name__}: {str(e)}")


# Endpoints

@app.post("/api/roth/scan", response_model=RothScanReport)
def roth_scan(request: RothScanRequest):
    try:
        logger.info(f"roth scan xi={request.xi} delta={request.delta} max_height={request.max_height}")
        xi = AlgebraicReal.parse(request.xi)
        return experiments.run_roth_scan(xi, request.delta, request.max_height, request.workers(), request.cap())
    except SubspaceLabError as e:
        _fail(e, "roth scan")


@app.post("/api/roth/bounds", response_model=RothBoundsReport)
def roth_bounds(request: RothBoundsRequest):
    try:
        return experiments.run_roth_bounds(AlgebraicReal.parse(request.xi), request.delta)
    except SubspaceLabError as e:
        _fail(e, "roth bounds")


@app.post("/api/roth/cover", response_model=RothCoverReport)
def roth_cover(request: RothCoverRequest):
    try:
        return experiments.run_roth_cover(request.Q, request.E, request.delta)
    except SubspaceLabError as e:
        _fail(e, "roth cover")


@app.post("/api/subspace/scan", response_model=SubspaceScanReport)
def subspace_scan(request: SystemScanRequest):
    try:
        system = system_from_mapping(request.system)
        return experiments.run_subspace_scan(system, request.max_height, request.workers(), request.cap())
    except SubspaceLabError as e:
        _fail(e, "subspace scan")


@app.post("/api/subspace/cluster", response_model=ClusterReport)
def subspace_cluster(request: ClusterRequest):
    try:
        system = system_from_mapping(request.system)
        return experiments.run_cluster(
            system, request.max_height, request.window_Q or None, request.workers(), request.cap()
        )
    except SubspaceLabError as e:
        _fail(e, "subspace cluster")


@app.post("/api/subspace/u0", response_model=FiltrationReportModel)
def subspace_u0(request: SystemRequest):
    try:
        return experiments.run_u0(system_from_mapping(request.system))
    except SubspaceLabError as e:
        _fail(e, "subspace u0")


@app.post("/api/subspace/bounds", response_model=BoundsReport)
def subspace_bounds(request: BoundsRequest):
    try:
        return experiments.run_bounds(
            request.n, request.delta, request.R, request.D, request.d, request.H, request.places
        )
    except SubspaceLabError as e:
        _fail(e, "subspace bounds")


@app.post("/api/subspace/partition", response_model=PartitionReport)
def subspace_partition(request: PartitionRequest):
    try:
        return experiments.run_partition(request.vectors, request.M_squared)
    except SubspaceLabError as e:
        _fail(e, "subspace partition")


@app.post("/api/subspace/cover", response_model=CoverReport)
def subspace_cover(request: CoverRequest):
    try:
        return experiments.run_cover(request.points, request.D)
    except SubspaceLabError as e:
        _fail(e, "subspace cover")


@app.get("/api/", include_in_schema=False)
def root():
    return {"message": "Subspace Lab API is running. Go to /docs for the API documentation."}
