"""FastAPI route definitions for the circuit-interlace API."""

from typing import Any, Literal, Optional

from fastapi import APIRouter, Depends, HTTPException
from pydantic import BaseModel

from app.api.deps import get_app_settings
from app.config import Settings
from app.errors import CircuitError, InvariantViolation
from app.models.graph import SignedEulerSystem
from app.models.partition import CircuitPartition
from app.services import formats
from app.services.core_graph import euler_system, parse_document, serialize_euler_system
from app.services.counting import count_euler_brute, count_euler_det
from app.services.matrices import (
    interlacement,
    modified_interlacement,
    reduced_interlacement,
    signed_interlacement,
    standard_form,
    standard_form_by_tracing,
)
from app.services.partitions import parse_partition
from app.services.sweep import harness_names, run_harness
from app.services.transforms import kappa_transform, transposition

router = APIRouter()


# ---------------------------------------------------------------------------
# Request / Response Models
# ---------------------------------------------------------------------------


class GraphRequest(BaseModel):
    graph: str


class EulerRequest(BaseModel):
    euler: str
    name: str = "C"
    partition: Optional[str] = None


class MatrixRequest(EulerRequest):
    kind: Literal["interlacement", "reduced", "modified", "signed", "standard", "tracing"]


class VerifyRequest(EulerRequest):
    check: str = "main"


class TransformRequest(EulerRequest):
    kappa: Optional[str] = None
    transpose: Optional[tuple[str, str]] = None


class EulerResponse(BaseModel):
    dow: str


class MatrixResponse(BaseModel):
    rows: list[str]
    cols: list[str]
    entries: list[list[int | str]]


class CountResponse(BaseModel):
    det: int
    brute: Optional[int] = None


class TransformResponse(BaseModel):
    results: list[str]


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def _load(req: EulerRequest) -> tuple[SignedEulerSystem, CircuitPartition | None]:
    document = parse_document(req.euler, name=req.name)
    c = document.euler_system or euler_system(document.graph)
    p = None
    if req.partition is not None:
        p = parse_partition(req.partition, c.graph, c, euler_name=req.name)
    return c, p


def _handle(exc: CircuitError) -> HTTPException:
    if isinstance(exc, InvariantViolation):
        return HTTPException(status_code=500, detail=str(exc))
    return HTTPException(status_code=422, detail=str(exc))


# ---------------------------------------------------------------------------
# Euler systems
# ---------------------------------------------------------------------------


@router.post("/euler", response_model=EulerResponse)
def build_euler_system(req: GraphRequest):
    """Construct an Euler system of the posted graph and return it as signed words."""
    try:
        c = euler_system(parse_document(req.graph).graph)
    except CircuitError as e:
        raise _handle(e)
    return EulerResponse(dow=serialize_euler_system(c))


# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------


@router.post("/matrix", response_model=MatrixResponse)
def build_matrix(req: MatrixRequest):
    try:
        c, p = _load(req)
        if req.kind == "interlacement":
            m = interlacement(c)
        elif req.kind == "signed":
            m = signed_interlacement(c)
        else:
            if p is None:
                raise HTTPException(status_code=422, detail=f"{req.kind} needs a partition")
            builders = {
                "reduced": reduced_interlacement,
                "modified": modified_interlacement,
                "standard": standard_form,
                "tracing": standard_form_by_tracing,
            }
            m = builders[req.kind](c, p)
    except CircuitError as e:
        raise _handle(e)
    return MatrixResponse(**formats.matrix_record(m))


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------


@router.post("/verify")
def verify(req: VerifyRequest) -> dict[str, Any]:
    if req.check not in harness_names():
        raise HTTPException(
            status_code=422,
            detail=f"unknown check {req.check!r}; available: {', '.join(harness_names())}",
        )
    try:
        c, p = _load(req)
        if p is None:
            raise HTTPException(status_code=422, detail="verification needs a partition")
        report = run_harness(req.check, c, p, req.name)
    except CircuitError as e:
        raise _handle(e)
    return {**report.model_dump(), "passed": report.passed}


# ---------------------------------------------------------------------------
# Counting and transforms
# ---------------------------------------------------------------------------


@router.post("/count", response_model=CountResponse)
def count(req: EulerRequest, settings: Settings = Depends(get_app_settings)):
    try:
        c, _ = _load(req)
        det = count_euler_det(c)
        brute = None
        if len(c.graph.vertices) <= settings.brute_max_vertices:
            brute = count_euler_brute(c, settings.brute_max_vertices)
    except CircuitError as e:
        raise _handle(e)
    return CountResponse(det=det, brute=brute)


@router.post("/transform", response_model=TransformResponse)
def transform(req: TransformRequest):
    if (req.kappa is None) == (req.transpose is None):
        raise HTTPException(status_code=422, detail="give exactly one of kappa or transpose")
    try:
        c, _ = _load(req)
        if req.transpose is not None:
            results = [transposition(c, *req.transpose)]
        else:
            results = list(kappa_transform(c, req.kappa or ""))
    except CircuitError as e:
        raise _handle(e)
    return TransformResponse(results=[serialize_euler_system(r) for r in results])
