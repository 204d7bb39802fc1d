"""FastAPI app exposing the computation handlers.

Every endpoint is stateless and deterministic; verdict-bearing results use
HTTP 200 with the verdict in the body (the NON-FORMAL exit-code convention
belongs to the CLI), and malformed inputs map to 422.
"""
from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..fixtures import UnknownFixtureError
from ..fox import RelatorError, TorsionError
from ..elliptic import EllipticArrangementError
from ..tcones import PartitionBoundError
from . import handlers
from .schemas import (ArrangementRequest, CdgaRequest, EllipticRequest,
                      FixtureList, FormalityRequest, FoxRequest,
                      QuadricRequest, Report, TconeRequest)

app = FastAPI(title="jumploci", version=__version__,
              description="Exact resonance varieties, tangent cones and "
                          "formality verdicts over Q")

_INPUT_ERRORS = (handlers.InputError, UnknownFixtureError, TorsionError,
                 RelatorError, EllipticArrangementError, PartitionBoundError,
                 ValueError)


def _run(fn, *args) -> Report:
    try:
        report, _code = fn(*args)
        return report
    except _INPUT_ERRORS as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc


@app.get("/healthz")
def healthz() -> dict:
    return {"status": "ok", "version": __version__}


@app.get("/fixtures", response_model=FixtureList)
def fixtures() -> FixtureList:
    return FixtureList(fixtures=handlers.fixtures_handler().data["fixtures"])


@app.post("/cdga/validate", response_model=Report)
def cdga_validate(req: CdgaRequest) -> Report:
    return _run(handlers.cdga_validate, req)


@app.post("/cdga/cohomology", response_model=Report)
def cdga_cohomology(req: CdgaRequest) -> Report:
    return _run(handlers.cdga_cohomology, req)


@app.post("/cdga/resonance", response_model=Report)
def cdga_resonance(req: CdgaRequest) -> Report:
    return _run(handlers.cdga_resonance, req)


@app.post("/cdga/support", response_model=Report)
def cdga_support(req: CdgaRequest) -> Report:
    return _run(handlers.cdga_support, req)


@app.post("/cdga/compare", response_model=Report)
def cdga_compare(req: CdgaRequest) -> Report:
    return _run(handlers.cdga_compare, req)


@app.post("/tcone/exp", response_model=Report)
def tcone_exp(req: TconeRequest) -> Report:
    return _run(handlers.tcone, req, "exp")


@app.post("/tcone/classical", response_model=Report)
def tcone_classical(req: TconeRequest) -> Report:
    return _run(handlers.tcone, req, "classical")


@app.post("/formality", response_model=Report)
def formality(req: FormalityRequest) -> Report:
    return _run(handlers.formality, req)


@app.post("/quadric", response_model=Report)
def quadric(req: QuadricRequest) -> Report:
    return _run(handlers.quadric, req)


@app.post("/fox/alexander", response_model=Report)
def fox_alexander(req: FoxRequest) -> Report:
    return _run(handlers.fox_alexander, req)


@app.post("/fox/linearized", response_model=Report)
def fox_linearized(req: FoxRequest) -> Report:
    return _run(handlers.fox_linearized, req)


@app.post("/fox/v1", response_model=Report)
def fox_v1(req: FoxRequest) -> Report:
    return _run(handlers.fox_v1, req)


@app.post("/fox/r1", response_model=Report)
def fox_r1(req: FoxRequest) -> Report:
    return _run(handlers.fox_r1, req)


@app.post("/arrangement/flats", response_model=Report)
def arrangement_flats(req: ArrangementRequest) -> Report:
    return _run(handlers.arrangement_flats, req)


@app.post("/arrangement/os", response_model=Report)
def arrangement_os(req: ArrangementRequest) -> Report:
    return _run(handlers.arrangement_os, req)


@app.post("/arrangement/r1", response_model=Report)
def arrangement_r1(req: ArrangementRequest) -> Report:
    return _run(handlers.arrangement_r1, req)


@app.post("/elliptic/check", response_model=Report)
def elliptic_check(req: EllipticRequest) -> Report:
    return _run(handlers.elliptic_check, req)


@app.post("/elliptic/model", response_model=Report)
def elliptic_model(req: EllipticRequest) -> Report:
    return _run(handlers.elliptic_model, req)


@app.post("/elliptic/pipeline", response_model=Report)
def elliptic_pipeline(req: EllipticRequest) -> Report:
    return _run(handlers.elliptic_pipeline, req)
