"""Pydantic request/response models.  Every payload carries schema: 1."""
from __future__ import annotations

from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field


class VersionedModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)
    schema_version: int = Field(default=1, alias="schema")


class CdgaRequest(VersionedModel):
    """Pick a shipped fixture or supply the CDGA JSON inline."""
    fixture: Optional[str] = None
    input: Optional[dict] = None
    degree: int = 1
    variant: Literal["homological", "cohomological"] = "homological"
    q: int = 1


class TconeRequest(VersionedModel):
    """Cones of a torus-locus fixture/inline locus or of a Laurent
    hypersurface given by a polynomial string and variable names."""
    fixture: Optional[str] = None
    input: Optional[dict] = None
    laurent: Optional[str] = None
    vars: Optional[list[str]] = None
    max_partition_support: int = 12


class FormalityRequest(VersionedModel):
    """Characteristic-variety data plus a resonance source: either a CDGA
    model (model and cohomology resonance are both computed from it) or a
    commutator-relators group presentation (cohomology resonance from the
    linearized Fox matrix; no model side)."""
    torus_fixture: Optional[str] = None
    torus: Optional[dict] = None
    cdga_fixture: Optional[str] = None
    cdga: Optional[dict] = None
    group_fixture: Optional[str] = None
    presentation: Optional[str] = None


class FoxRequest(VersionedModel):
    fixture: Optional[str] = None
    presentation: Optional[str] = None


class ArrangementRequest(VersionedModel):
    fixture: Optional[str] = None
    input: Optional[dict] = None
    max_arrangement_size: int = 12


class EllipticRequest(VersionedModel):
    fixture: Optional[str] = None
    input: Optional[dict] = None


class QuadricRequest(VersionedModel):
    form: str
    vars: list[str]


class Report(VersionedModel):
    """Deterministic result envelope: the digest covers command and data
    only; timing is a sidecar and never enters the digest."""
    command: str
    input_digest: str
    data: dict[str, Any]
    verdict: Optional[str] = None
    timing_ms: Optional[float] = None


class FixtureList(VersionedModel):
    fixtures: dict[str, list[str]]
