"""Pydantic schema for the JSON documents printed by the command line."""

import json
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

Triples = List[List[Union[int, str]]]


class WeightSlot(BaseModel):
    """D_n primed slots are written {"slot": k, "primed": true}."""

    slot: int
    primed: bool = True


Index = Union[int, WeightSlot]


class RMatrixEntry(BaseModel):
    src: List[Index]
    dst: List[Index]
    poly: Triples


class RMatrixDump(BaseModel):
    """Nonzero entries of B_YY in basis-pair order."""

    model_config = ConfigDict(populate_by_name=True)

    lie_type: str = Field(..., alias="type")
    dim: int
    pairs: int
    entries: List[RMatrixEntry]


class PairingDump(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    lie_type: str = Field(..., alias="type")
    creation: List[Dict[str, Any]]
    annihilation: List[Dict[str, Any]]
    eta: List[Triples]
    twist: Triples


class InvariantReport(BaseModel):
    """normalized/normalized_den is the reduced invariant; the denominator is
    [[0, 1, "1"]] whenever the invariant is a Laurent polynomial."""

    model_config = ConfigDict(populate_by_name=True)

    lie_type: str = Field(..., alias="type")
    braid: str
    strands: int
    writhe: int
    framed_trace: Triples
    unknot_value: Triples
    normalized: Triples
    normalized_den: Triples


class CriticalReport(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    lie_type: str = Field(..., alias="type")
    roots: List[int]
    z: List[List[float]]
    c: float
    level: Optional[str] = None
    coords: List[List[float]]
    residual: float
    ordering_ok: Optional[bool] = None
    c_limit_ok: Optional[bool] = None
    meta: str = ""


class SuiteResult(BaseModel):
    suite: str
    passed: bool
    counterexamples: List[Dict[str, Any]] = Field(default_factory=list)
    detail: Dict[str, Any] = Field(default_factory=dict)


class VerifyReport(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    lie_type: str = Field(..., alias="type")
    passed: bool
    suites: List[SuiteResult]


class SweepRow(BaseModel):
    """One closed-form residual measurement; a row of the sweep CSV."""

    lie_type: str
    level: str
    c: float
    roots: int
    residual: float
    ordering_ok: bool


def dump_json(model: BaseModel) -> str:
    return json.dumps(model.model_dump(by_alias=True), sort_keys=True)
