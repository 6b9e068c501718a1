"""
Report models for geodiscord.

These pydantic models are the structured outputs of the analysis
pipelines. They hold plain numbers and nested lists only, so every report
serializes to JSON and parses back to an equal object.
"""

from typing import List, Optional

from pydantic import BaseModel, Field

from . import __version__


class OperatorRecord(BaseModel):
    re: List[List[float]]
    im: List[List[float]]
    psd: bool
    idempotent: bool
    min_eigenvalue: float
    idempotency_residual: float


class MeasurementRecord(BaseModel):
    operators: List[OperatorRecord]
    trace_one: bool
    complete: bool
    valid: bool
    value: Optional[float] = None


class BlochRecord(BaseModel):
    m: int
    n: int
    x: List[float]
    y: List[float]
    T: List[List[float]]
    purity: float
    purity_residual: float
    roundtrip_residual: float


class BoundsReport(BaseModel):
    """Bounds on GD and MIN for one state, with the candidate measurement."""

    m: int
    n: int
    gd_lower: float = Field(ge=0.0)
    gd_lower_raw: float
    gd_isometry_lower: float = Field(ge=0.0)
    min_upper: float = Field(ge=0.0)
    gd_exact: Optional[float] = None
    min_exact: Optional[float] = None
    saturated: bool
    d_equals_n_condition: bool
    g_eigenvalues: List[float]
    candidate: MeasurementRecord


class OracleRecord(BaseModel):
    mode: str
    best_value: float
    per_restart_values: List[float]
    constraint_residual: Optional[float] = None
    best_measurement: MeasurementRecord


class GapReport(BaseModel):
    gd_lower: float
    oracle_gd: float
    min_upper: float
    oracle_min: float
    gd_gap: float
    min_gap: float


class MonogamyReport(BaseModel):
    """Pairwise discords D(ρ_1k), the cut discord D(ρ_1|2..N) and their deficit."""

    N: int
    pair_discords: List[float]
    cut_discord: float
    lhs_sum: float
    deficit: float
    satisfied: bool


class SweepRow(BaseModel):
    """One CSV row of a parameter sweep; absent columns stay None and are written empty."""

    param: float
    gd_lower: Optional[float] = None
    min_upper: Optional[float] = None
    closed_form: Optional[float] = None
    oracle_gd: Optional[float] = None
    deficit: Optional[float] = None


SWEEP_COLUMNS = ["param", "gd_lower", "min_upper", "closed_form", "oracle_gd", "deficit"]


class ReportFile(BaseModel):
    """Everything a command emits with --json."""

    command: str
    input_digest: str
    tool_version: str = __version__
    seed: Optional[int] = None
    state_source: Optional[str] = None
    normalization_factor: Optional[float] = None
    bloch: Optional[BlochRecord] = None
    bounds: Optional[BoundsReport] = None
    measurement: Optional[MeasurementRecord] = None
    gap: Optional[GapReport] = None
    oracle_gd: Optional[OracleRecord] = None
    oracle_min: Optional[OracleRecord] = None
    monogamy: Optional[MonogamyReport] = None
    sweep: Optional[List[SweepRow]] = None

