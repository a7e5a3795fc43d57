from app.schemas.array import (
    ArrayConfig,
    CellCoord,
    ContextAssignment,
    ContextWord,
    PortSource,
    Region,
    Violation,
)
from app.schemas.enums import (
    BroadcastMode,
    Direction,
    MappingKind,
    Op,
    PortKind,
    Tap,
    ViolationCode,
    WeightOrientation,
)
from app.schemas.perf import FpgaDatum, RateReport, ReportTable, ThroughputModel
from app.schemas.plan import ArrayBlock, ExtractionEvent, PlanFile, TapVector
from app.schemas.request import (
    OutputRecord,
    PlanRequest,
    SimulationRequest,
    SimulationResponse,
    TraceRow,
    VerificationRequest,
)
from app.schemas.trace import (
    ArrayState,
    BusFrame,
    CellValue,
    ExtractedOutput,
    SymbolicValue,
    Trace,
)
from app.schemas.verification import Mismatch, VerificationReport

__all__ = [
    "ArrayBlock",
    "ArrayConfig",
    "ArrayState",
    "BroadcastMode",
    "BusFrame",
    "CellCoord",
    "CellValue",
    "ContextAssignment",
    "ContextWord",
    "Direction",
    "ExtractedOutput",
    "ExtractionEvent",
    "FpgaDatum",
    "MappingKind",
    "Mismatch",
    "Op",
    "OutputRecord",
    "PlanFile",
    "PlanRequest",
    "PortKind",
    "PortSource",
    "RateReport",
    "Region",
    "ReportTable",
    "SimulationRequest",
    "SimulationResponse",
    "SymbolicValue",
    "Tap",
    "TapVector",
    "ThroughputModel",
    "Trace",
    "TraceRow",
    "VerificationReport",
    "VerificationRequest",
    "Violation",
    "ViolationCode",
    "WeightOrientation",
]
