from pydantic import BaseModel, Field, model_validator

from app.core.config import settings
from app.schemas.enums import MappingKind, WeightOrientation
from app.schemas.plan import PlanFile


class PlanRequest(BaseModel):
    """
    Request model for building and materializing a mapping plan.

    Either `weights` are given explicitly or `taps` seeded random weights are
    drawn in [-RANDOM_VALUE_LIMIT, RANDOM_VALUE_LIMIT].
    """

    mapping: MappingKind = Field(..., description="Which FIR mapping to build", examples=["basic"])

    taps: int | None = Field(
        default=None,
        ge=1,
        description="Filter order N; weights are generated from `seed`",
        examples=[3],
    )

    weights: list[int] | None = Field(
        default=None,
        min_length=1,
        description="Explicit tap weights w_0..w_{N-1}",
        examples=[[1, 2, 3]],
    )

    rows: int | None = Field(default=None, ge=1, description="Array rows (default: DEFAULT_ARRAY_ROWS)", examples=[8])
    cols: int | None = Field(default=None, ge=1, description="Array columns (default: DEFAULT_ARRAY_COLS)", examples=[8])
    diagonal: bool = Field(default=False, description="Enable the lower-left port B link")
    clock_mhz: float | None = Field(default=None, gt=0, description="Clock in MHz (default: DEFAULT_CLOCK_MHZ)")

    horizon: int = Field(
        ...,
        ge=0,
        le=100_000,
        description="Cycles to materialize bus frames and extraction events for",
        examples=[15],
    )

    orientation: WeightOrientation = WeightOrientation.FIGURE
    seed: int = Field(default_factory=lambda: settings.DEFAULT_SEED)

    @model_validator(mode="after")
    def validate_taps_or_weights(self) -> "PlanRequest":
        if (self.taps is None) == (self.weights is None):
            raise ValueError("Give exactly one of 'taps' or 'weights'")
        return self


class SimulationRequest(BaseModel):
    """Run a materialized plan over an input sequence."""

    plan: PlanFile
    samples: list[int] = Field(default_factory=list, description="Input samples x_0, x_1, ...")
    cycles: int = Field(..., ge=0, description="Cycles to simulate (at most the plan horizon)")
    symbolic: bool = Field(default=False, description="Carry symbolic terms in the trace")


class VerificationRequest(BaseModel):
    """Run a plan and check its extracted outputs against the reference filter."""

    plan: PlanFile
    samples: list[int] = Field(default_factory=list)
    cycles: int = Field(..., ge=0)
    trim_tail: bool = Field(
        default=False,
        description="Leave out outputs whose tap window lies past the input",
    )


class OutputRecord(BaseModel):
    index: int
    value: int


class TraceRow(BaseModel):
    cycle: int
    row: int
    col: int
    bus_index: int
    numeric: int
    symbolic: str | None = None


class SimulationResponse(BaseModel):
    outputs: list[OutputRecord]
    trace: list[TraceRow]
