"""
Plan file model: a mapping materialized to a fixed horizon.

The JSON document carries the filter taps, the array configuration, the context
words, and the bus frames and extraction events for cycles 1..horizon. A loaded
plan file is directly executable by the simulator.
"""

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.schemas.array import ArrayConfig, CellCoord, ContextAssignment, ContextWord, Region
from app.schemas.enums import BroadcastMode, MappingKind
from app.schemas.trace import BusFrame


class ExtractionEvent(BaseModel):
    """Record that y_k is complete in a cell at a cycle."""

    model_config = ConfigDict(frozen=True)

    cycle: int = Field(..., ge=1)
    row: int = Field(..., ge=0)
    col: int = Field(..., ge=0)
    output_index: int = Field(..., ge=0, description="The k of y_k")

    @property
    def coord(self) -> CellCoord:
        return CellCoord(row=self.row, col=self.col)


class ArrayBlock(BaseModel):
    """Wire form of an ArrayConfig inside a plan file."""

    model_config = ConfigDict(frozen=True)

    rows: int = Field(..., ge=1)
    cols: int = Field(..., ge=1)
    quadrant: int = Field(default=4, ge=1)
    diagonal: bool = False
    clock_mhz: float = Field(default=100.0, gt=0)

    @classmethod
    def from_config(cls, config: ArrayConfig) -> "ArrayBlock":
        return cls(
            rows=config.rows,
            cols=config.cols,
            quadrant=config.quadrant_size,
            diagonal=config.diagonal_enabled,
            clock_mhz=config.clock_mhz,
        )

    def to_config(self) -> ArrayConfig:
        return ArrayConfig(
            rows=self.rows,
            cols=self.cols,
            quadrant_size=self.quadrant,
            diagonal_enabled=self.diagonal,
            clock_mhz=self.clock_mhz,
        )


class PlanFile(BaseModel):
    """
    Materialized mapping plan.

    Structural checks (frame shapes, event cycles, region fit) run here; array
    legality of the context words is checked by the loader.
    """

    model_config = ConfigDict(frozen=True)

    kind: MappingKind
    taps: list[int] = Field(..., min_length=1, description="Tap weights w_0..w_{N-1}")
    array: ArrayBlock
    region: Region
    mode: BroadcastMode = BroadcastMode.COLUMN
    assignment: list[ContextWord] = Field(..., min_length=1)
    horizon: int = Field(..., ge=0)
    bus_frames: list[list[int]] = Field(
        default_factory=list,
        description="bus_frames[t - 1][r] is the sample index on row r at cycle t",
    )
    extraction: list[ExtractionEvent] = Field(default_factory=list)

    @model_validator(mode="after")
    def validate_materialization(self) -> "PlanFile":
        if len(self.bus_frames) != self.horizon:
            raise ValueError(
                f"Expected {self.horizon} bus frames for horizon {self.horizon}, "
                f"got {len(self.bus_frames)}"
            )
        for cycle, frame in enumerate(self.bus_frames, start=1):
            if len(frame) != self.region.rows:
                raise ValueError(
                    f"Bus frame at cycle {cycle} has {len(frame)} rows, region has {self.region.rows}"
                )
        for event in self.extraction:
            if event.cycle > self.horizon:
                raise ValueError(f"Extraction at cycle {event.cycle} lies beyond horizon {self.horizon}")
            if not self.region.contains(event.coord):
                raise ValueError(f"Extraction cell {event.coord} lies outside the region")
        if not self.region.fits(self.array.to_config()):
            raise ValueError(
                f"Region {self.region.rows}x{self.region.cols} does not fit the "
                f"{self.array.rows}x{self.array.cols} array"
            )
        return self

    @property
    def config(self) -> ArrayConfig:
        return self.array.to_config()

    @property
    def context(self) -> ContextAssignment:
        return ContextAssignment(mode=self.mode, words=tuple(self.assignment))

    @property
    def weights(self) -> tuple[int, ...]:
        return tuple(self.taps)

    def bus_frame(self, cycle: int) -> BusFrame:
        """Bus frame for a cycle in 1..horizon."""
        if not 1 <= cycle <= self.horizon:
            raise IndexError(f"Cycle {cycle} outside materialized horizon 1..{self.horizon}")
        return BusFrame(tuple(self.bus_frames[cycle - 1]))

    def extraction_events(self, horizon: int) -> list[ExtractionEvent]:
        return [event for event in self.extraction if event.cycle <= horizon]


class TapVector(BaseModel):
    """FIR tap weights w_0..w_{N-1}; N is the filter order."""

    model_config = ConfigDict(frozen=True)

    weights: tuple[int, ...] = Field(..., min_length=1)

    @property
    def order(self) -> int:
        return len(self.weights)

    @classmethod
    def of(cls, *weights: int) -> "TapVector":
        return cls(weights=tuple(weights))
