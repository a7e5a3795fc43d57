"""
Array geometry, port sources and context words.

These are immutable values: the cell array configuration, coordinates inside it,
where a cell's port B reads from, and the per-column (or per-row) context words
that configure a rectangular region of cells.
"""

from collections.abc import Iterator
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, model_serializer, model_validator

from app.schemas.enums import BroadcastMode, Direction, Op, PortKind, ViolationCode


class ArrayConfig(BaseModel):
    """
    Cell array geometry and feature flags.

    The M1 array is 8x8, split into four 4x4 quadrants, clocked at 100 MHz.
    The diagonal flag enables the proposed lower-left (south-west) port B link.
    """

    model_config = ConfigDict(frozen=True)

    rows: int = Field(..., ge=1, description="Number of cell rows", examples=[8])
    cols: int = Field(..., ge=1, description="Number of cell columns", examples=[8])
    quadrant_size: int = Field(
        default=4,
        ge=1,
        description="Cells per quadrant side; intra-quadrant and express links need it to divide rows and cols",
    )
    diagonal_enabled: bool = Field(
        default=False,
        description="Whether port B may read the cell at the lower-left corner",
    )
    clock_mhz: float = Field(default=100.0, gt=0, description="Array clock in MHz")

    @property
    def quadrants_available(self) -> bool:
        """Intra-quadrant and express levels exist only on a whole number of quadrants."""
        return self.rows % self.quadrant_size == 0 and self.cols % self.quadrant_size == 0

    @property
    def shape_label(self) -> str:
        return f"{self.rows}x{self.cols}"

    def contains(self, coord: "CellCoord") -> bool:
        return coord.row < self.rows and coord.col < self.cols


class CellCoord(BaseModel):
    """Coordinate of one reconfigurable cell, RC(row, col)."""

    model_config = ConfigDict(frozen=True)

    row: int = Field(..., ge=0)
    col: int = Field(..., ge=0)

    def __str__(self) -> str:
        return f"RC({self.row},{self.col})"


class Region(BaseModel):
    """Active rectangle of the array, anchored at RC(0,0)."""

    model_config = ConfigDict(frozen=True)

    rows: int = Field(..., ge=1)
    cols: int = Field(..., ge=1)

    def fits(self, config: ArrayConfig) -> bool:
        return self.rows <= config.rows and self.cols <= config.cols

    def contains(self, coord: CellCoord) -> bool:
        return coord.row < self.rows and coord.col < self.cols

    def cells(self) -> Iterator[CellCoord]:
        """Cells in row-major order."""
        for row in range(self.rows):
            for col in range(self.cols):
                yield CellCoord(row=row, col=col)


class PortSource(BaseModel):
    """
    Where a cell port reads from: the operand bus, constant zero, or a neighbor.

    Serialized as a short string: "bus", "zero", "west", "south_west",
    "intra_quad_row:2", "express_col:1".
    """

    model_config = ConfigDict(frozen=True)

    kind: PortKind
    direction: Direction | None = None
    index: int | None = Field(default=None, ge=0)

    @model_validator(mode="before")
    @classmethod
    def parse_string_form(cls, data: Any) -> Any:
        if not isinstance(data, str):
            return data
        text = data.strip().lower()
        if text == PortKind.OPERAND_BUS.value:
            return {"kind": PortKind.OPERAND_BUS}
        if text == PortKind.ZERO.value:
            return {"kind": PortKind.ZERO}
        name, _, index = text.partition(":")
        try:
            direction = Direction(name)
        except ValueError as e:
            raise ValueError(f"Unknown port source '{data}'") from e
        return {
            "kind": PortKind.NEIGHBOR,
            "direction": direction,
            "index": int(index) if index else None,
        }

    @model_validator(mode="after")
    def validate_shape(self) -> "PortSource":
        if self.kind != PortKind.NEIGHBOR:
            if self.direction is not None or self.index is not None:
                raise ValueError(f"Port source '{self.kind.value}' takes no direction or index")
            return self
        if self.direction is None:
            raise ValueError("Neighbor port source requires a direction")
        if self.direction.indexed and self.index is None:
            raise ValueError(f"Direction '{self.direction.value}' requires a lane index")
        if not self.direction.indexed and self.index is not None:
            raise ValueError(f"Direction '{self.direction.value}' takes no index")
        return self

    @model_serializer
    def serialize(self) -> str:
        return str(self)

    def __str__(self) -> str:
        if self.kind != PortKind.NEIGHBOR:
            return self.kind.value
        assert self.direction is not None
        if self.index is None:
            return self.direction.value
        return f"{self.direction.value}:{self.index}"

    @classmethod
    def bus(cls) -> "PortSource":
        return cls(kind=PortKind.OPERAND_BUS)

    @classmethod
    def zero(cls) -> "PortSource":
        return cls(kind=PortKind.ZERO)

    @classmethod
    def neighbor(cls, direction: Direction, index: int | None = None) -> "PortSource":
        return cls(kind=PortKind.NEIGHBOR, direction=direction, index=index)


class ContextWord(BaseModel):
    """
    Configuration of one cell: Out(t+1) = A x w_j (+ B).

    Port A always reads the operand bus. Mul ignores port B (zero); MulAdd adds
    the port B source read from the previous cycle.
    """

    model_config = ConfigDict(frozen=True)

    op: Op
    weight_index: int = Field(..., ge=0, description="Index j of the tap w_j held by the cell")
    src_b: PortSource = Field(default_factory=PortSource.zero)

    @model_validator(mode="after")
    def validate_port_b(self) -> "ContextWord":
        if self.op == Op.MUL and self.src_b.kind != PortKind.ZERO:
            raise ValueError(f"Mul words must read zero on port B, got '{self.src_b}'")
        if self.op == Op.MUL_ADD and self.src_b.kind == PortKind.ZERO:
            raise ValueError("MulAdd words need a port B source other than zero")
        return self

    @classmethod
    def mul(cls, weight_index: int) -> "ContextWord":
        return cls(op=Op.MUL, weight_index=weight_index)

    @classmethod
    def mul_add(cls, weight_index: int, direction: Direction) -> "ContextWord":
        return cls(op=Op.MUL_ADD, weight_index=weight_index, src_b=PortSource.neighbor(direction))


class ContextAssignment(BaseModel):
    """Context words broadcast along columns (one word per column) or rows."""

    model_config = ConfigDict(frozen=True)

    mode: BroadcastMode = BroadcastMode.COLUMN
    words: tuple[ContextWord, ...] = Field(..., min_length=1)

    def word_for(self, coord: CellCoord) -> ContextWord:
        """Word executed by a cell under the broadcast mode."""
        index = coord.col if self.mode == BroadcastMode.COLUMN else coord.row
        return self.words[index]

    def broadcast_length(self, region: Region) -> int:
        return region.cols if self.mode == BroadcastMode.COLUMN else region.rows


class Violation(BaseModel):
    """One reason an assignment cannot run on a configuration."""

    model_config = ConfigDict(frozen=True)

    code: ViolationCode
    reason: str
    coord: CellCoord | None = None

    def __str__(self) -> str:
        where = f"{self.coord}: " if self.coord is not None else ""
        return f"{where}{self.reason}"
