from enum import Enum


class MappingKind(str, Enum):
    """
    FIR mappings onto the cell array
    """

    BASIC = "basic"
    OPTIMIZED = "optimized"
    IMPROVED = "improved"

    @property
    def short_name(self) -> str:
        return {"basic": "BM", "optimized": "OM", "improved": "IM"}[self.value]


class Op(str, Enum):
    """
    Cell operation selected by a context word
    """

    MUL = "mul"
    MUL_ADD = "muladd"


class PortKind(str, Enum):
    OPERAND_BUS = "bus"
    ZERO = "zero"
    NEIGHBOR = "neighbor"


class Direction(str, Enum):
    """
    Neighbor directions across the three interconnect levels plus the diagonal link
    """

    NORTH = "north"
    SOUTH = "south"
    EAST = "east"
    WEST = "west"
    SOUTH_WEST = "south_west"
    INTRA_QUAD_ROW = "intra_quad_row"
    INTRA_QUAD_COL = "intra_quad_col"
    EXPRESS_ROW = "express_row"
    EXPRESS_COL = "express_col"

    @property
    def indexed(self) -> bool:
        return self in INDEXED_DIRECTIONS


INDEXED_DIRECTIONS = frozenset(
    {
        Direction.INTRA_QUAD_ROW,
        Direction.INTRA_QUAD_COL,
        Direction.EXPRESS_ROW,
        Direction.EXPRESS_COL,
    }
)


class BroadcastMode(str, Enum):
    COLUMN = "column"
    ROW = "row"


class WeightOrientation(str, Enum):
    """
    Which column holds which tap.

    FIGURE puts w_{N-1} in column 0 (the cell traces), TEXT puts w_j in column j (the prose).
    """

    FIGURE = "figure"
    TEXT = "text"


class Tap(str, Enum):
    """
    Non-cell results of resolving a port source
    """

    OFF_ARRAY = "off_array"
    BUS = "bus"
    ZERO = "zero"


class ViolationCode(str, Enum):
    SHAPE = "shape"
    REGION = "region"
    ILLEGAL_SOURCE = "illegal_source"
    NOT_EXECUTABLE = "not_executable"
    WORD = "word"
    WEIGHT_INDEX = "weight_index"
