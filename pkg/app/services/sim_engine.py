"""
Synchronous cycle-by-cycle execution of a configured cell region.

Every cell computes Out(t+1) = x[bus(r, t+1)] * w_j + B(t), where B reads the
port B source from the previous snapshot. All cells update at once. Numeric
values are exact int64; the optional symbolic mode carries the term multiset
that the spreadsheet figures print in each cell.
"""

import logging
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from functools import lru_cache
from typing import Protocol

import numpy as np

from app.schemas.array import ArrayConfig, CellCoord, ContextAssignment, Region
from app.schemas.enums import Direction, Op
from app.schemas.plan import ExtractionEvent
from app.schemas.trace import (
    ZERO_TERMS,
    ArrayState,
    BusFrame,
    ExtractedOutput,
    SymbolicValue,
    Trace,
)
from app.services.array_core import NotExecutableError, RCArrayError, validate_assignment

logger = logging.getLogger(__name__)

INT64_MAX = int(np.iinfo(np.int64).max)
INT64_MIN = int(np.iinfo(np.int64).min)


class ArithmeticOverflowError(RCArrayError):
    """Raised when a product or sum leaves the signed 64-bit range."""

    def __init__(self, message: str, cycle: int | None = None, coord: CellCoord | None = None):
        super().__init__(message)
        self.cycle = cycle
        self.coord = coord


class HorizonExceededError(RCArrayError):
    """Raised when a materialized plan is run past its horizon."""

    pass


class Program(Protocol):
    """Anything the engine can execute: a generated plan or a loaded plan file."""

    @property
    def config(self) -> ArrayConfig: ...

    @property
    def region(self) -> Region: ...

    @property
    def context(self) -> ContextAssignment: ...

    @property
    def weights(self) -> tuple[int, ...]: ...

    @property
    def horizon(self) -> int | None: ...

    def bus_frame(self, cycle: int) -> BusFrame: ...

    def extraction_events(self, horizon: int) -> list[ExtractionEvent]: ...


@dataclass(frozen=True)
class _CompiledContext:
    weight_index: np.ndarray
    west: np.ndarray
    south_west: np.ndarray


@lru_cache(maxsize=256)
def _compile(assign: ContextAssignment, rows: int, cols: int) -> _CompiledContext:
    weight_index = np.zeros((rows, cols), dtype=np.intp)
    west = np.zeros((rows, cols), dtype=bool)
    south_west = np.zeros((rows, cols), dtype=bool)
    for coord in Region(rows=rows, cols=cols).cells():
        word = assign.word_for(coord)
        weight_index[coord.row, coord.col] = word.weight_index
        if word.op == Op.MUL_ADD:
            if word.src_b.direction == Direction.WEST:
                west[coord.row, coord.col] = True
            elif word.src_b.direction == Direction.SOUTH_WEST:
                south_west[coord.row, coord.col] = True
            else:
                raise NotExecutableError(f"{coord}: engine cannot read port B from '{word.src_b}'")
    for array in (weight_index, west, south_west):
        array.flags.writeable = False
    return _CompiledContext(weight_index=weight_index, west=west, south_west=south_west)


def _sample_values(frame: BusFrame, x: Sequence[int]) -> list[int]:
    length = len(x)
    return [int(x[k]) if 0 <= k < length else 0 for k in frame.indices]


def _port_b(old: np.ndarray, ctx: _CompiledContext) -> np.ndarray:
    west_src = np.zeros_like(old)
    west_src[:, 1:] = old[:, :-1]
    sw_src = np.zeros_like(old)
    sw_src[:-1, 1:] = old[1:, :-1]
    return np.where(ctx.west, west_src, 0) + np.where(ctx.south_west, sw_src, 0)


def _locate_overflow(
    values: list[int], weights: Sequence[int], old: np.ndarray, ctx: _CompiledContext, cycle: int
) -> np.ndarray:
    """Exact recomputation with Python integers; raises on the first cell out of range."""
    rows, cols = old.shape
    result = np.zeros((rows, cols), dtype=np.int64)
    for row in range(rows):
        for col in range(cols):
            product = values[row] * int(weights[ctx.weight_index[row, col]])
            b = 0
            if ctx.west[row, col] and col > 0:
                b = int(old[row, col - 1])
            elif ctx.south_west[row, col] and col > 0 and row + 1 < rows:
                b = int(old[row + 1, col - 1])
            for label, value in (("product", product), ("sum", product + b)):
                if not INT64_MIN <= value <= INT64_MAX:
                    coord = CellCoord(row=row, col=col)
                    raise ArithmeticOverflowError(
                        f"{label} {value} at {coord}, cycle {cycle} leaves the int64 range",
                        cycle=cycle,
                        coord=coord,
                    )
            result[row, col] = product + b
    return result


def _advance_symbolic(
    old: tuple[tuple[SymbolicValue, ...], ...],
    frame: BusFrame,
    ctx: _CompiledContext,
) -> tuple[tuple[SymbolicValue, ...], ...]:
    rows = len(old)
    cols = len(old[0]) if rows else 0
    new_rows = []
    for row in range(rows):
        new_row = []
        for col in range(cols):
            term = (frame[row], int(ctx.weight_index[row, col]))
            prev = ZERO_TERMS
            if ctx.west[row, col] and col > 0:
                prev = old[row][col - 1]
            elif ctx.south_west[row, col] and col > 0 and row + 1 < rows:
                prev = old[row + 1][col - 1]
            new_row.append(SymbolicValue((term,) + prev.terms))
        new_rows.append(tuple(new_row))
    return tuple(new_rows)


def step(
    state: ArrayState,
    assign: ContextAssignment,
    frame: BusFrame,
    x: Sequence[int],
    w: Sequence[int],
) -> ArrayState:
    """
    Advance every cell of the region by one cycle.

    Port B reads that leave the region read zero. Symbolic terms are carried
    when the incoming state has them.

    Raises:
        ArithmeticOverflowError: If a product or sum leaves the int64 range.
        NotExecutableError: If a word reads port B from a link the engine cannot drive.
    """
    rows, cols = state.shape
    if len(frame) != rows:
        raise ValueError(f"Bus frame has {len(frame)} rows, region has {rows}")

    cycle = state.cycle + 1
    ctx = _compile(assign, rows, cols)
    old = state.numeric
    values = _sample_values(frame, x)

    max_x = max((abs(v) for v in values), default=0)
    max_w = max((abs(int(w[j])) for j in np.unique(ctx.weight_index)), default=0)
    max_old = max(-int(old.min()), int(old.max())) if old.size else 0
    if max_x > INT64_MAX or max_x * max_w + max_old > INT64_MAX:
        numeric = _locate_overflow(values, w, old, ctx, cycle)
    else:
        weights = np.asarray(w, dtype=np.int64)[ctx.weight_index]
        numeric = np.asarray(values, dtype=np.int64)[:, None] * weights + _port_b(old, ctx)

    symbolic = None
    if state.symbolic is not None:
        symbolic = _advance_symbolic(state.symbolic, frame, ctx)

    return ArrayState(cycle=cycle, numeric=numeric, symbolic=symbolic)


def simulate(
    program: Program,
    x: Sequence[int],
    n_cycles: int,
    symbolic: bool = False,
) -> Iterator[tuple[BusFrame, ArrayState]]:
    """
    Yield (frame, state) for cycles 1..n_cycles, after checking the program.

    Raises:
        NotExecutableError: If the program's context fails validation.
        HorizonExceededError: If n_cycles runs past a materialized horizon.
    """
    if n_cycles < 0:
        raise ValueError(f"n_cycles must be non-negative, got {n_cycles}")
    horizon = program.horizon
    if horizon is not None and n_cycles > horizon:
        raise HorizonExceededError(
            f"Plan is materialized to {horizon} cycles; {n_cycles} requested"
        )

    weights = program.weights
    context = program.context
    violations = validate_assignment(context, program.region, program.config, len(weights))
    if violations:
        details = "; ".join(str(v) for v in violations)
        raise NotExecutableError(f"Plan does not validate: {details}")

    state = ArrayState.zeros(program.region, symbolic=symbolic)
    for cycle in range(1, n_cycles + 1):
        frame = program.bus_frame(cycle)
        state = step(state, context, frame, x, weights)
        yield frame, state


def run(
    program: Program,
    x: Sequence[int],
    n_cycles: int,
    symbolic: bool = False,
) -> tuple[Trace, list[ExtractedOutput]]:
    """
    Run a program and read out its scheduled extraction events.

    Returns:
        The full trace (cycles 0..n_cycles) and the extracted outputs in
        (cycle, row) order. Outputs whose whole tap window lies past the input
        are kept but flagged as tail.
    """
    states = [ArrayState.zeros(program.region, symbolic=symbolic)]
    frames: list[BusFrame] = []
    for frame, state in simulate(program, x, n_cycles, symbolic=symbolic):
        frames.append(frame)
        states.append(state)
    trace = Trace(states=tuple(states), frames=tuple(frames))

    n_taps = len(program.weights)
    events = sorted(
        program.extraction_events(n_cycles), key=lambda e: (e.cycle, e.row, e.col)
    )
    outputs = [
        ExtractedOutput(
            cycle=event.cycle,
            row=event.row,
            col=event.col,
            output_index=event.output_index,
            value=int(states[event.cycle].numeric[event.row, event.col]),
            tail=event.output_index - n_taps + 1 >= len(x),
        )
        for event in events
    ]
    logger.debug(f"Run finished: {n_cycles} cycles, {len(outputs)} extracted outputs")
    return trace, outputs


def render_symbolic(value: SymbolicValue) -> str:
    """Canonical "x{k}w{j}+..." rendering; "0" for no terms."""
    return value.render()
