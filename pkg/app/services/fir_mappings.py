"""
Executable plans for the three FIR mappings.

All three share one column-broadcast configuration: column 0 multiplies by
the highest tap, every later column multiplies by the next lower tap and adds
port B. They differ in where port B reads from and in what the operand bus
carries each cycle.

- Basic (BM): port B reads West; row r of cycle t sees x[t - N + r]. Column
  N-1 holds y_{t-N}..y_{t-1} every cycle, read out once per N cycles.
- Optimized (OM): same words, but the bus is rearranged into blocks of 2N-1
  cycles with row spacing N, so each block finishes N*N distinct outputs.
- Improved (IM): port B reads the lower-left cell over the diagonal link and
  the bus advances two samples per cycle, finishing two outputs every cycle.
"""

import logging
import math
from collections.abc import Iterable, Sequence

from pydantic import BaseModel, ConfigDict

from app.schemas.array import ArrayConfig, ContextAssignment, ContextWord, Region, Violation
from app.schemas.enums import BroadcastMode, Direction, MappingKind, WeightOrientation
from app.schemas.perf import ThroughputModel
from app.schemas.plan import ArrayBlock, ExtractionEvent, PlanFile, TapVector
from app.schemas.trace import BusFrame, ExtractedOutput
from app.services.array_core import RCArrayError, validate_assignment
from app.services.perf_model import model_for

logger = logging.getLogger(__name__)


class MappingError(RCArrayError):
    """Base exception for plans that cannot be placed on a configuration."""

    def __init__(self, message: str, violations: list[Violation] | None = None):
        super().__init__(message)
        self.violations = violations or []


class DiagonalRequiredError(MappingError):
    """Raised when the improved mapping is requested without the diagonal link."""

    pass


class RegionTooSmallError(MappingError):
    """Raised when the array cannot hold the mapping's region."""

    pass


class IllegalPlanError(MappingError):
    """Raised when a generated context assignment fails validation."""

    pass


def _om_bus_index(n: int, row: int, cycle: int) -> int:
    """Sample on row `row` of the optimized bus at `cycle`: blocks of 2N-1 cycles, row spacing N."""
    block, offset = divmod(cycle - 1, 2 * n - 1)
    return block * n * n + offset + row * n


def _om_finished(n: int, cycle: int) -> list[tuple[int, int]]:
    """(row, output index) pairs the optimized mapping finishes at `cycle`."""
    block, offset = divmod(cycle - 1, 2 * n - 1)
    c = offset + 1
    if c < n:
        # preparatory cycle; with zero history only block 0, row 0 is finished
        return [(0, c - 1)] if block == 0 else []
    return [(row, block * n * n + (c - 1) + row * n) for row in range(n)]


class MappingPlan(BaseModel):
    """
    A complete executable mapping.

    Bus frames and extraction events are computed on demand for any cycle, so a
    plan runs to any horizon; `materialize` freezes them into a PlanFile.
    """

    model_config = ConfigDict(frozen=True)

    kind: MappingKind
    taps: TapVector
    config: ArrayConfig
    region: Region
    assignment: ContextAssignment
    writeback: ThroughputModel
    orientation: WeightOrientation = WeightOrientation.FIGURE

    @property
    def order(self) -> int:
        return self.taps.order

    @property
    def context(self) -> ContextAssignment:
        return self.assignment

    @property
    def weights(self) -> tuple[int, ...]:
        return self.taps.weights

    @property
    def horizon(self) -> int | None:
        return None

    @property
    def last_column(self) -> int:
        return self.order - 1

    @property
    def burst_cycles(self) -> int:
        """Cycles between repeats of the extraction pattern."""
        n = self.order
        if self.kind == MappingKind.BASIC:
            return n
        if self.kind == MappingKind.OPTIMIZED:
            return 2 * n - 1
        return 1

    @property
    def warmup_cycles(self) -> int:
        """Cycles before the extraction rate settles to its steady value."""
        n = self.order
        if self.kind == MappingKind.BASIC:
            return n
        if self.kind == MappingKind.OPTIMIZED:
            return 2 * n - 1
        return math.ceil((n - 1) / 2)

    def bus_index(self, row: int, cycle: int) -> int:
        """Sample index on the operand bus of a region row at a cycle (t >= 1)."""
        n = self.order
        if self.kind == MappingKind.BASIC:
            return cycle - n + row
        if self.kind == MappingKind.OPTIMIZED:
            return _om_bus_index(n, row, cycle)
        return 2 * (cycle - 1) + row - (n - 1)

    def bus_frame(self, cycle: int) -> BusFrame:
        if cycle < 1:
            raise ValueError(f"Bus frames start at cycle 1, got {cycle}")
        return BusFrame(tuple(self.bus_index(row, cycle) for row in range(self.region.rows)))

    def _events_at(self, cycle: int) -> Iterable[ExtractionEvent]:
        n = self.order
        col = self.last_column

        if self.kind == MappingKind.BASIC:
            if cycle % n == 0:
                for row in range(n):
                    yield ExtractionEvent(cycle=cycle, row=row, col=col, output_index=cycle - n + row)
            return

        if self.kind == MappingKind.OPTIMIZED:
            for row, k in _om_finished(n, cycle):
                yield ExtractionEvent(cycle=cycle, row=row, col=col, output_index=k)
            return

        for row in (0, 1):
            k = 2 * (cycle - 1) - (n - 1) + row
            if k >= 0:
                yield ExtractionEvent(cycle=cycle, row=row, col=col, output_index=k)

    def extraction_events(self, horizon: int) -> list[ExtractionEvent]:
        """Extraction events for cycles 1..horizon in (cycle, row) order."""
        events: list[ExtractionEvent] = []
        for cycle in range(1, horizon + 1):
            events.extend(self._events_at(cycle))
        return events

    def materialize(self, horizon: int) -> PlanFile:
        """Freeze the schedules for cycles 1..horizon into a plan file."""
        return PlanFile(
            kind=self.kind,
            taps=list(self.weights),
            array=ArrayBlock.from_config(self.config),
            region=self.region,
            mode=self.assignment.mode,
            assignment=list(self.assignment.words),
            horizon=horizon,
            bus_frames=[list(self.bus_frame(t).indices) for t in range(1, horizon + 1)],
            extraction=self.extraction_events(horizon),
        )


def _column_words(n: int, direction: Direction, orientation: WeightOrientation) -> ContextAssignment:
    def weight_for(col: int) -> int:
        return n - 1 - col if orientation == WeightOrientation.FIGURE else col

    words = [ContextWord.mul(weight_for(0))]
    words.extend(ContextWord.mul_add(weight_for(col), direction) for col in range(1, n))
    return ContextAssignment(mode=BroadcastMode.COLUMN, words=tuple(words))


def _as_taps(taps: TapVector | Sequence[int]) -> TapVector:
    if isinstance(taps, TapVector):
        return taps
    return TapVector(weights=tuple(int(w) for w in taps))


def _finish(
    kind: MappingKind,
    taps: TapVector,
    cfg: ArrayConfig,
    region: Region,
    assignment: ContextAssignment,
    orientation: WeightOrientation,
) -> MappingPlan:
    violations = validate_assignment(assignment, region, cfg, taps.order)
    if violations:
        details = "; ".join(str(v) for v in violations)
        raise IllegalPlanError(f"{kind.short_name} assignment does not validate: {details}", violations)
    plan = MappingPlan(
        kind=kind,
        taps=taps,
        config=cfg,
        region=region,
        assignment=assignment,
        writeback=model_for(kind, taps.order),
        orientation=orientation,
    )
    logger.info(
        f"Built {kind.short_name} plan: {taps.order} taps on {cfg.shape_label} "
        f"(region {region.rows}x{region.cols})"
    )
    return plan


def _require_square(kind: MappingKind, n: int, cfg: ArrayConfig) -> None:
    if cfg.rows < n or cfg.cols < n:
        raise RegionTooSmallError(
            f"{kind.short_name} with {n} taps needs a {n}x{n} region; "
            f"the array is {cfg.shape_label}"
        )


def plan_basic(
    taps: TapVector | Sequence[int],
    cfg: ArrayConfig,
    orientation: WeightOrientation = WeightOrientation.FIGURE,
) -> MappingPlan:
    """
    Basic mapping: N x N region, port B reads the cell to the left.

    Raises:
        RegionTooSmallError: If the array has fewer than N rows or columns.
    """
    taps = _as_taps(taps)
    n = taps.order
    _require_square(MappingKind.BASIC, n, cfg)
    assignment = _column_words(n, Direction.WEST, orientation)
    return _finish(MappingKind.BASIC, taps, cfg, Region(rows=n, cols=n), assignment, orientation)


def plan_optimized(
    taps: TapVector | Sequence[int],
    cfg: ArrayConfig,
    orientation: WeightOrientation = WeightOrientation.FIGURE,
) -> MappingPlan:
    """
    Optimized mapping: the basic configuration fed a rearranged input stream.

    Raises:
        RegionTooSmallError: If the array has fewer than N rows or columns.
    """
    taps = _as_taps(taps)
    n = taps.order
    _require_square(MappingKind.OPTIMIZED, n, cfg)
    assignment = _column_words(n, Direction.WEST, orientation)
    return _finish(MappingKind.OPTIMIZED, taps, cfg, Region(rows=n, cols=n), assignment, orientation)


def max_improved_order(cfg: ArrayConfig) -> int:
    """Highest order the improved mapping fits: one less than the row count."""
    return min(cfg.rows - 1, cfg.cols)


def plan_improved(
    taps: TapVector | Sequence[int],
    cfg: ArrayConfig,
    orientation: WeightOrientation = WeightOrientation.FIGURE,
) -> MappingPlan:
    """
    Improved mapping: port B reads the lower-left cell, two outputs per cycle.

    The last region row has no lower-left cell and adds zero.

    Raises:
        DiagonalRequiredError: If the diagonal link is disabled.
        RegionTooSmallError: If the array has fewer than N+1 rows or N columns.
    """
    taps = _as_taps(taps)
    n = taps.order
    if not cfg.diagonal_enabled:
        raise DiagonalRequiredError(
            "IM needs the diagonal interconnect: port B must access the cell at its "
            "lower left corner"
        )
    if cfg.rows < n + 1 or cfg.cols < n:
        raise RegionTooSmallError(
            f"IM with {n} taps needs {n + 1} rows and {n} columns; the maximum order that "
            f"the filter can assume needs to be less than the RC length, so a "
            f"{cfg.shape_label} array maps at most {max(max_improved_order(cfg), 0)} taps"
        )
    assignment = _column_words(n, Direction.SOUTH_WEST, orientation)
    return _finish(MappingKind.IMPROVED, taps, cfg, Region(rows=n + 1, cols=n), assignment, orientation)


_BUILDERS = {
    MappingKind.BASIC: plan_basic,
    MappingKind.OPTIMIZED: plan_optimized,
    MappingKind.IMPROVED: plan_improved,
}


def build_plan(
    kind: MappingKind,
    taps: TapVector | Sequence[int],
    cfg: ArrayConfig,
    orientation: WeightOrientation = WeightOrientation.FIGURE,
) -> MappingPlan:
    return _BUILDERS[kind](taps, cfg, orientation)


def om_input_order(length: int, n: int) -> list[int]:
    """
    Sample indices of the optimized stream, row-major per cycle.

    For N=3 the stream starts 0, 3, 6, 1, 4, 7, 2, 5, 8.
    """
    if n < 1:
        raise ValueError(f"Filter order must be positive, got {n}")
    if length <= 0:
        return []
    order: list[int] = []
    cycle = 1
    while len(order) < length:
        order.extend(_om_bus_index(n, row, cycle) for row in range(n))
        cycle += 1
    return order[:length]


def om_output_order(count: int, n: int) -> list[int]:
    """Output indices in the order the optimized mapping finishes them."""
    if n < 1:
        raise ValueError(f"Filter order must be positive, got {n}")
    order: list[int] = []
    cycle = 1
    while len(order) < count:
        order.extend(k for _, k in _om_finished(n, cycle))
        cycle += 1
    return order[:count]


def rearrange_samples(x: Sequence[int], n: int) -> list[int]:
    """
    Physical optimized input stream: x reordered (and re-fed) in whole blocks.

    Enough blocks of 2N-1 cycles are emitted to consume every sample; indices
    past the input carry zero.
    """
    if not x:
        return []
    blocks = math.ceil(len(x) / (n * n))
    indices = om_input_order(blocks * (2 * n - 1) * n, n)
    return [int(x[k]) if 0 <= k < len(x) else 0 for k in indices]


def collect_outputs(outputs: Iterable[ExtractedOutput], trim_tail: bool = False) -> list[tuple[int, int]]:
    """
    Natural-order (index, value) pairs from extracted outputs.

    The first extraction of an index wins; tail-flagged outputs are dropped
    when `trim_tail` is set.
    """
    seen: dict[int, int] = {}
    for output in outputs:
        if trim_tail and output.tail:
            continue
        seen.setdefault(output.output_index, output.value)
    return sorted(seen.items())
