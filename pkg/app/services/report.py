"""
File formats and table rendering: plan files, input/output JSON, trace CSV,
the rate and speedup tables, and rate sweeps.

Every file is written atomically (temporary file in the target directory, then
rename).
"""

import csv
import io
import json
import logging
import os
import tempfile
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from decimal import ROUND_DOWN, Decimal
from fractions import Fraction
from pathlib import Path

import numpy as np
from pydantic import TypeAdapter, ValidationError

from app.schemas.array import ArrayConfig, Violation
from app.schemas.enums import MappingKind
from app.schemas.perf import RateReport, ReportTable
from app.schemas.plan import PlanFile
from app.schemas.trace import ExtractedOutput, Trace
from app.services.array_core import RCArrayError, validate_assignment
from app.services.fir_mappings import build_plan, collect_outputs
from app.services.perf_model import (
    PUBLISHED_SPEEDUPS,
    fpga_comparison,
    measure_rate,
    model_for,
    rate,
    rate_report,
    round_decimal,
    speedup,
    speedup_curve,
)

logger = logging.getLogger(__name__)

TABLE_IDS = ("1", "2", "3", "4", "5", "6", "7")

TABLE_TITLES = {
    "1": "Rates (in MHz) of BM and OM",
    "2": "Rates for BM and OM and speedup of OM over BM",
    "3": "Speedup of OM over BM",
    "4": "Rates (in MHz) of BM and IM",
    "5": "Rates for BM and IM and speedup of IM over BM",
    "6": "Speedup of IM over BM",
    "7": "Comparison with FPGA FIR implementations",
}

TRACE_HEADER = ["cycle", "row", "col", "bus_index", "numeric", "symbolic"]

SWEEP_HEADER = [
    "mapping",
    "taps",
    "samples_per_burst",
    "compute_cycles",
    "writeback_cycles",
    "rate_no_wb",
    "rate_wb",
    "mhz_wb",
    "speedup_vs_basic_wb",
    "measured_no_wb",
]

_SAMPLES = TypeAdapter(list[int])


class PlanFileError(RCArrayError):
    """Raised when a plan file is malformed or fails the legality check."""

    def __init__(self, message: str, violations: list[Violation] | None = None):
        super().__init__(message)
        self.violations = violations or []


def atomic_write_text(path: str | Path, text: str) -> Path:
    """Write text to path via a temporary sibling file and os.replace."""
    target = Path(path)
    directory = target.parent
    directory.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{target.name}.", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp_name, target)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
    logger.debug(f"Wrote {len(text)} characters to {target}")
    return target


def emit_plan(plan: PlanFile) -> str:
    """Canonical JSON text of a plan file."""
    return json.dumps(plan.model_dump(mode="json"), indent=2) + "\n"


def parse_plan(text: str) -> PlanFile:
    """
    Parse and check a plan file.

    Raises:
        PlanFileError: If the document is malformed or its context words are
            not legal on its array (the violations are attached).
    """
    try:
        plan = PlanFile.model_validate_json(text)
    except ValidationError as e:
        raise PlanFileError(f"Malformed plan file: {e}") from e

    violations = validate_assignment(plan.context, plan.region, plan.config, len(plan.taps))
    if violations:
        details = "; ".join(str(v) for v in violations)
        raise PlanFileError(f"Plan is not legal on its array: {details}", violations)
    return plan


def load_plan(path: str | Path) -> PlanFile:
    return parse_plan(Path(path).read_text(encoding="utf-8"))


def save_plan(plan: PlanFile, path: str | Path) -> Path:
    return atomic_write_text(path, emit_plan(plan))


def parse_samples(text: str) -> list[int]:
    """
    Samples from a JSON array of integers.

    Raises:
        ValueError: If the document is not an array of integers.
    """
    try:
        return _SAMPLES.validate_json(text, strict=True)
    except ValidationError as e:
        raise ValueError(f"Input must be a JSON array of integers: {e}") from e


def load_samples(path: str | Path) -> list[int]:
    return parse_samples(Path(path).read_text(encoding="utf-8"))


def render_samples(samples: Sequence[int]) -> str:
    return json.dumps([int(v) for v in samples]) + "\n"


def render_outputs(outputs: Iterable[ExtractedOutput]) -> str:
    """Extracted outputs as a JSON array of {index, value} sorted by index."""
    pairs = collect_outputs(outputs)
    return json.dumps([{"index": k, "value": v} for k, v in pairs], indent=2) + "\n"


def trace_rows(trace: Trace) -> list[list[str]]:
    """One row per region cell per cycle 1..T, sorted by (cycle, row, col)."""
    rows: list[list[str]] = []
    for cycle in range(1, trace.cycles + 1):
        state = trace.state(cycle)
        frame = trace.frame(cycle)
        n_rows, n_cols = state.shape
        for row in range(n_rows):
            for col in range(n_cols):
                symbolic = ""
                if state.symbolic is not None:
                    symbolic = state.symbolic[row][col].render()
                rows.append(
                    [
                        str(cycle),
                        str(row),
                        str(col),
                        str(frame[row]),
                        str(int(state.numeric[row, col])),
                        symbolic,
                    ]
                )
    return rows


def render_csv(headers: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(headers)
    writer.writerows(rows)
    return buffer.getvalue()


def render_trace(trace: Trace) -> str:
    return render_csv(TRACE_HEADER, trace_rows(trace))


def _label(n: int) -> str:
    return f"{n}-tap"


def _plain(value: Decimal) -> str:
    """Decimal without trailing zeros, never in exponent form."""
    text = f"{value:f}"
    if "." in text:
        text = text.rstrip("0").rstrip(".")
    return text


def _mhz(kind: MappingKind, n: int, clock: Fraction) -> str:
    value = rate(model_for(kind, n), include_writeback=True) * clock
    if kind == MappingKind.BASIC:
        return str(round_decimal(value, 2))
    if kind == MappingKind.OPTIMIZED:
        return str(round_decimal(value, 1))
    return _plain(round_decimal(value, 2))


def _measurement_config(kind: MappingKind, n: int, clock_mhz: float) -> ArrayConfig:
    if kind == MappingKind.IMPROVED:
        return ArrayConfig(rows=n + 1, cols=n, diagonal_enabled=True, clock_mhz=clock_mhz)
    return ArrayConfig(rows=n, cols=n, clock_mhz=clock_mhz)


def measure(
    kind: MappingKind,
    n: int,
    clock_mhz: float = 100.0,
    bursts: int = 3,
    seed: int = 0,
) -> Fraction:
    """Measured no-write-back rate of a mapping on the smallest array that holds it."""
    plan = build_plan(kind, [1] * n, _measurement_config(kind, n, clock_mhz))
    return measure_rate(plan, bursts=bursts, seed=seed)


def _measure_all(
    pairs: Sequence[tuple[MappingKind, int]],
    clock_mhz: float,
    bursts: int,
    seed: int,
    max_workers: int,
) -> dict[tuple[MappingKind, int], Fraction]:
    def task(pair: tuple[MappingKind, int]) -> Fraction:
        kind, n = pair
        return measure(kind, n, clock_mhz=clock_mhz, bursts=bursts, seed=seed)

    with ThreadPoolExecutor(max_workers=max(1, max_workers)) as pool:
        results = list(pool.map(task, pairs))
    return dict(zip(pairs, results, strict=True))


def _rate_table(
    table_id: str,
    other: MappingKind,
    orders: Sequence[int],
    clock: Fraction,
    measured: dict[tuple[MappingKind, int], Fraction] | None,
) -> ReportTable:
    tag = other.short_name.lower()
    headers = ["filter", "bm_samples", "bm_cycles", "bm_mhz", f"{tag}_samples", f"{tag}_cycles", f"{tag}_mhz"]
    if measured is not None:
        headers += ["bm_measured", f"{tag}_measured"]

    rows = []
    for n in orders:
        row = [_label(n)]
        for kind in (MappingKind.BASIC, other):
            m = model_for(kind, n)
            row += [
                str(m.samples_per_burst),
                str(m.compute_cycles + m.writeback_cycles),
                _mhz(kind, n, clock),
            ]
        if measured is not None:
            row += [str(measured[(MappingKind.BASIC, n)]), str(measured[(other, n)])]
        rows.append(row)
    return ReportTable(table_id=table_id, title=TABLE_TITLES[table_id], headers=headers, rows=rows)


def _formula_table(table_id: str, orders: Sequence[int] | None) -> ReportTable:
    if table_id == "2":
        other = MappingKind.OPTIMIZED
        headers = ["case", "bm_rate", "om_rate", "speedup"]
        rows = [
            ["without_writeback", "N/N", "N^2/(2N-1)", "N^2/(2N-1)"],
            ["with_writeback", "N/(N+1)", "N^2/(3N-1)", "N(N+1)/(3N-1)"],
        ]
    else:
        other = MappingKind.IMPROVED
        headers = ["case", "bm_rate", "im_rate", "speedup"]
        rows = [
            ["without_writeback", "N/N = 1", "2N/N = 2", "2"],
            ["with_writeback", "N/(N+1)", "2N/2N = 1", "(N+1)/N"],
        ]
    for n in orders or ():
        headers.append(f"speedup_n{n}")
        rows[0].append(str(speedup(other, n, include_writeback=False)))
        rows[1].append(str(speedup(other, n, include_writeback=True)))
    return ReportTable(table_id=table_id, title=TABLE_TITLES[table_id], headers=headers, rows=rows)


def _speedup_table(table_id: str, orders: Sequence[int]) -> ReportTable:
    if table_id == "3":
        rows = [
            [_label(n), str(round_decimal(speedup(MappingKind.OPTIMIZED, n, True), 2))]
            for n in orders
        ]
        return ReportTable(
            table_id=table_id, title=TABLE_TITLES[table_id], headers=["filter", "speedup"], rows=rows
        )

    rows = []
    notes = []
    for n in orders:
        value = round_decimal(speedup(MappingKind.IMPROVED, n, True), 3, rounding=ROUND_DOWN)
        note = ""
        published = PUBLISHED_SPEEDUPS.get((MappingKind.IMPROVED, n))
        if published is not None and published != value:
            note = f"paper prints {published}"
            notes.append(f"{_label(n)}: computed (N+1)/N = {value}; {note}")
            logger.warning(f"IM speedup for {n} taps is {value}; the published value is {published}")
        rows.append([_label(n), str(value), note])
    return ReportTable(
        table_id=table_id,
        title=TABLE_TITLES[table_id],
        headers=["filter", "speedup", "note"],
        rows=rows,
        notes=notes,
    )


def _fpga_table() -> ReportTable:
    rows = []
    notes = []
    for datum in fpga_comparison():
        rows.append(
            [
                _label(datum.filter_taps),
                f"{_plain(datum.morphosys_mhz)} MHz",
                f"{datum.rate_label} ({datum.device})",
                _plain(datum.speedup_vs_morphosys),
                _plain(datum.device_clock_mhz),
                str(datum.min_array_rows),
            ]
        )
        note = (
            f"{_label(datum.filter_taps)}: IM needs at least {datum.min_array_rows} rows; "
            f"an 8x8 array maps at most 7 taps"
        )
        if note not in notes:
            notes.append(note)
    return ReportTable(
        table_id="7",
        title=TABLE_TITLES["7"],
        headers=["filter", "morphosys", "fpga", "speedup", "device_clock_mhz", "min_array_rows"],
        rows=rows,
        notes=notes,
    )


def build_table(
    table_id: str | int,
    orders: Sequence[int] = (8, 16, 32, 64),
    clock_mhz: float = 100.0,
    measure_rates: bool = False,
    formula_orders: Sequence[int] | None = None,
    bursts: int = 3,
    seed: int = 0,
    max_workers: int = 4,
) -> ReportTable:
    """
    One of the rate, formula, speedup and comparison tables.

    Tables 1 and 4 gain measured no-write-back rates with `measure_rates`;
    Tables 2 and 5 gain evaluated speedups for `formula_orders`.

    Raises:
        ValueError: If the table id is unknown or the clock is not positive.
    """
    key = str(table_id)
    if key not in TABLE_IDS:
        raise ValueError(f"Unknown table '{table_id}'; expected one of {', '.join(TABLE_IDS)}")
    clock = Fraction(str(clock_mhz))
    if clock <= 0:
        raise ValueError(f"Clock must be positive, got {clock_mhz}")

    if key in ("1", "4"):
        other = MappingKind.OPTIMIZED if key == "1" else MappingKind.IMPROVED
        measured = None
        if measure_rates:
            pairs = [(kind, n) for n in orders for kind in (MappingKind.BASIC, other)]
            measured = _measure_all(pairs, clock_mhz, bursts, seed, max_workers)
        table = _rate_table(key, other, orders, clock, measured)
    elif key in ("2", "5"):
        table = _formula_table(key, formula_orders)
    elif key in ("3", "6"):
        table = _speedup_table(key, orders)
    else:
        table = _fpga_table()

    logger.info(f"Rendered table {key} with {len(table.rows)} rows")
    return table


def fig6_table(orders: Sequence[int]) -> ReportTable:
    """Optimized-over-basic speedup N^2/(2N-1) per order, for plotting."""
    rows = [[str(n), str(round_decimal(value, 4))] for n, value in speedup_curve(orders)]
    return ReportTable(
        table_id="fig6",
        title="Speedup of OM over BM without write-back",
        headers=["order", "speedup"],
        rows=rows,
    )


def table_csv(table: ReportTable) -> str:
    return render_csv(table.headers, table.rows)


def table_text(table: ReportTable) -> str:
    """Aligned plain-text rendering; the first column is left-aligned."""
    grid = [table.headers] + table.rows
    widths = [max(len(row[i]) for row in grid) for i in range(len(table.headers))]

    def line(cells: Sequence[str]) -> str:
        parts = [
            cell.ljust(widths[i]) if i == 0 else cell.rjust(widths[i]) for i, cell in enumerate(cells)
        ]
        return "  ".join(parts).rstrip()

    out = [f"Table {table.table_id}: {table.title}" if table.table_id in TABLE_IDS else table.title]
    out.append(line(table.headers))
    out.append("  ".join("-" * w for w in widths))
    out.extend(line(row) for row in table.rows)
    out.extend(f"note: {note}" for note in table.notes)
    return "\n".join(out) + "\n"


def sweep(
    kinds: Sequence[MappingKind],
    orders: Sequence[int],
    clock_mhz: float = 100.0,
    measure_rates: bool = False,
    bursts: int = 3,
    seed: int = 0,
    max_workers: int = 4,
) -> list[RateReport]:
    """One RateReport per (kind, order); measurements run on a thread pool."""
    pairs = [(kind, n) for kind in kinds for n in orders]
    measured: dict[tuple[MappingKind, int], Fraction] = {}
    if measure_rates:
        measured = _measure_all(pairs, clock_mhz, bursts, seed, max_workers)
    reports = [rate_report(kind, n, clock_mhz, measured.get((kind, n))) for kind, n in pairs]
    logger.info(f"Sweep finished: {len(reports)} rows, measured={measure_rates}")
    return reports


def sweep_rows(reports: Iterable[RateReport]) -> list[list[str]]:
    fields: list[Callable[[RateReport], object]] = [
        lambda r: r.kind.value,
        lambda r: r.taps,
        lambda r: r.model.samples_per_burst,
        lambda r: r.model.compute_cycles,
        lambda r: r.model.writeback_cycles,
        lambda r: r.rate_no_wb,
        lambda r: r.rate_wb,
        lambda r: r.mhz_wb,
        lambda r: r.speedup_vs_basic_wb,
        lambda r: "" if r.measured_no_wb is None else r.measured_no_wb,
    ]
    return [[str(field(report)) for field in fields] for report in reports]


def render_sweep(reports: Iterable[RateReport]) -> str:
    return render_csv(SWEEP_HEADER, sweep_rows(reports))


def seeded_values(length: int, seed: int, limit: int = 100) -> list[int]:
    """`length` integers drawn uniformly from [-limit, limit] with a fixed seed."""
    if length < 0:
        raise ValueError(f"length must be non-negative, got {length}")
    rng = np.random.default_rng(seed)
    return [int(v) for v in rng.integers(-limit, limit, size=length, endpoint=True)]
