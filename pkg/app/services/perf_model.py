"""
Closed-form throughput model and measured-throughput extraction.

Each mapping reduces to a burst: `samples_per_burst` outputs after
`compute_cycles`, then `writeback_cycles` to move them to the frame buffer.

    BM: (N, N, 1)        rate N/N = 1,          with write-back N/(N+1)
    OM: (N*N, 2N-1, N)   rate N*N/(2N-1),       with write-back N*N/(3N-1)
    IM: (2, 1, 1)        rate 2,                with write-back 1

All rates are exact fractions; rounding happens only when rendering MHz.
"""

import logging
from collections import Counter
from collections.abc import Iterable, Sequence
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction
from typing import TYPE_CHECKING, Protocol

import numpy as np

from app.schemas.enums import MappingKind
from app.schemas.perf import FpgaDatum, RateReport, ThroughputModel
from app.schemas.trace import Trace
from app.services.array_core import RCArrayError
from app.services.sim_engine import Program, run

if TYPE_CHECKING:
    from app.services.fir_mappings import MappingPlan

logger = logging.getLogger(__name__)

# published Table 6 value for the 8-tap row; the model gives (N+1)/N = 1.125
PUBLISHED_SPEEDUPS: dict[tuple[MappingKind, int], Decimal] = {
    (MappingKind.IMPROVED, 8): Decimal("1.24"),
}


class UndefinedForBasicError(RCArrayError):
    """Raised when a speedup over the basic mapping is asked of the basic mapping."""

    pass


class EmptyWindowError(RCArrayError):
    """Raised when a measurement window holds no cycles."""

    pass


class _Timed(Protocol):
    @property
    def cycle(self) -> int: ...


def model_for(kind: MappingKind, n: int) -> ThroughputModel:
    """Burst decomposition of a mapping for an N-tap filter."""
    if n < 1:
        raise ValueError(f"Filter order must be positive, got {n}")
    if kind == MappingKind.BASIC:
        return ThroughputModel(samples_per_burst=n, compute_cycles=n, writeback_cycles=1)
    if kind == MappingKind.OPTIMIZED:
        return ThroughputModel(samples_per_burst=n * n, compute_cycles=2 * n - 1, writeback_cycles=n)
    return ThroughputModel(samples_per_burst=2, compute_cycles=1, writeback_cycles=1)


def rate(m: ThroughputModel, include_writeback: bool) -> Fraction:
    """Samples per cycle, optionally charging the write-back cycles."""
    cycles = m.compute_cycles + (m.writeback_cycles if include_writeback else 0)
    return Fraction(m.samples_per_burst, cycles)


def speedup(kind: MappingKind, n: int, include_writeback: bool) -> Fraction:
    """
    Rate of a mapping over the basic mapping under the same write-back setting.

    Raises:
        UndefinedForBasicError: If kind is BASIC.
    """
    if kind == MappingKind.BASIC:
        raise UndefinedForBasicError("Speedup is defined relative to the basic mapping")
    basic = rate(model_for(MappingKind.BASIC, n), include_writeback)
    return rate(model_for(kind, n), include_writeback) / basic


def _clock(clock_mhz: float | Decimal | Fraction) -> Fraction:
    if isinstance(clock_mhz, Fraction):
        return clock_mhz
    return Fraction(str(clock_mhz))


def round_decimal(value: Fraction, places: int, rounding: str = ROUND_HALF_UP) -> Decimal:
    """Exact fraction to a decimal with a fixed number of places."""
    exact = Decimal(value.numerator) / Decimal(value.denominator)
    return exact.quantize(Decimal(1).scaleb(-places), rounding=rounding)


def rate_mhz(
    kind: MappingKind,
    n: int,
    clock_mhz: float | Decimal | Fraction = 100,
    include_writeback: bool = True,
    places: int = 2,
) -> Decimal:
    """
    Output rate in MHz (million samples per second) at a clock.

    Raises:
        ValueError: If the clock is not positive.
    """
    clock = _clock(clock_mhz)
    if clock <= 0:
        raise ValueError(f"Clock must be positive, got {clock_mhz}")
    return round_decimal(rate(model_for(kind, n), include_writeback) * clock, places)


def measured_throughput(extractions: Iterable[_Timed], warmup_cycles: int, horizon: int) -> Fraction:
    """
    Extraction events per cycle inside (warmup_cycles, horizon].

    Raises:
        EmptyWindowError: If horizon does not exceed warmup_cycles.
    """
    if horizon <= warmup_cycles:
        raise EmptyWindowError(
            f"Measurement window ({warmup_cycles}, {horizon}] contains no cycles"
        )
    count = sum(1 for event in extractions if warmup_cycles < event.cycle <= horizon)
    return Fraction(count, horizon - warmup_cycles)


def rate_report(
    kind: MappingKind,
    n: int,
    clock_mhz: float | Decimal | Fraction = 100,
    measured: Fraction | None = None,
) -> RateReport:
    """One table row: exact rates, MHz with write-back and speedup over BM."""
    model = model_for(kind, n)
    rate_wb = rate(model, include_writeback=True)
    basic_wb = rate(model_for(MappingKind.BASIC, n), include_writeback=True)
    return RateReport(
        kind=kind,
        taps=n,
        model=model,
        rate_no_wb=rate(model, include_writeback=False),
        rate_wb=rate_wb,
        mhz_wb=round_decimal(rate_wb * _clock(clock_mhz), 2),
        speedup_vs_basic_wb=rate_wb / basic_wb,
        measured_no_wb=measured,
    )


def speedup_curve(orders: Sequence[int]) -> list[tuple[int, Fraction]]:
    """Optimized-over-basic speedup N*N/(2N-1), without write-back, per order."""
    return [(n, speedup(MappingKind.OPTIMIZED, n, include_writeback=False)) for n in orders]


def fpga_comparison() -> list[FpgaDatum]:
    """
    Published FPGA FIR sampling rates against the improved mapping at 100 MHz.

    The XC3195 runs at 85 MHz and the XC4020 at 80 MHz. The improved mapping
    needs taps + 1 array rows, so these orders assume arrays larger than 8x8.
    """
    return [
        FpgaDatum(
            filter_taps=11,
            device="XC3195",
            rate_mhz_low=Decimal("30"),
            rate_mhz_high=Decimal("30"),
            speedup_vs_morphosys=Decimal("3.3"),
            device_clock_mhz=Decimal("85"),
            min_array_rows=12,
        ),
        FpgaDatum(
            filter_taps=11,
            device="XC3195",
            rate_mhz_low=Decimal("33.3"),
            rate_mhz_high=Decimal("33.3"),
            speedup_vs_morphosys=Decimal("3"),
            device_clock_mhz=Decimal("85"),
            min_array_rows=12,
        ),
        FpgaDatum(
            filter_taps=19,
            device="XC4020",
            rate_mhz_low=Decimal("15"),
            rate_mhz_high=Decimal("20"),
            speedup_vs_morphosys=Decimal("5"),
            device_clock_mhz=Decimal("80"),
            min_array_rows=20,
        ),
    ]


def _window(k: int, n: int) -> tuple[tuple[int, int], ...]:
    return tuple((k - j, j) for j in range(n))


def recomputation_counts(trace: Trace, program: Program) -> dict[int, int]:
    """
    How many cell-cycles of the last region column hold the complete tap window of each y_k.

    A cell counts for y_k when its symbolic terms are exactly
    {(k - j, j) : 0 <= j < N}. The basic mapping finishes every output N times;
    the optimized and improved mappings finish each once.

    Raises:
        ValueError: If the trace was recorded without symbolic terms.
    """
    n = len(program.weights)
    last = program.region.cols - 1
    counts: Counter[int] = Counter()
    for state in trace.states[1:]:
        if state.symbolic is None:
            raise ValueError("Recomputation counting needs a symbolic trace")
        for row in state.symbolic:
            value = row[last]
            if len(value) != n:
                continue
            k = value.terms[0][0]
            if k >= 0 and value.terms == _window(k, n):
                counts[k] += 1
    return dict(sorted(counts.items()))


def measure_rate(
    plan: "MappingPlan",
    bursts: int = 3,
    seed: int = 0,
    value_limit: int = 100,
) -> Fraction:
    """
    Simulate a plan over its warmup plus `bursts` steady bursts and measure outputs per cycle.

    Write-back is not simulated, so the result compares against the no-write-back rate.
    """
    if bursts < 1:
        raise ValueError(f"At least one burst is needed, got {bursts}")
    warmup = plan.warmup_cycles
    horizon = warmup + bursts * plan.burst_cycles
    rng = np.random.default_rng(seed)
    length = horizon * plan.region.rows + plan.order
    x = rng.integers(-value_limit, value_limit, size=length, endpoint=True).tolist()
    _, outputs = run(plan, x, horizon)
    measured = measured_throughput(outputs, warmup, horizon)
    logger.debug(
        f"Measured {plan.kind.short_name} N={plan.order}: {measured} over cycles ({warmup}, {horizon}]"
    )
    return measured
