"""
Command-line surface: build plans, simulate, verify against the reference
filter, and render the rate and speedup tables.

Exit codes: 0 ok, 1 runtime or I/O error, 2 legality failure, 3 verification
mismatch.
"""

import argparse
import logging
import sys
from collections.abc import Sequence

from app.core.config import settings
from app.core.logging import configure_logging
from app.schemas.array import ArrayConfig
from app.schemas.enums import MappingKind, WeightOrientation
from app.services.array_core import NotExecutableError, RCArrayError
from app.services.fir_mappings import MappingError, build_plan
from app.services.reference_oracle import verify_outputs
from app.services.report import (
    PlanFileError,
    atomic_write_text,
    build_table,
    fig6_table,
    load_plan,
    load_samples,
    render_outputs,
    render_samples,
    render_sweep,
    render_trace,
    save_plan,
    seeded_values,
    sweep,
    table_csv,
    table_text,
)
from app.services.sim_engine import run

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_LEGALITY = 2
EXIT_MISMATCH = 3


def _array_shape(text: str) -> tuple[int, int]:
    rows, sep, cols = text.lower().partition("x")
    try:
        shape = (int(rows), int(cols))
    except ValueError:
        shape = (0, 0)
    if not sep or min(shape) < 1:
        raise argparse.ArgumentTypeError(f"expected RxC with positive sizes, got '{text}'")
    return shape


def _positive_list(text: str) -> list[int]:
    try:
        values = [int(item) for item in text.split(",") if item.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{text}'") from e
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError(f"expected positive integers, got '{text}'")
    return values


def _kind_list(text: str) -> list[MappingKind]:
    try:
        return [MappingKind(item.strip().lower()) for item in text.split(",") if item.strip()]
    except ValueError as e:
        choices = ", ".join(kind.value for kind in MappingKind)
        raise argparse.ArgumentTypeError(f"kinds must be among {choices}, got '{text}'") from e


def _emit(text: str, output: str | None) -> None:
    if output:
        atomic_write_text(output, text)
    else:
        sys.stdout.write(text)


def _report_legality(message: str, violations: Sequence[object]) -> int:
    print(f"error: {message}", file=sys.stderr)
    for violation in violations:
        print(f"  - {violation}", file=sys.stderr)
    return EXIT_LEGALITY


def cmd_plan(args: argparse.Namespace) -> int:
    """Build a mapping plan, materialize it to the horizon and write it."""
    if args.weights:
        weights = load_samples(args.weights)
        if not weights:
            print("error: the weights file holds no taps", file=sys.stderr)
            return EXIT_RUNTIME
    else:
        weights = seeded_values(args.taps, args.seed, settings.RANDOM_VALUE_LIMIT)

    rows, cols = args.array
    config = ArrayConfig(
        rows=rows,
        cols=cols,
        quadrant_size=settings.DEFAULT_QUADRANT_SIZE,
        diagonal_enabled=args.diagonal,
        clock_mhz=args.clock,
    )
    try:
        plan = build_plan(MappingKind(args.mapping), weights, config, WeightOrientation(args.orientation))
    except MappingError as e:
        return _report_legality(str(e), e.violations)

    save_plan(plan.materialize(args.horizon), args.output)
    print(
        f"wrote {plan.kind.short_name} plan ({plan.order} taps, "
        f"{len(plan.assignment.words)} context words, horizon {args.horizon}) to {args.output}"
    )
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    """Run a plan file over an input file; write the trace and the outputs."""
    plan = load_plan(args.plan)
    samples = load_samples(args.input)
    trace, outputs = run(plan, samples, args.cycles, symbolic=args.symbolic)

    if args.trace:
        atomic_write_text(args.trace, render_trace(trace))
    _emit(render_outputs(outputs), args.outputs)

    tail = sum(1 for output in outputs if output.tail)
    if tail:
        logger.warning(f"{tail} extracted outputs lie past the input and are flagged as tail")
    logger.info(f"Simulated {args.cycles} cycles, {len(outputs)} extraction events")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    """Run a plan and compare its outputs with the reference filter."""
    plan = load_plan(args.plan)
    samples = load_samples(args.input)
    _, outputs = run(plan, samples, args.cycles)
    report = verify_outputs(outputs, samples, plan.taps, trim_tail=args.trim_tail)

    if not report.ok:
        assert report.mismatch is not None
        print(f"MISMATCH after {report.checked} outputs: {report.mismatch}")
        return EXIT_MISMATCH
    print(f"OK: {report.checked} outputs match the reference ({report.skipped_tail} tail skipped)")
    return EXIT_OK


def cmd_perf(args: argparse.Namespace) -> int:
    """Render one table or the Fig 6 curve."""
    orders = args.orders or settings.get_orders()
    if args.fig6:
        table = fig6_table(orders)
    else:
        table = build_table(
            args.table,
            orders=orders,
            clock_mhz=args.clock,
            measure_rates=args.measure,
            formula_orders=args.orders,
            bursts=settings.MEASURE_BURSTS,
            seed=args.seed,
            max_workers=settings.SWEEP_MAX_WORKERS,
        )
    _emit(table_csv(table) if args.format == "csv" else table_text(table), args.output)
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    """One rate row per (mapping, order), optionally measured by simulation."""
    orders = args.orders or settings.get_orders()
    kinds = args.kinds or list(MappingKind)
    reports = sweep(
        kinds,
        orders,
        clock_mhz=args.clock,
        measure_rates=args.measure,
        bursts=settings.MEASURE_BURSTS,
        seed=args.seed,
        max_workers=settings.SWEEP_MAX_WORKERS,
    )
    atomic_write_text(args.output, render_sweep(reports))
    print(f"wrote {len(reports)} rows to {args.output}")
    return EXIT_OK


def cmd_input(args: argparse.Namespace) -> int:
    """Write a seeded random input sequence."""
    limit = args.limit if args.limit is not None else settings.RANDOM_VALUE_LIMIT
    _emit(render_samples(seeded_values(args.length, args.seed, limit)), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--log-level", default=None, help="Override LOG_LEVEL (DEBUG, INFO, ...)")
    common.add_argument("--seed", type=int, default=settings.DEFAULT_SEED, help="Seed for random data")

    parser = argparse.ArgumentParser(
        prog="rcsim",
        description="Reconfigurable cell array FIR mapping simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", parents=[common], help="Build and materialize a mapping plan")
    p.add_argument("--mapping", required=True, choices=[kind.value for kind in MappingKind])
    taps = p.add_mutually_exclusive_group(required=True)
    taps.add_argument("--taps", type=int, help="Filter order; weights are drawn from --seed")
    taps.add_argument("--weights", help="JSON file holding the tap weights w_0..w_{N-1}")
    p.add_argument(
        "--array",
        type=_array_shape,
        default=(settings.DEFAULT_ARRAY_ROWS, settings.DEFAULT_ARRAY_COLS),
        help="Array shape RxC (default: %(default)s)",
    )
    p.add_argument("--diagonal", action="store_true", help="Enable the lower-left port B link")
    p.add_argument("--clock", type=float, default=settings.DEFAULT_CLOCK_MHZ, help="Clock in MHz")
    p.add_argument("--horizon", type=int, required=True, help="Cycles to materialize")
    p.add_argument(
        "--orientation",
        choices=[o.value for o in WeightOrientation],
        default=WeightOrientation.FIGURE.value,
        help="Column-to-tap assignment (default: %(default)s)",
    )
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(handler=cmd_plan)

    p = sub.add_parser("simulate", parents=[common], help="Run a plan over an input")
    p.add_argument("--plan", required=True)
    p.add_argument("--input", required=True, help="JSON array of integer samples")
    p.add_argument("--cycles", type=int, required=True)
    p.add_argument("--symbolic", action="store_true", help="Carry symbolic terms in the trace")
    p.add_argument("--trace", help="Trace CSV path")
    p.add_argument("--outputs", help="Outputs JSON path (default: stdout)")
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("verify", parents=[common], help="Check a plan against the reference filter")
    p.add_argument("--plan", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--cycles", type=int, required=True)
    p.add_argument("--trim-tail", action="store_true", help="Skip outputs past the input")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("perf", parents=[common], help="Render a rate or speedup table")
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--table", choices=["1", "2", "3", "4", "5", "6", "7"])
    which.add_argument("--fig6", action="store_true", help="Speedup curve of the optimized mapping")
    p.add_argument("--orders", type=_positive_list, default=None, help="e.g. 8,16,32,64")
    p.add_argument("--clock", type=float, default=settings.DEFAULT_CLOCK_MHZ)
    p.add_argument("--measure", action="store_true", help="Append simulated rates (Tables 1 and 4)")
    p.add_argument("--format", choices=["csv", "text"], default="csv")
    p.add_argument("-o", "--output", help="Output path (default: stdout)")
    p.set_defaults(handler=cmd_perf)

    p = sub.add_parser("sweep", parents=[common], help="Rate rows over mappings and orders")
    p.add_argument("--orders", type=_positive_list, default=None)
    p.add_argument("--kinds", type=_kind_list, default=None, help="e.g. basic,optimized,improved")
    p.add_argument("--clock", type=float, default=settings.DEFAULT_CLOCK_MHZ)
    p.add_argument("--measure", action="store_true")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("input", parents=[common], help="Write a seeded random input sequence")
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--limit", type=int, default=None, help="Magnitude bound (default: RANDOM_VALUE_LIMIT)")
    p.add_argument("-o", "--output", help="Output path (default: stdout)")
    p.set_defaults(handler=cmd_input)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level or settings.LOG_LEVEL)

    try:
        return args.handler(args)
    except PlanFileError as e:
        if e.violations:
            return _report_legality(str(e), e.violations)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    except NotExecutableError as e:
        return _report_legality(str(e), [])
    except (RCArrayError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    except Exception as e:
        logger.error(f"Unexpected error in '{args.command}': {str(e)}", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
