import json
import logging
from collections.abc import Iterator

from fastapi import APIRouter, Depends, HTTPException, Query, status
from fastapi.responses import StreamingResponse

from app.api.dependencies import get_settings
from app.core.config import Settings
from app.schemas import (
    ArrayConfig,
    OutputRecord,
    PlanFile,
    PlanRequest,
    ReportTable,
    SimulationRequest,
    SimulationResponse,
    TraceRow,
    VerificationReport,
    VerificationRequest,
)
from app.services import (
    ArithmeticOverflowError,
    HorizonExceededError,
    MappingError,
    NotExecutableError,
    build_plan,
    collect_outputs,
    run,
    simulate,
    verify_outputs,
)
from app.services.report import TABLE_IDS, build_table, fig6_table, seeded_values

logger = logging.getLogger(__name__)

router = APIRouter()


def _run_errors(e: Exception) -> HTTPException:
    if isinstance(e, NotExecutableError):
        return HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=str(e))
    if isinstance(e, (ArithmeticOverflowError, HorizonExceededError)):
        return HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))
    logger.error(f"Unexpected error running plan: {str(e)}", exc_info=True)
    return HTTPException(
        status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
        detail="An unexpected error occurred. Please try again later.",
    )


@router.post(
    "/plans",
    response_model=PlanFile,
    status_code=status.HTTP_200_OK,
    summary="Build a mapping plan",
    description=(
        "Builds the basic, optimized or improved FIR mapping on the requested array and "
        "materializes its bus frames and extraction events up to the horizon."
    ),
    response_description="Materialized plan file, directly executable by the simulator",
    tags=["Plans"],
)
async def create_plan(
    request: PlanRequest,
    config: Settings = Depends(get_settings),
) -> PlanFile:
    weights = request.weights
    if weights is None:
        assert request.taps is not None
        weights = seeded_values(request.taps, request.seed, config.RANDOM_VALUE_LIMIT)

    array = ArrayConfig(
        rows=request.rows or config.DEFAULT_ARRAY_ROWS,
        cols=request.cols or config.DEFAULT_ARRAY_COLS,
        quadrant_size=config.DEFAULT_QUADRANT_SIZE,
        diagonal_enabled=request.diagonal,
        clock_mhz=request.clock_mhz or config.DEFAULT_CLOCK_MHZ,
    )
    try:
        plan = build_plan(request.mapping, weights, array, request.orientation)
        return plan.materialize(request.horizon)
    except MappingError as e:
        logger.error(f"Mapping rejected: {str(e)}")
        raise HTTPException(
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            detail={"message": str(e), "violations": [str(v) for v in e.violations]},
        ) from e
    except Exception as e:
        logger.error(f"Unexpected error building plan: {str(e)}", exc_info=True)
        raise HTTPException(
            status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
            detail="An unexpected error occurred. Please try again later.",
        ) from e


@router.post(
    "/simulations",
    response_model=SimulationResponse,
    status_code=status.HTTP_200_OK,
    summary="Simulate a plan",
    description="Runs a materialized plan cycle by cycle and returns the trace and extracted outputs.",
    tags=["Simulation"],
)
async def create_simulation(request: SimulationRequest) -> SimulationResponse:
    try:
        trace, outputs = run(request.plan, request.samples, request.cycles, symbolic=request.symbolic)
    except Exception as e:
        raise _run_errors(e) from e

    rows = []
    for cycle in range(1, trace.cycles + 1):
        state = trace.state(cycle)
        frame = trace.frame(cycle)
        n_rows, n_cols = state.shape
        for row in range(n_rows):
            for col in range(n_cols):
                symbolic = None
                if state.symbolic is not None:
                    symbolic = state.symbolic[row][col].render()
                rows.append(
                    TraceRow(
                        cycle=cycle,
                        row=row,
                        col=col,
                        bus_index=frame[row],
                        numeric=int(state.numeric[row, col]),
                        symbolic=symbolic,
                    )
                )
    return SimulationResponse(
        outputs=[OutputRecord(index=k, value=v) for k, v in collect_outputs(outputs)],
        trace=rows,
    )


@router.post(
    "/simulations/stream",
    summary="Stream a simulation cycle by cycle",
    description=(
        "Runs a materialized plan and streams one Server-Sent Event per cycle with the bus "
        "frame and the array snapshot."
    ),
    response_description="Server-Sent Events stream of array snapshots",
    tags=["Simulation"],
)
async def stream_simulation(request: SimulationRequest):
    """
    Stream a simulation via Server-Sent Events (SSE).

    Event format:
    - data: {cycle snapshot JSON} - For each simulated cycle
    - event: done, data: [DONE] - When the run is complete
    - event: error, data: {error JSON} - If the run fails

    The simulation loop is a plain generator, iterated in the threadpool.
    """

    def sse_generator() -> Iterator[str]:
        cycles = 0
        try:
            for frame, state in simulate(
                request.plan, request.samples, request.cycles, symbolic=request.symbolic
            ):
                cycles += 1
                snapshot = {
                    "cycle": state.cycle,
                    "bus": list(frame.indices),
                    "numeric": state.numeric.tolist(),
                    "symbolic": (
                        None
                        if state.symbolic is None
                        else [[value.render() for value in row] for row in state.symbolic]
                    ),
                }
                yield f"data: {json.dumps(snapshot)}\n\n"

            yield "event: done\ndata: [DONE]\n\n"
            logger.info(f"Successfully streamed {cycles} cycles")

        except (NotExecutableError, ArithmeticOverflowError, HorizonExceededError) as e:
            logger.error(f"Simulation error in stream: {e}")
            error_data = json.dumps({"error": type(e).__name__, "detail": str(e)})
            yield f"event: error\ndata: {error_data}\n\n"
        except Exception as e:
            logger.error(f"Error in stream: {e}", exc_info=True)
            error_data = json.dumps({"error": "Unexpected error", "detail": str(e)})
            yield f"event: error\ndata: {error_data}\n\n"

    return StreamingResponse(
        sse_generator(),
        media_type="text/event-stream; charset=utf-8",
        headers={
            "Cache-Control": "no-cache, no-store, must-revalidate",
            "Connection": "keep-alive",
            "X-Accel-Buffering": "no",
        },
    )


@router.post(
    "/verifications",
    response_model=VerificationReport,
    status_code=status.HTTP_200_OK,
    summary="Verify a plan against the reference filter",
    tags=["Simulation"],
)
async def create_verification(request: VerificationRequest) -> VerificationReport:
    try:
        _, outputs = run(request.plan, request.samples, request.cycles)
        return verify_outputs(outputs, request.samples, request.plan.taps, trim_tail=request.trim_tail)
    except Exception as e:
        raise _run_errors(e) from e


@router.get(
    "/perf/tables/{table_id}",
    response_model=ReportTable,
    summary="Rate, speedup and comparison tables",
    tags=["Performance"],
)
async def get_table(
    table_id: str,
    clock_mhz: float | None = Query(default=None, gt=0),
    config: Settings = Depends(get_settings),
) -> ReportTable:
    if table_id not in TABLE_IDS:
        raise HTTPException(status_code=status.HTTP_404_NOT_FOUND, detail=f"Unknown table '{table_id}'")
    clock = clock_mhz if clock_mhz is not None else config.DEFAULT_CLOCK_MHZ
    return build_table(table_id, orders=config.get_orders(), clock_mhz=clock)


@router.get(
    "/perf/fig6",
    response_model=ReportTable,
    summary="Optimized-mapping speedup curve",
    tags=["Performance"],
)
async def get_fig6(
    orders: str | None = Query(default=None, description="Comma-separated filter orders"),
    config: Settings = Depends(get_settings),
) -> ReportTable:
    try:
        values = config.get_orders() if orders is None else _parse_orders(orders)
    except ValueError as e:
        raise HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=str(e)) from e
    return fig6_table(values)


def _parse_orders(text: str) -> list[int]:
    values = [int(item) for item in text.split(",") if item.strip()]
    if not values or any(v < 1 for v in values):
        raise ValueError(f"Orders must be positive integers, got '{text}'")
    return values
