from app.services.array_core import (
    IllegalSourceError,
    NotExecutableError,
    RCArrayError,
    reachable_sources,
    resolve_source,
    validate_assignment,
)
from app.services.fir_mappings import (
    DiagonalRequiredError,
    IllegalPlanError,
    MappingError,
    MappingPlan,
    RegionTooSmallError,
    build_plan,
    collect_outputs,
    max_improved_order,
    om_input_order,
    om_output_order,
    plan_basic,
    plan_improved,
    plan_optimized,
    rearrange_samples,
)
from app.services.perf_model import (
    EmptyWindowError,
    UndefinedForBasicError,
    fpga_comparison,
    measure_rate,
    measured_throughput,
    model_for,
    rate,
    rate_mhz,
    rate_report,
    recomputation_counts,
    speedup,
    speedup_curve,
)
from app.services.reference_oracle import fir_reference, verify_outputs
from app.services.report import PlanFileError
from app.services.sim_engine import (
    ArithmeticOverflowError,
    HorizonExceededError,
    render_symbolic,
    run,
    simulate,
    step,
)

__all__ = [
    "ArithmeticOverflowError",
    "DiagonalRequiredError",
    "EmptyWindowError",
    "HorizonExceededError",
    "IllegalPlanError",
    "IllegalSourceError",
    "MappingError",
    "MappingPlan",
    "NotExecutableError",
    "PlanFileError",
    "RCArrayError",
    "RegionTooSmallError",
    "UndefinedForBasicError",
    "build_plan",
    "collect_outputs",
    "fir_reference",
    "fpga_comparison",
    "max_improved_order",
    "measure_rate",
    "measured_throughput",
    "model_for",
    "om_input_order",
    "om_output_order",
    "plan_basic",
    "plan_improved",
    "plan_optimized",
    "rate",
    "rate_mhz",
    "rate_report",
    "reachable_sources",
    "rearrange_samples",
    "recomputation_counts",
    "render_symbolic",
    "resolve_source",
    "run",
    "simulate",
    "speedup",
    "speedup_curve",
    "step",
    "validate_assignment",
    "verify_outputs",
]
