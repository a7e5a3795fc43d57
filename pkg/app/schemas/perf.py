"""
Throughput and comparison records.

Rates stay exact (fractions.Fraction) inside the models; decimal rounding only
happens when a table is rendered.
"""

from decimal import Decimal
from fractions import Fraction

from pydantic import BaseModel, ConfigDict, Field, field_serializer

from app.schemas.enums import MappingKind


class ThroughputModel(BaseModel):
    """
    Burst decomposition from which every rate derives.

    A burst delivers `samples_per_burst` outputs after `compute_cycles` of array
    work, then spends `writeback_cycles` moving them to the frame buffer.
    """

    model_config = ConfigDict(frozen=True)

    samples_per_burst: int = Field(..., ge=1)
    compute_cycles: int = Field(..., ge=1)
    writeback_cycles: int = Field(..., ge=0)


class RateReport(BaseModel):
    """One (mapping, order) row of the rate tables."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kind: MappingKind
    taps: int = Field(..., ge=1)
    model: ThroughputModel
    rate_no_wb: Fraction
    rate_wb: Fraction
    mhz_wb: Decimal
    speedup_vs_basic_wb: Fraction
    measured_no_wb: Fraction | None = None

    @field_serializer("rate_no_wb", "rate_wb", "speedup_vs_basic_wb", "measured_no_wb")
    def serialize_fraction(self, value: Fraction | None) -> str | None:
        return None if value is None else str(value)


class FpgaDatum(BaseModel):
    """One FPGA comparison row against the improved mapping."""

    model_config = ConfigDict(frozen=True)

    filter_taps: int = Field(..., ge=1)
    device: str
    rate_mhz_low: Decimal
    rate_mhz_high: Decimal
    speedup_vs_morphosys: Decimal
    morphosys_mhz: Decimal = Decimal("100")
    device_clock_mhz: Decimal
    min_array_rows: int = Field(
        ...,
        description="Rows the improved mapping needs for this order (taps + 1)",
    )

    @property
    def rate_label(self) -> str:
        if self.rate_mhz_low == self.rate_mhz_high:
            return f"{self.rate_mhz_low} MHz"
        return f"{self.rate_mhz_low}-{self.rate_mhz_high} MHz"


class ReportTable(BaseModel):
    """A rendered table: header, string cells and free-form notes."""

    table_id: str
    title: str
    headers: list[str]
    rows: list[list[str]]
    notes: list[str] = Field(default_factory=list)
