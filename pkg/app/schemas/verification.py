from pydantic import BaseModel, ConfigDict, Field


class Mismatch(BaseModel):
    """First extracted output that disagrees with the reference filter."""

    model_config = ConfigDict(frozen=True)

    cycle: int
    row: int
    col: int
    output_index: int
    expected: int
    got: int

    def __str__(self) -> str:
        return (
            f"y_{self.output_index} at RC({self.row},{self.col}), cycle {self.cycle}: "
            f"expected {self.expected}, got {self.got}"
        )


class VerificationReport(BaseModel):
    """Outcome of checking extracted outputs against the reference filter."""

    ok: bool
    checked: int = Field(..., ge=0, description="Outputs compared")
    skipped_tail: int = Field(default=0, ge=0, description="Tail-flagged outputs left out")
    mismatch: Mismatch | None = None
