"""
Simulation values: symbolic terms, cell values, array snapshots and traces.

The numeric grid of a snapshot is a read-only int64 numpy array.
"""

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from app.schemas.array import CellCoord, Region

Term = tuple[int, int]


def _term_key(term: Term) -> tuple[int, int]:
    sample_index, weight_index = term
    return (weight_index, sample_index)


@dataclass(frozen=True, slots=True)
class SymbolicValue:
    """
    Multiset of (sample_index, weight_index) terms, kept in canonical order.

    Equality is multiset equality because the terms are always sorted by
    weight index, then sample index.
    """

    terms: tuple[Term, ...] = ()

    def __post_init__(self) -> None:
        ordered = tuple(sorted(self.terms, key=_term_key))
        if ordered != self.terms:
            object.__setattr__(self, "terms", ordered)

    @classmethod
    def of(cls, sample_index: int, weight_index: int) -> "SymbolicValue":
        return cls(((sample_index, weight_index),))

    @classmethod
    def from_terms(cls, terms: Iterable[Term]) -> "SymbolicValue":
        return cls(tuple(terms))

    def __add__(self, other: "SymbolicValue") -> "SymbolicValue":
        return SymbolicValue(self.terms + other.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def evaluate(self, samples: Sequence[int], weights: Sequence[int]) -> int:
        """Sum of x[k] * w[j] over the terms, with x[k] = 0 outside the input."""
        total = 0
        for sample_index, weight_index in self.terms:
            if 0 <= sample_index < len(samples):
                total += int(samples[sample_index]) * int(weights[weight_index])
        return total

    def render(self) -> str:
        """Cell notation of the spreadsheet figures, e.g. "x2w0+x1w1+x0w2"."""
        if not self.terms:
            return "0"
        return "+".join(f"x{k}w{j}" for k, j in self.terms)

    def __str__(self) -> str:
        return self.render()


ZERO_TERMS = SymbolicValue()


@dataclass(frozen=True, slots=True)
class CellValue:
    numeric: int
    symbolic: SymbolicValue | None = None


@dataclass(frozen=True, slots=True)
class BusFrame:
    """Sample index driven on each region row's operand bus for one cycle."""

    indices: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.indices)

    def __getitem__(self, row: int) -> int:
        return self.indices[row]


@dataclass(frozen=True, eq=False)
class ArrayState:
    """Region-shaped snapshot of every cell output at one cycle."""

    cycle: int
    numeric: np.ndarray
    symbolic: tuple[tuple[SymbolicValue, ...], ...] | None = None

    def __post_init__(self) -> None:
        if self.numeric.flags.writeable:
            frozen = self.numeric.astype(np.int64, copy=True)
            frozen.flags.writeable = False
            object.__setattr__(self, "numeric", frozen)

    @classmethod
    def zeros(cls, region: Region, symbolic: bool = False) -> "ArrayState":
        numeric = np.zeros((region.rows, region.cols), dtype=np.int64)
        terms = None
        if symbolic:
            terms = tuple(tuple(ZERO_TERMS for _ in range(region.cols)) for _ in range(region.rows))
        return cls(cycle=0, numeric=numeric, symbolic=terms)

    @property
    def shape(self) -> tuple[int, int]:
        rows, cols = self.numeric.shape
        return int(rows), int(cols)

    def cell(self, coord: CellCoord) -> CellValue:
        symbolic = None
        if self.symbolic is not None:
            symbolic = self.symbolic[coord.row][coord.col]
        return CellValue(numeric=int(self.numeric[coord.row, coord.col]), symbolic=symbolic)

    def column(self, col: int) -> list[int]:
        return [int(v) for v in self.numeric[:, col]]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ArrayState):
            return NotImplemented
        return (
            self.cycle == other.cycle
            and np.array_equal(self.numeric, other.numeric)
            and self.symbolic == other.symbolic
        )

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True)
class Trace:
    """
    Snapshots for cycles 0..T and the bus frame applied at each cycle 1..T.

    frames[t - 1] is the frame that produced states[t].
    """

    states: tuple[ArrayState, ...]
    frames: tuple[BusFrame, ...] = ()

    @property
    def cycles(self) -> int:
        return len(self.states) - 1

    @property
    def final(self) -> ArrayState:
        return self.states[-1]

    def state(self, cycle: int) -> ArrayState:
        return self.states[cycle]

    def frame(self, cycle: int) -> BusFrame:
        if cycle < 1:
            raise IndexError("Cycle 0 has no bus frame")
        return self.frames[cycle - 1]


@dataclass(frozen=True, slots=True)
class ExtractedOutput:
    """An extraction event paired with the value read out of the cell."""

    cycle: int
    row: int
    col: int
    output_index: int
    value: int
    tail: bool = field(default=False)

    @property
    def coord(self) -> CellCoord:
        return CellCoord(row=self.row, col=self.col)

    @property
    def pair(self) -> tuple[int, int]:
        return (self.output_index, self.value)
