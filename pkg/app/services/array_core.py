"""
Interconnect reachability and context legality for the cell array.

Three interconnect levels are modeled as reachability answers: the
north/south/east/west mesh, intra-quadrant row and column links, and express
lanes between paired quadrants. The optional diagonal link lets port B read
the cell at the lower-left corner. The execution engine only drives data
through the operand bus, West and SouthWest; the other levels exist for
legality checks.
"""

import logging

from app.schemas.array import (
    ArrayConfig,
    CellCoord,
    ContextAssignment,
    PortSource,
    Region,
    Violation,
)
from app.schemas.enums import Direction, Op, PortKind, Tap, ViolationCode

logger = logging.getLogger(__name__)

EXECUTABLE_DIRECTIONS = frozenset({Direction.WEST, Direction.SOUTH_WEST})

_MESH_OFFSETS: dict[Direction, tuple[int, int]] = {
    Direction.NORTH: (-1, 0),
    Direction.SOUTH: (1, 0),
    Direction.EAST: (0, 1),
    Direction.WEST: (0, -1),
    Direction.SOUTH_WEST: (1, -1),
}


class RCArrayError(Exception):
    """Base exception for cell array errors."""

    pass


class IllegalSourceError(RCArrayError):
    """Raised when a port source does not exist on the configured array."""

    pass


class NotExecutableError(RCArrayError):
    """Raised when a source exists but the execution engine cannot drive data through it."""

    pass


def _paired_quadrant(index: int, count: int) -> int | None:
    """Express lanes pair quadrants 0<->1, 2<->3, ... along one axis."""
    partner = index + 1 if index % 2 == 0 else index - 1
    return partner if 0 <= partner < count else None


def resolve_source(coord: CellCoord, src: PortSource, cfg: ArrayConfig) -> CellCoord | Tap:
    """
    Resolve a port source of a cell to the producing cell or a tap.

    Returns:
        The producing CellCoord for neighbor sources, Tap.OFF_ARRAY when that
        neighbor falls outside the grid, Tap.BUS for the operand bus and Tap.ZERO
        for the zero source.

    Raises:
        IllegalSourceError: If the source is not available on this configuration.
    """
    if not cfg.contains(coord):
        raise IllegalSourceError(f"{coord} lies outside the {cfg.shape_label} array")
    if src.kind == PortKind.OPERAND_BUS:
        return Tap.BUS
    if src.kind == PortKind.ZERO:
        return Tap.ZERO

    direction = src.direction
    assert direction is not None

    if direction == Direction.SOUTH_WEST and not cfg.diagonal_enabled:
        raise IllegalSourceError(
            f"{coord}: the south-west (lower-left) link needs the diagonal interconnect enabled"
        )

    if direction in _MESH_OFFSETS:
        d_row, d_col = _MESH_OFFSETS[direction]
        row, col = coord.row + d_row, coord.col + d_col
        if 0 <= row < cfg.rows and 0 <= col < cfg.cols:
            return CellCoord(row=row, col=col)
        return Tap.OFF_ARRAY

    if not cfg.quadrants_available:
        raise IllegalSourceError(
            f"{coord}: quadrant size {cfg.quadrant_size} does not divide the "
            f"{cfg.shape_label} array, so '{direction.value}' links are unavailable"
        )

    q = cfg.quadrant_size
    index = src.index
    assert index is not None
    if index >= q:
        raise IllegalSourceError(f"{coord}: lane index {index} exceeds quadrant size {q}")

    quad_row, quad_col = coord.row // q, coord.col // q
    if direction == Direction.INTRA_QUAD_ROW:
        return CellCoord(row=coord.row, col=quad_col * q + index)
    if direction == Direction.INTRA_QUAD_COL:
        return CellCoord(row=quad_row * q + index, col=coord.col)
    if direction == Direction.EXPRESS_ROW:
        partner = _paired_quadrant(quad_col, cfg.cols // q)
        if partner is None:
            return Tap.OFF_ARRAY
        return CellCoord(row=coord.row, col=partner * q + index)
    if direction == Direction.EXPRESS_COL:
        partner = _paired_quadrant(quad_row, cfg.rows // q)
        if partner is None:
            return Tap.OFF_ARRAY
        return CellCoord(row=partner * q + index, col=coord.col)

    raise IllegalSourceError(f"Unsupported direction '{direction.value}'")


def reachable_sources(coord: CellCoord, cfg: ArrayConfig) -> set[PortSource]:
    """
    Every port source a cell can legally read, with in-grid producers only.

    Includes the operand bus and zero, in-grid mesh neighbors, the south-west
    link when enabled and in-grid, intra-quadrant row/column peers and the
    express lanes of the paired quadrant.
    """
    sources: set[PortSource] = {PortSource.bus(), PortSource.zero()}

    for direction in _MESH_OFFSETS:
        if direction == Direction.SOUTH_WEST and not cfg.diagonal_enabled:
            continue
        src = PortSource.neighbor(direction)
        if isinstance(resolve_source(coord, src, cfg), CellCoord):
            sources.add(src)

    if not cfg.quadrants_available:
        return sources

    q = cfg.quadrant_size
    for index in range(q):
        for direction in (Direction.INTRA_QUAD_ROW, Direction.INTRA_QUAD_COL):
            src = PortSource.neighbor(direction, index)
            if resolve_source(coord, src, cfg) != coord:
                sources.add(src)
        for direction in (Direction.EXPRESS_ROW, Direction.EXPRESS_COL):
            src = PortSource.neighbor(direction, index)
            if isinstance(resolve_source(coord, src, cfg), CellCoord):
                sources.add(src)
    return sources


def validate_assignment(
    assign: ContextAssignment,
    region: Region,
    cfg: ArrayConfig,
    n_taps: int | None = None,
) -> list[Violation]:
    """
    Check that every cell of the region can execute its broadcast word.

    Off-array port B reads are allowed (they read zero). Sources that do not
    exist on the configuration, or that the engine cannot drive, are
    violations. When `n_taps` is given, weight indices must address a tap.

    Returns:
        Violations with coordinates and reasons; an empty list means legal.
    """
    violations: list[Violation] = []

    if not region.fits(cfg):
        violations.append(
            Violation(
                code=ViolationCode.REGION,
                reason=(
                    f"Region {region.rows}x{region.cols} does not fit the "
                    f"{cfg.shape_label} array"
                ),
            )
        )
        return violations

    expected = assign.broadcast_length(region)
    if len(assign.words) != expected:
        violations.append(
            Violation(
                code=ViolationCode.SHAPE,
                reason=(
                    f"{assign.mode.value} broadcast over a {region.rows}x{region.cols} region "
                    f"needs {expected} words, got {len(assign.words)}"
                ),
            )
        )
        return violations

    for coord in region.cells():
        word = assign.word_for(coord)

        if word.op == Op.MUL and word.src_b.kind != PortKind.ZERO:
            violations.append(
                Violation(code=ViolationCode.WORD, coord=coord, reason="Mul word must read zero on port B")
            )
            continue
        if word.op == Op.MUL_ADD and word.src_b.kind == PortKind.ZERO:
            violations.append(
                Violation(code=ViolationCode.WORD, coord=coord, reason="MulAdd word reads zero on port B")
            )
            continue
        if n_taps is not None and word.weight_index >= n_taps:
            violations.append(
                Violation(
                    code=ViolationCode.WEIGHT_INDEX,
                    coord=coord,
                    reason=f"weight index {word.weight_index} outside {n_taps} taps",
                )
            )

        src = word.src_b
        if src.kind == PortKind.ZERO:
            continue
        if src.kind == PortKind.OPERAND_BUS:
            violations.append(
                Violation(
                    code=ViolationCode.NOT_EXECUTABLE,
                    coord=coord,
                    reason="port B cannot read the operand bus; port A already does",
                )
            )
            continue

        try:
            resolve_source(coord, src, cfg)
        except IllegalSourceError as e:
            violations.append(Violation(code=ViolationCode.ILLEGAL_SOURCE, coord=coord, reason=str(e)))
            continue

        if src.direction not in EXECUTABLE_DIRECTIONS:
            violations.append(
                Violation(
                    code=ViolationCode.NOT_EXECUTABLE,
                    coord=coord,
                    reason=f"'{src}' is a reachability-only link; the engine drives West and SouthWest",
                )
            )

    if violations:
        logger.debug(f"Assignment on {cfg.shape_label} has {len(violations)} violations")
    return violations
