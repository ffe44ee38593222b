"""Slice-grid geometry for model input images.

Screenshots are carved into 224px encoder cells: the image is resized by
width to an exact column multiple, height follows proportionally, and the
bottom is padded to fill the last row. At most 36 cells are allowed, which
caps supported input at 1344x1344 (landscape) / 896x2016 (portrait).
Oversized images are downscaled; nothing is ever upscaled beyond the
single-cell minimum width.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .snapshot import Point

__all__ = [
    "CELL",
    "MAX_CELLS",
    "GridPlan",
    "plan_grid",
    "resize_for_model",
    "map_point",
    "format_coordinates",
    "parse_coordinates",
    "CoordinateParseError",
]

CELL = 224
MAX_CELLS = 36


class CoordinateParseError(ValueError):
    pass


@dataclass(frozen=True)
class GridPlan:
    cols: int
    rows: int
    scale: float  # original width -> target width ratio
    pad_bottom: int  # pixels of bottom padding in target space
    cell: int = CELL

    @property
    def target(self) -> tuple[int, int]:
        return (self.cols * self.cell, self.rows * self.cell)

    def to_json(self) -> dict:
        return {
            "cols": self.cols,
            "rows": self.rows,
            "cell": self.cell,
            "target": {"width": self.target[0], "height": self.target[1]},
            "scale": self.scale,
            "pad_bottom": self.pad_bottom,
        }


def _rows_for_cols(w: int, h: int, cols: int) -> int:
    # After resizing width to cols*CELL the scaled height is h*cols*CELL/w,
    # so the row count reduces to ceil(h*cols/w).
    return -((-h * cols) // w)


def _pad_for_cols(w: int, h: int, cols: int, rows: int) -> int:
    # Ceil keeps the integer height consistent with the ceil in the row
    # count, so padding always stays inside the last row.
    scaled_h = -((-h * cols * CELL) // w)
    return rows * CELL - scaled_h


def plan_grid(w: int, h: int) -> GridPlan:
    """Pick the slice grid for a w x h image.

    Columns are the largest count that keeps the total cell budget and
    never upscales the width (a sub-cell-width image still gets one
    column). Rows then follow from the proportional height. Maximizing
    columns keeps the most resolution; smaller grids would downscale
    needlessly.
    """
    if w <= 0 or h <= 0:
        raise ValueError("image dimensions must be positive")
    max_cols = max(1, w // CELL)
    best: int | None = None
    for cols in range(1, max_cols + 1):
        if cols * _rows_for_cols(w, h, cols) <= MAX_CELLS:
            best = cols
    if best is None:
        # Taller than 36:1 even at one column; cap the rows and accept
        # that content below row 36 falls outside the grid.
        return GridPlan(cols=1, rows=MAX_CELLS, scale=CELL / w, pad_bottom=0)
    rows = _rows_for_cols(w, h, best)
    return GridPlan(
        cols=best,
        rows=rows,
        scale=best * CELL / w,
        pad_bottom=_pad_for_cols(w, h, best, rows),
    )


def _cover_cells(w: Fraction, h: Fraction) -> int:
    return math.ceil(w / CELL) * math.ceil(h / CELL)


def resize_for_model(w: int, h: int) -> tuple[int, int, float]:
    """Shrink an image until its native cell cover fits the budget.

    Identity when ceil(w/224)*ceil(h/224) is already within 36 cells.
    Otherwise returns the largest aspect-preserving scale < 1 whose
    cover fits, evaluated exactly at the finitely many scales where a
    row or column count steps.
    """
    if w <= 0 or h <= 0:
        raise ValueError("image dimensions must be positive")
    if _cover_cells(Fraction(w), Fraction(h)) <= MAX_CELLS:
        return (w, h, 1.0)
    candidates = {Fraction(c * CELL, w) for c in range(1, MAX_CELLS + 1)}
    candidates |= {Fraction(r * CELL, h) for r in range(1, MAX_CELLS + 1)}
    best: Fraction | None = None
    for s in candidates:
        if s >= 1:
            continue
        if _cover_cells(s * w, s * h) <= MAX_CELLS and (best is None or s > best):
            best = s
    assert best is not None  # one-cell cover is always reachable
    return (int(w * best), int(h * best), float(best))


def map_point(p: Point, scale: float, direction: str) -> Point:
    """Move a point between original and model pixel space.

    Bottom-only padding never shifts coordinates, so mapping is a pure
    scale with floor rounding in both directions.
    """
    if scale <= 0:
        raise ValueError("scale must be positive")
    if direction == "to_model":
        return Point(int(p.x * scale), int(p.y * scale))
    if direction == "to_original":
        return Point(int(p.x / scale), int(p.y / scale))
    raise ValueError(f"unknown direction {direction!r}")


_COORD = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)")


def format_coordinates(p: Point) -> str:
    return f"({p.x}, {p.y})"


def parse_coordinates(s: str) -> Point:
    """First "(x, y)" integer pair in s, tolerating surrounding prose."""
    m = _COORD.search(s)
    if m is None:
        raise CoordinateParseError(f"no coordinate pair in {s!r}")
    return Point(int(m.group(1)), int(m.group(2)))
