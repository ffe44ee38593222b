"""Geometry between elements: neighbors, regions, titles, label association.

Everything here is a pure function over one snapshot's element list, so a
page can be processed in isolation and results never depend on list order
(ties break by ascending element id).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .classify import PURE_TEXT_TAGS
from .snapshot import BBox, ElementRecord, center_point

__all__ = [
    "Direction",
    "RegionLabel",
    "Relation",
    "RelationKind",
    "MAX_RELATIVE_DISTANCE",
    "absolute_region",
    "directional_neighbors",
    "candidate_relatives",
    "nearest_title",
    "associate_label",
    "center_distance",
]

TITLE_TAGS = frozenset({"h1", "h2", "h3"})
LABELED_CONTROL_TAGS = frozenset({"input", "select", "textarea"})
MAX_RELATIVE_DISTANCE = 500

# Attribute labels that satisfy a control directly, in precedence order.
CONTROL_LABEL_ATTRIBUTES = ("aria-label", "alt", "title")


class Direction(Enum):
    LEFT = "left"
    RIGHT = "right"
    ABOVE = "above"
    BELOW = "below"


class RelationKind(Enum):
    LEFT_OF = "left_of"
    RIGHT_OF = "right_of"
    ABOVE = "above"
    BELOW = "below"
    NEXT_TO = "next_to"
    BETWEEN = "between"
    UNDER_TITLE = "under_title"
    LABELED_BY = "labeled_by"


class RegionLabel(Enum):
    """Cell of the 3x3 equal-thirds screen grid."""

    TOP_LEFT = "top-left corner"
    TOP = "top"
    TOP_RIGHT = "top-right corner"
    LEFT = "left"
    CENTER = "center"
    RIGHT = "right"
    BOTTOM_LEFT = "bottom-left corner"
    BOTTOM = "bottom"
    BOTTOM_RIGHT = "bottom-right corner"

    @property
    def phrase(self) -> str:
        if self is RegionLabel.CENTER:
            return "at the center of the screenshot"
        if self in (RegionLabel.LEFT, RegionLabel.RIGHT):
            return f"on the {self.value} side of the screenshot"
        return f"at the {self.value} of the screenshot"


_REGION_GRID = (
    (RegionLabel.TOP_LEFT, RegionLabel.TOP, RegionLabel.TOP_RIGHT),
    (RegionLabel.LEFT, RegionLabel.CENTER, RegionLabel.RIGHT),
    (RegionLabel.BOTTOM_LEFT, RegionLabel.BOTTOM, RegionLabel.BOTTOM_RIGHT),
)


@dataclass(frozen=True)
class Relation:
    subject_id: str
    object_id: str
    kind: RelationKind
    distance: float

    def __post_init__(self):
        if self.subject_id == self.object_id:
            raise ValueError("relation subject and object must differ")
        if self.distance < 0:
            raise ValueError("relation distance must be non-negative")


def center_distance(a: ElementRecord, b: ElementRecord) -> float:
    ca, cb = center_point(a.bbox), center_point(b.bbox)
    return math.hypot(ca.x - cb.x, ca.y - cb.y)


def absolute_region(b: BBox, canvas: tuple[int, int]) -> RegionLabel:
    """Region of the thirds grid containing the box center.

    Integer thirds: a center exactly on a grid line belongs to the
    higher-index cell, so the mapping partitions the canvas.
    """
    w, h = canvas
    c = center_point(b)
    col = min(2, (3 * c.x) // w)
    row = min(2, (3 * c.y) // h)
    return _REGION_GRID[row][col]


def _spans_overlap(a0: int, a1: int, b0: int, b1: int) -> bool:
    # Positive-length intersection; mere edge touching does not count.
    return max(a0, b0) < min(a1, b1)


def _on_side(target: BBox, other: BBox, d: Direction) -> bool:
    if d is Direction.LEFT:
        return other.right <= target.x
    if d is Direction.RIGHT:
        return other.x >= target.right
    if d is Direction.ABOVE:
        return other.bottom <= target.y
    return other.y >= target.bottom


def _perpendicular_overlap(target: BBox, other: BBox, d: Direction) -> bool:
    if d in (Direction.LEFT, Direction.RIGHT):
        return _spans_overlap(target.y, target.bottom, other.y, other.bottom)
    return _spans_overlap(target.x, target.right, other.x, other.right)


def directional_neighbors(
    target: ElementRecord, others: list[ElementRecord]
) -> dict[Direction, list[str]]:
    """Neighbor ids per direction, nearest first.

    An element is a neighbor on side d when it lies entirely on that side
    and its box projection overlaps the target's on the perpendicular
    axis; the overlap requirement keeps far-diagonal elements out.
    """
    found: dict[Direction, list[tuple[float, str]]] = {d: [] for d in Direction}
    for other in others:
        if other.id == target.id:
            continue
        for d in Direction:
            if _on_side(target.bbox, other.bbox, d) and _perpendicular_overlap(
                target.bbox, other.bbox, d
            ):
                found[d].append((center_distance(target, other), other.id))
    return {
        d: [element_id for _, element_id in sorted(pairs)] for d, pairs in found.items()
    }


def candidate_relatives(
    target: ElementRecord, others: list[ElementRecord], max_dist: float = MAX_RELATIVE_DISTANCE
) -> list[str]:
    """Ids of elements within max_dist center-to-center, nearest first.

    Boundary is inclusive and checked on squared integers, so a distance
    of exactly max_dist never falls to float rounding.
    """
    limit_sq = max_dist * max_dist
    tc = center_point(target.bbox)
    hits: list[tuple[float, str]] = []
    for other in others:
        if other.id == target.id:
            continue
        oc = center_point(other.bbox)
        dist_sq = (tc.x - oc.x) ** 2 + (tc.y - oc.y) ** 2
        if dist_sq <= limit_sq:
            hits.append((dist_sq, other.id))
    return [element_id for _, element_id in sorted(hits)]


def nearest_title(target: ElementRecord, others: list[ElementRecord]) -> str | None:
    """Nearest h1/h2/h3 strictly above the target's top edge, if any."""
    best: tuple[int, str] | None = None
    for other in others:
        if other.id == target.id or other.tag not in TITLE_TAGS:
            continue
        if other.bbox.y >= target.bbox.y:
            continue
        # Greatest top wins (vertically nearest); ties by ascending id.
        key = (-other.bbox.y, other.id)
        if best is None or key < best:
            best = key
    return best[1] if best else None


def associate_label(control: ElementRecord, others: list[ElementRecord]) -> str | None:
    """Pure-text label for a control, by same-row then same-column search.

    Returns None when the control already carries an attribute label
    (aria-label/alt/title), which upstream uses directly, or when no
    candidate shares a row or column with it.
    """
    if control.tag not in LABELED_CONTROL_TAGS:
        raise ValueError(f"not a labeled control: <{control.tag}>")
    for key in CONTROL_LABEL_ATTRIBUTES:
        if control.attr(key):
            return None

    def nearest(candidates: list[ElementRecord]) -> str | None:
        best: tuple[float, str] | None = None
        for e in candidates:
            key = (center_distance(control, e), e.id)
            if best is None or key < best:
                best = key
        return best[1] if best else None

    texts = [
        e
        for e in others
        if e.id != control.id and e.tag in PURE_TEXT_TAGS and e.attr("inner_text")
    ]
    box = control.bbox
    same_row = [
        e for e in texts if box.y <= center_point(e.bbox).y <= box.bottom
    ]
    if same_row:
        return nearest(same_row)
    same_col = [
        e for e in texts if box.x <= center_point(e.bbox).x <= box.right
    ]
    if same_col:
        return nearest(same_col)
    return None
