"""Snapshot data model: page/element records, parsing, validation, geometry.

A snapshot is one rendered page state: a screenshot reference plus the
metadata of every captured DOM element (tag, salient attributes, bounding
box, optional OCR text). All downstream stages consume these types.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

__all__ = [
    "SALIENT_ATTRIBUTES",
    "BBox",
    "Point",
    "ElementRecord",
    "PageSnapshot",
    "Violation",
    "SnapshotParseError",
    "SnapshotValidationError",
    "center_point",
    "parse_snapshot",
    "serialize_snapshot",
    "validate_snapshot",
]

# The only attribute keys an element may carry. Everything else is dropped
# at capture time; the order here is also the descriptor-precedence order.
SALIENT_ATTRIBUTES = (
    "inner_text",
    "alt",
    "title",
    "aria-label",
    "aria-describedby",
    "placeholder",
    "value",
)


class SnapshotParseError(ValueError):
    """Raised on malformed snapshot JSON. Carries the byte offset if known."""

    def __init__(self, message: str, offset: int | None = None):
        super().__init__(message)
        self.offset = offset


class SnapshotValidationError(ValueError):
    """Raised when snapshot JSON violates the schema. Names the field."""

    def __init__(self, message: str, field_name: str):
        super().__init__(message)
        self.field_name = field_name


@dataclass(frozen=True)
class BBox:
    """Axis-aligned element box in screenshot pixel space (top-left origin)."""

    x: int
    y: int
    w: int
    h: int

    @property
    def right(self) -> int:
        return self.x + self.w

    @property
    def bottom(self) -> int:
        return self.y + self.h

    @property
    def area(self) -> int:
        return self.w * self.h

    def contains(self, p: "Point") -> bool:
        """Inclusive containment: edge hits count."""
        return self.x <= p.x <= self.right and self.y <= p.y <= self.bottom


@dataclass(frozen=True)
class Point:
    x: int
    y: int


def center_point(b: BBox) -> Point:
    """Integer center of a box: floor of the true midpoint on each axis.

    Floor keeps the point inside the box for any positive extent and is
    the single rounding convention used across synthesis and evaluation.
    """
    return Point(b.x + b.w // 2, b.y + b.h // 2)


@dataclass(frozen=True)
class ElementRecord:
    """One captured DOM element."""

    id: str
    tag: str
    attributes: dict[str, str] = field(default_factory=dict)
    bbox: BBox = field(default=BBox(0, 0, 1, 1))
    ocr_text: str | None = None
    visible: bool = True
    input_type: str | None = None  # type attr for <input>, e.g. "radio"

    def attr(self, key: str) -> str | None:
        value = self.attributes.get(key)
        return value if value else None


@dataclass(frozen=True)
class PageSnapshot:
    snapshot_id: str
    url: str
    viewport: tuple[int, int]
    canvas: tuple[int, int]
    screenshot_ref: str
    elements: tuple[ElementRecord, ...]

    def element_by_id(self, element_id: str) -> ElementRecord | None:
        for e in self.elements:
            if e.id == element_id:
                return e
        return None


@dataclass(frozen=True)
class Violation:
    """One invariant breach found by validate_snapshot."""

    element_id: str | None
    rule: str
    detail: str

    def __str__(self) -> str:
        where = self.element_id or "<snapshot>"
        return f"{where}: {self.rule} ({self.detail})"


def _require(obj: dict, key: str, kind, where: str):
    if key not in obj:
        raise SnapshotValidationError(f"missing required field '{where}{key}'", where + key)
    value = obj[key]
    # bool is an int subclass; reject it for pixel fields explicitly.
    if kind is int and isinstance(value, bool):
        raise SnapshotValidationError(f"field '{where}{key}' must be an integer", where + key)
    if not isinstance(value, kind):
        raise SnapshotValidationError(
            f"field '{where}{key}' has wrong type {type(value).__name__}", where + key
        )
    return value


def _parse_size(obj: dict, key: str) -> tuple[int, int]:
    raw = _require(obj, key, dict, "")
    w = _require(raw, "width", int, f"{key}.")
    h = _require(raw, "height", int, f"{key}.")
    if w <= 0 or h <= 0:
        raise SnapshotValidationError(f"'{key}' must be positive", key)
    return (w, h)


def _parse_bbox(raw: dict, where: str) -> BBox:
    x = _require(raw, "x", int, where)
    y = _require(raw, "y", int, where)
    w = _require(raw, "w", int, where)
    h = _require(raw, "h", int, where)
    if w <= 0:
        raise SnapshotValidationError(f"non-positive width in '{where}w'", where + "w")
    if h <= 0:
        raise SnapshotValidationError(f"non-positive height in '{where}h'", where + "h")
    if x < 0 or y < 0:
        raise SnapshotValidationError(f"negative origin in '{where}'", where.rstrip("."))
    return BBox(x, y, w, h)


def _parse_element(raw: dict, index: int) -> ElementRecord:
    where = f"elements[{index}]."
    element_id = _require(raw, "id", str, where)
    tag = _require(raw, "tag", str, where)
    if not tag:
        raise SnapshotValidationError(f"empty tag in '{where}tag'", where + "tag")
    attributes = {}
    raw_attrs = raw.get("attributes", {})
    if not isinstance(raw_attrs, dict):
        raise SnapshotValidationError(f"'{where}attributes' must be an object", where + "attributes")
    for key, value in raw_attrs.items():
        if key not in SALIENT_ATTRIBUTES:
            continue  # unknown attribute keys are ignored, like unknown fields
        if not isinstance(value, str):
            raise SnapshotValidationError(
                f"attribute '{key}' in '{where}attributes' must be a string",
                f"{where}attributes.{key}",
            )
        attributes[key] = value
    if "bbox" not in raw:
        raise SnapshotValidationError(f"missing required field '{where}bbox'", where + "bbox")
    bbox = _parse_bbox(_require(raw, "bbox", dict, where), where + "bbox.")
    ocr_text = raw.get("ocr_text")
    if ocr_text is not None and not isinstance(ocr_text, str):
        raise SnapshotValidationError(f"'{where}ocr_text' must be a string", where + "ocr_text")
    input_type = raw.get("input_type")
    if input_type is not None and not isinstance(input_type, str):
        raise SnapshotValidationError(f"'{where}input_type' must be a string", where + "input_type")
    visible = raw.get("visible", True)
    if not isinstance(visible, bool):
        raise SnapshotValidationError(f"'{where}visible' must be a boolean", where + "visible")
    return ElementRecord(
        id=element_id,
        tag=tag.lower(),
        attributes=attributes,
        bbox=bbox,
        ocr_text=ocr_text,
        visible=visible,
        input_type=input_type,
    )


def parse_snapshot(raw: bytes | str) -> PageSnapshot:
    """Parse snapshot JSON into a PageSnapshot.

    Unknown fields are ignored. Malformed JSON raises SnapshotParseError
    with the byte offset; schema violations raise SnapshotValidationError
    naming the offending field.
    """
    if isinstance(raw, bytes):
        try:
            raw = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SnapshotParseError(f"not valid UTF-8: {exc}", exc.start) from exc
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise SnapshotParseError(f"malformed JSON at offset {exc.pos}: {exc.msg}", exc.pos) from exc
    if not isinstance(data, dict):
        raise SnapshotValidationError("snapshot must be a JSON object", "<root>")

    snapshot_id = _require(data, "snapshot_id", str, "")
    url = _require(data, "url", str, "")
    viewport = _parse_size(data, "viewport")
    canvas = _parse_size(data, "canvas")
    screenshot_ref = _require(data, "screenshot_ref", str, "")
    raw_elements = _require(data, "elements", list, "")
    elements = tuple(
        _parse_element(_require_element_obj(e, i), i) for i, e in enumerate(raw_elements)
    )
    return PageSnapshot(
        snapshot_id=snapshot_id,
        url=url,
        viewport=viewport,
        canvas=canvas,
        screenshot_ref=screenshot_ref,
        elements=elements,
    )


def _require_element_obj(e, index: int) -> dict:
    if not isinstance(e, dict):
        raise SnapshotValidationError(
            f"'elements[{index}]' must be an object", f"elements[{index}]"
        )
    return e


def serialize_snapshot(s: PageSnapshot) -> dict:
    """Snapshot back to its JSON-ready dict; inverse of parse_snapshot."""
    elements = []
    for e in s.elements:
        rec: dict = {
            "id": e.id,
            "tag": e.tag,
            "attributes": dict(e.attributes),
            "bbox": {"x": e.bbox.x, "y": e.bbox.y, "w": e.bbox.w, "h": e.bbox.h},
            "visible": e.visible,
        }
        if e.ocr_text is not None:
            rec["ocr_text"] = e.ocr_text
        if e.input_type is not None:
            rec["input_type"] = e.input_type
        elements.append(rec)
    return {
        "snapshot_id": s.snapshot_id,
        "url": s.url,
        "viewport": {"width": s.viewport[0], "height": s.viewport[1]},
        "canvas": {"width": s.canvas[0], "height": s.canvas[1]},
        "screenshot_ref": s.screenshot_ref,
        "elements": elements,
    }


def validate_snapshot(s: PageSnapshot) -> list[Violation]:
    """Check every type invariant; violations come back as data, not errors.

    Empty result means the snapshot is fully consistent: positive boxes
    inside the canvas, unique ids, only salient attribute keys, and
    viewport/canvas agreement.
    """
    violations: list[Violation] = []
    vw, vh = s.viewport
    cw, ch = s.canvas
    if vw != cw:
        violations.append(
            Violation(None, "viewport width mismatch", f"viewport {vw} != canvas {cw}")
        )
    if ch < vh:
        violations.append(
            Violation(None, "canvas shorter than viewport", f"canvas {ch} < viewport {vh}")
        )

    seen: set[str] = set()
    for e in s.elements:
        if e.id in seen:
            violations.append(Violation(e.id, "duplicate id", f"id '{e.id}' appears twice"))
        seen.add(e.id)
        if not e.tag:
            violations.append(Violation(e.id, "empty tag", "tag must be non-empty"))
        for key in e.attributes:
            if key not in SALIENT_ATTRIBUTES:
                violations.append(
                    Violation(e.id, "non-salient attribute", f"unexpected key '{key}'")
                )
        b = e.bbox
        if b.w <= 0:
            violations.append(Violation(e.id, "non-positive width", f"w={b.w}"))
        if b.h <= 0:
            violations.append(Violation(e.id, "non-positive height", f"h={b.h}"))
        if b.x < 0 or b.y < 0:
            violations.append(Violation(e.id, "negative origin", f"({b.x},{b.y})"))
        if b.right > cw or b.bottom > ch:
            violations.append(
                Violation(
                    e.id,
                    "bbox out of canvas",
                    f"box ({b.x},{b.y},{b.w},{b.h}) exceeds canvas {cw}x{ch}",
                )
            )
    return violations
