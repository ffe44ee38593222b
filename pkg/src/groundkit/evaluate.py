"""Scoring geometry and metric aggregation.

A prediction is correct when the point falls inside the gold box, with
inclusive edges. Aggregation breaks accuracy down by platform and element
type; helpers cover full-page block splitting and snapping a point to the
smallest visible element that contains it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .snapshot import BBox, ElementRecord, Point

__all__ = [
    "Platform",
    "ElemType",
    "EvalRecord",
    "score_grounding",
    "score_element_accuracy",
    "aggregate_screenspot",
    "split_page_blocks",
    "snap_to_element",
    "load_predictions",
    "load_gold",
    "evaluate_files",
    "format_report_table",
]

MIND2WEB_VIEWPORT = (1280, 1000)


class Platform(str, Enum):
    MOBILE = "mobile"
    DESKTOP = "desktop"
    WEB = "web"


class ElemType(str, Enum):
    TEXT = "text"
    ICON_WIDGET = "icon_widget"


def score_grounding(pred: Point, gold: BBox) -> bool:
    """True when the point falls in the box, edges included."""
    return gold.contains(pred)


def score_element_accuracy(pred: Point, gold_element_bbox: BBox) -> bool:
    """Element accuracy is the same point-in-box predicate; the separate
    name keeps page-level reports readable."""
    return score_grounding(pred, gold_element_bbox)


@dataclass(frozen=True)
class EvalRecord:
    id: str
    pred: Point
    gold_bbox: BBox
    platform: Platform
    elem_type: ElemType
    correct: bool

    def __post_init__(self) -> None:
        if self.correct != score_grounding(self.pred, self.gold_bbox):
            raise ValueError("correct flag contradicts the scoring predicate")

    @classmethod
    def make(
        cls, id: str, pred: Point, gold_bbox: BBox, platform: Platform, elem_type: ElemType
    ) -> "EvalRecord":
        return cls(
            id=id,
            pred=pred,
            gold_bbox=gold_bbox,
            platform=Platform(platform),
            elem_type=ElemType(elem_type),
            correct=score_grounding(pred, gold_bbox),
        )


def aggregate_screenspot(records: Sequence[EvalRecord]) -> dict:
    """Accuracy per platform x type cell plus two averages.

    Cells with no records are omitted rather than reported as zero. The
    unweighted average is the mean of the present cell accuracies; the
    weighted average counts every record equally.
    """
    counts: Dict[Tuple[str, str], List[int]] = {}
    for r in records:
        key = (r.platform.value, r.elem_type.value)
        cell = counts.setdefault(key, [0, 0])
        cell[0] += 1
        cell[1] += int(r.correct)
    cells = {}
    for platform in Platform:
        for elem_type in ElemType:
            key = (platform.value, elem_type.value)
            if key not in counts:
                continue
            total, correct = counts[key]
            cells[f"{platform.value}/{elem_type.value}"] = {
                "total": total,
                "correct": correct,
                "accuracy": correct / total * 100.0,
            }
    report = {"cells": cells}
    if cells:
        accs = [c["accuracy"] for c in cells.values()]
        total = sum(c["total"] for c in cells.values())
        correct = sum(c["correct"] for c in cells.values())
        report["average_unweighted"] = sum(accs) / len(accs)
        report["average_weighted"] = correct / total * 100.0
        report["total"] = total
    return report


def split_page_blocks(
    canvas_h: int, viewport: Tuple[int, int] = MIND2WEB_VIEWPORT
) -> List[Tuple[int, int]]:
    """Contiguous (y_offset, height) blocks of viewport height covering the
    page; the last block may be shorter."""
    if canvas_h <= 0:
        raise ValueError("canvas height must be positive")
    block_h = viewport[1]
    return [(y, min(block_h, canvas_h - y)) for y in range(0, canvas_h, block_h)]


def snap_to_element(p: Point, elements: Iterable[ElementRecord]) -> Optional[str]:
    """Id of the smallest visible element whose box contains p; area ties
    break by ascending id."""
    best: Optional[Tuple[int, str]] = None
    for e in elements:
        if not e.visible or not e.bbox.contains(p):
            continue
        key = (e.bbox.area, e.id)
        if best is None or key < best:
            best = key
    return best[1] if best else None


def load_predictions(path: str) -> Dict[str, Point]:
    preds: Dict[str, Point] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            preds[str(obj["id"])] = Point(int(obj["point"]["x"]), int(obj["point"]["y"]))
    return preds


def load_gold(path: str) -> List[dict]:
    gold = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                gold.append(json.loads(line))
    return gold


def evaluate_files(preds_path: str, gold_path: str) -> dict:
    """Join predictions to gold records by id and aggregate.

    A gold record without a prediction scores as incorrect and is counted
    under missing_predictions; stray prediction ids are counted too.
    """
    preds = load_predictions(preds_path)
    gold = load_gold(gold_path)
    records = []
    missing = 0
    seen = set()
    for g in gold:
        gid = str(g["id"])
        seen.add(gid)
        bbox = BBox(g["bbox"]["x"], g["bbox"]["y"], g["bbox"]["w"], g["bbox"]["h"])
        pred = preds.get(gid)
        if pred is None:
            missing += 1
            pred = Point(-1, -1)
        records.append(EvalRecord.make(gid, pred, bbox, g["platform"], g["elem_type"]))
    report = aggregate_screenspot(records)
    report["missing_predictions"] = missing
    report["unmatched_predictions"] = len([k for k in preds if k not in seen])
    return report


def format_report_table(report: dict) -> str:
    """Aligned text table of the aggregate report."""
    headers = ("cell", "total", "correct", "accuracy")
    rows = [
        (name, str(c["total"]), str(c["correct"]), f"{c['accuracy']:.1f}")
        for name, c in sorted(report.get("cells", {}).items())
    ]
    if "average_unweighted" in report:
        rows.append(("average (cells)", "", "", f"{report['average_unweighted']:.1f}"))
        rows.append(("average (samples)", "", "", f"{report['average_weighted']:.1f}"))
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(headers)]
    lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(headers))]
    for r in rows:
        lines.append("  ".join(r[i].ljust(widths[i]) for i in range(len(headers))))
    return "\n".join(lines)
