"""Converters from third-party action/caption datasets into grounding samples.

Each source has a declarative profile (JSON field map) describing where the
id, screenshot, text, and bbox live in its raw records; the per-source rules
here decide which records survive and how many samples each one yields.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from typing import Dict, Iterable, List, Optional, Tuple

from .expressions import DescriptorSource, ReferringExpression, REType
from .sampling import GroundingSample
from .seeding import derive_rng
from .snapshot import BBox, center_point

__all__ = [
    "SourceName",
    "SourceSpec",
    "AdapterError",
    "AdaptReport",
    "load_profile",
    "read_records",
    "adapt_source",
]


class SourceName(str, Enum):
    GUIACT = "guiact"
    ANDROIDCONTROL = "androidcontrol"
    WIDGET_CAPTION = "widget_caption"
    UIBERT = "uibert"
    AITZ = "aitz"
    WEB_DIRECT = "web_direct"


class AdapterError(Exception):
    """Profile/source mismatch or unusable profile."""


@dataclass(frozen=True)
class SourceSpec:
    name: SourceName
    path: str
    profile: dict

    def __post_init__(self) -> None:
        declared = self.profile.get("source")
        if declared != self.name.value:
            raise AdapterError(
                f"profile declares source {declared!r}, spec says {self.name.value!r}"
            )


@dataclass
class AdaptReport:
    input: int = 0
    adapted: int = 0
    emitted_samples: int = 0
    dropped: Dict[str, int] = field(default_factory=dict)

    def drop(self, reason: str) -> None:
        self.dropped[reason] = self.dropped.get(reason, 0) + 1

    def conserved(self) -> bool:
        return self.adapted + sum(self.dropped.values()) == self.input


def load_profile(name: SourceName) -> dict:
    ref = resources.files("groundkit").joinpath(f"profiles/{SourceName(name).value}.json")
    return json.loads(ref.read_text(encoding="utf-8"))


def read_records(path: str) -> List[dict]:
    """Raw records from a JSON array file or a JSONL file."""
    with open(path, "r", encoding="utf-8") as fh:
        head = fh.read(1)
        fh.seek(0)
        if head == "[":
            return json.load(fh)
        return [json.loads(line) for line in fh if line.strip()]


def _get_path(record: dict, path: Optional[str]):
    if not path:
        return None
    node = record
    for part in path.split("."):
        if isinstance(node, list):
            try:
                node = node[int(part)]
            except (ValueError, IndexError):
                return None
        elif isinstance(node, dict):
            if part not in node:
                return None
            node = node[part]
        else:
            return None
    return node


def _mapped_bbox(raw) -> Optional[BBox]:
    if not isinstance(raw, dict):
        return None
    try:
        bbox = BBox(int(raw["x"]), int(raw["y"]), int(raw["w"]), int(raw["h"]))
    except (KeyError, TypeError, ValueError):
        return None
    return bbox if bbox.w > 0 and bbox.h > 0 else None


def _sample(
    spec: SourceSpec,
    record_id: str,
    screenshot: str,
    element_id: str,
    tag: str,
    bbox: BBox,
    text: str,
    re_type: REType,
) -> GroundingSample:
    re = ReferringExpression(
        text=text,
        re_types=frozenset({re_type}),
        descriptor_source=DescriptorSource.MLLM_DESCRIPTION,
    )
    return GroundingSample(
        snapshot_id=f"{spec.name.value}:{record_id}",
        screenshot_ref=screenshot,
        element_id=element_id,
        re=re,
        target=center_point(bbox),
        bbox=bbox,
        tag=tag,
        descriptor_text=text,
    )


def _texts_for(spec: SourceSpec, record: dict, fields: dict, seed: int, record_id: str, report: AdaptReport) -> Optional[List[Tuple[str, REType]]]:
    """Which (text, category) pairs this record yields; None means dropped
    (reason already counted)."""
    name = spec.name
    if name is SourceName.GUIACT:
        steps = _get_path(record, fields.get("steps"))
        if isinstance(steps, list) and len(steps) > 1:
            report.drop("multi_step")
            return None
        instruction = _get_path(record, fields.get("instruction"))
        action = _get_path(record, fields.get("action_text"))
        if not instruction or not action:
            report.drop("unmappable")
            return None
        # one pass over the element with the task text, one with the action
        return [(str(instruction), REType.FUNCTIONAL), (str(action), REType.FUNCTIONAL)]
    if name is SourceName.WIDGET_CAPTION:
        captions = _get_path(record, fields.get("captions"))
        if not isinstance(captions, list) or not captions:
            report.drop("unmappable")
            return None
        captions = [str(c) for c in captions if c]
        if not captions:
            report.drop("unmappable")
            return None
        rng = derive_rng(seed, name.value, record_id)
        if len(captions) > 2:
            captions = rng.sample(captions, 2)
        return [(c, REType.VISUAL) for c in captions]
    if name is SourceName.WEB_DIRECT:
        visible = _get_path(record, fields.get("visible"))
        if visible is not True:
            report.drop("not_visible")
            return None
        description = _get_path(record, fields.get("description"))
        if description:
            return [(str(description), REType.VISUAL)]
        action = _get_path(record, fields.get("action"))
        if action:
            return [(str(action), REType.FUNCTIONAL)]
        report.drop("unmappable")
        return None
    # androidcontrol, uibert, aitz: one text field each
    text = _get_path(record, fields.get("text"))
    if not text:
        report.drop("unmappable")
        return None
    re_type = REType.VISUAL if name is SourceName.UIBERT else REType.FUNCTIONAL
    return [(str(text), re_type)]


def adapt_source(
    spec: SourceSpec, records: Iterable[dict], seed: int = 0
) -> Tuple[List[GroundingSample], AdaptReport]:
    """Convert raw records, enforcing the per-source filter rules; returns
    the samples plus a conservation report (adapted + dropped == input)."""
    fields = spec.profile.get("fields", {})
    report = AdaptReport()
    samples: List[GroundingSample] = []
    for i, record in enumerate(records):
        report.input += 1
        record_id = str(_get_path(record, fields.get("id")) or i)
        screenshot = _get_path(record, fields.get("screenshot"))
        if not screenshot:
            report.drop("unmappable")
            continue
        bbox = _mapped_bbox(_get_path(record, fields.get("bbox")))
        if bbox is None:
            report.drop("no_coordinates")
            continue
        texts = _texts_for(spec, record, fields, seed, record_id, report)
        if texts is None:
            continue
        tag = str(_get_path(record, fields.get("tag")) or "unknown")
        element_id = str(_get_path(record, fields.get("element_id")) or "e1")
        for text, re_type in texts:
            samples.append(
                _sample(spec, record_id, str(screenshot), element_id, tag, bbox, text, re_type)
            )
        report.adapted += 1
        report.emitted_samples += len(texts)
    return samples, report
