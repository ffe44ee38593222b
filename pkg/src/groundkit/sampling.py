"""Selection caps, label downsampling, sample emission, corpus statistics.

Selection keeps at most 100 elements per page with labeled/annotated ones
first and a formula cap on pure-text elements; downsampling limits each
distinct descriptor label to 1000 occurrences corpus-wide; emission renders
one batched record per screenshot with question/answer strings.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .expressions import DescriptorSource, ReferringExpression, REType
from .prompts import GROUNDING_QUESTION_TEMPLATE
from .resolution import format_coordinates
from .seeding import stable_hash
from .snapshot import BBox, ElementRecord, PageSnapshot, Point, center_point

__all__ = [
    "PAGE_ELEMENT_CAP",
    "LABEL_DOWNSAMPLE_CAP",
    "Candidate",
    "GroundingSample",
    "StatsReport",
    "select_page_elements",
    "downsample_labels",
    "build_record",
    "emit_samples",
    "sample_to_json",
    "sample_from_json",
    "corpus_stats",
]

PAGE_ELEMENT_CAP = 100
LABEL_DOWNSAMPLE_CAP = 1000
PURE_TEXT_FLOOR = 10


@dataclass(frozen=True)
class Candidate:
    """One element that survived classification and got an expression."""

    element: ElementRecord
    re: ReferringExpression
    a11y_labeled: bool = False
    mllm_annotated: bool = False
    pure_text: bool = False
    descriptor_text: str = ""


@dataclass(frozen=True)
class GroundingSample:
    snapshot_id: str
    screenshot_ref: str
    element_id: str
    re: ReferringExpression
    target: Point
    bbox: BBox
    tag: str
    descriptor_text: str = ""

    def __post_init__(self) -> None:
        if self.target != center_point(self.bbox):
            raise ValueError("target must be the bbox center point")
        if not self.bbox.contains(self.target):
            raise ValueError("target must lie inside bbox")

    @property
    def label_key(self) -> str:
        return (self.descriptor_text or self.re.text).casefold()


def select_page_elements(
    candidates: Sequence[Candidate], rng=None, cap: int = PAGE_ELEMENT_CAP
) -> List[Candidate]:
    """Apply the per-page caps to one snapshot's candidates.

    Labeled/annotated elements come first, then the remaining interactive
    ones, then pure-text elements capped at
    min(available, max(3 x (labeled + annotated), min(10, available))).
    Ties and ordering inside each tier are ascending element id, so the
    rng parameter is accepted for signature stability but unused.
    """
    labeled = [c for c in candidates if c.a11y_labeled or c.mllm_annotated]
    plain = [c for c in candidates if not (c.a11y_labeled or c.mllm_annotated or c.pure_text)]
    pure = [c for c in candidates if c.pure_text and not (c.a11y_labeled or c.mllm_annotated)]
    for tier in (labeled, plain, pure):
        tier.sort(key=lambda c: c.element.id)
    available = len(pure)
    text_cap = min(available, max(3 * len(labeled), min(PURE_TEXT_FLOOR, available)))
    selected = labeled + plain + pure[:text_cap]
    return selected[:cap]


def _sample_rank(seed: int, s: GroundingSample) -> Tuple:
    h = stable_hash(seed, s.snapshot_id, s.element_id, s.re.text)
    return (h, s.snapshot_id, s.element_id, s.re.text)


def downsample_labels(
    samples: Sequence[GroundingSample],
    cap: int = LABEL_DOWNSAMPLE_CAP,
    seed: int = 0,
) -> List[GroundingSample]:
    """Cap each distinct descriptor label at `cap` occurrences.

    Survivors are the cap lowest hash ranks per label, so the result is
    independent of input order; output preserves the input sequence.
    """
    if cap < 0:
        raise ValueError("cap must be non-negative")
    freq: Dict[str, int] = {}
    for s in samples:
        freq[s.label_key] = freq.get(s.label_key, 0) + 1
    over = {label for label, count in freq.items() if count > cap}
    if not over:
        return list(samples)
    ranks: Dict[str, list] = {label: [] for label in over}
    for s in samples:
        if s.label_key in over:
            ranks[s.label_key].append(_sample_rank(seed, s))
    keep = {label: set(heapq.nsmallest(cap, rs)) for label, rs in ranks.items()}
    out = []
    for s in samples:
        if s.label_key in over and _sample_rank(seed, s) not in keep[s.label_key]:
            continue
        out.append(s)
    return out


def sample_to_json(s: GroundingSample) -> dict:
    return {
        "element_id": s.element_id,
        "tag": s.tag,
        "bbox": {"x": s.bbox.x, "y": s.bbox.y, "w": s.bbox.w, "h": s.bbox.h},
        "target": {"x": s.target.x, "y": s.target.y},
        "re_text": s.re.text,
        "re_types": sorted(t.value for t in s.re.re_types),
        "descriptor_source": s.re.descriptor_source.value,
        "question": GROUNDING_QUESTION_TEMPLATE.format(description=s.re.text),
        "answer": format_coordinates(s.target),
    }


def sample_from_json(entry: dict, snapshot_id: str, screenshot_ref: str) -> GroundingSample:
    bbox = BBox(**entry["bbox"])
    re = ReferringExpression(
        text=entry["re_text"],
        re_types=frozenset(REType(t) for t in entry["re_types"]),
        descriptor_source=DescriptorSource(entry["descriptor_source"]),
    )
    return GroundingSample(
        snapshot_id=snapshot_id,
        screenshot_ref=screenshot_ref,
        element_id=entry["element_id"],
        re=re,
        target=Point(entry["target"]["x"], entry["target"]["y"]),
        bbox=bbox,
        tag=entry["tag"],
    )


def build_record(
    snapshot_id: str, screenshot_ref: str, samples: Sequence[GroundingSample]
) -> Optional[dict]:
    """One batched record per screenshot; None when there are no samples."""
    if not samples:
        return None
    return {
        "snapshot_id": snapshot_id,
        "screenshot_ref": screenshot_ref,
        "samples": [sample_to_json(s) for s in samples],
    }


def emit_samples(
    snapshot: PageSnapshot, selected: Sequence[Candidate]
) -> Tuple[List[GroundingSample], Optional[dict]]:
    """Build samples for one snapshot plus its batched serialized record;
    no record when nothing was selected."""
    samples = []
    for c in selected:
        samples.append(
            GroundingSample(
                snapshot_id=snapshot.snapshot_id,
                screenshot_ref=snapshot.screenshot_ref,
                element_id=c.element.id,
                re=c.re,
                target=center_point(c.element.bbox),
                bbox=c.element.bbox,
                tag=c.element.tag,
                descriptor_text=c.descriptor_text,
            )
        )
    return samples, build_record(snapshot.snapshot_id, snapshot.screenshot_ref, samples)


@dataclass
class StatsReport:
    total: int
    tag_shares: Dict[str, float] = field(default_factory=dict)
    descriptor_shares: Dict[str, float] = field(default_factory=dict)
    re_type_shares: Dict[str, float] = field(default_factory=dict)

    def to_json(self) -> dict:
        rounded = lambda shares: {k: round(v, 2) for k, v in sorted(shares.items())}
        return {
            "total": self.total,
            "tag_shares": rounded(self.tag_shares),
            "descriptor_shares": rounded(self.descriptor_shares),
            "re_type_shares": rounded(self.re_type_shares),
        }


def corpus_stats(samples: Iterable[GroundingSample]) -> StatsReport:
    """Shares as percentages of all samples; a contextual expression also
    counts toward the relative share."""
    total = 0
    tags: Dict[str, int] = {}
    descriptors: Dict[str, int] = {}
    relative = contextual = absolute = 0
    for s in samples:
        total += 1
        tags[s.tag] = tags.get(s.tag, 0) + 1
        src = s.re.descriptor_source.value
        descriptors[src] = descriptors.get(src, 0) + 1
        types = s.re.re_types
        if REType.RELATIVE in types or REType.CONTEXTUAL in types:
            relative += 1
        if REType.CONTEXTUAL in types:
            contextual += 1
        if REType.ABSOLUTE in types:
            absolute += 1
    if total == 0:
        return StatsReport(total=0)
    pct = lambda n: n / total * 100.0
    return StatsReport(
        total=total,
        tag_shares={t: pct(n) for t, n in tags.items()},
        descriptor_shares={d: pct(n) for d, n in descriptors.items()},
        re_type_shares={
            "relative": pct(relative),
            "contextual": pct(contextual),
            "absolute": pct(absolute),
        },
    )
