"""Per-snapshot synthesis: classification, descriptors, clauses, samples.

One snapshot goes in; grounding samples and a batched record come out.
All randomness is drawn from rngs derived per (seed, snapshot, element),
so results do not depend on worker count or element order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .augment import AugmentationClient, AugmentationSkipped, crop_ref_for
from .classify import (
    ElementKind,
    SIMILARITY_THRESHOLD,
    classify_element,
    dedup_ambiguous,
    is_textual,
)
from .expressions import (
    DescriptorSource,
    Phrase,
    REType,
    SynthesisPolicy,
    assemble_re,
    choose_primary_descriptor,
    contextual_phrase,
    positional_phrase,
)
from .sampling import (
    Candidate,
    GroundingSample,
    PAGE_ELEMENT_CAP,
    emit_samples,
    select_page_elements,
)
from .seeding import derive_rng
from .snapshot import ElementRecord, PageSnapshot
from .spatial import (
    CONTROL_LABEL_ATTRIBUTES,
    Direction,
    LABELED_CONTROL_TAGS,
    MAX_RELATIVE_DISTANCE,
    Relation,
    RelationKind,
    absolute_region,
    associate_label,
    candidate_relatives,
    center_distance,
    directional_neighbors,
    nearest_title,
)

__all__ = ["PipelineSettings", "SnapshotResult", "process_snapshot", "anchor_text"]

# Attributes that make an element count as accessibility-labeled for
# selection priority; visible text and user-typed values do not.
A11Y_LABEL_ATTRIBUTES = ("aria-label", "alt", "title", "aria-describedby", "placeholder")

_DIRECTION_RELATION = {
    Direction.LEFT: RelationKind.RIGHT_OF,
    Direction.RIGHT: RelationKind.LEFT_OF,
    Direction.ABOVE: RelationKind.BELOW,
    Direction.BELOW: RelationKind.ABOVE,
}


@dataclass(frozen=True)
class PipelineSettings:
    policy: SynthesisPolicy = SynthesisPolicy()
    similarity_threshold: float = SIMILARITY_THRESHOLD
    max_relative_distance: int = MAX_RELATIVE_DISTANCE
    page_element_cap: int = PAGE_ELEMENT_CAP
    use_mllm: bool = True


@dataclass
class SnapshotResult:
    snapshot_id: str
    samples: List[GroundingSample]
    record: Optional[dict]
    drops: Dict[str, int] = field(default_factory=dict)

    def drop(self, reason: str) -> None:
        self.drops[reason] = self.drops.get(reason, 0) + 1


def anchor_text(e: ElementRecord) -> str:
    """Text used when this element is referenced by one of its neighbors."""
    for key in ("inner_text", "aria-label", "alt", "title", "placeholder", "value"):
        value = e.attr(key)
        if value:
            return value
    return ""


def _attribute_label(e: ElementRecord) -> str:
    for key in CONTROL_LABEL_ATTRIBUTES:
        value = e.attr(key)
        if value:
            return value
    return ""


def _clause_pool(
    e: ElementRecord,
    visible: List[ElementRecord],
    by_id: Dict[str, ElementRecord],
    max_dist: int,
) -> List[Tuple[Relation, str, Optional[str]]]:
    """Candidate clause entries (relation, anchor text, second anchor) in a
    fixed order: one nearest usable neighbor per direction, an optional
    between-pair, then the nearest upper title."""
    pool: List[Tuple[Relation, str, Optional[str]]] = []
    within = set(candidate_relatives(e, visible, max_dist))
    neighbors = directional_neighbors(e, visible)
    flank: Dict[Direction, Tuple[str, str]] = {}
    for direction in (Direction.LEFT, Direction.RIGHT, Direction.ABOVE, Direction.BELOW):
        for nid in neighbors[direction]:
            if nid not in within:
                continue
            text = anchor_text(by_id[nid])
            if not text:
                continue
            kind = _DIRECTION_RELATION[direction]
            rel = Relation(e.id, nid, kind, center_distance(e, by_id[nid]))
            pool.append((rel, text, None))
            flank[direction] = (nid, text)
            break
    if Direction.LEFT in flank and Direction.RIGHT in flank:
        left_id, left_text = flank[Direction.LEFT]
        _, right_text = flank[Direction.RIGHT]
        rel = Relation(e.id, left_id, RelationKind.BETWEEN, center_distance(e, by_id[left_id]))
        pool.append((rel, left_text, right_text))
    tid = nearest_title(e, visible)
    if tid is not None:
        title = anchor_text(by_id[tid])
        if title:
            rel = Relation(e.id, tid, RelationKind.UNDER_TITLE, center_distance(e, by_id[tid]))
            pool.append((rel, title, None))
    return pool


def process_snapshot(
    snapshot: PageSnapshot,
    settings: PipelineSettings,
    client: Optional[AugmentationClient] = None,
) -> SnapshotResult:
    result = SnapshotResult(snapshot.snapshot_id, [], None)
    policy = settings.policy
    visible = [e for e in snapshot.elements if e.visible]
    by_id = {e.id: e for e in visible}

    kinds = {e.id: classify_element(e) for e in visible}
    textual_ids = {
        e.id
        for e in visible
        if kinds[e.id] is ElementKind.INTERACTIVE and is_textual(e, settings.similarity_threshold)
    }
    dedup_pool = [
        e for e in visible if e.id in textual_ids or kinds[e.id] is ElementKind.PURE_TEXT
    ]
    excluded = dedup_ambiguous(dedup_pool)

    candidates: List[Candidate] = []
    for e in visible:
        kind = kinds[e.id]
        if kind is ElementKind.OTHER:
            continue
        if e.id in excluded:
            result.drop("ambiguous_text")
            continue
        rng = derive_rng(policy.seed, snapshot.snapshot_id, e.id)

        mllm_desc: Optional[str] = None
        if (
            settings.use_mllm
            and client is not None
            and kind is ElementKind.INTERACTIVE
            and e.id not in textual_ids
        ):
            try:
                raw = client.describe_element(
                    crop_ref_for(snapshot.screenshot_ref, e.id), e.attributes
                )
                mllm_desc = client.condense_description(raw)
            except AugmentationSkipped:
                result.drop("augmentation_skipped")

        label_phrase: Optional[str] = None
        if e.tag in LABELED_CONTROL_TAGS and kind is ElementKind.INTERACTIVE:
            label_text = _attribute_label(e)
            if not label_text:
                lid = associate_label(e, visible)
                if lid is not None:
                    label_text = anchor_text(by_id[lid])
            if label_text:
                label_phrase = contextual_phrase(e, label_text)

        chosen = choose_primary_descriptor(e, mllm_desc, rng, settings.similarity_threshold)
        if chosen is None:
            if label_phrase:
                chosen = (label_phrase, DescriptorSource.INNER_TEXT)
            else:
                result.drop("no_descriptor")
                continue
        descriptor, source = chosen

        pool = _clause_pool(e, visible, by_id, settings.max_relative_distance)
        count = rng.choices((0, 1, 2), weights=policy.rel_weights)[0]
        count = min(count, policy.rel_count_max, len(pool))
        entries = rng.sample(pool, count) if count else []
        rels = []
        for rel, text, second in entries:
            re_type = REType.CONTEXTUAL if rel.kind is RelationKind.UNDER_TITLE else REType.RELATIVE
            rendered = positional_phrase(
                rel, text, rng, second_descriptor=second, next_to_prob=policy.next_to_prob
            )
            rels.append(Phrase(rendered, re_type))

        region = absolute_region(e.bbox, snapshot.canvas)
        re = assemble_re(
            descriptor,
            source,
            region.phrase,
            rels,
            policy,
            rng,
            label_phrase=label_phrase,
        )
        candidates.append(
            Candidate(
                element=e,
                re=re,
                a11y_labeled=any(e.attr(k) for k in A11Y_LABEL_ATTRIBUTES),
                mllm_annotated=mllm_desc is not None,
                pure_text=kind is ElementKind.PURE_TEXT,
                descriptor_text=descriptor,
            )
        )

    snapshot_rng = derive_rng(policy.seed, snapshot.snapshot_id)
    selected = select_page_elements(candidates, snapshot_rng, cap=settings.page_element_cap)
    result.samples, result.record = emit_samples(snapshot, selected)
    return result
