"""Referring-expression assembly.

Takes an element's descriptor plus the spatial relations around it and
renders the final expression text: primary descriptor, optional absolute
region phrase, up to two relative or contextual clauses, and a mandatory
label clause for labeled controls.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from .classify import SIMILARITY_THRESHOLD, ElementKind, classify_element, is_textual
from .snapshot import ElementRecord
from .spatial import Relation, RelationKind

__all__ = [
    "REType",
    "DescriptorSource",
    "ReferringExpression",
    "Phrase",
    "SynthesisPolicy",
    "choose_primary_descriptor",
    "positional_phrase",
    "contextual_phrase",
    "assemble_re",
]


class REType(str, Enum):
    VISUAL = "visual"
    FUNCTIONAL = "functional"
    ABSOLUTE = "absolute_positional"
    RELATIVE = "relative_positional"
    CONTEXTUAL = "contextual"


class DescriptorSource(str, Enum):
    INNER_TEXT = "inner_text"
    ALT = "alt"
    TITLE = "title"
    ARIA_LABEL = "aria_label"
    ARIA_DESCRIBEDBY = "aria_describedby"
    PLACEHOLDER = "placeholder"
    VALUE = "value"
    MLLM_DESCRIPTION = "mllm_description"


# Attribute key -> accounting category, in candidate-pool order.
_ATTRIBUTE_SOURCES = (
    ("inner_text", DescriptorSource.INNER_TEXT),
    ("alt", DescriptorSource.ALT),
    ("title", DescriptorSource.TITLE),
    ("aria-label", DescriptorSource.ARIA_LABEL),
    ("aria-describedby", DescriptorSource.ARIA_DESCRIBEDBY),
    ("placeholder", DescriptorSource.PLACEHOLDER),
    ("value", DescriptorSource.VALUE),
)

# Head-text accounting: visible text reads as a visual cue, the other
# attributes describe what the element is for.
_SOURCE_RE_TYPE = {
    DescriptorSource.INNER_TEXT: REType.VISUAL,
    DescriptorSource.ALT: REType.FUNCTIONAL,
    DescriptorSource.TITLE: REType.FUNCTIONAL,
    DescriptorSource.ARIA_LABEL: REType.FUNCTIONAL,
    DescriptorSource.ARIA_DESCRIBEDBY: REType.FUNCTIONAL,
    DescriptorSource.PLACEHOLDER: REType.FUNCTIONAL,
    DescriptorSource.VALUE: REType.FUNCTIONAL,
    DescriptorSource.MLLM_DESCRIPTION: REType.VISUAL,
}


@dataclass(frozen=True)
class Phrase:
    """One rendered clause plus the category it counts toward."""

    text: str
    re_type: REType

    def __post_init__(self) -> None:
        if not self.text:
            raise ValueError("phrase text must be non-empty")
        if self.re_type not in (REType.RELATIVE, REType.CONTEXTUAL):
            raise ValueError("clause phrases must be relative or contextual")


@dataclass(frozen=True)
class ReferringExpression:
    text: str
    re_types: frozenset
    descriptor_source: DescriptorSource

    def __post_init__(self) -> None:
        if not self.text:
            raise ValueError("referring expression text must be non-empty")
        if not self.re_types:
            raise ValueError("re_types must be non-empty")
        object.__setattr__(self, "re_types", frozenset(REType(t) for t in self.re_types))

    def to_json(self) -> dict:
        return {
            "re_text": self.text,
            "re_types": sorted(t.value for t in self.re_types),
            "descriptor_source": self.descriptor_source.value,
        }


@dataclass(frozen=True)
class SynthesisPolicy:
    """Randomization knobs for expression assembly.

    The source rules leave every probability open ("on a random basis"),
    so these are calibration values loaded from config, not constants.
    """

    seed: int = 0
    p_absolute: float = 0.05
    rel_weights: tuple = (1.0, 1.0, 1.0)
    rel_count_max: int = 2
    abs_included_at_random: bool = True
    next_to_prob: float = 0.1

    def __post_init__(self) -> None:
        if not 0.0 <= self.p_absolute <= 1.0:
            raise ValueError("p_absolute must be within [0, 1]")
        if not 0 <= self.rel_count_max <= 2:
            raise ValueError("rel_count_max must be 0, 1, or 2")
        if len(self.rel_weights) != 3 or any(w < 0 for w in self.rel_weights):
            raise ValueError("rel_weights must be three non-negative weights")
        if sum(self.rel_weights) <= 0:
            raise ValueError("rel_weights must not all be zero")
        if not 0.0 <= self.next_to_prob <= 1.0:
            raise ValueError("next_to_prob must be within [0, 1]")
        object.__setattr__(self, "rel_weights", tuple(float(w) for w in self.rel_weights))

    @classmethod
    def from_dict(cls, data: dict) -> "SynthesisPolicy":
        known = {f for f in cls.__dataclass_fields__}
        return cls(**{k: v for k, v in data.items() if k in known})

    @classmethod
    def load(cls, path: str) -> "SynthesisPolicy":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "p_absolute": self.p_absolute,
            "rel_weights": list(self.rel_weights),
            "rel_count_max": self.rel_count_max,
            "abs_included_at_random": self.abs_included_at_random,
            "next_to_prob": self.next_to_prob,
        }


def choose_primary_descriptor(
    e: ElementRecord,
    mllm_desc: Optional[str],
    rng: random.Random,
    similarity_threshold: float = SIMILARITY_THRESHOLD,
) -> Optional[tuple]:
    """Pick the head descriptor: (text, source), or None when nothing usable.

    Textual interactive elements and pure-text elements always use their
    visible text; everything else draws uniformly from the non-empty
    salient attributes plus the model description when present.
    """
    kind = classify_element(e)
    inner = e.attr("inner_text")
    if inner:
        if kind is ElementKind.PURE_TEXT:
            return inner, DescriptorSource.INNER_TEXT
        if kind is ElementKind.INTERACTIVE and is_textual(e, similarity_threshold):
            return inner, DescriptorSource.INNER_TEXT
    candidates = [(e.attr(key), src) for key, src in _ATTRIBUTE_SOURCES if e.attr(key)]
    if mllm_desc:
        candidates.append((mllm_desc, DescriptorSource.MLLM_DESCRIPTION))
    if not candidates:
        return None
    return candidates[rng.randrange(len(candidates))]


_DIRECTION_TEMPLATES = {
    RelationKind.LEFT_OF: "to the left of {other}",
    RelationKind.RIGHT_OF: "to the right of {other}",
    RelationKind.ABOVE: "above {other}",
    RelationKind.BELOW: "below {other}",
    RelationKind.NEXT_TO: "next to {other}",
}


def positional_phrase(
    r: Relation,
    other_descriptor: str,
    rng: Optional[random.Random] = None,
    second_descriptor: Optional[str] = None,
    next_to_prob: float = 0.0,
) -> str:
    """Render a relation as a clause; directional kinds may soften to
    "next to" with probability next_to_prob."""
    if r.kind is RelationKind.BETWEEN:
        if not second_descriptor:
            raise ValueError("between requires two descriptors")
        return f"between {other_descriptor} and {second_descriptor}"
    if r.kind is RelationKind.UNDER_TITLE:
        return f"under the section {other_descriptor}"
    if r.kind is RelationKind.LABELED_BY:
        return f"labeled {other_descriptor}"
    template = _DIRECTION_TEMPLATES[r.kind]
    if (
        r.kind is not RelationKind.NEXT_TO
        and rng is not None
        and next_to_prob > 0.0
        and rng.random() < next_to_prob
    ):
        template = _DIRECTION_TEMPLATES[RelationKind.NEXT_TO]
    return template.format(other=other_descriptor)


def contextual_phrase(control: ElementRecord, label_text: str) -> str:
    """Label-anchored phrase for a form control."""
    kind = classify_element(control)
    if control.tag not in ("input", "select", "textarea") or kind is not ElementKind.INTERACTIVE:
        raise ValueError(f"not a labeled control: {control.tag!r}")
    if not label_text:
        raise ValueError("label text must be non-empty")
    if control.tag == "input" and control.input_type == "radio":
        return f"radio button for {label_text}"
    if control.tag == "input" and control.input_type == "checkbox":
        return f"checkbox for {label_text}"
    if control.tag == "select":
        return f"the dropdown labeled {label_text}"
    return f"the input field labeled {label_text}"


def assemble_re(
    descriptor: str,
    source: DescriptorSource,
    region_phrase: Optional[str],
    rels: Sequence[Phrase],
    policy: SynthesisPolicy,
    rng: random.Random,
    label_phrase: Optional[str] = None,
) -> ReferringExpression:
    """Concatenate the parts into one expression.

    label_phrase, when given, is always included (labeled controls keep
    their label); the absolute region phrase is included with probability
    p_absolute; rels were already sampled upstream and capped at two.
    """
    if len(rels) > policy.rel_count_max:
        raise ValueError(f"at most {policy.rel_count_max} relative clauses allowed")
    parts = [descriptor]
    types = {_SOURCE_RE_TYPE[source]}
    if label_phrase and label_phrase != descriptor:
        parts.append(label_phrase)
    if label_phrase:
        types.add(REType.CONTEXTUAL)
    for phrase in rels:
        parts.append(phrase.text)
        types.add(phrase.re_type)
    include_abs = region_phrase is not None
    if include_abs and policy.abs_included_at_random:
        include_abs = rng.random() < policy.p_absolute
    if include_abs:
        parts.append(region_phrase)
        types.add(REType.ABSOLUTE)
    return ReferringExpression(
        text=", ".join(parts),
        re_types=frozenset(types),
        descriptor_source=source,
    )
