"""Element classification: interactive vs pure-text, OCR-textual check, dedup.

Interactive elements are the grounding targets; pure-text elements double
as descriptor sources and a capped minority of targets. An interactive
element whose OCR text closely matches its inner text is "textual" and
skips the model-description path entirely.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from .snapshot import ElementRecord

__all__ = [
    "INTERACTIVE_TAGS",
    "PURE_TEXT_TAGS",
    "SIMILARITY_THRESHOLD",
    "ElementKind",
    "ElementClass",
    "classify_element",
    "text_similarity",
    "is_textual",
    "dedup_ambiguous",
    "normalize_text",
]

INTERACTIVE_TAGS = frozenset(
    {"a", "img", "button", "input", "svg", "select", "textarea", "video"}
)
PURE_TEXT_TAGS = frozenset(
    {"p", "h1", "h2", "h3", "h4", "h5", "h6", "span", "li", "td", "label"}
)

# OCR-vs-inner-text similarity at or above this makes an element textual.
SIMILARITY_THRESHOLD = 0.7

_WHITESPACE = re.compile(r"\s+")


class ElementKind(Enum):
    INTERACTIVE = "interactive"
    PURE_TEXT = "pure_text"
    OTHER = "other"


@dataclass(frozen=True)
class ElementClass:
    kind: ElementKind
    textual: bool = False

    def __post_init__(self):
        if self.textual and self.kind is not ElementKind.INTERACTIVE:
            raise ValueError("only interactive elements can be flagged textual")


def classify_element(e: ElementRecord) -> ElementKind:
    """Total over all tags: unknown tags land in OTHER."""
    if e.tag in INTERACTIVE_TAGS:
        return ElementKind.INTERACTIVE
    if e.tag in PURE_TEXT_TAGS:
        return ElementKind.PURE_TEXT
    return ElementKind.OTHER


def normalize_text(s: str) -> str:
    """Case-fold, trim, and collapse runs of whitespace to single spaces."""
    return _WHITESPACE.sub(" ", s.strip()).casefold()


def _levenshtein(a: str, b: str) -> int:
    # Two-row DP; strings here are short UI labels.
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        for j, cb in enumerate(b, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def text_similarity(a: str, b: str) -> float:
    """Normalized edit-distance similarity in [0, 1].

    Computed as 1 - dist/max(len) over normalized strings, so equal
    strings score 1.0 and an empty string against a non-empty one 0.0.
    Symmetric by construction.
    """
    na, nb = normalize_text(a), normalize_text(b)
    if not na and not nb:
        return 1.0
    if not na or not nb:
        return 0.0
    return 1.0 - _levenshtein(na, nb) / max(len(na), len(nb))


def is_textual(e: ElementRecord, threshold: float = SIMILARITY_THRESHOLD) -> bool:
    """True when OCR text is present and close enough to the inner text.

    Textual elements are already described by their visible text, so the
    model-description pipeline is bypassed for them.
    """
    if e.ocr_text is None:
        return False
    inner = e.attributes.get("inner_text", "")
    return text_similarity(e.ocr_text, inner) >= threshold


def classify(e: ElementRecord, threshold: float = SIMILARITY_THRESHOLD) -> ElementClass:
    kind = classify_element(e)
    textual = kind is ElementKind.INTERACTIVE and is_textual(e, threshold)
    return ElementClass(kind=kind, textual=textual)


def dedup_ambiguous(elements: list[ElementRecord]) -> set[str]:
    """Ids of elements whose normalized inner text collides on the page.

    Every member of a colliding group is excluded: a page with two "More"
    links keeps neither, since neither can be grounded unambiguously.
    Elements with empty text never collide.
    """
    groups: dict[str, list[str]] = {}
    for e in elements:
        text = normalize_text(e.attributes.get("inner_text", ""))
        if not text:
            continue
        groups.setdefault(text, []).append(e.id)
    excluded: set[str] = set()
    for ids in groups.values():
        if len(ids) > 1:
            excluded.update(ids)
    return excluded
