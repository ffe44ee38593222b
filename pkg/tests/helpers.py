"""Shared builders for tests: single elements, snapshots, and a synthetic
corpus generator whose output exercises every pipeline path (textual
elements, labeled controls, duplicates, titles, pure text)."""

from __future__ import annotations

import random

from groundkit.snapshot import BBox, ElementRecord, PageSnapshot, parse_snapshot


def make_element(
    id="e0001",
    tag="a",
    x=10,
    y=10,
    w=80,
    h=20,
    inner_text=None,
    ocr_text=None,
    visible=True,
    input_type=None,
    **attrs,
):
    attributes = {}
    if inner_text is not None:
        attributes["inner_text"] = inner_text
    for key, value in attrs.items():
        attributes[key.replace("_", "-")] = value
    return ElementRecord(
        id=id,
        tag=tag,
        attributes=attributes,
        bbox=BBox(x, y, w, h),
        ocr_text=ocr_text,
        visible=visible,
        input_type=input_type,
    )


def make_snapshot(elements, snapshot_id="s0001", width=1280, height=2400, viewport_h=800):
    return PageSnapshot(
        snapshot_id=snapshot_id,
        url=f"https://example.test/{snapshot_id}",
        viewport=(width, viewport_h),
        canvas=(width, max(height, viewport_h)),
        screenshot_ref=f"shots/{snapshot_id}.png",
        elements=tuple(elements),
    )


def snapshot_dict(elements, snapshot_id="s0001", width=1280, height=2400, viewport_h=800):
    """Snapshot as raw JSON-ready dict (the wire schema)."""
    out_elements = []
    for e in elements:
        rec = {
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
        out_elements.append(rec)
    return {
        "snapshot_id": snapshot_id,
        "url": f"https://example.test/{snapshot_id}",
        "viewport": {"width": width, "height": viewport_h},
        "canvas": {"width": width, "height": max(height, viewport_h)},
        "screenshot_ref": f"shots/{snapshot_id}.png",
        "elements": out_elements,
    }


_WORDS = (
    "Search Submit Cancel Next Previous Home Cart Login Logout Profile "
    "Settings Help About Contact Price Total Save Delete Edit Share Filter "
    "Sort Upload Download Browse Checkout Subscribe Register Apply Reset"
).split()

_DUPPOOL = ("More", "Read more", "Details", "View")


def _rand_text(rng: random.Random, n_words=2) -> str:
    return " ".join(rng.choice(_WORDS) for _ in range(rng.randint(1, n_words)))


def corpus_snapshot(rng: random.Random, snapshot_id: str) -> dict:
    """One synthetic page: a title bar, sections with headings, links,
    images, form controls with labels, and body text."""
    mobile = rng.random() < 0.34
    width = 512 if mobile else 1280
    canvas_h = rng.randint(900, 2600)
    elements = []
    y = 8
    idx = 0

    def next_id():
        nonlocal idx
        idx += 1
        return f"e{idx:04d}"

    target_count = rng.randint(30, 70)
    while len(elements) < target_count and y < canvas_h - 80:
        roll = rng.random()
        x = rng.randint(0, max(0, width - 340))
        if roll < 0.08:
            text = _rand_text(rng)
            elements.append(
                {"id": next_id(), "tag": rng.choice(("h1", "h2", "h3")),
                 "attributes": {"inner_text": text},
                 "bbox": {"x": x, "y": y, "w": rng.randint(120, 300), "h": 30},
                 "visible": True}
            )
            y += rng.randint(36, 70)
        elif roll < 0.40:
            # link row; sometimes textual (ocr matches), sometimes duplicated
            if rng.random() < 0.15:
                text = rng.choice(_DUPPOOL)
            else:
                text = _rand_text(rng)
            rec = {"id": next_id(), "tag": "a",
                   "attributes": {"inner_text": text},
                   "bbox": {"x": x, "y": y, "w": rng.randint(60, 180), "h": 22},
                   "visible": True}
            if rng.random() < 0.6:
                rec["ocr_text"] = text if rng.random() < 0.8 else text[:-1] + "x"
            elements.append(rec)
            if rng.random() < 0.5 and x + 420 < width:
                elements.append(
                    {"id": next_id(), "tag": "span",
                     "attributes": {"inner_text": _rand_text(rng)},
                     "bbox": {"x": x + rng.randint(200, 240), "y": y,
                              "w": rng.randint(60, 160), "h": 20},
                     "visible": True}
                )
            y += rng.randint(26, 60)
        elif roll < 0.52:
            elements.append(
                {"id": next_id(), "tag": rng.choice(("img", "button", "svg")),
                 "attributes": {} if rng.random() < 0.25 else
                 {rng.choice(("alt", "aria-label", "title")): _rand_text(rng)},
                 "bbox": {"x": x, "y": y, "w": rng.randint(24, 200), "h": rng.randint(24, 120)},
                 "visible": True}
            )
            y += rng.randint(30, 130)
        elif roll < 0.62:
            # control + right-side label text
            input_type = rng.choice(("radio", "checkbox", "text"))
            control = {"id": next_id(), "tag": "input", "attributes": {},
                       "bbox": {"x": x, "y": y, "w": 18, "h": 18},
                       "visible": True, "input_type": input_type}
            if rng.random() < 0.3:
                control["attributes"]["aria-label"] = _rand_text(rng)
            elements.append(control)
            if rng.random() < 0.85:
                elements.append(
                    {"id": next_id(), "tag": "label",
                     "attributes": {"inner_text": _rand_text(rng)},
                     "bbox": {"x": x + 26, "y": y + 1, "w": rng.randint(40, 140), "h": 16},
                     "visible": True}
                )
            y += rng.randint(26, 48)
        elif roll < 0.9:
            rec = {"id": next_id(), "tag": rng.choice(("p", "li", "td", "span")),
                   "attributes": {"inner_text": _rand_text(rng, 4)},
                   "bbox": {"x": x, "y": y, "w": rng.randint(100, 320), "h": 18},
                   "visible": True}
            elements.append(rec)
            y += rng.randint(22, 44)
        else:
            # invisible or layout-only noise
            elements.append(
                {"id": next_id(), "tag": rng.choice(("div", "section", "a")),
                 "attributes": {"inner_text": _rand_text(rng)},
                 "bbox": {"x": x, "y": y, "w": 100, "h": 20},
                 "visible": rng.random() < 0.5}
            )
            y += rng.randint(20, 40)
    lowest = max((e["bbox"]["y"] + e["bbox"]["h"] for e in elements), default=0)
    canvas_h = max(canvas_h, lowest + 10)
    return {
        "snapshot_id": snapshot_id,
        "url": f"https://corpus.test/{snapshot_id}",
        "viewport": {"width": width, "height": 800},
        "canvas": {"width": width, "height": canvas_h},
        "screenshot_ref": f"shots/{snapshot_id}.png",
        "elements": elements,
    }


def make_corpus(n=200, seed=13):
    """Deterministic synthetic corpus of n snapshot dicts."""
    rng = random.Random(seed)
    return [corpus_snapshot(rng, f"c{i:04d}") for i in range(n)]


def random_small_snapshot(rng: random.Random, snapshot_id: str, max_elements=25) -> PageSnapshot:
    """Randomized snapshot for oracle-equivalence fuzzing: boxes anywhere,
    overlaps allowed, a few controls and titles mixed in."""
    width, height = rng.choice(((1280, 2000), (512, 1400), (800, 800)))
    n = rng.randint(1, max_elements)
    elements = []
    for i in range(n):
        tag = rng.choice(
            ("a", "img", "button", "input", "select", "p", "span", "h1", "h2", "h3", "div", "li")
        )
        w = rng.randint(1, 300)
        h = rng.randint(1, 120)
        x = rng.randint(0, max(0, width - w))
        y = rng.randint(0, max(0, height - h))
        attributes = {}
        if rng.random() < 0.7:
            attributes["inner_text"] = _rand_text(rng)
        if rng.random() < 0.25:
            attributes["aria-label"] = _rand_text(rng)
        elements.append(
            ElementRecord(
                id=f"e{i:04d}",
                tag=tag,
                attributes=attributes,
                bbox=BBox(x, y, w, h),
                visible=rng.random() < 0.9,
                input_type=rng.choice(("radio", "checkbox", "text", None)) if tag == "input" else None,
            )
        )
    return PageSnapshot(
        snapshot_id=snapshot_id,
        url=f"https://fuzz.test/{snapshot_id}",
        viewport=(width, 800),
        canvas=(width, height),
        screenshot_ref=f"shots/{snapshot_id}.png",
        elements=tuple(elements),
    )


def parse_dict(d: dict) -> PageSnapshot:
    import json

    return parse_snapshot(json.dumps(d))
