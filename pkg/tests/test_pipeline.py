import random

from groundkit.augment import AugmentationClient, AugmentationSkipped
from groundkit.expressions import DescriptorSource, REType, SynthesisPolicy
from groundkit.pipeline import PipelineSettings, anchor_text, process_snapshot
from groundkit.snapshot import center_point
from helpers import make_corpus, make_element, make_snapshot, parse_dict


class CountingClient(AugmentationClient):
    """Mock client that tallies describe/condense calls per element."""

    def __init__(self):
        super().__init__()
        self.describe_calls = []
        self.condense_calls = 0

    def describe_element(self, crop_ref, attributes):
        self.describe_calls.append(crop_ref)
        return super().describe_element(crop_ref, attributes)

    def condense_description(self, long_desc):
        self.condense_calls += 1
        return super().condense_description(long_desc)


class SkippingClient(AugmentationClient):
    def describe_element(self, crop_ref, attributes):
        raise AugmentationSkipped("scripted failure")


def settings(seed=7, **kw):
    return PipelineSettings(policy=SynthesisPolicy(seed=seed), **kw)


def test_anchor_text_precedence():
    assert anchor_text(make_element(inner_text="A", alt="B")) == "A"
    assert anchor_text(make_element(alt="B", title="C")) == "B"
    assert anchor_text(make_element(title="C")) == "C"
    assert anchor_text(make_element()) == ""


def test_textual_element_bypasses_model_calls():
    snap = make_snapshot(
        [
            make_element(id="e0001", tag="a", inner_text="Sign in", ocr_text="Sign in"),
            make_element(id="e0002", tag="img", x=300, y=10, w=40, h=40, alt="Logo"),
        ]
    )
    client = CountingClient()
    result = process_snapshot(snap, settings(), client)
    assert len(result.samples) == 2
    # only the image crop was described; the textual link never hits the client
    assert client.describe_calls == [f"{snap.screenshot_ref}#e0002"]
    assert client.condense_calls == 1
    textual = next(s for s in result.samples if s.element_id == "e0001")
    assert textual.re.descriptor_source is DescriptorSource.INNER_TEXT
    assert "Sign in" in textual.re.text


def test_duplicate_text_drops_whole_group():
    snap = make_snapshot(
        [
            make_element(id="e0001", tag="a", inner_text="More", ocr_text="More", y=10),
            make_element(id="e0002", tag="a", inner_text="More", ocr_text="More", y=60),
            make_element(id="e0003", tag="a", inner_text="Unique", ocr_text="Unique", y=120),
        ]
    )
    result = process_snapshot(snap, settings(), AugmentationClient())
    assert [s.element_id for s in result.samples] == ["e0003"]
    assert result.drops.get("ambiguous_text") == 2


def test_labeled_control_always_carries_label_phrase():
    snap = make_snapshot(
        [
            make_element(id="e0001", tag="input", input_type="radio", x=100, y=100, w=18, h=18),
            make_element(
                id="e0002", tag="label", inner_text="Express shipping", x=126, y=101, w=120, h=16
            ),
        ]
    )
    for seed in range(12):
        result = process_snapshot(snap, settings(seed=seed), AugmentationClient())
        radio = next(s for s in result.samples if s.element_id == "e0001")
        assert "radio button for Express shipping" in radio.re.text
        assert REType.CONTEXTUAL in radio.re.re_types


def test_control_with_attribute_label_uses_it():
    snap = make_snapshot(
        [
            make_element(
                id="e0001", tag="input", input_type="text", aria_label="Email", x=10, y=10, w=200, h=28
            )
        ]
    )
    result = process_snapshot(snap, settings(), AugmentationClient())
    assert "the input field labeled Email" in result.samples[0].re.text


def test_unlabeled_undescribable_control_dropped():
    snap = make_snapshot(
        [make_element(id="e0001", tag="input", input_type="text", x=10, y=10, w=200, h=28)]
    )
    # no attributes, no nearby text, no client: nothing to describe it by
    result = process_snapshot(snap, settings(), client=None)
    assert result.samples == []
    assert result.drops.get("no_descriptor") == 1


def test_augmentation_skip_counted_and_element_may_still_emit():
    snap = make_snapshot(
        [
            make_element(id="e0001", tag="img", alt="Logo", x=10, y=10, w=40, h=40),
            make_element(id="e0002", tag="svg", x=100, y=10, w=40, h=40),
        ]
    )
    result = process_snapshot(snap, settings(), SkippingClient())
    assert result.drops.get("augmentation_skipped") == 2
    # the alt-labeled image still emits; the bare svg has nothing left
    assert [s.element_id for s in result.samples] == ["e0001"]
    assert result.drops.get("no_descriptor") == 1


def test_invisible_and_other_tags_ignored():
    snap = make_snapshot(
        [
            make_element(id="e0001", tag="a", inner_text="Shown", ocr_text="Shown"),
            make_element(id="e0002", tag="a", inner_text="Hidden", ocr_text="Hidden", visible=False),
            make_element(id="e0003", tag="div", inner_text="Layout"),
        ]
    )
    result = process_snapshot(snap, settings(), AugmentationClient())
    assert [s.element_id for s in result.samples] == ["e0001"]


def test_relative_clause_names_neighbor():
    # target with exactly one usable neighbor on the left, nothing else
    snap = make_snapshot(
        [
            make_element(id="e0001", tag="a", inner_text="Docs", ocr_text="Docs", x=300, y=100, w=60, h=20),
            make_element(id="e0002", tag="span", inner_text="the logo", x=100, y=100, w=80, h=20),
        ]
    )
    policy = SynthesisPolicy(seed=0, rel_weights=(0.0, 1.0, 0.0), next_to_prob=0.0)
    result = process_snapshot(
        snapshot=snap, settings=PipelineSettings(policy=policy), client=AugmentationClient()
    )
    docs = next(s for s in result.samples if s.element_id == "e0001")
    # one clause forced; the only directional neighbor is the span to the left
    assert (
        "to the right of the logo" in docs.re.text
        or "under the section" in docs.re.text
        or "next to the logo" in docs.re.text
    )
    assert REType.RELATIVE in docs.re.re_types or REType.CONTEXTUAL in docs.re.re_types


def test_far_neighbors_beyond_limit_excluded():
    snap = make_snapshot(
        [
            make_element(id="e0001", tag="a", inner_text="Docs", ocr_text="Docs", x=1000, y=1900, w=60, h=20),
            make_element(id="e0002", tag="span", inner_text="far text", x=0, y=100, w=80, h=20),
        ],
        height=2400,
    )
    policy = SynthesisPolicy(seed=0, rel_weights=(0.0, 1.0, 0.0))
    result = process_snapshot(
        snapshot=snap, settings=PipelineSettings(policy=policy), client=AugmentationClient()
    )
    docs = next(s for s in result.samples if s.element_id == "e0001")
    assert "far text" not in docs.re.text


def test_between_clause_possible_when_flanked():
    elements = [
        make_element(id="e0002", tag="span", inner_text="Alpha", x=100, y=100, w=60, h=20),
        make_element(id="e0001", tag="a", inner_text="Docs", ocr_text="Docs", x=300, y=100, w=60, h=20),
        make_element(id="e0003", tag="span", inner_text="Omega", x=500, y=100, w=60, h=20),
    ]
    snap = make_snapshot(elements)
    policy_base = {"rel_weights": (0.0, 1.0, 0.0), "next_to_prob": 0.0}
    seen_between = False
    for seed in range(40):
        policy = SynthesisPolicy(seed=seed, **policy_base)
        result = process_snapshot(
            snapshot=snap, settings=PipelineSettings(policy=policy), client=AugmentationClient()
        )
        docs = next(s for s in result.samples if s.element_id == "e0001")
        if "between Alpha and Omega" in docs.re.text:
            seen_between = True
            break
    assert seen_between


def test_deterministic_across_runs_and_element_order():
    snap_doc = make_corpus(n=1, seed=41)[0]
    snap = parse_dict(snap_doc)
    a = process_snapshot(snap, settings(seed=7), AugmentationClient())
    b = process_snapshot(snap, settings(seed=7), AugmentationClient())
    assert a.record == b.record
    # element order must not matter: shuffle and re-run
    shuffled_doc = dict(snap_doc)
    shuffled_doc["elements"] = list(snap_doc["elements"])
    random.Random(3).shuffle(shuffled_doc["elements"])
    c = process_snapshot(parse_dict(shuffled_doc), settings(seed=7), AugmentationClient())
    assert {s["element_id"]: s for s in a.record["samples"]} == {
        s["element_id"]: s for s in c.record["samples"]
    }


def test_seed_changes_output():
    snap = parse_dict(make_corpus(n=1, seed=42)[0])
    a = process_snapshot(snap, settings(seed=1), AugmentationClient())
    b = process_snapshot(snap, settings(seed=2), AugmentationClient())
    assert a.record != b.record


def test_all_targets_are_bbox_centers():
    for doc in make_corpus(n=10, seed=5):
        snap = parse_dict(doc)
        result = process_snapshot(snap, settings(), AugmentationClient())
        for s in result.samples:
            element = snap.element_by_id(s.element_id)
            assert s.target == center_point(element.bbox)
            assert element.bbox.contains(s.target)
            assert s.bbox == element.bbox


def test_page_cap_respected():
    elements = [
        make_element(
            id=f"e{i:04d}",
            tag="a",
            inner_text=f"link {i}",
            ocr_text=f"link {i}",
            x=10,
            y=10 + i * 16,
            w=100,
            h=12,
        )
        for i in range(130)
    ]
    snap = make_snapshot(elements, height=u_height(elements))
    result = process_snapshot(snap, settings(), AugmentationClient())
    assert len(result.samples) == 100
    small = process_snapshot(
        snap, PipelineSettings(policy=SynthesisPolicy(seed=7), page_element_cap=25), AugmentationClient()
    )
    assert len(small.samples) == 25


def u_height(elements):
    return max(e.bbox.bottom for e in elements) + 50


def test_use_mllm_false_skips_client_entirely():
    snap = make_snapshot([make_element(id="e0001", tag="img", alt="Logo")])
    client = CountingClient()
    result = process_snapshot(snap, PipelineSettings(use_mllm=False), client)
    assert client.describe_calls == []
    assert len(result.samples) == 1  # alt still works as descriptor
