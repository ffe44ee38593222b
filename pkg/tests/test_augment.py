import json
from pathlib import Path

import numpy as np
import pytest
from PIL import Image

from groundkit.augment import (
    ARROW_LENGTH,
    AugmentationClient,
    AugmentationConfig,
    AugmentationError,
    AugmentationSkipped,
    DirectResult,
    DirectStyle,
    MARKER_COLOR,
    crop_ref_for,
    render_marker,
)
from groundkit.snapshot import BBox

GOLDEN = Path(__file__).parent / "golden"


def golden_text(name: str) -> str:
    return (GOLDEN / name).read_text(encoding="utf-8").rstrip("\n")


class CapturingTransport:
    """Fake transport: records every payload, replays scripted replies."""

    def __init__(self, replies):
        self.replies = list(replies)
        self.payloads = []

    def __call__(self, payload):
        self.payloads.append(json.loads(json.dumps(payload)))  # deep copy
        reply = self.replies.pop(0)
        if isinstance(reply, Exception):
            raise reply
        return reply


def live_client(transport, **cfg):
    config = AugmentationConfig(
        mock=False,
        model_describe="m-describe",
        model_condense="m-condense",
        model_direct="m-direct",
        rate_limit_rps=0.0,  # disable the bucket so sleeps are retry-only
        **cfg,
    )
    sleeps = []
    client = AugmentationClient(config=config, transport=transport, sleep=sleeps.append)
    return client, sleeps


# -- mock mode -------------------------------------------------------------------


def test_mock_describe_is_deterministic():
    client = AugmentationClient()
    assert client.config.mock
    out = client.describe_element("shots/s1.png#e0042", {"alt": "Search"})
    assert out == "mock-desc:e0042"
    assert client.describe_element("noextension#x", {}) == "mock-desc:x"


def test_mock_condense_takes_first_ten_words():
    client = AugmentationClient()
    text = "one two three four five six seven eight nine ten eleven twelve"
    assert client.condense_description(text) == "one two three four five six seven eight nine ten"
    assert client.condense_description("short phrase") == "short phrase"
    with pytest.raises(ValueError):
        client.condense_description("")


def test_mock_direct():
    client = AugmentationClient()
    out = client.direct_describe("shots/marked.png", DirectStyle.FREE)
    assert out == DirectResult(visible=True, description="mock-direct")


def test_config_from_env():
    env = {"AUG_ENDPOINT": "http://api", "AUG_MOCK": "0", "AUG_MODEL_DESCRIBE": "d"}
    config = AugmentationConfig.from_env(env)
    assert config.endpoint == "http://api"
    assert not config.mock
    assert config.model_describe == "d"
    assert AugmentationConfig.from_env({}).mock  # mock is the default


def test_live_mode_requires_endpoint_or_transport():
    with pytest.raises(AugmentationError):
        AugmentationClient(config=AugmentationConfig(mock=False))


def test_crop_ref_for():
    assert crop_ref_for("shots/s1.png", "e0007") == "shots/s1.png#e0007"


# -- payload fidelity ---------------------------------------------------------------


def test_describe_payload_matches_golden():
    transport = CapturingTransport([{"text": "a long description"}])
    client, _ = live_client(transport)
    out = client.describe_element("shots/s1.png#e0001", {"inner_text": "Search", "alt": "Search"})
    assert out == "a long description"
    payload = transport.payloads[0]
    assert payload["model"] == "m-describe"
    assert payload["messages"][0]["role"] == "user"
    assert payload["messages"][0]["image"] == "shots/s1.png#e0001"
    assert payload["messages"][0]["content"] == golden_text("describe_prompt.txt")


def test_condense_payload_matches_golden():
    transport = CapturingTransport([{"text": '"A blue rounded button."'}])
    client, _ = live_client(transport)
    out = client.condense_description("A long winded description of a blue rounded button.")
    assert out == "A blue rounded button."  # surrounding quotes stripped
    payload = transport.payloads[0]
    assert payload["model"] == "m-condense"
    assert "image" not in payload["messages"][0]
    assert payload["messages"][0]["content"] == golden_text("condense_prompt.txt")


def test_direct_payloads_match_golden():
    transport = CapturingTransport(
        [
            {"text": json.dumps({"visible": True, "description": "red button"})},
            {"text": json.dumps({"visible": True, "action": "subscribe"})},
        ]
    )
    client, _ = live_client(transport)
    free = client.direct_describe("m.png", DirectStyle.FREE)
    functional = client.direct_describe("m.png", DirectStyle.FUNCTIONAL)
    assert free == DirectResult(True, "red button")
    assert functional == DirectResult(True, "subscribe")
    assert transport.payloads[0]["messages"][0]["content"] == golden_text("direct_free_prompt.txt")
    assert transport.payloads[1]["messages"][0]["content"] == golden_text(
        "direct_functional_prompt.txt"
    )
    assert transport.payloads[0]["model"] == "m-direct"


def test_request_ids_increment():
    transport = CapturingTransport([{"text": "a"}, {"text": "b"}])
    client, _ = live_client(transport)
    client.describe_element("s#1", {})
    client.describe_element("s#2", {})
    ids = [p["request_id"] for p in transport.payloads]
    assert ids == [1, 2]


# -- retries ---------------------------------------------------------------------


def test_retry_then_success_with_backoff():
    transport = CapturingTransport(
        [ConnectionError("boom"), ConnectionError("boom"), {"text": "ok"}]
    )
    client, sleeps = live_client(transport)
    assert client.describe_element("s#1", {}) == "ok"
    assert len(transport.payloads) == 3
    assert sleeps == [0.5, 1.0]  # backoff_base * 2^(attempt-1)


def test_exhausted_retries_become_skip():
    transport = CapturingTransport([ConnectionError("x")] * 3)
    client, sleeps = live_client(transport)
    with pytest.raises(AugmentationSkipped, match="after 3 attempts"):
        client.describe_element("s#1", {})
    assert len(transport.payloads) == 3
    assert sleeps == [0.5, 1.0]


def test_empty_reply_skips_without_retry():
    transport = CapturingTransport([{"text": "   "}])
    client, sleeps = live_client(transport)
    with pytest.raises(AugmentationSkipped):
        client.describe_element("s#1", {})
    assert len(transport.payloads) == 1
    assert sleeps == []


def test_malformed_reply_skips():
    transport = CapturingTransport([{"wrong": "shape"}])
    client, _ = live_client(transport)
    with pytest.raises(AugmentationSkipped):
        client.describe_element("s#1", {})


def test_direct_invisible_passthrough():
    transport = CapturingTransport([{"text": json.dumps({"visible": False})}])
    client, _ = live_client(transport)
    assert client.direct_describe("m.png", DirectStyle.FREE) == DirectResult(False, "")


def test_direct_prose_reply_skips():
    transport = CapturingTransport([{"text": "Sure! The element is a red button."}])
    client, _ = live_client(transport)
    with pytest.raises(AugmentationSkipped, match="not JSON"):
        client.direct_describe("m.png", DirectStyle.FREE)


def test_direct_missing_key_skips():
    transport = CapturingTransport([{"text": json.dumps({"visible": True})}])
    client, _ = live_client(transport)
    with pytest.raises(AugmentationSkipped, match="description"):
        client.direct_describe("m.png", DirectStyle.FREE)
    transport = CapturingTransport([{"text": json.dumps({"visible": "yes"})}])
    client, _ = live_client(transport)
    with pytest.raises(AugmentationSkipped, match="visible"):
        client.direct_describe("m.png", DirectStyle.FREE)


def test_direct_result_validation():
    with pytest.raises(ValueError):
        DirectResult(visible=True, description="")
    assert DirectResult(visible=False, description="").description == ""


def test_rate_limit_spaces_requests():
    transport = CapturingTransport([{"text": "a"}, {"text": "b"}])
    now = [0.0]
    waits = []

    def clock():
        return now[0]

    def sleep(dt):
        waits.append(dt)
        now[0] += dt

    config = AugmentationConfig(mock=False, rate_limit_rps=1.0, model_describe="m")
    client = AugmentationClient(config=config, transport=transport, sleep=sleep, clock=clock)
    client.describe_element("s#1", {})
    client.describe_element("s#2", {})
    # bucket starts full with 1 token; the second call must wait about 1s
    assert waits and sum(waits) == pytest.approx(1.0, abs=1e-6)


# -- marker rendering ---------------------------------------------------------------


def gray_png(path: Path, size=(200, 150)) -> str:
    Image.new("RGB", size, (180, 180, 180)).save(path)
    return str(path)


def test_render_marker_draws_only_red_near_bbox(tmp_path):
    src = gray_png(tmp_path / "shot.png")
    bbox = BBox(50, 40, 60, 30)
    out = render_marker(src, bbox)
    assert out == str(tmp_path / "shot.marked.png")
    before = np.asarray(Image.open(src).convert("RGB")).astype(int)
    after = np.asarray(Image.open(out).convert("RGB")).astype(int)
    changed = (before != after).any(axis=2)
    assert changed.any()
    # every painted pixel is pure marker red
    assert (after[changed] == np.array(MARKER_COLOR)).all()
    # all paint stays within the bbox plus the arrow's maximum reach
    ys, xs = np.nonzero(changed)
    reach = ARROW_LENGTH + 8
    assert xs.min() >= bbox.x - reach and xs.max() <= bbox.right + reach
    assert ys.min() >= bbox.y - reach and ys.max() <= bbox.bottom + reach
    # the box outline itself is painted
    assert changed[bbox.y, bbox.x]
    assert changed[bbox.bottom - 1, bbox.right - 1]


def test_render_marker_arrow_reaches_outside_box(tmp_path):
    src = gray_png(tmp_path / "shot.png")
    bbox = BBox(50, 40, 60, 30)
    out = render_marker(src, bbox)
    after = np.asarray(Image.open(out).convert("RGB"))
    red = (after == np.array(MARKER_COLOR)).all(axis=2)
    outside = red.copy()
    outside[bbox.y : bbox.bottom, bbox.x : bbox.right] = False
    assert outside.any()  # some arrow ink lands outside the box


def test_render_marker_deterministic(tmp_path):
    src = gray_png(tmp_path / "shot.png")
    a = render_marker(src, BBox(10, 10, 40, 20), out_ref=str(tmp_path / "a.png"))
    b = render_marker(src, BBox(10, 10, 40, 20), out_ref=str(tmp_path / "b.png"))
    assert Path(a).read_bytes() == Path(b).read_bytes()


def test_render_marker_rejects_out_of_canvas(tmp_path):
    src = gray_png(tmp_path / "shot.png", size=(100, 100))
    with pytest.raises(ValueError, match="bbox outside canvas"):
        render_marker(src, BBox(90, 90, 20, 20))
    with pytest.raises(ValueError, match="bbox outside canvas"):
        render_marker(src, BBox(-1, 0, 10, 10))


def test_render_marker_rejects_tiny_targets(tmp_path):
    src = gray_png(tmp_path / "shot.png", size=(100, 100))
    with pytest.raises(ValueError, match="too small"):
        render_marker(src, BBox(10, 10, 1, 30))
    tiny = gray_png(tmp_path / "tiny.png", size=(6, 6))
    with pytest.raises(ValueError, match="too small"):
        render_marker(tiny, BBox(0, 0, 4, 4))
