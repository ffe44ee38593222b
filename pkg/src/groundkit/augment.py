"""Client for the model-assisted description paths.

Three remote calls: describe an element crop, condense a long description,
and describe a marker-annotated screenshot. A deterministic mock keeps the
whole pipeline offline for tests; the real transport is one HTTP JSON
endpoint with retries, exponential backoff, and a token-bucket rate limit.
"""

from __future__ import annotations

import itertools
import json
import os
import threading
import time
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Mapping, Optional

from PIL import Image, ImageDraw

from .prompts import (
    CONDENSE_DESCRIPTION_PROMPT,
    DESCRIBE_ELEMENT_PROMPT,
    DIRECT_FREE_PROMPT,
    DIRECT_FUNCTIONAL_PROMPT,
)
from .snapshot import BBox

__all__ = [
    "AugmentationSkipped",
    "AugmentationError",
    "RequestKind",
    "DirectStyle",
    "DirectResult",
    "AugmentationConfig",
    "AugmentationClient",
    "render_marker",
    "crop_ref_for",
]

MARKER_COLOR = (255, 0, 0)
MARKER_WIDTH = 3
ARROW_LENGTH = 40


class AugmentationSkipped(Exception):
    """Signal: this element drops out of the model path (not a failure)."""


class AugmentationError(Exception):
    """Hard client error: bad configuration or unusable endpoint."""


class RequestKind(str, Enum):
    DESCRIBE_CROP = "describe_crop"
    CONDENSE = "condense"
    DIRECT_FREE = "direct_free"
    DIRECT_FUNCTIONAL = "direct_functional"


class DirectStyle(str, Enum):
    FREE = "free"
    FUNCTIONAL = "functional"


@dataclass(frozen=True)
class DirectResult:
    visible: bool
    description: str

    def __post_init__(self) -> None:
        if self.visible and not self.description:
            raise ValueError("visible result requires a description")


@dataclass(frozen=True)
class AugmentationConfig:
    endpoint: str = ""
    model_describe: str = ""
    model_condense: str = ""
    model_direct: str = ""
    mock: bool = True
    rate_limit_rps: float = 4.0
    max_attempts: int = 3
    backoff_base: float = 0.5
    request_timeout: float = 30.0

    @classmethod
    def from_env(cls, env: Optional[Mapping[str, str]] = None) -> "AugmentationConfig":
        env = os.environ if env is None else env
        return cls(
            endpoint=env.get("AUG_ENDPOINT", ""),
            model_describe=env.get("AUG_MODEL_DESCRIBE", ""),
            model_condense=env.get("AUG_MODEL_CONDENSE", ""),
            model_direct=env.get("AUG_MODEL_DIRECT", ""),
            mock=env.get("AUG_MOCK", "1") == "1",
        )


def crop_ref_for(screenshot_ref: str, element_id: str) -> str:
    """Reference naming an element's bbox crop of a screenshot."""
    return f"{screenshot_ref}#{element_id}"


def _element_id_from_crop_ref(crop_ref: str) -> str:
    _, _, fragment = crop_ref.rpartition("#")
    return fragment or crop_ref


class _TokenBucket:
    def __init__(self, rate: float, clock: Callable[[], float], sleep: Callable[[float], None]):
        self._rate = rate
        self._clock = clock
        self._sleep = sleep
        self._tokens = rate
        self._last = clock()
        self._lock = threading.Lock()

    def acquire(self) -> None:
        if self._rate <= 0:
            return
        while True:
            with self._lock:
                now = self._clock()
                self._tokens = min(self._rate, self._tokens + (now - self._last) * self._rate)
                self._last = now
                if self._tokens >= 1.0:
                    self._tokens -= 1.0
                    return
                wait = (1.0 - self._tokens) / self._rate
            self._sleep(wait)


class AugmentationClient:
    """Shareable across worker threads; one request in flight per caller."""

    def __init__(
        self,
        config: Optional[AugmentationConfig] = None,
        transport: Optional[Callable[[dict], dict]] = None,
        sleep: Callable[[float], None] = time.sleep,
        clock: Callable[[], float] = time.monotonic,
    ):
        self.config = config or AugmentationConfig()
        self._transport = transport
        self._sleep = sleep
        self._bucket = _TokenBucket(self.config.rate_limit_rps, clock, sleep)
        self._correlation = itertools.count(1)
        self._correlation_lock = threading.Lock()
        if not self.config.mock and transport is None and not self.config.endpoint:
            raise AugmentationError("no endpoint configured and mock mode disabled")

    # -- transport ---------------------------------------------------------

    def _next_correlation_id(self) -> int:
        with self._correlation_lock:
            return next(self._correlation)

    def _http_transport(self, payload: dict) -> dict:
        import requests

        resp = requests.post(
            self.config.endpoint, json=payload, timeout=self.config.request_timeout
        )
        resp.raise_for_status()
        return resp.json()

    def _call(self, model: str, content: str, image_ref: Optional[str] = None) -> str:
        message = {"role": "user", "content": content}
        if image_ref is not None:
            message["image"] = image_ref
        payload = {
            "model": model,
            "messages": [message],
            "request_id": self._next_correlation_id(),
        }
        transport = self._transport or self._http_transport
        last_error: Optional[Exception] = None
        for attempt in range(self.config.max_attempts):
            if attempt:
                self._sleep(self.config.backoff_base * (2 ** (attempt - 1)))
            self._bucket.acquire()
            try:
                reply = transport(payload)
            except Exception as exc:  # transport failure: retry
                last_error = exc
                continue
            text = reply.get("text") if isinstance(reply, dict) else None
            if not isinstance(text, str) or not text.strip():
                raise AugmentationSkipped("empty or malformed reply")
            return text
        raise AugmentationSkipped(f"transport failed after {self.config.max_attempts} attempts: {last_error}")

    # -- operations --------------------------------------------------------

    def describe_element(self, crop_ref: str, attributes: Mapping[str, str]) -> str:
        prompt = DESCRIBE_ELEMENT_PROMPT.format(
            attributes=json.dumps(dict(attributes), sort_keys=True, ensure_ascii=False)
        )
        if self.config.mock:
            return f"mock-desc:{_element_id_from_crop_ref(crop_ref)}"
        return self._call(self.config.model_describe, prompt, image_ref=crop_ref)

    def condense_description(self, long_desc: str) -> str:
        if not long_desc:
            raise ValueError("description must be non-empty")
        if self.config.mock:
            return " ".join(long_desc.split()[:10])
        prompt = CONDENSE_DESCRIPTION_PROMPT.format(description=long_desc)
        reply = self._call(self.config.model_condense, prompt).strip().strip('"').strip()
        if not reply:
            raise AugmentationSkipped("condense produced an empty description")
        return reply

    def direct_describe(self, annotated_ref: str, style: DirectStyle) -> DirectResult:
        if self.config.mock:
            return DirectResult(visible=True, description="mock-direct")
        style = DirectStyle(style)
        prompt = DIRECT_FREE_PROMPT if style is DirectStyle.FREE else DIRECT_FUNCTIONAL_PROMPT
        reply = self._call(self.config.model_direct, prompt, image_ref=annotated_ref)
        try:
            data = json.loads(reply)
        except json.JSONDecodeError:
            raise AugmentationSkipped("direct reply is not JSON") from None
        if not isinstance(data, dict) or not isinstance(data.get("visible"), bool):
            raise AugmentationSkipped("direct reply missing boolean visible field")
        if not data["visible"]:
            return DirectResult(visible=False, description="")
        key = "description" if style is DirectStyle.FREE else "action"
        text = data.get(key)
        if not isinstance(text, str) or not text.strip():
            raise AugmentationSkipped(f"direct reply missing {key}")
        return DirectResult(visible=True, description=text.strip())


def _arrow_points(bbox: BBox, size: tuple) -> tuple:
    """Tail and tip of the marker arrow: tip on a bbox edge midpoint, tail
    45 degrees outward on whichever side has the most clearance."""
    width, height = size
    clearances = {
        "top": bbox.y,
        "bottom": height - bbox.bottom,
        "left": bbox.x,
        "right": width - bbox.right,
    }
    side = max(clearances, key=lambda s: (clearances[s], s))
    reach = max(4, min(ARROW_LENGTH, clearances[side]))
    if side == "top":
        tip = (bbox.x + bbox.w // 2, bbox.y)
        tail = (tip[0] + reach, tip[1] - reach)
    elif side == "bottom":
        tip = (bbox.x + bbox.w // 2, bbox.bottom)
        tail = (tip[0] + reach, tip[1] + reach)
    elif side == "left":
        tip = (bbox.x, bbox.y + bbox.h // 2)
        tail = (tip[0] - reach, tip[1] - reach)
    else:
        tip = (bbox.right, bbox.y + bbox.h // 2)
        tail = (tip[0] + reach, tip[1] - reach)
    clamp = lambda p: (min(max(p[0], 0), width - 1), min(max(p[1], 0), height - 1))
    return clamp(tail), clamp(tip)


def render_marker(screenshot_ref: str, bbox: BBox, out_ref: Optional[str] = None) -> str:
    """Draw a red box around bbox plus a red arrow pointing at it; returns
    the path of the new annotated image."""
    with Image.open(screenshot_ref) as img:
        image = img.convert("RGB")
    width, height = image.size
    if bbox.x < 0 or bbox.y < 0 or bbox.right > width or bbox.bottom > height:
        raise ValueError("bbox outside canvas")
    if bbox.w < 2 or bbox.h < 2 or width < 8 or height < 8:
        raise ValueError("bbox too small to annotate")
    draw = ImageDraw.Draw(image)
    draw.rectangle(
        (bbox.x, bbox.y, bbox.right - 1, bbox.bottom - 1),
        outline=MARKER_COLOR,
        width=MARKER_WIDTH,
    )
    tail, tip = _arrow_points(bbox, (width, height))
    draw.line((tail, tip), fill=MARKER_COLOR, width=MARKER_WIDTH)
    # two short strokes for the arrow head, perpendicular-ish to the shaft
    dx = 1 if tail[0] >= tip[0] else -1
    dy = 1 if tail[1] >= tip[1] else -1
    head = max(3, min(8, abs(tail[0] - tip[0])))
    draw.line((tip, (tip[0] + dx * head, tip[1])), fill=MARKER_COLOR, width=MARKER_WIDTH)
    draw.line((tip, (tip[0], tip[1] + dy * head)), fill=MARKER_COLOR, width=MARKER_WIDTH)
    if out_ref is None:
        stem, dot, ext = screenshot_ref.rpartition(".")
        out_ref = f"{stem}.marked.{ext}" if dot else f"{screenshot_ref}.marked"
    image.save(out_ref)
    return out_ref
