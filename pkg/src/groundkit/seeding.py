"""Deterministic RNG derivation.

Every random decision in the pipeline flows from one 64-bit seed through
stable string keys (snapshot id, element id, stage name), so work can be
sharded across workers in any order without changing a single output byte.
"""

from __future__ import annotations

import hashlib
import random

__all__ = ["derive_rng", "stable_hash"]


def stable_hash(seed: int, *keys: str) -> int:
    """64-bit hash of seed plus string keys; stable across runs and platforms."""
    h = hashlib.blake2b(digest_size=8)
    h.update(str(seed).encode("utf-8"))
    for key in keys:
        h.update(b"\x1f")
        h.update(key.encode("utf-8"))
    return int.from_bytes(h.digest(), "big")


def derive_rng(seed: int, *keys: str) -> random.Random:
    return random.Random(stable_hash(seed, *keys))
