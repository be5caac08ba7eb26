"""Deterministic, splittable seeding.

Every randomized routine takes one integer seed and derives independent
child streams by hashing ``"{seed}:{label}"``; replaying with the same seed
reproduces every sample no matter how the call tree is arranged.
"""

from __future__ import annotations

import hashlib
import random


def child_seed(seed: int, label: str) -> int:
    digest = hashlib.sha256(f"{seed}:{label}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def child_rng(seed: int, label: str) -> random.Random:
    return random.Random(child_seed(seed, label))
