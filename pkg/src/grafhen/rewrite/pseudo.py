"""Empirical boundedness test for (possibly incomplete) rewriting systems."""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .system import RewriteSystem


@dataclass(frozen=True)
class PseudoBoundedResult:
    passed: bool
    avg_len: float
    concat_len: int


def pseudo_bounded_test(rs: RewriteSystem, rng: random.Random, num_words: int = 10,
                        word_len: int = 10_000, factor: float = 3) -> PseudoBoundedResult:
    """Reduce ``num_words`` random words of length ``word_len``; with ``l`` their
    mean reduced length, reduce the concatenation of the reduced words and pass
    if the result is shorter than ``factor * max(l, 1)``.
    """
    gen = np.random.default_rng(rng.getrandbits(64))
    reduced = []
    for _ in range(num_words):
        w = gen.integers(0, rs.d, size=word_len, dtype=np.uint8)
        reduced.append(rs.reduce_array(w))
    avg = float(np.mean([r.size for r in reduced])) if reduced else 0.0
    concat = rs.reduce_array(np.concatenate(reduced) if reduced else np.zeros(0, np.uint8))
    return PseudoBoundedResult(concat.size < factor * max(avg, 1.0), avg, int(concat.size))
