"""Words over a finite alphabet.

A word is a plain ``str``; letter ``i`` of the alphabet is ``chr(ord('a') + i)``.
Python's string comparison then matches comparison of letter indices, so the
shortlex key of a word is just ``(len(w), w)``.  Text files can only carry
alphabets of size at most 26 (letters ``a``..``z``); in memory the alphabet may
be larger.  The empty word is ``""`` and is written ``-`` in files.
"""

from __future__ import annotations

import random
from typing import Iterable, Sequence

EMPTY_TOKEN = "-"
BASE = ord("a")
MAX_TEXT_ALPHABET = 26


def letter(i: int) -> str:
    return chr(BASE + i)


def index(c: str) -> int:
    return ord(c) - BASE


def alphabet(d: int, offset: int = 0) -> str:
    return "".join(letter(offset + i) for i in range(d))


def from_indices(indices: Iterable[int]) -> str:
    return "".join(chr(BASE + i) for i in indices)


def to_indices(w: str) -> list[int]:
    return [ord(c) - BASE for c in w]


def shortlex_key(w: str):
    return (len(w), w)


def shortlex_cmp(u: str, v: str) -> int:
    """Return -1, 0 or 1 as ``u`` is below, equal to or above ``v`` in shortlex."""
    ku, kv = (len(u), u), (len(v), v)
    return (ku > kv) - (ku < kv)


def shortlex_less(u: str, v: str) -> bool:
    return (len(u), u) < (len(v), v)


def random_word(d: int, length: int, rng: random.Random) -> str:
    return "".join(chr(BASE + rng.randrange(d)) for _ in range(length))


def letters_used(w: str) -> set[str]:
    return set(w)


def format_word(w: str) -> str:
    """Serialize a word, mapping the empty word to ``-``."""
    if w and max(w) > letter(MAX_TEXT_ALPHABET - 1):
        raise ValueError("words over more than 26 letters have no text form")
    return w if w else EMPTY_TOKEN


def parse_word(token: str, d: int | None = None) -> str:
    token = token.strip()
    if token == EMPTY_TOKEN:
        return ""
    for c in token:
        if not "a" <= c <= "z":
            raise ValueError(f"bad letter {c!r} in word {token!r}")
        if d is not None and index(c) >= d:
            raise ValueError(f"letter {c!r} outside alphabet of size {d}")
    return token


def power(w: str, k: int) -> str:
    return w * k


def inverse_free_inverse(w: str, orders: Sequence[int]) -> str:
    """Word for the inverse of ``w`` using ``x^-1 = x^(order - 1)``."""
    return "".join(c * (orders[index(c)] - 1) for c in reversed(w))
