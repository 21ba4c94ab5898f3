"""Automorphisms stored as lists of words, one per generator."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .perm import Permutation, StabChain
from .words import BASE, format_word, letter, parse_word


@dataclass(frozen=True)
class AutRep:
    """``words[i]`` is a word for the image of generator ``i``."""

    words: tuple

    def __init__(self, words: Sequence[str]):
        object.__setattr__(self, "words", tuple(words))

    @classmethod
    def identity(cls, d: int) -> "AutRep":
        return cls([letter(i) for i in range(d)])

    @property
    def d(self) -> int:
        return len(self.words)

    def substitute(self, w: str) -> str:
        """Image of the word ``w``: every letter replaced by its word."""
        return "".join(self.words[ord(c) - BASE] for c in w)

    def format(self) -> str:
        return "".join(format_word(w) + "\n" for w in self.words)

    @classmethod
    def parse(cls, text: str, d: int | None = None) -> "AutRep":
        return cls([parse_word(l, d) for l in text.splitlines() if l.strip()])


def aut_compose(alpha: AutRep, beta: AutRep, rs=None) -> AutRep:
    """Substitute ``alpha`` into ``beta``'s words, reducing with ``rs`` if given.

    If ``beta`` sends ``x_j`` to ``w_j(x)`` and ``alpha`` sends ``x_i`` to
    ``v_i``, the result sends ``x_j`` to ``w_j(v_1, ..., v_d)``, which is
    ``alpha`` applied to ``beta``'s image of ``x_j``.
    """
    if alpha.d != beta.d:
        raise ValueError("automorphisms over different alphabets")
    words = [alpha.substitute(w) for w in beta.words]
    if rs is not None:
        words = [rs.reduce(w) for w in words]
    return AutRep(words)


def inner_aut(key, g: Permutation, rules=None) -> AutRep:
    """Conjugation ``x -> g x g^-1`` (``g`` applied last) as words.

    ``key`` is a secret key or a plain list of generators.  With this
    convention ``inner(g)`` after ``inner(h)`` is ``inner(g * h)``.
    """
    if hasattr(key, "left_gens"):
        gens, chain = key.left_gens, key.chain
        rules = rules if rules is not None else key._rules_left()
    else:
        gens = list(key)
        chain = StabChain(gens)
    words = [chain.factorize(x.conjugate(g)) for x in gens]
    if rules is not None:
        words = [rules.reduce(w) for w in words]
    return AutRep(words)
