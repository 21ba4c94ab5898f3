"""Combining two rewriting systems for ``G`` into one for ``G x| G``.

Letters ``0..dA-1`` form the left alphabet ``A`` and ``dA..dA+dB-1`` the right
alphabet ``B``.  Besides the two rule sets, the combined system has one
commutation rule ``ba -> wb`` per pair of letters, where ``w`` is a word over
``A`` for the conjugate ``b a b^-1``.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..perm import Permutation, StabChain
from ..words import BASE
from .system import RewriteSystem, Rule, from_array, to_array


def shift_word(w: str, offset: int) -> str:
    return "".join(chr(ord(c) + offset) for c in w)


class SemidirectSystem(RewriteSystem):
    """Rule set ``R_A u R_B u {ba -> w_ab b}``.

    Commutation rules lengthen words, so the system is not shortlex-decreasing;
    rewriting still terminates because letters of ``B`` only ever move right.
    Reduction moves whole runs: a run ``s`` of ``A`` letters that follows the
    ``B`` part ``v`` is pushed across ``v`` one ``B`` letter at a time, reducing
    with ``R_A`` after each step.  Every intermediate word is obtained by rule
    applications, and the result has the form ``uv`` with ``u`` reduced over
    ``A`` and ``v`` reduced over ``B``.
    """

    def __init__(self, rs_a: RewriteSystem, rs_b: RewriteSystem, conj: Sequence[Sequence[str]]):
        self.rs_a = rs_a
        self.rs_b = rs_b
        self.d_a = rs_a.d
        self.d_b = rs_b.d
        self.conj = [list(row) for row in conj]   # conj[b][a] over A
        rules = list(rs_a.rules)
        rules += [Rule(shift_word(r.lhs, self.d_a), shift_word(r.rhs, self.d_a)) for r in rs_b]
        rules += self.commutation_rules()
        super().__init__(rules, self.d_a + self.d_b, k=rs_a.k,
                         strict_shorter=False, shortlex=False)
        self._conj_arrays = [[to_array(w) for w in row] for row in self.conj]

    def commutation_rules(self) -> list[Rule]:
        out = []
        for b in range(self.d_b):
            bl = chr(BASE + self.d_a + b)
            for a in range(self.d_a):
                out.append(Rule(bl + chr(BASE + a), self.conj[b][a] + bl))
        return out

    def split_reduced(self, w: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Reduce ``w`` and return its ``A`` part and its (unshifted) ``B`` part."""
        dA = self.d_a
        u = np.zeros(0, dtype=np.uint8)
        v = np.zeros(0, dtype=np.uint8)
        if w.size == 0:
            return u, v
        is_b = w >= dA
        cuts = np.flatnonzero(np.diff(is_b.astype(np.int8))) + 1
        for seg in np.split(w, cuts):
            if seg[0] >= dA:
                v = self.rs_b.reduce_array(np.concatenate([v, seg - dA]))
            else:
                s = seg
                for b in v[::-1].tolist():
                    row = self._conj_arrays[b]
                    s = self.rs_a.reduce_array(np.concatenate([row[a] for a in s.tolist()])
                                               if s.size else s)
                u = self.rs_a.reduce_array(np.concatenate([u, s]))
        return u, v

    def reduce_array(self, w: np.ndarray) -> np.ndarray:
        u, v = self.split_reduced(w)
        return np.concatenate([u, (v + self.d_a).astype(np.uint8)])

    def reduce(self, w: str) -> str:
        if not w:
            return w
        return from_array(self.reduce_array(to_array(w)))


def conjugation_words(gens_a: Sequence[Permutation], gens_b: Sequence[Permutation],
                      rs_a: RewriteSystem, chain_a: StabChain) -> list[list[str]]:
    """``table[b][a]``: reduced word over ``A`` evaluating to ``b a b^-1``."""
    table = []
    for gb in gens_b:
        gbi = gb.inverse()
        table.append([rs_a.reduce(chain_a.factorize(gb * ga * gbi)) for ga in gens_a])
    return table


def combine_semidirect(rs_a: RewriteSystem, rs_b: RewriteSystem,
                       gens_a: Sequence[Permutation], gens_b: Sequence[Permutation],
                       chain_a: StabChain | None = None) -> SemidirectSystem:
    if chain_a is None:
        chain_a = StabChain(gens_a)
    return SemidirectSystem(rs_a, rs_b, conjugation_words(gens_a, gens_b, rs_a, chain_a))


def split_semidirect(rs: RewriteSystem, d_a: int) -> SemidirectSystem:
    """Recover the three parts of a combined rule list given the size of ``A``."""
    d_b = rs.d - d_a
    left, right = [], []
    conj = [[None] * d_a for _ in range(d_b)]
    for r in rs.rules:
        letters = {ord(c) - BASE for c in r.lhs}
        if max(letters) < d_a:
            left.append(r)
        elif min(letters) >= d_a:
            right.append(Rule(shift_word(r.lhs, -d_a), shift_word(r.rhs, -d_a)))
        else:
            b, a = ord(r.lhs[0]) - BASE - d_a, ord(r.lhs[1]) - BASE
            if len(r.lhs) != 2 or not r.rhs.endswith(r.lhs[0]):
                raise ValueError(f"rule {r} is not a commutation rule")
            conj[b][a] = r.rhs[:-1]
    if any(w is None for row in conj for w in row):
        raise ValueError("missing commutation rules")
    return SemidirectSystem(RewriteSystem(left, d_a, k=rs.k),
                            RewriteSystem(right, d_b, k=rs.k), conj)
