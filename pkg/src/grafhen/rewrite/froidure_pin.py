"""Froidure-Pin enumeration of a permutation group by shortlex-least words.

Words are processed one length at a time.  For a reduced word ``w = b s`` and a
letter ``a``, the word ``wa`` can only be a new reduced word or the left hand
side of a new rule if ``sa`` is itself reduced; all other extensions contain an
earlier left hand side and are skipped.  Each length is handled with vectorized
numpy operations: evaluate all surviving extensions at once, look their values
up among the elements already known, and split them into new elements and
rules.

A filter may reject rules; a rejected left hand side then counts as a reduced
word for the rest of the enumeration, so the element it evaluates to is known
under more than one word.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..errors import MemoryBudgetExceeded
from ..perm import Permutation
from .pseudo import pseudo_bounded_test
from .system import RewriteSystem, Rule

FILTERS = ("none", "admissible", "strict_shorter", "both")
STOPS = ("complete", "pseudo_bounded", "max_rules")


@dataclass
class FPOptions:
    filter: str = "none"
    k: int = 5
    stop: str = "complete"
    max_rules: int | None = None
    check_floor: int = 50_000
    check_every: int = 10_000
    pb_words: int = 10
    pb_len: int = 10_000
    pb_factor: float = 3
    seed: int = 0
    memory_cap: int = 16 << 30
    max_length: int | None = None

    def __post_init__(self):
        if self.filter not in FILTERS:
            raise ValueError(f"unknown filter {self.filter!r}")
        if self.stop not in STOPS:
            raise ValueError(f"unknown stop criterion {self.stop!r}")
        if self.stop == "max_rules" and not self.max_rules:
            raise ValueError("stop=max_rules needs max_rules")


@dataclass
class FPResult:
    system: RewriteSystem
    words: list              # reduced words found, in shortlex order
    element_count: int       # distinct group elements reached
    complete: bool
    stop_reason: str
    checks: list = field(default_factory=list)  # (rule_count, PseudoBoundedResult)

    @property
    def rules(self) -> list[Rule]:
        return self.system.rules


def _strings(mat: np.ndarray) -> list[str]:
    if mat.shape[0] == 0:
        return []
    width = mat.shape[1]
    if width == 0:
        return [""] * mat.shape[0]
    s = (mat + 97).astype(np.uint8).tobytes().decode("latin-1")
    return [s[i:i + width] for i in range(0, len(s), width)]


class _Keys:
    """Sorted lookup table from permutation arrays to node ids."""

    def __init__(self, n: int):
        self.n = n
        self.packed = n <= 15
        if self.packed:
            self.weights = n ** np.arange(n, dtype=np.int64)
            self.keys = np.zeros(0, dtype=np.int64)
        else:
            self.keys = np.zeros(0, dtype=f"V{n}")
        self.ids = np.zeros(0, dtype=np.int64)

    def key(self, perms: np.ndarray) -> np.ndarray:
        if self.packed:
            return perms.astype(np.int64) @ self.weights
        return np.ascontiguousarray(perms.astype(np.uint8)).view(f"V{self.n}").ravel()

    def find(self, keys: np.ndarray) -> np.ndarray:
        if self.keys.size == 0:
            return np.full(keys.size, -1, dtype=np.int64)
        pos = np.searchsorted(self.keys, keys)
        pos = np.minimum(pos, self.keys.size - 1)
        hit = self.keys[pos] == keys
        return np.where(hit, self.ids[pos], -1)

    def add(self, keys: np.ndarray, ids: np.ndarray) -> None:
        allk = np.concatenate([self.keys, keys])
        alli = np.concatenate([self.ids, ids])
        order = np.argsort(allk, kind="stable")
        self.keys = allk[order]
        self.ids = alli[order]


def froidure_pin(gens: Sequence[Permutation], options: FPOptions | None = None,
                 **kwargs) -> FPResult:
    """Enumerate ``<gens>`` by shortlex-least words and collect the rules.

    With the default options this returns the unique reduced confluent
    shortlex rewriting system for the generators.
    """
    opts = options or FPOptions(**kwargs)
    d = len(gens)
    n = max([g.degree for g in gens] + [1])
    if n > 255:
        raise ValueError("degree above 255 is not supported")
    G = np.array([g.as_tuple(n) for g in gens], dtype=np.uint8).reshape(d, n)
    keys = _Keys(n)
    check_admissible = opts.filter in ("admissible", "both")
    check_strict = opts.filter in ("strict_shorter", "both")
    full_mask = (1 << d) - 1

    # per-node data, grown level by level
    ident = np.arange(n, dtype=np.uint8)[None, :]
    words = [""]
    node_level = [0]
    first = np.zeros(1, dtype=np.int64)
    last = np.zeros(1, dtype=np.int64)
    mask = np.zeros(1, dtype=np.int64)
    suffix = np.zeros(1, dtype=np.int64)
    child = np.full((1, d), -1, dtype=np.int64)
    keys.add(keys.key(ident), np.zeros(1, dtype=np.int64))
    element_count = 1

    level_ids = np.zeros(1, dtype=np.int64)
    level_perms = ident
    level_words = np.zeros((1, 0), dtype=np.uint8)
    L = 0

    rule_lhs: list[str] = []
    rule_rhs: list[str] = []
    checks = []
    next_check = opts.check_floor
    stop_reason = "complete"
    complete = True
    pb_rng = random.Random(opts.seed)
    bytes_used = 0

    while level_ids.size:
        if opts.max_length is not None and L >= opts.max_length:
            complete = False
            stop_reason = "max_length"
            break
        cnt = level_ids.size
        # rough peak of the candidate arrays built below
        if bytes_used + cnt * d * (n + L + 160) > opts.memory_cap:
            raise MemoryBudgetExceeded(
                f"level {L + 1} needs more than {opts.memory_cap} bytes")
        u = np.repeat(level_ids, d)
        a = np.tile(np.arange(d, dtype=np.int64), cnt)
        row = np.repeat(np.arange(cnt), d)
        if L == 0:
            valid = np.ones(u.size, dtype=bool)
        else:
            valid = child[suffix[u], a] >= 0
        u, a, row = u[valid], a[valid], row[valid]
        if u.size == 0:
            break
        perms = G[a[:, None], level_perms[row]]
        k = keys.key(perms)
        found = keys.find(k)
        fresh = found < 0
        # first occurrence of each unseen value in lex order becomes canonical
        fk = k[fresh]
        uniq, first_idx, inverse = np.unique(fk, return_index=True, return_inverse=True)
        fresh_pos = np.flatnonzero(fresh)
        canon_pos = fresh_pos[first_idx]          # candidate index of each new element
        is_canon = np.zeros(u.size, dtype=bool)
        is_canon[canon_pos] = True
        # provisional ids for new canonical elements are assigned below; rules at
        # this level point at them through the candidate index
        target_cand = np.full(u.size, -1, dtype=np.int64)
        target_cand[fresh_pos] = canon_pos[inverse]
        is_rule = ~is_canon

        lhs_words = np.concatenate([level_words[row], a[:, None].astype(np.uint8)], axis=1)
        lhs_first = first[u] if L else a
        lhs_mask = mask[u] | (1 << a)

        accept = is_rule.copy()
        if check_strict or check_admissible:
            same_level = is_rule & (found < 0)
            if check_strict:
                accept &= ~same_level
            if check_admissible:
                # rhs data: existing node or a new canonical candidate
                old = found >= 0
                tc = target_cand
                r_len = np.where(old, np.array(node_level, dtype=np.int64)[np.maximum(found, 0)],
                                 L + 1)
                r_first = np.where(old, first[np.maximum(found, 0)], lhs_first[np.maximum(tc, 0)])
                r_last = np.where(old, last[np.maximum(found, 0)], a[np.maximum(tc, 0)])
                r_mask = np.where(old, mask[np.maximum(found, 0)], lhs_mask[np.maximum(tc, 0)])
                ok = ((lhs_mask == full_mask) & (r_mask == full_mask)
                      & (L + 1 >= opts.k) & (r_len >= opts.k)
                      & (lhs_first != r_first) & (a != r_last))
                accept &= ok
        new_node = ~accept  # canonical elements plus rejected rules

        # new node ids in candidate order (lex order of words)
        new_pos = np.flatnonzero(new_node)
        base = len(words)
        new_ids = np.arange(base, base + new_pos.size, dtype=np.int64)
        cand_to_node = np.full(u.size, -1, dtype=np.int64)
        cand_to_node[new_pos] = new_ids
        child_ext = np.full((new_pos.size, d), -1, dtype=np.int64)
        child = np.concatenate([child, child_ext])
        child[u[new_pos], a[new_pos]] = new_ids
        if L == 0:
            suf = np.zeros(new_pos.size, dtype=np.int64)
        else:
            suf = child[suffix[u[new_pos]], a[new_pos]]
        suffix = np.concatenate([suffix, suf])
        first = np.concatenate([first, lhs_first[new_pos]])
        last = np.concatenate([last, a[new_pos]])
        mask = np.concatenate([mask, lhs_mask[new_pos]])
        new_words = lhs_words[new_pos]
        words.extend(_strings(new_words))
        node_level.extend([L + 1] * new_pos.size)
        keys.add(k[canon_pos], cand_to_node[canon_pos])
        element_count += canon_pos.size

        # rules, in lex order of their left hand sides
        acc_pos = np.flatnonzero(accept)
        if acc_pos.size:
            tgt = np.where(found[acc_pos] >= 0, found[acc_pos],
                           cand_to_node[np.maximum(target_cand[acc_pos], 0)])
            rule_lhs.extend(_strings(lhs_words[acc_pos]))
            rule_rhs.extend(words[t] for t in tgt.tolist())

        bytes_used += (new_words.nbytes + perms[new_pos].nbytes + 64 * new_pos.size
                       + 64 * acc_pos.size + 2 * (L + 1) * acc_pos.size)
        if bytes_used > opts.memory_cap:
            raise MemoryBudgetExceeded(
                f"enumeration needs more than {opts.memory_cap} bytes")

        level_ids = new_ids
        level_perms = perms[new_pos]
        level_words = new_words
        L += 1

        if opts.stop == "max_rules" and len(rule_lhs) >= opts.max_rules:
            del rule_lhs[opts.max_rules:]
            del rule_rhs[opts.max_rules:]
            stop_reason = "max_rules"
            complete = False
            break
        if opts.stop == "pseudo_bounded":
            passed_at = None
            while len(rule_lhs) >= next_check:
                rs = RewriteSystem(zip(rule_lhs[:next_check], rule_rhs[:next_check]), d,
                                   k=opts.k if check_admissible else 0,
                                   strict_shorter=check_strict)
                res = pseudo_bounded_test(rs, pb_rng, opts.pb_words, opts.pb_len,
                                          opts.pb_factor)
                checks.append((next_check, res))
                if res.passed:
                    passed_at = next_check
                    break
                next_check += opts.check_every
            if passed_at is not None:
                del rule_lhs[passed_at:]
                del rule_rhs[passed_at:]
                complete = False
                stop_reason = "pseudo_bounded"
                break

    system = RewriteSystem(zip(rule_lhs, rule_rhs), d,
                           k=opts.k if check_admissible else 0,
                           strict_shorter=check_strict,
                           complete=complete and opts.filter == "none")
    return FPResult(system, words, element_count, complete, stop_reason, checks)
