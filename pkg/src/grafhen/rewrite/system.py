"""Rules, rewriting systems and deterministic reduction."""

from __future__ import annotations

import io
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ..errors import FormatError
from ..words import BASE, format_word, parse_word, shortlex_key
from .automaton import Automaton, first_match_kernel, reduce_kernel

RULES_MAGIC = "grafhen-rules"


@dataclass(frozen=True)
class Rule:
    lhs: str
    rhs: str

    def __iter__(self):
        return iter((self.lhs, self.rhs))

    def __str__(self) -> str:
        return f"{format_word(self.lhs)} -> {format_word(self.rhs)}"


def as_rule(r) -> Rule:
    return r if isinstance(r, Rule) else Rule(*r)


def to_array(w: str) -> np.ndarray:
    return np.frombuffer(w.encode("latin-1"), dtype=np.uint8) - BASE


def from_array(a: np.ndarray) -> str:
    return (a + BASE).astype(np.uint8).tobytes().decode("latin-1")


class RewriteSystem:
    """An ordered list of rules over the alphabet ``range(d)``.

    By default every rule must decrease in shortlex order, which guarantees
    termination.  Systems that terminate for another reason (the commutation
    rules of a semidirect combination) pass ``shortlex=False``.
    """

    def __init__(self, rules: Iterable, d: int, k: int = 0, strict_shorter: bool = False,
                 complete: bool = False, shortlex: bool = True):
        self.rules = [as_rule(r) for r in rules]
        self.d = d
        self.k = k
        self.strict_shorter = strict_shorter
        self.complete = complete
        self.shortlex = shortlex
        seen = {}
        for r in self.rules:
            if not r.lhs:
                raise ValueError("a rule needs a nonempty left hand side")
            for c in r.lhs + r.rhs:
                if not 0 <= ord(c) - BASE < d:
                    raise ValueError(f"letter {c!r} outside alphabet of size {d}")
            if shortlex and shortlex_key(r.rhs) >= shortlex_key(r.lhs):
                raise ValueError(f"rule {r} does not decrease in shortlex order")
            if strict_shorter and len(r.rhs) >= len(r.lhs):
                raise ValueError(f"rule {r} does not shorten")
            if r.lhs in seen and seen[r.lhs] != r.rhs:
                raise ValueError(f"two rules share the left hand side {r.lhs!r}")
            seen[r.lhs] = r.rhs
        self._auto = None
        self._kernel_args = None

    # -- basics -----------------------------------------------------------
    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)

    def __eq__(self, other) -> bool:
        return (isinstance(other, RewriteSystem) and self.d == other.d
                and sorted(self.rules, key=_rule_key) == sorted(other.rules, key=_rule_key))

    def as_dict(self) -> dict[str, str]:
        return {r.lhs: r.rhs for r in self.rules}

    def rule_set(self) -> set[tuple[str, str]]:
        return {(r.lhs, r.rhs) for r in self.rules}

    def sorted(self) -> "RewriteSystem":
        return self.with_rules(sorted(self.rules, key=_rule_key))

    def with_rules(self, rules: Iterable) -> "RewriteSystem":
        return RewriteSystem(rules, self.d, self.k, self.strict_shorter, False, self.shortlex)

    def max_lhs_len(self) -> int:
        return max((len(r.lhs) for r in self.rules), default=0)

    @property
    def automaton(self) -> Automaton:
        if self._auto is None:
            self._auto = Automaton([r.lhs for r in self.rules], self.d)
        return self._auto

    @property
    def factor_free(self) -> bool:
        return self.automaton.factor_free

    # -- reduction --------------------------------------------------------
    def _args(self):
        if self._kernel_args is None:
            auto = self.automaton
            lhs_len = np.fromiter((len(r.lhs) for r in self.rules), dtype=np.int64,
                                  count=len(self.rules))
            rhs_len = np.fromiter((len(r.rhs) for r in self.rules), dtype=np.int64,
                                  count=len(self.rules))
            rhs_off = np.zeros(len(self.rules) + 1, dtype=np.int64)
            np.cumsum(rhs_len, out=rhs_off[1:])
            rhs_flat = to_array("".join(r.rhs for r in self.rules))
            if rhs_flat.size == 0:
                rhs_flat = np.zeros(1, dtype=np.uint8)
            self._kernel_args = (auto.goto, auto.term, lhs_len, rhs_flat, rhs_off)
        return self._kernel_args

    def reduce_array(self, w: np.ndarray) -> np.ndarray:
        if not self.rules:
            return w
        if self.factor_free:
            return reduce_kernel(w, *self._args())
        return to_array(self._reduce_general(from_array(w)))

    def reduce(self, w: str) -> str:
        """Rewrite ``w`` until no left hand side occurs in it.

        At every step the leftmost occurrence of a left hand side is rewritten;
        if several left hand sides start there, the longest (then the least in
        lex order) is used.
        """
        if not w or not self.rules:
            return w
        if self.factor_free:
            return from_array(reduce_kernel(to_array(w), *self._args()))
        return self._reduce_general(w)

    def _reduce_general(self, w: str) -> str:
        auto = self.automaton
        goto, out, fail, term = auto.goto, auto.out, auto.fail, auto.term
        pat_node = np.empty(len(self.rules), dtype=np.int64)
        pat_node[term[term >= 0]] = np.flatnonzero(term >= 0)
        lhs = [r.lhs for r in self.rules]
        rhs = [r.rhs for r in self.rules]
        maxlen = auto.max_len
        letters = [ord(c) - BASE for c in w]
        states = [0]
        pos = 0
        while True:
            # states[i] is the automaton state after letters[:i]; valid up to pos
            del states[pos + 1:]
            best = None
            state = states[pos]
            i = pos
            while i < len(letters):
                if best is not None and i + 1 - maxlen > best[0]:
                    break
                state = int(goto[state, letters[i]])
                states.append(state)
                i += 1
                p = int(out[state])
                while p >= 0:
                    cand = (i - len(lhs[p]), -len(lhs[p]), lhs[p], p)
                    if best is None or cand < best:
                        best = cand
                    p = int(out[fail[pat_node[p]]])
            if best is None:
                break
            start, neg_len, _, p = best
            letters[start:start - neg_len] = [ord(c) - BASE for c in rhs[p]]
            pos = max(0, start - maxlen + 1)
        return "".join(chr(BASE + x) for x in letters)

    def is_reduced(self, w: str) -> bool:
        if not self.rules or not w:
            return True
        return first_match_kernel(to_array(w), self.automaton.goto, self.automaton.out) < 0

    def enumerate_reduced(self, max_len: int, limit: int | None = None) -> list[str]:
        """All reduced words of length at most ``max_len``, in shortlex order."""
        auto = self.automaton
        goto = auto.goto.tolist()
        out = auto.out.tolist()
        result = [""]
        frontier = [("", 0)]
        for _ in range(max_len):
            nxt = []
            for w, s in frontier:
                row = goto[s]
                for a in range(self.d):
                    t = row[a]
                    if out[t] < 0:
                        nxt.append((w + chr(BASE + a), t))
            if not nxt:
                break
            result.extend(w for w, _ in nxt)
            if limit is not None and len(result) > limit:
                raise ValueError(f"more than {limit} reduced words")
            frontier = nxt
        return result

    # -- statistics -------------------------------------------------------
    def stats(self) -> dict:
        lens = [len(r.lhs) for r in self.rules]
        hist: dict[int, int] = {}
        for l in lens:
            hist[l] = hist.get(l, 0) + 1
        admissible = sum(is_admissible(r, max(self.k, 1), self.d) for r in self.rules)
        return {
            "count": len(self.rules),
            "d": self.d,
            "max_lhs_len": max(lens, default=0),
            "lhs_len_histogram": dict(sorted(hist.items())),
            "admissible": admissible,
            "k": self.k,
            "strict_shorter": self.strict_shorter,
        }


def _rule_key(r: Rule):
    return (len(r.lhs), r.lhs, len(r.rhs), r.rhs)


def reduce(rs: RewriteSystem, w: str) -> str:
    return rs.reduce(w)


def is_reduced(rs: RewriteSystem, w: str) -> bool:
    return rs.is_reduced(w)


def enumerate_reduced(rs: RewriteSystem, max_len: int) -> list[str]:
    return rs.enumerate_reduced(max_len)


def is_admissible(rule, k: int, d: int) -> bool:
    """Both sides use every letter, have length at least ``k`` and share
    neither a first nor a last letter."""
    lhs, rhs = as_rule(rule)
    full = d
    if len(set(lhs)) != full or len(set(rhs)) != full:
        return False
    if any(ord(c) - BASE >= d for c in lhs + rhs):
        return False
    if len(lhs) < k or len(rhs) < k:
        return False
    return lhs[0] != rhs[0] and lhs[-1] != rhs[-1]


# ---------------------------------------------------------------------------
# confluence

def critical_pairs(rules: Sequence[Rule]) -> Iterable[tuple[str, str, str]]:
    """Yield ``(word, reduct1, reduct2)`` for every overlap of two left sides."""
    for r1 in rules:
        l1 = r1.lhs
        for r2 in rules:
            l2 = r2.lhs
            # proper overlap: suffix of l1 equals prefix of l2
            for k in range(1, min(len(l1), len(l2))):
                if l1[-k:] == l2[:k]:
                    word = l1 + l2[k:]
                    yield word, r1.rhs + l2[k:], l1[:-k] + r2.rhs
            # inclusion: l2 occurs inside l1
            if r1 is not r2 and len(l2) <= len(l1):
                start = l1.find(l2)
                while start >= 0:
                    yield l1, r1.rhs, l1[:start] + r2.rhs + l1[start + len(l2):]
                    start = l1.find(l2, start + 1)


def check_confluence(rs: RewriteSystem) -> bool:
    """True iff every critical pair reduces to a common word."""
    for _, u, v in critical_pairs(rs.rules):
        if rs.reduce(u) != rs.reduce(v):
            return False
    return True


# ---------------------------------------------------------------------------
# rules file

def format_rules(rs: RewriteSystem) -> str:
    """Canonical text form: header line, then rules sorted by shortlex of lhs."""
    buf = io.StringIO()
    write_rules(rs, buf)
    return buf.getvalue()


def write_rules(rs: RewriteSystem, fh) -> None:
    fh.write(f"{RULES_MAGIC} v1 d={rs.d} count={len(rs)} k={rs.k} "
             f"strict={int(rs.strict_shorter)}\n")
    for r in sorted(rs.rules, key=_rule_key):
        fh.write(f"{format_word(r.lhs)} {format_word(r.rhs)}\n")


def _parse_header(line: str, magic: str) -> dict[str, str]:
    parts = line.split()
    if len(parts) < 2 or parts[0] != magic or parts[1] != "v1":
        raise FormatError(f"expected a '{magic} v1' header, got {line.strip()!r}")
    fields = {}
    for p in parts[2:]:
        key, sep, value = p.partition("=")
        if not sep:
            raise FormatError(f"bad header field {p!r}")
        fields[key] = value
    return fields


def read_rules(lines, shortlex: bool = True) -> RewriteSystem:
    """Parse a rules section from an iterator of lines."""
    it = iter(lines)
    try:
        header = next(it)
    except StopIteration:
        raise FormatError("empty rules file") from None
    fields = _parse_header(header, RULES_MAGIC)
    try:
        d = int(fields["d"])
        count = int(fields["count"])
        k = int(fields.get("k", "0"))
        strict = fields.get("strict", "0") == "1"
    except (KeyError, ValueError) as exc:
        raise FormatError(f"bad rules header: {header.strip()!r}") from exc
    rules = []
    for _ in range(count):
        try:
            line = next(it)
        except StopIteration:
            raise FormatError(f"expected {count} rules, got {len(rules)}") from None
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"bad rule line {line.strip()!r}")
        try:
            rules.append(Rule(parse_word(parts[0], d), parse_word(parts[1], d)))
        except ValueError as exc:
            raise FormatError(str(exc)) from exc
    try:
        return RewriteSystem(rules, d, k=k, strict_shorter=strict, shortlex=shortlex)
    except ValueError as exc:
        if shortlex and "shortlex" in str(exc):
            return RewriteSystem(rules, d, k=k, strict_shorter=strict, shortlex=False)
        raise FormatError(str(exc)) from exc


def parse_rules(text: str) -> RewriteSystem:
    return read_rules(text.splitlines())


def load_rules(path) -> RewriteSystem:
    with open(path, encoding="utf-8") as fh:
        return read_rules(fh)


def save_rules(rs: RewriteSystem, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        write_rules(rs, fh)
