"""Knuth-Bendix completion for the shortlex order, at desk scale."""

from __future__ import annotations

from typing import Iterable

from ..errors import BudgetExceeded
from ..words import alphabet, shortlex_key
from .system import RewriteSystem, Rule, as_rule, critical_pairs


class _Rules:
    """Mutable rule set with naive leftmost rewriting."""

    def __init__(self):
        self.rules: dict[str, str] = {}

    def normalize(self, w: str) -> str:
        while True:
            best = None
            for lhs in self.rules:
                i = w.find(lhs)
                if i >= 0 and (best is None or (i, -len(lhs), lhs) < best):
                    best = (i, -len(lhs), lhs)
            if best is None:
                return w
            i, neg, lhs = best
            w = w[:i] + self.rules[lhs] + w[i - neg:]

    def add(self, u: str, v: str) -> bool:
        u, v = self.normalize(u), self.normalize(v)
        if u == v:
            return False
        if shortlex_key(u) < shortlex_key(v):
            u, v = v, u
        self.rules[u] = v
        return True

    def interreduce(self) -> None:
        changed = True
        while changed:
            changed = False
            for lhs in sorted(self.rules, key=shortlex_key, reverse=True):
                rhs = self.rules.pop(lhs)
                if any(other in lhs for other in self.rules):
                    self.add(lhs, rhs)
                    changed = True
                else:
                    self.rules[lhs] = self.normalize(rhs)

    def as_list(self) -> list[Rule]:
        return [Rule(l, r) for l, r in sorted(self.rules.items(), key=lambda x: shortlex_key(x[0]))]


def knuth_bendix(initial: Iterable, d: int | None = None, max_rules: int = 1000,
                 max_rounds: int = 1000) -> RewriteSystem:
    """Complete ``initial`` into a reduced confluent shortlex system.

    Raises ``BudgetExceeded`` (carrying the current rules) when the rule count
    passes ``max_rules`` or completion needs more than ``max_rounds`` passes.
    """
    initial = [as_rule(r) for r in initial]
    if d is None:
        d = max((ord(c) - 96 for r in initial for c in r.lhs + r.rhs), default=0)
    rs = _Rules()
    for r in initial:
        rs.add(r.lhs, r.rhs)
    rs.interreduce()
    seen = set()
    for _ in range(max_rounds):
        current = rs.as_list()
        added = False
        for word, u, v in critical_pairs(current):
            key = (word, u, v)
            if key in seen:
                continue
            seen.add(key)
            if rs.add(u, v):
                added = True
                if len(rs.rules) > max_rules:
                    raise BudgetExceeded(f"more than {max_rules} rules", rs.as_list())
        rs.interreduce()
        if not added:
            return RewriteSystem(rs.as_list(), d, complete=True)
    raise BudgetExceeded(f"no completion after {max_rounds} rounds", rs.as_list())


def coxeter_presentation(n: int) -> list[Rule]:
    """Shortlex-oriented Coxeter relations of ``S_n`` on the adjacent
    transpositions, letter ``i`` standing for ``(i+1, i+2)``."""
    s = alphabet(n - 1)
    rules = [Rule(x + x, "") for x in s]
    for i in range(n - 2):
        a, b = s[i], s[i + 1]
        rules.append(Rule(b + a + b, a + b + a))
    for i in range(n - 1):
        for j in range(i + 2, n - 1):
            rules.append(Rule(s[j] + s[i], s[i] + s[j]))
    return rules
