"""Desk-scale attacks on the scheme, used as regression checks."""

from __future__ import annotations

import itertools
import math
import os
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

from .errors import (BudgetExceeded, FormatError, NoKeyFound, SearchSpaceTooLarge)
from .perm import Permutation, StabChain, generates, random_element
from .protocol.keys import SecretKey
from .protocol.params import PublicParams, load_params
from .protocol.scheme import encrypt
from .rewrite.system import RewriteSystem, Rule, load_rules
from .words import BASE, format_word, letter, parse_word

CHALLENGE_MAGIC = "grafhen-challenge"
BRUTE_FORCE_LIMIT = 10**9


# ---------------------------------------------------------------------------
# challenges and reports

@dataclass
class Challenge:
    """Challenge words with known zero (and one) ciphers.

    ``params`` is optional: brute force needs only ``rules`` and ``n``.
    ``solution`` holds the hidden bits and is only used for scoring.
    """

    rules: RewriteSystem
    n: int
    zeros: list
    words: list
    ones: list = field(default_factory=list)
    solution: list | None = None
    params: PublicParams | None = None
    source: str | None = None

    def reduce(self, w: str) -> str:
        return self.rules.reduce(w)


@dataclass
class AttackReport:
    method: str
    guesses: list
    seconds: float = 0.0
    solution: list | None = None
    details: dict = field(default_factory=dict)

    @property
    def coverage(self) -> float:
        if not self.guesses:
            return 0.0
        return sum(g is not None for g in self.guesses) / len(self.guesses)

    @property
    def correct(self) -> int | None:
        if self.solution is None:
            return None
        return sum(g == s for g, s in zip(self.guesses, self.solution) if g is not None)

    @property
    def accuracy(self) -> float | None:
        """Share of correct guesses among the words that got a guess."""
        if self.solution is None:
            return None
        known = sum(g is not None for g in self.guesses)
        return self.correct / known if known else 0.0

    @property
    def recovered(self) -> float | None:
        """Share of all challenge words decoded correctly."""
        if self.solution is None or not self.guesses:
            return None
        return self.correct / len(self.guesses)

    def as_dict(self) -> dict:
        return {
            "method": self.method,
            "words": len(self.guesses),
            "guesses": "".join("?" if g is None else str(g) for g in self.guesses),
            "coverage": self.coverage,
            "accuracy": self.accuracy,
            "recovered": self.recovered,
            "seconds": self.seconds,
            "details": self.details,
        }


def make_challenge(sk: SecretKey, pp: PublicParams, count: int, rng: random.Random,
                   zeros: Sequence[str] | None = None) -> Challenge:
    """Encrypt ``count`` random bits under ``sk``."""
    bits = [rng.randrange(sk.enc.m) for _ in range(count)]
    words = [encrypt(sk, b, rng, pp.rules) for b in bits]
    zeros = list(pp.db if zeros is None else zeros)
    return Challenge(pp.rules, sk.n, zeros, words, [pp.one], bits, pp)


def coset_challenge(gens: Sequence[Permutation], rules: RewriteSystem, n: int,
                    zero_gens: Sequence[Permutation], one: Permutation, count: int,
                    rng: random.Random, zero_samples: int = 16) -> Challenge:
    """Challenge for an arbitrary subgroup ``Z`` and coset ``one * Z``.

    Useful for keys too small to carry an encoding: bit ``b`` is a word for
    ``one^b z`` with ``z`` random in ``<zero_gens>``.
    """
    chain = StabChain(gens, degree=n)

    def word(g: Permutation) -> str:
        return rules.reduce(chain.factorize(g))

    zeros = [word(z) for z in zero_gens]
    zeros += [word(random_element(zero_gens, rng)) for _ in range(zero_samples)]
    bits = [rng.randrange(2) for _ in range(count)]
    words = [word((one if b else Permutation.identity()) * random_element(zero_gens, rng))
             for b in bits]
    return Challenge(rules, n, zeros, words, [word(one)], bits)


def format_challenge(ch: Challenge, ref: str, kind: str = "params",
                     with_solution: bool = True) -> str:
    lines = [f"{CHALLENGE_MAGIC} v1 n={ch.n}", f"{kind}={ref}", "zero:"]
    lines += [format_word(w) for w in ch.zeros]
    if ch.ones:
        lines.append("one:")
        lines += [format_word(w) for w in ch.ones]
    lines.append("challenge:")
    lines += [format_word(w) for w in ch.words]
    if with_solution and ch.solution is not None:
        lines += ["solution:", "".join(str(b) for b in ch.solution)]
    return "\n".join(lines) + "\n"


def save_challenge(ch: Challenge, path, ref: str, kind: str = "params",
                   with_solution: bool = True) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_challenge(ch, ref, kind, with_solution))


def parse_challenge(text: str, base_dir: str = ".") -> Challenge:
    lines = [l.strip() for l in text.splitlines() if l.strip()]
    if not lines or not lines[0].startswith(f"{CHALLENGE_MAGIC} v1"):
        raise FormatError(f"expected a '{CHALLENGE_MAGIC} v1' header")
    fields = dict(p.partition("=")[::2] for p in lines[0].split()[2:])
    if len(lines) < 2 or "=" not in lines[1]:
        raise FormatError("challenge file needs a params= or rules= line")
    kind, _, ref = lines[1].partition("=")
    path = ref if os.path.isabs(ref) else os.path.join(base_dir, ref)
    params = None
    try:
        if kind == "params":
            params = load_params(path)
            rules = params.rules
        elif kind == "rules":
            rules = load_rules(path)
        else:
            raise FormatError(f"unknown reference kind {kind!r}")
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    blocks: dict[str, list[str]] = {"zero": [], "one": [], "challenge": [], "solution": []}
    current = None
    for l in lines[2:]:
        if l.endswith(":") and l[:-1] in blocks:
            current = l[:-1]
        elif current is None:
            raise FormatError(f"line outside any block: {l!r}")
        else:
            blocks[current].append(l)
    try:
        zeros = [parse_word(w, rules.d) for w in blocks["zero"]]
        ones = [parse_word(w, rules.d) for w in blocks["one"]]
        words = [parse_word(w, rules.d) for w in blocks["challenge"]]
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
    solution = None
    if blocks["solution"]:
        bits = "".join(blocks["solution"])
        if len(bits) != len(words) or not bits.isdigit():
            raise FormatError("solution must have one digit per challenge word")
        solution = [int(b) for b in bits]
    try:
        n = int(fields["n"]) if "n" in fields else None
    except ValueError:
        raise FormatError("bad n in challenge header") from None
    if params is not None and params.one and not ones:
        ones = [params.one]
    return Challenge(rules, n, zeros, words, ones, solution, params, source=ref)


def load_challenge(path) -> Challenge:
    with open(path, encoding="utf-8") as fh:
        return parse_challenge(fh.read(), os.path.dirname(os.path.abspath(path)))


# ---------------------------------------------------------------------------
# brute force on the key

def _partitions(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def class_representatives(n: int) -> list[Permutation]:
    """One permutation per cycle type of ``S_n``: consecutive cycles, longest first."""
    reps = []
    for part in _partitions(n):
        cycles, start = [], 1
        for k in part:
            cycles.append(tuple(range(start, start + k)))
            start += k
        reps.append(Permutation.from_cycles(c for c in cycles if len(c) > 1))
    return reps


def _evaluate(tuples: Sequence[tuple], word: str, n: int) -> tuple:
    cur = tuple(range(n))
    for c in word:
        t = tuples[ord(c) - BASE]
        cur = tuple(t[x] for x in cur)
    return cur


def satisfies_rules(gens: Sequence[Permutation], rules, n: int | None = None) -> bool:
    """Every rule evaluates to equal permutations under ``gens``."""
    n = n or max([g.degree for g in gens] + [1])
    tuples = [g.as_tuple(n) for g in gens]
    return all(_evaluate(tuples, r.lhs, n) == _evaluate(tuples, r.rhs, n) for r in rules)


def candidate_keys(rules: RewriteSystem, n: int, quotient: bool = True,
                   require_generating: bool = True) -> Iterator[list[Permutation]]:
    """Generator tuples satisfying every rule.

    With ``quotient`` the first generator runs over class representatives
    only, which loses nothing up to simultaneous conjugation.
    """
    d = rules.d
    all_perms = [Permutation.from_zero_based(p) for p in itertools.permutations(range(n))]
    firsts = class_representatives(n) if quotient else all_perms
    # short rules first: most candidates fail on them
    ordered = sorted(rules.rules, key=lambda r: len(r.lhs) + len(r.rhs))
    tuples_all = [p.as_tuple(n) for p in all_perms]
    for first in firsts:
        t0 = first.as_tuple(n)
        for rest in itertools.product(range(len(all_perms)), repeat=d - 1):
            tuples = [t0] + [tuples_all[i] for i in rest]
            if all(_evaluate(tuples, r.lhs, n) == _evaluate(tuples, r.rhs, n) for r in ordered):
                gens = [first] + [all_perms[i] for i in rest]
                if not require_generating or generates(gens, n):
                    yield gens


def brute_force_key(rules: RewriteSystem, n: int, zero_words: Sequence[str],
                    challenge: Sequence[str], solution: Sequence[int] | None = None
                    ) -> AttackReport:
    """Search for a key equivalent to the hidden one and decrypt with it.

    A challenge word is guessed 0 when its value lies in the group generated by
    the values of the zero words, and 1 otherwise.
    """
    t0 = time.perf_counter()
    d = rules.d
    space = len(class_representatives(n)) * math.factorial(n) ** (d - 1)
    if space > BRUTE_FORCE_LIMIT:
        raise SearchSpaceTooLarge(f"{space} candidate tuples exceed {BRUTE_FORCE_LIMIT}")
    key = next(candidate_keys(rules, n), None)
    if key is None:
        raise NoKeyFound("no generating tuple satisfies the rules")
    if not satisfies_rules(key, rules, n):
        raise AssertionError("brute-force key fails re-verification")
    tuples = [g.as_tuple(n) for g in key]

    def value(w):
        return Permutation.from_zero_based(_evaluate(tuples, w, n))

    zchain = StabChain([value(z) for z in zero_words], degree=n)
    guesses = [0 if zchain.contains(value(w)) else 1 for w in challenge]
    return AttackReport("brute", guesses, time.perf_counter() - t0,
                        list(solution) if solution is not None else None,
                        {"key": [str(g) for g in key], "space": space})


# ---------------------------------------------------------------------------
# randomized reduction

def random_reduction_attack(ch: Challenge, iters: int, rng: random.Random) -> AttackReport:
    """Randomized reduction of every challenge word against the known zeros.

    A word is decided as soon as a reduct is empty or equals a known zero or
    one cipher.
    """
    t0 = time.perf_counter()
    red = ch.reduce
    known_zero = {red(z) for z in ch.zeros} | {""}
    known_one = {red(o) for o in ch.ones}
    zeros = [red(z) for z in ch.zeros] or [""]
    guesses = []
    tries = []
    for w in ch.words:
        best = red(w)
        guess, used = None, 0
        while True:
            if best in known_zero:
                guess = 0
                break
            if best in known_one:
                guess = 1
                break
            if used >= iters:
                break
            z = rng.choice(zeros)
            used += 1
            cand = red(best + z if rng.random() < 0.5 else z + best)
            if cand in known_zero or cand in known_one or len(cand) < len(best):
                best = cand
        guesses.append(guess)
        tries.append(used)
    return AttackReport("randred", guesses, time.perf_counter() - t0, ch.solution,
                        {"iters": iters, "mean_tries": sum(tries) / max(len(tries), 1)})


# ---------------------------------------------------------------------------
# enumeration in the magma of reduced words

def magma_relations(reduce: Callable[[str], str], values: Sequence[str],
                    max_elements: int, max_len: int | None = None
                    ) -> Iterator[tuple[str, str]]:
    """Breadth-first enumeration of left-associated products of ``values``.

    Abstract words use letters ``a, b, ...`` for the given values.  Yields
    ``(u, v)`` whenever the abstract word ``u`` evaluates to the same reduced
    word as the earlier abstract word ``v``.  Raises ``BudgetExceeded`` once
    ``max_elements`` distinct elements have been seen.
    """
    seen = {"": ""}
    frontier = [("", "")]
    length = 0
    while frontier and (max_len is None or length < max_len):
        length += 1
        nxt = []
        for word, val in frontier:
            for i, x in enumerate(values):
                u = word + letter(i)
                r = reduce(val + x)
                old = seen.get(r)
                if old is not None:
                    yield u, old
                    continue
                seen[r] = u
                nxt.append((u, r))
                if len(seen) >= max_elements:
                    raise BudgetExceeded(f"{max_elements} elements enumerated", None)
        frontier = nxt


def generator_relation_probe(rules: RewriteSystem, letters: Sequence[str],
                             max_len: int | None = None, max_elements: int = 100_000,
                             key: SecretKey | None = None) -> list[Rule]:
    """Relations among the given letters found by enumeration in the magma.

    Returned rules are over the original alphabet.  On budget exhaustion a
    ``BudgetExceeded`` carrying the relations found so far is raised.  With a
    ``key`` every relation is also checked by evaluation.
    """
    letters = list(letters)
    found: list[Rule] = []

    def translate(u: str) -> str:
        return "".join(letters[ord(c) - BASE] for c in u)

    try:
        for u, v in magma_relations(rules.reduce, letters, max_elements, max_len):
            lhs, rhs = translate(u), translate(v)
            if rules.reduce(lhs) != rules.reduce(rhs):
                raise AssertionError(f"uncertified relation {lhs} = {rhs}")
            if key is not None and key.evaluate(lhs) != key.evaluate(rhs):
                raise AssertionError(f"relation {lhs} = {rhs} fails under the key")
            found.append(Rule(lhs, rhs))
    except BudgetExceeded as exc:
        raise BudgetExceeded(str(exc), found) from None
    return found


def redundancy_probe(rules: RewriteSystem, pair: Sequence[str] = ("a", "b"),
                     max_elements: int = 10_000, max_len: int | None = None) -> list[str]:
    """Letters that look expressible through the others.

    Two sources: published rules whose sides differ by exactly one letter, and
    reduced forms of products of ``pair`` that mention exactly one letter
    outside ``pair``.
    """
    d = rules.d
    if d <= 2:
        return []
    flagged = set()
    for r in rules:
        diff = set(r.lhs) ^ set(r.rhs)
        if len(diff) == 1:
            flagged |= diff
    pair = list(pair)
    seen = {""}
    frontier = [""]
    depth = 0
    while frontier and len(seen) < max_elements and (max_len is None or depth < max_len):
        depth += 1
        nxt = []
        for val in frontier:
            for x in pair:
                r = rules.reduce(val + x)
                if r in seen:
                    continue
                seen.add(r)
                extra = set(r) - set(pair)
                if len(extra) == 1:
                    flagged |= extra
                nxt.append(r)
        frontier = nxt
    return sorted(flagged - set(pair))


# ---------------------------------------------------------------------------
# relations between ciphers

def solve_relation(u: str, v: str, dec_y: int, m: int = 2) -> int | None:
    """Solve the congruence from ``u(x, y) = v(x, y)`` for ``dec(x)``.

    ``u`` and ``v`` are words in the letters ``x`` and ``y``.  Returns ``None``
    when the coefficient of ``dec(x)`` is not invertible mod ``m``.
    """
    a = (u.count("x") - v.count("x")) % m
    b = (v.count("y") - u.count("y")) * dec_y % m
    if math.gcd(a, m) != 1:
        return None
    return b * pow(a, -1, m) % m


def cipher_relation_attack(reduce: Callable[[str], str], x: str, y: str, dec_y: int,
                           m: int = 2, max_elements: int = 10_000,
                           max_len: int | None = None) -> tuple[int | None, list]:
    """Look for literal collisions among products of ``x`` and ``y``.

    Returns the inferred ``dec(x)`` (or ``None``) and the relations tried, as
    pairs of words in ``x``/``y``.
    """
    tried = []
    to_xy = str.maketrans("ab", "xy")
    try:
        for u, v in magma_relations(reduce, [x, y], max_elements, max_len):
            u, v = u.translate(to_xy), v.translate(to_xy)
            tried.append((u, v))
            got = solve_relation(u, v, dec_y, m)
            if got is not None:
                return got, tried
    except BudgetExceeded:
        pass
    return None, tried


def cipher_relation_report(ch: Challenge, dec_y: int = 1, y: str | None = None,
                           m: int = 2, max_elements: int = 10_000) -> AttackReport:
    t0 = time.perf_counter()
    if y is None:
        if not ch.ones:
            raise ValueError("need a cipher with known decryption")
        y = ch.ones[0]
    guesses = [cipher_relation_attack(ch.reduce, w, y, dec_y, m, max_elements)[0]
               for w in ch.words]
    return AttackReport("ciphrel", guesses, time.perf_counter() - t0, ch.solution,
                        {"max_elements": max_elements})


def genrel_report(ch: Challenge, letters: Sequence[str] | None = None,
                  max_elements: int = 100_000) -> AttackReport:
    t0 = time.perf_counter()
    letters = list(letters) if letters else [letter(i) for i in range(ch.rules.d - 1)]
    exhausted = False
    try:
        found = generator_relation_probe(ch.rules, letters, max_elements=max_elements)
    except BudgetExceeded as exc:
        found, exhausted = exc.partial, True
    return AttackReport("genrel", [], time.perf_counter() - t0, None,
                        {"letters": "".join(letters), "relations": len(found),
                         "budget_exhausted": exhausted,
                         "sample": [f"{format_word(r.lhs)}={format_word(r.rhs)}"
                                    for r in found[:10]]})
