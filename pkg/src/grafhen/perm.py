"""Permutations, stabilizer chains and the semidirect square ``G x| G``.

Conventions follow GAP: points are positive integers, a permutation fixes every
point outside a finite set, and ``a * b`` means *apply a first, then b*.
"""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import GrafhenError, NotAMember
from .words import BASE, alphabet, index


class Permutation:
    """A finitely supported bijection of the positive integers.

    The images are stored as a tuple ``img`` with ``img[i - 1]`` the image of
    point ``i``, trimmed so that its last entry is a moved point; equal
    permutations therefore always share one representation.
    """

    __slots__ = ("_img", "_hash")

    def __init__(self, images: Sequence[int] = ()):
        img = tuple(int(x) for x in images)
        if sorted(img) != list(range(1, len(img) + 1)):
            raise ValueError(f"not a permutation of 1..{len(img)}: {img}")
        self._img = _trim(img)
        self._hash = None

    @classmethod
    def _raw(cls, img: tuple) -> "Permutation":
        p = object.__new__(cls)
        p._img = _trim(img)
        p._hash = None
        return p

    @classmethod
    def identity(cls) -> "Permutation":
        return IDENTITY

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]]) -> "Permutation":
        mapping: dict[int, int] = {}
        for cyc in cycles:
            for j, p in enumerate(cyc):
                if p < 1:
                    raise ValueError(f"points must be positive, got {p}")
                if p in mapping:
                    raise ValueError(f"point {p} repeated")
                mapping[p] = cyc[(j + 1) % len(cyc)]
        n = max(mapping, default=0)
        return cls._raw(tuple(mapping.get(i, i) for i in range(1, n + 1)))

    @classmethod
    def from_zero_based(cls, seq: Sequence[int]) -> "Permutation":
        return cls._raw(tuple(x + 1 for x in seq))

    @classmethod
    def parse(cls, text: str) -> "Permutation":
        return parse_cycles(text)

    def __call__(self, point: int) -> int:
        if 1 <= point <= len(self._img):
            return self._img[point - 1]
        return point

    @property
    def degree(self) -> int:
        """Largest moved point (0 for the identity)."""
        return len(self._img)

    @property
    def images(self) -> dict[int, int]:
        return {i + 1: x for i, x in enumerate(self._img) if x != i + 1}

    def as_tuple(self, n: int) -> tuple:
        """Zero-based image tuple on ``0..n-1``."""
        if n < len(self._img):
            raise ValueError(f"degree {len(self._img)} exceeds {n}")
        img = self._img
        return tuple(img[i] - 1 for i in range(len(img))) + tuple(range(len(img), n))

    def support(self) -> list[int]:
        return [i + 1 for i, x in enumerate(self._img) if x != i + 1]

    def is_identity(self) -> bool:
        return not self._img

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def __invert__(self) -> "Permutation":
        return self.inverse()

    def inverse(self) -> "Permutation":
        inv = [0] * len(self._img)
        for i, x in enumerate(self._img):
            inv[x - 1] = i + 1
        return Permutation._raw(tuple(inv))

    def __pow__(self, k: int) -> "Permutation":
        if k < 0:
            return self.inverse() ** (-k)
        result, base = IDENTITY, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def order(self) -> int:
        return order(self)

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for i in range(1, len(self._img) + 1):
            if i in seen or self._img[i - 1] == i:
                continue
            cyc = [i]
            seen.add(i)
            j = self._img[i - 1]
            while j != i:
                cyc.append(j)
                seen.add(j)
                j = self._img[j - 1]
            out.append(tuple(cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.cycles()), reverse=True))

    def conjugate(self, by: "Permutation") -> "Permutation":
        """Return ``by * self * by^-1``."""
        return by * self * by.inverse()

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self._img == other._img

    def __lt__(self, other: "Permutation") -> bool:
        return self._img < other._img

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._img)
        return self._hash

    def __repr__(self) -> str:
        return f"Permutation.parse({format_cycles(self)!r})"

    def __str__(self) -> str:
        return format_cycles(self)

    def __reduce__(self):
        return (Permutation, (self._img,))


def _trim(img: tuple) -> tuple:
    n = len(img)
    while n and img[n - 1] == n:
        n -= 1
    return img[:n] if n != len(img) else img


IDENTITY = Permutation._raw(())


def compose(a: Permutation, b: Permutation) -> Permutation:
    """Product ``ab``: the permutation sending ``p`` to ``b(a(p))``."""
    ai, bi = a._img, b._img
    if not bi:
        return a
    if not ai:
        return b
    la, lb = len(ai), len(bi)
    if la >= lb:
        return Permutation._raw(tuple(bi[x - 1] if x <= lb else x for x in ai))
    head = tuple(bi[x - 1] for x in ai)
    return Permutation._raw(head + bi[la:])


def order(a: Permutation) -> int:
    """Least ``k >= 1`` with ``a**k`` the identity."""
    return math.lcm(1, *(len(c) for c in a.cycles()))


_CYCLE_RE = re.compile(r"\(\s*(\d+(?:\s*,\s*\d+)*)?\s*\)")


def parse_cycles(text: str) -> Permutation:
    """Parse GAP-style cycle notation such as ``"(1,7,4,2,6)(3,5,9,8)"``."""
    s = text.strip()
    if not s:
        raise ValueError("empty permutation text")
    pos = 0
    cycles = []
    while pos < len(s):
        if s[pos].isspace():
            pos += 1
            continue
        m = _CYCLE_RE.match(s, pos)
        if m is None:
            raise ValueError(f"malformed cycle notation: {text!r}")
        if m.group(1):
            cycles.append([int(x) for x in m.group(1).split(",")])
        pos = m.end()
    return Permutation.from_cycles(cycles)


def format_cycles(p: Permutation) -> str:
    """Canonical text: cycles ordered by least point, least point first."""
    cycles = p.cycles()
    if not cycles:
        return "()"
    return "".join("(" + ",".join(map(str, c)) + ")" for c in cycles)


def evaluate(gens: Sequence[Permutation], word: str) -> Permutation:
    """Product of the generators named by the letters of ``word``."""
    if not word:
        return IDENTITY
    n = max((g.degree for g in gens), default=0)
    tuples = [g.as_tuple(n) for g in gens]
    cur = list(range(n))
    for c in word:
        t = tuples[ord(c) - BASE]
        cur = [t[x] for x in cur]
    return Permutation.from_zero_based(cur)


# ---------------------------------------------------------------------------
# Schreier-Sims on zero-based image tuples

def _mul(a: tuple, b: tuple) -> tuple:
    return tuple([b[x] for x in a])


def _inv(a: tuple) -> tuple:
    inv = [0] * len(a)
    for i, x in enumerate(a):
        inv[x] = i
    return tuple(inv)


@dataclass
class ChainLevel:
    """One level of a stabilizer chain.

    ``transversal[p]`` is an element of the level's group mapping the base
    point to ``p``.  ``words[p]``, once the chain's factorization tables are
    built, holds ``(perm, word)`` with ``perm`` mapping ``p`` back to the base
    point and ``word`` an inverse-free word over the original generators that
    evaluates to ``perm``.
    """

    base_point: int
    generators: list
    transversal: dict
    words: dict | None = None


class StabChain:
    """Base and strong generating set for the group generated by ``gens``.

    The chain itself is built deterministically (Schreier-Sims).  Word tables
    for factorization are filled on first use by sifting random forward words,
    keeping the shortest word found for each coset, so no inverse ever appears
    in a factorization.
    """

    def __init__(self, gens: Sequence[Permutation], words: Sequence[str] | None = None,
                 degree: int | None = None):
        gens = list(gens)
        if words is None:
            words = list(alphabet(len(gens)))
        if len(words) != len(gens):
            raise ValueError("need one word per generator")
        self.gens = gens
        self.gen_words = list(words)
        n = max([g.degree for g in gens] + [degree or 0, 1])
        self.n = n
        self._gen_tuples = [g.as_tuple(n) for g in gens]
        self.levels: list[ChainLevel] = []
        self._schreier_sims()
        self._tables_built = False

    # -- construction -----------------------------------------------------
    def _orbit(self, level: ChainLevel):
        b = level.base_point
        ident = tuple(range(self.n))
        trans = {b: ident}
        queue = [b]
        for p in queue:
            u = trans[p]
            for s in level.generators:
                q = s[p]
                if q not in trans:
                    trans[q] = _mul(u, s)
                    queue.append(q)
        level.transversal = trans

    def _strip(self, h: tuple, start: int):
        for j in range(start, len(self.levels)):
            lvl = self.levels[j]
            beta = h[lvl.base_point]
            u = lvl.transversal.get(beta)
            if u is None:
                return h, j
            if beta != lvl.base_point:
                h = _mul(h, _inv(u))
        return h, len(self.levels)

    def _new_level(self, h: tuple):
        moved = next(i for i, x in enumerate(h) if x != i)
        lvl = ChainLevel(moved, [], {})
        self.levels.append(lvl)
        return lvl

    def _schreier_sims(self):
        ident = tuple(range(self.n))
        gens = [g for g in self._gen_tuples if g != ident]
        if not gens:
            return
        for g in gens:
            if all(g[l.base_point] == l.base_point for l in self.levels):
                self._new_level(g)
        for i, lvl in enumerate(self.levels):
            bases = [l.base_point for l in self.levels[:i]]
            lvl.generators = [g for g in gens if all(g[b] == b for b in bases)]
            self._orbit(lvl)
        i = len(self.levels) - 1
        tested: set = set()
        while i >= 0:
            lvl = self.levels[i]
            restart = False
            for p in list(lvl.transversal):
                for s in list(lvl.generators):
                    key = (i, p, s)
                    if key in tested:
                        continue
                    tested.add(key)
                    u = lvl.transversal[p]
                    h = _mul(_mul(u, s), _inv(lvl.transversal[s[p]]))
                    if h == ident:
                        continue
                    r, j = self._strip(h, i + 1)
                    if j < len(self.levels) or r != ident:
                        if j == len(self.levels):
                            self._new_level(r)
                        for l in range(i + 1, j + 1):
                            self.levels[l].generators.append(r)
                            self._orbit(self.levels[l])
                        i = j
                        restart = True
                        break
                if restart:
                    break
            if not restart:
                i -= 1

    # -- queries ----------------------------------------------------------
    @property
    def base(self) -> list[int]:
        return [l.base_point + 1 for l in self.levels]

    def order(self) -> int:
        return math.prod(len(l.transversal) for l in self.levels)

    def contains(self, g: Permutation) -> bool:
        if g.degree > self.n:
            return False
        r, j = self._strip(g.as_tuple(self.n), 0)
        return j == len(self.levels) and r == tuple(range(self.n))

    def factorize(self, g: Permutation) -> str:
        """Inverse-free word over the generator words evaluating to ``g``."""
        if not self.contains(g):
            raise NotAMember(f"{g} is not in the group")
        self._ensure_tables()
        # sift g^-1 with forward table elements: g^-1 v_1 ... v_k = 1
        h = g.inverse().as_tuple(self.n)
        parts = []
        for lvl in self.levels:
            perm, word = lvl.words[h[lvl.base_point]]
            h = _mul(h, perm)
            parts.append(word)
        return "".join(parts)

    def table_word_lengths(self) -> list[int]:
        self._ensure_tables()
        return [max(len(w) for _, w in l.words.values()) for l in self.levels]

    # -- forward word tables ---------------------------------------------
    def _ensure_tables(self, seed: int = 0x5EED, max_samples: int = 400_000):
        if self._tables_built:
            return
        ident = tuple(range(self.n))
        for lvl in self.levels:
            lvl.words = {lvl.base_point: (ident, "")}
        target = sum(len(l.transversal) for l in self.levels)
        filled = len(self.levels)
        rng = random.Random(seed)
        k = len(self._gen_tuples)
        max_len = max(8, 2 * math.ceil(math.log(max(self.order(), 2), max(k, 2))))
        gw = self.gen_words
        # short words first, breadth-first, then random words
        frontier = [(ident, "")]
        for _ in range(3):
            nxt = []
            for perm, w in frontier:
                for a in range(k):
                    x = (_mul(perm, self._gen_tuples[a]), w + gw[a])
                    filled += self._sift_into_tables(*x)
                    nxt.append(x)
            frontier = nxt
            if len(frontier) > 5000:
                break
        samples = 0
        extra = None
        while samples < max_samples:
            samples += 1
            length = rng.randint(1, max_len)
            perm = ident
            parts = []
            for _ in range(length):
                a = rng.randrange(k)
                perm = _mul(perm, self._gen_tuples[a])
                parts.append(gw[a])
            filled += self._sift_into_tables(perm, "".join(parts))
            if filled == target:
                if extra is None:
                    extra = samples  # keep going as long again to shorten words
                elif samples >= 2 * extra + 200:
                    break
        if filled != target:
            raise GrafhenError("factorization tables did not fill within budget")
        self._tables_built = True

    def _sift_into_tables(self, x: tuple, w: str) -> int:
        """Offer ``(x, w)`` to each level; return 1 if an empty slot was filled."""
        for lvl in self.levels:
            b = lvl.base_point
            gamma = x.index(b)
            slot = lvl.words.get(gamma)
            if slot is None:
                lvl.words[gamma] = (x, w)
                return 1
            if len(w) < len(slot[1]):
                lvl.words[gamma] = (x, w)
            delta = x[b]
            nxt = lvl.words.get(delta)
            if nxt is None:
                return 0
            x = _mul(x, nxt[0])
            w = w + nxt[1]
        return 0


def build_chain(gens: Sequence[Permutation], words: Sequence[str] | None = None,
                degree: int | None = None) -> StabChain:
    return StabChain(gens, words, degree)


def contains(chain: StabChain, g: Permutation) -> bool:
    return chain.contains(g)


def group_order(chain: StabChain) -> int:
    return chain.order()


def factorize(chain: StabChain, g: Permutation) -> str:
    return chain.factorize(g)


def random_element(gens: Sequence[Permutation], rng: random.Random,
                   burn_in: int = 100) -> Permutation:
    """Product-replacement random walk of fixed length from an explicit seed."""
    gens = [g for g in gens if not g.is_identity()]
    if not gens:
        return IDENTITY
    n = max(g.degree for g in gens)
    state = [g.as_tuple(n) for g in gens]
    while len(state) < 10:
        state.append(state[len(state) % len(gens)])
    acc = tuple(range(n))
    r = len(state)
    for _ in range(burn_in):
        i, j = rng.sample(range(r), 2)
        other = state[j] if rng.random() < 0.5 else _inv(state[j])
        if rng.random() < 0.5:
            state[i] = _mul(state[i], other)
        else:
            state[i] = _mul(other, state[i])
        acc = _mul(acc, state[i])
    return Permutation.from_zero_based(acc)


def random_symmetric(points: Sequence[int], rng: random.Random) -> Permutation:
    """Uniform random permutation of the given points (fixing all others)."""
    pts = list(points)
    shuffled = pts[:]
    rng.shuffle(shuffled)
    n = max(pts, default=0)
    img = list(range(1, n + 1))
    for p, q in zip(pts, shuffled):
        img[p - 1] = q
    return Permutation._raw(tuple(img))


def generates(gens: Sequence[Permutation], n: int) -> bool:
    """True iff ``gens`` generate the full symmetric group on ``1..n``."""
    if any(g.degree > n for g in gens):
        return False
    return StabChain(gens, degree=n).order() == math.factorial(n)


def pairwise_generating(gens: Sequence[Permutation], n: int) -> bool:
    if len(gens) < 2:
        return generates(gens, n)
    return all(generates([gens[i], gens[j]], n)
               for i in range(len(gens)) for j in range(i + 1, len(gens)))


def adjacent_transposition(i: int) -> Permutation:
    return Permutation.from_cycles([(i, i + 1)])


# ---------------------------------------------------------------------------
# G x| G with G acting on itself by conjugation

@dataclass(frozen=True)
class SdElement:
    left: Permutation
    right: Permutation

    def __mul__(self, other: "SdElement") -> "SdElement":
        return sd_mul(self, other)


SD_IDENTITY = SdElement(IDENTITY, IDENTITY)


def sd_mul(x: SdElement, y: SdElement) -> SdElement:
    """``(n1, h1)(n2, h2) = (n1 * h1 n2 h1^-1, h1 h2)``."""
    h1 = x.right
    return SdElement(x.left * h1 * y.left * h1.inverse(), h1 * y.right)


def sd_letter_assignment(left_gens: Sequence[Permutation],
                         right_gens: Sequence[Permutation]) -> list[SdElement]:
    """Letters of the left alphabet act as ``(g, 1)``, right ones as ``(1, g)``."""
    return ([SdElement(g, IDENTITY) for g in left_gens]
            + [SdElement(IDENTITY, g) for g in right_gens])


def sd_eval(assignment: Sequence[SdElement], word: str) -> SdElement:
    acc = SD_IDENTITY
    for c in word:
        acc = sd_mul(acc, assignment[index(c)])
    return acc


def f_map(x: SdElement) -> Permutation:
    return x.left * x.right


def p_map(x: SdElement) -> Permutation:
    return x.right
