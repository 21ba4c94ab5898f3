"""Homomorphic encodings of ``Z/m`` inside a finite group.

An encoding consists of an injective table ``Enc: Z/m -> E`` together with two
polynomial maps ``add`` and ``mul`` on ``E`` (products of constants and of the
two arguments) whose restriction to ``Enc(Z/m)`` realizes the ring operations.

Two encodings are shipped: the binary one inside ``S6`` and the unitriangular
one inside ``SL3(Z/m)``.  Each encoding also knows how to realize ``E`` as a
group of permutations of ``1..degree``, which is what the protocol embeds into
the key group.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .errors import ConstantNotLifted
from .perm import IDENTITY as PERM_IDENTITY
from .perm import Permutation, parse_cycles


class Matrix3:
    """A 3x3 matrix over ``Z/m``, stored row-major."""

    __slots__ = ("m", "entries")

    def __init__(self, entries: Sequence[int], m: int):
        if len(entries) != 9:
            raise ValueError("a 3x3 matrix has 9 entries")
        self.m = m
        self.entries = tuple(int(x) % m for x in entries)

    @classmethod
    def identity(cls, m: int) -> "Matrix3":
        return cls((1, 0, 0, 0, 1, 0, 0, 0, 1), m)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], m: int) -> "Matrix3":
        return cls([x for row in rows for x in row], m)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[3 * i + j]

    def __mul__(self, other: "Matrix3") -> "Matrix3":
        a, b, m = self.entries, other.entries, self.m
        return Matrix3([sum(a[3 * i + k] * b[3 * k + j] for k in range(3)) % m
                        for i in range(3) for j in range(3)], m)

    def det(self) -> int:
        a = self.entries
        d = (a[0] * (a[4] * a[8] - a[5] * a[7])
             - a[1] * (a[3] * a[8] - a[5] * a[6])
             + a[2] * (a[3] * a[7] - a[4] * a[6]))
        return d % self.m

    def inverse(self) -> "Matrix3":
        det = self.det()
        try:
            dinv = pow(det, -1, self.m)
        except ValueError:
            raise ValueError("matrix is not invertible") from None
        a = self.entries
        cof = [
            a[4] * a[8] - a[5] * a[7], a[2] * a[7] - a[1] * a[8], a[1] * a[5] - a[2] * a[4],
            a[5] * a[6] - a[3] * a[8], a[0] * a[8] - a[2] * a[6], a[2] * a[3] - a[0] * a[5],
            a[3] * a[7] - a[4] * a[6], a[1] * a[6] - a[0] * a[7], a[0] * a[4] - a[1] * a[3],
        ]
        return Matrix3([c * dinv for c in cof], self.m)

    def __pow__(self, k: int) -> "Matrix3":
        if k < 0:
            return self.inverse() ** (-k)
        result, base = Matrix3.identity(self.m), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix3) and self.m == other.m and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.m, self.entries))

    def __repr__(self) -> str:
        rows = [list(self.entries[i:i + 3]) for i in (0, 3, 6)]
        return f"Matrix3({rows}, m={self.m})"


# ---------------------------------------------------------------------------
# polynomial maps

CONST = "c"
VAR = "v"


@dataclass(frozen=True)
class PolyMap:
    """``a0 x_i0 a1 x_i1 ...`` as a token list.

    A token is ``("c", j)`` for constant ``constants[j]`` or ``("v", s)`` for
    argument slot ``s`` (1 or 2).  There is no inverse token.
    """

    tokens: tuple
    constants: tuple

    def group_ops(self) -> int:
        return max(len(self.tokens) - 1, 0)


def _runs(tokens):
    return [(tok, len(list(grp))) for tok, grp in itertools.groupby(tokens)]


def _power(x, k: int, one):
    result, base = one, x
    while k:
        if k & 1:
            result = result * base
        base = base * base
        k >>= 1
    return result


def apply_polymap(pm: PolyMap, x, y, one=None):
    """Left-to-right product of the token values.

    Runs of a repeated token are evaluated by repeated squaring.  ``one`` is the
    identity of the group; it is only needed when the map has no tokens.
    """
    acc = None
    for (kind, j), count in _runs(pm.tokens):
        val = pm.constants[j] if kind == CONST else (x if j == 1 else y)
        if count > 1:
            val = _power(val, count, one if one is not None else _identity_of(val))
        acc = val if acc is None else acc * val
    if acc is None:
        return one
    return acc


def _identity_of(x):
    if isinstance(x, Matrix3):
        return Matrix3.identity(x.m)
    if isinstance(x, Permutation):
        return PERM_IDENTITY
    return type(x).identity()


@dataclass(frozen=True)
class WordPolyMap:
    """A polynomial map whose constants are words; evaluation is concatenation."""

    tokens: tuple
    words: tuple

    def apply(self, x: str, y: str) -> str:
        parts = []
        for kind, j in self.tokens:
            parts.append(self.words[j] if kind == CONST else (x if j == 1 else y))
        return "".join(parts)


def lift_polymap(pm: PolyMap, constant_words: Sequence[str],
                 project: Callable[[str], object] | None = None) -> WordPolyMap:
    """Replace every constant of ``pm`` by a word.

    When ``project`` is given (word to ``E`` element through the secret key),
    each word is checked to project onto its constant.
    """
    if len(constant_words) != len(pm.constants):
        raise ValueError("need one word per constant")
    if project is not None:
        for j, (w, c) in enumerate(zip(constant_words, pm.constants)):
            if project(w) != c:
                raise ConstantNotLifted(f"word for constant {j} projects elsewhere")
    return WordPolyMap(pm.tokens, tuple(constant_words))


# ---------------------------------------------------------------------------
# encodings

@dataclass
class Encoding:
    """Encoding of ``Z/m`` in a group ``E`` realized on points ``1..degree``."""

    name: str
    m: int
    enc_table: list
    add: PolyMap
    mul: PolyMap
    one: object
    degree: int
    to_perm: Callable[[object], Permutation]
    from_perm: Callable[[Permutation], object]
    generators: list
    _decode: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._decode = {e: k for k, e in enumerate(self.enc_table)}

    def enc(self, k: int):
        return self.enc_table[k % self.m]

    def decode(self, e) -> int | None:
        """Ring element encoded by ``e``, or ``None`` if ``e`` is not in the image."""
        return self._decode.get(e)

    def apply_add(self, x, y):
        return apply_polymap(self.add, x, y, self.one)

    def apply_mul(self, x, y):
        return apply_polymap(self.mul, x, y, self.one)

    def perm_generators(self) -> list[Permutation]:
        return [self.to_perm(g) for g in self.generators]


def s6_encoding() -> Encoding:
    """Binary encoding in ``S6`` with ``Enc(1) = (1,5)(3,4)``."""
    a1 = parse_cycles("(1,2)(5,6)")
    a2 = parse_cycles("(3,5)")
    c, v = CONST, VAR
    mul = PolyMap(((c, 0), (v, 1), (c, 0), (c, 1), (v, 2), (c, 1),
                   (c, 0), (v, 1), (c, 0), (c, 1), (v, 2), (c, 1)), (a1, a2))
    add = PolyMap(((v, 1), (v, 2)), ())
    return Encoding(
        name="s6", m=2,
        enc_table=[PERM_IDENTITY, parse_cycles("(1,5)(3,4)")],
        add=add, mul=mul, one=PERM_IDENTITY, degree=6,
        to_perm=lambda p: p,
        from_perm=lambda p: p if p.degree <= 6 else None,
        generators=[Permutation.from_cycles([(i, i + 1)]) for i in range(1, 6)],
    )


def sl3_vectors(m: int) -> list[tuple[int, int, int]]:
    """Nonzero row vectors of ``(Z/m)^3``; vector ``i`` is point ``i + 1``."""
    return [v for v in itertools.product(range(m), repeat=3) if any(v)]


def sl3_encoding(m: int) -> Encoding:
    """Unitriangular encoding of ``Z/m`` in ``SL3(Z/m)``.

    ``mul(x, y)`` is the commutator ``[g x g^-1, h y h^-1]``.  The inverted
    argument slots are written as powers ``x^(m-1)``, which is exact on the
    image of ``Enc`` because ``Enc(k)^m = 1``.
    """
    if m < 2:
        raise ValueError("modulus must be at least 2")
    one = Matrix3.identity(m)
    g = Matrix3.from_rows([[-1, 0, 0], [0, 0, 1], [0, 1, 0]], m)
    h = Matrix3.from_rows([[0, 1, 0], [1, 0, 0], [0, 0, -1]], m)
    gi, hi = g.inverse(), h.inverse()
    # g x g' h y h' (g x g')^-1 (h y h')^-1 = g x (g'h) y (h'g) x^-1 (g'h) y^-1 h'
    consts = (g, gi * h, hi * g, hi)
    c, v = CONST, VAR
    tokens = ([(c, 0), (v, 1), (c, 1), (v, 2), (c, 2)] + [(v, 1)] * (m - 1)
              + [(c, 1)] + [(v, 2)] * (m - 1) + [(c, 3)])
    mul = PolyMap(tuple(tokens), consts)
    add = PolyMap(((v, 1), (v, 2)), ())
    table = [Matrix3((1, 0, k, 0, 1, 0, 0, 0, 1), m) for k in range(m)]

    vectors = sl3_vectors(m)
    point = {vec: i + 1 for i, vec in enumerate(vectors)}
    basis = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]

    def to_perm(M: Matrix3) -> Permutation:
        imgs = []
        for x in vectors:
            y = tuple(sum(x[k] * M[k, j] for k in range(3)) % m for j in range(3))
            imgs.append(point[y])
        return Permutation(imgs)

    def from_perm(p: Permutation):
        if p.degree > len(vectors):
            return None
        rows = [vectors[p(point[b]) - 1] for b in basis]
        M = Matrix3.from_rows(rows, m)
        if M.det() != 1 or to_perm(M) != p:
            return None
        return M

    transvections = []
    for i in range(3):
        for j in range(3):
            if i != j:
                e = [1, 0, 0, 0, 1, 0, 0, 0, 1]
                e[3 * i + j] = 1
                transvections.append(Matrix3(e, m))
    return Encoding(
        name=f"sl3:{m}", m=m, enc_table=table, add=add, mul=mul, one=one,
        degree=len(vectors), to_perm=to_perm, from_perm=from_perm,
        generators=transvections,
    )


def encoding_by_name(name: str) -> Encoding:
    """``"s6"`` or ``"sl3:<m>"``."""
    if name == "s6":
        return s6_encoding()
    if name.startswith("sl3:"):
        try:
            m = int(name[4:])
        except ValueError:
            raise ValueError(f"bad modulus in encoding name {name!r}") from None
        return sl3_encoding(m)
    raise ValueError(f"unknown encoding {name!r}")


def verify_encoding(enc: Encoding, pairs: int | None = None,
                    rng: random.Random | None = None) -> bool:
    """Check that ``Enc`` is injective with ``Enc(0) = 1`` and that add and mul
    commute with the ring operations.

    All ``m^2`` pairs are checked unless ``pairs`` is given, in which case that
    many random pairs are drawn from ``rng``.
    """
    m = enc.m
    if enc.enc_table[0] != enc.one or len(set(enc.enc_table)) != m:
        return False
    if pairs is None:
        todo = itertools.product(range(m), repeat=2)
    else:
        rng = rng or random.Random(0)
        todo = ((rng.randrange(m), rng.randrange(m)) for _ in range(pairs))
    for k, l in todo:
        x, y = enc.enc_table[k], enc.enc_table[l]
        if enc.decode(enc.apply_add(x, y)) != (k + l) % m:
            return False
        if enc.decode(enc.apply_mul(x, y)) != (k * l) % m:
            return False
    return True
