"""Secret keys: generator tuples and everything derived from them."""

from __future__ import annotations

import io
import math
import random
from functools import cached_property
from typing import Sequence

import numpy as np

from ..encoding import Encoding
from ..errors import ConfigError, FormatError, GenerationFailed, GrafhenError
from ..perm import (Permutation, StabChain, format_cycles, generates,
                    pairwise_generating, parse_cycles, random_symmetric)
from ..rewrite.semidirect import shift_word
from ..rewrite.system import RewriteSystem
from ..words import BASE
from .config import SchemeConfig

KEY_MAGIC = "grafhen-key"


class SecretKey:
    """Generator tuple(s) of ``S_n`` plus the subgroup data of the scheme.

    Plain mode: ``d`` generators; ``L = S_deg x S_{deg+1..n}`` where ``deg`` is
    the degree of the encoding group, and ``pi`` restricts to ``1..deg``.

    Semidirect mode: a left tuple (alphabet ``A``) and a right tuple (alphabet
    ``B``).  A word is evaluated in ``S_n x| S_n``; with ``f(x, y) = xy`` and
    ``p(x, y) = y``, a word is a cipher when ``f`` lies in
    ``Enc(K) x S_{deg+1..n}`` and ``p`` lies in ``S_{1..r}`` with ``r = config.right_degree``.
    """

    def __init__(self, config: SchemeConfig, gens: Sequence[Permutation],
                 rules: RewriteSystem | None = None):
        self.config = config
        self.gens = list(gens)
        expected = config.d * (2 if config.mode == "sd" else 1)
        if len(self.gens) != expected:
            raise ConfigError(f"expected {expected} generators, got {len(self.gens)}")
        if any(g.degree > config.n for g in self.gens):
            raise ConfigError(f"generator moves a point above n={config.n}")
        self.rules = rules
        self.enc: Encoding = config.encoding_obj()
        self.n = config.n
        self.deg = self.enc.degree
        self._tuples = [g.as_tuple(self.n) for g in self.gens]

    # -- shape ------------------------------------------------------------
    @property
    def mode(self) -> str:
        return self.config.mode

    @property
    def d_a(self) -> int:
        return self.config.d

    @property
    def left_gens(self) -> list[Permutation]:
        return self.gens[:self.config.d]

    @property
    def right_gens(self) -> list[Permutation]:
        return self.gens[self.config.d:]

    @cached_property
    def chain(self) -> StabChain:
        """Chain over the left (or only) alphabet."""
        return StabChain(self.left_gens, degree=self.n)

    @cached_property
    def chain_right(self) -> StabChain:
        return StabChain(self.right_gens, degree=self.n)

    @property
    def right_points(self) -> range:
        return range(1, self.config.right_degree + 1)

    @property
    def mask_points(self) -> range:
        return range(self.deg + 1, self.n + 1)

    # -- evaluation -------------------------------------------------------
    def evaluate(self, word: str) -> Permutation:
        """Plain evaluation (the map ``f`` in semidirect mode)."""
        cur = list(range(self.n))
        tuples = self._tuples
        for c in word:
            t = tuples[ord(c) - BASE]
            cur = [t[x] for x in cur]
        return Permutation.from_zero_based(cur)

    def evaluate_right(self, word: str) -> Permutation:
        """``p`` of the semidirect evaluation: only letters of ``B`` count."""
        dA = self.d_a
        return self.evaluate("".join(c for c in word if ord(c) - BASE >= dA))

    def project(self, word: str):
        """``pi`` of the word's value, or ``None`` when the word is not in ``L``."""
        return self._project_perm(self.evaluate(word), word)

    def _project_perm(self, g: Permutation, word: str | None = None):
        deg = self.deg
        img = [g(i) for i in range(1, deg + 1)]
        if any(x > deg for x in img):
            return None
        if self.mode == "sd" and word is not None:
            p = self.evaluate_right(word)
            if p.degree > self.config.right_degree:
                return None
        return self.enc.from_perm(Permutation(img))

    # -- word problem -----------------------------------------------------
    def word_for(self, g: Permutation, side: str = "left") -> str:
        """Inverse-free word for ``g`` over one alphabet, reduced if rules are known."""
        if side == "left":
            w, rs, offset = self.chain.factorize(g), self._rules_left(), 0
        else:
            w, rs, offset = self.chain_right.factorize(g), self._rules_right(), self.d_a
        if rs is not None:
            w = rs.reduce(w)
        return shift_word(w, offset) if offset else w

    def _rules_left(self):
        if self.rules is None:
            return None
        return getattr(self.rules, "rs_a", self.rules)

    def _rules_right(self):
        return getattr(self.rules, "rs_b", None)

    @cached_property
    def l_generators(self) -> list[Permutation]:
        """Generators of ``L`` (plain mode): ``E`` generators and adjacent
        transpositions of the masking points."""
        gens = self.enc.perm_generators()
        gens += [Permutation.from_cycles([(i, i + 1)]) for i in range(self.deg + 1, self.n)]
        return gens

    @cached_property
    def l_words(self) -> list[str]:
        return [self.word_for(g) for g in self.l_generators]

    def constant_perms(self) -> list[Permutation]:
        return [self.enc.to_perm(c) for c in self.enc.mul.constants]

    def constant_words(self) -> list[str]:
        return [self.word_for(p) for p in self.constant_perms()]


# ---------------------------------------------------------------------------
# generation

def draw_generators(n: int, d: int, rng: random.Random, pairwise: bool = False,
                    attempts: int = 1000) -> list[Permutation]:
    """Uniform random ``d``-tuples of ``S_n`` until one generates ``S_n``."""
    points = range(1, n + 1)
    for _ in range(attempts):
        gens = [random_symmetric(points, rng) for _ in range(d)]
        ok = pairwise_generating(gens, n) if pairwise and d >= 2 else generates(gens, n)
        if ok:
            return gens
    raise GenerationFailed(f"no generating {d}-tuple of S_{n} in {attempts} attempts")


def keyspace_bits(config_or_mode, n: int | None = None, d: int | None = None) -> float:
    """``log2`` of the number of essentially different keys, ``(d-1) log2(n!)``.

    Keys related by an automorphism of ``S_n`` give the same rules; for the
    semidirect mode the count of one side is used, since recovering one side
    exposes the other.
    """
    if isinstance(config_or_mode, SchemeConfig):
        n, d = config_or_mode.n, config_or_mode.d
    if d is None or n is None:
        raise ValueError("need n and d")
    if d <= 1:
        return 0.0
    return (d - 1) * math.lgamma(n + 1) / math.log(2)


# ---------------------------------------------------------------------------
# key files

def format_key(sk: SecretKey) -> str:
    cfg = sk.config
    buf = io.StringIO()
    buf.write(f"{KEY_MAGIC} v1 mode={cfg.mode} n={cfg.n} d={cfg.d} "
              f"enc={cfg.encoding} seed={cfg.seed:x}")
    if cfg.mode == "sd":
        buf.write(f" xdeg={cfg.right_degree}")
    buf.write("\n")
    for g in sk.left_gens:
        buf.write(format_cycles(g) + "\n")
    if cfg.mode == "sd":
        buf.write("---\n")
        for g in sk.right_gens:
            buf.write(format_cycles(g) + "\n")
    return buf.getvalue()


def parse_key(text: str, **config_overrides) -> SecretKey:
    lines = [l.strip() for l in text.splitlines() if l.strip()]
    if not lines:
        raise FormatError("empty key file")
    parts = lines[0].split()
    if len(parts) < 2 or parts[0] != KEY_MAGIC or parts[1] != "v1":
        raise FormatError(f"expected a '{KEY_MAGIC} v1' header")
    fields = dict(p.partition("=")[::2] for p in parts[2:])
    try:
        cfg = SchemeConfig(mode=fields["mode"], n=int(fields["n"]), d=int(fields["d"]),
                           encoding=fields.get("enc", "s6"),
                           seed=int(fields.get("seed", "0"), 16),
                           x_degree=int(fields["xdeg"]) if "xdeg" in fields else None,
                           **config_overrides)
    except (KeyError, ValueError) as exc:
        raise FormatError(f"bad key header: {lines[0]!r} ({exc})") from exc
    body = lines[1:]
    if cfg.mode == "sd":
        if body.count("---") != 1:
            raise FormatError("semidirect key needs exactly one '---' separator")
        i = body.index("---")
        body = body[:i] + body[i + 1:]
    try:
        gens = [parse_cycles(l) for l in body]
        return SecretKey(cfg, gens)
    except (ValueError, GrafhenError) as exc:
        raise FormatError(str(exc)) from exc


def save_key(sk: SecretKey, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_key(sk))


def load_key(path, **config_overrides) -> SecretKey:
    with open(path, encoding="utf-8") as fh:
        return parse_key(fh.read(), **config_overrides)


def _np_rng(rng: random.Random) -> np.random.Generator:
    return np.random.default_rng(rng.getrandbits(64))


def find_word_for(sk: SecretKey, target: Permutation, rng: random.Random,
                  factors: int = 100, batch: int = 1024,
                  max_attempts: int = 1_000_000) -> str:
    """Random product of ``factors`` or ``factors + 1`` words for generators of
    ``L`` whose value restricts to ``target`` on the encoding points.

    All generators of ``L`` are transpositions, so a fixed factor count would
    pin the parity of the masking part; the count is drawn from two adjacent
    values to reach all of ``L``.  Candidates are drawn in vectorized batches
    and the first match in a batch is used.
    """
    gen = _np_rng(rng)
    n, deg = sk.n, sk.deg
    lg = np.array([g.as_tuple(n) for g in sk.l_generators] + [tuple(range(n))],
                  dtype=np.int16)
    ident = len(lg) - 1
    want = np.array([target(i) - 1 for i in range(1, deg + 1)], dtype=np.int16)
    tried = 0
    while tried < max_attempts:
        choice = gen.integers(0, ident, size=(batch, factors + 1))
        choice[gen.random(batch) < 0.5, factors] = ident
        cur = np.tile(np.arange(n, dtype=np.int16), (batch, 1))
        for step in range(factors + 1):
            cur = np.take_along_axis(lg[choice[:, step]], cur, axis=1)
        hits = np.flatnonzero((cur[:, :deg] == want).all(axis=1))
        if hits.size:
            words = sk.l_words + [""]
            return "".join(words[c] for c in choice[hits[0]].tolist())
        tried += batch
    raise GrafhenError(f"no matching product in {max_attempts} attempts")
