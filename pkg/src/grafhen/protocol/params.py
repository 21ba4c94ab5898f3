"""Public parameters: rules, lifted constants, a cipher of one and zero ciphers."""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from functools import cached_property

from ..encoding import CONST, Encoding, WordPolyMap, encoding_by_name, lift_polymap
from ..errors import FormatError
from ..rewrite.semidirect import SemidirectSystem, split_semidirect
from ..rewrite.system import RULES_MAGIC, RewriteSystem, read_rules, write_rules
from ..words import format_word, parse_word

PARAMS_MAGIC = "grafhen-params"


@dataclass
class PublicParams:
    rules: RewriteSystem
    encoding: str
    const_words: list
    one: str
    db: list
    auto_reduce: bool = True
    combine: int = 8
    info: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def d(self) -> int:
        return self.rules.d

    @property
    def split(self) -> int | None:
        return self.rules.d_a if isinstance(self.rules, SemidirectSystem) else None

    @cached_property
    def enc(self) -> Encoding:
        return encoding_by_name(self.encoding)

    @cached_property
    def mul_map(self) -> WordPolyMap:
        return lift_polymap(self.enc.mul, self.const_words)

    @cached_property
    def mul_plan(self) -> tuple[list, bool]:
        """Tokens of the lifted mul map with adjacent constants merged into one
        reduced word and, when the map is a square ``TT``, only the half ``T``."""
        tokens = list(self.enc.mul.tokens)
        half = len(tokens) // 2
        square = len(tokens) % 2 == 0 and tokens[:half] == tokens[half:]
        if square:
            tokens = tokens[:half]
        plan = []
        for kind, j in tokens:
            if kind == CONST:
                w = self.const_words[j]
                if plan and plan[-1][0] == CONST:
                    plan[-1] = (CONST, self.reduce(plan[-1][1] + w))
                else:
                    plan.append((CONST, w))
            else:
                plan.append((kind, j))
        return plan, square

    def reduce(self, w: str) -> str:
        return self.rules.reduce(w)

    def op(self, x: str, y: str) -> str:
        """One homomorphic group operation: concatenate, then reduce if enabled."""
        w = x + y
        return self.rules.reduce(w) if self.auto_reduce else w


def format_params(pp: PublicParams) -> str:
    buf = io.StringIO()
    write_params(pp, buf)
    return buf.getvalue()


def write_params(pp: PublicParams, fh) -> None:
    fh.write(f"{PARAMS_MAGIC} v1\n")
    fh.write(f"enc={pp.encoding}\n")
    if pp.split is not None:
        fh.write(f"split={pp.split}\n")
    write_rules(pp.rules, fh)
    for i, w in enumerate(pp.const_words, start=1):
        fh.write(f"w{i}={format_word(w)}\n")
    fh.write(f"one={format_word(pp.one)}\n")
    for w in pp.db:
        fh.write(format_word(w) + "\n")


def read_params(lines) -> PublicParams:
    it = iter(lines)
    try:
        header = next(it).strip()
    except StopIteration:
        raise FormatError("empty params file") from None
    if header != f"{PARAMS_MAGIC} v1":
        raise FormatError(f"expected a '{PARAMS_MAGIC} v1' header")
    encoding = "s6"
    split = None
    line = next(it, "")
    while not line.startswith(RULES_MAGIC):
        key, sep, value = line.strip().partition("=")
        if not sep:
            raise FormatError(f"unexpected line before rules: {line.strip()!r}")
        if key == "enc":
            encoding = value
        elif key == "split":
            split = int(value)
        else:
            raise FormatError(f"unknown params field {key!r}")
        line = next(it, None)
        if line is None:
            raise FormatError("params file has no rules section")

    def chained():
        yield line
        yield from it

    body = chained()
    rules = read_rules(body, shortlex=split is None)
    if split is not None:
        rules = split_semidirect(rules, split)
    try:
        enc = encoding_by_name(encoding)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
    consts = []
    one = None
    db = []
    for raw in body:
        raw = raw.strip()
        if not raw:
            continue
        try:
            if raw.startswith("one="):
                one = parse_word(raw[4:], rules.d)
            elif raw.startswith("w") and "=" in raw:
                consts.append(parse_word(raw.partition("=")[2], rules.d))
            else:
                db.append(parse_word(raw, rules.d))
        except ValueError as exc:
            raise FormatError(str(exc)) from exc
    if one is None:
        raise FormatError("params file has no one= line")
    if len(consts) != len(enc.mul.constants):
        raise FormatError(f"expected {len(enc.mul.constants)} constant words")
    return PublicParams(rules, encoding, consts, one, db)


def parse_params(text: str) -> PublicParams:
    return read_params(text.splitlines())


def save_params(pp: PublicParams, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        write_params(pp, fh)


def load_params(path) -> PublicParams:
    with open(path, encoding="utf-8") as fh:
        return read_params(fh)


def format_ciphers(words) -> str:
    return "".join(format_word(w) + "\n" for w in words)


def parse_ciphers(text: str, d: int | None = None) -> list[str]:
    try:
        return [parse_word(l, d) for l in text.splitlines() if l.strip()]
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
