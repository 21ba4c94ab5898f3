"""Key generation, encryption, decryption and homomorphic evaluation."""

from __future__ import annotations

import random
from typing import Sequence

from ..encoding import CONST
from ..errors import GrafhenError, MalformedCircuit, NotACipher
from ..perm import Permutation, random_symmetric
from ..rewrite.froidure_pin import froidure_pin
from ..rewrite.semidirect import combine_semidirect
from .config import SchemeConfig
from .keys import SecretKey, draw_generators, find_word_for
from .params import PublicParams

SELF_TEST_DRAWS = 4


# ---------------------------------------------------------------------------
# key generation

def _rules_for(config: SchemeConfig, gens, seed: int):
    return froidure_pin(gens, config.fp_options(seed))


def keygen_from_generators(config: SchemeConfig, gens: Sequence[Permutation],
                           rng: random.Random | None = None):
    """Build rules and public parameters for fixed generators."""
    rng = rng or random.Random(config.seed)
    gens = list(gens)
    info = {}
    if config.mode == "plain":
        res = _rules_for(config, gens, rng.getrandbits(32))
        rules = res.system
        info.update(rules=len(rules), elements=res.element_count,
                    complete=res.complete, stop=res.stop_reason)
    else:
        left, right = gens[:config.d], gens[config.d:]
        ra = _rules_for(config, left, rng.getrandbits(32))
        rb = _rules_for(config, right, rng.getrandbits(32))
        sk0 = SecretKey(config, gens)
        rules = combine_semidirect(ra.system, rb.system, left, right, sk0.chain)
        info.update(rules=len(rules), rules_left=len(ra.system),
                    rules_right=len(rb.system), complete=ra.complete and rb.complete,
                    stop=ra.stop_reason)
    sk = SecretKey(config, gens, rules)
    pp = build_public_params(sk, config.db_size, rng)
    pp.info.update(info)
    self_test(sk, pp, rng)
    return sk, pp


def keygen(config: SchemeConfig):
    """Draw a key as ``config`` says and return ``(secret_key, public_params)``.

    The whole run is driven by ``config.seed``, so equal configs give equal keys.
    """
    rng = random.Random(config.seed)
    if config.mode == "plain":
        gens = draw_generators(config.n, config.d, rng, config.want_pairwise,
                               config.generation_attempts)
    else:
        gens = (draw_generators(config.n, config.d, rng, config.want_pairwise,
                                config.generation_attempts)
                + draw_generators(config.n, config.d, rng, config.want_pairwise,
                                  config.generation_attempts))
    return keygen_from_generators(config, gens, rng)


def self_test(sk: SecretKey, pp: PublicParams, rng: random.Random) -> None:
    m = sk.enc.m
    for k in range(m):
        for _ in range(SELF_TEST_DRAWS):
            got = decrypt(sk, encrypt(sk, k, rng, pp.rules))
            if got != k:
                raise GrafhenError(f"self-test failed: {k} decrypted to {got}")
    if decrypt(sk, pp.one) != 1 % m or any(decrypt(sk, z) != 0 for z in pp.db):
        raise GrafhenError("self-test failed on public ciphers")


# ---------------------------------------------------------------------------
# private-key operations

def encrypt(sk: SecretKey, k: int, rng: random.Random, rules=None,
            reduce: bool = True) -> str:
    """Private-key encryption of the ring element ``k``.

    The word is reduced with ``rules`` (default: the key's own) unless
    ``reduce`` is false.
    """
    rules = rules if rules is not None else sk.rules
    target = sk.enc.to_perm(sk.enc.enc(k))
    if sk.mode == "plain":
        w = find_word_for(sk, target, rng)
    else:
        y = random_symmetric(sk.mask_points, rng)
        x = random_symmetric(sk.right_points, rng)
        e = target * y
        w = sk.word_for(e * x.inverse(), "left") + sk.word_for(x, "right")
    return rules.reduce(w) if reduce and rules is not None else w


def decrypt(sk: SecretKey, c: str) -> int:
    """Evaluate ``c`` and read off its ring element.

    Raises ``NotACipher`` when the value is outside the cipher set.
    """
    e = sk.project(c)
    if e is None:
        raise NotACipher("word does not evaluate into the cipher set")
    k = sk.enc.decode(e)
    if k is None:
        raise NotACipher("projection is not an encoded value")
    return k


# ---------------------------------------------------------------------------
# public operations

def build_public_params(sk: SecretKey, db_size: int, rng: random.Random) -> PublicParams:
    rules = sk.rules
    consts = [rules.reduce(w) for w in sk.constant_words()]
    one = encrypt(sk, 1, rng)
    db = [encrypt(sk, 0, rng) for _ in range(db_size)]
    return PublicParams(rules, sk.config.encoding, consts, one, db,
                        auto_reduce=sk.config.auto_reduce, combine=sk.config.combine)


def hom_add(pp: PublicParams, c1: str, c2: str) -> str:
    return pp.op(c1, c2)


def mul_group_ops(pp: PublicParams) -> int:
    """Number of concatenate-then-reduce steps one ``hom_mul`` takes."""
    plan, square = pp.mul_plan
    return len(plan) - 1 + int(square)


def hom_mul(pp: PublicParams, c1: str, c2: str) -> str:
    plan, square = pp.mul_plan
    acc = None
    for kind, j in plan:
        val = j if kind == CONST else (c1 if j == 1 else c2)
        acc = val if acc is None else pp.op(acc, val)
    if square:
        acc = pp.op(acc, acc)
    return acc


def hom_not(pp: PublicParams, c: str) -> str:
    """``c + 1``; over the binary field this is negation."""
    return pp.op(pp.one, c)


def fresh_zero(pp: PublicParams, rng: random.Random, count: int | None = None) -> str:
    count = pp.combine if count is None else count
    return pp.reduce("".join(rng.choice(pp.db) for _ in range(count)))


def cipher_of(pp: PublicParams, k: int, rng: random.Random) -> str:
    """Public-key encryption: ``k`` copies of the one-cipher and a fresh zero."""
    k %= pp.enc.m
    return pp.reduce(pp.one * k + fresh_zero(pp, rng))


def randomized_reduce(pp: PublicParams, c: str, iters: int, rng: random.Random,
                      zeros: Sequence[str] | None = None) -> str:
    """Multiply by random zero ciphers on a random side, keeping shorter results."""
    zeros = pp.db if zeros is None else zeros
    best = pp.reduce(c)
    for _ in range(iters):
        if not best:
            break
        z = rng.choice(zeros)
        cand = pp.reduce(best + z if rng.random() < 0.5 else z + best)
        if len(cand) < len(best):
            best = cand
    return best


# ---------------------------------------------------------------------------
# circuits

GATES = {"INPUT": 1, "CONST": 1, "ADD": 2, "MUL": 2, "NOT": 1}


def parse_circuit(text: str) -> list[tuple]:
    """One gate per line: ``INPUT i``, ``CONST k``, ``ADD a b``, ``MUL a b`` or
    ``NOT a``, where ``a``/``b`` index earlier gates.  The last gate is the
    output.  ``#`` starts a comment."""
    gates = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        op = line[0].upper()
        if op not in GATES or len(line) != GATES[op] + 1:
            raise MalformedCircuit(f"line {lineno}: cannot parse {raw.strip()!r}")
        try:
            args = tuple(int(a) for a in line[1:])
        except ValueError:
            raise MalformedCircuit(f"line {lineno}: arguments must be integers") from None
        gates.append((op, *args))
    check_circuit(gates)
    return gates


def check_circuit(gates: Sequence[tuple], num_inputs: int | None = None) -> None:
    if not gates:
        raise MalformedCircuit("empty circuit")
    for i, (op, *args) in enumerate(gates):
        if op not in GATES or len(args) != GATES[op]:
            raise MalformedCircuit(f"gate {i}: bad gate {op} {args}")
        if op == "INPUT":
            if args[0] < 0 or (num_inputs is not None and args[0] >= num_inputs):
                raise MalformedCircuit(f"gate {i}: input {args[0]} out of range")
        elif op != "CONST" and any(a < 0 or a >= i for a in args):
            raise MalformedCircuit(f"gate {i}: operands must name earlier gates")


def _run(gates, inputs, const, add, mul, neg):
    check_circuit(gates, len(inputs))
    vals = []
    for op, *args in gates:
        if op == "INPUT":
            v = inputs[args[0]]
        elif op == "CONST":
            v = const(args[0])
        elif op == "ADD":
            v = add(vals[args[0]], vals[args[1]])
        elif op == "MUL":
            v = mul(vals[args[0]], vals[args[1]])
        else:
            v = neg(vals[args[0]])
        vals.append(v)
    return vals[-1]


def eval_circuit(pp: PublicParams, gates: Sequence[tuple], inputs: Sequence[str],
                 rng: random.Random | None = None) -> str:
    rng = rng or random.Random(0)
    return _run(gates, inputs, lambda k: cipher_of(pp, k, rng),
                lambda a, b: hom_add(pp, a, b), lambda a, b: hom_mul(pp, a, b),
                lambda a: hom_not(pp, a))


def eval_plain(gates: Sequence[tuple], inputs: Sequence[int], m: int = 2) -> int:
    return _run(gates, inputs, lambda k: k % m, lambda a, b: (a + b) % m,
                lambda a, b: a * b % m, lambda a: (a + 1) % m)
