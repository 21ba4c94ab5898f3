"""Command-line interface.

Exit codes: 0 success, 1 other failure, 2 usage/config/format error,
3 budget or search-space guard exceeded, 4 a word is not a cipher under the
given key.
"""

from __future__ import annotations

import argparse
import json
import os
import platform
import random
import secrets
import statistics
import sys
import time

from . import attacks
from .errors import (BudgetExceeded, ConfigError, FormatError, GrafhenError,
                     MalformedCircuit, MemoryBudgetExceeded, NotACipher,
                     SearchSpaceTooLarge)
from .perm import format_cycles
from .presets import toy_s9_generators
from .protocol import (SchemeConfig, cipher_of, decrypt, encrypt, eval_circuit,
                       format_ciphers, keygen, keygen_from_generators, keyspace_bits,
                       load_key, load_params, parse_ciphers, parse_circuit, save_key,
                       save_params)
from .rewrite.system import load_rules, save_rules
from .words import format_word, parse_word

EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_NOT_CIPHER = 4


class UsageError(GrafhenError):
    pass


def _emit(args, record: dict, order=None) -> None:
    """Print ``record`` as JSON or as ``key<TAB>value`` lines."""
    if getattr(args, "json", False):
        print(json.dumps(record, sort_keys=True))
        return
    for k in order or record:
        v = record[k]
        if isinstance(v, float):
            v = f"{v:.6g}"
        elif isinstance(v, (list, dict)):
            v = json.dumps(v, sort_keys=True)
        print(f"{k}\t{v}")


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    seed = secrets.randbits(63)
    print(f"seed\t{seed}", file=sys.stderr)
    return seed


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc


def _load_key(path):
    try:
        return load_key(path)
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc


def _load_params(path):
    try:
        return load_params(path)
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc


def _write(path: str | None, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# keygen

def cmd_keygen(args) -> int:
    seed = _seed(args)
    cfg = SchemeConfig(mode=args.mode, n=args.n, d=args.d, seed=seed, encoding=args.enc,
                       filter="strict_shorter" if args.strict_shorter else args.filter,
                       k=args.k, stop=args.stop, max_rules=args.max_rules,
                       db_size=args.db_size, combine=args.combine)
    bits = keyspace_bits(cfg)
    if not args.json:
        print(f"keyspace ≈ 2^{bits:.1f}")
    if args.dry_run:
        if args.json:
            _emit(args, {"keyspace_bits": bits})
        return 0
    t0 = time.perf_counter()
    if args.preset == "toy-s9":
        if (cfg.n, cfg.d, cfg.mode) != (9, 8, "plain"):
            raise ConfigError("preset toy-s9 needs --n 9 --d 8 --mode plain")
        sk, pp = keygen_from_generators(cfg, toy_s9_generators())
    else:
        sk, pp = keygen(cfg)
    elapsed = time.perf_counter() - t0
    if args.out_key:
        save_key(sk, args.out_key)
    if args.out_params:
        save_params(pp, args.out_params)
    if args.out_rules:
        save_rules(pp.rules, args.out_rules)
    record = {"self_test": "OK", "rules": len(pp.rules), "seed": seed,
              "keyspace_bits": round(bits, 3), "seconds": round(elapsed, 3)}
    record.update({k: v for k, v in pp.info.items() if not k.startswith("_")})
    _emit(args, record)
    return 0


# ---------------------------------------------------------------------------
# encrypt / decrypt / eval

def _parse_bits(text: str, m: int) -> list[int]:
    if not text or any(not c.isdigit() or int(c) >= m for c in text):
        raise UsageError(f"--bits must be digits below {m}")
    return [int(c) for c in text]


def cmd_encrypt(args) -> int:
    if not args.key and not args.params:
        raise UsageError("encrypt needs --key or --params")
    rng = random.Random(_seed(args))
    pp = _load_params(args.params) if args.params else None
    if args.key:
        sk = _load_key(args.key)
        rules = pp.rules if pp is not None else None
        words = [encrypt(sk, b, rng, rules) for b in _parse_bits(args.bits, sk.enc.m)]
    else:
        words = [cipher_of(pp, b, rng) for b in _parse_bits(args.bits, pp.enc.m)]
    _write(args.out, format_ciphers(words))
    return 0


def _read_ciphers(paths, d=None) -> list[str]:
    words = []
    for p in paths:
        words += parse_ciphers(_read(p), d)
    return words


def cmd_decrypt(args) -> int:
    if not args.key:
        raise UsageError("decryption needs the secret key (--key)")
    sk = _load_key(args.key)
    words = _read_ciphers([args.in_], len(sk.gens))
    print("".join(str(decrypt(sk, w)) for w in words))
    return 0


def cmd_eval(args) -> int:
    pp = _load_params(args.params)
    gates = parse_circuit(_read(args.circuit))
    inputs = _read_ciphers(args.in_, pp.d)
    rng = random.Random(args.seed if args.seed is not None else 0)
    out = eval_circuit(pp, gates, inputs, rng)
    _write(args.out, format_ciphers([out]))
    return 0


# ---------------------------------------------------------------------------
# bench

def bench(pp, samples: int, rng: random.Random, pool: int = 64) -> dict:
    """Latency of one concatenate-then-reduce on pairs of reduced ciphers.

    AND costs five such operations, so its figure is five times the measured
    one; key generation and I/O are excluded.
    """
    if samples < 1:
        raise UsageError("--samples must be positive")
    ciphers = [cipher_of(pp, rng.randrange(pp.enc.m), rng) for _ in range(pool)]
    pairs = [(rng.choice(ciphers), rng.choice(ciphers)) for _ in range(samples)]
    reduce = pp.rules.reduce
    for x, y in pairs[:min(samples, 32)]:
        reduce(x + y)
    times = []
    clock = time.perf_counter_ns
    for x, y in pairs:
        t = clock()
        reduce(x + y)
        times.append(clock() - t)
    times.sort()
    med = statistics.median(times) / 1e3
    mean = statistics.fmean(times) / 1e3
    p99 = times[min(len(times) - 1, int(0.99 * len(times)))] / 1e3
    return {
        "samples": samples,
        "op_median_us": med,
        "op_mean_us": mean,
        "op_p99_us": p99,
        "and_median_us": 5 * med,
        "and_mean_us": 5 * mean,
        "rules": len(pp.rules),
        "alphabet": pp.d,
        "mean_cipher_len": statistics.fmean(len(c) for c in ciphers),
        "environment": f"{platform.python_implementation()} {platform.python_version()} "
                       f"{platform.machine()}",
    }


def cmd_bench(args) -> int:
    if args.samples < 1:
        raise UsageError("--samples must be positive")
    pp = _load_params(args.params)
    rng = random.Random(args.seed if args.seed is not None else 0)
    _emit(args, bench(pp, args.samples, rng))
    return 0


# ---------------------------------------------------------------------------
# challenges and attacks

def cmd_challenge(args) -> int:
    sk = _load_key(args.key)
    pp = _load_params(args.params)
    rng = random.Random(_seed(args))
    zeros = pp.db[:args.zeros]
    ch = attacks.make_challenge(sk, pp, args.count, rng, zeros=zeros)
    ref = os.path.relpath(os.path.abspath(args.params),
                          os.path.dirname(os.path.abspath(args.out)))
    attacks.save_challenge(ch, args.out, ref, "params", with_solution=not args.no_solution)
    return 0


def cmd_attack(args) -> int:
    ch = attacks.load_challenge(args.challenge)
    rng = random.Random(args.seed if args.seed is not None else 0)
    if args.method == "brute":
        if ch.n is None:
            raise FormatError("challenge header lacks n=")
        rep = attacks.brute_force_key(ch.rules, ch.n, ch.zeros, ch.words, ch.solution)
    elif args.method == "randred":
        rep = attacks.random_reduction_attack(ch, args.budget or 1000, rng)
    elif args.method == "genrel":
        letters = list(args.letters) if args.letters else None
        rep = attacks.genrel_report(ch, letters, args.budget or 100_000)
    elif args.method == "redund":
        t0 = time.perf_counter()
        flagged = attacks.redundancy_probe(ch.rules, max_elements=args.budget or 10_000)
        rep = attacks.AttackReport("redund", [], time.perf_counter() - t0, None,
                                   {"redundant": "".join(flagged)})
    else:
        rep = attacks.cipher_relation_report(ch, max_elements=args.budget or 10_000)
    _emit(args, rep.as_dict())
    return 0


# ---------------------------------------------------------------------------
# inspect / reduce

def cmd_inspect(args) -> int:
    if args.rules:
        rs = load_rules(args.rules)
        _emit(args, rs.stats())
    elif args.params:
        pp = _load_params(args.params)
        rec = pp.rules.stats()
        rec.update(encoding=pp.encoding, db_size=len(pp.db), one=format_word(pp.one),
                   constants=[format_word(w) for w in pp.const_words])
        if pp.split is not None:
            rec["split"] = pp.split
        _emit(args, rec)
    elif args.key:
        sk = _load_key(args.key)
        _emit(args, {"mode": sk.mode, "n": sk.n, "d": sk.config.d,
                     "encoding": sk.config.encoding,
                     "generators": [format_cycles(g) for g in sk.gens],
                     "keyspace_bits": keyspace_bits(sk.config)})
    else:
        raise UsageError("inspect needs --rules, --params or --key")
    return 0


def cmd_reduce(args) -> int:
    if args.rules:
        rs = load_rules(args.rules)
    elif args.params:
        rs = _load_params(args.params).rules
    else:
        raise UsageError("reduce needs --rules or --params")
    try:
        w = parse_word(args.word, rs.d)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    print(format_word(rs.reduce(w)))
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="grafhen", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, seed=True):
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        if seed:
            sp.add_argument("--seed", type=int, default=None)

    k = sub.add_parser("keygen", help="generate a key and public parameters")
    k.add_argument("--n", type=int, default=9)
    k.add_argument("--d", type=int, default=4)
    k.add_argument("--mode", choices=("plain", "sd"), default="plain")
    k.add_argument("--enc", default="s6")
    k.add_argument("--k", type=int, default=5)
    k.add_argument("--filter", default="none",
                   choices=("none", "admissible", "strict_shorter", "both"))
    k.add_argument("--strict-shorter", action="store_true")
    k.add_argument("--stop", default="complete",
                   choices=("complete", "pseudo_bounded", "max_rules"))
    k.add_argument("--max-rules", type=int, default=None)
    k.add_argument("--db-size", type=int, default=256)
    k.add_argument("--combine", type=int, default=8)
    k.add_argument("--preset", choices=("toy-s9",), default=None)
    k.add_argument("--out-key")
    k.add_argument("--out-params")
    k.add_argument("--out-rules")
    k.add_argument("--dry-run", action="store_true", help="print the keyspace and stop")
    common(k)
    k.set_defaults(func=cmd_keygen)

    e = sub.add_parser("encrypt", help="encrypt a digit string")
    e.add_argument("--key")
    e.add_argument("--params")
    e.add_argument("--bits", required=True)
    e.add_argument("--out")
    common(e)
    e.set_defaults(func=cmd_encrypt)

    dcr = sub.add_parser("decrypt", help="decrypt a cipher file")
    dcr.add_argument("--key")
    dcr.add_argument("--params")
    dcr.add_argument("--in", dest="in_", required=True)
    common(dcr, seed=False)
    dcr.set_defaults(func=cmd_decrypt)

    ev = sub.add_parser("eval", help="evaluate a gate list on cipher files")
    ev.add_argument("--params", required=True)
    ev.add_argument("--circuit", required=True)
    ev.add_argument("--in", dest="in_", nargs="+", required=True)
    ev.add_argument("--out")
    common(ev)
    ev.set_defaults(func=cmd_eval)

    b = sub.add_parser("bench", help="time concatenate-then-reduce")
    b.add_argument("--params", required=True)
    b.add_argument("--samples", type=int, default=10_000)
    common(b)
    b.set_defaults(func=cmd_bench)

    c = sub.add_parser("challenge", help="write a challenge file")
    c.add_argument("--key", required=True)
    c.add_argument("--params", required=True)
    c.add_argument("--count", type=int, default=20)
    c.add_argument("--zeros", type=int, default=8, help="known zero ciphers to publish")
    c.add_argument("--no-solution", action="store_true")
    c.add_argument("--out", required=True)
    common(c)
    c.set_defaults(func=cmd_challenge)

    a = sub.add_parser("attack", help="run an attack on a challenge file")
    a.add_argument("method", choices=("brute", "randred", "genrel", "redund", "ciphrel"))
    a.add_argument("--challenge", required=True)
    a.add_argument("--budget", type=int, default=None,
                   help="iterations per word (randred) or element budget")
    a.add_argument("--letters", default=None, help="letters for genrel")
    common(a)
    a.set_defaults(func=cmd_attack)

    i = sub.add_parser("inspect", help="show statistics of a file")
    g = i.add_mutually_exclusive_group()
    g.add_argument("--rules")
    g.add_argument("--params")
    g.add_argument("--key")
    common(i, seed=False)
    i.set_defaults(func=cmd_inspect)

    r = sub.add_parser("reduce", help="reduce a word")
    g = r.add_mutually_exclusive_group()
    g.add_argument("--rules")
    g.add_argument("--params")
    r.add_argument("--word", required=True)
    r.set_defaults(func=cmd_reduce)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NotACipher as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_CIPHER
    except (BudgetExceeded, MemoryBudgetExceeded, SearchSpaceTooLarge) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, ConfigError, FormatError, MalformedCircuit) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GrafhenError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
