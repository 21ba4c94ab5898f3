"""Fixed generator tuples used by tests, examples and the CLI."""

from __future__ import annotations

from .perm import Permutation, parse_cycles

TOY_S9_CYCLES = (
    "(1,7,4,2,6)(3,5,9,8)",
    "(1,2,3)(5,6,7,9)",
    "(1,3)(2,8)(4,9,6,7,5)",
    "(1,8,3,5,7,6,2,9,4)",
    "(1,3,6,2,8,4,5,7)",
    "(1,2,6,4,9,8,5,7)",
    "(1,5)(2,9,4,7)(3,6,8)",
    "(1,3,7,4,8,6,9)",
)

TOY_S9_SAMPLE_RULES = (
    ("bcbdefa", "dbgbb"),
    ("gchfhcd", "adbagcg"),
    ("habhba", "eddcdb"),
    ("haghbfe", "bdbghgg"),
    ("aacecch", "gghhhb"),
    ("gahbggh", "ddebbf"),
    ("debghcf", "fgea"),
)

TOY_S9_ZERO_CIPHERS = frozenset({"", "eeffhaf", "ddgdfa", "afedg", "afcfgbf", "bafdaf"})
TOY_S9_ONE_CIPHERS = frozenset({"aehbfcf", "dhcfed", "adhcbc", "cachbf", "fhabhe", "dfbbc"})
TOY_S9_RULE_COUNT = 976_242

S9_TWO_CYCLES = ("(1,5)(2,4,8,7,9,3,6)", "(1,7,9,3)(2,5,6)")

# a = (1,2) and r = (1,3,2) on three points
S3_FP_CYCLES = ("(1,2)", "(1,3,2)")
S3_FP_RULES = (("aa", ""), ("aba", "bb"), ("abb", "ba"),
               ("bab", "a"), ("bba", "ab"), ("bbb", ""))
# two transpositions with relations a^2 = b^2 = (ab)^3 = 1
S3_COXETER_CYCLES = ("(1,2)", "(2,3)")
S3_COXETER_RULES = (("aa", ""), ("bb", ""), ("bab", "aba"))


def perms(cycles) -> list[Permutation]:
    return [parse_cycles(c) for c in cycles]


def toy_s9_generators() -> list[Permutation]:
    return perms(TOY_S9_CYCLES)
