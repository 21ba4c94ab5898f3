import itertools
import random

import pytest

from grafhen.errors import ConfigError, FormatError, MalformedCircuit, NotACipher
from grafhen.perm import parse_cycles
from grafhen.presets import TOY_S9_ONE_CIPHERS, TOY_S9_ZERO_CIPHERS
from grafhen.protocol import (SchemeConfig, cipher_of, decrypt, encrypt, eval_circuit,
                              eval_plain, format_key, format_params, fresh_zero, hom_add,
                              hom_mul, hom_not, keygen, keyspace_bits, mul_group_ops,
                              parse_circuit, parse_key, parse_params, randomized_reduce)

CONFIGS = {
    "plain-n7-d4": SchemeConfig(n=7, d=4, seed=1, db_size=32),
    "plain-n7-d8": SchemeConfig(n=7, d=8, seed=2, db_size=32),
    "plain-n8-d5": SchemeConfig(n=8, d=5, seed=3, db_size=32),
    "plain-n9-d4": SchemeConfig(n=9, d=4, seed=4, db_size=32),
    "plain-n8-sl3": SchemeConfig(n=8, d=4, seed=5, encoding="sl3:2", db_size=32),
    "sd-n7-d3": SchemeConfig(mode="sd", n=7, d=3, seed=6, filter="admissible", k=4,
                             stop="pseudo_bounded", check_floor=5000, check_every=5000,
                             db_size=32),
}
INSTANCES = 100

_keys = {}


def key(name):
    if name not in _keys:
        _keys[name] = keygen(CONFIGS[name])
    return _keys[name]


@pytest.mark.parametrize("name", list(CONFIGS))
def test_round_trip_and_truth_tables(name):
    sk, pp = key(name)
    rng = random.Random(hash(name) & 0xFFFF)
    m = sk.enc.m
    pool = {k: [encrypt(sk, k, rng) for _ in range(INSTANCES)] for k in range(m)}
    for k, ciphers in pool.items():
        assert all(decrypt(sk, c) == k for c in ciphers)
    for x, y in itertools.product(range(m), repeat=2):
        ys = pool[y][:]
        rng.shuffle(ys)
        for cx, cy in zip(pool[x], ys):
            assert decrypt(sk, hom_add(pp, cx, cy)) == (x + y) % m
            assert decrypt(sk, hom_mul(pp, cx, cy)) == x * y % m
        for cx in pool[x]:
            assert decrypt(sk, hom_not(pp, cx)) == (x + 1) % m


def test_public_operations(small_plain, rng):
    sk, pp = small_plain
    for _ in range(100):
        z = fresh_zero(pp, rng)
        assert decrypt(sk, z) == 0
        assert decrypt(sk, cipher_of(pp, 1, rng)) == 1
        assert decrypt(sk, cipher_of(pp, 0, rng)) == 0
    assert decrypt(sk, pp.one) == 1
    assert all(decrypt(sk, z) == 0 for z in pp.db)


def test_fresh_zero_is_reduced_not_concatenated(small_sd, rng):
    sk, pp = small_sd
    differs = 0
    for _ in range(100):
        state = rng.getstate()
        z = fresh_zero(pp, rng)
        rng.setstate(state)
        concat = "".join(rng.choice(pp.db) for _ in range(pp.combine))
        assert pp.rules.reduce(z) == z
        differs += z != concat
    assert differs == 100


def test_mul_takes_five_group_operations(small_plain, toy):
    assert mul_group_ops(small_plain[1]) == 5
    assert mul_group_ops(toy[1]) == 5


def test_mul_matches_lifted_map(small_plain, rng):
    sk, pp = small_plain
    for _ in range(20):
        x, y = encrypt(sk, rng.randrange(2), rng), encrypt(sk, rng.randrange(2), rng)
        assert hom_mul(pp, x, y) == pp.reduce(pp.mul_map.apply(x, y))


def test_empty_word_and_non_ciphers(small_plain):
    sk, pp = small_plain
    assert decrypt(sk, "") == 0
    # a word for (1,2) lies outside Enc(F2) x S_{7..n}
    w = sk.word_for(parse_cycles("(1,2)"))
    with pytest.raises(NotACipher):
        decrypt(sk, w)
    assert hom_add(pp, pp.one, "") == pp.one


def test_toy_cipher_sets(toy, rng):
    sk, pp = toy
    zeros = {encrypt(sk, 0, rng) for _ in range(300)}
    ones = {encrypt(sk, 1, rng) for _ in range(300)}
    assert zeros == TOY_S9_ZERO_CIPHERS
    assert ones == TOY_S9_ONE_CIPHERS
    assert decrypt(sk, "aehbfcf") == 1


def test_encryptions_differ(small_plain, small_sd, rng):
    sk, _ = small_plain
    raw = [encrypt(sk, 0, rng, reduce=False) for _ in range(20)]
    assert len(set(raw)) == 20
    assert all(decrypt(sk, c) == 0 for c in raw)
    # semidirect ciphers of 0 at n = 7 range over the 4! choices of x
    sk, _ = small_sd
    assert len({encrypt(sk, 0, rng) for _ in range(60)}) >= 12


def test_randomized_reduce(toy, small_plain, rng):
    sk, pp = toy
    for z in sorted(TOY_S9_ZERO_CIPHERS):
        assert randomized_reduce(pp, z, 1000, rng) == ""
    sk2, pp2 = small_plain
    for _ in range(20):
        c = encrypt(sk2, 1, rng)
        long = c + "".join(rng.choice(pp2.db) for _ in range(30))
        r = randomized_reduce(pp2, long, 200, rng)
        assert decrypt(sk2, r) == 1
        assert len(r) <= len(pp2.reduce(long))
    assert randomized_reduce(pp2, "abcd", 0, rng) == pp2.reduce("abcd")


def test_keyspace_bits():
    assert keyspace_bits("plain", 11, 5) == pytest.approx(101.0, abs=0.1)
    assert keyspace_bits("plain", 9, 8) == pytest.approx(129.3, abs=0.05)
    assert keyspace_bits("plain", 9, 1) == 0.0
    cfg = SchemeConfig(mode="sd", n=11, d=5)
    assert keyspace_bits(cfg) == pytest.approx(101.0, abs=0.1)


CIRCUITS = {
    "nand": ("INPUT 0\nINPUT 1\nMUL 0 1\nNOT 2\n", 2),
    # majority(x, y, z) = xy + yz + zx over F2
    "maj": ("INPUT 0\nINPUT 1\nINPUT 2\nMUL 0 1\nMUL 1 2\nMUL 2 0\nADD 3 4\nADD 6 5\n", 3),
    "id": ("INPUT 0\n", 1),
    "const": ("INPUT 0\nCONST 1\nADD 0 1\n", 1),
}


@pytest.mark.parametrize("name", list(CIRCUITS))
def test_circuits(name, small_plain, rng):
    sk, pp = small_plain
    text, arity = CIRCUITS[name]
    gates = parse_circuit(text)
    for bits in itertools.product(range(2), repeat=arity):
        inputs = [encrypt(sk, b, rng) for b in bits]
        out = eval_circuit(pp, gates, inputs, rng)
        assert decrypt(sk, out) == eval_plain(gates, bits)
        if name == "id":
            assert out == inputs[0]


def test_plain_majority_oracle():
    gates = parse_circuit(CIRCUITS["maj"][0])
    for bits in itertools.product(range(2), repeat=3):
        assert eval_plain(gates, bits) == int(sum(bits) >= 2)


@pytest.mark.parametrize("text", ["", "ADD 0 1\n", "INPUT 0\nNOT 1\n", "FOO 1\n",
                                  "INPUT x\n", "INPUT 0\nMUL 0\n"])
def test_malformed_circuits(text):
    with pytest.raises(MalformedCircuit):
        parse_circuit(text)


def test_key_and_params_round_trip(small_plain, small_sd):
    for sk, pp in (small_plain, small_sd):
        text = format_key(sk)
        assert format_key(parse_key(text)) == text
        ptext = format_params(pp)
        back = parse_params(ptext)
        assert format_params(back) == ptext
        assert back.rules.rule_set() == pp.rules.rule_set()
        assert "(" not in ptext


def test_sd_key_header_records_split(small_sd):
    sk, pp = small_sd
    header = format_key(sk).splitlines()[0]
    assert header.startswith("grafhen-key v1 mode=sd n=7 d=3 enc=s6 seed=6")
    assert "xdeg=4" in header
    assert format_key(sk).count("---") == 1
    assert "split=3" in format_params(pp)


def test_determinism():
    cfg = SchemeConfig(n=7, d=4, seed=9, db_size=16)
    sk1, pp1 = keygen(cfg)
    sk2, pp2 = keygen(cfg)
    assert format_key(sk1) == format_key(sk2)
    assert format_params(pp1) == format_params(pp2)
    r1, r2 = random.Random(3), random.Random(3)
    assert [encrypt(sk1, 1, r1) for _ in range(5)] == [encrypt(sk2, 1, r2) for _ in range(5)]


@pytest.mark.parametrize("changes", [dict(mode="other"), dict(n=6), dict(filter="x"),
                                     dict(stop="max_rules"), dict(db_size=1),
                                     dict(encoding="sl3:1"), dict(d=27)])
def test_config_errors(changes):
    with pytest.raises(ConfigError):
        SchemeConfig(**changes)


@pytest.mark.parametrize("text", ["", "grafhen-key v2 mode=plain n=7 d=1\n()\n",
                                  "grafhen-key v1 mode=plain n=7 d=1\n(1,2\n",
                                  "grafhen-key v1 mode=sd n=7 d=1\n(1,2)\n(2,3)\n"])
def test_bad_key_files(text):
    with pytest.raises(FormatError):
        parse_key(text)


def test_bad_params_files(small_plain):
    text = format_params(small_plain[1])
    with pytest.raises(FormatError):
        parse_params(text.replace("grafhen-params v1", "params v1"))
    with pytest.raises(FormatError):
        parse_params("\n".join(l for l in text.splitlines() if not l.startswith("one=")))
