import json
import math

import pytest

from grafhen.cli import main
from grafhen.perm import parse_cycles
from grafhen.presets import S3_COXETER_RULES
from grafhen.protocol import load_key
from grafhen.rewrite import RewriteSystem
from grafhen.rewrite.system import save_rules

KEYGEN = ["keygen", "--n", "7", "--d", "4", "--seed", "1", "--db-size", "16"]


@pytest.fixture(scope="module")
def files(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    paths = {k: d / f"{k}.txt" for k in ("key", "params", "rules")}
    assert main(KEYGEN + ["--out-key", str(paths["key"]), "--out-params",
                          str(paths["params"]), "--out-rules", str(paths["rules"])]) == 0
    paths["dir"] = d
    return paths


@pytest.fixture
def s3_rules(tmp_path):
    path = tmp_path / "s3.txt"
    save_rules(RewriteSystem(S3_COXETER_RULES, 2), path)
    return str(path)


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_keygen_output(tmp_path, capsys):
    code, out, _ = run(capsys, *KEYGEN, "--out-key", tmp_path / "k")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("keyspace ≈ 2^")
    assert "self_test\tOK" in lines


def test_keygen_json(capsys):
    code, out, _ = run(capsys, *KEYGEN, "--json")
    rec = json.loads(out)
    assert code == 0 and rec["self_test"] == "OK" and rec["rules"] > 0


def test_keygen_is_deterministic(tmp_path, files, capsys):
    args = ["--out-key", tmp_path / "key.txt", "--out-params", tmp_path / "params.txt",
            "--out-rules", tmp_path / "rules.txt"]
    assert run(capsys, *KEYGEN, *args)[0] == 0
    for k in ("key", "params", "rules"):
        assert (tmp_path / f"{k}.txt").read_bytes() == files[k].read_bytes()


def test_dry_run_keyspace(capsys):
    code, out, _ = run(capsys, "keygen", "--n", 11, "--d", 5, "--seed", 0, "--dry-run")
    assert code == 0 and out.strip() == "keyspace ≈ 2^101.0"
    code, out, _ = run(capsys, "keygen", "--n", 11, "--d", 5, "--seed", 0, "--dry-run",
                       "--json")
    expected = 4 * math.log2(math.factorial(11))
    assert json.loads(out)["keyspace_bits"] == pytest.approx(expected)


def test_keygen_config_error(capsys):
    code, _, err = run(capsys, "keygen", "--n", 7, "--d", 4, "--seed", 0, "--enc", "sl3:9")
    assert code == 2 and err.startswith("error:")
    code, _, _ = run(capsys, "keygen", "--n", 7, "--d", 4, "--seed", 0, "--preset", "toy-s9")
    assert code == 2


@pytest.mark.parametrize("use_key", [True, False])
def test_encrypt_decrypt(files, tmp_path, capsys, use_key):
    out = tmp_path / "c.txt"
    src = ["--key", files["key"], "--params", files["params"]] if use_key \
        else ["--params", files["params"]]
    assert run(capsys, "encrypt", *src, "--bits", "011010", "--out", out, "--seed", 3)[0] == 0
    assert len(out.read_text().splitlines()) == 6
    code, text, _ = run(capsys, "decrypt", "--key", files["key"], "--in", out)
    assert code == 0 and text.strip() == "011010"


def test_encrypt_bad_bits(files, capsys):
    assert run(capsys, "encrypt", "--params", files["params"], "--bits", "012")[0] == 2
    assert run(capsys, "encrypt", "--bits", "01")[0] == 2


def test_decrypt_needs_key(files, tmp_path, capsys):
    out = tmp_path / "c.txt"
    run(capsys, "encrypt", "--params", files["params"], "--bits", "1", "--out", out,
        "--seed", 0)
    assert run(capsys, "decrypt", "--params", files["params"], "--in", out)[0] == 2


def test_decrypt_rejects_non_cipher(files, tmp_path, capsys):
    sk = load_key(files["key"])
    # (1,7) moves an encoding point onto a masking point
    word = sk.word_for(parse_cycles("(1,7)"))
    path = tmp_path / "bad.txt"
    path.write_text(word + "\n")
    code, _, err = run(capsys, "decrypt", "--key", files["key"], "--in", path)
    assert code == 4 and "error" in err


def test_eval_nand(files, tmp_path, capsys):
    circuit = tmp_path / "nand.txt"
    circuit.write_text("INPUT 0\nINPUT 1\nMUL 0 1  # and\nNOT 2\n")
    for x in (0, 1):
        for y in (0, 1):
            for bit, name in ((x, "x"), (y, "y")):
                run(capsys, "encrypt", "--params", files["params"], "--bits", bit,
                    "--out", tmp_path / name, "--seed", 10 * x + y)
            out = tmp_path / "o"
            assert run(capsys, "eval", "--params", files["params"], "--circuit", circuit,
                       "--in", tmp_path / "x", tmp_path / "y", "--out", out)[0] == 0
            code, text, _ = run(capsys, "decrypt", "--key", files["key"], "--in", out)
            assert text.strip() == str(1 - x * y)


def test_eval_malformed_circuit(files, tmp_path, capsys):
    circuit = tmp_path / "bad.txt"
    circuit.write_text("INPUT 0\nMUL 0 4\n")
    cipher = tmp_path / "c"
    run(capsys, "encrypt", "--params", files["params"], "--bits", "1", "--out", cipher,
        "--seed", 0)
    assert run(capsys, "eval", "--params", files["params"], "--circuit", circuit,
               "--in", cipher)[0] == 2


def test_bench(files, capsys):
    code, out, _ = run(capsys, "bench", "--params", files["params"], "--samples", 200,
                       "--json")
    rec = json.loads(out)
    assert code == 0
    assert rec["and_median_us"] == pytest.approx(5 * rec["op_median_us"])
    assert rec["samples"] == 200 and rec["op_p99_us"] >= rec["op_median_us"]
    assert run(capsys, "bench", "--params", files["params"], "--samples", 0)[0] == 2


def test_challenge_and_attacks(files, tmp_path, capsys):
    ch = tmp_path / "ch.txt"
    assert run(capsys, "challenge", "--key", files["key"], "--params", files["params"],
               "--count", 5, "--out", ch, "--seed", 1)[0] == 0
    code, out, _ = run(capsys, "attack", "randred", "--challenge", ch, "--budget", 50,
                       "--json")
    rec = json.loads(out)
    assert code == 0 and rec["method"] == "randred" and rec["words"] == 5
    code, out, _ = run(capsys, "attack", "genrel", "--challenge", ch, "--budget", 200,
                       "--letters", "ab", "--json")
    assert code == 0 and json.loads(out)["details"]["letters"] == "ab"
    assert run(capsys, "attack", "redund", "--challenge", ch)[0] == 0
    assert run(capsys, "attack", "ciphrel", "--challenge", ch, "--budget", 100)[0] == 0
    # 15 * 5040**3 candidate tuples is far above the guard
    assert run(capsys, "attack", "brute", "--challenge", ch)[0] == 3


def test_challenge_without_solution(files, tmp_path, capsys):
    ch = tmp_path / "ch.txt"
    run(capsys, "challenge", "--key", files["key"], "--params", files["params"],
        "--count", 3, "--out", ch, "--seed", 1, "--no-solution")
    assert "solution:" not in ch.read_text()
    code, out, _ = run(capsys, "attack", "randred", "--challenge", ch, "--budget", 10,
                       "--json")
    assert json.loads(out)["accuracy"] is None


def test_inspect(files, s3_rules, capsys):
    code, out, _ = run(capsys, "inspect", "--rules", s3_rules, "--json")
    assert code == 0 and json.loads(out)["count"] == 3
    code, out, _ = run(capsys, "inspect", "--params", files["params"], "--json")
    assert json.loads(out)["db_size"] == 16
    code, out, _ = run(capsys, "inspect", "--key", files["key"], "--json")
    rec = json.loads(out)
    assert rec["n"] == 7 and len(rec["generators"]) == 4


def test_reduce(s3_rules, files, capsys):
    assert run(capsys, "reduce", "--rules", s3_rules, "--word", "bab")[1] == "aba\n"
    assert run(capsys, "reduce", "--rules", s3_rules, "--word", "abab")[1] == "ba\n"
    assert run(capsys, "reduce", "--rules", s3_rules, "--word", "-")[1] == "-\n"
    assert run(capsys, "reduce", "--rules", s3_rules, "--word", "aa")[1] == "-\n"
    assert run(capsys, "reduce", "--rules", s3_rules, "--word", "abc")[0] == 2
    assert run(capsys, "reduce", "--params", files["params"], "--word", "-")[0] == 0


def test_bad_files(tmp_path, capsys):
    junk = tmp_path / "junk.txt"
    junk.write_text("hello\n")
    assert run(capsys, "inspect", "--params", junk)[0] == 2
    assert run(capsys, "inspect", "--key", junk)[0] == 2
    assert run(capsys, "inspect", "--rules", junk)[0] == 2
    assert run(capsys, "inspect", "--key", tmp_path / "missing")[0] == 2
    assert run(capsys, "attack", "randred", "--challenge", junk)[0] == 2


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["attack", "nonsense", "--challenge", "x"])
    assert exc.value.code == 2
    assert run(capsys, "inspect")[0] == 2
