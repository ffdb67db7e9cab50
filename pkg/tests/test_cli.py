from __future__ import annotations

import json

import pytest

from kraftgp.cli import main, module_from_json, module_to_json, parse_field
from kraftgp.field import gf
from kraftgp.linalg import inverse
from kraftgp.quiver import PeriodicWord, parse_word, quiver_of_periodic, quiver_of_word
from kraftgp.repn import Representation, module_of, trivial_rep
from graphs import LINEAR_EXAMPLE, NOT_KRAFT


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def module_file(tmp_path, name, m):
    return write(tmp_path, name, module_to_json(m))


def test_parse_field():
    assert parse_field("Q").kind == "Q"
    assert parse_field("F4") == gf(4) == parse_field("4")
    assert parse_field(json.dumps(gf(9).descriptor())) == gf(9)


def test_generate_word(tmp_path, capsys):
    path = write(tmp_path, "w.json", {"field": {"kind": "Fq", "p": 2}, "word": ["F"], "rep": "trivial"})
    code, out, _ = run(capsys, "generate", "--in", path)
    assert code == 0
    m = module_from_json(json.loads(out))
    assert m.dim == 2 and m.F == [[0, 0], [1, 0]]


def test_generate_loop(tmp_path, capsys):
    path = write(tmp_path, "p.json", {"field": gf(4).descriptor(), "periodic": ["F"], "m": 1})
    code, out, _ = run(capsys, "generate", "--in", path)
    m = module_from_json(json.loads(out))
    assert code == 0 and m.dim == 1 and m.F == [[1]] and m.V == [[0]]


def test_generate_rejects_non_kraft(tmp_path, capsys):
    path = write(tmp_path, "f2.json", {"quiver": NOT_KRAFT.to_json()})
    code, _, err = run(capsys, "generate", "--in", path)
    assert code == 3 and "condition (1)" in err


def test_generate_then_classify_linear_example(tmp_path, capsys):
    path = write(tmp_path, "f1.json", {"quiver": LINEAR_EXAMPLE.to_json()})
    out_mod = tmp_path / "m.json"
    assert main(["generate", "--in", path, "--out", str(out_mod)]) == 0
    dot = tmp_path / "g.dot"
    code, out, _ = run(capsys, "classify", "--in", str(out_mod), "--emit-dot", str(dot))
    rep = json.loads(out)
    assert code == 0
    assert rep["linear"] == [{"word": ["V#", "F", "V#", "F", "F"], "mult": 1}]
    assert rep["circular"] == [] and rep["dim"] == 6
    assert "digraph" in dot.read_text()


@pytest.mark.parametrize("build,want", [
    (lambda: module_of(trivial_rep(quiver_of_word(parse_word("V#FV#FF"))), gf(2)),
     {"linear": [{"word": ["V#", "F", "V#", "F", "F"], "mult": 1}], "circular": []}),
    (lambda: module_of(trivial_rep(quiver_of_word(parse_word("F"))), gf(2)).direct_sum(
        module_of(trivial_rep(quiver_of_periodic(PeriodicWord(("F",)), 1)), gf(2))),
     {"linear": [{"word": ["F"], "mult": 1}], "circular": [["F"]]}),
    (lambda: module_of(trivial_rep(quiver_of_periodic(PeriodicWord(parse_word("FFV#")), 9)), gf(2)),
     {"linear": [], "circular": [["F", "F", "V#"]]}),
])
def test_classify_files(tmp_path, capsys, build, want):
    path = module_file(tmp_path, "m.json", build())
    code, out, _ = run(capsys, "classify", "--in", path)
    rep = json.loads(out)
    assert code == 0 and rep["linear"] == want["linear"]
    assert [c["pattern"] for c in rep["circular"]] == want["circular"]


def test_classify_zero_module(tmp_path, capsys):
    path = write(tmp_path, "z.json", {"field": {"kind": "Fq", "p": 2}, "dim": 0, "F": [], "V": []})
    code, out, _ = run(capsys, "classify", "--in", path)
    assert code == 0 and json.loads(out) == {"linear": [], "circular": [], "dim": 0}


def test_classify_invalid_inputs(tmp_path, capsys):
    bad = write(tmp_path, "b.json", {"field": {"kind": "Fq", "p": 2}, "dim": 1, "F": [[1]], "V": [[1]]})
    assert run(capsys, "classify", "--in", bad)[0] == 3
    junk = tmp_path / "j.json"
    junk.write_text("{not json")
    assert run(capsys, "classify", "--in", str(junk))[0] == 2
    assert run(capsys, "classify")[0] == 2


def test_isomorphic(tmp_path, capsys):
    k = gf(2)
    a = module_file(tmp_path, "a.json", module_of(trivial_rep(quiver_of_word(parse_word("F"))), k))
    b = module_file(tmp_path, "b.json", module_of(trivial_rep(quiver_of_word(parse_word("V#"))), k))
    code, out, _ = run(capsys, "isomorphic", "--a", a, "--b", a)
    assert code == 0 and out.strip() == "yes"
    code, out, _ = run(capsys, "isomorphic", "--a", a, "--b", b)
    assert code == 1 and out.strip() == "no"


def test_isomorphic_conjugate_monodromy(tmp_path, capsys):
    k = gf(3)
    q = quiver_of_periodic(PeriodicWord(("F",)), 1)
    a = [[1, 1], [2, 0]]
    h = [[1, 2], [0, 1]]
    hi = inverse(k, h)
    from kraftgp.linalg import mat_mul
    b = mat_mul(k, h, mat_mul(k, a, hi))
    fa = module_file(tmp_path, "a.json", module_of(Representation(q, {0: 2}, {0: a}), k))
    fb = module_file(tmp_path, "b.json", module_of(Representation(q, {0: 2}, {0: b}), k))
    code, out, _ = run(capsys, "isomorphic", "--a", fa, "--b", fb)
    assert code == 0 and out.strip() == "yes"


def test_isomorphic_field_mismatch(tmp_path, capsys):
    a = module_file(tmp_path, "a.json", module_of(trivial_rep(quiver_of_word(())), gf(2)))
    b = module_file(tmp_path, "b.json", module_of(trivial_rep(quiver_of_word(())), gf(3)))
    assert run(capsys, "isomorphic", "--a", a, "--b", b)[0] == 3


def test_random_is_deterministic(capsys):
    first = run(capsys, "random", "--field", "F4", "--count", "5", "--seed", "7")
    second = run(capsys, "random", "--field", "F4", "--count", "5", "--seed", "7")
    assert first == second and first[0] == 0
    lines = first[1].splitlines()
    assert len(lines) == 5
    for line in lines:
        d = json.loads(line)
        assert sum(d["rep"]["dims"].values()) <= 16
    assert run(capsys, "random", "--count", "0")[1] == ""


def test_random_output_feeds_generate(tmp_path, capsys):
    _, out, _ = run(capsys, "random", "--field", "F9", "--count", "3", "--seed", "2")
    for i, line in enumerate(out.splitlines()):
        p = tmp_path / f"r{i}.json"
        p.write_text(line)
        code, mod, _ = run(capsys, "generate", "--in", str(p))
        assert code == 0 and module_from_json(json.loads(mod)).gp_violation() is None


def test_selftest_fast(capsys):
    code, out, _ = run(capsys, "selftest", "--level", "fast")
    assert code == 0
    assert "FAIL" not in out and out.count("PASS") == 5
