import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from cinfinity import fileio
from cinfinity.ainf import AInfStructure
from cinfinity.cli import DATA, main
from cinfinity.corpus import example_structure, massey_dga, y_model_cdga


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out=out)
    return code, out.getvalue()


def value(text, key):
    for line in text.splitlines():
        if line.startswith(key + ": "):
            return line[len(key) + 2:]
    raise KeyError(key)


def test_parse_rational():
    assert fileio.parse_rational("3") == 3
    assert fileio.parse_rational("-6/4") == Fraction(-3, 2)
    for bad in ("1/0", "1.5", "x", "", 1, 0.5):
        with pytest.raises(fileio.ParseError):
            fileio.parse_rational(bad)
    assert fileio.format_rational(Fraction(-6, 4)) == "-3/2"
    assert fileio.format_rational(Fraction(4, 2)) == "2"


@pytest.mark.parametrize("path", sorted(DATA.glob("*.json")), ids=lambda p: p.stem)
def test_shipped_files_round_trip(path):
    text = path.read_text(encoding="utf-8")
    obj = fileio.load_algebra(path)
    assert fileio.dumps(fileio.algebra_to_doc(obj)) == text
    again = fileio.loads_algebra(text)
    if isinstance(obj, AInfStructure):
        assert again == obj
    else:
        assert again.mul == obj.mul and again.d.images == obj.d.images


def test_emitted_structures_round_trip(tmp_path):
    for obj in (example_structure(Fraction(1, 3), -2), massey_dga(), y_model_cdga(2, 1)):
        p = tmp_path / "a.json"
        fileio.save_algebra(obj, p)
        back = fileio.load_algebra(p)
        assert fileio.dumps(fileio.algebra_to_doc(back)) == p.read_text(encoding="utf-8")


def test_check_examples(tmp_path):
    code, out = run("check", "s2s2s5_p1q1", "--max-degree", 12)
    assert code == 0 and value(out, "STATUS") == "pass"
    doc = json.loads((DATA / "s2s2s5_p1q1.json").read_text())
    doc["operations"]["3"].append({"on": ["x", "x", "x"], "value": [["z", "1"]]})
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, out = run("check", bad, "--max-degree", 12)
    assert code == 1
    assert value(out, "CINF") == "fail"
    assert "x" in value(out, "WITNESS") and "shuffle" in value(out, "REASON")


def test_exit_code_two(tmp_path):
    doc = json.loads((DATA / "s2s2s5_p1q1.json").read_text())
    doc["operations"]["3"][0]["value"] = [["z", "1/0"]]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    assert run("check", bad, "--max-degree", 12)[0] == 2
    bad.write_text((DATA / "s2s2s5_p1q1.json").read_text().replace('"1"', "1.5"))
    assert run("check", bad, "--max-degree", 12)[0] == 2
    bad.write_text("{not json")
    assert run("check", bad, "--max-degree", 12)[0] == 2
    assert run("check", tmp_path / "missing.json", "--max-degree", 12)[0] == 2
    assert run("check", "s2s2s5_X")[0] == 2  # degree bound is mandatory


def test_invalid_axiom_is_exit_one(tmp_path):
    doc = json.loads((DATA / "massey_dga.json").read_text())
    doc["differential"].append({"on": ["a"], "value": [["u", "1"]]})
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, out = run("check", bad, "--max-degree", 8)
    assert code == 1 and "d^2" in value(out, "ERROR")


def test_pi_lines():
    code, out = run("invariants", "pi", "s2s2s5_X", "--max-degree", 4)
    assert code == 0 and value(out, "PI") == "π²:2 π³:3 π⁴:2"
    code, out = run("invariants", "pi", "s2s2s5_Y", "--max-degree", 4)
    assert code == 0 and "π⁴:1" in value(out, "PI")


def test_pi_on_a_cdga_transfers_first():
    code, out = run("invariants", "pi", "y_model_cdga", "--max-degree", 4)
    assert code == 0 and value(out, "PI") == "π²:2 π³:3 π⁴:1"


def test_bar_and_formality():
    code, out = run("invariants", "bar", "sphere_3", "--max-degree", 6)
    assert value(out, "BAR") == "H0:1 H1:0 H2:1 H3:0 H4:1 H5:0 H6:1"
    code, out = run("invariants", "formality", "s2s2s5_X", "--max-arity", 4)
    assert value(out, "FORMALITY") == "formal"
    code, out = run("invariants", "formality", "s2s2s5_Y", "--max-arity", 4, "--json")
    assert value(out, "FORMALITY") == "nonformal" and value(out, "OBSTRUCTION_ARITY") == "3"
    blob = json.loads(out[out.index("{"):])
    assert blob["formality"] == "nonformal" and blob["harrison_dim"] == 2


def test_classify_example():
    code, out = run("invariants", "classify-example", "--p", 1, "--q", 0, "--p2", 0, "--q2", 0)
    assert code == 0 and value(out, "CLASSIFICATION") == "different-type"
    code, out = run("invariants", "classify-example", "--p", 1, "--q", 0, "--p2", 0, "--q2", "1/2")
    assert value(out, "CLASSIFICATION") == "same-type" and value(out, "WITNESS_CHECK") == "pass"
    assert run("invariants", "classify-example", "--p", "1/0", "--q", 0, "--p2", 0, "--q2", 0)[0] == 2


def test_transfer_outputs(tmp_path):
    o = tmp_path / "h.json"
    code, out = run("transfer", "s2s2s5_formal_cdga", "--max-arity", 4, "--max-degree", 5,
                    "--cinf", "-o", o)
    assert code == 0
    H = fileio.load_algebra(o)
    assert not H.ops
    code, out = run("transfer", "massey_dga", "--max-arity", 4, "--max-degree", 6, "-o", o)
    H = fileio.load_algebra(o)
    assert H.op(3).table
    assert run("transfer", "massey_dga", "--max-arity", 4, "--max-degree", 5)[0] == 2


def test_transfer_is_deterministic(tmp_path):
    texts = []
    for name in ("a.json", "b.json"):
        run("transfer", "massey_dga", "--max-arity", 4, "--max-degree", 6, "--seed", 5,
            "-o", tmp_path / name, "--morphism-output", tmp_path / ("m" + name))
        texts.append(((tmp_path / name).read_bytes(), (tmp_path / ("m" + name)).read_bytes()))
    assert texts[0] == texts[1]


def test_seeds_give_isomorphic_outputs(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for seed, path in ((1, a), (2, b)):
        assert run("transfer", "y_model_cdga", "--max-arity", 4, "--max-degree", 5,
                   "--cinf", "--seed", seed, "-o", path)[0] == 0
    code, out = run("invariants", "realize", "--source", a, "--target", b, "--max-arity", 4)
    assert code == 0 and value(out, "REALIZE") == "extended"
    assert value(out, "MORPHISM_CHECK") == "pass"


def test_morphism_file_check_and_realize(tmp_path):
    m = tmp_path / "m.json"
    run("transfer", "massey_dga", "--max-arity", 4, "--max-degree", 6, "--morphism-output", m,
        "-o", tmp_path / "h.json")
    code, out = run("check", m, "--max-degree", 6)
    assert code == 0 and value(out, "MORPHISM") == "pass"
    g = {"kind": "morphism", "source": str(DATA / "s2s2s5_Y.json"),
         "target": str(DATA / "sphere_5.json"),
         "components": {"1": [{"on": ["z"], "value": [["s", "1"]]}]}}
    (tmp_path / "g.json").write_text(json.dumps(g))
    code, out = run("check", tmp_path / "g.json", "--max-degree", 12)
    assert code == 1 and value(out, "WITNESS") == "[x,x,y] -> s"
    code, out = run("invariants", "realize", "--map", tmp_path / "g.json", "--max-arity", 4)
    assert code == 0 and value(out, "REALIZE") == "obstruction at arity 3"


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "cinfinity", "invariants", "classify-example",
                        "--p", "0", "--q", "0", "--p2", "1", "--q2", "1"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "CLASSIFICATION: different-type" in r.stdout
    r = subprocess.run([sys.executable, "-m", "cinfinity", "check"], capture_output=True, text=True)
    assert r.returncode == 2
