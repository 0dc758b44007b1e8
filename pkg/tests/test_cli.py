import json
import os
import subprocess
import sys
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import FIXTURES, seeds
from snakelemma import cli
from snakelemma.errors import InternalError
from snakelemma.fileformat import dumps, parse_text, to_document
from snakelemma.generate import GenConfig, gen_four, gen_pair, gen_snake

GOLDEN = Path(__file__).parent / "golden"
UPDATE = os.environ.get("SNAKELEMMA_UPDATE_GOLDEN") == "1"

CASES = [
    ("snake", "snake_x3_x3_x1"),
    ("snake", "snake_x2_x2_x0"),
    ("ring", "ring_x2_proj4"),
    ("four", "four_mod4"),
    ("check", "snake_x3_x3_x1"),
    ("check", "snake_x3_x2_noncommuting"),
    ("check", "four_mod4_alpha_not_surjective"),
]


def run(*argv):
    rep, code, _ = cli.run(list(argv))
    return rep, code


def run_json(*argv):
    rep, code = run(*argv)
    return cli.dump_json(rep), code


# -- golden reports -----------------------------------------------------------------

@pytest.mark.parametrize("command,name", CASES)
def test_golden_report(command, name):
    out, _ = run_json(command, str(FIXTURES / f"{name}.json"), "--json")
    path = GOLDEN / f"{name}.{command}.json"
    if UPDATE:
        path.write_text(out)
    assert out == path.read_text()


@pytest.mark.parametrize("command,name", CASES[:3])
def test_golden_through_subprocess(command, name):
    proc = subprocess.run([sys.executable, "-m", "snakelemma", command,
                           str(FIXTURES / f"{name}.json"), "--json"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout == (GOLDEN / f"{name}.{command}.json").read_text()


def factors(rep, key="sequence"):
    return [e["invariant_factors"] for e in rep[key]]


def test_snake_x2_x2_x0_report():
    rep, code = run("snake", str(FIXTURES / "snake_x2_x2_x0.json"))
    assert code == 0 and rep["status"] == "ok"
    assert factors(rep) == [[], [], [], [], [2], [2], [2], [2], [], []]
    assert rep["delta"]["domain"]["invariant_factors"] == [2]
    assert rep["delta"]["codomain"]["invariant_factors"] == [2]
    assert rep["delta"]["matrix"] == [[1]]
    assert rep["classical"]["f1_injective"] and rep["classical"]["g_surjective"]


def test_snake_x3_x3_x1_report():
    rep, code = run("snake", str(FIXTURES / "snake_x3_x3_x1.json"))
    assert code == 0
    assert rep["delta"]["domain"]["invariant_factors"] == []
    assert all(rep["checks"].values())


def test_ring_report():
    rep, code = run("ring", str(FIXTURES / "ring_x2_proj4.json"))
    assert code == 0
    assert factors(rep) == [[], [], [0], [0], [2], [2], [], []]


def test_four_report():
    rep, code = run("four", str(FIXTURES / "four_mod4.json"))
    assert code == 0
    assert factors(rep["sequences"], "es1") == [[]] * 5
    assert factors(rep["sequences"], "es2") == [[]] * 5
    assert rep["checks"]["ker gamma == g(ker beta)"]
    assert rep["checks"]["im beta == g1^-1(im gamma)"]


def test_noncommuting_names_square_one():
    rep, code = run("check", str(FIXTURES / "snake_x3_x2_noncommuting.json"))
    assert code == 2 and rep["status"] == "invalid-input"
    assert rep["diagnostics"][0]["square"] == 1


def test_hypothesis_failure_reported():
    rep, code = run("four", str(FIXTURES / "four_mod4_alpha_not_surjective.json"))
    assert code == 2
    assert rep["diagnostics"][0]["hypothesis"] == "alpha-not-surjective"


def test_wrong_kind_is_invalid_input():
    rep, code = run("snake", str(FIXTURES / "ring_x2_proj4.json"))
    assert code == 2


def test_text_output(capsys):
    code = cli.main(["snake", str(FIXTURES / "snake_x2_x2_x0.json")])
    out = capsys.readouterr().out
    assert code == 0
    assert out.startswith("snake: ok")
    assert "delta: Z/2 -> Z/2" in out


# -- malformed input ----------------------------------------------------------------

GOOD = json.loads((FIXTURES / "ring_x2_proj4.json").read_text())


def mutated(path, value):
    doc = json.loads(json.dumps(GOOD))
    node = doc
    for k in path[:-1]:
        node = node[k]
    if value is KeyError:
        del node[path[-1]]
    else:
        node[path[-1]] = value
    return json.dumps(doc)


BAD = [
    (mutated(["groups", "Z4", "gens"], "x"), "$.groups.Z4.gens"),
    (mutated(["groups", "Z4", "gens"], True), "$.groups.Z4.gens"),
    (mutated(["groups", "Z4", "gens"], -1), "$.groups.Z4.gens"),
    (mutated(["groups", "Z4", "relations"], [[4, 1]]), "$.groups.Z4.relations[0]"),
    (mutated(["groups", "Z4", "relations"], [[4.5]]), "$.groups.Z4.relations[0][0]"),
    (mutated(["maps", "proj", "matrix"], [[1, 2]]), "$.maps.proj.matrix[0]"),
    (mutated(["maps", "proj", "matrix"], []), "$.maps.proj.matrix"),
    (mutated(["maps", "proj", "matrix"], "[[1]]"), "$.maps.proj.matrix"),
    (mutated(["maps", "proj", "to"], "Q"), "$.maps.proj.to"),
    (mutated(["maps", "proj", "from"], KeyError), "$.maps.proj"),
    (mutated(["diagram", "beta"], "nope"), "$.diagram.beta"),
    (mutated(["diagram", "kind"], "five"), "$.diagram.kind"),
    (mutated(["diagram", "extra"], "x"), "$.diagram"),
    (mutated(["groups"], []), "$.groups"),
    ("[]", "$"),
    ('{"groups": {}, "maps": {}, "diagram": {"kind": "ring"', "line 1"),
    ('{"groups": {}, "groups": {}}', None),
    ("", "line 1"),
]


@pytest.mark.parametrize("text,where", BAD)
def test_malformed_inputs(tmp_path, text, where):
    p = tmp_path / "bad.json"
    p.write_text(text)
    rep, code = run("check", str(p))
    assert code == 2 and rep["status"] == "invalid-input"
    diag = rep["diagnostics"][0]
    assert diag["error"] == "ParseError"
    if where is not None:
        assert diag["position"].startswith(where)


def test_ill_defined_map(tmp_path):
    p = tmp_path / "bad.json"
    doc = json.loads(json.dumps(GOOD))
    doc["maps"]["back"] = {"from": "Z4", "to": "Z", "matrix": [[1]]}
    p.write_text(json.dumps(doc))
    rep, code = run("check", str(p))
    assert code == 2 and rep["diagnostics"][0]["error"] == "IllDefined"


def test_not_composable(tmp_path):
    p = tmp_path / "bad.json"
    doc = json.loads(json.dumps(GOOD))
    doc["diagram"]["alpha"] = "proj"
    p.write_text(json.dumps(doc))
    rep, code = run("ring", str(p))
    assert code == 2


def test_missing_file(tmp_path):
    rep, code = run("check", str(tmp_path / "nope.json"))
    assert code == 2 and rep["diagnostics"][0]["error"] == "ParseError"


def test_big_integers_as_strings(tmp_path):
    # alpha = x 2^100 on Z, beta = projection onto Z/2^101
    doc = json.loads(json.dumps(GOOD))
    doc["groups"]["Z4"]["relations"] = [[str(2 ** 101)]]
    doc["maps"]["times2"]["matrix"] = [[str(2 ** 100)]]
    p = tmp_path / "big.json"
    p.write_text(json.dumps(doc))
    rep, code = run("ring", str(p))
    assert code == 0
    assert rep["sequence"][4]["invariant_factors"] == [2 ** 100]
    assert rep["sequence"][5]["invariant_factors"] == [2 ** 100]


@settings(max_examples=150, deadline=None)
@given(st.text(max_size=80))
def test_garbage_never_crashes(text):
    try:
        parse_text(text)
    except ValueError:
        pass


@settings(max_examples=100, deadline=None)
@given(st.recursive(st.none() | st.booleans() | st.integers() | st.text(max_size=4),
                    lambda c: st.lists(c, max_size=3) | st.dictionaries(
                        st.sampled_from(["groups", "maps", "diagram", "gens", "relations",
                                         "from", "to", "matrix", "kind", "alpha", "beta", "Z"]),
                        c, max_size=4), max_leaves=12))
def test_structured_garbage_is_invalid_input(doc):
    try:
        parse_text(json.dumps(doc))
    except ValueError:
        pass


# -- round trip ----------------------------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(seeds, st.sampled_from([gen_snake, gen_four, gen_pair]))
def test_round_trip(seed, gen):
    d = gen(GenConfig(seed=seed))
    back = parse_text(dumps(d))
    for role, h in d.homs().items():
        h2 = back.homs()[role]
        assert h2.source.relations == h.source.relations
        assert h2.target.relations == h.target.relations
        assert h2.matrix == h.matrix
    assert to_document(back) == to_document(d)


# -- fuzz command and exit codes -------------------------------------------------------------

def test_fuzz_zero_cases():
    rep, code = run("fuzz", "--count", "0")
    assert code == 0 and rep["cases"] == 0 and rep["checks"] == {}


@pytest.mark.parametrize("kind", ["snake", "four", "ring"])
def test_fuzz_small_runs(kind):
    out1, code = run_json("fuzz", "--kind", kind, "--count", "5", "--seed", "9", "--finite")
    out2, _ = run_json("fuzz", "--kind", kind, "--count", "5", "--seed", "9", "--finite")
    assert code == 0 and out1 == out2
    rep = json.loads(out1)
    assert rep["cases"] == 5 and rep["oracle_cases"] >= 1


def test_fuzz_bad_flags():
    rep, code = run("fuzz", "--count", "-1")
    assert code == 2
    rep, code = run("fuzz", "--entry-bound", "0")
    assert code == 2


def test_fuzz_counterexample_exit_code(monkeypatch):
    monkeypatch.setattr(cli, "check_any", lambda d, cap, rng=None: {"planted failure": False})
    rep, code = run("fuzz", "--count", "3")
    assert code == 3 and rep["status"] == "counterexample"
    assert rep["failure"]["case"] == 0
    # the offending diagram is reported in file form and parses back
    parse_text(json.dumps(rep["failure"]["diagram"]))


def test_internal_error_exit_code(monkeypatch):
    def boom(d):
        raise InternalError("planted")
    monkeypatch.setitem(cli.COMMANDS, "snake", boom)
    rep, code = run("snake", str(FIXTURES / "snake_x2_x2_x0.json"))
    assert code == 4 and rep["status"] == "internal-error"


def test_unexpected_exception_is_reported(monkeypatch):
    def boom(d):
        raise KeyError("surprise")
    monkeypatch.setitem(cli.COMMANDS, "check", boom)
    rep, code = run("check", str(FIXTURES / "snake_x2_x2_x0.json"))
    assert code == 4
