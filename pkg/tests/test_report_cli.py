import json
import random
from pathlib import Path

import pytest
from hypothesis import example, given, settings, strategies as st

from quadmaps.classes import REPRESENTATIVES, representative
from quadmaps.cli import main
from quadmaps.field import FieldPolicy, Session, TowerElem
from quadmaps.maps import MapError, QuadMap
from quadmaps.parse import ParseError, parse_coeff_map, parse_map
from quadmaps.report import (ReportDoc, ReportError, build_report, literal_from_json,
                             literal_to_json, step_from_json, step_to_json)

from conftest import R3I, gauss, tower

GOLDEN = Path(__file__).parent / "golden" / "reports_v1.json"


@settings(max_examples=1000, deadline=None)
@given(tower())
@example(TowerElem.gauss(0, 1) * R3I)   # decodes into a smaller tower
def test_literal_round_trip(v):
    d = literal_to_json(v)
    back = literal_from_json(json.loads(json.dumps(d)))
    assert back == v


@settings(max_examples=300, deadline=None)
@given(gauss())
def test_gauss_literal_shape(v):
    d = literal_to_json(v)
    assert set(d) == {"re", "im"}


def test_cubic_literal_round_trip():
    s = Session()
    w = s.cbrt(3)
    r = s.sqrt(w + 1)
    for v in (w * 2 + 1, r * w - 5):
        assert literal_from_json(json.loads(json.dumps(literal_to_json(v)))) == v


@pytest.mark.parametrize("bad", [True, [1, 2], {"re": "1/0"}, {"foo": 1}, 1.5,
                                 {"a": "1", "b": "1"}])
def test_bad_literals(bad):
    with pytest.raises((ReportError, ParseError)):
        literal_from_json(bad)


def test_step_round_trip():
    from quadmaps.reduce import reduce_map
    F = representative(9)
    r = reduce_map(F)
    steps = [step_from_json(json.loads(json.dumps(step_to_json(s)))) for s in r.steps]
    assert F.apply_chain(steps) == r.canonical


@pytest.mark.parametrize("k", [1, 9, 16, 23, 37, 64])
def test_report_round_trip(k):
    rep = build_report(representative(k), FieldPolicy(), list(REPRESENTATIVES[k]))
    doc = ReportDoc.from_json(rep.to_json())
    assert doc.to_dict() == json.loads(rep.to_json())
    assert rep.verification["witness_ok"] is True
    assert rep.schema == "report.v1"


def test_report_rejects_other_schema():
    rep = build_report(representative(5), FieldPolicy(), with_structure=False).to_dict()
    rep["schema"] = "report.v0"
    with pytest.raises(ReportError):
        ReportDoc.from_dict(rep)
    del rep["schema"]
    with pytest.raises(ReportError):
        ReportDoc.from_dict(rep)


def _strip(d):
    d = dict(d)
    d.pop("timing", None)
    return d


def test_golden_reports():
    golden = json.loads(GOLDEN.read_text(encoding="utf-8"))
    assert sorted(golden, key=int) == [str(k) for k in range(1, 65)]
    for k in range(1, 65):
        rep = build_report(representative(k), FieldPolicy(), list(REPRESENTATIVES[k]))
        assert json.loads(json.dumps(_strip(rep.to_dict()))) == golden[str(k)], k


# ---------------------------------------------------------------------------
# CLI

def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_cli_family8(capsys):
    code, out, _ = run(capsys, "classify", "-e", "x^2+z^2+2*y", "y*z+x")
    assert code == 0
    assert "Family8(A=0)" in out and "topo class   8" in out


def test_cli_zero_map(capsys):
    code, out, _ = run(capsys, "classify", "--json", "-e", "0", "0")
    assert code == 0
    d = json.loads(out)
    assert d["affine_class"]["label"] == "Discrete(64)"
    assert d["topo_class"] == {"index": 47, "letter": None}


def test_cli_family2(capsys):
    code, out, _ = run(capsys, "classify", "--json", "-e", "x^2+z^2+y", "y^2+z^2+4*x+i*z")
    assert code == 0
    d = json.loads(out)
    assert d["affine_class"]["label"] == "Family2(A=1/16, B=-1/16)"
    assert d["topo_class"]["index"] == 2


def test_cli_coefficient_form(capsys):
    coeffs = json.dumps([[1, 0, 0, 0, 0, 1, 0, 2, 0, 0], [0, 0, 0, 0, 1, 0, 1, 0, 0, 0]])
    code, out, _ = run(capsys, "classify", "-c", coeffs)
    assert code == 0 and "Family8(A=0)" in out


def test_cli_coefficient_file(capsys, tmp_path):
    p = tmp_path / "m.json"
    p.write_text(json.dumps({"f": ["1", 0, 0, 0, 0, 0, 0, 0, 0, 0],
                             "g": [0, 0, 0, {"re": "1", "im": "0"}, 0, 0, 0, 0, 0, 0]}))
    code, out, _ = run(capsys, "classify", "-c", str(p))
    assert code == 0 and "Discrete(36)" in out


def test_cli_parse_error(capsys):
    code, _, err = run(capsys, "classify", "-e", "x^3", "y")
    assert code == 2 and "parse error" in err and "^" in err


def test_cli_missing_input(capsys):
    assert run(capsys, "classify")[0] == 2


def test_cli_bad_subcommand(capsys):
    assert run(capsys, "frobnicate")[0] == 2


def test_cli_certificate_only(capsys):
    code, out, _ = run(capsys, "classify", "--policy", "no-cubic", "-e", "x^2+y^2+2*z",
                       "z^2+2*x+3*y")
    assert code == 3 and "Discrete(16)" in out


def test_cli_reduce(capsys):
    code, out, _ = run(capsys, "reduce", "--json", "-e", "x*y+z", "z^2+x")
    assert code == 0
    d = json.loads(out)
    assert d["witness_ok"] is True and d["affine_class"]["label"] == "Discrete(18)"


def test_cli_census_item(capsys):
    code, out, _ = run(capsys, "census", "--item", "1")
    assert code == 0 and "6 cusps, 0 double cusps, 4 nodes" in out
    assert run(capsys, "census", "--item", "65")[0] == 2


def test_cli_verify_only_resultants(capsys):
    code, out, _ = run(capsys, "verify-paper", "--json", "--only", "resultants")
    assert code == 0
    d = json.loads(out)
    assert len(d["checks"]) == 3 and d["ok"]


def test_cli_verify_unknown_suite(capsys):
    assert run(capsys, "verify-paper", "--only", "nope")[0] == 2


def test_cli_fuzz(capsys):
    code, out, _ = run(capsys, "fuzz", "--seed", "1", "--count", "3", "--target", "34,F8(1+i)")
    assert code == 0 and "0 failures" in out
    assert run(capsys, "fuzz", "--count", "0")[0] == 2
    assert run(capsys, "fuzz", "--count", "1", "--target", "F9(1)")[0] == 2


# ---------------------------------------------------------------------------
# malformed-input corpus

ATOMS = ["x", "y", "z", "i", "2", "1/2", "sqrt(2)", "(", ")", "+", "-", "*", "^", "/", " ",
         "3", "x^2", "y*z", "sqrt(", "**", "1/0", "q", "@", ".", "0.5", "e", "sqrt(-1)", "é",
         "x^3", "x*y*z", "2^", "((", "))", "+*", "9999999999999999999999", "sqrt(x)"]


def _corpus(n, seed=2024):
    rng = random.Random(seed)
    valid = [e for pair in REPRESENTATIVES.values() for e in pair]
    for _ in range(n):
        r = rng.random()
        if r < 0.4:
            s = list(rng.choice(valid))
            for _ in range(rng.randint(1, 3)):
                op = rng.randrange(3)
                pos = rng.randrange(len(s) + 1)
                if op == 0 and s:
                    del s[min(pos, len(s) - 1)]
                elif op == 1:
                    s.insert(pos, rng.choice(ATOMS))
                else:
                    s.insert(pos, chr(rng.randrange(32, 0x250)))
            yield ("-e", "".join(s), rng.choice(valid))
        elif r < 0.7:
            yield ("-e", "".join(rng.choice(ATOMS) for _ in range(rng.randint(0, 8))),
                   "".join(rng.choice(ATOMS) for _ in range(rng.randint(0, 8))))
        else:
            junk = [rng.choice([0, 1, "1/2", "i", "x", None, 1.5, True, [], {}, {"re": "a"},
                                {"a": "1", "b": "1", "radicand": "2"}, "sqrt(", "1/0"])
                    for _ in range(rng.choice([9, 10, 10, 11]))]
            other = [0] * 10
            payload = rng.choice([json.dumps([junk, other]), json.dumps({"f": junk}),
                                  json.dumps(junk), "[[1,2", "{}", "null", ""])
            yield ("-c", payload)


def _parses(case):
    try:
        if case[0] == "-e":
            parse_map(case[1], case[2])
        else:
            data = json.loads(case[1])
            if isinstance(data, dict):
                data = [data["f"], data["g"]]
            parse_coeff_map(*data)
        return True
    except Exception:
        return False


def test_malformed_corpus_never_crashes(capsys):
    malformed = 0
    for case in _corpus(10_000):
        if _parses(case):
            continue
        malformed += 1
        code = main(["classify", *case])
        capsys.readouterr()
        assert code in (1, 2, 3), case
    assert malformed >= 5_000
