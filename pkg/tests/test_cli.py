from __future__ import annotations

import io
import json
from pathlib import Path

import pytest

from quivres.cli import run

DATA = Path(__file__).parent / "data"


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out=out)
    return code, out.getvalue()


def call_json(*argv):
    code, text = call(*argv, "--format", "json")
    assert code == 0
    return json.loads(text)


def test_catalog_lists_builtins():
    code, text = call("catalog")
    assert code == 0
    for name in ("star4", "sixv1", "sixv4", "legs3", "threevertex", "fourvertex", "star4x2", "star5"):
        assert name in text
    doc = call_json("catalog")
    assert {e["name"] for e in doc["examples"]} >= {"star4", "star5"}
    assert "version" in doc


def test_census_star4():
    doc = call_json("census", "--example", "star4", "--jobs", "1")
    assert (doc["total"], doc["nonprojective"], doc["projective"]) == (64, 18, 46)
    assert [row["label"] for row in doc["phi"]][0] == "x+1+2"
    code, text = call("census", "--example", "star4", "--jobs", "1")
    assert "total 64, nonprojective 18, projective 46" in text


def test_census_json_is_byte_stable():
    a = call("census", "--example", "sixv1", "--format", "json", "--jobs", "1")
    b = call("census", "--example", "sixv1", "--format", "json", "--jobs", "2")
    assert a == b


def test_check_s_legs3():
    doc = call_json("check-s", "--example", "legs3", "--s", "++-+-+-")
    assert doc["verified"] is True
    assert doc["verdict"] in ("feasible", "infeasible")
    assert len(doc["phi"]) == 7


def test_check_s_certificate_is_echoed():
    # star4 distinguished nonprojective sign function in Phi order 12,13,14,23,24,34
    doc = call_json("check-s", "--example", "star4", "--s", "+-++-+")
    assert doc["verdict"] == "infeasible" and doc["verified"]
    assert isinstance(doc["mu"], str)


def test_certificate_and_extend():
    doc = call_json("certificate", "--example", "threevertex", "--s", "+--+")
    assert doc["certificate"]["k"] == 2 and doc["certificate"]["verified"]
    doc = call_json("extend", "--example", "star4", "--target", "star4x2", "--s", "+-++-+")
    assert doc["verdict"] == "infeasible" and len(doc["s_extended"]) == 10


def test_leaves_and_input_file():
    doc = call_json("leaves", "--input", str(DATA / "star4.json"))
    assert len(doc["phi"]) == 6 and doc["count"] == 64
    assert all(row["m"] == 4 and row["local_quiver"]["loops"] == [0, 0] for row in doc["phi"])


def test_mc_is_seeded():
    a = call_json("mc", "--n", "5", "--m", "2", "--trials", "50", "--seed", "4")
    b = call_json("mc", "--n", "5", "--m", "2", "--trials", "50", "--seed", "4")
    assert a == b and a["trials"] == 50


def test_usets_and_theta_zero():
    doc = call_json("usets", "--n", "5", "--set", "12", "--set", "345")
    assert doc["J"] == [[1, 3], [1, 4], [1, 5], [2, 3], [2, 4], [2, 5]]
    assert doc["involution"] and doc["methods_agree"] and doc["closure_size"] == 11
    assert call_json("theta-zero")["is_zero_only"] is True
    assert call_json("theta-zero", "--only-upper")["is_zero_only"] is False


def test_pattern_queries():
    doc = call_json("pattern", "--arrows", "x->1,x->2,y->1,y->2,y->3,y->4,y->5",
                    "--set", "12", "--set", "345")
    assert doc["reach_x"] == ["x", "1", "2"]
    assert doc["in_good_U"] is True
    assert doc["semistable"] is False and doc["uns"]["x"] is True
    doc = call_json("pattern", "--example", "star4", "--mask", "0xffff", "--s", "+-++-+")
    assert doc["in_U_s"] is True and doc["in_U_s_path"] is True


def test_properness_trace():
    doc = call_json("properness", "--vals", str(DATA / "star5_rep.json"))
    assert doc["success"] is True
    assert len(doc["trace"]) >= 5
    assert all(v == "inf" or v >= 0 for v in doc["final"].values())


def test_error_exit_codes(capsys):
    assert call("check-s", "--example", "star4", "--s", "+++")[0] == 1
    assert call("census", "--example", "nope")[0] == 1
    assert call("census", "--bogus")[0] == 2
    assert call("frobnicate")[0] == 2
    err = capsys.readouterr().err
    assert "catalog" in err  # usage lists the valid subcommands


@pytest.mark.parametrize("argv", [["--version"]])
def test_version_flag(argv):
    assert call(*argv)[0] == 0
