import json

import jsonschema
import pytest

from tcwalls import schemas
from tcwalls.cli import RunConfig, build_parser, main
from tcwalls.errors import InvalidInputError


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, schema, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    assert code == 0
    obj = json.loads(out)
    jsonschema.validate(obj, schema)
    return obj


def test_tc(capsys):
    assert run(capsys, "tc", "--n", "3", "--k", "1")[:2] == (0, "21\n")
    obj = run_json(capsys, schemas.TC, "tc", "--n", "3", "--k", "1")
    assert obj == {"n": 3, "k": 1, "value": 21}


def test_enumerate(capsys):
    assert run(capsys, "enumerate", "--class", "C", "--n", "2", "--k", "1")[:2] == (0, "7\n")
    code, out, _ = run(capsys, "enumerate", "--class", "B", "--n", "2", "--k", "1", "--list")
    assert out.split() == ["aaabb", "aabab", "aabbb", "ababb", "abbab", "baabb", "babab"]
    obj = run_json(capsys, schemas.ENUMERATE, "enumerate", "--class", "A", "--n", "2", "--list")
    assert obj["count"] == 7 and len(obj["words"]) == 7 and obj["k"] == 2
    obj = run_json(capsys, schemas.ENUMERATE, "enumerate", "--class", "H", "--n", "2", "--k", "1",
                   "--h-all-letters")
    assert obj["count"] == 3 and "words" not in obj


def test_count(capsys):
    for model in ("paths", "tableaux", "series"):
        assert run(capsys, "count", "--model", model, "--seq", "b", "--n", "4", "--k", "2")[1] == "1010\n"
        assert run(capsys, "count", "--model", model, "--seq", "c", "--n", "3", "--k", "1")[1] == "57\n"
    code, out, _ = run(capsys, "count", "--seq", "c", "--table", "--max-n", "2")
    assert out.splitlines() == ["n,k,value", "0,0,1", "1,0,1", "1,1,1", "2,0,3", "2,1,7", "2,2,7"]
    obj = run_json(capsys, schemas.COUNT, "count", "--seq", "b", "--table", "--max-n", "3", "--max-k", "1")
    assert [r["value"] for r in obj["rows"]] == [1, 1, 1, 2, 7, 5, 38]


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "identity", "--mode", "both", "--max-n", "50", "--max-k", "10")
    assert code == 0 and out.rstrip().endswith("all passed")
    assert out.count("PASS") == 12
    obj = run_json(capsys, schemas.VERIFY, "verify", "identity", "--mode", "series", "--max-k", "3")
    assert obj["passed"] and len(obj["results"]) == 4
    code, out, _ = run(capsys, "verify", "identity", "--mode", "tableaux", "--max-n", "10",
                       "--format", "csv")
    assert out.splitlines()[0] == "mode,key,passed,detail"


def test_verify_failure_exit_code(capsys, monkeypatch):
    from tcwalls import cli
    from tcwalls.tableaux import IdentityReport

    monkeypatch.setattr(cli, "verify_tableau_identity",
                        lambda n: IdentityReport(n, False, 3, (1, 0, 2, 3)))
    code, out, _ = run(capsys, "verify", "identity", "--max-n", "5")
    assert code == 1 and "counterexample n=1 k=0" in out


def test_consistency_exit_code(capsys, monkeypatch):
    from tcwalls import cli
    from tcwalls.errors import ConsistencyError

    def boom(n, k):
        raise ConsistencyError("routes differ")

    monkeypatch.setattr(cli, "tc_count", boom)
    code, _, err = run(capsys, "tc", "--n", "3", "--k", "1")
    assert code == 3 and "INCONSISTENCY" in err


def test_tableau(capsys):
    obj = run_json(capsys, schemas.TABLEAU, "tableau", "--from-word", "aabba", "--class", "C",
                   "--n", "2", "--k", "1")
    assert obj == {"rows": [[1, 3], [2, 4], [5, None]]}
    code, out, _ = run(capsys, "tableau", "--from-word", "aabba", "--class", "C", "--n", "2", "--k", "1")
    assert out.splitlines() == ["5 .", "2 4", "1 3"]
    assert run(capsys, "tableau", "--from-word", "bbaaa", "--class", "C", "--n", "2", "--k", "1")[0] == 2


def test_series(capsys):
    code, out, _ = run(capsys, "series", "--which", "B", "--k", "1", "--order", "8")
    assert out == "z^2 + 7*z^4 + 38*z^6 + O(z^8)\n"
    obj = run_json(capsys, schemas.SERIES, "series", "--which", "C", "--k", "1", "--order", "4")
    assert obj["coefficients"] == ["0", "1", "7/2", "19/2"] and obj["variable"] == "w"
    code, out, _ = run(capsys, "series", "--which", "D", "--order", "5", "--format", "csv")
    assert out.splitlines() == ["exponent,coefficient", "0,1", "1,0", "2,1", "3,0", "4,2"]
    assert run(capsys, "series", "--which", "B", "--order", "5")[0] == 2


def test_dist(capsys):
    code, out, _ = run(capsys, "dist", "--param", "Y", "--n", "2", "--emit", "csv")
    assert out.splitlines() == ["m,probability,fraction", "1,0.571428571429,4/7",
                                "2,0.285714285714,2/7", "3,0.142857142857,1/7"]
    obj = run_json(capsys, schemas.DIST, "dist", "--param", "Z", "--n", "2")
    assert obj["masses"] == {"3": "1/7", "4": "3/7", "5": "3/7"}
    obj = run_json(capsys, schemas.CONVERGENCE, "dist", "--param", "X", "--converge",
                   "--n-list", "10,20,40", "--r-max", "2")
    assert obj["doubling"] == {"1": True, "2": True}
    code, out, _ = run(capsys, "dist", "--param", "Z", "--converge", "--n-list", "8,16",
                       "--r-max", "1", "--emit", "csv")
    assert out.splitlines()[0] == "param,n,r,moment,target,gap" and len(out.splitlines()) == 3


def test_usage_errors(capsys):
    assert run(capsys)[0] == 2
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "tc", "--n", "3", "--k", "1", "--frobnicate")[0] == 2
    assert run(capsys, "tc", "--n", "1", "--k", "3")[0] == 2
    assert run(capsys, "dist", "--param", "X")[0] == 2
    assert run(capsys, "dist", "--param", "X", "--converge", "--n-list", "a,b")[0] == 2
    assert run(capsys, "count", "--seq", "b")[0] == 2


def test_budgets(capsys, monkeypatch):
    monkeypatch.setenv("TCW_MAX_WORD_LENGTH", "5")
    code, _, err = run(capsys, "enumerate", "--class", "A", "--n", "2")
    assert code == 2 and "budget" in err
    assert run(capsys, "enumerate", "--class", "A", "--n", "2", "--max-word-length", "6")[1] == "7\n"
    monkeypatch.setenv("TCW_MAX_DP_N", "10")
    assert run(capsys, "dist", "--param", "X", "--n", "11")[0] == 2
    monkeypatch.setenv("TCW_MAX_DP_N", "ten")
    assert run(capsys, "tc", "--n", "3", "--k", "1")[0] == 2
    monkeypatch.delenv("TCW_MAX_DP_N")
    assert run(capsys, "series", "--which", "D", "--order", "50", "--max-order", "10")[0] == 2
    with pytest.raises(InvalidInputError):
        RunConfig("tc", {}, max_order=0)


def test_output_and_manifest(capsys, tmp_path):
    out_file = tmp_path / "out.txt"
    man = tmp_path / "run.json"
    code, out, _ = run(capsys, "tc", "--n", "4", "--k", "2", "--output", str(out_file),
                       "--manifest", str(man), "--jobs", "2")
    assert code == 0 and out == ""
    assert out_file.read_text() == "1272\n"
    manifest = json.loads(man.read_text())
    jsonschema.validate(manifest, schemas.MANIFEST)
    assert manifest["inputs"]["n"] == 4 and manifest["jobs"] == 2


def test_deterministic_output(capsys):
    argv = ("verify", "identity", "--mode", "both", "--max-n", "20", "--max-k", "4", "--format", "json")
    first = run(capsys, *argv)[1]
    assert run(capsys, *argv)[1] == first


def test_help_lists_csv_columns(capsys):
    help_text = build_parser().format_help()
    assert "param,n,r,moment,target,gap" in help_text
