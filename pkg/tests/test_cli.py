import json
import shutil

import pytest

from mfwb.cli import main, run
from mfwb.problem import load_problem


def call(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def as_json(capsys, *argv):
    code, out, _ = call(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def test_hrr_example(capsys, problems):
    code, doc = as_json(capsys, "hrr", str(problems / "a1.json"), "E", "E")
    assert code == 0
    assert doc["schema"] == "mfwb/1" and doc["command"] == "hrr"
    r = doc["results"]
    assert (r["chi"], r["pairing"], r["match"]) == (1, "1", True)


def test_milnor_example(capsys, problems):
    code, doc = as_json(capsys, "milnor", str(problems / "a2.json"))
    assert code == 0
    assert doc["results"] == {"mu": 2, "basis": ["1", "x"]}


def test_validate_bad_file(capsys, problems):
    code, doc = as_json(capsys, "validate", str(problems / "bad.json"))
    assert code == 1
    err = doc["error"]
    assert err["kind"] == "validation" and err["where"] == "E"
    assert err["entry"] == ["phi*psi", 0, 0]
    code, out, err_text = call(capsys, "validate", str(problems / "bad.json"))
    assert code == 1 and "E" in err_text and out == ""


def test_residue_and_oracle(capsys, problems):
    code, doc = as_json(capsys, "residue", str(problems / "a2.json"), "3*x", "--oracle")
    assert code == 0
    assert doc["results"] == {"N": 2, "residue": "1"}
    assert doc["diagnostics"]["oracle"]["residue"] == "1"
    code, doc = as_json(capsys, "residue", str(problems / "a1.json"), "1")
    assert doc["results"]["residue"] == "-1"


def test_pairing_and_gram(capsys, problems):
    _, doc = as_json(capsys, "pair", str(problems / "a2.json"), "id", "s")
    assert doc["results"]["value"] == "-1"
    _, doc = as_json(capsys, "pair", str(problems / "a1.json"), "yid", "id", "--oracle")
    assert doc["results"]["value"] == "0"
    code, doc = as_json(capsys, "gram", str(problems / "cubic.json"), "K", "L")
    assert code == 0 and doc["results"]["nondegenerate"] is True


def test_cohom_chern_bb(capsys, problems):
    _, doc = as_json(capsys, "cohom", str(problems / "a2.json"), "E1", "E1", "--trunc", "4")
    assert doc["results"]["dims"] == {"0": 1, "1": 1}
    assert doc["diagnostics"]["trajectory"][0][0] == 4
    _, doc = as_json(capsys, "chern", str(problems / "cubic.json"), "L")
    assert doc["results"]["chern"] == {"1": "0", "x": "3", "y": "-3", "x*y": "0"}
    _, doc = as_json(capsys, "bb", str(problems / "a1.json"), "id")
    assert doc["results"]["value"] == {"1": "-1"} and doc["results"]["closed"] is True


def test_check_commands(capsys, problems):
    code, doc = as_json(capsys, "koszul-check", "--n", "1", "--samples", "5")
    assert code == 0 and doc["results"]["verdict"] == "pass"
    code, doc = as_json(capsys, "eta-check", str(problems / "a2.json"), "E1")
    assert code == 0 and doc["results"]["verdict"] == "pass"
    code, doc = as_json(capsys, "bpl-check", str(problems / "a2.json"), "E1")
    assert code == 0 and doc["results"]["verdict"] == "pass"


def test_corpus_subset(capsys):
    code, doc = as_json(capsys, "corpus", "--criteria", "1", "2")
    assert code == 0
    assert [c["criterion"] for c in doc["results"]["criteria"]] == [1, 2]


def test_error_exit_codes(capsys, problems, tmp_path):
    code, doc = as_json(capsys, "milnor", str(tmp_path / "missing.json"))
    assert code == 3 and doc["error"]["kind"] == "input"
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    assert as_json(capsys, "milnor", str(broken))[0] == 3
    code, doc = as_json(capsys, "residue", str(problems / "a2.json"), "3*x+")
    assert code == 3 and doc["error"]["position"] == 4
    code, doc = as_json(capsys, "pair", str(problems / "a1.json"), "id", "nope")
    assert code == 3
    code, _, err = call(capsys, "pair", str(problems / "a1.json"))
    assert code == 3 and "usage" in err
    code, doc = as_json(capsys, "milnor", str(problems / "a2.json"), "--cap", "2")
    assert code == 2 and doc["error"]["kind"] == "computation"


def test_non_isolated_is_computation_failure(capsys, tmp_path):
    f = tmp_path / "p.json"
    f.write_text(json.dumps({"ring": {"variables": ["x", "y"], "potential": "x^2"}}))
    code, doc = as_json(capsys, "milnor", str(f), "--cap", "10")
    assert code == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["hrr", "a1.json", "E", "E"],
        ["milnor", "a2.json"],
        ["cohom", "a2.json", "E1", "E1"],
        ["validate", "cubic.json"],
        ["gram", "a2.json", "E1", "E2"],
    ],
)
def test_json_contains_text_fields_and_is_deterministic(capsys, problems, argv):
    argv = [str(problems / a) if a.endswith(".json") else a for a in argv]
    _, text, _ = call(capsys, *argv)
    _, text2, _ = call(capsys, *argv)
    assert text == text2
    _, doc = as_json(capsys, *argv)
    flat = json.dumps(doc)
    for line in text.splitlines()[1:]:
        body = line.strip()
        if body.startswith("-"):  # list items carry no key
            continue
        key = body.split(":")[0]
        assert f'"{key}"' in flat, key
    rep, _ = run(argv + ["--format", "json"])
    assert json.loads(json.dumps(rep.to_json())) == rep.to_json()


def test_problem_round_trip(problems, tmp_path):
    prob = load_problem(problems / "a2.json")
    f = tmp_path / "copy.json"
    f.write_text(json.dumps(prob.to_json()))
    again = load_problem(f)
    assert again.to_json() == prob.to_json()
    assert again.factorization("E1").rank == 1


def test_module_entry_point(problems):
    import subprocess
    import sys

    out = subprocess.run(
        [sys.executable, "-m", "mfwb", "milnor", str(problems / "a2.json"), "--format", "json"],
        capture_output=True, text=True, check=True,
    )
    assert json.loads(out.stdout)["results"]["mu"] == 2
    if shutil.which("mfwb"):
        assert subprocess.run(["mfwb", "validate", str(problems / "bad.json")], capture_output=True).returncode == 1
