import json
import subprocess
import sys

import pytest

from abelcover.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize(
    "argv, expected",
    [
        (["count-subgroups", "--p", "2", "--alpha", "1,1", "--beta", "1"], "3"),
        (["count-subgroups", "--p", "5", "--alpha", "3", "--beta", "2"], "1"),
        (["count-subgroups", "--p", "2", "--alpha", "1", "--beta", "2"], "0"),
        (["count-by-order", "--p", "2", "--alpha", "2,1", "--r", "1"], "3"),
        (["count-coverings", "--spec", "C3", "--kernel", "5:[1]"], "1"),
        (["count-coverings", "--spec", "C3", "--folds", "1"], "1"),
        (["count-coverings", "--spec", "K2", "--kernel", "2:[1]"], "0"),
        (["count-coverings", "--spec", "C3", "--kernel", "5:[1]", "--total", "3:[1];5:[1]"], "1"),
    ],
)
def test_documented_outputs(capsys, argv, expected):
    code, out, _ = run(capsys, *argv)
    assert code == 0 and out == expected + "\n"


def test_triple_reports_its_method(capsys):
    code, out, _ = run(capsys, "count-subgroups", "--p", "2", "--alpha", "2,1", "--beta", "1", "--gamma", "2")
    assert (code, out) == (0, "2\nmethod: closed-form\n")
    code, out, _ = run(
        capsys, "--format", "json-lines", "count-subgroups", "--p", "2", "--alpha", "3,2,1", "--beta", "2,1",
        "--gamma", "2,1",
    )
    assert json.loads(out) == {"count": "9", "method": "oracle"}


def test_explain_emits_one_record_per_prime(capsys):
    code, out, _ = run(
        capsys, "count-coverings", "--spec", "Z12", "--kernel", "2:[1];3:[1]", "--total", "2:[2,1];3:[2]", "--explain"
    )
    lines = out.splitlines()
    assert code == 0 and lines[0] == "1"
    records = [json.loads(line) for line in lines[1:]]
    assert records == [
        {"prime": 2, "factor": "1", "method": "oracle"},
        {"prime": 3, "factor": "1", "method": "closed-form"},
    ]


def test_inline_json_and_file_specs(capsys, tmp_path):
    doc = '{"orders":[5],"generators":[[1],[4]]}'
    code, inline, _ = run(capsys, "count-coverings", "--spec", doc, "--folds", "25")
    path = tmp_path / "c5.json"
    path.write_text(doc)
    code2, from_file, _ = run(capsys, "count-coverings", "--spec", str(path), "--folds", "25")
    assert code == code2 == 0 and inline == from_file == "1\n"


@pytest.mark.parametrize(
    "argv, fragment",
    [
        (["count-coverings", "--spec", '{"orders":[6],"generators":[[1]]}', "--folds", "2"], "MissingInverse"),
        (["count-coverings", "--spec", '{"orders":[6],"generators":[[0],[1],[5]]}', "--folds", "2"], "ContainsZero"),
        (["count-coverings", "--spec", '{"orders":[6],"generators":[[2],[4]]}', "--folds", "2"], "NotGenerating"),
        (["count-coverings", "--spec", "not json", "--folds", "2"], "UsageError"),
        (["count-coverings", "--spec", "C3", "--kernel", "4:[1]"], "not prime"),
        (["count-coverings", "--spec", "C3", "--kernel", "2:[1]", "--total", "2:[2]"], "OrderMismatch"),
        (["count-coverings", "--spec", "C3", "--folds", "2", "--total", "2:[1]"], "UsageError"),
        (["count-subgroups", "--p", "4", "--alpha", "1", "--beta", "1"], "not prime"),
        (["count-subgroups", "--p", "2", "--alpha", "1,2", "--beta", "1"], "bad partition"),
    ],
)
def test_invalid_input_exits_2(capsys, argv, fragment):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == "" and fragment in err


def test_usage_errors_exit_2(capsys):
    for argv in ([], ["count-coverings", "--spec", "C3"], ["--budget", "0", "count-by-order"], ["frobnicate"]):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 2
    capsys.readouterr()


def test_budget_exceeded_exits_3(capsys):
    code, _, err = run(
        capsys, "--covering-budget", "10", "count-coverings", "--spec", "Z12", "--kernel", "2:[1]",
        "--total", "2:[2,1];3:[1]",
    )
    assert code == 3 and "budget" in err
    code, _, _ = run(capsys, "--budget", "8", "count-subgroups", "--p", "2", "--alpha", "3,2,1", "--beta", "2,1",
                     "--gamma", "2,1")
    assert code == 3


def test_enumerate_coverings(capsys):
    code, out, _ = run(capsys, "enumerate-coverings", "--spec", "C4", "--folds", "2")
    assert (code, out) == (0, "(0)\n# 1 covering subgroup(s)\n")
    code, out, _ = run(capsys, "--format", "json-lines", "enumerate-coverings", "--spec", "K4", "--kernel", "2:[1]")
    record = json.loads(out)
    assert record["kernel"] == "2:[1]" and record["total"] == "2:[1,1,1]" and len(record["elements"]) == 8
    code, out, _ = run(capsys, "enumerate-coverings", "--spec", "K4", "--kernel", "2:[1]", "--graphs")
    assert "# total graph" in out and out.count("\n(") == 8 + 4


def test_output_is_deterministic(capsys):
    argv = ["--format", "json-lines", "count-coverings", "--spec", "Z2xZ4", "--folds", "12", "--explain"]
    first = run(capsys, *argv)
    assert all(run(capsys, *argv) == first for _ in range(3))


@pytest.mark.parametrize("suite", ["formulas", "canonical-form", "coverings"])
def test_verify_suites_pass(capsys, suite):
    code, out, _ = run(capsys, "verify", "--suite", suite)
    assert code == 0
    assert out.count("PASS") == 4 if suite != "canonical-form" else 2
    assert "FAIL" not in out


def test_verify_reports_failure_with_exit_1(capsys, monkeypatch):
    import abelcover.verify as verify

    monkeypatch.setattr(verify, "count_subgroups_of_type", lambda p, a, b: 0)
    code, out, _ = run(capsys, "verify", "--suite", "formulas")
    assert code == 1 and "FAIL criterion 1" in out and "counterexamples" in out


def test_module_entry_point():
    result = subprocess.run(
        [sys.executable, "-m", "abelcover", "count-subgroups", "--p", "3", "--alpha", "1,1", "--beta", "1"],
        capture_output=True, text=True, check=False,
    )
    assert result.returncode == 0 and result.stdout == "4\n"
