import json

import pytest

from gdseries import __version__
from gdseries.cli import RunConfig, main


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def body(out):
    return [line for line in out.splitlines() if not line.startswith("#")]


def test_header_carries_version_and_config(capsys):
    code, out, _ = run(capsys, "seq", "g", "--n", "3")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == f"# gdseries {__version__}"
    cfg = json.loads(lines[1].removeprefix("# config "))
    assert cfg["family"] == "g" and cfg["params"]["n"] == 3
    assert RunConfig.from_json(cfg).to_json() == cfg


@pytest.mark.parametrize("family, n, expected", [
    ("it", 6, [0, 1, 0, 2, 24, 544, 22320]),
    ("g", 3, [1, 1, 2, 8]),
    ("ssd", 5, [1, 1, 2, 22, 1688, 573496]),
])
def test_seq_examples(capsys, family, n, expected):
    code, out, _ = run(capsys, "seq", family, "--n", str(n), "--format", "bfile")
    assert code == 0
    assert body(out) == [f"{k} {v}" for k, v in enumerate(expected)]


def test_seq_json_and_csv(capsys):
    _, out, _ = run(capsys, "seq", "dhat_t", "--n", "2", "--format", "json")
    doc = json.loads(out)
    assert doc["version"] == __version__ and doc["config"]["family"] == "dhat_t"
    assert doc["result"][2]["count"] == [{"marks": {"t": 1}, "value": "1"}, {"marks": {"t": 2}, "value": "3"}]
    _, out, _ = run(capsys, "seq", "dhat_t", "--n", "2", "--format", "csv")
    assert body(out) == ["n,marks,count", "0,1,1", "1,t,1", "2,t,1", "2,t^2,3"]


def test_marks_option(capsys):
    _, out, _ = run(capsys, "seq", "dhat_t", "--n", "3", "--marks", "none", "--format", "bfile")
    assert body(out)[-1] == "3 64"
    code, _, err = run(capsys, "seq", "dhat_t", "--n", "3", "--marks", "q")
    assert code == 2 and "marks" in err


def test_bfile_needs_unmarked_integer_counts(capsys):
    code, _, err = run(capsys, "seq", "dhat_t", "--n", "2", "--format", "bfile")
    assert code == 2 and "--marks none" in err
    code, _, err = run(capsys, "seq", "g", "--n", "2", "--alpha", "4/3", "--format", "bfile")
    assert code == 2 and "integer" in err


def test_coeffs_tables(capsys):
    _, out, _ = run(capsys, "coeffs", "scd", "--beta", "2", "--order", "6")
    text = "\n".join(body(out))
    for v in ("-4", "-128/3", "45056/3", "-4984930304/45"):
        assert v in text
    _, out, _ = run(capsys, "coeffs", "g", "--beta", "1", "--format", "csv")
    assert body(out) == ["m,l,value", "0,0,1"]
    _, out, _ = run(capsys, "coeffs", "cg", "--beta", "2")
    assert "every entry is zero" in out


def test_coeffs_grade_too_high_is_explained(capsys):
    code, out, err = run(capsys, "coeffs", "scd", "--beta", "1")
    assert code == 2 and out == ""
    assert "--beta 2" in err


def test_wright(capsys):
    _, out, _ = run(capsys, "wright", "--order", "2")
    assert body(out) == ["w_0(n) = 1", "w_1(n) = -4*n", "w_2(n) = 8*n^2 - 4*n"]
    code, _, _ = run(capsys, "wright", "dhat_t")
    assert code == 2


def test_expand(capsys):
    _, out, _ = run(capsys, "expand", "g", "--n", "15", "--terms", "0")
    assert "exact" in body(out)[-1]
    _, out, _ = run(capsys, "expand", "cg", "--n", "20,30", "--terms", "3", "--format", "csv")
    rows = [line.split(",") for line in body(out)[1:]]
    assert len(rows) == 8
    errs = {(int(n), int(m)): float(e) for n, m, e in rows}
    assert errs[20, 1] < errs[20, 0] and errs[20, 3] < errs[20, 1]
    _, out, _ = run(capsys, "expand", "scd", "--n", "25", "--terms", "6", "--format", "json")
    terms = json.loads(out)["result"][0]["terms"]
    assert [t["M"] for t in terms] == list(range(7))
    assert terms[1]["term"] == "-25/8388608"  # w_1(25) / 2^25 = -100 / 2^25


def test_oracle_command(capsys):
    _, out, _ = run(capsys, "oracle", "g_t", "--n", "4", "--format", "csv")
    assert body(out)[-4:] == ["4,t,38", "4,t^2,19", "4,t^3,6", "4,t^4,1"]
    code, _, err = run(capsys, "oracle", "g", "--n", "7")
    assert code == 2 and "--unsafe-n" in err
    code, _, _ = run(capsys, "oracle", "dag2", "--n", "2")
    assert code == 2
    _, out, _ = run(capsys, "oracle", "sat", "--n", "2", "--universe", "half", "--format", "bfile")
    assert body(out) == ["0 1", "1 1", "2 4"]


def test_calibrate(capsys):
    code, out, _ = run(capsys, "calibrate-sat", "--format", "json")
    assert code == 0 and json.loads(out)["result"]["chosen"] == "full"


def test_verify_scopes(capsys, tmp_path):
    path = tmp_path / "report.json"
    code, out, _ = run(capsys, "verify", "--scope", "appendix", "--format", "json", "--out", str(path))
    assert code == 0 and out == ""
    doc = json.loads(path.read_text())
    assert doc["result"]["failed"] == 0 and doc["result"]["passed"] >= 10
    code, out, _ = run(capsys, "verify", "--scope", "oracle", "--max-n", "4")
    assert code == 0 and out.splitlines()[-1].endswith("0 failed")


def test_verify_mismatch_exits_one(capsys, monkeypatch):
    from gdseries import cli
    from gdseries.verify import CheckResult

    monkeypatch.setattr(cli, "run", lambda *a: [CheckResult("rules", "broken", False, "a != b")])
    code, out, _ = run(capsys, "verify")
    assert code == 1 and "a != b" in out


def test_output_is_deterministic(capsys):
    first = run(capsys, "coeffs", "ssd_t", "--order", "4", "--format", "json")
    second = run(capsys, "coeffs", "ssd_t", "--order", "4", "--format", "json")
    assert first == second


def test_usage_errors(capsys):
    assert run(capsys, "seq", "nope")[0] == 2
    assert run(capsys, "seq", "g", "--alpha", "x")[0] == 2
    assert run(capsys, "seq", "g", "--root-degree", "5", "--alpha", "2")[0] == 0
    assert run(capsys, "coeffs", "scd", "--format", "bfile")[0] == 2
