import json

import pytest
from click.testing import CliRunner

from logcap.cli import main

SQUARE = {"vars": 2, "terms": [{"exp": [2, 0], "coef": 1},
                               {"exp": [1, 1], "coef": 2},
                               {"exp": [0, 2], "coef": 1}]}


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture()
def square_file(tmp_path):
    path = tmp_path / "square.json"
    path.write_text(json.dumps(SQUARE))
    return str(path)


def test_cap_command(runner, square_file):
    result = runner.invoke(main, ["cap", "--poly", square_file])
    assert result.exit_code == 0
    payload = json.loads(result.output)
    assert payload["value"] == pytest.approx(4.0)
    assert payload["status"] == "attained"


def test_cfr_command_with_target(runner, square_file):
    result = runner.invoke(main, ["cfr", "--poly", square_file, "--target", "2,0"])
    assert result.exit_code == 0
    assert json.loads(result.output)["status"] == "face-restricted"


def test_der_on_fixture_reference(runner):
    result = runner.invoke(main, ["der", "--poly", "fixture:cycle-2",
                                  "--target", "1,1,1,1"])
    assert result.exit_code == 0
    assert json.loads(result.output)["value"] == "2"


def test_slc_command(runner):
    result = runner.invoke(main, ["slc", "--poly", "fixture:matching-plus-squares",
                                  "--samples", "150", "--seed", "7"])
    assert result.exit_code == 0
    payload = json.loads(result.output)
    assert payload["status"] == "refuted"
    assert payload["witness"]["eigenvalue"] > 0


def test_dconvex_command(runner):
    result = runner.invoke(main, ["dconvex", "--poly", "fixture:gap-square"])
    assert result.exit_code == 0
    assert json.loads(result.output)["counterexample"] == [1]


def test_rado_command(runner):
    result = runner.invoke(main, ["rado", "--poly", "fixture:cycle-2"])
    assert result.exit_code == 0
    assert json.loads(result.output)["holds"] is True


def test_propagate_command(runner, tmp_path):
    weights = tmp_path / "weights.json"
    weights.write_text(json.dumps({"weights": ["2", "1", "1"]}))
    poly = tmp_path / "poly.json"
    poly.write_text(json.dumps({"vars": 1, "terms": [
        {"exp": [0], "coef": 2}, {"exp": [1], "coef": 3}, {"exp": [2], "coef": 1}]}))
    result = runner.invoke(main, ["propagate", "--weights", str(weights),
                                  "--poly", str(poly), "--grid", "0,1/2,1,2,5"])
    assert result.exit_code == 0
    payload = json.loads(result.output)
    assert payload["propagatable"] and all(payload["in_cone"])


def test_verify_command_deterministic(runner, tmp_path):
    args = ["verify", "--suite", "inner", "--seed", "3",
            "--out", str(tmp_path / "report.json")]
    first = runner.invoke(main, args)
    second = runner.invoke(main, args)
    assert first.exit_code == 0 and second.exit_code == 0
    assert first.output == second.output
    assert (tmp_path / "report.json").read_text().strip() == first.output.strip()


def test_perm_command(runner, tmp_path):
    matrix = tmp_path / "matrix.json"
    matrix.write_text(json.dumps({"n": 3, "rows": [["1/3"] * 3] * 3}))
    result = runner.invoke(main, ["perm", "--matrix", str(matrix), "--check", "vdw"])
    assert result.exit_code == 0
    payload = json.loads(result.output)
    assert payload["permanent"] == "2/9"
    assert all(r["verdict"] == "holds" for r in payload["reports"])


def test_inner_command(runner, square_file):
    result = runner.invoke(main, ["inner", "--p", square_file, "--q", square_file,
                                  "--l", "1,1", "--provenance", "constructive-hstable"])
    assert result.exit_code == 0
    records = json.loads(result.output)
    assert records[0]["left"] == pytest.approx(6.0)


def test_run_manifest(runner, tmp_path, square_file):
    manifest = tmp_path / "manifest.json"
    manifest.write_text(json.dumps({
        "seed": 11,
        "commands": [
            {"command": "der", "args": {"poly": square_file, "target": [1, 1]}},
            {"command": "verify", "args": {"suite": "inner"}},
        ],
    }))
    result = runner.invoke(main, ["run", "--manifest", str(manifest)])
    assert result.exit_code == 0
    records = json.loads(result.output)
    assert records[0]["type"] == "derivative"
    assert records[0]["value"] == "2"
    # byte-identical on rerun with the same manifest and seed
    again = runner.invoke(main, ["run", "--manifest", str(manifest)])
    assert again.output == result.output


def test_run_manifest_records_nonguaranteed_violation_with_exit_zero(runner, tmp_path):
    # the core suite includes the support-gap quartic: its lower bound is
    # violated but carries user provenance, so the run exits 0
    manifest = tmp_path / "manifest.json"
    manifest.write_text(json.dumps({
        "seed": 2, "commands": [{"command": "verify", "args": {"suite": "core"}}]}))
    result = runner.invoke(main, ["run", "--manifest", str(manifest)])
    assert result.exit_code == 0
    records = json.loads(result.output)
    violated = [r for r in records if r["verdict"] == "violated"]
    assert violated and all(not r["guaranteed"] for r in violated)


def test_run_empty_manifest(runner, tmp_path):
    manifest = tmp_path / "manifest.json"
    manifest.write_text(json.dumps({"commands": []}))
    result = runner.invoke(main, ["run", "--manifest", str(manifest)])
    assert result.exit_code == 0
    assert json.loads(result.output) == []


def test_malformed_json_exits_one_with_position(runner, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"vars": 2, "terms": [')
    result = runner.invoke(main, ["cap", "--poly", str(bad)])
    assert result.exit_code == 1
    assert "line 1" in result.output or "line 1" in (result.stderr or "")


def test_unknown_fixture_exits_one(runner):
    result = runner.invoke(main, ["cap", "--poly", "fixture:not-a-fixture"])
    assert result.exit_code == 1
