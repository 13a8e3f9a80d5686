import json

import pytest

from ceqss import ghz
from ceqss.cli import EXIT_ACCEPTANCE, EXIT_OK, EXIT_USAGE, main


def test_ghz_json_to_file(tmp_path):
    out = tmp_path / "r.json"
    assert main(["ghz", "--n", "5", "--trials", "200", "--cheaters", "1", "--out", str(out)]) == EXIT_OK
    data = json.loads(out.read_text())
    assert data["config"]["n"] == 5
    assert data["config"]["strategies"] == {"1": "measure-early"}
    assert data["metrics"]["reconstruction_success"]["count"] == 200


def test_config_file_overridden_by_flags(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"scheme": "cd", "n": 3, "m": 4, "trials": 50, "seed": 5}))
    out = tmp_path / "r.json"
    assert main(["cd", "--config", str(cfg), "--trials", "30", "--out", str(out)]) == EXIT_OK
    data = json.loads(out.read_text())
    assert (data["config"]["n"], data["config"]["trials"], data["config"]["seed"]) == (3, 30, 5)


def test_seeded_runs_byte_identical(capsys):
    outputs = []
    for _ in range(2):
        assert main(["threshold", "--n", "4", "--m", "3", "--trials", "60", "--seed", "9"]) == EXIT_OK
        outputs.append(capsys.readouterr().out)
    assert outputs[0] == outputs[1]


@pytest.mark.parametrize("fmt,marker", [("csv", "metric,count,trials"), ("table", "Cheat detecting")])
def test_other_formats(capsys, fmt, marker):
    assert main(["ghz", "--n", "3", "--trials", "20", "--format", fmt]) == EXIT_OK
    assert marker in capsys.readouterr().out


@pytest.mark.parametrize("argv", [
    ["ghz", "--n", "1"],
    ["cd", "--d", "3"],
    ["threshold", "--d", "8"],
    ["ghz", "--cheaters", "0", "--strategy", "fabricate-certificate"],
    ["ghz", "--strategy", "nope"],
    ["ghz", "--bogus"],
    ["launch"],
    ["accept", "--only", "42"],
])
def test_usage_errors_exit_1(capsys, argv):
    assert main(argv) == EXIT_USAGE
    assert "error" in capsys.readouterr().err


def test_bad_config_file(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text("{not json")
    assert main(["ghz", "--config", str(cfg)]) == EXIT_USAGE
    cfg.write_text(json.dumps({"scheme": "cd"}))
    assert main(["ghz", "--config", str(cfg)]) == EXIT_USAGE


def test_accept_subset_passes(tmp_path, capsys):
    out = tmp_path / "acc.json"
    assert main(["accept", "--only", "6,7", "--out", str(out)]) == EXIT_OK
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0].startswith("PASS [6]") and lines[1].startswith("PASS [7]")
    assert json.loads(lines[-1]) == {"passed": True, "failed": []}
    assert json.loads(out.read_text())["passed"] is True


def test_accept_other_seed_still_passes(capsys):
    assert main(["accept", "--only", "3", "--seed", "7"]) == EXIT_OK


def test_accept_catches_leaky_reconstruction(monkeypatch, capsys):
    # mutation: absent particles are measured as if present, so k absentees no longer cost 2^-k
    honest = ghz.reconstruct
    monkeypatch.setattr(ghz, "reconstruct", lambda deal, present, rng: honest(deal, range(deal.n), rng))
    assert main(["accept", "--only", "2", "--scale", "0.1"]) == EXIT_ACCEPTANCE
    assert "FAIL [2]" in capsys.readouterr().out
