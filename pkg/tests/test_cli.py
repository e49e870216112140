import json

import numpy as np
import pytest
import yaml

from core.twists import DirichletCharacter, random_hecke_coefficients, save_coefficients
from scripts.gammagen import RunConfig, exit_code, main


@pytest.fixture
def run(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("GAMMAGEN_CACHE", str(tmp_path / "cache"))

    def invoke(*argv):
        code = main(["--settings-dir", str(tmp_path / "settings"), *argv])
        lines = [json.loads(line) for line in capsys.readouterr().out.splitlines() if line.strip()]
        return code, lines[:-1], lines[-1]["summary"]
    return invoke


def test_exit_codes():
    assert exit_code([]) == 0
    assert exit_code(["pass", "pass"]) == 0
    assert exit_code(["pass", "inconclusive"]) == 2
    assert exit_code(["inconclusive", "fail"]) == 1


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(command="verify-hq", level=5, q_lo=10, q_hi=3)
    with pytest.raises(ValueError):
        RunConfig(command="gens", level=0)
    with pytest.raises(ValueError):
        RunConfig(command="gens", level=5, emit="xml")


def test_ramanujan(run):
    code, records, summary = run("ramanujan", "4", "2")
    assert code == 0
    assert records == [{"q": 4, "n": 2, "value": -2, "direct": -2}]
    assert summary["passed"] == 1 and summary["seed"] == 0


def test_coverage(run):
    assert run("coverage", "24", "5")[0] == 0
    code, records, _ = run("coverage", "2", "5")
    assert code == 1
    assert records[0]["covered"] is False


def test_identities(run):
    code, records, summary = run("identities")
    assert code == 0
    assert len(records) == 8 + 9 + 3
    assert all(r["holds"] for r in records)
    displayed = [r for r in records if r["kind"] == "identity"]
    assert sum(not r["corrected"] for r in displayed) == 7


def test_empty_q_range_fails(run):
    code, records, summary = run("verify-hq", "--level", "5", "--q-from", "10", "--q-to", "3")
    assert code == 1
    assert "error" in records[0]
    assert summary["failed"] == 1


def test_keydet_random(run):
    code, records, summary = run("--seed", "7", "keydet", "--random", "3")
    assert code == 0
    assert len(records) == 3
    assert all(r["nonzero"] for r in records)
    assert summary["seed"] == 7


def test_keydet_needs_arguments(run):
    assert run("keydet", "--m", "2")[0] == 1


def test_gens_prime_level(run):
    code, records, _ = run("gens", "13")
    assert code == 0
    assert records


def test_gens_composite_untabled_level(run):
    code, records, _ = run("gens", "10")
    assert code == 0
    assert len(records) == 1
    assert records[0]["group"] == "Gamma_1"
    assert records[0]["certified"] and records[0]["index"] == 72


def test_cosets_file(run, tmp_path):
    words = tmp_path / "words.txt"
    words.write_text("# the full modular group\nS\nT\n")
    code, records, _ = run("cosets", "--words", str(words), "--max-cosets", "100")
    assert code == 0
    assert records[0]["index"] == 1


def test_decompose(run):
    code, records, _ = run("decompose", "13", "[[2,1],[13,7]]")
    assert code == 0
    assert records[0]["reconstructs"]


def test_words_count(run):
    code, records, _ = run("words", "5", "--height", "1", "--count-only")
    assert code == 0
    assert records == [{"level": 5, "height_bound": 1, "count": 5}]


def test_orthogonality(run):
    code, records, _ = run("orthogonality", "12")
    assert code == 0
    assert records[0] == {"Q": 12, "family_size": 12, "orthogonal": True}


def test_twist_fe(run, tmp_path):
    coeffs = tmp_path / "coeffs.json"
    h = random_hecke_coefficients(5, DirichletCharacter(5, [1]), 400, np.random.default_rng(3))
    save_coefficients(h, coeffs)
    code, records, summary = run("twist-fe", "--coeffs", str(coeffs), "--modulus", "12", "--all-characters",
                                 "--x", "400")
    assert code == 0
    assert len(records) == 4
    assert all(r["fe_holds"] and r["oracle_holds"] for r in records)
    code, records, _ = run("twist-fe", "--coeffs", str(coeffs), "--modulus", "10")
    assert code == 1
    assert "error" in records[0]


def test_yaml_and_output_file(tmp_path, capsys):
    out = tmp_path / "out" / "result.json"
    code = main(["--settings-dir", str(tmp_path), "--emit", "yaml", "--output", str(out), "ramanujan", "6", "3"])
    assert code == 0
    doc = yaml.safe_load(capsys.readouterr().out)
    assert doc["records"][0]["value"] == -2
    saved = json.loads(out.read_text())
    assert saved["config"]["command"] == "ramanujan"
    assert saved["summary"]["exit_code"] == 0
