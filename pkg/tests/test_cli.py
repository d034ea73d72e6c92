import json
import math
import pathlib

import pytest

from arithcodes.cli import main

CONFIGS = pathlib.Path(__file__).resolve().parent.parent / "configs"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr().out


def test_volumes_group(capsys):
    code, out = run(capsys, "volumes", "group", "--group", "C", "--d", "2", "--t", "1")
    d = json.loads(out)
    assert code == 0
    assert float(d["ball_closed_form"]["value"]) == pytest.approx(16 * math.pi**3 * (math.sinh(4) - 4), rel=1e-12)
    assert float(d["ball_quadrature"]["value"]) == pytest.approx(float(d["ball_closed_form"]["value"]), rel=1e-9)


def test_volumes_prasad(capsys):
    code, out = run(capsys, "volumes", "prasad", "--config", CONFIGS / "b6_mult.json", "--cutoff", 1000)
    d = json.loads(out)
    assert code == 0 and d["ramified_norms"] == [2, 3]
    cov = d["covolume"]
    assert abs(cov["value"] - 2**1.5 * math.pi**2 / 6) <= cov["abs_err"]


def test_volumes_prasad_needs_config():
    with pytest.raises(SystemExit):
        main(["volumes", "prasad"])


def test_zeta_csv(capsys):
    code, out = run(capsys, "zeta", "--cutoff", 1000, "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 2
    row = dict(zip(lines[0].split(","), lines[1].split(",")))
    assert abs(float(row["value"]) - math.pi**2 / 6) <= float(row["error_bound"])


def test_code_build_and_analyze(capsys, tmp_path):
    code, out = run(capsys, "code", "build", "--config", CONFIGS / "b6_mult.json", "--out", tmp_path,
                    "--format", "csv")
    assert code == 0 and json.loads(out)["all_checks_passed"]
    for name in ("report.json", "code.json", "elements.jsonl", "distances.csv"):
        assert (tmp_path / name).exists()
    code, out = run(capsys, "code", "analyze", "--in", tmp_path / "code.json")
    rep = json.loads(out)
    assert code == 0 and rep["d_R"] <= rep["d_H"]
    code, out = run(capsys, "code", "analyze", "--in", tmp_path / "code.json", "--format", "csv")
    assert out == (tmp_path / "distances.csv").read_text()


def test_code_build_overrides(capsys, tmp_path):
    code, out = run(capsys, "code", "build", "--config", CONFIGS / "b6_mult.json", "--t", "0.3", "--primes", "13")
    rep = json.loads(out)
    assert code == 0 and rep["config"]["primes"] == [13] and rep["config"]["t"] == "0.3"


def test_additive_run(capsys):
    code, out = run(capsys, "additive", "run", "--config", CONFIGS / "hurwitz_add.json", "--translates", 50)
    assert code == 0 and json.loads(out)["all_checks_passed"]


def test_run_is_deterministic(capsys, tmp_path):
    run(capsys, "run", "--config", CONFIGS / "hurwitz_add.json", "--out", tmp_path / "a")
    run(capsys, "run", "--config", CONFIGS / "hurwitz_add.json", "--out", tmp_path / "b")
    assert (tmp_path / "a" / "report.json").read_bytes() == (tmp_path / "b" / "report.json").read_bytes()


def test_explore(capsys):
    code, out = run(capsys, "explore", "mult", "--d", "2..4", "--log-only")
    d = json.loads(out)
    assert code == 0 and d["all_feasible"] and [r["d"] for r in d["reports"]] == [2, 3, 4]
    code, out = run(capsys, "explore", "add", "--d", "3", "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 2 and "log_p" in lines[0].split(",")


def test_worked_example(capsys, tmp_path):
    code, out = run(capsys, "worked-example", "--out", tmp_path)
    d = json.loads(out)
    assert code == 0 and d["checks_passed"] and d["threshold_ceil"] == 163
    assert json.loads((tmp_path / "worked-example.json").read_text()) == d
    code, _ = run(capsys, "worked-example", "--t", "1")
    assert code == 1


def test_version_and_missing_command(capsys):
    with pytest.raises(SystemExit) as e:
        main(["--version"])
    assert e.value.code == 0
    with pytest.raises(SystemExit) as e:
        main([])
    assert e.value.code == 2
