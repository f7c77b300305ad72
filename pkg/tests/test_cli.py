import json
import re

import pytest

from snsik import __version__
from snsik.cli import main
from snsik.sim import read_log
from snsik.solver import SolverDivergenceError

from test_sim import TINY


@pytest.fixture
def scenario_file(tmp_path):
    path = tmp_path / "tiny.scn"
    path.write_text(TINY, encoding="utf-8")
    return path


def test_run_writes_csv_and_reports(scenario_file, tmp_path, capsys):
    out = tmp_path / "log.csv"
    assert main(["run", str(scenario_file), "--out", str(out)]) == 0
    header, rows = read_log(out)
    assert len(rows) == 20
    message = capsys.readouterr().out
    assert "tiny" in message and "20 ticks" in message


def test_run_default_output_name_uses_scenario_stem(scenario_file, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(["run", str(scenario_file)]) == 0
    assert (tmp_path / "tiny.csv").exists()


def test_duration_override_changes_tick_count(scenario_file, tmp_path):
    out = tmp_path / "short.csv"
    code = main(["run", str(scenario_file), "--out", str(out), "--duration-override", "0.05"])
    assert code == 0
    _, rows = read_log(out)
    assert len(rows) == 5


def test_duration_override_is_still_validated(scenario_file, tmp_path, capsys):
    out = tmp_path / "x.csv"
    code = main(["run", str(scenario_file), "--out", str(out), "--duration-override", "-1"])
    assert code == 1
    assert "duration" in capsys.readouterr().err


def test_check_accepts_valid_scenario(scenario_file, capsys):
    assert main(["check", str(scenario_file)]) == 0
    assert "valid" in capsys.readouterr().out


def test_check_rejects_broken_scenario(tmp_path, capsys):
    path = tmp_path / "broken.scn"
    path.write_text(TINY.replace("feedback 2 2", "feedback 2"), encoding="utf-8")
    assert main(["check", str(path)]) == 1
    assert "error:" in capsys.readouterr().err


def test_missing_scenario_file_is_an_io_error(tmp_path, capsys):
    assert main(["run", str(tmp_path / "nope.scn")]) == 3
    assert "i/o error" in capsys.readouterr().err


def test_unwritable_output_is_an_io_error(scenario_file, tmp_path, capsys):
    out = tmp_path / "no_such_dir" / "log.csv"
    assert main(["run", str(scenario_file), "--out", str(out)]) == 3
    assert "i/o error" in capsys.readouterr().err


def test_oracle_subcommand_cross_checks(tmp_path, capsys):
    instance = {
        "jacobian": [[1.0, 0.0]],
        "x_dot": [1.0],
        "b_min": [-0.4, -1.0],
        "b_max": [0.4, 1.0],
    }
    path = tmp_path / "instance.json"
    path.write_text(json.dumps(instance), encoding="utf-8")
    assert main(["oracle", str(path)]) == 0
    out = capsys.readouterr().out
    assert "feasible_exact=False" in out
    reported = float(re.search(r"best_scale=([0-9.]+)", out).group(1))
    assert abs(reported - 0.4) < 2e-6
    assert "agreement: yes" in out


def test_oracle_subcommand_rejects_bad_json(tmp_path, capsys):
    path = tmp_path / "instance.json"
    path.write_text("{not json", encoding="utf-8")
    assert main(["oracle", str(path)]) == 1
    assert "error:" in capsys.readouterr().err


def test_version_prints_the_package_version(capsys):
    assert main(["version"]) == 0
    assert capsys.readouterr().out.strip() == __version__


def test_unknown_flag_is_a_usage_error(scenario_file, capsys):
    assert main(["run", str(scenario_file), "--warp"]) == 1


def test_divergence_exits_with_code_2(scenario_file, capsys, monkeypatch):
    def boom(scenario):
        raise SolverDivergenceError("tick 3 (t = 0.03 s): loop exceeded the cap", None)

    monkeypatch.setattr("snsik.cli.run", boom)
    assert main(["run", str(scenario_file)]) == 2
    assert "solver divergence" in capsys.readouterr().err
