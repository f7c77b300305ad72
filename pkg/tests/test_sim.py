import dataclasses
import io

import numpy as np
import pytest

from snsik.sim import (
    Scenario,
    ScenarioError,
    bundled_scenario,
    bundled_scenario_text,
    load_scenario,
    load_scenario_file,
    log_columns,
    read_log,
    run,
    write_log,
)
from snsik.solver import SolverDivergenceError
from snsik.trajectory import CirclePath, LinePath, QuinticTiming, TrapezoidTiming

TINY = """\
scenario tiny
robot planar 1 1
q0_deg 30 -60
joint_q_min_deg -180
joint_q_max_deg 180
joint_v_min -1
joint_v_max 1
path line 1.7320508075688772,0 1.0,0.6
timing quintic 4
feedback 2 2
sample_time 0.01
duration 0.2
"""


@pytest.fixture
def tiny():
    return load_scenario(TINY)


def test_bundled_planar6r_parses(planar6r_scenario):
    sc = planar6r_scenario
    assert sc.name == "planar6r"
    assert sc.robot.joint_count == 6
    assert sc.robot.kind == "planar"
    assert len(sc.cartesian_constraints) == 5
    for i, c in enumerate(sc.cartesian_constraints):
        assert c.point.frame_index == i + 1
        assert c.sel.axes == ("y",)
        assert c.p_min[0] == -1.1 and c.p_max[0] == 1.0
        assert c.v_min[0] == -0.5 and c.v_max[0] == 0.5
    assert isinstance(sc.path, LinePath)
    assert sc.path.start == (5.464101615137754, 0.0)
    assert isinstance(sc.timing, QuinticTiming)
    assert sc.timing.duration == 10.0
    assert sc.timing.total_length == sc.path.length
    assert sc.feedback.gains == (2.0, 2.0)
    assert sc.sample_time == 0.001 and sc.duration == 10.0
    assert np.allclose(sc.joint_limits.q_max, np.pi / 2)
    assert np.allclose(sc.joint_limits.v_max, 0.5)


def test_bundled_lwr7r_parses(lwr7r_scenario):
    sc = lwr7r_scenario
    assert sc.name == "lwr7r"
    assert sc.robot.kind == "dh"
    assert sc.robot.joint_count == 7
    ee_vel, y_cap = sc.cartesian_constraints
    assert ee_vel.sel.axes == ("x", "y")
    assert ee_vel.coincides_with_task and ee_vel.window is None
    assert y_cap.sel.axes == ("y",)
    assert y_cap.window == (2.5, 4.5)
    assert y_cap.p_max[0] == 0.6
    assert isinstance(sc.path, CirclePath)
    assert sc.path.radius == 0.25 and sc.path.laps == 3.0
    assert isinstance(sc.timing, TrapezoidTiming)
    assert sc.timing.cruise == 0.65


def test_run_logs_one_record_per_tick(tiny):
    log = run(tiny)
    assert len(log) == 20
    assert log[0].t == 0.0
    assert np.isclose(log[1].t, 0.01)
    assert np.allclose(log[0].q, np.deg2rad([30.0, -60.0]))
    assert np.allclose(log[0].ee_pos, (np.sqrt(3.0), 0.0), atol=1e-12)
    assert log[0].cp_pos == () and log[0].cp_vel == ()
    for rec in log:
        assert rec.status in ("exact", "scaled", "task_saturated", "blocked")
        assert 0.0 <= rec.s_star <= 1.0


def test_column_layout_matches_log_width(tiny, planar6r_scenario, lwr7r_scenario):
    for sc in (tiny, planar6r_scenario, lwr7r_scenario):
        n = sc.robot.joint_count
        dim = sc.path.dim
        per_cp = sum(c.sel.dim for c in sc.cartesian_constraints)
        assert len(log_columns(sc)) == 1 + 2 * n + 2 * dim + 3 + 2 * per_cp
    assert len(log_columns(planar6r_scenario)) == 30


def test_zero_duration_gives_header_only_csv(tiny):
    sc = dataclasses.replace(tiny, duration=0.0)
    log = run(sc)
    assert log == []
    buf = io.StringIO()
    write_log(log, buf, sc)
    assert buf.getvalue() == ",".join(log_columns(sc)) + "\n"


def test_round_trip_preserves_values_to_format_precision(tiny):
    log = run(tiny)
    buf = io.StringIO()
    write_log(log, buf, tiny)
    header, rows = read_log(io.StringIO(buf.getvalue()))
    assert header == log_columns(tiny)
    assert len(rows) == len(log)
    for rec, row in zip(log, rows):
        assert np.isclose(row["t"], rec.t, rtol=1e-8, atol=1e-12)
        for j in range(2):
            assert np.isclose(row[f"q_{j + 1}"], rec.q[j], rtol=1e-8, atol=1e-12)
            assert np.isclose(row[f"qd_{j + 1}"], rec.q_dot[j], rtol=1e-8, atol=1e-12)
        assert np.isclose(row["s_star"], rec.s_star, rtol=1e-8, atol=1e-12)
        assert row["status"] == rec.status
        assert row["sat_tags"] == ";".join(rec.sat_tags)


def test_write_log_accepts_paths(tiny, tmp_path):
    log = run(tiny)
    out = tmp_path / "tiny.csv"
    write_log(log, out, tiny)
    header, rows = read_log(out)
    assert header == log_columns(tiny)
    assert len(rows) == 20


def test_identical_runs_write_identical_bytes(tiny):
    bufs = []
    for _ in range(2):
        buf = io.StringIO()
        write_log(run(tiny), buf, tiny)
        bufs.append(buf.getvalue())
    assert bufs[0] == bufs[1]


def test_read_log_rejects_garbage():
    with pytest.raises(ValueError):
        read_log(io.StringIO(""))
    with pytest.raises(ValueError):
        read_log(io.StringIO("t,q_1\n0.0\n"))


def test_scenario_rejects_q0_outside_limits():
    with pytest.raises(ScenarioError, match="q0"):
        load_scenario(TINY.replace("q0_deg 30 -60", "q0_deg 200 0"))


def test_scenario_rejects_negative_duration(tiny):
    with pytest.raises(ScenarioError, match="duration"):
        dataclasses.replace(tiny, duration=-1.0)


def test_scenario_rejects_bad_feedback_dimension():
    with pytest.raises(ScenarioError, match="feedback"):
        load_scenario(TINY.replace("feedback 2 2", "feedback 2 2 2"))


def test_parse_errors_name_the_line():
    bad = TINY.replace("joint_q_min_deg -180", "joint_q_min_deg oops")
    with pytest.raises(ScenarioError, match="line 4"):
        load_scenario(bad)
    with pytest.raises(ScenarioError, match="duplicate key"):
        load_scenario(TINY + "duration 1\n")
    with pytest.raises(ScenarioError, match="unknown key"):
        load_scenario(TINY + "warp_speed 9\n")
    with pytest.raises(ScenarioError, match="robot"):
        load_scenario("q0 0\n")
    with pytest.raises(ScenarioError, match="not both"):
        load_scenario(TINY + "q0 0.1 0.2\n")
    with pytest.raises(ScenarioError, match="v_min"):
        load_scenario(TINY + "cartesian frame=1 axes=y v_max=1\n")
    with pytest.raises(ScenarioError, match="path"):
        load_scenario(TINY.replace("path line", "path spiral"))
    with pytest.raises(ScenarioError, match="dh_row"):
        load_scenario(TINY + "dh_row 1 2 3\n")


def test_comments_and_blank_lines_are_ignored():
    doc = "# leading comment\n\n" + TINY.replace(
        "feedback 2 2", "feedback 2 2  # proportional gains"
    )
    assert load_scenario(doc).feedback.gains == (2.0, 2.0)


def test_load_scenario_file(tmp_path):
    path = tmp_path / "tiny.scn"
    path.write_text(TINY, encoding="utf-8")
    assert load_scenario_file(path).name == "tiny"


def test_bundled_text_matches_bundled_scenario():
    text = bundled_scenario_text("planar6r")
    assert load_scenario(text).name == bundled_scenario("planar6r").name


def test_divergence_reports_the_failing_tick(tiny, monkeypatch):
    def boom(*args, **kwargs):
        raise SolverDivergenceError("saturation loop exceeded the cap", None)

    monkeypatch.setattr("snsik.sim.sns_solve", boom)
    with pytest.raises(SolverDivergenceError, match=r"tick 0 \(t = 0 s\)"):
        run(tiny)


def test_windowed_rows_never_saturate_outside_their_window(lwr7r_run):
    log, _ = lwr7r_run
    inside = []
    for rec in log:
        hits = [tag for tag in rec.sat_tags if tag.startswith("cp2")]
        if hits:
            assert 2.5 <= rec.t <= 4.5
            inside.extend(hits)
    assert inside, "the windowed cap should bind during its window"
