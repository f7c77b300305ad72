"""Discrete-time closed-loop simulation: scenario files, the tick loop, CSV logs.

Each tick evaluates the task reference, shapes the augmented box for the
current time (so temporal windows gate constraint rows on and off), solves for
the joint velocity, and integrates with explicit Euler at the control rate.
Runs are deterministic: identical scenarios produce byte-identical CSV.

Scenario files are flat, line-oriented key/value text; see the README for the
grammar. Two scenarios ship with the package: ``planar6r`` (a 6R arm tracking
a line under joint limits and five y-bounded control points) and ``lwr7r`` (a
spatial 7-DOF arm tracking a circle with a temporally windowed Cartesian
bound at the end effector).
"""

from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .constraints import CartesianConstraint, JointLimits, build_augmented
from .kinematics import AxisSelector, FramePoint, RobotModel, chain_frames, forward_position, jacobian
from .solver import SolverDivergenceError, TaskRef, sns_solve
from .trajectory import (
    CirclePath,
    FeedbackLaw,
    LinePath,
    QuinticTiming,
    TrapezoidTiming,
    path_eval,
    task_axes,
    task_reference,
    timing_eval,
)


class ScenarioError(ValueError):
    """Scenario file failed to parse or validate."""


@dataclass
class Scenario:
    robot: RobotModel
    initial_q: np.ndarray
    joint_limits: JointLimits
    cartesian_constraints: tuple
    path: object
    timing: object
    feedback: FeedbackLaw
    sample_time: float
    duration: float
    name: str = "scenario"
    rel_tol: float = 1e-10
    box_eps: float = 1e-8
    iter_cap_factor: float = 2.0

    def __post_init__(self):
        self.initial_q = np.atleast_1d(np.asarray(self.initial_q, dtype=float))
        self.cartesian_constraints = tuple(self.cartesian_constraints)
        n = self.robot.joint_count
        if self.initial_q.shape != (n,):
            raise ScenarioError(f"q0 must have {n} entries")
        if self.joint_limits.joint_count != n:
            raise ScenarioError("joint limit vectors must match the joint count")
        if np.any(self.initial_q < self.joint_limits.q_min) or np.any(
            self.initial_q > self.joint_limits.q_max
        ):
            raise ScenarioError("q0 lies outside the joint position limits")
        for c in self.cartesian_constraints:
            if not 1 <= c.point.frame_index <= n:
                raise ScenarioError(
                    f"cartesian frame {c.point.frame_index} outside chain of {n} joints"
                )
        if self.robot.kind == "planar" and self.path.dim != 2:
            raise ScenarioError("a planar robot needs a 2-coordinate path")
        if self.robot.kind == "dh" and self.path.dim != 3:
            raise ScenarioError("a spatial robot needs a 3-coordinate path")
        if len(self.feedback.gains) != self.path.dim:
            raise ScenarioError("feedback gains must match the path dimension")
        if self.sample_time <= 0.0:
            raise ScenarioError("sample_time must be positive")
        if self.duration < 0.0:
            raise ScenarioError("duration must not be negative")
        if self.rel_tol <= 0.0:
            raise ScenarioError("rel_tol must be positive")
        if self.box_eps <= 0.0:
            raise ScenarioError("box_eps must be positive")
        if self.iter_cap_factor < 1.0:
            raise ScenarioError("iter_cap_factor must be at least 1")


@dataclass(frozen=True)
class TickLog:
    """State and solver outcome at one tick (pre-integration state)."""

    t: float
    q: np.ndarray
    q_dot: np.ndarray
    ee_pos: np.ndarray
    ee_err: np.ndarray
    s_star: float
    status: str
    sat_tags: tuple
    cp_pos: tuple
    cp_vel: tuple


def run(scenario):
    """Simulate the scenario tick by tick; one TickLog per tick."""
    model = scenario.robot
    lim = scenario.joint_limits
    cs = scenario.cartesian_constraints
    sel = task_axes(scenario.path)
    ee = model.ee_point()
    dt = scenario.sample_time
    q = scenario.initial_q.copy()
    ticks = int(round(scenario.duration / dt))
    log = []
    for k in range(ticks):
        t = k * dt
        frames = chain_frames(model, q)
        x_dot = task_reference(
            scenario.path, scenario.timing, scenario.feedback, model, q, t, frames=frames
        )
        system = build_augmented(model, q, lim, cs, t, dt, frames=frames)
        task = TaskRef(x_dot, jacobian(model, q, ee, sel, frames=frames))
        cap = max(int(round(scenario.iter_cap_factor * system.rows)), system.rows)
        try:
            sol = sns_solve(
                task, system, rel_tol=scenario.rel_tol, eps=scenario.box_eps, max_iter=cap
            )
        except SolverDivergenceError as exc:
            raise SolverDivergenceError(f"tick {k} (t = {t:.6g} s): {exc}", exc.best) from exc
        sigma, _ = timing_eval(scenario.timing, t)
        desired, _ = path_eval(scenario.path, sigma)
        actual = forward_position(model, q, ee, sel, frames=frames)
        log.append(
            TickLog(
                t=t,
                q=q.copy(),
                q_dot=sol.q_dot,
                ee_pos=actual,
                ee_err=desired - actual,
                s_star=sol.s_star,
                status=sol.status,
                sat_tags=sol.saturations.labels,
                cp_pos=tuple(
                    forward_position(model, q, c.point, c.sel, frames=frames) for c in cs
                ),
                cp_vel=tuple(
                    jacobian(model, q, c.point, c.sel, frames=frames) @ sol.q_dot for c in cs
                ),
            )
        )
        q = q + dt * sol.q_dot
    return log


def log_columns(scenario):
    """CSV column names for a scenario's log, in file order."""
    n = scenario.robot.joint_count
    axes = task_axes(scenario.path).axes
    cols = ["t"]
    cols += [f"q_{j + 1}" for j in range(n)]
    cols += [f"qd_{j + 1}" for j in range(n)]
    cols += [f"ee_{ax}" for ax in axes]
    cols += [f"err_{ax}" for ax in axes]
    cols += ["s_star", "status", "sat_tags"]
    for ci, c in enumerate(scenario.cartesian_constraints):
        cols += [f"cp_{ci + 1}_{ax}" for ax in c.sel.axes]
    for ci, c in enumerate(scenario.cartesian_constraints):
        cols += [f"cpd_{ci + 1}_{ax}" for ax in c.sel.axes]
    return cols


def _fmt(value):
    return format(float(value), ".9g")


def write_log(log, destination, scenario):
    """Write tick records as CSV with 9-significant-digit numbers.

    ``destination`` is a filesystem path or a writable text file object.
    An empty log yields a header-only file.
    """
    if hasattr(destination, "write"):
        _write_rows(log, destination, scenario)
        return
    with open(destination, "w", encoding="utf-8", newline="") as handle:
        _write_rows(log, handle, scenario)


def _write_rows(log, handle, scenario):
    handle.write(",".join(log_columns(scenario)) + "\n")
    for rec in log:
        fields = [_fmt(rec.t)]
        fields += [_fmt(v) for v in rec.q]
        fields += [_fmt(v) for v in rec.q_dot]
        fields += [_fmt(v) for v in rec.ee_pos]
        fields += [_fmt(v) for v in rec.ee_err]
        fields += [_fmt(rec.s_star), rec.status, ";".join(rec.sat_tags)]
        for block in (rec.cp_pos, rec.cp_vel):
            for vec in block:
                fields += [_fmt(v) for v in vec]
        handle.write(",".join(fields) + "\n")


def read_log(source):
    """Parse a CSV log back into a list of per-tick dicts (floats where possible)."""
    if hasattr(source, "read"):
        lines = source.read().splitlines()
    else:
        with open(source, "r", encoding="utf-8") as handle:
            lines = handle.read().splitlines()
    if not lines:
        raise ValueError("empty log file")
    header = lines[0].split(",")
    rows = []
    for line in lines[1:]:
        parts = line.split(",")
        if len(parts) != len(header):
            raise ValueError("row width does not match header")
        row = {}
        for name, text in zip(header, parts):
            if name in ("status", "sat_tags"):
                row[name] = text
            else:
                row[name] = float(text)
        rows.append(row)
    return header, rows


# --- scenario file parsing -------------------------------------------------

_JOINT_FIELDS = ("q_min", "q_max", "v_min", "v_max", "a_max")
_SCALARS = {
    "sample_time": "sample_time",
    "duration": "duration",
    "rel_tol": "rel_tol",
    "box_eps": "box_eps",
    "iter_cap_factor": "iter_cap_factor",
}


def _err(line_no, message):
    return ScenarioError(f"line {line_no}: {message}")


def _floats(tokens, line_no, what):
    try:
        return [float(tok) for tok in tokens]
    except ValueError:
        raise _err(line_no, f"invalid number in {what}") from None


def _comma_vector(text, line_no, what, dim=None):
    values = _floats(text.split(","), line_no, what)
    if dim is not None:
        if len(values) == 1:
            values = values * dim
        if len(values) != dim:
            raise _err(line_no, f"{what} needs 1 or {dim} comma-separated values")
    return values


def _parse_cartesian(line_no, tokens):
    kv = {}
    for tok in tokens:
        if "=" not in tok:
            raise _err(line_no, f"cartesian expects key=value tokens, got {tok!r}")
        key, _, value = tok.partition("=")
        if key in kv:
            raise _err(line_no, f"duplicate cartesian key {key!r}")
        kv[key] = value
    for required in ("frame", "axes", "v_min", "v_max"):
        if required not in kv:
            raise _err(line_no, f"cartesian needs {required}=")
    try:
        frame = int(kv.pop("frame"))
    except ValueError:
        raise _err(line_no, "cartesian frame must be an integer") from None
    try:
        sel = AxisSelector.from_string(kv.pop("axes"))
    except ValueError as exc:
        raise _err(line_no, str(exc)) from None
    dim = sel.dim
    offset = _comma_vector(kv.pop("offset", "0,0,0"), line_no, "offset")
    if len(offset) != 3:
        raise _err(line_no, "offset needs 3 comma-separated values")
    fields = {
        "p_min": _comma_vector(kv.pop("p_min", "-inf"), line_no, "p_min", dim),
        "p_max": _comma_vector(kv.pop("p_max", "inf"), line_no, "p_max", dim),
        "v_min": _comma_vector(kv.pop("v_min"), line_no, "v_min", dim),
        "v_max": _comma_vector(kv.pop("v_max"), line_no, "v_max", dim),
        "a_max": _comma_vector(kv.pop("a_max", "1e6"), line_no, "a_max", dim),
    }
    window = None
    if "window" in kv:
        pair = _comma_vector(kv.pop("window"), line_no, "window")
        if len(pair) != 2:
            raise _err(line_no, "window needs exactly start,end")
        window = (pair[0], pair[1])
    task_point = kv.pop("task_point", "false").lower()
    if task_point not in ("true", "false"):
        raise _err(line_no, "task_point must be true or false")
    if kv:
        raise _err(line_no, f"unknown cartesian key {sorted(kv)[0]!r}")
    try:
        return CartesianConstraint(
            point=FramePoint(frame, tuple(offset)),
            sel=sel,
            window=window,
            coincides_with_task=(task_point == "true"),
            **fields,
        )
    except ValueError as exc:
        raise _err(line_no, str(exc)) from None


def _parse_path(line_no, tokens):
    if not tokens:
        raise _err(line_no, "path needs a kind (line or circle)")
    kind, args = tokens[0], tokens[1:]
    if kind == "line":
        if len(args) != 2:
            raise _err(line_no, "path line needs start and end points")
        start = _comma_vector(args[0], line_no, "line start")
        end = _comma_vector(args[1], line_no, "line end")
        try:
            return LinePath(tuple(start), tuple(end))
        except ValueError as exc:
            raise _err(line_no, str(exc)) from None
    if kind == "circle":
        if len(args) not in (3, 4):
            raise _err(line_no, "path circle needs center radius plane [laps]")
        center = _comma_vector(args[0], line_no, "circle center")
        radius = _floats(args[1:2], line_no, "circle radius")[0]
        laps = _floats(args[3:4], line_no, "circle laps")[0] if len(args) == 4 else 1.0
        try:
            return CirclePath(tuple(center), radius, plane=args[2], laps=laps)
        except ValueError as exc:
            raise _err(line_no, str(exc)) from None
    raise _err(line_no, f"unknown path kind {kind!r}")


def _parse_timing(line_no, tokens, path):
    if not tokens:
        raise _err(line_no, "timing needs a kind (quintic or trapezoid)")
    kind, args = tokens[0], _floats(tokens[1:], line_no, "timing")
    try:
        if kind == "quintic":
            if len(args) != 1:
                raise _err(line_no, "timing quintic needs a duration")
            return QuinticTiming(args[0], path.length)
        if kind == "trapezoid":
            if len(args) != 2:
                raise _err(line_no, "timing trapezoid needs cruise and accel")
            return TrapezoidTiming(args[0], args[1], path.length)
    except ValueError as exc:
        raise _err(line_no, str(exc)) from None
    raise _err(line_no, f"unknown timing kind {kind!r}")


def load_scenario(text):
    """Parse and validate a scenario document; errors carry line numbers."""
    singles = {}
    constraints = []
    dh_rows = []
    for line_no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        key, args = tokens[0], tokens[1:]
        if key == "cartesian":
            constraints.append((line_no, args))
        elif key == "dh_row":
            values = _floats(args, line_no, "dh_row")
            if len(values) != 4:
                raise _err(line_no, "dh_row needs a alpha d theta_offset")
            dh_rows.append(values)
        else:
            if key in singles:
                raise _err(line_no, f"duplicate key {key!r}")
            singles[key] = (line_no, args)

    def take(key):
        return singles.pop(key, None)

    def angles(base):
        plain, deg = take(base), take(base + "_deg")
        if plain is not None and deg is not None:
            raise _err(deg[0], f"give {base} or {base}_deg, not both")
        if plain is not None:
            return plain[0], _floats(plain[1], plain[0], base)
        if deg is not None:
            return deg[0], list(np.deg2rad(_floats(deg[1], deg[0], base + "_deg")))
        return None

    name = "scenario"
    if (entry := take("scenario")) is not None:
        if len(entry[1]) != 1:
            raise _err(entry[0], "scenario needs exactly one name")
        name = entry[1][0]

    robot_entry = take("robot")
    if robot_entry is None:
        raise ScenarioError("missing required key 'robot'")
    line_no, args = robot_entry
    if not args:
        raise _err(line_no, "robot needs a kind (planar or dh)")
    try:
        if args[0] == "planar":
            model = RobotModel.planar(_floats(args[1:], line_no, "link lengths"))
            if dh_rows:
                raise _err(line_no, "dh_row lines are only valid for robot dh")
        elif args[0] == "dh":
            if args[1:]:
                raise _err(line_no, "robot dh takes no inline arguments; use dh_row lines")
            model = RobotModel.dh(dh_rows)
        else:
            raise _err(line_no, f"unknown robot kind {args[0]!r}")
    except ScenarioError:
        raise
    except ValueError as exc:
        raise _err(line_no, str(exc)) from None
    n = model.joint_count

    q0_entry = angles("q0")
    if q0_entry is None:
        raise ScenarioError("missing required key 'q0'")
    if len(q0_entry[1]) != n:
        raise _err(q0_entry[0], f"q0 needs {n} values")
    q0 = q0_entry[1]

    joint_vectors = {}
    joint_line = q0_entry[0]
    for bound in _JOINT_FIELDS:
        entry = angles("joint_" + bound)
        if entry is None:
            if bound == "a_max":
                joint_vectors[bound] = [1e6] * n
                continue
            raise ScenarioError(f"missing required key 'joint_{bound}'")
        line_no, values = entry
        joint_line = line_no
        if len(values) == 1:
            values = values * n
        if len(values) != n:
            raise _err(line_no, f"joint_{bound} needs 1 or {n} values")
        joint_vectors[bound] = values
    try:
        limits = JointLimits(**joint_vectors)
    except ValueError as exc:
        raise _err(joint_line, str(exc)) from None

    path_entry = take("path")
    if path_entry is None:
        raise ScenarioError("missing required key 'path'")
    path = _parse_path(*path_entry)

    timing_entry = take("timing")
    if timing_entry is None:
        raise ScenarioError("missing required key 'timing'")
    timing = _parse_timing(timing_entry[0], timing_entry[1], path)

    fb_entry = take("feedback")
    if fb_entry is None:
        raise ScenarioError("missing required key 'feedback'")
    try:
        feedback = FeedbackLaw(tuple(_floats(fb_entry[1], fb_entry[0], "feedback")))
    except ValueError as exc:
        raise _err(fb_entry[0], str(exc)) from None

    scalars = {}
    for key, field_name in _SCALARS.items():
        if (entry := take(key)) is not None:
            line_no, args = entry
            if len(args) != 1:
                raise _err(line_no, f"{key} needs exactly one value")
            scalars[field_name] = _floats(args, line_no, key)[0]
    for required in ("sample_time", "duration"):
        if required not in scalars:
            raise ScenarioError(f"missing required key '{required}'")

    if singles:
        line_no = min(entry[0] for entry in singles.values())
        raise _err(line_no, f"unknown key {sorted(singles)[0]!r}")

    return Scenario(
        robot=model,
        initial_q=q0,
        joint_limits=limits,
        cartesian_constraints=tuple(_parse_cartesian(ln, a) for ln, a in constraints),
        path=path,
        timing=timing,
        feedback=feedback,
        name=name,
        **scalars,
    )


def load_scenario_file(path):
    with open(path, "r", encoding="utf-8") as handle:
        return load_scenario(handle.read())


def bundled_scenario_text(name):
    """Raw text of a scenario shipped with the package ('planar6r', 'lwr7r')."""
    return resources.files("snsik.scenarios").joinpath(name + ".scn").read_text("utf-8")


def bundled_scenario(name):
    return load_scenario(bundled_scenario_text(name))
