"""Extracts the annotation data figures need from a scenario file.

This is a deliberately tolerant reader of the same flat key/value grammar the
simulator consumes: it collects joint limits, per-control-point bounds and
activation windows, and ignores every key it does not need, so scenario files
keep working here even when the simulator grows new fields.
"""

import math
from dataclasses import dataclass

import numpy as np


class ScenarioMetaError(ValueError):
    """Scenario text lacks or mangles a field the figures need."""


@dataclass(frozen=True)
class CpMeta:
    """Bounds for one control point: arrays are per selected axis."""

    axes: tuple
    p_min: np.ndarray
    p_max: np.ndarray
    v_min: np.ndarray
    v_max: np.ndarray
    window: tuple = None


@dataclass(frozen=True)
class ScenarioMeta:
    name: str
    joint_count: int
    q_min: np.ndarray
    q_max: np.ndarray
    v_min: np.ndarray
    v_max: np.ndarray
    cps: tuple
    sample_time: float = None
    duration: float = None


def _floats(text):
    return [float(tok) for tok in text.split(",")]


def _broadcast(values, width, what):
    if len(values) == 1:
        values = values * width
    if len(values) != width:
        raise ScenarioMetaError(f"{what} needs 1 or {width} values")
    return np.array(values)


def _joint_vector(entries, base, n):
    # plain (radians) and _deg spellings, scalar broadcast like the simulator
    if base in entries:
        return _broadcast([float(v) for v in entries[base]], n, base)
    if base + "_deg" in entries:
        deg = [float(v) for v in entries[base + "_deg"]]
        return np.deg2rad(_broadcast(deg, n, base))
    raise ScenarioMetaError(f"scenario lacks {base} (or {base}_deg)")


def _cp_meta(tokens):
    kv = dict(tok.partition("=")[::2] for tok in tokens if "=" in tok)
    if "axes" not in kv:
        raise ScenarioMetaError("cartesian line lacks axes=")
    axes = tuple(kv["axes"])
    d = len(axes)

    def field(key, default):
        if key not in kv:
            return np.full(d, default)
        return _broadcast(_floats(kv[key]), d, key)

    window = None
    if "window" in kv:
        pair = _floats(kv["window"])
        if len(pair) != 2:
            raise ScenarioMetaError("window needs start,end")
        window = (pair[0], pair[1])
    return CpMeta(
        axes=axes,
        p_min=field("p_min", -math.inf),
        p_max=field("p_max", math.inf),
        v_min=field("v_min", -math.inf),
        v_max=field("v_max", math.inf),
        window=window,
    )


def parse_scenario(text):
    entries = {}
    cartesian = []
    dh_rows = 0
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "cartesian":
            cartesian.append(tokens[1:])
        elif tokens[0] == "dh_row":
            dh_rows += 1
        else:
            entries[tokens[0]] = tokens[1:]

    if "robot" not in entries or not entries["robot"]:
        raise ScenarioMetaError("scenario lacks a robot line")
    robot = entries["robot"]
    if robot[0] == "planar":
        n = len(robot) - 1
    elif robot[0] == "dh":
        n = dh_rows
    else:
        raise ScenarioMetaError(f"unknown robot kind {robot[0]!r}")
    if n == 0:
        raise ScenarioMetaError("robot has no joints")

    def scalar(key):
        if key in entries and len(entries[key]) == 1:
            return float(entries[key][0])
        return None

    return ScenarioMeta(
        name=entries.get("scenario", ["scenario"])[0],
        joint_count=n,
        q_min=_joint_vector(entries, "joint_q_min", n),
        q_max=_joint_vector(entries, "joint_q_max", n),
        v_min=_joint_vector(entries, "joint_v_min", n),
        v_max=_joint_vector(entries, "joint_v_max", n),
        cps=tuple(_cp_meta(tokens) for tokens in cartesian),
        sample_time=scalar("sample_time"),
        duration=scalar("duration"),
    )


def read_scenario_file(path):
    with open(path, "r", encoding="utf-8") as handle:
        return parse_scenario(handle.read())
