"""The three figure types and the batch renderer.

Every figure takes the parsed log plus the scenario metadata so that limit
lines and window shading always come from the scenario file that produced the
log, never from constants baked in here.
"""

from dataclasses import dataclass
from pathlib import Path

import matplotlib
import numpy as np

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)

from .logdata import LogFormatError, read_log_file
from .scenariometa import read_scenario_file

FIGURE_ORDER = ("error", "joints", "cps")

_LIMIT_STYLE = dict(linestyle="--", linewidth=0.8, alpha=0.6)
_WINDOW_STYLE = dict(color="tab:orange", alpha=0.12, linewidth=0)
_SAVE_OPTS = dict(dpi=120, metadata={"Software": "snsik-plots"})


@dataclass(frozen=True)
class PlotJob:
    """One rendering request: which log, which scenario, where, which figures."""

    csv_path: str
    scenario_path: str
    output_dir: str = "."
    figures: tuple = FIGURE_ORDER

    def __post_init__(self):
        unknown = [f for f in self.figures if f not in FIGURE_ORDER]
        if unknown:
            raise ValueError(f"unknown figure name {unknown[0]!r}; pick from {FIGURE_ORDER}")


def _shade_windows(ax, meta):
    for cp in meta.cps:
        if cp.window is not None:
            ax.axvspan(cp.window[0], cp.window[1], **_WINDOW_STYLE)


def error_figure(log, meta):
    """Task tracking error per axis on top, applied scaling factor below."""
    fig, (ax_err, ax_s) = plt.subplots(2, 1, sharex=True, figsize=(8, 5))
    for i, axis in enumerate(log.axes):
        ax_err.plot(log.t, log.err[:, i], label=f"err {axis}")
    ax_err.plot(log.t, np.linalg.norm(log.err, axis=1), color="black",
                linewidth=0.9, label="|err|")
    ax_err.set_ylabel("tracking error [m]")
    ax_err.legend(loc="upper right", fontsize=8)
    _shade_windows(ax_err, meta)

    ax_s.plot(log.t, log.s_star, color="tab:red", label="s*")
    ax_s.axhline(1.0, color="gray", **_LIMIT_STYLE)
    ax_s.set_ylabel("task scale s*")
    ax_s.set_xlabel("t [s]")
    ax_s.set_ylim(min(0.0, log.s_star.min()) - 0.05, 1.05)
    ax_s.legend(loc="lower right", fontsize=8)
    _shade_windows(ax_s, meta)
    fig.suptitle(f"{meta.name}: tracking error and task scaling")
    fig.tight_layout()
    return fig


def joint_figure(log, meta):
    """Joint positions and velocities with their limit lines."""
    if log.joint_count != meta.joint_count:
        raise LogFormatError(
            f"log has {log.joint_count} joints but the scenario has {meta.joint_count}"
        )
    fig, (ax_q, ax_qd) = plt.subplots(2, 1, sharex=True, figsize=(8, 6))
    for j in range(log.joint_count):
        (line,) = ax_q.plot(log.t, log.q[:, j], label=f"q{j + 1}")
        ax_q.axhline(meta.q_min[j], color=line.get_color(), **_LIMIT_STYLE)
        ax_q.axhline(meta.q_max[j], color=line.get_color(), **_LIMIT_STYLE)
    ax_q.set_ylabel("q [rad]")
    ax_q.legend(loc="upper right", fontsize=8, ncols=2)

    for j in range(log.joint_count):
        (line,) = ax_qd.plot(log.t, log.qd[:, j], label=f"qd{j + 1}")
        ax_qd.axhline(meta.v_min[j], color=line.get_color(), **_LIMIT_STYLE)
        ax_qd.axhline(meta.v_max[j], color=line.get_color(), **_LIMIT_STYLE)
    ax_qd.set_ylabel("q_dot [rad/s]")
    ax_qd.set_xlabel("t [s]")
    fig.suptitle(f"{meta.name}: joint positions and velocities with limits")
    fig.tight_layout()
    return fig


def control_point_figure(log, meta):
    """Control-point coordinates and velocities with bounds and windows."""
    if len(log.cp_groups) != len(meta.cps):
        raise LogFormatError(
            f"log has {len(log.cp_groups)} control points but the scenario has {len(meta.cps)}"
        )
    fig, (ax_p, ax_v) = plt.subplots(2, 1, sharex=True, figsize=(8, 6))
    if not log.cp_groups:
        ax_p.text(0.5, 0.5, "no control points in this scenario",
                  ha="center", va="center", transform=ax_p.transAxes)
    for (ordinal, axes), cp in zip(log.cp_groups, meta.cps):
        for i, axis in enumerate(axes):
            key = f"cp{ordinal}_{axis}"
            (line,) = ax_p.plot(log.t, log.cp_pos[key], label=key)
            for bound in (cp.p_min[i], cp.p_max[i]):
                if np.isfinite(bound):
                    ax_p.axhline(bound, color=line.get_color(), **_LIMIT_STYLE)
            (vline,) = ax_v.plot(log.t, log.cp_vel[key], label=key)
            for bound in (cp.v_min[i], cp.v_max[i]):
                if np.isfinite(bound):
                    ax_v.axhline(bound, color=vline.get_color(), **_LIMIT_STYLE)
    ax_p.set_ylabel("position [m]")
    ax_p.legend(loc="upper right", fontsize=8, ncols=2)
    ax_v.set_ylabel("velocity [m/s]")
    ax_v.set_xlabel("t [s]")
    _shade_windows(ax_p, meta)
    _shade_windows(ax_v, meta)
    fig.suptitle(f"{meta.name}: control points with bounds")
    fig.tight_layout()
    return fig


_BUILDERS = {
    "error": error_figure,
    "joints": joint_figure,
    "cps": control_point_figure,
}


def render(job):
    """Render the selected figures; returns the written image paths.

    Inputs are validated before the first file is written, so a bad log or
    scenario produces no output at all.
    """
    log = read_log_file(job.csv_path)
    meta = read_scenario_file(job.scenario_path)
    if log.joint_count != meta.joint_count or len(log.cp_groups) != len(meta.cps):
        raise LogFormatError(
            "log and scenario disagree on the robot; was the CSV produced "
            "by a different scenario or format version?"
        )
    out_dir = Path(job.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = Path(job.csv_path).stem
    written = []
    for name in FIGURE_ORDER:
        if name not in job.figures:
            continue
        fig = _BUILDERS[name](log, meta)
        path = out_dir / f"{stem}_{name}.png"
        fig.savefig(path, **_SAVE_OPTS)
        plt.close(fig)
        written.append(str(path))
    return written
