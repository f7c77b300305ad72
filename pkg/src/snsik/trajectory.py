"""Task-space reference generation: geometric paths, timing laws, feedback.

Paths are parameterized by arc length sigma; timing laws produce sigma(t) and
its rate; the closed-loop reference is the feedforward tangent velocity plus a
proportional correction toward the desired point, so tracking recovers after
intervals where the solver had to scale the task down.
"""

import math
from dataclasses import dataclass

import numpy as np

from .kinematics import AxisSelector, forward_position


@dataclass(frozen=True)
class LinePath:
    """Straight segment from start to end, in 2 or 3 coordinates."""

    start: tuple
    end: tuple

    def __post_init__(self):
        object.__setattr__(self, "start", tuple(float(v) for v in self.start))
        object.__setattr__(self, "end", tuple(float(v) for v in self.end))
        if len(self.start) not in (2, 3) or len(self.end) != len(self.start):
            raise ValueError("start and end must both have 2 or 3 coordinates")
        if self.length == 0.0:
            raise ValueError("start and end must differ")

    @property
    def dim(self):
        return len(self.start)

    @property
    def length(self):
        return math.dist(self.start, self.end)


@dataclass(frozen=True)
class CirclePath:
    """Circle of given radius around a 3-coordinate center.

    ``plane`` names the axis normal to the circle plane ("z" gives an xy
    circle). Traversal starts at angle 0 and runs ``laps`` times around;
    sigma is arc length along that run.
    """

    center: tuple
    radius: float
    plane: str = "z"
    laps: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(v) for v in self.center))
        if len(self.center) != 3:
            raise ValueError("circle center must have 3 coordinates")
        if self.radius <= 0.0:
            raise ValueError("radius must be positive")
        if self.plane not in ("x", "y", "z"):
            raise ValueError("plane must be the name of the normal axis")
        if self.laps <= 0.0:
            raise ValueError("laps must be positive")

    @property
    def dim(self):
        return 3

    @property
    def length(self):
        return 2.0 * math.pi * self.radius * self.laps

    @property
    def _axes(self):
        # in-plane axis pair, right-handed about the normal
        return {"z": (0, 1), "x": (1, 2), "y": (2, 0)}[self.plane]


def path_eval(path, sigma):
    """Point on the path at arc length sigma and the unit tangent there."""
    if isinstance(path, LinePath):
        start = np.array(path.start)
        end = np.array(path.end)
        tangent = (end - start) / path.length
        s = min(max(float(sigma), 0.0), path.length)
        return start + s * tangent, tangent
    if isinstance(path, CirclePath):
        i, j = path._axes
        theta = float(sigma) / path.radius
        point = np.array(path.center)
        point[i] += path.radius * math.cos(theta)
        point[j] += path.radius * math.sin(theta)
        tangent = np.zeros(3)
        tangent[i] = -math.sin(theta)
        tangent[j] = math.cos(theta)
        return point, tangent
    raise TypeError(f"unsupported path type: {type(path).__name__}")


@dataclass(frozen=True)
class QuinticTiming:
    """Rest-to-rest quintic covering ``total_length`` in ``duration`` seconds."""

    duration: float
    total_length: float

    def __post_init__(self):
        if self.duration <= 0.0:
            raise ValueError("duration must be positive")
        if self.total_length <= 0.0:
            raise ValueError("total_length must be positive")


@dataclass(frozen=True)
class TrapezoidTiming:
    """Accelerate at ``accel`` to ``cruise`` speed, cruise, decelerate to rest.

    Falls back to a triangular profile when ``total_length`` is too short to
    reach cruise speed.
    """

    cruise: float
    accel: float
    total_length: float

    def __post_init__(self):
        if self.cruise <= 0.0 or self.accel <= 0.0:
            raise ValueError("cruise and accel must be positive")
        if self.total_length <= 0.0:
            raise ValueError("total_length must be positive")

    @property
    def _phases(self):
        # (t_acc, t_cruise, peak speed)
        if self.total_length >= self.cruise**2 / self.accel:
            t_acc = self.cruise / self.accel
            t_cruise = (self.total_length - self.cruise**2 / self.accel) / self.cruise
            return t_acc, t_cruise, self.cruise
        peak = math.sqrt(self.total_length * self.accel)
        return peak / self.accel, 0.0, peak

    @property
    def total_time(self):
        t_acc, t_cruise, _ = self._phases
        return 2.0 * t_acc + t_cruise


def timing_eval(law, t):
    """Arc length and its rate at time t; rests at the end state after completion."""
    t = float(t)
    if isinstance(law, QuinticTiming):
        tau = min(max(t / law.duration, 0.0), 1.0)
        sigma = law.total_length * (10.0 * tau**3 - 15.0 * tau**4 + 6.0 * tau**5)
        rate = law.total_length * (30.0 * tau**2 - 60.0 * tau**3 + 30.0 * tau**4) / law.duration
        return sigma, rate
    if isinstance(law, TrapezoidTiming):
        t_acc, t_cruise, peak = law._phases
        if t <= 0.0:
            return 0.0, 0.0
        if t < t_acc:
            return 0.5 * law.accel * t**2, law.accel * t
        d_acc = 0.5 * law.accel * t_acc**2
        if t < t_acc + t_cruise:
            return d_acc + peak * (t - t_acc), peak
        remaining = law.total_time - t
        if remaining <= 0.0:
            return law.total_length, 0.0
        return law.total_length - 0.5 * law.accel * remaining**2, law.accel * remaining
    raise TypeError(f"unsupported timing law: {type(law).__name__}")


@dataclass(frozen=True)
class FeedbackLaw:
    """Diagonal proportional gains on task position error."""

    gains: tuple

    def __post_init__(self):
        object.__setattr__(self, "gains", tuple(float(g) for g in self.gains))
        if len(self.gains) not in (2, 3) or any(g <= 0.0 for g in self.gains):
            raise ValueError("gains must be 2 or 3 positive values")


def task_axes(path):
    """Axis selector for the task coordinates a path lives in."""
    return AxisSelector(("x", "y")) if path.dim == 2 else AxisSelector(("x", "y", "z"))


def task_reference(path, law, feedback, model, q, t, frames=None):
    """Closed-loop task velocity: tangent feedforward plus proportional correction."""
    if len(feedback.gains) != path.dim:
        raise ValueError("feedback gains must match the path dimension")
    sigma, rate = timing_eval(law, t)
    desired, tangent = path_eval(path, sigma)
    actual = forward_position(model, q, model.ee_point(), task_axes(path), frames=frames)
    return rate * tangent + np.array(feedback.gains) * (desired - actual)
