"""Shaping of hard position/velocity/acceleration limits into per-tick velocity boxes.

Joint limits and Cartesian control-point limits (optionally active only inside
a time window) are converted into bounds on velocities over one sampling
period, then stacked with their maps into a single augmented system

    b_min <= [I; J_cp,1; ...; J_cp,r] q_dot <= b_max

whose rows the saturation solver treats uniformly. Acceleration limits enter
only through the braking square-root terms, i.e. as soft constraints.
"""

from dataclasses import dataclass, field

import numpy as np

from .kinematics import AxisSelector, FramePoint, RobotModel, forward_position, jacobian


@dataclass
class JointLimits:
    """Hard per-joint position/velocity bounds and symmetric acceleration bound."""

    q_min: np.ndarray
    q_max: np.ndarray
    v_min: np.ndarray
    v_max: np.ndarray
    a_max: np.ndarray

    def __post_init__(self):
        for name in ("q_min", "q_max", "v_min", "v_max", "a_max"):
            setattr(self, name, np.atleast_1d(np.asarray(getattr(self, name), dtype=float)))
        n = self.q_min.shape[0]
        if any(getattr(self, name).shape != (n,) for name in ("q_max", "v_min", "v_max", "a_max")):
            raise ValueError("joint limit vectors must share one length")
        if not np.all(self.q_min < self.q_max):
            raise ValueError("q_min must be below q_max")
        if not (np.all(self.v_min < 0.0) and np.all(self.v_max > 0.0)):
            raise ValueError("velocity limits must straddle zero")
        if not np.all(self.a_max > 0.0):
            raise ValueError("a_max must be positive")

    @property
    def joint_count(self):
        return self.q_min.shape[0]


@dataclass
class CartesianConstraint:
    """Limits on one control point along a chosen subset of world axes.

    Position bounds may be +-inf for one-sided or velocity-only constraints.
    ``window``, when set, restricts the constraint to t_start <= t <= t_end;
    outside it the constraint contributes no rows. ``coincides_with_task``
    marks points whose axes overlap the primary task (e.g. a bound on the end
    effector itself): saturating such a row caps the task component directly
    instead of triggering task scaling.
    """

    point: FramePoint
    sel: AxisSelector
    v_min: np.ndarray
    v_max: np.ndarray
    a_max: np.ndarray
    p_min: np.ndarray = None
    p_max: np.ndarray = None
    window: tuple = None
    coincides_with_task: bool = False

    def __post_init__(self):
        d = self.sel.dim
        if self.p_min is None:
            self.p_min = np.full(d, -np.inf)
        if self.p_max is None:
            self.p_max = np.full(d, np.inf)
        for name in ("p_min", "p_max", "v_min", "v_max", "a_max"):
            value = np.atleast_1d(np.asarray(getattr(self, name), dtype=float))
            if value.shape == (1,) and d > 1:
                value = np.repeat(value, d)
            if value.shape != (d,):
                raise ValueError(f"{name} must have one entry per selected axis")
            setattr(self, name, value)
        both = np.isfinite(self.p_min) & np.isfinite(self.p_max)
        if not np.all(self.p_min[both] < self.p_max[both]):
            raise ValueError("p_min must be below p_max where both are finite")
        if not (np.all(self.v_min < 0.0) and np.all(self.v_max > 0.0)):
            raise ValueError("velocity limits must straddle zero")
        if not np.all(self.a_max > 0.0):
            raise ValueError("a_max must be positive")
        if self.window is not None:
            t0, t1 = self.window
            if not t0 < t1:
                raise ValueError("window start must precede window end")
            self.window = (float(t0), float(t1))

    def active_at(self, t):
        if self.window is None:
            return True
        return self.window[0] <= t <= self.window[1]


@dataclass(frozen=True)
class RowTag:
    """Identifies which joint or control-point axis owns an augmented-system row."""

    kind: str  # "joint" or "cp"
    index: int  # joint index or constraint declaration index, 0-based
    axis: str = None
    coincides_with_task: bool = False

    @property
    def label(self):
        if self.kind == "joint":
            return f"q{self.index + 1}"
        return f"cp{self.index + 1}.{self.axis}"


@dataclass
class AugmentedSystem:
    """Stacked velocity map and generalized box at one control tick."""

    a: np.ndarray
    b_min: np.ndarray
    b_max: np.ndarray
    row_tags: tuple

    def __post_init__(self):
        self.a = np.asarray(self.a, dtype=float)
        self.b_min = np.asarray(self.b_min, dtype=float)
        self.b_max = np.asarray(self.b_max, dtype=float)
        self.row_tags = tuple(self.row_tags)
        rows, n = self.a.shape
        if self.b_min.shape != (rows,) or self.b_max.shape != (rows,) or len(self.row_tags) != rows:
            raise ValueError("augmented rows, bounds, and tags must align")
        if rows < n or not np.array_equal(self.a[:n], np.eye(n)):
            raise ValueError("first n augmented rows must be the identity")
        if not np.all(self.b_min <= self.b_max):
            raise ValueError("b_min must not exceed b_max")

    @property
    def n(self):
        return self.a.shape[1]

    @property
    def rows(self):
        return self.a.shape[0]


def _braking(a_max, dist):
    # sqrt(2 a d) with d clamped at 0; kept nan-free for infinite a_max.
    d = np.maximum(dist, 0.0)
    with np.errstate(invalid="ignore"):
        term = np.sqrt(2.0 * a_max * d)
    return np.where(d == 0.0, 0.0, term)


def _shape_box(pos, p_min, p_max, v_min, v_max, a_max, sample_time):
    hi = np.minimum.reduce(
        [(p_max - pos) / sample_time, v_max, _braking(a_max, p_max - pos)]
    )
    lo = np.maximum.reduce(
        [(p_min - pos) / sample_time, v_min, -_braking(a_max, pos - p_min)]
    )
    # A position violated beyond what one tick can recover inverts the bounds.
    # Collapse those entries to the single admissible velocity nearest zero,
    # clipped to the velocity limits: it pushes back toward feasibility.
    inverted = lo > hi
    if np.any(inverted):
        nearest = np.where(np.abs(lo) <= np.abs(hi), lo, hi)
        point = np.clip(nearest, v_min, v_max)
        lo = np.where(inverted, point, lo)
        hi = np.where(inverted, point, hi)
    return lo, hi


def shape_joint_box(q, lim, sample_time):
    """Per-joint velocity bounds over one tick from position/velocity/braking terms."""
    q = np.asarray(q, dtype=float)
    if q.shape != (lim.joint_count,):
        raise ValueError("q length does not match joint limits")
    if sample_time <= 0:
        raise ValueError("sample_time must be positive")
    return _shape_box(q, lim.q_min, lim.q_max, lim.v_min, lim.v_max, lim.a_max, sample_time)


def shape_cartesian_box(p, constraint, sample_time):
    """Velocity bounds for one control point; infinite position bounds leave
    the pure velocity limit on that side."""
    p = np.asarray(p, dtype=float)
    if p.shape != (constraint.sel.dim,):
        raise ValueError("position length does not match selected axes")
    return _shape_box(
        p,
        constraint.p_min,
        constraint.p_max,
        constraint.v_min,
        constraint.v_max,
        constraint.a_max,
        sample_time,
    )


def build_augmented(model, q, lim, constraints, t, sample_time, frames=None):
    """Stack the identity and the active control-point Jacobians with their boxes.

    Row order is deterministic: joints in index order, then the selected axes
    of each constraint in declaration order. Constraints whose time window
    excludes ``t`` contribute no rows; inserting or deleting constraints
    online amounts to editing the list between ticks. ``frames`` may carry
    precomputed chain frames for the configuration q.
    """
    n = model.joint_count
    q = np.asarray(q, dtype=float)
    if q.shape != (n,):
        raise ValueError("q length does not match the robot model")
    if lim.joint_count != n:
        raise ValueError("joint limits do not match the robot model")
    lo, hi = shape_joint_box(q, lim, sample_time)
    blocks = [np.eye(n)]
    lows = [lo]
    highs = [hi]
    tags = [RowTag("joint", j) for j in range(n)]
    for ci, c in enumerate(constraints):
        if not c.active_at(t):
            continue
        p = forward_position(model, q, c.point, c.sel, frames=frames)
        c_lo, c_hi = shape_cartesian_box(p, c, sample_time)
        blocks.append(jacobian(model, q, c.point, c.sel, frames=frames))
        lows.append(c_lo)
        highs.append(c_hi)
        tags.extend(
            RowTag("cp", ci, axis, c.coincides_with_task) for axis in c.sel.axes
        )
    return AugmentedSystem(
        a=np.vstack(blocks),
        b_min=np.concatenate(lows),
        b_max=np.concatenate(highs),
        row_tags=tuple(tags),
    )
