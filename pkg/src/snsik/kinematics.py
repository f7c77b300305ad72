"""Serial-chain models: forward kinematics and positional Jacobians.

Two chain flavors are supported, both all-revolute:

* ``planar`` - an nR arm in the xy plane described by link lengths; joint i
  rotates about world z, link i extends along the rotated local x axis.
* ``dh`` - a spatial chain in standard Denavit-Hartenberg convention, one row
  (a, alpha, d, theta_offset) per joint, with theta_i = q_i + theta_offset_i.

Positions can be queried for the end effector or for arbitrary control points
attached anywhere along the body (a frame index plus a constant local offset),
restricted to any subset of the world x/y/z axes. Orientation is out of scope:
every task and limit handled by this package is positional.
"""

from dataclasses import dataclass, field

import numpy as np

_AXIS_INDEX = {"x": 0, "y": 1, "z": 2}


@dataclass(frozen=True)
class AxisSelector:
    """Ordered subset of world axes, e.g. ('y',) or ('x', 'y', 'z')."""

    axes: tuple

    def __post_init__(self):
        axes = tuple(self.axes)
        object.__setattr__(self, "axes", axes)
        if not axes:
            raise ValueError("axis selection must not be empty")
        if len(set(axes)) != len(axes):
            raise ValueError("duplicate axis in selection")
        for ax in axes:
            if ax not in _AXIS_INDEX:
                raise ValueError(f"unknown axis {ax!r}")

    @property
    def indices(self):
        return [_AXIS_INDEX[ax] for ax in self.axes]

    @property
    def dim(self):
        return len(self.axes)

    @classmethod
    def from_string(cls, text):
        """Parse 'xy', 'y', 'xyz', ... into a selector."""
        return cls(tuple(text))


@dataclass(frozen=True)
class FramePoint:
    """Point rigidly attached at the distal end of link ``frame_index``.

    frame_index runs 1..n; frame n with zero offset is the end effector.
    The offset is expressed in that link frame, meters.
    """

    frame_index: int
    local_offset: tuple = (0.0, 0.0, 0.0)

    def __post_init__(self):
        off = tuple(float(v) for v in self.local_offset)
        if len(off) != 3:
            raise ValueError("local_offset must have 3 components")
        object.__setattr__(self, "local_offset", off)


@dataclass(frozen=True)
class RobotModel:
    """Immutable serial-chain description (planar link lengths or DH rows)."""

    kind: str
    link_lengths: tuple = ()
    dh_rows: tuple = ()

    def __post_init__(self):
        if self.kind == "planar":
            lengths = tuple(float(v) for v in self.link_lengths)
            if len(lengths) < 1:
                raise ValueError("planar model needs at least one link")
            if any(l <= 0 for l in lengths):
                raise ValueError("link lengths must be positive")
            object.__setattr__(self, "link_lengths", lengths)
        elif self.kind == "dh":
            rows = tuple(tuple(float(v) for v in row) for row in self.dh_rows)
            if len(rows) < 1:
                raise ValueError("dh model needs at least one row")
            if any(len(row) != 4 for row in rows):
                raise ValueError("each dh row is (a, alpha, d, theta_offset)")
            object.__setattr__(self, "dh_rows", rows)
        else:
            raise ValueError(f"unknown robot kind {self.kind!r}")

    @property
    def joint_count(self):
        if self.kind == "planar":
            return len(self.link_lengths)
        return len(self.dh_rows)

    @classmethod
    def planar(cls, link_lengths):
        return cls(kind="planar", link_lengths=tuple(link_lengths))

    @classmethod
    def dh(cls, rows):
        return cls(kind="dh", dh_rows=tuple(tuple(r) for r in rows))

    def ee_point(self):
        return FramePoint(self.joint_count)


def _joint_transform(model, q_i, i):
    if model.kind == "planar":
        c, s = np.cos(q_i), np.sin(q_i)
        length = model.link_lengths[i]
        return np.array(
            [
                [c, -s, 0.0, length * c],
                [s, c, 0.0, length * s],
                [0.0, 0.0, 1.0, 0.0],
                [0.0, 0.0, 0.0, 1.0],
            ]
        )
    a, alpha, d, theta0 = model.dh_rows[i]
    th = q_i + theta0
    ct, st = np.cos(th), np.sin(th)
    ca, sa = np.cos(alpha), np.sin(alpha)
    return np.array(
        [
            [ct, -st * ca, st * sa, a * ct],
            [st, ct * ca, -ct * sa, a * st],
            [0.0, sa, ca, d],
            [0.0, 0.0, 0.0, 1.0],
        ]
    )


def chain_frames(model, q):
    """World transforms of frames 0..n as an (n+1, 4, 4) array.

    Frame 0 is the base (identity); frame i is the distal end of link i.
    """
    q = np.asarray(q, dtype=float)
    n = model.joint_count
    if q.shape != (n,):
        raise ValueError(f"expected {n} joint values, got shape {q.shape}")
    frames = np.empty((n + 1, 4, 4))
    frames[0] = np.eye(4)
    for i in range(n):
        frames[i + 1] = frames[i] @ _joint_transform(model, q[i], i)
    return frames


def _point_world(frames, point):
    t = frames[point.frame_index]
    return t[:3, 3] + t[:3, :3] @ np.asarray(point.local_offset)


def _check_frame(model, point):
    if not 1 <= point.frame_index <= model.joint_count:
        raise ValueError(
            f"frame_index {point.frame_index} outside chain of {model.joint_count} joints"
        )


def forward_position(model, q, point=None, sel=None, frames=None):
    """World position of a body point, restricted to the selected axes.

    ``frames`` may carry a precomputed chain_frames(model, q) result so
    callers evaluating many points at one configuration pay for the chain
    walk only once.
    """
    if point is None:
        point = model.ee_point()
    _check_frame(model, point)
    if frames is None:
        frames = chain_frames(model, q)
    p = _point_world(frames, point)
    if sel is None:
        return p
    return p[sel.indices]


def jacobian(model, q, point=None, sel=None, frames=None):
    """Analytic positional Jacobian of a body point, (d x n).

    Column i is z_{i-1} x (p - o_{i-1}) for joints proximal to the attachment
    frame and exactly zero for distal joints, which cannot move the point.
    ``frames`` works as in forward_position.
    """
    if point is None:
        point = model.ee_point()
    _check_frame(model, point)
    if frames is None:
        frames = chain_frames(model, q)
    p = _point_world(frames, point)
    n = model.joint_count
    jac = np.zeros((3, n))
    for i in range(point.frame_index):
        z_axis = frames[i][:3, 2]
        origin = frames[i][:3, 3]
        jac[:, i] = np.cross(z_axis, p - origin)
    if sel is None:
        return jac
    return jac[sel.indices, :]
