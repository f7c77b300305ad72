"""Velocity-level task solver that saturates hard limits inside the null space.

Given a task J q_dot = x_dot and an augmented box system, the solver starts
from the minimum-norm solution and, one row per iteration, pins the most
critical violated row to its bound while reprojecting the task through the
null space of everything pinned so far. If the pinned rows exhaust the task's
degrees of freedom, it falls back to the saturation state with the best
recorded task scaling factor and applies the scaled task there, so the
commanded velocity never leaves the box; direction is preserved over
magnitude.
"""

from dataclasses import dataclass

import numpy as np

from .linalg import DEFAULT_REL_TOL, null_projector, numerical_rank, pinv


class SingularTaskError(ValueError):
    """Task Jacobian is rank-deficient below the task dimension."""


class SolverDivergenceError(RuntimeError):
    """Saturation loop failed to settle within the iteration cap.

    Carries the best fallback solution found so far in ``best``.
    """

    def __init__(self, message, best):
        super().__init__(message)
        self.best = best


@dataclass
class TaskRef:
    """Desired task-space velocity and the Jacobian mapping onto it."""

    x_dot: np.ndarray
    jacobian: np.ndarray

    def __post_init__(self):
        self.x_dot = np.atleast_1d(np.asarray(self.x_dot, dtype=float))
        self.jacobian = np.asarray(self.jacobian, dtype=float)
        if self.jacobian.ndim != 2 or self.jacobian.shape[0] != self.x_dot.shape[0]:
            raise ValueError("jacobian rows must match x_dot length")
        if self.jacobian.shape[0] > self.jacobian.shape[1]:
            raise ValueError("task dimension exceeds joint count")
        if not (np.all(np.isfinite(self.x_dot)) and np.all(np.isfinite(self.jacobian))):
            raise ValueError("task entries must be finite")

    @property
    def m(self):
        return self.x_dot.shape[0]

    @property
    def n(self):
        return self.jacobian.shape[1]


@dataclass(frozen=True)
class ScalingResult:
    """Outcome of the per-row task scaling analysis."""

    s: float
    critical_row: int
    per_row_s: tuple


@dataclass(frozen=True)
class SaturationEntry:
    """One pinned row: its row tag, side, and bound value."""

    tag: object
    side: str  # "min" or "max"
    value: float


@dataclass(frozen=True)
class SaturationRecord:
    entries: tuple = ()

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def labels(self):
        return tuple(e.tag.label for e in self.entries)


@dataclass(frozen=True)
class SnsSolution:
    """Commanded joint velocity with scaling and saturation diagnostics.

    ``s_star`` is the applied task scaling: 1 when the task velocity was met
    exactly (statuses ``exact`` and ``task_saturated``), the best recovered
    factor in (0, 1) for ``scaled``, and 0 for ``blocked`` where only the
    pinned-row velocity remains.
    """

    q_dot: np.ndarray
    s_star: float
    saturations: SaturationRecord
    status: str
    iterations: int


def min_norm_solution(task, rel_tol=DEFAULT_REL_TOL):
    """Minimum-norm joint velocity meeting the task exactly, limits ignored."""
    if numerical_rank(task.jacobian, rel_tol) < task.m:
        raise SingularTaskError("task jacobian is singular for the requested task")
    return pinv(task.jacobian, rel_tol) @ task.x_dot


def task_scaling_factor(alpha, beta, b_min, b_max):
    """Largest factor s in [0, 1] keeping s*alpha + beta inside [b_min, b_max] rowwise.

    ``alpha`` is the box image of the task-driven velocity component and
    ``beta`` the remainder. Rows that cannot admit any task motion (alpha
    pointing at no margin) yield 0. Returns the minimum over rows together
    with the first row attaining it.
    """
    alpha = np.atleast_1d(np.asarray(alpha, dtype=float))
    beta = np.atleast_1d(np.asarray(beta, dtype=float))
    b_min = np.atleast_1d(np.asarray(b_min, dtype=float))
    b_max = np.atleast_1d(np.asarray(b_max, dtype=float))
    k = alpha.shape[0]
    if not (beta.shape == b_min.shape == b_max.shape == (k,)) or k == 0:
        raise ValueError("scaling inputs must be equal-length, non-empty vectors")
    low = b_min - beta
    high = b_max - beta
    per_row = np.zeros(k)
    for h in range(k):
        if alpha[h] < 0.0 and low[h] < 0.0:
            per_row[h] = low[h] / alpha[h] if alpha[h] < low[h] else 1.0
        elif alpha[h] > 0.0 and high[h] > 0.0:
            per_row[h] = high[h] / alpha[h] if alpha[h] > high[h] else 1.0
        # else: no usable margin in the direction alpha pushes; stays 0
    critical = int(np.argmin(per_row))
    return ScalingResult(float(per_row[critical]), critical, tuple(per_row))


def _fallback(task, s_star, q_n_star, p_star, record, iterations, rel_tol, task_scale):
    if s_star > 0.0:
        jp = task.jacobian @ p_star
        q_dot = q_n_star + pinv(jp, rel_tol, reference=task_scale) @ (
            s_star * task.x_dot - task.jacobian @ q_n_star
        )
        status = "scaled"
    else:
        q_dot = q_n_star.copy()
        status = "blocked"
    return SnsSolution(q_dot, float(s_star), SaturationRecord(tuple(record)), status, iterations)


def sns_solve(task, system, rel_tol=DEFAULT_REL_TOL, eps=1e-8, max_iter=None):
    """Solve the task inside the generalized box, saturating rows as needed.

    Statuses: ``exact`` (no row pinned against the task, task met),
    ``task_saturated`` (task met with a task-coincident row pinned),
    ``scaled`` (task direction preserved at factor s_star in (0, 1)),
    ``blocked`` (no task motion is admissible; the pinned-row velocity, the
    zero vector in the empty case, is returned).
    """
    a = system.a
    b_min = system.b_min
    b_max = system.b_max
    rows, n = a.shape
    if task.n != n:
        raise ValueError("task and augmented system disagree on joint count")
    if max_iter is None:
        max_iter = 2 * rows
    if max_iter < rows:
        raise ValueError("max_iter must cover at least one pass over the rows")
    if numerical_rank(task.jacobian, rel_tol) < task.m:
        raise SingularTaskError("task jacobian is singular for the requested task")

    # All rank and truncation decisions on J P are judged against the scale of
    # J itself: once the pinned rows exhaust the null space, J P is pure
    # roundoff noise whose own sigma_max would defeat a relative cutoff.
    task_scale = float(np.linalg.norm(task.jacobian, 2))

    q_n = np.zeros(n)
    projector = np.eye(n)
    a_lim = np.empty((0, n))
    a_n = np.empty(0)
    record = []
    pinned = np.zeros(rows, dtype=bool)
    task_row_pinned = False
    s_star = 0.0
    q_n_star = np.zeros(n)
    p_star = np.eye(n)

    for iteration in range(1, max_iter + 1):
        jp_pinv = pinv(task.jacobian @ projector, rel_tol, reference=task_scale)
        q_dot = q_n + jp_pinv @ (task.x_dot - task.jacobian @ q_n)
        a_dot = a @ q_dot
        over = a_dot > b_max + eps
        under = a_dot < b_min - eps
        candidates = np.flatnonzero((over | under) & ~pinned)
        if candidates.size == 0:
            status = "task_saturated" if task_row_pinned else "exact"
            return SnsSolution(q_dot, 1.0, SaturationRecord(tuple(record)), status, iteration)

        # Scaling analysis over the violated rows only: pinned rows sit on
        # their bounds with no task component and would report 0 forever.
        alpha = a @ (jp_pinv @ task.x_dot)
        beta = a_dot - alpha
        scaling = task_scaling_factor(
            alpha[candidates], beta[candidates], b_min[candidates], b_max[candidates]
        )
        worst = int(candidates[scaling.critical_row])
        # The box image of the scaled command is exactly s*alpha + beta, so a
        # snapshot is only worth keeping when that image fits every row, not
        # just the violated ones the scaling was computed from.
        scaled_image = scaling.s * alpha + beta
        if (
            scaling.s > s_star
            and np.all(scaled_image >= b_min - eps)
            and np.all(scaled_image <= b_max + eps)
        ):
            s_star = scaling.s
            q_n_star = q_n.copy()
            p_star = projector.copy()

        side = "max" if over[worst] else "min"
        bound = b_max[worst] if side == "max" else b_min[worst]
        tag = system.row_tags[worst]
        record.append(SaturationEntry(tag, side, float(bound)))
        pinned[worst] = True
        if tag.coincides_with_task:
            task_row_pinned = True
        a_lim = np.vstack([a_lim, a[worst : worst + 1]])
        a_n = np.append(a_n, bound)

        projector = null_projector(a_lim, rel_tol)
        pinned_degenerate = numerical_rank(a_lim, rel_tol) < a_lim.shape[0]
        task_starved = (
            numerical_rank(task.jacobian @ projector, rel_tol, reference=task_scale)
            < task.m
        )
        if pinned_degenerate or (task_starved and not tag.coincides_with_task):
            return _fallback(task, s_star, q_n_star, p_star, record, iteration, rel_tol, task_scale)

        q_n = pinv(a_lim, rel_tol) @ a_n
        # Guard against a pinned set that cannot reproduce its own bounds.
        if np.max(np.abs(a_lim @ q_n - a_n)) > eps:
            return _fallback(task, s_star, q_n_star, p_star, record, iteration, rel_tol, task_scale)

    raise SolverDivergenceError(
        f"saturation loop did not settle within {max_iter} iterations",
        _fallback(task, s_star, q_n_star, p_star, record, max_iter, rel_tol, task_scale),
    )
