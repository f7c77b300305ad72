"""Ground-truth solver for small instances by exhaustive active-set enumeration.

For every subset of box rows pinned at its min or max bound (3^rows
assignments), the equality system [J; A_S] q_dot = [s*x_dot; bounds_S] is
solved in the least-squares sense and accepted when it is consistent and the
full box holds. Feasibility at s = 1 and the largest feasible scale (by
bisection) follow. The enumeration shares no code with the saturation solver
it cross-checks; numpy's own batched pseudoinverse does the linear algebra.
"""

import itertools
from dataclasses import dataclass

import numpy as np

_MAX_JOINTS = 6
_MAX_ROWS = 12
# Cache pinv batches across bisection steps only while they stay small.
_CACHE_LIMIT = 20000
_CHUNK = 4096
_SCALE_RESOLUTION = 1e-6


class OracleBudgetError(ValueError):
    """Instance exceeds the combinatorial enumeration budget."""


@dataclass(frozen=True)
class OracleVerdict:
    """feasible_exact: some assignment meets the task at s = 1 inside the box.

    best_scale is the largest s (to 1e-6) for which J q_dot = s*x_dot is
    achievable inside the box; witness is a joint velocity realizing the
    verdict (None only if even s = 0 is infeasible, i.e. the box excludes
    every null-task velocity).
    """

    feasible_exact: bool
    best_scale: float
    witness: np.ndarray


class _Enumeration:
    """Per-instance assignment batches: pinned-row systems and their pinvs.

    Batches are grouped by subset size in ascending order, subsets in
    lexicographic order, sides min-before-max, so the first accepted witness
    is deterministic. d(s) only changes in its task block, so pinvs are
    reusable across bisection steps.
    """

    def __init__(self, task, system):
        self.task = task
        self.system = system
        self._cache = [] if 3 ** system.rows <= _CACHE_LIMIT else None
        self._cache_complete = False

    def _assignments(self):
        rows = self.system.rows
        for size in range(rows + 1):
            sides = list(itertools.product((0, 1), repeat=size))
            for combo in itertools.combinations(range(rows), size):
                for side in sides:
                    yield combo, side

    def _build(self, group):
        j = self.task.jacobian
        a = self.system.a
        b = np.stack([self.system.b_min, self.system.b_max])
        m, n = j.shape
        size = len(group[0][0])
        count = len(group)
        e = np.empty((count, m + size, n))
        e[:, :m] = j
        bounds = np.empty((count, size))
        for i, (combo, side) in enumerate(group):
            e[i, m:] = a[list(combo)]
            bounds[i] = b[list(side), list(combo)]
        return np.linalg.pinv(e), e, bounds

    def _chunks(self):
        if self._cache_complete:
            yield from self._cache
            return
        group = []
        size = 0
        pending = []
        for combo, side in self._assignments():
            if group and (len(combo) != size or len(group) == _CHUNK):
                pending.append(self._build(group))
                yield pending[-1]
                group = []
            group.append((combo, side))
            size = len(combo)
        pending.append(self._build(group))
        yield pending[-1]
        if self._cache is not None:
            self._cache = pending
            self._cache_complete = True

    def find(self, s, tol):
        """First assignment (in enumeration order) feasible at scale s, or None."""
        x = self.task.x_dot
        a = self.system.a
        b_min = self.system.b_min
        b_max = self.system.b_max
        m = x.shape[0]
        for pinv_stack, e_stack, bounds in self._chunks():
            d = np.empty((e_stack.shape[0], e_stack.shape[1]))
            d[:, :m] = s * x
            d[:, m:] = bounds
            sol = (pinv_stack @ d[..., None])[..., 0]
            residual = np.abs((e_stack @ sol[..., None])[..., 0] - d).max(axis=1)
            ok = residual <= tol * (1.0 + np.abs(d).max(axis=1))
            if not ok.any():
                continue
            image = sol @ a.T
            ok &= np.all(image >= b_min - tol, axis=1)
            ok &= np.all(image <= b_max + tol, axis=1)
            hits = np.flatnonzero(ok)
            if hits.size:
                return sol[hits[0]]
        return None


def oracle_solve(task, system, tol=1e-9):
    """Exhaustively decide task feasibility inside the box and the best scale.

    Bisection for best_scale assumes feasibility is monotone in s, which holds
    whenever the zero velocity is admissible (each row's box straddles its
    bias); in the solver's operating regime shaped boxes contain 0.
    """
    if system.n > _MAX_JOINTS or system.rows > _MAX_ROWS:
        raise OracleBudgetError(
            f"instance {system.rows}x{system.n} exceeds the {_MAX_ROWS}x{_MAX_JOINTS} budget"
        )
    if task.n != system.n:
        raise ValueError("task and augmented system disagree on joint count")
    enum = _Enumeration(task, system)
    witness = enum.find(1.0, tol)
    if witness is not None:
        return OracleVerdict(True, 1.0, witness)
    low, high = 0.0, 1.0
    best = enum.find(0.0, tol)
    if best is None:
        return OracleVerdict(False, 0.0, None)
    while high - low > _SCALE_RESOLUTION:
        mid = 0.5 * (low + high)
        witness = enum.find(mid, tol)
        if witness is None:
            high = mid
        else:
            low, best = mid, witness
    return OracleVerdict(False, low, best)
