"""Dense matrix kernels: SVD pseudoinverse, numerical rank, null-space projectors.

Everything downstream (constraint stacking, the saturation solver, the
verification oracle) is built on these three operations, so their tolerance
semantics are fixed here: singular values at or below ``rel_tol * sigma_max``
are treated as exactly zero.
"""

import numpy as np

DEFAULT_REL_TOL = 1e-10


def _as_finite_array(m, name):
    a = np.asarray(m, dtype=float)
    if a.size and not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite entries")
    return a


def pinv(m, rel_tol=DEFAULT_REL_TOL, reference=None):
    """Moore-Penrose pseudoinverse via full SVD.

    Singular values sigma_i <= rel_tol * sigma_max are zeroed, which keeps the
    rank decisions here consistent with :func:`numerical_rank`. Damped
    least-squares is deliberately not used: the saturation solver relies on
    exact rank deficiency detection for its fallback logic.

    Args:
        m: matrix, any shape (r, c) with r, c >= 1.
        rel_tol: relative singular-value cutoff, > 0.
        reference: optional scale the cutoff is taken against instead of the
            matrix's own sigma_max. A matrix that is pure roundoff noise left
            over from a larger computation (e.g. a task Jacobian multiplied by
            a rank-starved projector) has a sigma_max that is itself noise;
            judging it against the scale of the originating matrix zeroes it.

    Returns:
        The (c, r) pseudoinverse.
    """
    a = _as_finite_array(m, "pinv input")
    if a.ndim != 2:
        raise ValueError("pinv expects a 2-D matrix")
    if rel_tol <= 0:
        raise ValueError("rel_tol must be positive")
    if a.shape[0] == 0 or a.shape[1] == 0:
        return np.zeros((a.shape[1], a.shape[0]))
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((a.shape[1], a.shape[0]))
    cutoff = rel_tol * (s[0] if reference is None else reference)
    inv_s = np.where(s > cutoff, 1.0 / np.where(s > 0, s, 1.0), 0.0)
    return (vt.T * inv_s) @ u.T


def numerical_rank(m, rel_tol=DEFAULT_REL_TOL, reference=None):
    """Number of singular values above the cutoff (0 for a zero matrix).

    The cutoff is rel_tol * sigma_max, or rel_tol * reference when a scale
    from the originating computation is supplied (see :func:`pinv`).
    """
    a = _as_finite_array(m, "numerical_rank input")
    if a.ndim != 2:
        raise ValueError("numerical_rank expects a 2-D matrix")
    if a.shape[0] == 0 or a.shape[1] == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    cutoff = rel_tol * (s[0] if reference is None else reference)
    return int(np.count_nonzero(s > cutoff))


def null_projector(a_lim, rel_tol=DEFAULT_REL_TOL):
    """Orthogonal projector onto the null space of the saturated-row matrix.

    P = I - pinv(a_lim) @ a_lim. A zero-row ``a_lim`` is legal and yields the
    identity, so the solver loop needs no special casing before the first
    saturation.
    """
    a = _as_finite_array(a_lim, "null_projector input")
    if a.ndim != 2:
        raise ValueError("null_projector expects a 2-D matrix")
    n = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(n)
    return np.eye(n) - pinv(a, rel_tol) @ a
