"""Dense kernels shared by every solver: row norms, the row-correlation
matrix ``H``, a minimum-norm least-squares oracle, nullspace projection and
power iteration for the contraction factor of a sweep operator.

Matrices are plain 2-D ``float64`` numpy arrays in row-major order.
"""

import numpy as np

from .exceptions import NoConvergence, ZeroRowError

# Exact-zero intent, not rank filtering.
ZERO_ROW_THRESHOLD = 1e-300


def as_matrix(A):
    A = np.ascontiguousarray(A, dtype=np.float64)
    if A.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {A.shape}")
    return A


def as_vector(x, n=None):
    x = np.ascontiguousarray(x, dtype=np.float64).reshape(-1)
    if n is not None and x.shape[0] != n:
        raise ValueError(f"expected a vector of length {n}, got {x.shape[0]}")
    return x


def row_norms_squared(A):
    """Squared Euclidean norms of the rows of ``A``.

    Zero rows are reported as zeros; it is up to the caller to reject them.
    """
    A = as_matrix(A)
    return np.einsum("ij,ij->i", A, A)


def zero_rows(A):
    return np.flatnonzero(row_norms_squared(A) < ZERO_ROW_THRESHOLD)


def checked_row_norms(A):
    """Row norms squared, raising :class:`ZeroRowError` on the first zero row."""
    norms = row_norms_squared(A)
    bad = np.flatnonzero(norms < ZERO_ROW_THRESHOLD)
    if bad.size:
        raise ZeroRowError(int(bad[0]))
    return norms


def compute_H(A):
    """Row-correlation matrix ``h[i, j] = <a_i, a_j> / ||a_j||^2``.

    The diagonal is built from the same row norms it is divided by, so it
    is exactly one.
    """
    A = as_matrix(A)
    norms = checked_row_norms(A)
    G = A @ A.T
    np.fill_diagonal(G, norms)
    return G / norms[np.newaxis, :]


def default_max_iter(A):
    m, n = A.shape
    return 10 * (m + n)


def min_norm_lsq(A, b, tol=1e-12, max_iter=None):
    """Minimum-norm least-squares solution ``A^+ b`` by CGLS from zero.

    Every CGLS iterate is a combination of columns of ``A^T``, so the limit
    is the minimum-norm solution. Iteration stops once
    ``||A^T (b - A x)|| <= tol * ||A^T b||``.

    Raises
    ------
    NoConvergence
        If ``max_iter`` is exhausted; the best iterate is attached.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    A = as_matrix(A)
    m, n = A.shape
    b = as_vector(b, m)
    if max_iter is None:
        max_iter = default_max_iter(A)

    x = np.zeros(n)
    r = b.copy()
    s = A.T @ r
    gamma = s @ s
    target = tol * np.sqrt(gamma)
    if gamma == 0.0:
        return x
    p = s.copy()
    best_x, best_res = x.copy(), np.sqrt(gamma)
    for it in range(1, max_iter + 1):
        q = A @ p
        qq = q @ q
        if qq == 0.0:
            break
        alpha = gamma / qq
        x += alpha * p
        r -= alpha * q
        s = A.T @ r
        gamma_new = s @ s
        res = np.sqrt(gamma_new)
        if res < best_res:
            best_x, best_res = x.copy(), res
        if res <= target:
            return x
        p = s + (gamma_new / gamma) * p
        gamma = gamma_new
    raise NoConvergence(
        f"CGLS did not reach tol={tol:g} in {max_iter} iterations",
        x=best_x, iterations=max_iter, residual=best_res,
    )


def project_rowspace(A, x, tol=1e-12, max_iter=None):
    """Orthogonal projection of ``x`` onto ``R(A^T)``."""
    A = as_matrix(A)
    x = as_vector(x, A.shape[1])
    return min_norm_lsq(A, A @ x, tol=tol, max_iter=max_iter)


def project_nullspace(A, x0, tol=1e-12, max_iter=None):
    """Orthogonal projection of ``x0`` onto ``N(A)``.

    Computed as ``x0 - r`` where ``r`` is the minimum-norm solution of
    ``A z = A x0``.
    """
    x0 = as_vector(x0)
    return x0 - project_rowspace(A, x0, tol=tol, max_iter=max_iter)


def dominant_singular_value(apply, apply_adjoint, dim, restrict_to_rowspace_of=None,
                            tol=1e-12, max_iter=10_000, seed=0):
    """Largest singular value of a linear map restricted to ``R(A^T)``.

    Runs power iteration on ``v -> apply_adjoint(apply(v))``. When
    ``restrict_to_rowspace_of`` is given, every iterate is projected back
    onto the row space of that matrix, so the result is the norm of the
    operator restricted to ``N(A)^perp``.

    Parameters
    ----------
    apply, apply_adjoint : callable
        The operator and its transpose, each mapping a length-``dim``
        vector to a length-``dim`` vector.
    dim : int
        Dimension of the space the operator acts on.
    restrict_to_rowspace_of : ndarray, optional
        Matrix whose row space the iteration is confined to.
    tol : float
        Relative change of the Rayleigh quotient at which to stop.

    Returns
    -------
    float
        ``sqrt`` of the dominant eigenvalue of ``apply_adjoint o apply``.
    """
    if dim <= 0:
        raise ValueError("dim must be positive")
    A = None if restrict_to_rowspace_of is None else as_matrix(restrict_to_rowspace_of)

    def restrict(v):
        return v if A is None else project_rowspace(A, v)

    rng = np.random.default_rng(seed)
    v = restrict(rng.standard_normal(dim))
    nv = np.linalg.norm(v)
    if nv == 0.0:
        return 0.0
    v /= nv
    lam_prev = None
    for _ in range(max_iter):
        w = restrict(apply_adjoint(apply(v)))
        lam = v @ w
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        if lam_prev is not None and abs(lam - lam_prev) <= tol * abs(lam):
            return float(np.sqrt(max(lam, 0.0)))
        v = w / nw
        lam_prev = lam
    raise NoConvergence(f"power iteration did not settle in {max_iter} iterations",
                        x=v, iterations=max_iter)
