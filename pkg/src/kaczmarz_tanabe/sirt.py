"""SIRT baselines ``x <- x + lam * T A^T M (b - A x)`` and CGMN."""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .exceptions import DegenerateWeightError
from .linalg import as_matrix, as_vector, checked_row_norms
from .rowaction import IterationState

LANDWEBER = "landweber"
CIMMINO = "cimmino"
CAV = "cav"
DROP = "drop"
SART = "sart"
KINDS = (LANDWEBER, CIMMINO, CAV, DROP, SART)

BREAKDOWN_THRESHOLD = 1e-300
# CG residuals below this multiple of eps * ||rhs|| are rounding noise.
STAGNATION_FLOOR = 64 * np.finfo(np.float64).eps
# A residual this many times above the best one means CG has lost its way.
STAGNATION_GROWTH = 1e6


@dataclass
class SirtVariant:
    kind: str
    T_diag: np.ndarray
    M_diag: np.ndarray
    lam: float = 1.0


def _invert(weights, kind, label, allow_degenerate):
    out = np.zeros_like(weights)
    nz = weights != 0.0
    if not allow_degenerate and not nz.all():
        raise DegenerateWeightError(f"{kind} {label}", int(np.flatnonzero(~nz)[0]))
    out[nz] = 1.0 / weights[nz]
    return out


def build_sirt(A, kind, lam=1.0, sart_exact_sums=False, allow_degenerate=True):
    """Diagonal scalings ``T`` (length n) and ``M`` (length m) of a SIRT method.

    SART uses absolute row and column sums by default; signed sums can
    vanish for systems with mixed-sign entries. ``sart_exact_sums=True``
    switches to the signed sums. A zero weight (a pixel no ray touches, or
    a vanishing signed sum) gets a zero scaling, which freezes that
    component, unless ``allow_degenerate`` is false.
    """
    A = as_matrix(A)
    m, n = A.shape
    norms = checked_row_norms(A)
    ones_n = np.ones(n)
    if kind == LANDWEBER:
        T, M = ones_n, np.ones(m)
    elif kind == CIMMINO:
        T, M = ones_n, 1.0 / (m * norms)
    elif kind == CAV:
        nz = np.count_nonzero(A, axis=0).astype(np.float64)
        T, M = ones_n, 1.0 / ((A * A) @ nz)
    elif kind == DROP:
        nz = np.count_nonzero(A, axis=0).astype(np.float64)
        T, M = _invert(nz, kind, "column", allow_degenerate), 1.0 / norms
    elif kind == SART:
        W = A if sart_exact_sums else np.abs(A)
        T = _invert(W.sum(axis=0), kind, "column", allow_degenerate)
        M = _invert(W.sum(axis=1), kind, "row", allow_degenerate)
    else:
        raise ValueError(f"unknown SIRT variant {kind!r}")
    return SirtVariant(kind=kind, T_diag=T, M_diag=M, lam=float(lam))


def sirt_iterate(v, A, b, state):
    A = as_matrix(A)
    b = as_vector(b, A.shape[0])
    x = state.x
    x_new = x + v.lam * (v.T_diag * (A.T @ (v.M_diag * (b - A @ x))))
    return state.advance(x_new)


def cgmn_solve(A, b, x0, max_iter, tol=1e-12, callback=None):
    """CG on the symmetric double-sweep Kaczmarz system.

    With ``D(b, x)`` the sweep over rows ``1..m`` then ``m..1``, the fixed
    points of ``D`` solve ``(I - Q^T Q) x = D(b, 0)``, a symmetric positive
    semidefinite system. CG is run on it, applying ``Q^T Q`` matrix-free.

    ``history`` on the returned state holds the residual norm per CG step;
    ``status`` is one of ``converged``, ``breakdown`` (the curvature
    ``<d, (I - Q^T Q) d>`` collapsed), ``stagnation`` (the residual hit the
    rounding floor or blew up past its best value) or ``max_iter``. The
    returned iterate is the one with the smallest residual. With ``tol=0``
    the solver runs until one of the other conditions fires.

    ``callback(k, x)`` is called after every CG step.
    """
    A = as_matrix(A)
    m, n = A.shape
    norms = checked_row_norms(A)
    b = as_vector(b, m)
    x = as_vector(x0, n).copy()
    order = np.concatenate([np.arange(m), np.arange(m - 1, -1, -1)]).astype(np.int64)
    zero_b = np.zeros(m)

    def operator(d):
        return d - kernels.sweep(A, zero_b, d, order, norms)

    rhs = kernels.sweep(A, b, np.zeros(n), order, norms)
    scale = np.linalg.norm(rhs) or 1.0
    r = rhs - operator(x)
    res = np.linalg.norm(r)
    history = [res]
    best_x, best_res = x.copy(), res
    if res <= tol * scale:
        return IterationState(x=x, k=0, history=history, status="converged")

    d = r.copy()
    rr = r @ r
    status = "max_iter"
    k = 0
    while k < max_iter:
        q = operator(d)
        curvature = d @ q
        if curvature <= BREAKDOWN_THRESHOLD:
            status = "breakdown"
            break
        k += 1
        alpha = rr / curvature
        x = x + alpha * d
        r = r - alpha * q
        rr_new = r @ r
        res = np.sqrt(rr_new)
        history.append(res)
        if callback is not None:
            callback(k, x)
        if res < best_res:
            best_x, best_res = x.copy(), res
        if res <= tol * scale:
            status = "converged"
            break
        if res <= STAGNATION_FLOOR * scale or res > STAGNATION_GROWTH * best_res:
            status = "stagnation"
            break
        d = r + (rr_new / rr) * d
        rr = rr_new
    return IterationState(x=best_x, k=k, history=history, status=status)
