"""Standard (matrix-vector) form of the Kaczmarz-Tanabe iterations.

A full forward Kaczmarz sweep equals

    y <- y + A^T C^T M (b - A y),        M = diag(1 / ||a_i||^2),

where the *compatible matrix* ``C`` is unit upper triangular and satisfies
``A_S = C A``; row ``i`` of ``A_S`` is ``a_i`` pushed through the later
projections ``P_{i+1}, ..., P_m``. The symmetric sweep has the same shape
with ``Cbar = Chat + C - C A A^T M Chat``, where ``Chat`` plays the role
of ``C`` for the reverse half-sweep ``m-1, ..., 2``.

``C`` and ``Cbar`` depend on ``A`` only, so they are built once and reused
for every right-hand side.
"""

from collections import Counter
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import kernels
from .linalg import as_matrix, as_vector, checked_row_norms, compute_H
from .rowaction import IterationState, apply_P

# Instrumentation: how many times each compatible matrix has been built.
BUILD_COUNTS = Counter()

BRUTEFORCE_MAX_ROWS = 12


def build_C(A):
    """Compatible matrix of the forward sweep.

    The elimination loop keeps the structure of the published algorithm
    (``k`` from ``m`` down to 2, rows ``k-1`` down to 1, columns ``m`` down
    to ``k``) but reads the ratios ``a_{i-1}^T a_k / a_k^T a_k`` from ``H``
    instead of recomputing them, for ``O(m^2 n + m^3)`` total work.
    """
    H = compute_H(A)
    BUILD_COUNTS["C"] += 1
    return kernels.forward_elimination(H)


def build_C_by_factorization(H):
    """``C = H_1 H_2 ... H_m`` accumulated left to right.

    ``H_i`` is the identity with ``-h[j, i]`` written above the diagonal of
    column ``i``; multiplying by it on the right is a column update, so no
    ``m x m`` factor is ever formed.
    """
    H = np.asarray(H, dtype=np.float64)
    m = H.shape[0]
    X = np.eye(m)
    for i in range(1, m):
        for j in range(i):
            X[:, i] -= H[j, i] * X[:, j]
    return X


def d_entry_bruteforce(H, i, j):
    """Closed-form entry of ``C`` (``i < j``) or ``Chat`` (``i > j``).

    Sums, over every monotone index path ``i = p_1, ..., p_v = j`` between
    ``i`` and ``j``, the signed product ``(-1)^(v-1) prod h[p_s, p_{s+1}]``.
    The number of paths grows as ``2^|j-i|``; this is a test oracle.
    """
    H = np.asarray(H, dtype=np.float64)
    if H.shape[0] > BRUTEFORCE_MAX_ROWS:
        raise ValueError(f"brute force is capped at {BRUTEFORCE_MAX_ROWS} rows")
    if i == j:
        raise ValueError("i and j must differ")
    step = 1 if j > i else -1
    between = list(range(i + step, j, step))
    total = 0.0
    for inner in range(len(between) + 1):
        sign = -1.0 if inner % 2 == 0 else 1.0
        for mids in combinations(between, inner):
            path = (i, *mids, j)
            prod = 1.0
            for s in range(len(path) - 1):
                prod *= H[path[s], path[s + 1]]
            total += sign * prod
    return total


def build_Chat(A):
    """Compatible matrix of the reverse half-sweep ``P_{m-1} .. P_2``.

    Rows 1 and ``m`` and column 1 are zero; the interior is unit lower
    triangular. The elimination runs ``k`` upward from 2 to ``m-1`` so that
    row ``k`` is complete before it is propagated to the rows below it.
    """
    A = as_matrix(A)
    H = compute_H(A)
    BUILD_COUNTS["Chat"] += 1
    return kernels.backward_elimination(H)


def build_Chat_by_factorization(H):
    """``Chat = Hhat_{m-1} ... Hhat_2`` accumulated left to right, with the
    first and last rows and columns pinned to zero."""
    H = np.asarray(H, dtype=np.float64)
    m = H.shape[0]
    X = np.eye(m)
    X[0, 0] = 0.0
    X[m - 1, m - 1] = 0.0
    for t in range(m - 2, 0, -1):
        for j in range(t + 1, m - 1):
            X[:, t] -= H[j, t] * X[:, j]
    return X


def compose_Cbar(C, Chat, A, M_diag):
    """``Cbar = Chat + C - C A A^T M Chat``, evaluated left to right."""
    A = as_matrix(A)
    M_diag = as_vector(M_diag, A.shape[0])
    correction = ((C @ A) @ A.T) * M_diag[np.newaxis, :]
    return Chat + C - correction @ Chat


def build_Cbar(A):
    A = as_matrix(A)
    M_diag = 1.0 / checked_row_norms(A)
    return compose_Cbar(build_C(A), build_Chat(A), A, M_diag)


def projected_rows(A):
    """``A_S`` built by direct projection: row ``i`` is ``P_m ... P_{i+1} a_i``."""
    A = as_matrix(A)
    m = A.shape[0]
    out = np.empty_like(A)
    for i in range(m):
        v = A[i].copy()
        for t in range(i + 1, m):
            v = apply_P(A, t, v)
        out[i] = v
    return out


def reverse_projected_rows(A):
    """``Abar_S`` by direct projection: row ``i`` (interior) is
    ``P_2 ... P_{i-1} a_i``; the first and last rows are zero."""
    A = as_matrix(A)
    m = A.shape[0]
    out = np.zeros_like(A)
    for i in range(1, m - 1):
        v = A[i].copy()
        for t in range(i - 1, 0, -1):
            v = apply_P(A, t, v)
        out[i] = v
    return out


@dataclass
class PrecomputedIteration:
    """Frozen operator ``G = A^T C^T M`` of a standard-form iteration.

    ``kind`` is ``"kt"`` when built from ``C`` and ``"skt"`` when built from
    ``Cbar``. ``GA = G A`` is optional; with it one step costs ``O(n^2)``.
    """

    G: np.ndarray
    kind: str
    GA: np.ndarray | None = None

    @classmethod
    def from_compatible(cls, A, compatible, kind, with_GA=False):
        A = as_matrix(A)
        M_diag = 1.0 / checked_row_norms(A)
        G = (A.T @ compatible.T) * M_diag[np.newaxis, :]
        return cls(G=G, kind=kind, GA=G @ A if with_GA else None)

    def step(self, A, b, y):
        if self.GA is not None:
            return y + self.G @ b - self.GA @ y
        return y + self.G @ (b - A @ y)


def precompute_kt(A, with_GA=False):
    return PrecomputedIteration.from_compatible(A, build_C(A), "kt", with_GA)


def precompute_skt(A, with_GA=False):
    return PrecomputedIteration.from_compatible(A, build_Cbar(A), "skt", with_GA)


def _iterate(P, A, b, state, kind):
    if P.kind != kind:
        raise ValueError(f"expected a {kind!r} operator, got {P.kind!r}")
    A = as_matrix(A)
    b = as_vector(b, A.shape[0])
    return state.advance(P.step(A, b, state.x))


def kt_iterate(P, A, b, state):
    """One Kaczmarz-Tanabe step: ``y + A^T C^T M (b - A y)``."""
    return _iterate(P, A, b, state, "kt")


def skt_iterate(P, A, b, state):
    """One symmetric Kaczmarz-Tanabe step: ``y + A^T Cbar^T M (b - A y)``."""
    return _iterate(P, A, b, state, "skt")


def iteration_matrix(A, compatible):
    """``I - A^T X^T M A`` for a compatible matrix ``X``."""
    A = as_matrix(A)
    M_diag = 1.0 / checked_row_norms(A)
    return np.eye(A.shape[1]) - (A.T @ compatible.T) * M_diag[np.newaxis, :] @ A
