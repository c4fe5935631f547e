"""Row projections and Kaczmarz sweeps.

These are the ground-truth oracles: every standard-form iteration in
:mod:`kaczmarz_tanabe.tanabe` must reproduce one of the sweeps here.

Row indices are 0-based throughout, so the operator ``P_i`` of a system
with rows ``a_1 .. a_m`` is ``apply_P(A, i - 1, x)`` here.
"""

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .exceptions import ZeroRowError
from .linalg import ZERO_ROW_THRESHOLD, as_matrix, as_vector, checked_row_norms

FORWARD = "forward"
SYMMETRIC = "symmetric"


@dataclass(frozen=True)
class SweepSchedule:
    """Row order of one outer iteration.

    ``forward`` visits ``0 .. m-1``. ``symmetric`` visits
    ``0 .. m-1, m-2 .. 1``, a period of ``2m - 2`` projections. For
    ``m = 1`` the symmetric period is undefined and falls back to the
    forward sweep.
    """

    kind: str
    m: int

    def __post_init__(self):
        if self.kind not in (FORWARD, SYMMETRIC):
            raise ValueError(f"unknown sweep kind {self.kind!r}")
        if self.m < 1:
            raise ValueError("a sweep needs at least one row")

    def indices(self):
        up = np.arange(self.m, dtype=np.int64)
        if self.kind == FORWARD or self.m == 1:
            return up
        return np.concatenate([up, np.arange(self.m - 2, 0, -1, dtype=np.int64)])

    def __iter__(self):
        return iter(self.indices().tolist())

    def __len__(self):
        return len(self.indices())


@dataclass
class IterationState:
    """Current iterate of an outer iteration plus whatever the driver records."""

    x: np.ndarray
    k: int = 0
    history: list = field(default_factory=list)
    status: str | None = None

    def advance(self, x):
        return IterationState(x=x, k=self.k + 1, history=self.history, status=self.status)


def _row(A, i):
    a = A[i]
    norm = a @ a
    if norm < ZERO_ROW_THRESHOLD:
        raise ZeroRowError(i)
    return a, norm


def project_row(A, i, b, x):
    """Project ``x`` onto the hyperplane ``<a_i, x> = b_i``."""
    A = as_matrix(A)
    a, norm = _row(A, i)
    x = as_vector(x, A.shape[1])
    return x + ((b[i] - a @ x) / norm) * a


def apply_P(A, i, x):
    """``P_i x = x - (<a_i, x> / ||a_i||^2) a_i``."""
    A = as_matrix(A)
    a, norm = _row(A, i)
    x = as_vector(x, A.shape[1])
    return x - ((a @ x) / norm) * a


def _run(A, b, x, order):
    A = as_matrix(A)
    norms = checked_row_norms(A)
    x = as_vector(x, A.shape[1])
    b = np.zeros(A.shape[0]) if b is None else as_vector(b, A.shape[0])
    return kernels.sweep(A, b, x, np.asarray(order, dtype=np.int64), norms)


def kaczmarz_sweep(A, b, x):
    """One cyclic Kaczmarz sweep over rows ``0 .. m-1``."""
    A = as_matrix(A)
    return _run(A, b, x, SweepSchedule(FORWARD, A.shape[0]).indices())


def symmetric_sweep(A, b, x, return_mid=False):
    """One period of the symmetric Kaczmarz method.

    With ``return_mid=True`` the iterate after the forward half (row
    ``m-1``) is returned as well, as ``(y, y_mid)``.
    """
    A = as_matrix(A)
    m = A.shape[0]
    if not return_mid:
        return _run(A, b, x, SweepSchedule(SYMMETRIC, m).indices())
    mid = _run(A, b, x, np.arange(m))
    return _run(A, b, mid, np.arange(m - 2, 0, -1)), mid


def apply_Q(A, x):
    """``Q x = P_m ... P_1 x`` (a homogeneous forward sweep)."""
    A = as_matrix(A)
    return _run(A, None, x, np.arange(A.shape[0]))


def apply_Qt(A, x):
    """``Q^T x = P_1 ... P_m x``."""
    A = as_matrix(A)
    return _run(A, None, x, np.arange(A.shape[0] - 1, -1, -1))


def apply_Qbar(A, x):
    """``Qbar x = P_2 ... P_{m-1} x``; the identity for ``m <= 2``."""
    A = as_matrix(A)
    return _run(A, None, x, np.arange(A.shape[0] - 2, 0, -1))


def apply_double_sweep(A, b, x):
    """Forward then backward over all rows (``P_1 .. P_m .. P_1``)."""
    A = as_matrix(A)
    m = A.shape[0]
    order = np.concatenate([np.arange(m), np.arange(m - 1, -1, -1)])
    return _run(A, b, x, order)
