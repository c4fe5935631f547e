"""Kaczmarz-Tanabe solvers in matrix-vector (standard) form.

A full Kaczmarz sweep over the rows of ``A`` equals one step of
``y <- y + A^T C^T M (b - A y)`` with a unit upper-triangular compatible
matrix ``C`` and ``M = diag(1 / ||a_i||^2)``. The symmetric sweep has the
same shape with ``Cbar``. Precomputing these matrices turns a sequential
sweep into two matrix-vector products per iteration.
"""

from .exceptions import DegenerateWeightError, DivergenceError, NoConvergence, ZeroRowError
from .kernels import BACKEND
from .linalg import (
    compute_H,
    dominant_singular_value,
    min_norm_lsq,
    project_nullspace,
    project_rowspace,
    row_norms_squared,
)
from .problems import (
    PhantomImage,
    ProblemInstance,
    ScanGeometry,
    build_projection_matrix,
    head_phantom,
    strip_zero_rows,
    tanabe_problem,
    tomo_problem,
)
from .rowaction import (
    IterationState,
    SweepSchedule,
    apply_double_sweep,
    apply_P,
    apply_Q,
    apply_Qbar,
    apply_Qt,
    kaczmarz_sweep,
    project_row,
    symmetric_sweep,
)
from .sirt import SirtVariant, build_sirt, cgmn_solve, sirt_iterate
from .tanabe import (
    PrecomputedIteration,
    build_C,
    build_C_by_factorization,
    build_Cbar,
    build_Chat,
    build_Chat_by_factorization,
    d_entry_bruteforce,
    iteration_matrix,
    kt_iterate,
    precompute_kt,
    precompute_skt,
    skt_iterate,
)

__version__ = "0.1.0"
