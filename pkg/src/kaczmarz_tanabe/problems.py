"""Test systems: the 6x4 Tanabe system and parallel-beam tomography.

Tomography geometry
-------------------
The image is a ``grid x grid`` block of unit pixels centred on the origin,
stored row-major with row 0 at the top. A ray at angle ``theta`` and offset
``s`` is the line ``s * n + t * u`` with direction ``u = (cos theta, sin
theta)`` and normal ``n = (-sin theta, cos theta)``. Matrix entries are
the lengths of the ray inside each pixel.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from . import kernels
from .linalg import as_matrix, row_norms_squared, zero_rows


@dataclass
class ProblemInstance:
    A: np.ndarray
    b: np.ndarray
    x_star: np.ndarray | None = None
    nullspace_basis: list | None = None
    label: str = ""
    metadata: dict = field(default_factory=dict)

    @property
    def shape(self):
        return self.A.shape


@dataclass(frozen=True)
class ScanGeometry:
    """Parallel-beam scan.

    ``detector_span`` is the distance between the outermost rays, in pixel
    units; it defaults to ``sqrt(2) * grid`` so the fan covers the image
    diagonal. Angles are spread evenly over ``[0, pi)``, or over
    ``[0, 2 pi)`` with ``full_circle``.
    """

    n_angles: int
    n_rays: int
    grid: int
    detector_span: float | None = None
    full_circle: bool = False

    def __post_init__(self):
        for name in ("n_angles", "n_rays", "grid"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")

    @property
    def span(self):
        return np.sqrt(2.0) * self.grid if self.detector_span is None else float(self.detector_span)

    @property
    def m(self):
        return self.n_angles * self.n_rays

    @property
    def n(self):
        return self.grid * self.grid

    def angles(self):
        arc = 2.0 * np.pi if self.full_circle else np.pi
        return np.arange(self.n_angles) * (arc / self.n_angles)

    def offsets(self):
        if self.n_rays == 1:
            return np.zeros(1)
        return (np.arange(self.n_rays) - 0.5 * (self.n_rays - 1)) * (self.span / (self.n_rays - 1))

    def label(self):
        circle = ",full" if self.full_circle else ""
        return f"tomo({self.n_angles}x{self.n_rays},grid={self.grid},span={self.span:.6g}{circle})"


@dataclass
class PhantomImage:
    grid: int
    pixels: np.ndarray

    @property
    def image(self):
        return self.pixels.reshape(self.grid, self.grid)


TANABE_A = np.array([
    [1.0, 3.0, 2.0, -1.0],
    [1.0, 2.0, -1.0, -2.0],
    [1.0, -1.0, 2.0, 3.0],
    [2.0, 1.0, 1.0, 1.0],
    [5.0, 5.0, 4.0, 1.0],
    [4.0, -1.0, 5.0, 7.0],
])
TANABE_B = np.array([5.0, 0.0, 5.0, 5.0, 15.0, 15.0])


def tanabe_problem():
    """Consistent, rank-3 6x4 system with ``N(A) = span{(-2/3, 1, -2/3, 1)}``."""
    xi = np.array([-2.0 / 3.0, 1.0, -2.0 / 3.0, 1.0])
    return ProblemInstance(
        A=TANABE_A.copy(),
        b=TANABE_B.copy(),
        x_star=np.ones(4),
        nullspace_basis=[xi],
        label="tanabe",
    )


def project_rays(grid, thetas, offsets):
    """Dense intersection-length rows for arbitrary ``(theta, offset)`` pairs."""
    thetas = np.ascontiguousarray(thetas, dtype=np.float64).reshape(-1)
    offsets = np.ascontiguousarray(offsets, dtype=np.float64).reshape(-1)
    if thetas.shape != offsets.shape:
        raise ValueError("thetas and offsets must have the same length")
    return kernels.trace_rays(int(grid), thetas, offsets)


def build_projection_matrix(g):
    """Projection matrix of a scan, angle-major (row ``t * n_rays + r``)."""
    thetas = np.repeat(g.angles(), g.n_rays)
    offsets = np.tile(g.offsets(), g.n_angles)
    return project_rays(g.grid, thetas, offsets)


# Modified Shepp-Logan head (Toft's variant, as shipped by MATLAB's
# phantom() and most reconstruction toolkits). Columns: intensity in tenths,
# semi-axis a, semi-axis b, centre x, centre y, rotation in degrees.
# Integer tenths keep overlaps exact, e.g. 10 - 8 - 2 == 0.
MODIFIED_SHEPP_LOGAN = (
    (10, 0.69, 0.92, 0.0, 0.0, 0.0),
    (-8, 0.6624, 0.874, 0.0, -0.0184, 0.0),
    (-2, 0.11, 0.31, 0.22, 0.0, -18.0),
    (-2, 0.16, 0.41, -0.22, 0.0, 18.0),
    (1, 0.21, 0.25, 0.0, 0.35, 0.0),
    (1, 0.046, 0.046, 0.0, 0.1, 0.0),
    (1, 0.046, 0.046, 0.0, -0.1, 0.0),
    (1, 0.046, 0.023, -0.08, -0.605, 0.0),
    (1, 0.023, 0.023, 0.0, -0.606, 0.0),
    (1, 0.023, 0.046, 0.06, -0.605, 0.0),
)


def head_phantom(grid):
    """Modified Shepp-Logan phantom sampled at pixel centres of ``[-1, 1]^2``."""
    if grid < 1:
        raise ValueError("grid must be at least 1")
    centres = (np.arange(grid) + 0.5) * (2.0 / grid) - 1.0
    X, Y = np.meshgrid(centres, -centres)
    tenths = np.zeros((grid, grid), dtype=np.int64)
    for value, a, b, x0, y0, phi in MODIFIED_SHEPP_LOGAN:
        c, s = np.cos(np.radians(phi)), np.sin(np.radians(phi))
        dx, dy = X - x0, Y - y0
        u = (dx * c + dy * s) / a
        v = (-dx * s + dy * c) / b
        tenths[u * u + v * v <= 1.0] += value
    return PhantomImage(grid=grid, pixels=(tenths / 10.0).ravel())


def tomo_problem(g, phantom=None):
    """Consistent tomography system ``b = A x*`` with a head phantom ``x*``.

    Rays that miss the image give zero rows; they are kept and listed in
    ``metadata["zero_rows"]``.
    """
    A = build_projection_matrix(g)
    x_star = head_phantom(g.grid).pixels if phantom is None else np.asarray(phantom, dtype=np.float64)
    return ProblemInstance(
        A=A,
        b=A @ x_star,
        x_star=x_star,
        label=g.label(),
        metadata={"geometry": g, "zero_rows": zero_rows(A).tolist()},
    )


def strip_zero_rows(problem):
    """Drop the all-zero rows of ``A`` (and the matching entries of ``b``)."""
    A = as_matrix(problem.A)
    keep = row_norms_squared(A) >= 1e-300
    if keep.all():
        return problem
    meta = dict(problem.metadata)
    meta["dropped_rows"] = np.flatnonzero(~keep).tolist()
    meta["dropped_rhs_max"] = float(np.max(np.abs(problem.b[~keep])))
    return replace(problem, A=A[keep], b=np.asarray(problem.b)[keep], metadata=meta)
