"""Pure-numpy kernels. Vectorised where the algorithm allows it."""

import numpy as np


def sweep(A, b, x, order, norms):
    y = np.array(x, dtype=np.float64, copy=True)
    for i in order:
        a = A[i]
        coef = (b[i] - a @ y) / norms[i]
        y += coef * a
    return y


def forward_elimination(H):
    # Row k is never written during step k, so the row loop collapses into
    # a rank-1 update with the same per-entry arithmetic as the scalar loop.
    m = H.shape[0]
    C = np.eye(m)
    for k in range(m - 1, 0, -1):
        C[:k, k:] += np.multiply.outer(-H[:k, k], C[k, k:])
    return C


def backward_elimination(H):
    m = H.shape[0]
    C = np.eye(m)
    for k in range(1, m - 1):
        C[k + 1:m - 1, 1:k + 1] += np.multiply.outer(-H[k + 1:m - 1, k], C[k, 1:k + 1])
    C[0, 0] = 0.0
    C[m - 1, m - 1] = 0.0
    return C


# Directions this close to an axis are treated as exactly axis-parallel, so
# theta and theta + pi trace the same line.
AXIS_SNAP = 1e-14
# Offsets this close to a grid line count as lying on it.
LINE_TOL = 1e-12


def _axis_weights(grid, f):
    """Pixel-strip weights of an axis-parallel ray at distance ``f`` from the
    first grid line. On an interior line the length is shared equally."""
    if f < -LINE_TOL or f > grid + LINE_TOL:
        return []
    k = round(f)
    if abs(f - k) <= LINE_TOL:
        if k == 0:
            return [(0, 1.0)]
        if k == grid:
            return [(grid - 1, 1.0)]
        return [(k - 1, 0.5), (k, 0.5)]
    return [(int(np.floor(f)), 1.0)]


def _trace_one(grid, theta, offset, out):
    half = 0.5 * grid
    ux, uy = np.cos(theta), np.sin(theta)
    img = out.reshape(grid, grid)
    if abs(uy) <= AXIS_SNAP:
        # horizontal: y = offset * sign(ux), rows counted from the top
        for row, w in _axis_weights(grid, half - offset * np.sign(ux)):
            img[row, :] += w
        return
    if abs(ux) <= AXIS_SNAP:
        # vertical: x = -offset * sign(uy)
        for col, w in _axis_weights(grid, half - offset * np.sign(uy)):
            img[:, col] += w
        return
    px, py = -offset * uy, offset * ux

    t_lo, t_hi = -np.inf, np.inf
    for p, u in ((px, ux), (py, uy)):
        t1 = (-half - p) / u
        t2 = (half - p) / u
        t_lo = max(t_lo, min(t1, t2))
        t_hi = min(t_hi, max(t1, t2))
    if not t_hi > t_lo:
        return

    lines = np.arange(grid + 1, dtype=np.float64) - half
    cuts = [np.array([t_lo, t_hi])]
    for p, u in ((px, ux), (py, uy)):
        t = (lines - p) / u
        cuts.append(t[(t > t_lo) & (t < t_hi)])
    t = np.unique(np.concatenate(cuts))
    seg = np.diff(t)
    mid = 0.5 * (t[:-1] + t[1:])
    keep = seg > 0.0
    seg, mid = seg[keep], mid[keep]
    col = np.clip(np.floor(px + ux * mid + half), 0, grid - 1).astype(np.int64)
    row = np.clip(np.floor(half - (py + uy * mid)), 0, grid - 1).astype(np.int64)
    np.add.at(out, row * grid + col, seg)


def trace_rays(grid, thetas, offsets):
    A = np.zeros((len(thetas), grid * grid))
    for r in range(len(thetas)):
        _trace_one(grid, thetas[r], offsets[r], A[r])
    return A
