"""numba-compiled kernels.

Inner products are accumulated left to right in a single scalar, so results
do not depend on BLAS threading.
"""

import math

import numpy as np
from numba import njit


@njit(cache=True)
def sweep(A, b, x, order, norms):
    y = x.copy()
    n = A.shape[1]
    for t in range(order.shape[0]):
        i = order[t]
        dot = 0.0
        for j in range(n):
            dot += A[i, j] * y[j]
        coef = (b[i] - dot) / norms[i]
        for j in range(n):
            y[j] += coef * A[i, j]
    return y


@njit(cache=True)
def forward_elimination(H):
    m = H.shape[0]
    C = np.eye(m)
    for k in range(m - 1, 0, -1):
        for r in range(k - 1, -1, -1):
            f = -H[r, k]
            for j in range(m - 1, k - 1, -1):
                C[r, j] += f * C[k, j]
    return C


@njit(cache=True)
def backward_elimination(H):
    m = H.shape[0]
    C = np.eye(m)
    for k in range(1, m - 1):
        for i in range(m - 2, k, -1):
            f = -H[i, k]
            for j in range(k, 0, -1):
                C[i, j] += f * C[k, j]
    C[0, 0] = 0.0
    C[m - 1, m - 1] = 0.0
    return C


AXIS_SNAP = 1e-14
LINE_TOL = 1e-12


@njit(cache=True)
def _axis_ray(grid, f, out, horizontal):
    # Axis-parallel ray at distance f from the first grid line; an interior
    # grid line shares its length equally between both neighbours.
    if f < -LINE_TOL or f > grid + LINE_TOL:
        return
    k = int(round(f))
    if abs(f - k) <= LINE_TOL:
        if k == 0:
            lo, hi, w = 0, 0, 1.0
        elif k == grid:
            lo, hi, w = grid - 1, grid - 1, 1.0
        else:
            lo, hi, w = k - 1, k, 0.5
    else:
        lo = hi = int(math.floor(f))
        w = 1.0
    for strip in range(lo, hi + 1):
        for j in range(grid):
            if horizontal:
                out[strip * grid + j] += w
            else:
                out[j * grid + strip] += w


@njit(cache=True)
def _trace_one(grid, theta, offset, out):
    half = 0.5 * grid
    ux = math.cos(theta)
    uy = math.sin(theta)
    if abs(uy) <= AXIS_SNAP:
        _axis_ray(grid, half - offset * (1.0 if ux > 0 else -1.0), out, True)
        return
    if abs(ux) <= AXIS_SNAP:
        _axis_ray(grid, half - offset * (1.0 if uy > 0 else -1.0), out, False)
        return
    px = -offset * uy
    py = offset * ux

    t1 = (-half - px) / ux
    t2 = (half - px) / ux
    t_lo = min(t1, t2)
    t_hi = max(t1, t2)
    t1 = (-half - py) / uy
    t2 = (half - py) / uy
    t_lo = max(t_lo, min(t1, t2))
    t_hi = min(t_hi, max(t1, t2))
    if not t_hi > t_lo:
        return

    cuts = np.empty(2 * grid + 4)
    cuts[0] = t_lo
    cuts[1] = t_hi
    count = 2
    for g in range(grid + 1):
        line = g - half
        t = (line - px) / ux
        if t > t_lo and t < t_hi:
            cuts[count] = t
            count += 1
        t = (line - py) / uy
        if t > t_lo and t < t_hi:
            cuts[count] = t
            count += 1
    t = np.sort(cuts[:count])
    for s in range(count - 1):
        seg = t[s + 1] - t[s]
        if seg <= 0.0:
            continue
        mid = 0.5 * (t[s] + t[s + 1])
        col = int(math.floor(px + ux * mid + half))
        row = int(math.floor(half - (py + uy * mid)))
        col = min(max(col, 0), grid - 1)
        row = min(max(row, 0), grid - 1)
        out[row * grid + col] += seg


@njit(cache=True)
def trace_rays(grid, thetas, offsets):
    A = np.zeros((thetas.shape[0], grid * grid))
    for r in range(thetas.shape[0]):
        _trace_one(grid, thetas[r], offsets[r], A[r])
    return A
