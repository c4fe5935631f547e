"""Result files: error-curve CSVs and 8-bit PGM images."""

import csv
import math
from pathlib import Path
from typing import NamedTuple

import numpy as np

CSV_HEADER = ("k", "err_xstar", "err_xdagger", "err_shifted")


class ErrorRecord(NamedTuple):
    """Errors of the iterate ``y_k`` against ``x*``, ``x†`` and ``x† + P_N x0``."""

    k: int
    err_xstar: float
    err_xdagger: float
    err_shifted: float


def _fmt(v):
    # 17 significant digits round-trip every float64; nan marks a missing x*.
    return "nan" if math.isnan(v) else format(v, ".17g")


def write_csv(records, path):
    """Write records under the header ``k,err_xstar,err_xdagger,err_shifted``."""
    lines = [",".join(CSV_HEADER)]
    for r in records:
        lines.append(f"{int(r.k)},{_fmt(r.err_xstar)},{_fmt(r.err_xdagger)},{_fmt(r.err_shifted)}")
    # newline="" keeps the bytes identical across platforms.
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or tuple(rows[0]) != CSV_HEADER:
        raise ValueError(f"{path}: expected header {','.join(CSV_HEADER)}")
    out = []
    for no, row in enumerate(rows[1:], start=2):
        if len(row) != 4:
            raise ValueError(f"{path}:{no}: expected 4 fields, got {len(row)}")
        out.append(ErrorRecord(int(row[0]), float(row[1]), float(row[2]), float(row[3])))
    return out


def to_bytes(pixels):
    """Map an image linearly from ``[min, max]`` to ``0..255``; constant -> 128."""
    pixels = np.asarray(pixels, dtype=np.float64)
    if not np.all(np.isfinite(pixels)):
        raise ValueError("cannot render non-finite pixels")
    lo, hi = float(pixels.min()), float(pixels.max())
    if not lo < hi:
        return np.full(pixels.shape, 128, dtype=np.uint8)
    scaled = np.rint((pixels - lo) * (255.0 / (hi - lo)))
    return np.clip(scaled, 0, 255).astype(np.uint8)


def render_pgm(img, path, grid=None):
    """Write a binary (P5) PGM, row-major from the top row down.

    ``img`` is either a :class:`~kaczmarz_tanabe.problems.PhantomImage` or
    a flat vector together with ``grid``.
    """
    if grid is None:
        grid, pixels = img.grid, img.pixels
    else:
        pixels = img
    pixels = np.asarray(pixels, dtype=np.float64).reshape(-1)
    if pixels.size != grid * grid:
        raise ValueError(f"{pixels.size} pixels do not fill a {grid}x{grid} image")
    data = to_bytes(pixels)
    Path(path).write_bytes(f"P5\n{grid} {grid}\n255\n".encode("ascii") + data.tobytes())


def read_pgm(path):
    """Read a P5 PGM written by :func:`render_pgm` into a ``uint8`` array."""
    raw = Path(path).read_bytes()
    parts = raw.split(maxsplit=4)
    if len(parts) < 4 or parts[0] != b"P5":
        raise ValueError(f"{path}: not a binary PGM")
    w, h, maxval = int(parts[1]), int(parts[2]), int(parts[3])
    if maxval != 255:
        raise ValueError(f"{path}: only maxval 255 is supported")
    body = raw[len(raw) - w * h:]
    return np.frombuffer(body, dtype=np.uint8).reshape(h, w)
