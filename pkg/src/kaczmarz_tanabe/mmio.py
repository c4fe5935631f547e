"""Matrix Market reader/writer for dense real matrices and vectors.

Only the ``real``/``integer`` fields with ``general`` or ``symmetric``
symmetry are handled. Values are written with 17 significant digits so a
write/read cycle reproduces every ``float64`` exactly.
"""

from pathlib import Path

import numpy as np

_BANNER = "%%MatrixMarket"


class MatrixMarketError(ValueError):
    pass


def write_mtx(path, data, fmt="array", comment=None):
    """Write a matrix (2-D) or vector (1-D, stored as ``n x 1``)."""
    data = np.asarray(data, dtype=np.float64)
    if data.ndim == 1:
        data = data[:, np.newaxis]
    if data.ndim != 2:
        raise ValueError("only 1-D and 2-D arrays can be written")
    if not np.all(np.isfinite(data)):
        raise ValueError("refusing to write non-finite values")
    rows, cols = data.shape
    lines = [f"{_BANNER} matrix {fmt} real general"]
    if comment:
        lines.extend(f"% {line}" for line in str(comment).splitlines())
    if fmt == "array":
        lines.append(f"{rows} {cols}")
        lines.extend(format(v, ".17g") for v in data.ravel(order="F"))
    elif fmt == "coordinate":
        r, c = np.nonzero(data)
        order = np.lexsort((r, c))
        r, c = r[order], c[order]
        lines.append(f"{rows} {cols} {len(r)}")
        lines.extend(f"{i + 1} {j + 1} {data[i, j]:.17g}" for i, j in zip(r, c))
    else:
        raise ValueError(f"unknown Matrix Market format {fmt!r}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_mtx(path):
    """Read a Matrix Market file into a dense 2-D ``float64`` array."""
    with open(path) as fh:
        text = fh.read().splitlines()
    if not text or not text[0].startswith(_BANNER):
        raise MatrixMarketError(f"{path}:1: missing {_BANNER} banner")
    header = text[0].split()
    if len(header) != 5 or header[1].lower() != "matrix":
        raise MatrixMarketError(f"{path}:1: malformed banner {text[0]!r}")
    fmt, field, symmetry = (h.lower() for h in header[2:])
    if field not in ("real", "integer", "double"):
        raise MatrixMarketError(f"{path}:1: unsupported field {field!r}")
    if symmetry not in ("general", "symmetric"):
        raise MatrixMarketError(f"{path}:1: unsupported symmetry {symmetry!r}")

    body = [(no, line) for no, line in enumerate(text[1:], start=2)
            if line.strip() and not line.lstrip().startswith("%")]
    if not body:
        raise MatrixMarketError(f"{path}: missing size line")
    size_no, size_line = body[0]
    try:
        dims = [int(tok) for tok in size_line.split()]
    except ValueError:
        raise MatrixMarketError(f"{path}:{size_no}: bad size line {size_line!r}") from None
    entries = body[1:]

    def number(no, tok):
        try:
            v = float(tok)
        except ValueError:
            raise MatrixMarketError(f"{path}:{no}: bad value {tok!r}") from None
        if not np.isfinite(v):
            raise MatrixMarketError(f"{path}:{no}: non-finite value {tok!r}")
        return v

    if fmt == "array":
        if len(dims) != 2:
            raise MatrixMarketError(f"{path}:{size_no}: array size line needs 2 integers")
        rows, cols = dims
        values = [number(no, line.split()[0]) for no, line in entries]
        if symmetry == "general":
            if len(values) != rows * cols:
                raise MatrixMarketError(
                    f"{path}: expected {rows * cols} values, found {len(values)}")
            return np.array(values).reshape((rows, cols), order="F")
        out = np.zeros((rows, cols))
        it = iter(values)
        try:
            for j in range(cols):
                for i in range(j, rows):
                    out[i, j] = out[j, i] = next(it)
        except StopIteration:
            raise MatrixMarketError(f"{path}: too few values for symmetric array") from None
        return out

    if fmt == "coordinate":
        if len(dims) != 3:
            raise MatrixMarketError(f"{path}:{size_no}: coordinate size line needs 3 integers")
        rows, cols, nnz = dims
        if len(entries) != nnz:
            raise MatrixMarketError(f"{path}: expected {nnz} entries, found {len(entries)}")
        out = np.zeros((rows, cols))
        for no, line in entries:
            toks = line.split()
            if len(toks) < 3:
                raise MatrixMarketError(f"{path}:{no}: expected 'row col value'")
            try:
                i, j = int(toks[0]) - 1, int(toks[1]) - 1
            except ValueError:
                raise MatrixMarketError(f"{path}:{no}: bad index in {line.strip()!r}") from None
            if not (0 <= i < rows and 0 <= j < cols):
                raise MatrixMarketError(f"{path}:{no}: index ({i + 1}, {j + 1}) out of range")
            v = number(no, toks[2])
            out[i, j] += v
            if symmetry == "symmetric" and i != j:
                out[j, i] += v
        return out

    raise MatrixMarketError(f"{path}:1: unknown format {fmt!r}")


def read_vector(path):
    data = read_mtx(path)
    if 1 not in data.shape:
        raise MatrixMarketError(f"{path}: expected a vector, got shape {data.shape}")
    return data.reshape(-1)


def read_comment(path):
    """The ``%`` comment lines after the banner, joined with newlines."""
    out = []
    with open(path) as fh:
        next(fh, None)
        for line in fh:
            if not line.startswith("%"):
                break
            out.append(line[1:].strip())
    return "\n".join(out)
