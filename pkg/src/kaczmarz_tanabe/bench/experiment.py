"""Run one solver on one problem and record its error curve.

Every outer iteration ``y_k`` is scored against three references: the
test solution ``x*``, the minimum-norm solution ``x†`` and the limit
``x† + P_N x0`` of a row-action method started at ``x0``.
"""

import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .. import rowaction, sirt, tanabe
from ..exceptions import DivergenceError
from ..linalg import as_matrix, min_norm_lsq, project_nullspace
from ..mmio import MatrixMarketError, read_mtx, read_vector, write_mtx
from ..problems import ProblemInstance, ScanGeometry, strip_zero_rows, tanabe_problem, tomo_problem
from .io import ErrorRecord, render_pgm, write_csv

METHODS = (
    "kaczmarz",
    "sym-kaczmarz",
    "kt",
    "skt",
    "kt2",
    "landweber",
    "cimmino",
    "cav",
    "drop",
    "sart",
    "cgmn",
)

DESK_GEOMETRY = ScanGeometry(n_angles=12, n_rays=17, grid=16)


class ConfigError(ValueError):
    """Invalid run configuration; ``field`` names the offending setting."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass(frozen=True)
class RunConfig:
    """One experiment.

    ``problem`` is ``"tanabe"``, ``"tomo"`` (scanned with ``geometry``) or
    ``"file:DIR"`` for a directory holding ``A.mtx``, ``b.mtx`` and
    optionally ``x_star.mtx``. ``x0`` is ``"zeros"``, a comma-separated
    literal such as ``"7,6,10,6"``, a path to a Matrix Market vector, or
    an array.
    """

    problem: str = "tanabe"
    method: str = "kt"
    iters: int = 50
    x0: object = "zeros"
    output_dir: Path | None = None
    geometry: ScanGeometry = DESK_GEOMETRY
    seed: int = 0

    def __post_init__(self):
        if self.method not in METHODS:
            raise ConfigError("method", f"unknown method {self.method!r}; choose from {', '.join(METHODS)}")
        if isinstance(self.iters, bool) or not isinstance(self.iters, (int, np.integer)) or self.iters < 1:
            raise ConfigError("iters", f"must be an integer >= 1, got {self.iters!r}")
        if not (self.problem in ("tanabe", "tomo") or str(self.problem).startswith("file:")):
            raise ConfigError("problem", f"expected tanabe, tomo or file:DIR, got {self.problem!r}")


@dataclass
class ExperimentResult:
    records: list
    x: np.ndarray
    problem: ProblemInstance
    x_dagger: np.ndarray
    status: str | None = None
    artifacts: dict = field(default_factory=dict)


def load_problem(cfg):
    """Build the problem of ``cfg``; all-zero rows of ``A`` are dropped."""
    if cfg.problem == "tanabe":
        problem = tanabe_problem()
    elif cfg.problem == "tomo":
        problem = tomo_problem(cfg.geometry)
    else:
        problem = _read_problem_dir(Path(cfg.problem[len("file:"):]))
    return strip_zero_rows(problem)


def _read_problem_dir(root):
    if not root.is_dir():
        raise ConfigError("problem", f"{root} is not a directory")
    try:
        A = read_mtx(root / "A.mtx")
        b = read_vector(root / "b.mtx")
        x_star = read_vector(root / "x_star.mtx") if (root / "x_star.mtx").exists() else None
    except (OSError, MatrixMarketError) as exc:
        raise ConfigError("problem", str(exc)) from exc
    if b.shape[0] != A.shape[0]:
        raise ConfigError("problem", f"b has {b.shape[0]} entries but A has {A.shape[0]} rows")
    if x_star is not None and x_star.shape[0] != A.shape[1]:
        raise ConfigError("problem", f"x_star has {x_star.shape[0]} entries but A has {A.shape[1]} columns")
    return ProblemInstance(A=A, b=b, x_star=x_star, label=f"file({root.name})")


def parse_x0(value, n):
    if isinstance(value, (np.ndarray, list, tuple)):
        x0 = np.asarray(value, dtype=np.float64).reshape(-1)
    elif value == "zeros":
        x0 = np.zeros(n)
    elif Path(str(value)).is_file():
        try:
            x0 = read_vector(value)
        except (OSError, MatrixMarketError) as exc:
            raise ConfigError("x0", str(exc)) from exc
    else:
        try:
            x0 = np.array([float(t) for t in str(value).split(",")])
        except ValueError:
            raise ConfigError("x0", f"expected zeros, a comma-separated vector or a file, got {value!r}") from None
    if x0.shape[0] != n:
        raise ConfigError("x0", f"has {x0.shape[0]} entries, the problem has {n} unknowns")
    if not np.all(np.isfinite(x0)):
        raise ConfigError("x0", "entries must be finite")
    return x0


def problem_digest(problem):
    h = hashlib.sha256()
    h.update(np.asarray(problem.A.shape, dtype=np.int64).tobytes())
    h.update(np.ascontiguousarray(problem.A).tobytes())
    h.update(np.ascontiguousarray(problem.b).tobytes())
    return h.hexdigest()[:16]


def minimum_norm_solution(problem, cache_dir=None):
    """``x†`` of the problem, cached in ``cache_dir`` keyed by a hash of ``A`` and ``b``."""
    path = None
    if cache_dir is not None:
        path = Path(cache_dir) / f"xdagger-{problem_digest(problem)}.mtx"
        if path.exists():
            return read_vector(path)
    x = min_norm_lsq(problem.A, problem.b, tol=1e-12)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        write_mtx(path, x, comment=f"minimum-norm solution of {problem.label}")
    return x


def _norm(v):
    # hypot rescales internally, so slowly diverging iterates still get a finite norm.
    return math.hypot(*v)


def _stepper(method, A, b):
    """Return ``step(x) -> x`` advancing one outer iteration of ``method``.

    Any precomputation happens here, once.
    """
    if method == "kaczmarz":
        return lambda x: rowaction.kaczmarz_sweep(A, b, x)
    if method == "sym-kaczmarz":
        return lambda x: rowaction.symmetric_sweep(A, b, x)
    if method in ("kt", "kt2"):
        P = tanabe.precompute_kt(A)
        one = lambda x: tanabe.kt_iterate(P, A, b, rowaction.IterationState(x)).x  # noqa: E731
        if method == "kt":
            return one
        return lambda x: one(one(x))
    if method == "skt":
        P = tanabe.precompute_skt(A)
        return lambda x: tanabe.skt_iterate(P, A, b, rowaction.IterationState(x)).x
    v = sirt.build_sirt(A, method)
    return lambda x: sirt.sirt_iterate(v, A, b, rowaction.IterationState(x)).x


def run_experiment(cfg, problem=None, x_dagger=None, write=True):
    """Run ``cfg.iters`` outer iterations and score every iterate.

    Records cover ``k = 0..iters`` (``k = 0`` is ``x0``). For ``kt2`` one
    record step is two ``kt`` iterations. CGMN records its CG iterates
    and may stop early; the returned ``x`` is then its best iterate.

    With ``write`` and an ``output_dir`` the run writes ``errors.csv``,
    ``solution.mtx``, ``summary.json`` and, for tomography, ``recon.pgm``.
    """
    if problem is None:
        problem = load_problem(cfg)
    A = as_matrix(problem.A)
    b = np.asarray(problem.b, dtype=np.float64)
    m, n = A.shape
    x0 = parse_x0(cfg.x0, n)
    out = Path(cfg.output_dir) if cfg.output_dir is not None else None
    if x_dagger is None:
        x_dagger = minimum_norm_solution(problem, out if write else None)
    limit = x_dagger + project_nullspace(A, x0)
    x_star = problem.x_star

    def record(k, y):
        if not np.all(np.isfinite(y)):
            raise DivergenceError(cfg.method, k)
        e_star = _norm(y - x_star) if x_star is not None else math.nan
        return ErrorRecord(k, e_star, _norm(y - x_dagger), _norm(y - limit))

    records = [record(0, x0)]
    status = None
    if cfg.method == "cgmn":
        state = sirt.cgmn_solve(A, b, x0, max_iter=cfg.iters, tol=0.0,
                                callback=lambda k, y: records.append(record(k, y)))
        x, status = state.x, state.status
    else:
        step = _stepper(cfg.method, A, b)
        x = x0
        # Overflow surfaces as DivergenceError from record(), not as a warning.
        with np.errstate(over="ignore", invalid="ignore"):
            for k in range(1, cfg.iters + 1):
                x = step(x)
                records.append(record(k, x))

    result = ExperimentResult(records=records, x=x, problem=problem, x_dagger=x_dagger, status=status)
    if write and out is not None:
        _write_artifacts(cfg, result, out)
    return result


def _write_artifacts(cfg, result, out):
    out.mkdir(parents=True, exist_ok=True)
    art = result.artifacts
    art["errors"] = out / "errors.csv"
    write_csv(result.records, art["errors"])
    art["solution"] = out / "solution.mtx"
    write_mtx(art["solution"], result.x, comment=f"{cfg.method} on {result.problem.label}")
    geometry = result.problem.metadata.get("geometry")
    if geometry is not None:
        art["recon"] = out / "recon.pgm"
        render_pgm(result.x, art["recon"], grid=geometry.grid)
    last = result.records[-1]
    summary = {
        "method": cfg.method,
        "problem": result.problem.label,
        "shape": list(result.problem.A.shape),
        "iters": cfg.iters,
        "records": len(result.records),
        "status": result.status,
        "dropped_rows": result.problem.metadata.get("dropped_rows", []),
        "final": {"k": last.k, "err_xstar": _json_float(last.err_xstar),
                  "err_xdagger": last.err_xdagger, "err_shifted": last.err_shifted},
    }
    art["summary"] = out / "summary.json"
    art["summary"].write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")


def _json_float(v):
    return None if math.isnan(v) else v
