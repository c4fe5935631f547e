"""``ktbench``: generate problems, precompute compatible matrices, run solvers.

Exit status is 0 on success, 1 for a bad configuration and 2 when a
solver fails.
"""

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .. import tanabe
from ..exceptions import DegenerateWeightError, DivergenceError, NoConvergence, ZeroRowError
from ..mmio import write_mtx
from ..problems import ScanGeometry, head_phantom
from .experiment import DESK_GEOMETRY, METHODS, ConfigError, RunConfig, load_problem, minimum_norm_solution, run_experiment
from .io import render_pgm

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER = 0, 1, 2
SOLVER_ERRORS = (ZeroRowError, NoConvergence, DivergenceError, DegenerateWeightError, FloatingPointError)


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; that code is reserved for solver errors.
    def error(self, message):
        raise ConfigError("arguments", message)


def _add_problem_flags(p):
    p.add_argument("--problem", default="tanabe", help="tanabe, tomo or file:DIR (default: tanabe)")
    p.add_argument("--angles", type=int, default=DESK_GEOMETRY.n_angles, help="projection angles (tomo)")
    p.add_argument("--rays", type=int, default=DESK_GEOMETRY.n_rays, help="parallel rays per angle (tomo)")
    p.add_argument("--grid", type=int, default=DESK_GEOMETRY.grid, help="image is grid x grid pixels (tomo)")
    p.add_argument("--span", type=float, default=None, help="detector width in pixels (default sqrt(2)*grid)")
    p.add_argument("--full-circle", action="store_true", help="spread angles over [0, 2pi) instead of [0, pi)")
    p.add_argument("--out", required=True, type=Path, help="output directory")


def _add_run_flags(p):
    p.add_argument("--iters", type=int, default=50, help="outer iterations (default 50)")
    p.add_argument("--x0", default="zeros", help="zeros, a literal like 7,6,10,6, or a Matrix Market file")


def build_parser():
    parser = _Parser(prog="ktbench", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("gen", help="write A.mtx, b.mtx, x_star.mtx (and phantom.pgm for tomo)")
    _add_problem_flags(gen)

    pre = sub.add_parser("precompute", help="write the compatible matrices C, Chat and Cbar")
    _add_problem_flags(pre)

    run = sub.add_parser("run", help="run one method")
    _add_problem_flags(run)
    _add_run_flags(run)
    run.add_argument("--method", required=True, choices=METHODS)

    cmp_ = sub.add_parser("compare", help="run several methods, one subdirectory each")
    _add_problem_flags(cmp_)
    _add_run_flags(cmp_)
    cmp_.add_argument("--methods", default="kt,skt,kt2,landweber,cimmino,cav,drop,sart,cgmn",
                      help="comma-separated method list")
    cmp_.add_argument("--jobs", type=int, default=1, help="methods run concurrently")
    return parser


def _geometry(args):
    try:
        return ScanGeometry(args.angles, args.rays, args.grid, args.span, args.full_circle)
    except ValueError as exc:
        raise ConfigError("geometry", str(exc)) from None


def _config(args, method="kt", out=None):
    return RunConfig(
        problem=args.problem,
        method=method,
        iters=getattr(args, "iters", 1),
        x0=getattr(args, "x0", "zeros"),
        output_dir=out if out is not None else args.out,
        geometry=_geometry(args),
    )


def cmd_gen(args):
    cfg = _config(args)
    problem = load_problem(cfg)
    args.out.mkdir(parents=True, exist_ok=True)
    write_mtx(args.out / "A.mtx", problem.A, fmt="coordinate", comment=problem.label)
    write_mtx(args.out / "b.mtx", problem.b)
    if problem.x_star is not None:
        write_mtx(args.out / "x_star.mtx", problem.x_star)
    if problem.metadata.get("geometry") is not None:
        render_pgm(head_phantom(cfg.geometry.grid), args.out / "phantom.pgm")
    print(f"{problem.label}: A is {problem.A.shape[0]}x{problem.A.shape[1]} -> {args.out}")


def cmd_precompute(args):
    problem = load_problem(_config(args))
    A = problem.A
    C, Chat = tanabe.build_C(A), tanabe.build_Chat(A)
    Cbar = tanabe.compose_Cbar(C, Chat, A, 1.0 / np.einsum("ij,ij->i", A, A))
    args.out.mkdir(parents=True, exist_ok=True)
    for name, X in (("C", C), ("Chat", Chat), ("Cbar", Cbar)):
        write_mtx(args.out / f"{name}.mtx", X, comment=f"{name} of {problem.label}")
    print(f"{problem.label}: wrote C, Chat, Cbar ({A.shape[0]}x{A.shape[0]}) -> {args.out}")


def _report(cfg, result):
    last = result.records[-1]
    tail = f" [{result.status}]" if result.status else ""
    print(f"{cfg.method:>12}: k={last.k:<5d} err_xdagger={last.err_xdagger:.6e} "
          f"err_shifted={last.err_shifted:.6e}{tail}")


def cmd_run(args):
    cfg = _config(args, method=args.method)
    _report(cfg, run_experiment(cfg))


def cmd_compare(args):
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    if not methods:
        raise ConfigError("methods", "empty method list")
    if args.jobs < 1:
        raise ConfigError("jobs", "must be at least 1")
    configs = [_config(args, method=m, out=args.out / m) for m in methods]
    base = configs[0]
    problem = load_problem(base)
    # x† is shared, so it is computed (and cached) before the methods fan out.
    x_dagger = minimum_norm_solution(problem, args.out)

    def one(cfg):
        return run_experiment(cfg, problem=problem, x_dagger=x_dagger)

    with ThreadPoolExecutor(max_workers=args.jobs) as pool:
        results = list(pool.map(one, configs))
    index = {}
    for cfg, result in zip(configs, results):
        _report(cfg, result)
        index[cfg.method] = f"{cfg.method}/errors.csv"
    (args.out / "index.json").write_text(json.dumps(index, indent=2) + "\n")


COMMANDS = {"gen": cmd_gen, "precompute": cmd_precompute, "run": cmd_run, "compare": cmd_compare}


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"ktbench: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SOLVER_ERRORS as exc:
        print(f"ktbench: solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
