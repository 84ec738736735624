"""Command-line front end: ``geodesic-minimax verify|solve|oracle``.

Exit codes: 0 success, 1 failed checks, 2 bad config or usage,
3 inner resolvent no-convergence (trace still written), 4 grid too large.

Config (JSON)::

    {
      "problem": "bilinear" | {"family": ..., ...},
      "initial_point": {"x": [...], "y": [...]},
      "schedule": {"kind": "constant", "lam": 1.0},
      "stop": {"max_iter": 10000, "step_tol": 1e-7, "residual_tol": 1e-7},
      "inner_tol": 1e-8,
      "reference": {"x": [...], "y": [...]},
      "cap": 100.0,
      "grid": {"x": {"resolution": 201, "radius": 1.0}, "y": {...}},
      "seed": 0
    }
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

from .errors import ConfigError, GeodesicMinimaxError, GridTooLargeError
from .oracle import grid_minimax, oracle_vs_solver, report_to_json
from .ppa import (DEFAULT_MAX_ITER, DEFAULT_STEP_TOL, Schedule, boundedness_verdict, run_ppa,
                  trace_to_csv)
from .problems import problem_from_config
from .resolvent import DEFAULT_INNER_TOL
from .spaces import GridSpec
from .verify import SUITES, dumps_report, run_suite

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_INNER, EXIT_GRID = 0, 1, 2, 3, 4


def write_atomic(path: Path, text: str) -> None:
    """Write via a temp file in the same directory, then rename over ``path``."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_config(path: str | None) -> dict:
    if path is None:
        raise ConfigError("--config is required for this command")
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    return cfg


def _grid_specs(cfg: dict):
    grid = cfg.get("grid")
    if grid is None:
        return None

    def one(obj):
        if isinstance(obj, int):
            return GridSpec(obj)
        if not isinstance(obj, dict) or "resolution" not in obj:
            raise ConfigError(f"grid descriptor needs a 'resolution': {obj!r}")
        try:
            return GridSpec(int(obj["resolution"]), float(obj.get("radius", 1.0)),
                            tuple(obj["lo"]) if "lo" in obj else None,
                            tuple(obj["hi"]) if "hi" in obj else None)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad grid descriptor: {exc}") from None

    if isinstance(grid, dict) and ("x" in grid or "y" in grid):
        gx = one(grid.get("x", grid.get("y")))
        gy = one(grid.get("y", grid.get("x")))
        return gx, gy
    g = one(grid)
    return g, g


def _number(obj: dict, key: str, default: float) -> float:
    try:
        return float(obj.get(key, default))
    except (TypeError, ValueError):
        raise ConfigError(f"{key} must be a number") from None


def _out_dir(args, cfg: dict | None = None) -> Path:
    if args.out:
        return Path(args.out)
    if cfg and isinstance(cfg.get("output"), dict) and "dir" in cfg["output"]:
        return Path(cfg["output"]["dir"])
    return Path.cwd()


# -- commands -----------------------------------------------------------------


def cmd_verify(args) -> int:
    seed = args.seed
    if args.config:
        cfg = load_config(args.config)
        seed = int(cfg.get("seed", seed)) if args.seed_default else seed
    report = run_suite(args.suite, seed)
    out = _out_dir(args) / f"verify_{args.suite}.json"
    write_atomic(out, dumps_report(report))
    for c in report["checks"]:
        print(f"{'PASS' if c['passed'] else 'FAIL'} {c['name']} worst={c['worst']} tol={c['tol']}")
    print(f"report: {out}")
    return EXIT_OK if report["passed"] else EXIT_FAIL


def cmd_solve(args) -> int:
    cfg = load_config(args.config)
    if "problem" not in cfg:
        raise ConfigError("config needs a 'problem'")
    problem = problem_from_config(cfg["problem"])
    if "initial_point" not in cfg:
        raise ConfigError("config needs an 'initial_point'")
    prod = problem.product
    z1 = prod.point_from_json(cfg["initial_point"])
    reference = prod.point_from_json(cfg["reference"]) if "reference" in cfg else problem.known_saddle
    schedule = Schedule.from_json(cfg.get("schedule"))
    stop = cfg.get("stop", {})
    if not isinstance(stop, dict):
        raise ConfigError("'stop' must be an object")
    residual_tol = stop.get("residual_tol")
    trace = run_ppa(
        problem, z1, schedule,
        max_iter=int(stop.get("max_iter", DEFAULT_MAX_ITER)),
        step_tol=_number(stop, "step_tol", DEFAULT_STEP_TOL),
        residual_tol=None if residual_tol is None else float(residual_tol),
        inner_tol=_number(cfg, "inner_tol", DEFAULT_INNER_TOL),
        reference=reference,
    )
    verdict = boundedness_verdict(problem, trace, cap=_number(cfg, "cap", 100.0),
                                  step_tol=_number(stop, "step_tol", DEFAULT_STEP_TOL))
    summary = {
        "problem": problem.name,
        "schedule": schedule.to_json(),
        "iterations": len(trace.steps),
        "stop_reason": trace.stop_reason,
        "truncated": trace.truncated,
        "converged": trace.converged,
        "verdict": verdict,
        "final_point": prod.point_to_json(trace.final),
        "final_step": trace.steps[-1] if trace.steps else None,
        "final_residual": trace.residuals[-1] if trace.residuals else None,
    }
    grids = _grid_specs(cfg)
    if grids is not None:
        rep = grid_minimax(problem, *grids)
        cmp = oracle_vs_solver(problem, rep, trace)
        summary["oracle"] = {"report": report_to_json(problem, rep), "distance": cmp.distance,
                             "value_difference": cmp.value_difference, "tolerance": cmp.tolerance}
    out = _out_dir(args, cfg)
    write_atomic(out / "trace.csv", trace_to_csv(problem, trace))
    write_atomic(out / "summary.json", json.dumps(summary, sort_keys=True, indent=2) + "\n")
    print(f"{problem.name}: {summary['iterations']} iterations, verdict {verdict}, "
          f"final residual {summary['final_residual']}")
    return EXIT_INNER if trace.truncated else EXIT_OK


def cmd_oracle(args) -> int:
    cfg = load_config(args.config)
    if "problem" not in cfg:
        raise ConfigError("config needs a 'problem'")
    problem = problem_from_config(cfg["problem"])
    grids = _grid_specs(cfg)
    if grids is None:
        raise ConfigError("oracle config needs a 'grid'")
    rep = grid_minimax(problem, *grids)
    data = report_to_json(problem, rep)
    out = _out_dir(args, cfg) / "oracle_report.json"
    write_atomic(out, json.dumps(data, sort_keys=True, indent=2) + "\n")
    print(f"gap {rep.gap!r} (maxmin {rep.maxmin!r}, minmax {rep.minmax!r}, {rep.approximation})")
    print(f"maxmin argpoint {json.dumps(data['maxmin_point'])}")
    print(f"minmax argpoint {json.dumps(data['minmax_point'])}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="geodesic-minimax",
                                     description="Saddle points and the proximal point algorithm on Hadamard spaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON experiment config")
        p.add_argument("--out", help="output directory (default: config output.dir or cwd)")
        p.add_argument("--seed", type=int, default=None, help="random seed (default 0)")

    v = sub.add_parser("verify", help="run invariant suites")
    v.add_argument("--suite", choices=SUITES + ("all",), default="all")
    common(v)
    common(sub.add_parser("solve", help="run the proximal point algorithm from a config"))
    common(sub.add_parser("oracle", help="brute-force grid minimax from a config"))
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.seed_default = args.seed is None
    if args.seed is None:
        args.seed = 0
    handler = {"verify": cmd_verify, "solve": cmd_solve, "oracle": cmd_oracle}[args.command]
    try:
        return handler(args)
    except GridTooLargeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GRID
    except GeodesicMinimaxError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
