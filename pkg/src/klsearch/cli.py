"""Command line interface.

Two subcommands:

  bench  run the repeated-trial protocol over algorithms x functions and
         write a csv/json/md report (optionally plus a summary figure)
  grid   sample a function surface on a square grid and write x1,x2,f rows
         (optionally plus a rendered 3-d surface figure)

All flags can also come from a simple `key = value` config file; flags on
the command line win.  Exit codes: 0 success, 2 configuration error,
1 output I/O error.
"""

from __future__ import annotations

import argparse
import sys

from .harness import (
    ALGORITHMS,
    DEFAULT_BUDGET,
    FORMATS,
    FUNCTIONS,
    RunConfig,
    emit_report,
    grid_csv,
    known_param_keys,
    run_trials,
    surface_grid,
)


class ConfigError(Exception):
    pass


def _parse_params(items) -> dict:
    params = {}
    known = known_param_keys()
    for item in items or ():
        if "=" not in item:
            raise ConfigError(f"--param expects key=value, got {item!r}")
        key, value = item.split("=", 1)
        key = key.strip()
        if key not in known:
            raise ConfigError(
                f"unknown parameter {key!r} (known: {', '.join(sorted(known))})"
            )
        params[key] = value.strip()
    return params


def read_config_file(path: str) -> dict:
    """Parse `key = value` lines; blank lines and #-comments are skipped."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value, got {line!r}")
            key, value = line.split("=", 1)
            values[key.strip()] = value.strip()
    return values


_BENCH_FILE_KEYS = ("algo", "func", "trials", "seed", "budget", "format", "out", "plot", "params")


def _apply_config_file(args: argparse.Namespace) -> None:
    if not getattr(args, "config", None):
        return
    values = read_config_file(args.config)
    unknown = set(values) - set(_BENCH_FILE_KEYS)
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(sorted(unknown))}")
    defaults = _BENCH_DEFAULTS
    for key in ("algo", "func", "format", "out", "plot"):
        if key in values and getattr(args, key) == defaults.get(key):
            setattr(args, key, values[key])
    for key in ("trials", "seed", "budget"):
        if key in values and getattr(args, key) == defaults.get(key):
            try:
                setattr(args, key, int(values[key]))
            except ValueError:
                raise ConfigError(f"config key {key} must be an integer, got {values[key]!r}")
    if "params" in values:
        # comma-separated key=value pairs; command-line --param wins per key
        file_params = _parse_params([p for p in values["params"].split(",") if p.strip()])
        file_params.update(args.params)
        args.params = file_params


_BENCH_DEFAULTS = {
    "algo": "all",
    "func": "all",
    "trials": 50,
    "seed": 0,
    "budget": DEFAULT_BUDGET,
    "format": "csv",
    "out": None,
    "plot": None,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="klsearch",
        description="Benchmark local search metaheuristics on the classic bit-coded test functions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    bench = sub.add_parser("bench", help="run the repeated-trial benchmark protocol")
    bench.add_argument("--algo", default="all",
                       help=f"algorithm id or 'all' ({', '.join(ALGORITHMS)})")
    bench.add_argument("--func", default="all",
                       help=f"objective id or 'all' ({', '.join(FUNCTIONS)})")
    bench.add_argument("--trials", type=int, default=50, help="runs per (algo, func) cell")
    bench.add_argument("--seed", type=int, default=0, help="master seed")
    bench.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                       help="evaluation cap per trial")
    bench.add_argument("--format", default="csv", choices=FORMATS)
    bench.add_argument("--out", default=None, help="output path (default: stdout)")
    bench.add_argument("--plot", default=None, help="also render a summary figure to this path")
    bench.add_argument("--param", action="append", dest="params", default=[],
                       metavar="K=V", help="algorithm parameter override, repeatable")
    bench.add_argument("--config", default=None, help="key = value config file")

    grid = sub.add_parser("grid", help="sample a function surface")
    grid.add_argument("--func", required=True, help=f"objective id ({', '.join(FUNCTIONS)})")
    grid.add_argument("--res", type=int, default=65, help="grid resolution per axis")
    grid.add_argument("--out", default=None, help="output path (default: stdout)")
    grid.add_argument("--plot", default=None, help="also render the surface to this path")
    return parser


def _resolve(value: str, universe, what: str) -> list[str]:
    if value == "all":
        return list(universe)
    if value not in universe:
        raise ConfigError(f"unknown {what} {value!r} (known: {', '.join(universe)}, or 'all')")
    return [value]


def _write(text: str, path) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_bench(args) -> int:
    args.params = _parse_params(args.params)
    _apply_config_file(args)
    algos = _resolve(args.algo, ALGORITHMS, "algorithm")
    funcs = _resolve(args.func, FUNCTIONS, "objective")
    stats, records = {}, {}
    for func in funcs:
        for algo in algos:
            config = RunConfig(
                algorithm=algo,
                objective=func,
                trials=args.trials,
                master_seed=args.seed,
                budget=args.budget,
                params=args.params,
            )
            cell_stats, cell_records = run_trials(config)
            stats[(algo, func)] = cell_stats
            records[(algo, func)] = cell_records
    report = emit_report(stats, args.format, records=records, master_seed=args.seed)
    _write(report, args.out)
    if args.plot:
        from .plotting import save_benchmark_figure

        save_benchmark_figure(stats, args.plot)
    return 0


def cmd_grid(args) -> int:
    if args.func not in FUNCTIONS:
        raise ConfigError(f"unknown objective {args.func!r} (known: {', '.join(FUNCTIONS)})")
    if args.res < 2:
        raise ConfigError("--res must be at least 2")
    grid = surface_grid(args.func, args.res)
    _write(grid_csv(grid), args.out)
    if args.plot:
        from .plotting import save_surface_figure

        save_surface_figure(grid, args.func, args.res, args.plot)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "bench":
            return cmd_bench(args)
        return cmd_grid(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
