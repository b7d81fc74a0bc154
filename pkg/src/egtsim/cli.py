"""Command-line front end.

Subcommands:
    validate <file>                  strict scenario validation
    run <file> [--seed N] [--out D]  run a scenario, write artifacts
    preset <name> [--set k=v ...]    run a named preset experiment
    list-presets                     show available presets

Exit codes are disjoint and exhaustive: 0 success, 1 runtime/divergence,
2 invalid scenario or arguments, 3 I/O failure.  EGTSIM_WORKERS caps worker
parallelism (absent = single-threaded); results are identical either way.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__
from . import _kernels
from .errors import EgtsimError, ParameterError
from .presets import list_presets, run_preset
from .scenario import RunManifest, write_json, write_scores_csv, write_svg_chart, write_trajectory_csv
from .scenario import run_scenario, validate_scenario

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_INVALID = 2
EXIT_IO = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="egtsim",
        description="Evolutionary game theory experiments: hawk-dove, IPD, war of attrition.",
    )
    parser.add_argument("--version", action="version", version=f"egtsim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_val = sub.add_parser("validate", help="strictly validate a scenario file")
    p_val.add_argument("file")
    p_val.add_argument("--quiet", action="store_true", help="suppress diagnostics on stdout")

    p_run = sub.add_parser("run", help="run a scenario file and write artifacts")
    p_run.add_argument("file")
    p_run.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    p_run.add_argument("--out", default=None, help="override the output directory")
    p_run.add_argument("--svg", action="store_true", help="also write an SVG chart per trajectory")
    p_run.add_argument("--quiet", action="store_true", help="suppress the run report on stdout")

    p_pre = sub.add_parser("preset", help="run a named preset experiment")
    p_pre.add_argument("name")
    p_pre.add_argument("--set", dest="overrides", action="append", default=[],
                       metavar="KEY=VALUE", help="override a preset parameter")
    p_pre.add_argument("--out", default=None, help="output directory (default: <name>_out)")
    p_pre.add_argument("--svg", action="store_true", help="also write an SVG chart per trajectory")
    p_pre.add_argument("--quiet", action="store_true", help="suppress the run report on stdout")

    sub.add_parser("list-presets", help="list available preset experiments")
    return parser


def _cmd_validate(args) -> int:
    try:
        problems = validate_scenario(args.file)
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    if problems:
        if not args.quiet:
            for problem in problems:
                print(problem)
        return EXIT_INVALID
    if not args.quiet:
        print(f"{args.file}: valid")
    return EXIT_OK


def _cmd_run(args) -> int:
    try:
        manifest = run_scenario(args.file, out_dir=args.out,
                                seed_override=args.seed, svg=args.svg)
    except ParameterError as exc:
        print(f"invalid scenario: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except EgtsimError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    if not args.quiet:
        out = manifest.resolved["output_dir"]
        print(f"wrote {', '.join(manifest.artifacts)} and manifest.json to {out}")
    return EXIT_OK


def _parse_overrides(pairs: list[str]) -> dict:
    overrides = {}
    for pair in pairs:
        if "=" not in pair:
            raise ParameterError(f"--set expects KEY=VALUE, got {pair!r}")
        key, _, value = pair.partition("=")
        overrides[key.strip()] = value.strip()
    return overrides


def _cmd_preset(args) -> int:
    start = time.perf_counter()
    try:
        overrides = _parse_overrides(args.overrides)
        result = run_preset(args.name, overrides)
    except ParameterError as exc:
        print(f"invalid preset invocation: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except EgtsimError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME

    out = Path(args.out if args.out is not None else f"{args.name}_out")
    try:
        out.mkdir(parents=True, exist_ok=True)
        written = []
        for key, traj in sorted(result.trajectories.items()):
            names = result.labels.get(key)
            target = out / f"trajectory_{key}.csv"
            write_trajectory_csv(target, traj, names)
            written.append(target.name)
            if args.svg:
                target = out / f"trajectory_{key}.svg"
                write_svg_chart(target, traj, names)
                written.append(target.name)
        for key, table in sorted(result.tables.items()):
            target = out / f"scores_{key}.csv"
            write_scores_csv(target, table)
            written.append(target.name)
        write_json(out / "summary.json", result.summary)
        written.append("summary.json")
        manifest = RunManifest(
            scenario={"preset": args.name, "overrides": overrides},
            resolved={"preset": args.name, "params": _jsonable(result.parameters),
                      "output_dir": str(out)},
            artifacts=sorted(written),
            duration_seconds=time.perf_counter() - start,
            version=__version__, backend=_kernels.backend_name())
        write_json(out / "manifest.json", manifest.to_json())
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    if not args.quiet:
        print(f"preset {args.name}: wrote {', '.join(sorted(written))} and manifest.json to {out}")
        print(json.dumps(result.summary, indent=2, sort_keys=True))
    return EXIT_OK


def _jsonable(params: dict) -> dict:
    return {k: (list(v) if isinstance(v, (list, tuple)) else v) for k, v in params.items()}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "validate":
        return _cmd_validate(args)
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "preset":
        return _cmd_preset(args)
    if args.command == "list-presets":
        for name in list_presets():
            print(name)
        return EXIT_OK
    return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
