"""Command-line front end: one subcommand per recipe.

    akltsync <recipe> --config PATH [--output DIR] [--seed U64]
                      [--threads K] [--validate]

Exit codes: 0 success, 2 invalid config, 3 numerical failure (trace or
positivity violation), 4 eigensolver non-convergence. Failures print a
machine-readable JSON error object to stdout. The default output directory
can also be set through the AKLTSYNC_OUTPUT_DIR environment variable.
"""

from __future__ import annotations

import argparse
import json
import sys

from .config import RECIPES, ConfigError, load_config, resource_report
from .lindblad import EngineError, PositivityError, SpectrumError, TraceDriftError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_NONCONVERGENCE = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="akltsync",
        description="Dissipative edge-spin synchronization toolkit")
    sub = parser.add_subparsers(dest="recipe", required=True)
    for name in RECIPES:
        p = sub.add_parser(name, help=f"run the {name} recipe")
        p.add_argument("--config", required=True, help="JSON config path")
        p.add_argument("--output", default=None, help="output directory")
        p.add_argument("--seed", type=int, default=None,
                       help="override the config seed")
        p.add_argument("--threads", type=int, default=None,
                       help="numba thread count for the engine kernels")
        p.add_argument("--validate", action="store_true",
                       help="dry run: schema check and resource estimate only")
    return parser


def _fail(code: int, kind: str, message: str) -> int:
    print(json.dumps({"error": kind, "message": message, "exit_code": code}))
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads is not None:
        import numba
        numba.set_num_threads(max(1, args.threads))
    try:
        cfg = load_config(args.config)
        if cfg.recipe != args.recipe:
            raise ConfigError(
                f"config recipe {cfg.recipe!r} does not match subcommand "
                f"{args.recipe!r}")
        if args.seed is not None:
            cfg.raw["seed"] = int(args.seed)
        if args.output is not None:
            cfg.raw["output_dir"] = args.output
    except ConfigError as exc:
        return _fail(EXIT_CONFIG, "config", str(exc))
    except FileNotFoundError as exc:
        return _fail(EXIT_CONFIG, "config", str(exc))

    if args.validate:
        print(json.dumps(resource_report(cfg), indent=2, sort_keys=True))
        return EXIT_OK

    from .recipes import run_config
    try:
        manifest = run_config(cfg)
    except ConfigError as exc:
        return _fail(EXIT_CONFIG, "config", str(exc))
    except (TraceDriftError, PositivityError) as exc:
        return _fail(EXIT_NUMERICAL, "numerical", str(exc))
    except SpectrumError as exc:
        return _fail(EXIT_NONCONVERGENCE, "non-convergence", str(exc))
    except EngineError as exc:
        return _fail(EXIT_NUMERICAL, "numerical", str(exc))
    print(json.dumps({"status": "ok", "config_hash": manifest["config_hash"],
                      "outputs": [o["path"] for o in manifest["outputs"]],
                      "wall_time_s": manifest["wall_time_s"]}))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
