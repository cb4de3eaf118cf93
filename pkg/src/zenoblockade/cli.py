"""Command-line entry point.

    zenoblockade simulate --preset NAME [--out DIR] [--cutoff-a N] [--cutoff-b N]
                          [--dt-per-period N] [--skip-convergence-check]
    zenoblockade simulate --config FILE [same options]
    zenoblockade zeno report --preset NAME | --config FILE [--out DIR]

Exit codes: 0 success, 2 validation error, 3 integrator abort or
truncation-convergence failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .lindblad import IntegratorError
from .presets import preset_names
from .scenario import (
    ConfigError,
    ConvergenceError,
    load_config_file,
    resolve_config,
    run_scenario,
    zeno_report,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICS = 3


def _log(message: str):
    print(f"[zenoblockade] {message}", file=sys.stderr)


def _add_common_options(parser):
    parser.add_argument("--config", type=Path, help="flat key = value config file")
    parser.add_argument(
        "--preset",
        choices=preset_names(),
        help="named scenario preset (config keys override it)",
    )
    parser.add_argument("--out", type=Path, default=None, help="output directory")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zenoblockade",
        description="Quantum Zeno blockade simulator for a driven two-mode cross-Kerr system",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    simulate = sub.add_parser("simulate", help="integrate a scenario and write reports")
    _add_common_options(simulate)
    simulate.add_argument("--cutoff-a", type=int, help="override the optical cutoff")
    simulate.add_argument("--cutoff-b", type=int, help="override the mechanical cutoff")
    simulate.add_argument(
        "--dt-per-period", type=int, help="integration steps per 2 pi / g drive period"
    )
    simulate.add_argument(
        "--skip-convergence-check",
        action="store_true",
        help="skip the cutoff-increment truncation check (quick looks only)",
    )

    zeno = sub.add_parser("zeno", help="invariant-subspace reports")
    zeno_sub = zeno.add_subparsers(dest="zeno_command", required=True)
    report = zeno_sub.add_parser("report", help="write spectrum/partition/torus files")
    _add_common_options(report)

    return parser


def _resolve(args) -> "ScenarioConfig":
    if args.config is None and args.preset is None:
        raise ConfigError("one of --config or --preset is required")
    mapping = {}
    if args.config is not None:
        mapping.update(load_config_file(args.config))
    if args.preset is not None:
        if mapping.get("preset", args.preset) != args.preset:
            raise ConfigError(
                f"--preset {args.preset} conflicts with preset = {mapping['preset']} in the config"
            )
        mapping["preset"] = args.preset
    if getattr(args, "cutoff_a", None) is not None:
        mapping["cutoffs.optical"] = args.cutoff_a
    if getattr(args, "cutoff_b", None) is not None:
        mapping["cutoffs.mechanical"] = args.cutoff_b
    if getattr(args, "dt_per_period", None) is not None:
        mapping["integrator.steps_per_period"] = args.dt_per_period
    if getattr(args, "skip_convergence_check", False):
        mapping["convergence_check"] = False
    return resolve_config(mapping, log=_log)


def _default_out(args, suffix: str) -> Path:
    if args.out is not None:
        return args.out
    stem = args.preset or Path(args.config).stem
    return Path(f"{stem}-{suffix}")


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _resolve(args)
        if args.command == "simulate":
            out = _default_out(args, "out")
            results = run_scenario(cfg, out, log=_log)
            for result in results:
                finals = ", ".join(
                    f"P{n}={p:.4f}" for n, p in enumerate(result.final_probabilities[:3])
                )
                _log(f"{result.label}: {finals}, negativity={result.negativity:.4g}")
            _log(f"outputs written to {out}")
        else:
            out = _default_out(args, "zeno")
            info = zeno_report(cfg, out)
            _log(f"zeno report ({info['n_classes']} classes) written to {out}")
    except ConfigError as exc:
        _log(f"config error: {exc}")
        return EXIT_CONFIG
    except (IntegratorError, ConvergenceError) as exc:
        _log(f"numerical failure: {exc}")
        return EXIT_NUMERICS
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
