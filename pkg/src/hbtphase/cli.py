"""Command-line front end.

Usage::

    hbtphase sweep-phi --degrees --steps 64 --out phi.csv
    hbtphase sweep-baseline --config run.cfg --oracle --nmax 6
    hbtphase entanglement-sweep --set "orbital_psi = 1, 1"
    hbtphase three-slit --out triangle.csv
    hbtphase selfcheck --no-oracle

Exit codes: 0 success, 1 configuration error, 2 numerical-check failure or
degenerate setup, 3 oracle capacity exceeded.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from .config import FIELD_DOCS, ConfigError, dump_config, load_config
from .errors import CapacityError, DegenerateError
from .selfcheck import FAULTS, run_selfcheck
from .sweeps import run_sweep, to_csv

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_CAPACITY = 0, 1, 2, 3

SUBCOMMANDS = {
    "sweep-phi": ("two-detector", "phi34", "coincidence C versus analyser angle phi34"),
    "sweep-baseline": ("two-detector", "detector_separation", "coincidence C versus detector separation d_D"),
    "entanglement-sweep": ("entanglement", "omega", "reduced-state entropy versus geometric phase"),
    "three-slit": ("three-slit", "rotation", "normalised triple coincidence versus rotation of analyser C"),
}


def _config_epilog() -> str:
    width = max(map(len, FIELD_DOCS))
    keys = "\n".join(f"  {k.ljust(width)}  {v}" for k, v in FIELD_DOCS.items())
    return "config keys (file lines or --set KEY=VALUE):\n" + keys


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hbtphase",
        description="Geometric phases in thermal-light intensity interferometry.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, (_, _, help_text) in SUBCOMMANDS.items():
        p = sub.add_parser(name, help=help_text, epilog=_config_epilog(),
                           formatter_class=argparse.RawDescriptionHelpFormatter)
        p.add_argument("--config", metavar="PATH", help="flat key = value configuration file")
        p.add_argument("--out", metavar="PATH", help="output CSV (config echo goes to PATH.config)")
        p.add_argument("--oracle", action=argparse.BooleanOptionalAction, default=None,
                       help="cross-check every row against the truncated-Fock oracle")
        p.add_argument("--nmax", type=int, help="oracle photon-number cutoff per mode")
        p.add_argument("--degrees", action="store_true", default=None,
                       help="angles in the config and sweep range are in degrees")
        p.add_argument("--steps", type=int, metavar="N",
                       help="split [sweep_start, sweep_stop) into N equal steps")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override one config key (repeatable)")

    p = sub.add_parser("selfcheck", help="run the invariant suite")
    p.add_argument("--oracle", action=argparse.BooleanOptionalAction, default=True,
                   help="include the truncated-Fock oracle check")
    p.add_argument("--inject-fault", choices=FAULTS, help=argparse.SUPPRESS)
    return parser


def _sweep_config(args: argparse.Namespace):
    experiment, sweep, _ = SUBCOMMANDS[args.command]
    flags = {"experiment": experiment, "sweep": sweep}
    if args.out is not None:
        flags["out"] = args.out
    if args.oracle is not None:
        flags["oracle"] = args.oracle
    if args.nmax is not None:
        flags["nmax"] = args.nmax
    if args.degrees:
        flags["degrees"] = True
    # command-line flags take precedence over the file
    overrides = list(args.set) + [f"{k} = {v}" for k, v in flags.items()]
    config = load_config(args.config, overrides)
    if args.steps is not None:
        if args.steps < 1:
            raise ConfigError("--steps: must be >= 1")
        step = (config.sweep_stop - config.sweep_start) / args.steps
        config = dataclasses.replace(config, sweep_step=step)
    return config


def _run_sweep_command(args: argparse.Namespace) -> int:
    config = _sweep_config(args)
    result = run_sweep(config)
    out = Path(config.out)
    out.write_text(to_csv(result), encoding="utf-8")
    Path(f"{out}.config").write_text(dump_config(config), encoding="utf-8")
    print(f"wrote {len(result.rows)} rows to {out}")
    failures = result.failures
    for msg in failures:
        print(f"check failed: {msg}", file=sys.stderr)
    return EXIT_NUMERIC if failures else EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "selfcheck":
        report = run_selfcheck(oracle=args.oracle, inject_fault=args.inject_fault, echo=print)
        counts = {s: sum(o.status == s for o in report.outcomes) for s in ("pass", "fail", "skip")}
        print(f"{counts['pass']} passed, {counts['fail']} failed, {counts['skip']} skipped")
        return EXIT_OK if report.passed else EXIT_NUMERIC
    try:
        return _run_sweep_command(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (DegenerateError, ArithmeticError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
