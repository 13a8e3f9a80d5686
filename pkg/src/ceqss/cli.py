"""Command-line front end: ``ceqss {ghz,cd,threshold,accept}``.

Exit codes: 0 success, 1 usage or configuration error, 2 acceptance failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .acceptance import DEFAULT_SEED, Suite
from .adversary import Strategy
from .harness import ConfigError, ExperimentConfig, run_experiment
from .report import FORMATS, emit_report

EXIT_OK, EXIT_USAGE, EXIT_ACCEPTANCE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _id_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ceqss", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    shared = _Parser(add_help=False)
    shared.add_argument("--config", type=Path, help="JSON file with ExperimentConfig fields")
    shared.add_argument("--n", type=int)
    shared.add_argument("--m", type=int)
    shared.add_argument("--d", type=int, help="qudit radix (cd) or prime modulus (threshold)")
    shared.add_argument("--t", type=int)
    shared.add_argument("--missing", type=int)
    shared.add_argument("--cheaters", type=_id_list, help="comma-separated party ids")
    shared.add_argument("--strategy", default=Strategy.MEASURE_EARLY.value,
                        choices=[s.value for s in Strategy], help="behaviour of --cheaters")
    shared.add_argument("--responders", type=_id_list, help="threshold revocation responders")
    shared.add_argument("--trials", type=int)
    shared.add_argument("--seed", type=int)
    shared.add_argument("--format", choices=FORMATS, default="json")
    shared.add_argument("--out", type=Path)
    shared.add_argument("--workers", type=int, default=1)
    shared.add_argument("--timing", action="store_true", help="include wall-clock time in json output")

    for scheme in ("ghz", "cd", "threshold"):
        sub.add_parser(scheme, parents=[shared], help=f"run a {scheme} experiment")

    acc = sub.add_parser("accept", help="run the acceptance criteria")
    acc.add_argument("--seed", type=int, default=DEFAULT_SEED)
    acc.add_argument("--only", type=_id_list, help="criterion numbers to run")
    acc.add_argument("--scale", type=float, default=1.0, help="multiply trial counts (smoke runs)")
    acc.add_argument("--out", type=Path, help="write the machine-readable summary here")
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    data: dict = {}
    if args.config is not None:
        try:
            data = json.loads(args.config.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError("config", str(exc)) from None
        if not isinstance(data, dict):
            raise ConfigError("config", "top level must be an object")
    if data.get("scheme", args.command) != args.command:
        raise ConfigError("scheme", f"config says {data['scheme']!r} but subcommand is {args.command!r}")
    data["scheme"] = args.command
    cfg = ExperimentConfig.from_dict(data)
    for name in ("n", "m", "d", "t", "missing", "trials", "seed", "responders"):
        value = getattr(args, name)
        if value is not None:
            setattr(cfg, name, value)
    if args.out is not None:
        cfg.out = str(args.out)
    if args.cheaters:
        strategy = Strategy.parse(args.strategy)
        cfg.strategies = {**cfg.strategies, **{p: strategy for p in args.cheaters}}
    return cfg.validate()


def _write(data: bytes, out: Optional[str]) -> None:
    if out:
        Path(out).write_bytes(data)
    else:
        sys.stdout.write(data.decode())


def _run_accept(args) -> int:
    suite = Suite(seed=args.seed, scale=args.scale)
    results = suite.run_all(args.only)
    for r in results:
        print(r.line())
    failed = [r.number for r in results if not r.passed]
    summary = {"seed": args.seed, "passed": not failed, "failed": failed,
               "criteria": [{"number": r.number, "title": r.title, "passed": r.passed, "checks": r.checks}
                            for r in results]}
    if args.out:
        args.out.write_text(json.dumps(summary, indent=2) + "\n")
    print(json.dumps({"passed": not failed, "failed": failed}))
    return EXIT_ACCEPTANCE if failed else EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "accept":
            if args.only and set(args.only) - set(Suite.CRITERIA):
                raise UsageError(f"unknown criterion in --only: {args.only}")
            return _run_accept(args)
        cfg = config_from_args(args)
        report = run_experiment(cfg, workers=args.workers)
        _write(emit_report(report, args.format, timing=args.timing), cfg.out)
        return EXIT_OK
    except (UsageError, ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
