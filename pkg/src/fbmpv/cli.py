"""Command-line front end.

Subcommands: sample, pv, localtime, hilbert, qcov, verify.  Every stochastic
command is driven by a YAML config (--config) with optional --seed / --out /
--threads overrides; --threads affects speed only, never results.

Exit codes: 0 success, 2 configuration error, 3 verification failure,
4 budget exceeded.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import ExperimentConfig, load_config
from .errors import ConfigError, FbmpvError
from .harness import (EXIT_BUDGET, EXIT_CONFIG, EXIT_OK, EXIT_VERIFY, cmd_hilbert,
                      cmd_localtime, cmd_pv, cmd_qcov, cmd_sample, cmd_verify)


def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--config", type=str, default=None, help="YAML config file")
    sp.add_argument("--seed", type=int, default=None, help="override master_seed")
    sp.add_argument("--out", type=str, default=None, help="override output directory")
    sp.add_argument("--threads", type=int, default=None,
                    help="worker threads (speed only, never results)")


def _load(args) -> ExperimentConfig:
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    overrides = {}
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    if args.out is not None:
        overrides["out_dir"] = args.out
    if getattr(args, "threads", None) is not None:
        overrides["threads"] = args.threads
    return cfg.replace(**overrides) if overrides else cfg


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="fbmpv",
        description="Principal-value functionals of fractional Brownian motion",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    for name, descr in (
        ("sample", "write sample paths as CSV plus a seed manifest"),
        ("pv", "estimate the functional per level and route"),
        ("localtime", "write local-time fields (CSV + JSON sidecar)"),
        ("qcov", "small-lag covariation ensembles (requires h < 0.5)"),
    ):
        sp = sub.add_parser(name, help=descr)
        _add_common(sp)

    sp = sub.add_parser("hilbert", help="Hilbert transform of a sampled CSV function")
    sp.add_argument("--in", dest="input_csv", type=str, default=None,
                    help="input CSV with header x,value (default: demo Lorentzian)")
    sp.add_argument("--out", dest="output_csv", type=str, required=True,
                    help="output CSV path")
    sp.add_argument("--engine", choices=("auto", "reference", "fft"), default="auto")

    sp = sub.add_parser("verify", help="run a verification suite")
    sp.add_argument("--suite", choices=("bounds", "identities", "all"),
                    default="all")
    _add_common(sp)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "hilbert":
            info = cmd_hilbert(args.input_csv, args.output_csv, engine=args.engine)
            print(f"wrote {info['output']} ({info['nodes']} nodes)")
            return EXIT_OK

        cfg = _load(args)
        if args.command == "sample":
            rec = cmd_sample(cfg)
        elif args.command == "pv":
            rec = cmd_pv(cfg)
        elif args.command == "localtime":
            rec = cmd_localtime(cfg)
        elif args.command == "qcov":
            rec = cmd_qcov(cfg)
        elif args.command == "verify":
            rec, code = cmd_verify(args.suite, cfg)
            out = Path(cfg.out_dir)
            out.mkdir(parents=True, exist_ok=True)
            rec.write(out / f"verify_{args.suite}_record.json")
            for c in rec.checks:
                print(f"[{'PASS' if c.get('passed') else 'FAIL'}] {c.get('name')}")
            if code == EXIT_BUDGET:
                print("budget exceeded before all checks ran", file=sys.stderr)
            return code
        else:  # pragma: no cover
            raise ConfigError(f"unknown command {args.command!r}")

        out = Path(cfg.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        rec_path = out / f"{args.command}_record.json"
        rec.write(rec_path)
        print(f"wrote {rec_path}")
        return EXIT_OK
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FbmpvError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
