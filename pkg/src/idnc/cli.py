"""Command line entry point: ``idnc {simulate,sweep,verify,graph}``.

Exit codes: 0 ok, 1 verification failure, 2 bad configuration.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from pathlib import Path

from .channel import ERASURE_MODES
from .graph import build_graph
from .harness import (
    AXES,
    PRESETS,
    ConfigError,
    ExperimentConfig,
    emit_csv,
    initial_state,
    run_episode,
    run_episodes,
    summarize,
    sweep,
    write_manifest,
)
from .model import ScenarioError
from .plotting import emit_svg_plot
from .policy import POLICIES

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG = 0, 1, 2


def _config(args: argparse.Namespace) -> ExperimentConfig:
    config = ExperimentConfig.load(args.config) if args.config else PRESETS[args.preset]
    overrides = {}
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = args.seed
    if getattr(args, "iterations", None) is not None:
        overrides["iterations"] = args.iterations
    if getattr(args, "erasure_mode", None) is not None:
        overrides["erasure_mode"] = args.erasure_mode
    if getattr(args, "policy", None):
        overrides["policies"] = tuple(args.policy)
    return ExperimentConfig.from_dict({**config.to_dict(), **overrides}) if overrides else config


def _add_config_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="experiment config JSON")
    p.add_argument("--preset", choices=sorted(PRESETS), default="small",
                   help="named config used when --config is absent (default: small)")
    p.add_argument("--seed", type=int)
    p.add_argument("--iterations", type=int)
    p.add_argument("--erasure-mode", choices=ERASURE_MODES)


def cmd_simulate(args: argparse.Namespace) -> int:
    config = _config(args)
    for policy in config.policies:
        if args.trace:
            record = run_episode(config, policy, args.episode, trace=True)
            print(json.dumps(asdict(record)))
            continue
        s = summarize(policy, run_episodes(config, policy))
        print(
            f"{policy}: delivery {s.mean_delivery:.2f} +/- {s.ci_delivery:.2f}, "
            f"completion {s.mean_completion:.2f} +/- {s.ci_completion:.2f}, "
            f"episodes {s.episodes}, truncated {s.truncated}"
        )
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    config = _config(args)
    cast = float if args.axis == "P" else int
    values = [cast(v) for v in args.values]
    rows = sweep(config, args.axis, values)
    out = args.out
    out.mkdir(parents=True, exist_ok=True)
    stem = f"sweep_{args.axis}"
    emit_csv(rows, out / f"{stem}.csv")
    emit_svg_plot(rows, out / f"{stem}_delivery.svg", "mean_delivery")
    emit_svg_plot(rows, out / f"{stem}_completion.svg", "mean_completion")
    write_manifest(out / f"{stem}_manifest.json", config, axis=args.axis, values=values)
    print(f"wrote {len(rows)} rows to {out / f'{stem}.csv'}")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    from .verify import run_all

    checks = run_all()
    for c in checks:
        print(c.line())
    return EXIT_OK if all(c.passed for c in checks) else EXIT_VERIFY


def cmd_graph(args: argparse.Namespace) -> int:
    config = _config(args)
    graph = build_graph(initial_state(config, args.episode))
    text = graph.to_dot()
    if args.dot:
        args.dot.write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="idnc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run episodes for one or more policies")
    _add_config_args(p)
    p.add_argument("--policy", action="append", choices=sorted(POLICIES),
                   help="policy to run (repeatable; default: the config's list)")
    p.add_argument("--trace", action="store_true", help="print one episode as JSON with its per-slot trace")
    p.add_argument("--episode", type=int, default=0, help="episode index for --trace")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="Monte Carlo sweep over U, M or P")
    _add_config_args(p)
    p.add_argument("--policy", action="append", choices=sorted(POLICIES))
    p.add_argument("--axis", choices=AXES, required=True)
    p.add_argument("--values", nargs="+", required=True)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the built-in correctness checks")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("graph", help="dump the IDNC graph of a starting state as DOT")
    _add_config_args(p)
    p.add_argument("--episode", type=int, default=0)
    p.add_argument("--dot", type=Path)
    p.set_defaults(func=cmd_graph)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ScenarioError, ValueError) as exc:
        print(f"idnc: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
