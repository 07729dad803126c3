"""Command-line interface.

Verbs: simulate a scenario end to end, analyze an existing trajectory
CSV, classify a declared context, gate a context against detected events,
and sweep a randomized scenario over many seeds. Exit codes: 0 on
success, 2 on validation failure, 1 on runtime error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .behaviors import behavior_specs_from_json, evaluate_behavior, read_events_jsonl
from .core import ConfigError, ContextDescriptor, TrajectoryLog
from .emergence import classify_emergence
from .gate import evaluate_swarm_gate, format_checklist_table
from .markers import compute_marker_series
from .scenarios import (OutputOptions, Scenario, builtin_context_names,
                        builtin_scenario_names, load_builtin_context,
                        load_builtin_scenario, run_scenario, sweep,
                        write_analysis_outputs)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_VALIDATION = 2


def _load_scenario(arg: str) -> Scenario:
    path = Path(arg)
    if path.is_file():
        return Scenario.from_json(path)
    name = arg.removesuffix(".json")
    if name in builtin_scenario_names():
        return load_builtin_scenario(name)
    raise ConfigError(
        f"{arg!r} is neither a scenario file nor a built-in scenario; "
        f"built-ins: {builtin_scenario_names()}")


def _load_context(arg: str) -> ContextDescriptor:
    path = Path(arg)
    if path.is_file():
        return ContextDescriptor.from_json(path)
    name = arg.removesuffix(".json")
    if name in builtin_context_names():
        return load_builtin_context(name)
    raise ConfigError(
        f"{arg!r} is neither a context file nor a built-in context; "
        f"built-ins: {builtin_context_names()}")


def _parse_seeds(spec: str) -> list[int]:
    """Parse `a..b` (inclusive) or a comma-separated list of seeds."""
    spec = spec.strip()
    if ".." in spec:
        lo, hi = spec.split("..", 1)
        a, b = int(lo), int(hi)
        if b < a:
            raise ConfigError(f"empty seed range {spec!r}")
        return list(range(a, b + 1))
    return [int(s) for s in spec.split(",") if s.strip()]


def _cmd_simulate(args: argparse.Namespace) -> int:
    scenario = _load_scenario(args.scenario)
    report = run_scenario(scenario, output_dir=args.output_dir,
                          plot_data=True if args.plot_data else None)
    print("\n".join(report.summary_lines()))
    return EXIT_OK


def _cmd_analyze(args: argparse.Namespace) -> int:
    log = TrajectoryLog.from_csv(args.trajectory)
    specs = behavior_specs_from_json(args.behaviors)
    series = compute_marker_series(log)
    verdicts = [evaluate_behavior(spec, series) for spec in specs]
    out = Path(args.output_dir) if args.output_dir else Path(args.trajectory).parent
    out.mkdir(parents=True, exist_ok=True)
    options = OutputOptions(directory=str(out), figures=not args.no_figures)
    paths = write_analysis_outputs(out, series, verdicts, options, log=log,
                                   plot_data=bool(args.plot_data))
    for stage, rel in paths.items():
        print(f"{stage}: {out / rel}")
    for v in verdicts:
        onset = "none" if v.onset_time is None else f"{v.onset_time}"
        print(f"behavior {v.behavior_id}: final={int(v.final_value())} onset={onset}")
    return EXIT_OK


def _cmd_classify(args: argparse.Namespace) -> int:
    ctx = _load_context(args.context)
    verdict = classify_emergence(ctx)
    text = json.dumps(verdict.to_dict(), indent=2)
    print(text)
    if args.output:
        Path(args.output).write_text(text + "\n")
    return EXIT_OK


def _cmd_gate(args: argparse.Namespace) -> int:
    ctx = _load_context(args.context)
    verdicts = read_events_jsonl(args.events) if args.events else []
    checklist = evaluate_swarm_gate(ctx, verdicts)
    name = Path(args.context).stem
    print(format_checklist_table([(name, checklist)]))
    print(f"\nis_swarm: {str(checklist.is_swarm).lower()}")
    if args.output:
        checklist.to_json(args.output)
    return EXIT_OK


def _cmd_sweep(args: argparse.Namespace) -> int:
    scenario = _load_scenario(args.scenario)
    seeds = _parse_seeds(args.seeds)
    report = sweep(scenario, seeds, output_dir=args.output_dir, workers=args.workers)
    print(f"scenario: {report.scenario_name}")
    print(f"seeds: {report.n_seeds}")
    for behavior, fraction in report.convergence_fraction.items():
        print(f"convergence {behavior}: {fraction:.2f}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swarmscope",
        description="Simulate milling processes and classify what an observer "
                    "can honestly say about them.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run a scenario end to end")
    p.add_argument("scenario", help="scenario JSON path or built-in name")
    p.add_argument("--output-dir", help="override the scenario output directory")
    p.add_argument("--plot-data", action="store_true",
                   help="also emit tidy long-format plot_data.csv")
    p.set_defaults(fn=_cmd_simulate)

    p = sub.add_parser("analyze", help="recompute markers/behaviors from a trajectory CSV")
    p.add_argument("trajectory", help="trajectory CSV path")
    p.add_argument("--behaviors", required=True, help="behavior specs JSON path")
    p.add_argument("--output-dir", help="directory for analysis outputs "
                                        "(default: alongside the trajectory)")
    p.add_argument("--plot-data", action="store_true")
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(fn=_cmd_analyze)

    p = sub.add_parser("classify", help="emergence type for a declared context")
    p.add_argument("context", help="context JSON path or built-in name")
    p.add_argument("-o", "--output", help="also write the verdict JSON here")
    p.set_defaults(fn=_cmd_classify)

    p = sub.add_parser("gate", help="six-condition swarm checklist for a context")
    p.add_argument("context", help="context JSON path or built-in name")
    p.add_argument("--events", help="events JSONL providing behavior evidence")
    p.add_argument("-o", "--output", help="also write the checklist JSON here")
    p.set_defaults(fn=_cmd_gate)

    p = sub.add_parser("sweep", help="run a randomized scenario over many seeds")
    p.add_argument("scenario", help="scenario JSON path or built-in name")
    p.add_argument("--seeds", required=True, help="`a..b` inclusive or comma list")
    p.add_argument("--workers", type=int, help="parallel worker processes")
    p.add_argument("--output-dir", help="override the sweep root directory")
    p.set_defaults(fn=_cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (OSError, RuntimeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
