"""Scenario files, the end-to-end pipeline, and batch seed sweeps.

A scenario is a declarative JSON document: engine configuration, initial
conditions (explicit states or a random box), the observer's declared
context, behavior definitions, and output toggles. Running one goes
engine -> markers -> behaviors -> emergence/swarm-gate and writes every
stage artifact to the scenario's output directory; simulation and
analytics stay decoupled through the trajectory CSV so analysis can be
re-run from files alone.
"""

from __future__ import annotations

import dataclasses
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Sequence

from .behaviors import (BehaviorSpec, BehaviorVerdict, evaluate_behavior,
                        parse_events_jsonl, write_events_jsonl)
from .core import (AgentState, ConfigError, ContextDescriptor, TrajectoryLog,
                   fmt_float)
from .emergence import classify_emergence
from .engines import EngineConfig, EngineFamily, random_initial_states, simulate
from .gate import evaluate_swarm_gate
from .markers import MarkerSeries, compute_marker_series

SCHEMA_VERSION = 1


class ScenarioValidationError(ConfigError):
    """Scenario document failed validation; nothing was run or written."""


@dataclass(frozen=True)
class RandomBoxInitial:
    """Randomized initial conditions: uniform positions in a box."""

    box: tuple[float, float, float, float]
    body_radius: float = 0.0

    def __post_init__(self):
        box = tuple(float(b) for b in self.box)
        if len(box) != 4 or not (box[1] > box[0] and box[3] > box[2]):
            raise ConfigError(f"box must be (xmin, xmax, ymin, ymax), got {self.box!r}")
        object.__setattr__(self, "box", box)
        if self.body_radius < 0.0:
            raise ConfigError("body_radius must be >= 0")

    def to_dict(self) -> dict:
        return {"mode": "random_box", "box": list(self.box), "body_radius": self.body_radius}


@dataclass(frozen=True)
class OutputOptions:
    """Where artifacts go and which of them to write."""

    directory: str
    trajectory_csv: bool = True
    marker_csv: bool = True
    events_jsonl: bool = True
    emergence_json: bool = True
    swarm_gate_json: bool = True
    figures: bool = True
    plot_data_csv: bool = False

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass(frozen=True)
class Scenario:
    """A complete, validated run description."""

    name: str
    engine: EngineConfig
    initial: tuple[AgentState, ...] | RandomBoxInitial
    context: ContextDescriptor
    behaviors: tuple[BehaviorSpec, ...]
    outputs: OutputOptions
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self):
        if isinstance(self.initial, (list, tuple)):
            object.__setattr__(self, "initial", tuple(self.initial))
        object.__setattr__(self, "behaviors", tuple(self.behaviors))
        self.validate()

    def validate(self) -> None:
        problems: list[str] = []
        if self.schema_version != SCHEMA_VERSION:
            problems.append(f"unsupported schema_version {self.schema_version!r}")
        if not self.name:
            problems.append("scenario name must be nonempty")
        if self.engine.family.value != self.context.dynamics_family:
            problems.append(
                f"engine family {self.engine.family.value!r} does not match "
                f"context dynamics_family {self.context.dynamics_family!r}")
        if isinstance(self.initial, tuple):
            if len(self.initial) != self.engine.n_agents:
                problems.append(
                    f"explicit initial has {len(self.initial)} states but "
                    f"n_agents is {self.engine.n_agents}")
            if self.engine.family is EngineFamily.DUBINS_BINARY_SENSOR and \
                    any(s.heading is None for s in self.initial):
                problems.append("dubins engine requires headings on every initial state")
        ids = [b.id for b in self.behaviors]
        if len(set(ids)) != len(ids):
            problems.append(f"behavior ids must be unique, got {ids}")
        if problems:
            raise ScenarioValidationError("; ".join(problems))

    @property
    def randomized(self) -> bool:
        return isinstance(self.initial, RandomBoxInitial)

    def resolve_initial(self) -> list[AgentState]:
        """Materialize initial states (drawing from engine.seed when randomized)."""
        if isinstance(self.initial, RandomBoxInitial):
            return random_initial_states(
                self.engine.n_agents, self.initial.box, self.engine.seed,
                with_headings=self.engine.family is EngineFamily.DUBINS_BINARY_SENSOR,
                body_radius=self.initial.body_radius)
        return list(self.initial)

    # -- serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        initial = (self.initial.to_dict() if isinstance(self.initial, RandomBoxInitial)
                   else {"mode": "explicit",
                         "states": [s.to_dict() for s in self.initial]})
        return {
            "schema_version": self.schema_version,
            "name": self.name,
            "engine": self.engine.to_dict(),
            "initial": initial,
            "context": self.context.to_dict(),
            "behaviors": [b.to_dict() for b in self.behaviors],
            "outputs": self.outputs.to_dict(),
        }

    def to_json(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n")

    @classmethod
    def from_dict(cls, d: dict) -> "Scenario":
        try:
            init = d["initial"]
            mode = init.get("mode")
            if mode == "explicit":
                initial: tuple[AgentState, ...] | RandomBoxInitial = tuple(
                    AgentState.from_dict(s) for s in init["states"])
            elif mode == "random_box":
                initial = RandomBoxInitial(box=tuple(init["box"]),
                                           body_radius=init.get("body_radius", 0.0))
            else:
                raise ConfigError(f"initial mode must be explicit or random_box, got {mode!r}")
            return cls(
                name=d["name"],
                engine=EngineConfig.from_dict(d["engine"]),
                initial=initial,
                context=ContextDescriptor.from_dict(d["context"]),
                behaviors=tuple(BehaviorSpec.from_dict(b) for b in d.get("behaviors", [])),
                outputs=OutputOptions(**d["outputs"]),
                schema_version=d.get("schema_version", 0),
            )
        except KeyError as exc:
            raise ScenarioValidationError(f"scenario is missing field {exc}") from exc

    @classmethod
    def from_json(cls, path: str | Path) -> "Scenario":
        return cls.from_dict(json.loads(Path(path).read_text()))


# ---------------------------------------------------------------------------
# Built-in declarations
# ---------------------------------------------------------------------------

def _data_dir():
    return resources.files("swarmscope").joinpath("data")


def builtin_scenario_names() -> list[str]:
    return sorted(p.name.removesuffix(".json")
                  for p in _data_dir().joinpath("scenarios").iterdir()
                  if p.name.endswith(".json"))


def builtin_context_names() -> list[str]:
    return sorted(p.name.removesuffix(".json")
                  for p in _data_dir().joinpath("contexts").iterdir()
                  if p.name.endswith(".json"))


def load_builtin_scenario(name: str) -> Scenario:
    path = _data_dir().joinpath(f"scenarios/{name}.json")
    if not path.is_file():
        raise ConfigError(
            f"unknown built-in scenario {name!r}; available: {builtin_scenario_names()}")
    return Scenario.from_dict(json.loads(path.read_text()))


def load_builtin_context(name: str) -> ContextDescriptor:
    path = _data_dir().joinpath(f"contexts/{name}.json")
    if not path.is_file():
        raise ConfigError(
            f"unknown built-in context {name!r}; available: {builtin_context_names()}")
    return ContextDescriptor.from_dict(json.loads(path.read_text()))


def load_builtin_events(name: str) -> list[BehaviorVerdict]:
    path = _data_dir().joinpath(f"events/{name}.jsonl")
    if not path.is_file():
        raise ConfigError(f"no built-in events file for {name!r}")
    return parse_events_jsonl(path.read_text())


# ---------------------------------------------------------------------------
# Pipeline
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RunReport:
    """Summary of one scenario run plus relative paths to its artifacts."""

    scenario_name: str
    output_dir: str
    paths: dict[str, str]
    final_behaviors: dict[str, bool]
    onset_times: dict[str, float | None]
    emergence_type: str
    is_swarm: bool

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def summary_lines(self) -> list[str]:
        bits = " ".join(f"{b}={int(v)}" for b, v in self.final_behaviors.items())
        onsets = " ".join(
            f"{b}@{fmt_float(t)}s" for b, t in self.onset_times.items() if t is not None)
        return [
            f"scenario: {self.scenario_name}",
            f"final behaviors: {bits}" if bits else "final behaviors: (none defined)",
            f"onsets: {onsets}" if onsets else "onsets: (none)",
            f"emergence: {self.emergence_type}",
            f"is_swarm: {str(self.is_swarm).lower()}",
            f"outputs: {self.output_dir}",
        ]


def _write_stage(stage: str, fn) -> None:
    try:
        fn()
    except OSError as exc:
        raise RuntimeError(f"[{stage}] {exc}") from exc


def write_analysis_outputs(out: Path, series: MarkerSeries,
                           verdicts: Sequence[BehaviorVerdict],
                           options: OutputOptions,
                           log: TrajectoryLog | None = None,
                           plot_data: bool | None = None) -> dict[str, str]:
    """Write the analytics artifacts (markers, events, figures, plot data)."""
    paths: dict[str, str] = {}
    behavior_cols = {v.behavior_id: v.series.astype(int) for v in verdicts}
    if options.marker_csv:
        paths["marker_csv"] = "markers.csv"
        _write_stage("marker_csv", lambda: series.to_csv(out / "markers.csv", behavior_cols))
    if options.events_jsonl:
        paths["events_jsonl"] = "events.jsonl"
        _write_stage("events_jsonl", lambda: write_events_jsonl(verdicts, out / "events.jsonl"))
    if options.figures:
        from . import report as report_mod
        paths["marker_figure"] = "markers.png"
        _write_stage("marker_figure",
                     lambda: report_mod.render_marker_figure(series, verdicts,
                                                             out / "markers.png"))
        if log is not None:
            paths["trajectory_figure"] = "trajectories.png"
            _write_stage("trajectory_figure",
                         lambda: report_mod.render_trajectory_figure(log, out / "trajectories.png"))
    want_plot_data = options.plot_data_csv if plot_data is None else plot_data
    if want_plot_data:
        from . import report as report_mod
        paths["plot_data_csv"] = "plot_data.csv"
        _write_stage("plot_data_csv",
                     lambda: report_mod.write_plot_data_csv(series, verdicts,
                                                            out / "plot_data.csv"))
    return paths


def run_scenario(scenario: Scenario, output_dir: str | Path | None = None,
                 plot_data: bool | None = None) -> RunReport:
    """Run the full pipeline for one scenario and write its artifacts."""
    scenario.validate()
    initial = scenario.resolve_initial()
    log = simulate(scenario.engine, initial)
    series = compute_marker_series(log)
    verdicts = [evaluate_behavior(spec, series) for spec in scenario.behaviors]
    emergence = classify_emergence(scenario.context)
    checklist = evaluate_swarm_gate(scenario.context, verdicts)

    out = Path(output_dir) if output_dir is not None else Path(scenario.outputs.directory)
    out.mkdir(parents=True, exist_ok=True)
    paths: dict[str, str] = {}
    if scenario.outputs.trajectory_csv:
        paths["trajectory_csv"] = "trajectory.csv"
        _write_stage("trajectory_csv", lambda: log.to_csv(out / "trajectory.csv"))
    paths.update(write_analysis_outputs(out, series, verdicts, scenario.outputs,
                                        log=log, plot_data=plot_data))
    if scenario.outputs.emergence_json:
        paths["emergence_json"] = "emergence.json"
        _write_stage("emergence_json", lambda: (out / "emergence.json").write_text(
            json.dumps(emergence.to_dict(), indent=2) + "\n"))
    if scenario.outputs.swarm_gate_json:
        paths["swarm_gate_json"] = "swarm_gate.json"
        _write_stage("swarm_gate_json", lambda: checklist.to_json(out / "swarm_gate.json"))

    report = RunReport(
        scenario_name=scenario.name,
        output_dir=str(out),
        paths=paths,
        final_behaviors={v.behavior_id: v.final_value() for v in verdicts},
        onset_times={v.behavior_id: v.onset_time for v in verdicts},
        emergence_type=emergence.type_label.value,
        is_swarm=checklist.is_swarm,
    )
    report_dict = report.to_dict()
    report_dict["output_dir"] = "."  # keep the report file location-independent
    _write_stage("run_report", lambda: (out / "run_report.json").write_text(
        json.dumps(report_dict, indent=2) + "\n"))
    return report


# ---------------------------------------------------------------------------
# Seed sweeps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepRow:
    seed: int
    onset_times: dict[str, float | None]
    final_behaviors: dict[str, bool]

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass(frozen=True)
class SweepReport:
    """Per-seed behavior onsets plus the fraction of seeds reaching each one."""

    scenario_name: str
    rows: tuple[SweepRow, ...]
    convergence_fraction: dict[str, float]

    @property
    def n_seeds(self) -> int:
        return len(self.rows)

    def to_dict(self) -> dict:
        return {"scenario_name": self.scenario_name,
                "n_seeds": self.n_seeds,
                "convergence_fraction": self.convergence_fraction,
                "rows": [r.to_dict() for r in self.rows]}

    def to_csv(self, path: str | Path) -> None:
        lines = ["seed,behavior,onset_t,final"]
        for row in self.rows:
            for behavior, onset in row.onset_times.items():
                onset_cell = "" if onset is None else fmt_float(onset)
                lines.append(f"{row.seed},{behavior},{onset_cell},"
                             f"{int(row.final_behaviors[behavior])}")
        Path(path).write_text("\n".join(lines) + "\n")


def _seeded_scenario(scenario: Scenario, seed: int, root: Path) -> Scenario:
    return dataclasses.replace(
        scenario,
        engine=dataclasses.replace(scenario.engine, seed=seed),
        outputs=dataclasses.replace(scenario.outputs,
                                    directory=str(root / f"seed_{seed}")),
    )


def _sweep_worker(args: tuple[dict, int, str]) -> dict:
    scenario_dict, seed, root = args
    scenario = Scenario.from_dict(scenario_dict)
    report = run_scenario(_seeded_scenario(scenario, seed, Path(root)))
    return {"seed": seed, "onset_times": report.onset_times,
            "final_behaviors": report.final_behaviors}


def sweep(scenario: Scenario, seeds: Sequence[int],
          output_dir: str | Path | None = None,
          workers: int | None = None) -> SweepReport:
    """Run one scenario per seed and aggregate behavior onsets.

    Requires randomized initial conditions (each seed must mean a distinct
    run). Per-seed artifacts land in seed-named subdirectories of the
    sweep root; seeds may run in parallel processes with identical
    results either way.
    """
    scenario.validate()
    if not scenario.randomized:
        raise ScenarioValidationError(
            "sweep requires randomized initial conditions; explicit-initial "
            "scenarios are rejected")
    root = Path(output_dir) if output_dir is not None else Path(scenario.outputs.directory)
    seeds = [int(s) for s in seeds]

    rows: list[SweepRow] = []
    if seeds:
        root.mkdir(parents=True, exist_ok=True)
        jobs = [(scenario.to_dict(), seed, str(root)) for seed in seeds]
        if workers is None:
            import os
            workers = min(len(seeds), os.cpu_count() or 1)
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(_sweep_worker, jobs))
        else:
            results = [_sweep_worker(job) for job in jobs]
        rows = [SweepRow(seed=r["seed"], onset_times=r["onset_times"],
                         final_behaviors=r["final_behaviors"]) for r in results]

    fractions: dict[str, float] = {}
    if rows:
        for spec in scenario.behaviors:
            hit = sum(1 for r in rows if r.onset_times.get(spec.id) is not None)
            fractions[spec.id] = hit / len(rows)
    report = SweepReport(scenario_name=scenario.name, rows=tuple(rows),
                         convergence_fraction=fractions)
    if seeds:
        _write_stage("sweep_report", lambda: (root / "sweep_report.json").write_text(
            json.dumps(report.to_dict(), indent=2) + "\n"))
        _write_stage("sweep_report", lambda: report.to_csv(root / "sweep_report.csv"))
    return report
