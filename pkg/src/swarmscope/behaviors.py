"""Declarative group-behavior definitions and their time-resolved evaluation.

A behavior is a conjunction of threshold constraints on scalar markers
(a region of marker space). Evaluating one over a marker series gives a
raw per-frame boolean series plus debounced onset/offset events; a frame
with any undefined referenced marker evaluates false. Behaviors are not
mutually exclusive and several may hold simultaneously.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .core import ConfigError
from .markers import MarkerSeries, SCALAR_MARKERS

RELATIONS = ("<", "<=", ">", ">=", "within_tol_of")


@dataclass(frozen=True)
class MarkerConstraint:
    """One predicate term: marker <relation> threshold (tolerance for bands)."""

    marker: str
    relation: str
    threshold: float
    tolerance: float = 0.0

    def __post_init__(self):
        if self.marker not in SCALAR_MARKERS:
            raise ConfigError(
                f"unknown marker {self.marker!r}; expected one of {SCALAR_MARKERS}")
        if self.relation not in RELATIONS:
            raise ConfigError(
                f"unknown relation {self.relation!r}; expected one of {RELATIONS}")
        if self.tolerance < 0.0:
            raise ConfigError("tolerance must be >= 0")

    def holds(self, values: np.ndarray) -> np.ndarray:
        """Elementwise truth of the constraint; NaN inputs are false."""
        defined = ~np.isnan(values)
        v = np.where(defined, values, 0.0)
        if self.relation == "<":
            ok = v < self.threshold
        elif self.relation == "<=":
            ok = v <= self.threshold
        elif self.relation == ">":
            ok = v > self.threshold
        elif self.relation == ">=":
            ok = v >= self.threshold
        else:
            ok = np.abs(v - self.threshold) <= self.tolerance
        return defined & ok

    def to_dict(self) -> dict:
        return {"marker": self.marker, "relation": self.relation,
                "threshold": self.threshold, "tolerance": self.tolerance}

    @classmethod
    def from_dict(cls, d: dict) -> "MarkerConstraint":
        return cls(marker=d["marker"], relation=d["relation"],
                   threshold=float(d["threshold"]),
                   tolerance=float(d.get("tolerance", 0.0)))


@dataclass(frozen=True)
class BehaviorSpec:
    """A named behavior: constraint conjunction plus event debouncing."""

    id: str
    predicate: tuple[MarkerConstraint, ...]
    debounce_frames: int = 10

    def __post_init__(self):
        if not self.id:
            raise ConfigError("behavior id must be nonempty")
        object.__setattr__(self, "predicate", tuple(self.predicate))
        if int(self.debounce_frames) < 0:
            raise ConfigError("debounce_frames must be >= 0")
        object.__setattr__(self, "debounce_frames", int(self.debounce_frames))

    def to_dict(self) -> dict:
        return {"id": self.id, "predicate": [c.to_dict() for c in self.predicate],
                "debounce_frames": self.debounce_frames}

    @classmethod
    def from_dict(cls, d: dict) -> "BehaviorSpec":
        return cls(id=d["id"],
                   predicate=tuple(MarkerConstraint.from_dict(c) for c in d["predicate"]),
                   debounce_frames=d.get("debounce_frames", 10))


def default_behavior_specs(eps_circliness: float = 1e-3,
                           eps_compactness: float = 1e-3,
                           eps_uniformity: float = 1e-3,
                           debounce_frames: int = 10) -> list[BehaviorSpec]:
    """The three stock behaviors: milling, aggregation, diffusing.

    Exact-zero definitions are unreachable from simulated data, so each is
    a tolerance band around its ideal value with a configurable epsilon.
    """
    return [
        BehaviorSpec(id="milling", debounce_frames=debounce_frames, predicate=(
            MarkerConstraint("Y1", ">", 0.0),
            MarkerConstraint("Y3", "<=", eps_circliness),
        )),
        BehaviorSpec(id="aggregation", debounce_frames=debounce_frames, predicate=(
            MarkerConstraint("Y4", "<=", eps_compactness),
        )),
        BehaviorSpec(id="diffusing", debounce_frames=debounce_frames, predicate=(
            MarkerConstraint("Y7", "within_tol_of", 0.0, eps_uniformity),
        )),
    ]


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BehaviorEvent:
    """One debounced interval of the behavior; offset_t is None while open."""

    onset_t: float
    offset_t: float | None

    def to_dict(self, behavior_id: str) -> dict:
        return {"behavior": behavior_id, "onset_t": self.onset_t, "offset_t": self.offset_t}


@dataclass(frozen=True)
class BehaviorVerdict:
    """Raw per-frame series plus the debounced event intervals."""

    behavior_id: str
    series: np.ndarray          # (T,) bool
    events: tuple[BehaviorEvent, ...]

    @property
    def has_debounced_truth(self) -> bool:
        return len(self.events) > 0

    @property
    def onset_time(self) -> float | None:
        return self.events[0].onset_t if self.events else None

    def final_value(self) -> bool:
        return bool(self.series[-1]) if self.series.size else False


def _debounced_events(series: np.ndarray, times: np.ndarray,
                      debounce_frames: int) -> tuple[BehaviorEvent, ...]:
    """Intervals where the series holds a value for >= debounce_frames frames.

    A flip is committed once `required` consecutive frames disagree with
    the current debounced state; the event boundary is stamped with the
    first timestamp of that run. debounce_frames = 0 commits every raw
    transition immediately.
    """
    required = max(int(debounce_frames), 1)
    state = False
    run = 0
    events: list[BehaviorEvent] = []
    open_onset: float | None = None
    for k, value in enumerate(series):
        if bool(value) == state:
            run = 0
            continue
        run += 1
        if run < required:
            continue
        state = not state
        boundary = float(times[k - required + 1])
        if state:
            open_onset = boundary
        else:
            events.append(BehaviorEvent(onset_t=open_onset, offset_t=boundary))
            open_onset = None
        run = 0
    if open_onset is not None:
        events.append(BehaviorEvent(onset_t=open_onset, offset_t=None))
    return tuple(events)


def evaluate_behavior(spec: BehaviorSpec, markers: MarkerSeries) -> BehaviorVerdict:
    """Frame-wise conjunction of the spec's constraints plus debounced events."""
    if markers.n_frames == 0:
        raise ConfigError("marker series must be nonempty")
    truth = np.ones(markers.n_frames, dtype=bool)
    for constraint in spec.predicate:
        truth &= constraint.holds(markers.column(constraint.marker))
    events = _debounced_events(truth, markers.times, spec.debounce_frames)
    return BehaviorVerdict(behavior_id=spec.id, series=truth, events=events)


def behavior_matrix(specs: Sequence[BehaviorSpec], markers: MarkerSeries) -> np.ndarray:
    """Per-frame bit vector over all specs, ordered as given: (T, len(specs))."""
    if not specs:
        return np.zeros((markers.n_frames, 0), dtype=bool)
    return np.column_stack([evaluate_behavior(s, markers).series for s in specs])


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def behavior_specs_to_json(specs: Sequence[BehaviorSpec], path: str | Path) -> None:
    Path(path).write_text(
        json.dumps({"behaviors": [s.to_dict() for s in specs]}, indent=2) + "\n")


def behavior_specs_from_json(path: str | Path) -> list[BehaviorSpec]:
    """Read specs from a JSON file holding either a list or {"behaviors": [...]}."""
    doc = json.loads(Path(path).read_text())
    items = doc["behaviors"] if isinstance(doc, dict) else doc
    return [BehaviorSpec.from_dict(d) for d in items]


def write_events_jsonl(verdicts: Sequence[BehaviorVerdict], path: str | Path) -> None:
    """One `{behavior, onset_t, offset_t}` JSON object per line."""
    lines = [json.dumps(e.to_dict(v.behavior_id))
             for v in verdicts for e in v.events]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""))


def parse_events_jsonl(text: str) -> list[BehaviorVerdict]:
    """Rebuild declared verdicts (events only, empty series) from JSONL text."""
    by_behavior: dict[str, list[BehaviorEvent]] = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        d = json.loads(line)
        by_behavior.setdefault(d["behavior"], []).append(
            BehaviorEvent(onset_t=d["onset_t"], offset_t=d.get("offset_t")))
    return [BehaviorVerdict(behavior_id=b, series=np.zeros(0, dtype=bool),
                            events=tuple(evs))
            for b, evs in by_behavior.items()]


def read_events_jsonl(path: str | Path) -> list[BehaviorVerdict]:
    return parse_events_jsonl(Path(path).read_text())
