"""Observable data model shared by the simulators and the analytics pipeline.

Everything an external observer can work with lives here: per-agent
observable states, time-indexed trajectory logs, and the declared context
(what the observer claims to know about the system that produced the log).
Latent agent internals are deliberately absent; they can only appear as
declared flags or parameters on the context.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, fields
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

TWO_PI = 2.0 * math.pi


class ConfigError(ValueError):
    """Invalid configuration, declaration, or scenario input."""


def wrap_angle(angle):
    """Wrap an angle (scalar or array) to the half-open interval (-pi, pi]."""
    return -(np.mod(-np.asarray(angle, dtype=float) + np.pi, TWO_PI) - np.pi)


def fmt_float(x: float) -> str:
    """Shortest decimal string that round-trips the float (nan for undefined)."""
    return repr(float(x))


# ---------------------------------------------------------------------------
# Agent state
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AgentState:
    """Externally observable state of one agent.

    position is a 2D point in meters; heading (radians, wrapped to
    (-pi, pi]) is optional because an observer generally cannot measure
    orientation; body_radius is the physical footprint used by the
    compactness marker.
    """

    position: tuple[float, float]
    heading: float | None = None
    body_radius: float = 0.0

    def __post_init__(self):
        pos = (float(self.position[0]), float(self.position[1]))
        if len(self.position) != 2 or not all(math.isfinite(c) for c in pos):
            raise ConfigError(f"position must be a finite 2-vector, got {self.position!r}")
        object.__setattr__(self, "position", pos)
        if self.heading is not None:
            h = float(self.heading)
            if not math.isfinite(h) or not (-math.pi < h <= math.pi):
                raise ConfigError(f"heading must lie in (-pi, pi], got {self.heading!r}")
            object.__setattr__(self, "heading", h)
        r = float(self.body_radius)
        if not math.isfinite(r) or r < 0.0:
            raise ConfigError(f"body_radius must be >= 0, got {self.body_radius!r}")
        object.__setattr__(self, "body_radius", r)

    def to_dict(self) -> dict:
        return {"position": list(self.position), "heading": self.heading,
                "body_radius": self.body_radius}

    @classmethod
    def from_dict(cls, d: dict) -> "AgentState":
        return cls(position=tuple(d["position"]), heading=d.get("heading"),
                   body_radius=d.get("body_radius", 0.0))


# ---------------------------------------------------------------------------
# Trajectory log
# ---------------------------------------------------------------------------

TRAJECTORY_CSV_HEADER = "t,agent_id,x,y,heading,body_radius"

_STEP_TOL = 1e-9


class TrajectoryLog:
    """Time-indexed record of all agents' observable states over a window.

    Stored internally as arrays: times (T,), positions (T, N, 2), optional
    headings (T, N), and per-agent body radii (N,). Frames are immutable
    after construction; agent ordering is consistent across frames.
    """

    def __init__(self, times, positions, headings=None, body_radii=None,
                 dt: float | None = None):
        times = np.asarray(times, dtype=float)
        positions = np.asarray(positions, dtype=float)
        if times.ndim != 1 or positions.ndim != 3 or positions.shape[2] != 2:
            raise ConfigError("times must be (T,), positions must be (T, N, 2)")
        if positions.shape[0] != times.shape[0]:
            raise ConfigError("times and positions disagree on frame count")
        if times.shape[0] < 1 or positions.shape[1] < 1:
            raise ConfigError("log needs at least one frame and one agent")
        if not np.all(np.isfinite(positions)):
            raise ConfigError("positions must be finite")
        diffs = np.diff(times)
        if np.any(diffs <= 0.0):
            raise ConfigError("timestamps must be strictly increasing")
        if dt is None:
            dt = float(diffs[0]) if diffs.size else 0.0
        if diffs.size and np.max(np.abs(diffs - dt)) > _STEP_TOL:
            raise ConfigError("timestamps are not uniform at the nominal step")
        n = positions.shape[1]
        if headings is not None:
            headings = np.asarray(headings, dtype=float)
            if headings.shape != (times.shape[0], n):
                raise ConfigError("headings must be (T, N) when present")
        if body_radii is None:
            body_radii = np.zeros(n)
        body_radii = np.asarray(body_radii, dtype=float)
        if body_radii.shape != (n,) or np.any(body_radii < 0.0):
            raise ConfigError("body_radii must be (N,) and non-negative")
        for arr in (times, positions, headings, body_radii):
            if arr is not None:
                arr.flags.writeable = False
        self.times = times
        self.positions = positions
        self.headings = headings
        self.body_radii = body_radii
        self.dt = float(dt)

    @property
    def n_frames(self) -> int:
        return self.times.shape[0]

    @property
    def n_agents(self) -> int:
        return self.positions.shape[1]

    def frame(self, k: int) -> list[AgentState]:
        """Materialize frame k as AgentState records."""
        return [
            AgentState(
                position=(self.positions[k, i, 0], self.positions[k, i, 1]),
                heading=None if self.headings is None else float(self.headings[k, i]),
                body_radius=float(self.body_radii[i]),
            )
            for i in range(self.n_agents)
        ]

    @property
    def frames(self) -> list[list[AgentState]]:
        return [self.frame(k) for k in range(self.n_frames)]

    @classmethod
    def from_frames(cls, times: Sequence[float],
                    frames: Sequence[Sequence[AgentState]],
                    dt: float | None = None) -> "TrajectoryLog":
        if not frames:
            raise ConfigError("log needs at least one frame and one agent")
        n = len(frames[0])
        if any(len(f) != n for f in frames):
            raise ConfigError("every frame must have the same agent count")
        positions = np.array([[s.position for s in f] for f in frames])
        has_heading = [s.heading is not None for f in frames for s in f]
        if any(has_heading) and not all(has_heading):
            raise ConfigError("headings must be present for all agents or none")
        headings = None
        if all(has_heading) and has_heading:
            headings = np.array([[s.heading for s in f] for f in frames])
        radii = np.array([s.body_radius for s in frames[0]])
        for f in frames[1:]:
            if any(s.body_radius != r for s, r in zip(f, radii)):
                raise ConfigError("body_radius must be constant per agent")
        return cls(times, positions, headings, radii, dt=dt)

    # -- CSV serialization --------------------------------------------------

    def to_csv(self, path: str | Path) -> None:
        """Write the log as `t,agent_id,x,y,heading,body_radius` rows."""
        lines = [TRAJECTORY_CSV_HEADER]
        for k in range(self.n_frames):
            t = fmt_float(self.times[k])
            for i in range(self.n_agents):
                h = "" if self.headings is None else fmt_float(self.headings[k, i])
                lines.append(
                    f"{t},{i},{fmt_float(self.positions[k, i, 0])},"
                    f"{fmt_float(self.positions[k, i, 1])},{h},"
                    f"{fmt_float(self.body_radii[i])}"
                )
        Path(path).write_text("\n".join(lines) + "\n")

    @classmethod
    def from_csv(cls, path: str | Path) -> "TrajectoryLog":
        text = Path(path).read_text().strip().splitlines()
        if not text or text[0].strip() != TRAJECTORY_CSV_HEADER:
            raise ConfigError(f"trajectory CSV must start with `{TRAJECTORY_CSV_HEADER}`")
        by_time: dict[float, list[tuple[int, float, float, float | None, float]]] = {}
        order: list[float] = []
        for line in text[1:]:
            cells = line.split(",")
            if len(cells) != 6:
                raise ConfigError(f"malformed trajectory row: {line!r}")
            t = float(cells[0])
            heading = None if cells[4] == "" else float(cells[4])
            if t not in by_time:
                by_time[t] = []
                order.append(t)
            by_time[t].append((int(cells[1]), float(cells[2]), float(cells[3]),
                               heading, float(cells[5])))
        times = np.array(order)
        frames = []
        for t in order:
            rows = sorted(by_time[t])
            frames.append([AgentState(position=(x, y), heading=h, body_radius=r)
                           for _, x, y, h, r in rows])
        return cls.from_frames(times, frames)


# ---------------------------------------------------------------------------
# Context
# ---------------------------------------------------------------------------

class Coupling(str, Enum):
    """Declared coupling structure between the observed components."""

    RIGID_SINGLE_BODY = "rigid_single_body"
    NONE_FEEDFORWARD = "none_feedforward"
    LOCAL_FEEDBACK = "local_feedback"
    GLOBAL_INFORMATION = "global_information"


#: dynamics_family values accepted on a context. Mirrors the engine
#: registry plus "external" for systems this package does not simulate.
KNOWN_DYNAMICS_FAMILIES = (
    "rigid_rotation",
    "feedforward_field",
    "dubins_binary_sensor",
    "distributed_formation",
    "external",
)


@dataclass(frozen=True)
class ContextDescriptor:
    """The observer's declared knowledge about the generating process.

    Nothing here is inferred from trajectories; it is what the observer
    claims to know, and classification is a function of these declarations.
    scope_label and resolution_label are carried as free-text metadata only.
    dynamics_params holds the declared parameter space as a flat name->number
    map; per-agent values may be declared with `name:i` keys.
    """

    n_components: int
    coupling: Coupling
    scope_label: str = ""
    resolution_label: str = ""
    has_control_input: bool = False
    uses_latent_state: bool = False
    group_goal_aware: bool = False
    leader_present: bool = False
    time_varying_context: bool = False
    dynamics_family: str = "external"
    dynamics_params: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if int(self.n_components) < 1:
            raise ConfigError("n_components must be a positive integer")
        object.__setattr__(self, "n_components", int(self.n_components))
        try:
            object.__setattr__(self, "coupling", Coupling(self.coupling))
        except ValueError:
            raise ConfigError(
                f"unknown coupling {self.coupling!r}; expected one of "
                f"{[c.value for c in Coupling]}") from None
        if self.dynamics_family not in KNOWN_DYNAMICS_FAMILIES:
            raise ConfigError(
                f"unknown dynamics_family {self.dynamics_family!r}; expected one of "
                f"{KNOWN_DYNAMICS_FAMILIES}")
        for key, value in self.dynamics_params.items():
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise ConfigError(f"dynamics_params[{key!r}] must be a number")

    @property
    def effective_n_components(self) -> int:
        """Component count after resolution correction: a rigid body is one object."""
        if self.coupling is Coupling.RIGID_SINGLE_BODY:
            return 1
        return self.n_components

    def to_dict(self) -> dict:
        d = {f.name: getattr(self, f.name) for f in fields(self)}
        d["coupling"] = self.coupling.value
        d["dynamics_params"] = dict(self.dynamics_params)
        return d

    def to_json(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n")

    @classmethod
    def from_dict(cls, d: dict) -> "ContextDescriptor":
        known = {f.name for f in fields(cls)}
        extra = set(d) - known
        if extra:
            raise ConfigError(f"unknown context fields: {sorted(extra)}")
        missing = {"n_components", "coupling"} - set(d)
        if missing:
            raise ConfigError(f"context is missing fields: {sorted(missing)}")
        return cls(**d)

    @classmethod
    def from_json(cls, path: str | Path) -> "ContextDescriptor":
        return cls.from_dict(json.loads(Path(path).read_text()))


# ---------------------------------------------------------------------------
# Kinematics from observables
# ---------------------------------------------------------------------------

def finite_difference_velocities(log: TrajectoryLog) -> np.ndarray:
    """Estimate per-agent velocities (T, N, 2) from logged positions.

    Central differences at interior frames (second-order accurate for
    twice-differentiable trajectories), one-sided at the two ends. Exact
    for trajectories linear in time.
    """
    if log.n_frames < 2:
        raise ValueError("insufficient frames for kinematics")
    p = log.positions
    t = log.times
    v = np.empty_like(p)
    v[0] = (p[1] - p[0]) / (t[1] - t[0])
    v[-1] = (p[-1] - p[-2]) / (t[-1] - t[-2])
    if log.n_frames > 2:
        span = (t[2:] - t[:-2])[:, None, None]
        v[1:-1] = (p[2:] - p[:-2]) / span
    return v
