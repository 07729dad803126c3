"""Trajectory generators for the four milling-producing processes.

Four very different mechanisms, one observable outcome: a ring of moving
agents. A rigid body spun about a pivot (closed form), independent
particles carried by a rotational feedforward field, Dubins vehicles
steered by a one-bit field-of-view sensor, and a distributed
circle-formation controller. All integrating engines use fixed-step RK4
with any control input held constant over the step, so identical configs
reproduce bit-identical logs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .core import AgentState, ConfigError, TrajectoryLog, TWO_PI, wrap_angle
from .sensing import FovSpec, sensor_bits


class EngineFamily(str, Enum):
    RIGID_ROTATION = "rigid_rotation"
    FEEDFORWARD_FIELD = "feedforward_field"
    DUBINS_BINARY_SENSOR = "dubins_binary_sensor"
    DISTRIBUTED_FORMATION = "distributed_formation"


@dataclass(frozen=True)
class EngineConfig:
    """Run configuration for one simulation.

    `params` carries family-specific constants (see the simulate_* docs);
    `log_every` subsamples the stored log to every k-th integration step
    without changing the integration itself.
    """

    family: EngineFamily
    n_agents: int
    duration: float
    dt: float = 0.01
    seed: int = 0
    log_every: int = 1
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        try:
            object.__setattr__(self, "family", EngineFamily(self.family))
        except ValueError:
            raise ConfigError(
                f"unknown engine family {self.family!r}; expected one of "
                f"{[f.value for f in EngineFamily]}") from None
        if self.n_agents < 1:
            raise ConfigError("n_agents must be >= 1")
        if not (self.dt > 0.0):
            raise ConfigError("dt must be > 0")
        if self.duration < self.dt:
            raise ConfigError("duration must cover at least one step")
        if not (0 <= int(self.seed) < 2 ** 64):
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if int(self.log_every) < 1:
            raise ConfigError("log_every must be >= 1")
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "log_every", int(self.log_every))

    def to_dict(self) -> dict:
        return {"family": self.family.value, "n_agents": self.n_agents,
                "duration": self.duration, "dt": self.dt, "seed": self.seed,
                "log_every": self.log_every, "params": dict(self.params)}

    @classmethod
    def from_dict(cls, d: dict) -> "EngineConfig":
        allowed = {"family", "n_agents", "duration", "dt", "seed", "log_every", "params"}
        extra = set(d) - allowed
        if extra:
            raise ConfigError(f"unknown engine fields: {sorted(extra)}")
        return cls(**d)


_REQUIRED = object()

_FAMILY_PARAMS = {
    EngineFamily.RIGID_ROTATION: {"angular_speed", "pivot"},
    EngineFamily.FEEDFORWARD_FIELD: set(),
    EngineFamily.DUBINS_BINARY_SENSOR: {"speed", "omega_max", "fov_angle", "fov_range"},
    EngineFamily.DISTRIBUTED_FORMATION: {"target", "radius", "radial_gain", "spacing_gain"},
}


def _check_params(cfg: EngineConfig) -> None:
    unknown = set(cfg.params) - _FAMILY_PARAMS[cfg.family]
    if unknown:
        raise ConfigError(
            f"{cfg.family.value} engine does not take params {sorted(unknown)}; "
            f"allowed: {sorted(_FAMILY_PARAMS[cfg.family])}")


def _param(cfg: EngineConfig, name: str, default=_REQUIRED):
    value = cfg.params.get(name, default)
    if value is _REQUIRED:
        raise ConfigError(f"{cfg.family.value} engine requires params[{name!r}]")
    return value


def _vector_param(cfg: EngineConfig, name: str, default=_REQUIRED) -> np.ndarray:
    value = _param(cfg, name, default)
    vec = np.asarray(value, dtype=float)
    if vec.shape != (2,):
        raise ConfigError(f"params[{name!r}] must be a 2-vector")
    return vec


def _unpack_initial(initial: Sequence[AgentState], cfg: EngineConfig,
                    need_heading: bool = False):
    if len(initial) != cfg.n_agents:
        raise ConfigError(
            f"initial state count {len(initial)} does not match n_agents {cfg.n_agents}")
    positions = np.array([s.position for s in initial], dtype=float)
    radii = np.array([s.body_radius for s in initial], dtype=float)
    have = [s.heading is not None for s in initial]
    if need_heading and not all(have):
        raise ValueError("dubins engine requires headings")
    headings = np.array([s.heading for s in initial], dtype=float) if all(have) else None
    return positions, headings, radii


def _log_times(cfg: EngineConfig) -> tuple[int, np.ndarray, np.ndarray]:
    """Total step count, logged step indices, and logged timestamps."""
    steps = int(round(cfg.duration / cfg.dt))
    logged = np.arange(0, steps + 1, cfg.log_every)
    return steps, logged, logged * cfg.dt


def _rk4_step(f: Callable[[np.ndarray], np.ndarray], y: np.ndarray, dt: float) -> np.ndarray:
    k1 = f(y)
    k2 = f(y + 0.5 * dt * k1)
    k3 = f(y + 0.5 * dt * k2)
    k4 = f(y + dt * k3)
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _integrate(cfg: EngineConfig, y0: np.ndarray,
               f: Callable[[np.ndarray], np.ndarray]) -> list[np.ndarray]:
    steps, logged, _ = _log_times(cfg)
    stride = cfg.log_every
    out = [y0.copy()]
    y = y0
    for k in range(steps):
        y = _rk4_step(f, y, cfg.dt)
        if (k + 1) % stride == 0:
            out.append(y.copy())
    return out


# ---------------------------------------------------------------------------
# Engines
# ---------------------------------------------------------------------------

def simulate_rigid_rotation(cfg: EngineConfig, initial: Sequence[AgentState]) -> TrajectoryLog:
    """Spin all agents as one rigid body about a pivot (closed form, exact).

    params: angular_speed (rad/s, required) and pivot (2-vector, default
    origin). Positions rotate by angular_speed * t; headings, when the
    initial states carry them, advance by the same angle.
    """
    omega = float(_param(cfg, "angular_speed"))
    pivot = _vector_param(cfg, "pivot", (0.0, 0.0))
    positions, headings0, radii = _unpack_initial(initial, cfg)
    _, _, times = _log_times(cfg)
    ang = omega * times
    c = np.cos(ang)[:, None]
    s = np.sin(ang)[:, None]
    rel = positions - pivot
    x = c * rel[:, 0] - s * rel[:, 1] + pivot[0]
    y = s * rel[:, 0] + c * rel[:, 1] + pivot[1]
    logged_pos = np.stack([x, y], axis=-1)
    logged_hdg = None
    if headings0 is not None:
        logged_hdg = wrap_angle(headings0[None, :] + ang[:, None])
    return TrajectoryLog(times, logged_pos, logged_hdg, radii, dt=cfg.dt * cfg.log_every)


def simulate_feedforward_field(cfg: EngineConfig, initial: Sequence[AgentState]) -> TrajectoryLog:
    """Advect independent particles through the rotational field (-y, x).

    Each agent orbits the origin at its initial radius with unit angular
    speed; no agent's motion depends on any other. Headings, if present
    initially, are carried unchanged (the field exerts no torque).
    """
    positions, headings0, radii = _unpack_initial(initial, cfg)

    def f(p: np.ndarray) -> np.ndarray:
        return np.column_stack([-p[:, 1], p[:, 0]])

    frames = _integrate(cfg, positions, f)
    _, _, times = _log_times(cfg)
    logged_pos = np.array(frames)
    logged_hdg = None
    if headings0 is not None:
        logged_hdg = np.tile(headings0, (len(frames), 1))
    return TrajectoryLog(times, logged_pos, logged_hdg, radii, dt=cfg.dt * cfg.log_every)


def simulate_dubins_swarm(cfg: EngineConfig, initial: Sequence[AgentState]) -> TrajectoryLog:
    """Steer constant-speed Dubins vehicles by the one-bit FOV sensor.

    params: speed (default 1.0), omega_max (default 1.0), fov_angle (full
    opening angle, default 0.7) and fov_range (default 5.0). Per step the
    sensor is read once, the bang-bang turn rate is held constant, and
    position/heading integrate with RK4; headings stay wrapped to
    (-pi, pi].
    """
    v = float(_param(cfg, "speed", 1.0))
    omega_max = float(_param(cfg, "omega_max", 1.0))
    fov = FovSpec(range=float(_param(cfg, "fov_range", 5.0)),
                  half_angle=0.5 * float(_param(cfg, "fov_angle", 0.7)))
    if not (v > 0.0) or not (omega_max > 0.0):
        raise ConfigError("speed and omega_max must be > 0")
    positions, headings, radii = _unpack_initial(initial, cfg, need_heading=True)

    steps, _, times = _log_times(cfg)
    dt = cfg.dt
    stride = cfg.log_every
    pos_frames = [positions.copy()]
    hdg_frames = [headings.copy()]
    pos, th = positions, headings
    for k in range(steps):
        bits = sensor_bits(pos, th, fov)
        u = np.where(bits, omega_max, -omega_max)
        # RK4 on (x, y, theta) with step-constant u. theta'(t) = u is linear,
        # so stages 2 and 3 see the same heading and the heading update is
        # exactly dt * u.
        th_mid = th + 0.5 * dt * u
        th_end = th + dt * u
        kx = v * (np.cos(th) + 4.0 * np.cos(th_mid) + np.cos(th_end))
        ky = v * (np.sin(th) + 4.0 * np.sin(th_mid) + np.sin(th_end))
        pos = pos + (dt / 6.0) * np.column_stack([kx, ky])
        th = wrap_angle(th_end)
        if (k + 1) % stride == 0:
            pos_frames.append(pos.copy())
            hdg_frames.append(th.copy())
    return TrajectoryLog(times, np.array(pos_frames), np.array(hdg_frames), radii,
                         dt=dt * stride)


def simulate_distributed_formation(cfg: EngineConfig, initial: Sequence[AgentState]) -> TrajectoryLog:
    """Drive agents onto an evenly spaced rotating ring about a known target.

    Surrogate controller with two properties: a limit-cycle field that
    attracts each agent to the circle of radius `radius` about `target`
    with unit counter-clockwise tangential flow, and a speed factor
    1 + spacing_gain * (ccw angular gap to the nearest agent ahead - 2*pi/N)
    that equalizes angular spacing. params: target (2-vector, default
    origin), radius (default 1.0), radial_gain (default 1.0), spacing_gain
    (default 0.5).
    """
    if cfg.n_agents < 2 or len(initial) < 2:
        raise ValueError("formation requires at least 2 agents")
    target = _vector_param(cfg, "target", (0.0, 0.0))
    rho = float(_param(cfg, "radius", 1.0))
    k_r = float(_param(cfg, "radial_gain", 1.0))
    k_s = float(_param(cfg, "spacing_gain", 0.5))
    if not (rho > 0.0):
        raise ConfigError("formation radius must be > 0")
    positions, headings0, radii = _unpack_initial(initial, cfg)
    n = cfg.n_agents
    even_gap = TWO_PI / n

    def f(p: np.ndarray) -> np.ndarray:
        rel = p - target
        d = np.hypot(rel[:, 0], rel[:, 1])
        safe = d > 1e-12
        inv = np.where(safe, 1.0 / np.where(safe, d, 1.0), 0.0)
        rhat = rel * inv[:, None]
        tang = np.column_stack([-rel[:, 1], rel[:, 0]]) * inv[:, None]
        alpha = np.arctan2(rel[:, 1], rel[:, 0])
        ahead = np.mod(alpha[None, :] - alpha[:, None], TWO_PI)
        np.fill_diagonal(ahead, np.inf)
        gap = ahead.min(axis=1)
        beta = 1.0 + k_s * (gap - even_gap)
        u_p = k_r * (rho - d)[:, None] * rhat + tang
        return beta[:, None] * u_p

    frames = _integrate(cfg, positions, f)
    _, _, times = _log_times(cfg)
    logged_hdg = None
    if headings0 is not None:
        logged_hdg = np.tile(headings0, (len(frames), 1))
    return TrajectoryLog(times, np.array(frames), logged_hdg, radii, dt=cfg.dt * cfg.log_every)


ENGINES: dict[EngineFamily, Callable[[EngineConfig, Sequence[AgentState]], TrajectoryLog]] = {
    EngineFamily.RIGID_ROTATION: simulate_rigid_rotation,
    EngineFamily.FEEDFORWARD_FIELD: simulate_feedforward_field,
    EngineFamily.DUBINS_BINARY_SENSOR: simulate_dubins_swarm,
    EngineFamily.DISTRIBUTED_FORMATION: simulate_distributed_formation,
}


def simulate(cfg: EngineConfig, initial: Sequence[AgentState]) -> TrajectoryLog:
    """Run the engine named by cfg.family on the given initial states."""
    if not initial:
        raise ConfigError("initial states must be nonempty")
    _check_params(cfg)
    return ENGINES[cfg.family](cfg, initial)


def random_initial_states(n: int, box: Sequence[float], seed: int,
                          with_headings: bool = False,
                          body_radius: float = 0.0) -> list[AgentState]:
    """Draw agents uniformly in a box, optionally with uniform headings.

    Uses the counter-based Philox generator so a given seed reproduces the
    same states on every platform. Draw order is fixed: all x, then all y,
    then headings. Headings are mapped into (-pi, pi].
    """
    if n < 1:
        raise ConfigError("n must be >= 1")
    xmin, xmax, ymin, ymax = (float(b) for b in box)
    if not (xmax > xmin and ymax > ymin):
        raise ConfigError(f"degenerate box {box!r}")
    rng = np.random.Generator(np.random.Philox(seed))
    xs = rng.uniform(xmin, xmax, n)
    ys = rng.uniform(ymin, ymax, n)
    headings = math.pi - rng.uniform(0.0, TWO_PI, n) if with_headings else [None] * n
    return [AgentState(position=(xs[i], ys[i]),
                       heading=None if headings[i] is None else float(headings[i]),
                       body_radius=body_radius)
            for i in range(n)]
