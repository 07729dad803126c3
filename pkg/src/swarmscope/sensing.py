"""Binary field-of-view sensing and the bang-bang steering law.

The sensor is deliberately minimal: each agent only learns whether at
least one other agent sits inside a closed cone in front of it. No range,
no bearing, no identity. The controller is a memoryless two-valued map
from that single bit to a turn rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import AgentState, ConfigError, wrap_angle


@dataclass(frozen=True)
class FovSpec:
    """Closed conical field of view: vision distance and half opening angle."""

    range: float
    half_angle: float

    def __post_init__(self):
        if not (self.range > 0.0):
            raise ConfigError(f"fov range must be > 0, got {self.range!r}")
        if not (0.0 < self.half_angle <= math.pi):
            raise ConfigError(f"fov half_angle must lie in (0, pi], got {self.half_angle!r}")


def sensor_bits(positions: np.ndarray, headings: np.ndarray, fov: FovSpec) -> np.ndarray:
    """Evaluate the binary sensor for every agent at once.

    positions is (N, 2), headings (N,). Returns a boolean (N,) array where
    entry i is True iff some agent j != i lies within distance `fov.range`
    of agent i and the bearing from i's heading to j is within
    `fov.half_angle` in absolute value. Both boundaries are closed;
    detection tests agent center points, not body disks. Coincident agents
    (zero distance) are never detected.
    """
    positions = np.asarray(positions, dtype=float)
    headings = np.asarray(headings, dtype=float)
    diff = positions[None, :, :] - positions[:, None, :]  # [i, j] = p_j - p_i
    dist = np.hypot(diff[..., 0], diff[..., 1])
    bearing = wrap_angle(np.arctan2(diff[..., 1], diff[..., 0]) - headings[:, None])
    hit = (dist > 0.0) & (dist <= fov.range) & (np.abs(bearing) <= fov.half_angle)
    return hit.any(axis=1)


def binary_sensor(self_state: AgentState, others: Sequence[AgentState], fov: FovSpec) -> int:
    """Binary detection bit for one agent against a list of others.

    Returns 1 iff any other agent center lies inside the closed cone in
    front of `self_state`; 0 otherwise (including an empty `others`).
    """
    if self_state.heading is None:
        raise ConfigError("binary_sensor requires the observing agent to have a heading")
    if not others:
        return 0
    positions = np.array([self_state.position] + [o.position for o in others])
    headings = np.full(len(others) + 1, self_state.heading)
    return int(sensor_bits(positions, headings, fov)[0])


def bang_bang_controller(h: int, omega_max: float) -> float:
    """Memoryless steering law: +omega_max when detecting, -omega_max otherwise."""
    if not (omega_max > 0.0):
        raise ConfigError(f"omega_max must be > 0, got {omega_max!r}")
    return omega_max if h else -omega_max
