"""Observer-side information markers computed from positions only.

Seven reduced-order summaries per frame:

  Y1 average speed, Y2 center of mass, Y3 circliness (relative spread of
  distances to the center of mass; 0 on a perfect circle), Y4 compactness
  (one minus the ratio of cumulative body area to convex-hull area), Y5/Y6
  mean and population standard deviation of nearest-neighbor distances,
  and Y7 separation uniformity 1 - exp(Y6/Y5) (0 at perfectly even
  spacing, negative otherwise).

Markers that cannot be computed on a frame are NaN, never a silent zero,
so downstream behavior evaluation can refuse instead of mislabeling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .core import AgentState, ConfigError, TrajectoryLog, finite_difference_velocities, fmt_float

MARKER_CSV_HEADER = "t,Y1,Y2x,Y2y,Y3,Y4,Y5,Y6,Y7"

#: markers addressable by behavior predicates (Y2 is split into components).
SCALAR_MARKERS = ("Y1", "Y2x", "Y2y", "Y3", "Y4", "Y5", "Y6", "Y7")

_CENTROID_TOL = 1e-9
_HULL_AREA_TOL = 1e-12


@dataclass(frozen=True)
class MarkerVector:
    """Information markers at one instant. NaN marks an undefined value."""

    y1_avg_speed: float
    y2_center_of_mass: tuple[float, float]
    y3_circliness: float
    y4_compactness: float
    y5_mean_nn_dist: float
    y6_std_nn_dist: float
    y7_separation_uniformity: float

    def scalar(self, name: str) -> float:
        """Value of a scalar marker by its short name (Y1, Y2x, ..., Y7)."""
        if name not in SCALAR_MARKERS:
            raise ConfigError(f"unknown marker {name!r}; expected one of {SCALAR_MARKERS}")
        if name == "Y2x":
            return self.y2_center_of_mass[0]
        if name == "Y2y":
            return self.y2_center_of_mass[1]
        attr = {"Y1": "y1_avg_speed", "Y3": "y3_circliness", "Y4": "y4_compactness",
                "Y5": "y5_mean_nn_dist", "Y6": "y6_std_nn_dist",
                "Y7": "y7_separation_uniformity"}[name]
        return getattr(self, attr)


@dataclass(frozen=True)
class MarkerSeries:
    """Markers for every frame of a log, stored column-wise."""

    times: np.ndarray      # (T,)
    y1: np.ndarray         # (T,)
    y2: np.ndarray         # (T, 2)
    y3: np.ndarray
    y4: np.ndarray
    y5: np.ndarray
    y6: np.ndarray
    y7: np.ndarray

    @property
    def n_frames(self) -> int:
        return self.times.shape[0]

    def row(self, k: int) -> MarkerVector:
        return MarkerVector(
            y1_avg_speed=float(self.y1[k]),
            y2_center_of_mass=(float(self.y2[k, 0]), float(self.y2[k, 1])),
            y3_circliness=float(self.y3[k]),
            y4_compactness=float(self.y4[k]),
            y5_mean_nn_dist=float(self.y5[k]),
            y6_std_nn_dist=float(self.y6[k]),
            y7_separation_uniformity=float(self.y7[k]),
        )

    def column(self, name: str) -> np.ndarray:
        """Scalar marker column by short name."""
        if name not in SCALAR_MARKERS:
            raise ConfigError(f"unknown marker {name!r}; expected one of {SCALAR_MARKERS}")
        if name == "Y2x":
            return self.y2[:, 0]
        if name == "Y2y":
            return self.y2[:, 1]
        return getattr(self, name.lower())

    def to_csv(self, path: str | Path,
               behavior_series: dict[str, np.ndarray] | None = None) -> None:
        """Write the marker table, appending 0/1 behavior columns if given."""
        header = MARKER_CSV_HEADER
        extras = list(behavior_series or {})
        if extras:
            header += "," + ",".join(extras)
        lines = [header]
        for k in range(self.n_frames):
            cells = [fmt_float(self.times[k]), fmt_float(self.y1[k]),
                     fmt_float(self.y2[k, 0]), fmt_float(self.y2[k, 1]),
                     fmt_float(self.y3[k]), fmt_float(self.y4[k]),
                     fmt_float(self.y5[k]), fmt_float(self.y6[k]),
                     fmt_float(self.y7[k])]
            cells += [str(int(behavior_series[b][k])) for b in extras]
            lines.append(",".join(cells))
        Path(path).write_text("\n".join(lines) + "\n")

    @classmethod
    def from_csv(cls, path: str | Path) -> "MarkerSeries":
        rows = Path(path).read_text().strip().splitlines()
        if not rows or not rows[0].startswith(MARKER_CSV_HEADER):
            raise ConfigError(f"marker CSV must start with `{MARKER_CSV_HEADER}`")
        data = np.array([[float(c) for c in line.split(",")[:9]] for line in rows[1:]])
        return cls(times=data[:, 0], y1=data[:, 1], y2=data[:, 2:4], y3=data[:, 4],
                   y4=data[:, 5], y5=data[:, 6], y6=data[:, 7], y7=data[:, 8])


# ---------------------------------------------------------------------------
# Geometry
# ---------------------------------------------------------------------------

def convex_hull_area(points: Sequence) -> float:
    """Area of the convex hull of a 2D point set.

    Monotone-chain hull followed by the shoelace formula. Collinear and
    degenerate sets (fewer than 3 distinct points) have area 0.
    """
    pts = sorted({(float(p[0]), float(p[1])) for p in np.asarray(points, dtype=float)})
    if len(pts) <= 2:
        return 0.0

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    def chain(seq):
        out: list[tuple[float, float]] = []
        for p in seq:
            while len(out) >= 2 and cross(out[-2], out[-1], p) <= 0.0:
                out.pop()
            out.append(p)
        return out[:-1]

    hull = chain(pts) + chain(reversed(pts))
    if len(hull) < 3:
        return 0.0
    area = 0.0
    for (x0, y0), (x1, y1) in zip(hull, hull[1:] + hull[:1]):
        area += x0 * y1 - x1 * y0
    return 0.5 * abs(area)


def _nn_distances(positions: np.ndarray) -> np.ndarray:
    """Per-agent nearest-neighbor distance for a (T, N, 2) batch, N >= 2."""
    diff = positions[:, :, None, :] - positions[:, None, :, :]
    dist = np.hypot(diff[..., 0], diff[..., 1])
    n = positions.shape[1]
    dist[:, np.arange(n), np.arange(n)] = np.inf
    return dist.min(axis=2)


def nearest_neighbor_stats(points: Sequence) -> tuple[float, float]:
    """Mean and population standard deviation of nearest-neighbor distances."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 2:
        raise ValueError("nearest_neighbor_stats needs at least 2 points")
    d = _nn_distances(pts[None, :, :])[0]
    return float(d.mean()), float(d.std())


# ---------------------------------------------------------------------------
# Marker computation
# ---------------------------------------------------------------------------

def _marker_batch(positions: np.ndarray, velocities: np.ndarray,
                  body_radii: np.ndarray, negate_uniformity_exponent: bool) -> dict:
    t, n = positions.shape[0], positions.shape[1]
    speeds = np.hypot(velocities[..., 0], velocities[..., 1])
    y1 = speeds.mean(axis=1)
    y2 = positions.mean(axis=1)
    rel = positions - y2[:, None, :]
    r = np.hypot(rel[..., 0], rel[..., 1])
    rmin = r.min(axis=1)
    rmax = r.max(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        y3 = np.where(rmin >= _CENTROID_TOL, (rmax - rmin) / rmin, np.nan)

    body_area = math.pi * float(np.sum(np.square(body_radii)))
    y4 = np.empty(t)
    for k in range(t):
        area = convex_hull_area(positions[k])
        y4[k] = np.nan if area < _HULL_AREA_TOL else min(max(1.0 - body_area / area, 0.0), 1.0)

    if n < 2:
        y5, y6, y7 = (np.full(t, np.nan) for _ in range(3))
    else:
        d = _nn_distances(positions)
        y5 = d.mean(axis=1)
        y6 = d.std(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(y5 > 0.0, y6 / np.where(y5 > 0.0, y5, 1.0), np.nan)
        if negate_uniformity_exponent:
            ratio = -ratio
        y7 = 1.0 - np.exp(ratio)
    return {"y1": y1, "y2": y2, "y3": y3, "y4": y4, "y5": y5, "y6": y6, "y7": y7}


def compute_markers(frame: Sequence[AgentState], velocities: Sequence,
                    *, negate_uniformity_exponent: bool = False) -> MarkerVector:
    """Markers for a single frame given per-agent velocity estimates.

    `negate_uniformity_exponent` switches Y7 to 1 - exp(-Y6/Y5); the
    default keeps the positive exponent, under which Y7 <= 0 with equality
    exactly at zero dispersion.
    """
    if not frame:
        raise ConfigError("frame must contain at least one agent")
    if len(velocities) != len(frame):
        raise ConfigError("velocities must align with the frame")
    positions = np.array([s.position for s in frame], dtype=float)[None, :, :]
    vel = np.asarray(velocities, dtype=float)[None, :, :]
    radii = np.array([s.body_radius for s in frame], dtype=float)
    cols = _marker_batch(positions, vel, radii, negate_uniformity_exponent)
    return MarkerVector(
        y1_avg_speed=float(cols["y1"][0]),
        y2_center_of_mass=(float(cols["y2"][0, 0]), float(cols["y2"][0, 1])),
        y3_circliness=float(cols["y3"][0]),
        y4_compactness=float(cols["y4"][0]),
        y5_mean_nn_dist=float(cols["y5"][0]),
        y6_std_nn_dist=float(cols["y6"][0]),
        y7_separation_uniformity=float(cols["y7"][0]),
    )


def compute_marker_series(log: TrajectoryLog,
                          *, negate_uniformity_exponent: bool = False) -> MarkerSeries:
    """Markers for every frame of a log; velocities come from finite differences."""
    velocities = finite_difference_velocities(log)
    cols = _marker_batch(log.positions, velocities, log.body_radii,
                         negate_uniformity_exponent)
    return MarkerSeries(times=log.times, **cols)
