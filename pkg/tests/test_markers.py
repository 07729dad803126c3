import math

import numpy as np
import pytest

import swarmscope as ss
from swarmscope.core import ConfigError
from swarmscope.markers import MARKER_CSV_HEADER

from conftest import HEX_S, HEXAGON, hexagon_states


def hexagon_frame(r=0.05):
    return hexagon_states(body_radius=r)


def tangential_velocities():
    return [(-p[1], p[0]) for p in HEXAGON]


# ---------------------------------------------------------------------------
# Independent hull oracle: gift wrapping + triangle-fan area, written first
# and kept free of the monotone-chain/shoelace code under test.
# ---------------------------------------------------------------------------

def oracle_hull_area(points) -> float:
    pts = [tuple(map(float, p)) for p in points]
    pts = sorted(set(pts))
    if len(pts) <= 2:
        return 0.0

    def turn(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    start = min(pts)
    hull = [start]
    current = start
    while True:
        candidate = pts[0] if pts[0] != current else pts[1]
        for p in pts:
            if p == current:
                continue
            t = turn(current, candidate, p)
            if t < 0 or (t == 0 and
                         math.dist(current, p) > math.dist(current, candidate)):
                candidate = p
        if candidate == start:
            break
        hull.append(candidate)
        current = candidate
        if len(hull) > len(pts) + 1:
            raise AssertionError("gift wrapping failed to terminate")
    if len(hull) < 3:
        return 0.0
    anchor = hull[0]
    area = 0.0
    for a, b in zip(hull[1:], hull[2:]):
        area += turn(anchor, a, b)
    return abs(area) / 2.0


# ---------------------------------------------------------------------------
# convex_hull_area
# ---------------------------------------------------------------------------

def test_hull_unit_square():
    assert ss.convex_hull_area([(0, 0), (1, 0), (1, 1), (0, 1)]) == 1.0


def test_hull_triangle():
    assert ss.convex_hull_area([(0, 0), (1, 0), (0, 1)]) == 0.5


def test_hull_degenerate_cases():
    assert ss.convex_hull_area([(2, 3)]) == 0.0
    assert ss.convex_hull_area([(0, 0), (4, 4)]) == 0.0
    assert ss.convex_hull_area([(0, 0), (1, 1), (2, 2), (3, 3)]) == 0.0
    assert ss.convex_hull_area([(1, 1), (1, 1), (1, 1)]) == 0.0


def test_hull_interior_points_do_not_matter():
    square = [(0, 0), (2, 0), (2, 2), (0, 2)]
    inner = [(1.0, 1.0), (0.5, 0.7), (1.5, 1.2)]
    assert ss.convex_hull_area(square + inner) == 4.0


def test_hull_matches_oracle_on_random_sets():
    rng = np.random.default_rng(123)
    for _ in range(200):
        n = rng.integers(3, 31)
        pts = rng.uniform(0, 1, size=(n, 2))
        assert abs(ss.convex_hull_area(pts) - oracle_hull_area(pts)) <= 1e-12


def test_hull_hexagon_analytic_area():
    # regular unit hexagon: area 3*sqrt(3)/2
    assert ss.convex_hull_area(HEXAGON) == pytest.approx(3 * math.sqrt(3) / 2, abs=1e-12)


# ---------------------------------------------------------------------------
# nearest_neighbor_stats
# ---------------------------------------------------------------------------

def test_nn_two_points():
    assert ss.nearest_neighbor_stats([(0, 0), (3, 0)]) == (3.0, 0.0)


def test_nn_hexagon_chords():
    mean, std = ss.nearest_neighbor_stats(HEXAGON)
    assert mean == pytest.approx(2 * math.sin(math.pi / 6), abs=1e-12)  # = 1
    assert std == pytest.approx(0.0, abs=1e-12)


def test_nn_three_collinear():
    mean, std = ss.nearest_neighbor_stats([(0, 0), (1, 0), (3, 0)])
    assert mean == pytest.approx(4.0 / 3.0, abs=1e-12)
    assert std == pytest.approx(math.sqrt(2.0) / 3.0, abs=1e-12)


def test_nn_requires_two_points():
    with pytest.raises(ValueError):
        ss.nearest_neighbor_stats([(0, 0)])


def test_nn_matches_brute_force_pairs():
    rng = np.random.default_rng(5)
    pts = rng.uniform(-2, 2, size=(9, 2))
    mean, std = ss.nearest_neighbor_stats(pts)
    d = [min(math.dist(pts[i], pts[j]) for j in range(9) if j != i) for i in range(9)]
    assert mean == pytest.approx(float(np.mean(d)), abs=1e-12)
    assert std == pytest.approx(float(np.std(d)), abs=1e-12)


# ---------------------------------------------------------------------------
# compute_markers on the ideal hexagon
# ---------------------------------------------------------------------------

def test_hexagon_speed_center_circliness():
    mv = ss.compute_markers(hexagon_frame(), tangential_velocities())
    assert abs(mv.y1_avg_speed - 1.0) <= 1e-9
    assert abs(mv.y2_center_of_mass[0]) <= 1e-9
    assert abs(mv.y2_center_of_mass[1]) <= 1e-9
    assert abs(mv.y3_circliness) <= 1e-9


def test_hexagon_compactness():
    mv = ss.compute_markers(hexagon_frame(r=0.05), tangential_velocities())
    by_hand = 1.0 - 6 * math.pi * 0.05 ** 2 / (3 * math.sqrt(3) / 2)
    assert abs(mv.y4_compactness - 0.98186) <= 1e-4
    assert mv.y4_compactness == pytest.approx(by_hand, abs=1e-12)


def test_hexagon_even_spacing_forces_exact_zero_uniformity():
    mv = ss.compute_markers(hexagon_frame(), tangential_velocities())
    assert mv.y6_std_nn_dist == 0.0
    assert mv.y7_separation_uniformity == 0.0


# ---------------------------------------------------------------------------
# Undefined-marker flags
# ---------------------------------------------------------------------------

def test_agent_at_centroid_undefines_circliness():
    frame = [ss.AgentState(position=p) for p in [(0, 0), (1, 0), (-0.5, 0.866), (-0.5, -0.866)]]
    mv = ss.compute_markers(frame, [(0, 0)] * 4)
    assert math.isnan(mv.y3_circliness)


def test_collinear_frame_undefines_compactness():
    frame = [ss.AgentState(position=(float(i), 0.0)) for i in range(4)]
    mv = ss.compute_markers(frame, [(0, 0)] * 4)
    assert math.isnan(mv.y4_compactness)


def test_single_agent_undefines_neighbor_markers():
    mv = ss.compute_markers([ss.AgentState(position=(1, 2))], [(0.5, 0)])
    assert math.isnan(mv.y5_mean_nn_dist)
    assert math.isnan(mv.y6_std_nn_dist)
    assert math.isnan(mv.y7_separation_uniformity)
    assert math.isnan(mv.y3_circliness)  # single agent sits at its own centroid
    assert mv.y1_avg_speed == 0.5


def test_coincident_agents_undefine_uniformity():
    frame = [ss.AgentState(position=(1.0, 1.0)) for _ in range(3)]
    mv = ss.compute_markers(frame, [(0, 0)] * 3)
    assert mv.y5_mean_nn_dist == 0.0
    assert math.isnan(mv.y7_separation_uniformity)


def test_compactness_clamped_into_unit_interval():
    # bodies larger than the hull: the raw formula would go negative
    frame = [ss.AgentState(position=p, body_radius=2.0)
             for p in [(0, 0), (1, 0), (0, 1)]]
    mv = ss.compute_markers(frame, [(0, 0)] * 3)
    assert mv.y4_compactness == 0.0


# ---------------------------------------------------------------------------
# Invariance properties
# ---------------------------------------------------------------------------

def _random_frame(rng, n=None):
    n = int(rng.integers(3, 9)) if n is None else n
    positions = rng.uniform(-4, 4, size=(n, 2))
    velocities = rng.uniform(-2, 2, size=(n, 2))
    radii = rng.uniform(0.01, 0.1, size=n)
    frame = [ss.AgentState(position=tuple(p), body_radius=float(r))
             for p, r in zip(positions, radii)]
    return frame, velocities


def _moved(frame, velocities, angle, shift):
    c, s = math.cos(angle), math.sin(angle)
    rot = np.array([[c, -s], [s, c]])
    moved_frame = [ss.AgentState(position=tuple(rot @ np.array(st.position) + shift),
                                 body_radius=st.body_radius) for st in frame]
    return moved_frame, velocities @ rot.T


SCALARS = ("Y1", "Y3", "Y4", "Y5", "Y6", "Y7")


def test_markers_invariant_under_rigid_motion():
    rng = np.random.default_rng(77)
    for _ in range(100):
        frame, vel = _random_frame(rng)
        mv = ss.compute_markers(frame, vel)
        moved_frame, moved_vel = _moved(frame, vel, rng.uniform(-3, 3),
                                        rng.uniform(-10, 10, size=2))
        mv2 = ss.compute_markers(moved_frame, moved_vel)
        for name in SCALARS:
            a, b = mv.scalar(name), mv2.scalar(name)
            assert (math.isnan(a) and math.isnan(b)) or abs(a - b) <= 1e-9


def test_center_of_mass_is_equivariant():
    rng = np.random.default_rng(78)
    frame, vel = _random_frame(rng)
    angle, shift = 1.234, np.array([3.0, -2.0])
    mv = ss.compute_markers(frame, vel)
    moved_frame, moved_vel = _moved(frame, vel, angle, shift)
    mv2 = ss.compute_markers(moved_frame, moved_vel)
    c, s = math.cos(angle), math.sin(angle)
    rot = np.array([[c, -s], [s, c]])
    expected = rot @ np.array(mv.y2_center_of_mass) + shift
    assert np.allclose(mv2.y2_center_of_mass, expected, atol=1e-9)


def test_circliness_and_uniformity_are_scale_invariant():
    rng = np.random.default_rng(79)
    for scale in (0.5, 2.0, 13.7):
        frame, vel = _random_frame(rng)
        mv = ss.compute_markers(frame, vel)
        scaled = [ss.AgentState(position=(st.position[0] * scale, st.position[1] * scale),
                                body_radius=st.body_radius) for st in frame]
        mv2 = ss.compute_markers(scaled, vel)
        assert abs(mv.y3_circliness - mv2.y3_circliness) <= 1e-9
        assert abs(mv.y7_separation_uniformity - mv2.y7_separation_uniformity) <= 1e-9
        assert mv2.y5_mean_nn_dist == pytest.approx(scale * mv.y5_mean_nn_dist, rel=1e-12)
        assert mv2.y6_std_nn_dist == pytest.approx(scale * mv.y6_std_nn_dist, abs=1e-12)


def test_markers_invariant_under_agent_permutation():
    rng = np.random.default_rng(80)
    frame, vel = _random_frame(rng, n=7)
    mv = ss.compute_markers(frame, vel)
    perm = rng.permutation(7)
    mv2 = ss.compute_markers([frame[i] for i in perm], vel[perm])
    for name in SCALARS:
        a, b = mv.scalar(name), mv2.scalar(name)
        assert (math.isnan(a) and math.isnan(b)) or abs(a - b) <= 1e-12


def test_compactness_decreases_as_hull_grows():
    vel = [(0, 0)] * 4
    small = [ss.AgentState(position=p, body_radius=0.05)
             for p in [(0, 0), (1, 0), (1, 1), (0, 1)]]
    big = [ss.AgentState(position=(2 * p[0], 2 * p[1]), body_radius=0.05)
           for p in [(0, 0), (1, 0), (1, 1), (0, 1)]]
    assert ss.compute_markers(big, vel).y4_compactness > \
        ss.compute_markers(small, vel).y4_compactness


# ---------------------------------------------------------------------------
# Uniformity-exponent convention switch
# ---------------------------------------------------------------------------

def test_uniformity_exponent_switch():
    frame = [ss.AgentState(position=(float(i) ** 1.3, 0.0)) for i in range(4)]
    vel = [(0, 0)] * 4
    verbatim = ss.compute_markers(frame, vel)
    flipped = ss.compute_markers(frame, vel, negate_uniformity_exponent=True)
    ratio = verbatim.y6_std_nn_dist / verbatim.y5_mean_nn_dist
    assert verbatim.y7_separation_uniformity == pytest.approx(1 - math.exp(ratio))
    assert flipped.y7_separation_uniformity == pytest.approx(1 - math.exp(-ratio))
    assert verbatim.y7_separation_uniformity <= 0.0
    assert flipped.y7_separation_uniformity >= 0.0


# ---------------------------------------------------------------------------
# Series path
# ---------------------------------------------------------------------------

def test_series_rows_match_per_frame_computation(rigid_hexagon_log):
    series = ss.compute_marker_series(rigid_hexagon_log)
    vel = ss.finite_difference_velocities(rigid_hexagon_log)
    for k in (0, 1, 100, series.n_frames - 1):
        mv = ss.compute_markers(rigid_hexagon_log.frame(k), vel[k])
        assert series.row(k) == mv


def test_marker_csv_round_trip(tmp_path, rigid_hexagon_series):
    path = tmp_path / "markers.csv"
    rigid_hexagon_series.to_csv(path)
    header = path.read_text().splitlines()[0]
    assert header == MARKER_CSV_HEADER
    back = ss.MarkerSeries.from_csv(path)
    for name in ("times", "y1", "y3", "y4", "y5", "y6", "y7"):
        assert np.array_equal(getattr(back, name), getattr(rigid_hexagon_series, name))
    assert np.array_equal(back.y2, rigid_hexagon_series.y2)


def test_marker_csv_writes_nan_for_undefined(tmp_path):
    times = [0.0, 0.1]
    positions = np.zeros((2, 1, 2))
    series = ss.compute_marker_series(ss.TrajectoryLog(times, positions))
    path = tmp_path / "m.csv"
    series.to_csv(path)
    assert ",nan" in path.read_text().splitlines()[1]
    back = ss.MarkerSeries.from_csv(path)
    assert np.isnan(back.y5).all()


def test_behavior_columns_appended(tmp_path, rigid_hexagon_series):
    path = tmp_path / "m.csv"
    bits = np.ones(rigid_hexagon_series.n_frames, dtype=int)
    rigid_hexagon_series.to_csv(path, {"milling": bits})
    lines = path.read_text().splitlines()
    assert lines[0] == MARKER_CSV_HEADER + ",milling"
    assert lines[1].endswith(",1")


def test_unknown_marker_name_rejected(rigid_hexagon_series):
    with pytest.raises(ConfigError):
        rigid_hexagon_series.column("Y9")
    mv = rigid_hexagon_series.row(0)
    with pytest.raises(ConfigError):
        mv.scalar("speed")
