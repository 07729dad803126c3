import math

import numpy as np
import pytest

import swarmscope as ss

HEX_S = 0.8660254037844386  # sin(pi/3)

#: regular unit hexagon built so antipodal vertices are exact negations
HEXAGON = ((1.0, 0.0), (0.5, HEX_S), (-0.5, HEX_S),
           (-1.0, 0.0), (-0.5, -HEX_S), (0.5, -HEX_S))


def hexagon_states(body_radius: float = 0.05) -> list[ss.AgentState]:
    return [ss.AgentState(position=p, body_radius=body_radius) for p in HEXAGON]


@pytest.fixture(scope="session")
def hexagon_initial():
    return hexagon_states()


@pytest.fixture(scope="session")
def rigid_hexagon_log(hexagon_initial):
    cfg = ss.EngineConfig(family="rigid_rotation", n_agents=6, duration=2 * math.pi,
                          dt=0.01, params={"angular_speed": 1.0, "pivot": [0.0, 0.0]})
    return ss.simulate(cfg, hexagon_initial)


@pytest.fixture(scope="session")
def feedforward_hexagon_log(hexagon_initial):
    cfg = ss.EngineConfig(family="feedforward_field", n_agents=6,
                          duration=2 * math.pi, dt=0.01)
    return ss.simulate(cfg, hexagon_initial)


@pytest.fixture(scope="session")
def rigid_hexagon_series(rigid_hexagon_log):
    return ss.compute_marker_series(rigid_hexagon_log)


@pytest.fixture(scope="session")
def milling_verdict(rigid_hexagon_series):
    """A real debounced milling verdict (true on every frame of the ideal ring)."""
    spec = ss.default_behavior_specs()[0]
    return ss.evaluate_behavior(spec, rigid_hexagon_series)


@pytest.fixture(scope="session")
def dubins42_run(tmp_path_factory):
    """One full run of the shipped seed-42 milling scenario, reused across tests."""
    scenario = ss.load_builtin_scenario("dubins_mill_seed42")
    outdir = tmp_path_factory.mktemp("dubins42")
    report = ss.run_scenario(scenario, output_dir=outdir)
    log = ss.TrajectoryLog.from_csv(outdir / "trajectory.csv")
    series = ss.compute_marker_series(log)
    return {"scenario": scenario, "report": report, "outdir": outdir,
            "log": log, "series": series}


def random_marker_series(rng: np.random.Generator, n_frames: int = 40,
                         nan_fraction: float = 0.05) -> ss.MarkerSeries:
    """Synthetic marker series with occasional undefined entries."""
    def col(scale=1.0, offset=0.0):
        c = offset + scale * rng.standard_normal(n_frames)
        mask = rng.random(n_frames) < nan_fraction
        c[mask] = np.nan
        return c

    return ss.MarkerSeries(
        times=np.arange(n_frames) * 0.1,
        y1=np.abs(col(0.5, 1.0)),
        y2=np.column_stack([col(), col()]),
        y3=np.abs(col(2.0, 1.0)),
        y4=np.clip(col(0.4, 0.5), 0.0, 1.0),
        y5=np.abs(col(1.0, 2.0)),
        y6=np.abs(col(0.5, 0.5)),
        y7=col(0.5, -0.5),
    )
