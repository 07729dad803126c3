import math

import numpy as np
import pytest

import swarmscope as ss
from swarmscope.emergence import EmergenceType

from conftest import hexagon_states


def test_builtin_contexts_classify_to_expected_types():
    expected = {
        "rigid_rotation": EmergenceType.TYPE_0_NONE,
        "feedforward_field": EmergenceType.TYPE_I_NOMINAL,
        "dubins_binary_sensor": EmergenceType.TYPE_II_WEAK,
        "distributed_formation": EmergenceType.TYPE_II_WEAK,
    }
    for name, label in expected.items():
        ctx = ss.load_builtin_context(name)
        assert ss.classify_emergence(ctx).type_label is label


def test_type_labels_serialize_verbatim():
    ctx = ss.load_builtin_context("feedforward_field")
    doc = ss.classify_emergence(ctx).to_dict()
    assert doc["type_label"] == "TypeI_Nominal"
    assert doc["rationale"][0] == {"condition": "time_varying_context", "satisfied": False}


def test_time_varying_context_dominates():
    ctx = ss.ContextDescriptor(n_components=6, coupling="rigid_single_body",
                               time_varying_context=True,
                               dynamics_family="rigid_rotation")
    verdict = ss.classify_emergence(ctx)
    assert verdict.type_label is EmergenceType.TYPE_III_STRONG
    assert verdict.rationale == (("time_varying_context", True),)


def test_single_component_is_type0_even_with_feedback_coupling():
    ctx = ss.ContextDescriptor(n_components=1, coupling="local_feedback")
    assert ss.classify_emergence(ctx).type_label is EmergenceType.TYPE_0_NONE


def test_rationale_records_rules_in_evaluation_order():
    ctx = ss.load_builtin_context("dubins_binary_sensor")
    verdict = ss.classify_emergence(ctx)
    assert [c for c, _ in verdict.rationale] == [
        "time_varying_context", "single_effective_component",
        "feedforward_only_coupling", "interactive_coupling"]
    assert [s for _, s in verdict.rationale] == [False, False, False, True]


def test_classification_reads_context_only(rigid_hexagon_log):
    # the same log under two declarations earns two different labels
    a = ss.load_builtin_context("rigid_rotation")
    b = ss.load_builtin_context("feedforward_field")
    assert ss.classify_emergence(a).type_label is not ss.classify_emergence(b).type_label


# ---------------------------------------------------------------------------
# Equifinality
# ---------------------------------------------------------------------------

def test_rigid_vs_feedforward_hexagon_is_equifinal(rigid_hexagon_log,
                                                   feedforward_hexagon_log):
    report = ss.equifinality_check(
        rigid_hexagon_log, ss.load_builtin_context("rigid_rotation"),
        feedforward_hexagon_log, ss.load_builtin_context("feedforward_field"),
        ss.default_behavior_specs(), tol=1e-5)
    assert report.equifinal
    assert report.max_position_discrepancy <= 1e-5
    assert report.behaviors_match
    assert (report.type_a, report.type_b) == (EmergenceType.TYPE_0_NONE,
                                              EmergenceType.TYPE_I_NOMINAL)


def test_log_against_itself_is_not_equifinal(rigid_hexagon_log):
    ctx = ss.load_builtin_context("rigid_rotation")
    report = ss.equifinality_check(rigid_hexagon_log, ctx, rigid_hexagon_log, ctx,
                                   ss.default_behavior_specs(), tol=1e-5)
    assert report.max_position_discrepancy == 0.0
    assert report.behaviors_match
    assert not report.equifinal  # identical declarations, identical labels


def test_rigid_ring_vs_dubins_mill_share_behavior_not_trajectories(dubins42_run):
    # a perfect rotating ring on the same grid as the converged mill
    log_b = dubins42_run["log"]
    n = log_b.n_agents
    ring = [ss.AgentState(position=(math.cos(2 * math.pi * i / n),
                                    math.sin(2 * math.pi * i / n)),
                          body_radius=0.05) for i in range(n)]
    cfg = ss.EngineConfig(family="rigid_rotation", n_agents=n,
                          duration=dubins42_run["scenario"].engine.duration,
                          dt=dubins42_run["scenario"].engine.dt,
                          log_every=dubins42_run["scenario"].engine.log_every,
                          params={"angular_speed": 1.0, "pivot": [0.0, 0.0]})
    log_a = ss.simulate(cfg, ring)
    specs = list(dubins42_run["scenario"].behaviors)
    report = ss.equifinality_check(
        log_a, ss.load_builtin_context("rigid_rotation"),
        log_b, ss.load_builtin_context("dubins_binary_sensor"),
        specs, tol=1e-5)
    assert not report.equifinal
    assert report.max_position_discrepancy > 1e-5
    milling_col = [s.id for s in specs].index("milling")
    assert report.matrix_a[-1, milling_col]
    assert report.matrix_b[-1, milling_col]


def test_equifinality_rejects_mismatched_logs(rigid_hexagon_log):
    ctx = ss.load_builtin_context("rigid_rotation")
    small = ss.TrajectoryLog(rigid_hexagon_log.times,
                             rigid_hexagon_log.positions[:, :3, :])
    with pytest.raises(ValueError, match="agent count"):
        ss.equifinality_check(rigid_hexagon_log, ctx, small, ctx, [], tol=1e-5)
    shifted = ss.TrajectoryLog(rigid_hexagon_log.times[:-1],
                               rigid_hexagon_log.positions[:-1])
    with pytest.raises(ValueError, match="time grid"):
        ss.equifinality_check(rigid_hexagon_log, ctx, shifted, ctx, [], tol=1e-5)


def test_equifinality_report_serializes(rigid_hexagon_log, feedforward_hexagon_log):
    report = ss.equifinality_check(
        rigid_hexagon_log, ss.load_builtin_context("rigid_rotation"),
        feedforward_hexagon_log, ss.load_builtin_context("feedforward_field"),
        ss.default_behavior_specs(), tol=1e-5)
    doc = report.to_dict()
    assert doc["equifinal"] is True
    assert doc["type_a"] == "Type0_None"
    assert len(doc["matrix_a"]) == rigid_hexagon_log.n_frames
