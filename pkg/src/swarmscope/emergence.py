"""Emergence typing from a declared context, and the equifinality check.

The type label is a function of the observer's declarations alone, never
of the trajectories: two bit-identical logs can earn different labels
under different contexts, and that is the point. The equifinality check
makes this executable by comparing two (log, context) pairs that agree
observably while their declared generating processes differ.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .behaviors import BehaviorSpec, behavior_matrix
from .core import ContextDescriptor, Coupling, TrajectoryLog
from .markers import compute_marker_series


class EmergenceType(str, Enum):
    TYPE_0_NONE = "Type0_None"
    TYPE_I_NOMINAL = "TypeI_Nominal"
    TYPE_II_WEAK = "TypeII_Weak"
    TYPE_III_STRONG = "TypeIII_Strong"


@dataclass(frozen=True)
class EmergenceVerdict:
    """Type label plus every decision rule consulted, in evaluation order."""

    type_label: EmergenceType
    rationale: tuple[tuple[str, bool], ...]

    def to_dict(self) -> dict:
        return {"type_label": self.type_label.value,
                "rationale": [{"condition": c, "satisfied": s} for c, s in self.rationale]}


def classify_emergence(ctx: ContextDescriptor) -> EmergenceVerdict:
    """Map a declared context to an emergence type.

    Decision order: a context that changes over time (objects created or
    destroyed) is strong emergence; a single effective component is
    non-emergent; pure feedforward coupling is nominal; any interactive
    coupling is weak.
    """
    rationale: list[tuple[str, bool]] = []

    def consult(condition: str, satisfied: bool) -> bool:
        rationale.append((condition, satisfied))
        return satisfied

    if consult("time_varying_context", ctx.time_varying_context):
        label = EmergenceType.TYPE_III_STRONG
    elif consult("single_effective_component", ctx.effective_n_components == 1):
        label = EmergenceType.TYPE_0_NONE
    elif consult("feedforward_only_coupling", ctx.coupling is Coupling.NONE_FEEDFORWARD):
        label = EmergenceType.TYPE_I_NOMINAL
    else:
        consult("interactive_coupling",
                ctx.coupling in (Coupling.LOCAL_FEEDBACK, Coupling.GLOBAL_INFORMATION))
        label = EmergenceType.TYPE_II_WEAK
    return EmergenceVerdict(type_label=label, rationale=tuple(rationale))


@dataclass(frozen=True)
class EquifinalityReport:
    """Outcome of comparing two (log, context) pairs.

    `equifinal` is set when the logs agree within tolerance, the behavior
    matrices are identical, and the two contexts still earn different
    type labels: same observables, different process.
    """

    max_position_discrepancy: float
    behaviors_match: bool
    type_a: EmergenceType
    type_b: EmergenceType
    equifinal: bool
    matrix_a: np.ndarray
    matrix_b: np.ndarray
    verdict_a: EmergenceVerdict
    verdict_b: EmergenceVerdict

    def to_dict(self) -> dict:
        return {
            "max_position_discrepancy": self.max_position_discrepancy,
            "behaviors_match": self.behaviors_match,
            "type_a": self.type_a.value,
            "type_b": self.type_b.value,
            "equifinal": self.equifinal,
            "matrix_a": self.matrix_a.astype(int).tolist(),
            "matrix_b": self.matrix_b.astype(int).tolist(),
            "verdict_a": self.verdict_a.to_dict(),
            "verdict_b": self.verdict_b.to_dict(),
        }


def equifinality_check(log_a: TrajectoryLog, ctx_a: ContextDescriptor,
                       log_b: TrajectoryLog, ctx_b: ContextDescriptor,
                       specs: Sequence[BehaviorSpec], tol: float) -> EquifinalityReport:
    """Compare two runs for observable equivalence under differing contexts."""
    if log_a.n_agents != log_b.n_agents:
        raise ValueError("logs disagree on agent count")
    if log_a.n_frames != log_b.n_frames or \
            np.max(np.abs(log_a.times - log_b.times)) > 1e-9:
        raise ValueError("logs disagree on the time grid")
    delta = log_a.positions - log_b.positions
    discrepancy = float(np.hypot(delta[..., 0], delta[..., 1]).max())
    matrix_a = behavior_matrix(specs, compute_marker_series(log_a))
    matrix_b = behavior_matrix(specs, compute_marker_series(log_b))
    behaviors_match = bool(np.array_equal(matrix_a, matrix_b))
    verdict_a = classify_emergence(ctx_a)
    verdict_b = classify_emergence(ctx_b)
    equifinal = (discrepancy <= tol and behaviors_match
                 and verdict_a.type_label is not verdict_b.type_label)
    return EquifinalityReport(
        max_position_discrepancy=discrepancy,
        behaviors_match=behaviors_match,
        type_a=verdict_a.type_label,
        type_b=verdict_b.type_label,
        equifinal=equifinal,
        matrix_a=matrix_a,
        matrix_b=matrix_b,
        verdict_a=verdict_a,
        verdict_b=verdict_b,
    )
