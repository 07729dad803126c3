"""The six-condition swarm checklist.

Looking like a swarm is not being one: the checklist reads the declared
context (how the behavior is produced) together with the detected group
behaviors (that something recognizable is produced) and only calls the
system a swarm when all six necessary conditions hold.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .behaviors import BehaviorVerdict
from .core import ContextDescriptor, Coupling

_PER_AGENT_KEY = re.compile(r"^(?P<base>.+):(?P<index>\d+)$")
_SIMILARITY_RTOL = 1e-6

CONDITION_NAMES = (
    "multiple_agents",
    "similar_agents",
    "recognizable_group_behavior",
    "agency",
    "local_interactions",
    "decentralized_no_leader",
)


@dataclass(frozen=True)
class ConditionCheck:
    passed: bool
    evidence: str

    def to_dict(self) -> dict:
        return {"passed": self.passed, "evidence": self.evidence}


@dataclass(frozen=True)
class SwarmChecklist:
    """One ConditionCheck per necessary condition; is_swarm is their conjunction."""

    multiple_agents: ConditionCheck
    similar_agents: ConditionCheck
    recognizable_group_behavior: ConditionCheck
    agency: ConditionCheck
    local_interactions: ConditionCheck
    decentralized_no_leader: ConditionCheck

    @property
    def is_swarm(self) -> bool:
        return all(getattr(self, name).passed for name in CONDITION_NAMES)

    def pattern(self) -> tuple[bool, ...]:
        """The six booleans in canonical order."""
        return tuple(getattr(self, name).passed for name in CONDITION_NAMES)

    def to_dict(self) -> dict:
        d = {name: getattr(self, name).to_dict() for name in CONDITION_NAMES}
        d["is_swarm"] = self.is_swarm
        return d

    def to_json(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n")


def _per_agent_groups(params: dict[str, float]) -> dict[str, list[float]]:
    groups: dict[str, list[float]] = {}
    for key, value in params.items():
        m = _PER_AGENT_KEY.match(key)
        if m:
            groups.setdefault(m.group("base"), []).append(float(value))
    return groups


def _similar_agents(ctx: ContextDescriptor) -> ConditionCheck:
    if ctx.effective_n_components <= 1:
        return ConditionCheck(False, "a single effective component has no peers to resemble")
    for base, values in _per_agent_groups(ctx.dynamics_params).items():
        lo, hi = min(values), max(values)
        scale = max(1.0, abs(lo), abs(hi))
        if hi - lo > _SIMILARITY_RTOL * scale:
            return ConditionCheck(
                False, f"per-agent parameter {base!r} spreads {lo} .. {hi}")
    return ConditionCheck(
        True, f"all components share dynamics_family {ctx.dynamics_family!r} "
              "with matching declared parameters")


def evaluate_swarm_gate(ctx: ContextDescriptor,
                        verdicts: Sequence[BehaviorVerdict]) -> SwarmChecklist:
    """Evaluate the six necessary conditions on a context and its verdicts.

    A group-level behavior requires a group, so recognizable_group_behavior
    additionally demands more than one effective component; without any
    debounced true interval the system cannot be a swarm regardless of its
    declarations.
    """
    multiple = ctx.effective_n_components > 1 and ctx.coupling is not Coupling.RIGID_SINGLE_BODY
    multiple_check = ConditionCheck(
        multiple,
        f"{ctx.n_components} declared component(s), "
        f"{ctx.effective_n_components} after resolution correction "
        f"(coupling={ctx.coupling.value})")

    behaving = [v.behavior_id for v in verdicts if v.has_debounced_truth]
    behavior_check = ConditionCheck(
        multiple and bool(behaving),
        f"debounced behaviors observed: {behaving}" if behaving
        else "no debounced group behavior observed")

    agency_check = ConditionCheck(
        ctx.has_control_input,
        "agents modulate their own control input" if ctx.has_control_input
        else "agents expose no control input (d_u = 0)")

    local = ctx.coupling in (Coupling.LOCAL_FEEDBACK, Coupling.GLOBAL_INFORMATION)
    local_check = ConditionCheck(
        local, f"coupling={ctx.coupling.value}")

    decentralized = (not ctx.leader_present and not ctx.group_goal_aware
                     and ctx.coupling is not Coupling.GLOBAL_INFORMATION)
    reasons = []
    if ctx.leader_present:
        reasons.append("a leader or external controller is present")
    if ctx.group_goal_aware:
        reasons.append("agents know the group-level goal")
    if ctx.coupling is Coupling.GLOBAL_INFORMATION:
        reasons.append("control uses globally shared information")
    decentralized_check = ConditionCheck(
        decentralized,
        "no leader, no group-goal awareness, no global information channel"
        if decentralized else "; ".join(reasons))

    return SwarmChecklist(
        multiple_agents=multiple_check,
        similar_agents=_similar_agents(ctx),
        recognizable_group_behavior=behavior_check,
        agency=agency_check,
        local_interactions=local_check,
        decentralized_no_leader=decentralized_check,
    )


def format_checklist_table(rows: Sequence[tuple[str, SwarmChecklist]]) -> str:
    """Aligned-column text table: one row per system, one column per condition."""
    headers = ["system"] + [name.replace("_", " ") for name in CONDITION_NAMES] + ["swarm?"]
    table = [headers]
    for name, checklist in rows:
        marks = ["x" if ok else "-" for ok in checklist.pattern()]
        table.append([name] + marks + ["x" if checklist.is_swarm else "-"])
    widths = [max(len(row[i]) for row in table) for i in range(len(headers))]
    lines = []
    for r, row in enumerate(table):
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
        if r == 0:
            lines.append("  ".join("-" * widths[i] for i in range(len(headers))))
    return "\n".join(lines)
