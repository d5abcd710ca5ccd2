"""One-step controllable predecessors and the unbounded fixpoint labelling.

Three semantics modes share the machinery and differ in two knobs: whether a
move with no outcomes counts (it does not without the idle discipline) and
which per-step budget filter applies (net joint cost, or the per-resource
consumption sum that ignores same-step production).
"""

from __future__ import annotations

import enum

from .errors import EngineError, ModelError
from .formula import (
    And,
    CoalitionAlways,
    CoalitionNext,
    CoalitionUntil,
    FalseConst,
    Formula,
    Not,
    Or,
    Prop,
    TrueConst,
    is_modal,
)
from .model import JointAction, Model
from .vectors import Vec, all_inf, is_all_inf, vec_leq, zeros


class Semantics(enum.Enum):
    RBATL = "rbatl"
    NT = "nt"
    RAL_FINITE = "ral-finite"

    @classmethod
    def from_name(cls, name: str) -> "Semantics":
        for member in cls:
            if member.value == name:
                return member
        raise EngineError(f"unknown semantics mode {name!r}")


def consumption_joint(m: Model, state: str, ja: JointAction) -> Vec:
    """Per-resource sum of the members' consumption, ignoring production."""
    total = list(zeros(m.r))
    for agent, action in zip(ja.agents, ja.actions):
        for i, c in enumerate(m.cost(state, agent, action)):
            if c > 0:
                total[i] += c
    return tuple(total)


def step_budget(m: Model, state: str, ja: JointAction, mode: Semantics) -> Vec:
    """What the step must fit under the available budget in this mode."""
    if mode is Semantics.RAL_FINITE:
        return consumption_joint(m, state, ja)
    return m.cost_joint(state, ja)


def affordable(m: Model, state: str, ja: JointAction, avail: Vec,
               mode: Semantics) -> bool:
    return vec_leq(step_budget(m, state, ja, mode), avail)


def pre(m: Model, coalition, rho, bound: Vec, mode: Semantics = Semantics.RBATL
        ) -> frozenset[str]:
    """States where the coalition has a move within `bound` whose outcomes
    all land in rho (and exist, outside the total-model semantics)."""
    agents = m.normalize_coalition(coalition)
    target = set(rho)
    result = set()
    for s in m.states:
        for ja in m.coalition_actions(s, agents):
            if not affordable(m, s, ja, bound, mode):
                continue
            outs = m.outcomes(s, ja)
            if mode is not Semantics.RBATL and not outs:
                continue
            if all(o in target for o in outs):
                result.add(s)
                break
    return frozenset(result)


def atl_label(m: Model, f: Formula, lower: dict, mode: Semantics = Semantics.RBATL
              ) -> frozenset[str]:
    """Label one formula given labels for its strict subformulas.

    Propositions and connectives are set algebra; modalities must carry the
    all-INF bound and are solved by the standard fixpoints over `pre`.
    """
    states = m.state_set()
    if isinstance(f, TrueConst):
        return states
    if isinstance(f, FalseConst):
        return frozenset()
    if isinstance(f, Prop):
        return m.proposition_states(f.name)
    if isinstance(f, Not):
        return states - lower[f.child]
    if isinstance(f, Or):
        return lower[f.left] | lower[f.right]
    if isinstance(f, And):
        return lower[f.left] & lower[f.right]
    if not is_modal(f):
        raise EngineError(f"unknown formula node: {f!r}")
    if not is_all_inf(f.bound):
        raise EngineError(
            "atl_label only handles all-inf bounds; finite bounds go to the "
            "bounded checker"
        )
    top = all_inf(m.r)
    if isinstance(f, CoalitionNext):
        return pre(m, f.coalition, lower[f.child], top, mode)
    if isinstance(f, CoalitionUntil):
        goal, hold = lower[f.goal], lower[f.hold]
        rho: frozenset[str] = frozenset()
        while True:
            nxt = goal | (hold & pre(m, f.coalition, rho, top, mode))
            if nxt == rho:
                return rho
            rho = nxt
    if isinstance(f, CoalitionAlways):
        hold = lower[f.child]
        rho = states
        while True:
            nxt = hold & pre(m, f.coalition, rho, top, mode)
            if nxt == rho:
                return rho
            rho = nxt
    raise EngineError(f"unknown modality: {f!r}")


def eval_propositional(m: Model, f: Formula) -> frozenset[str]:
    """Evaluate a modality-free formula directly against the labelling."""
    states = m.state_set()
    if isinstance(f, TrueConst):
        return states
    if isinstance(f, FalseConst):
        return frozenset()
    if isinstance(f, Prop):
        return m.proposition_states(f.name)
    if isinstance(f, Not):
        return states - eval_propositional(m, f.child)
    if isinstance(f, Or):
        return eval_propositional(m, f.left) | eval_propositional(m, f.right)
    if isinstance(f, And):
        return eval_propositional(m, f.left) & eval_propositional(m, f.right)
    raise ModelError(f"formula is not propositional: {f!r}")
