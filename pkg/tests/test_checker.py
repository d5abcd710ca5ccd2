import random

import pytest

from rbatl import (
    INF,
    FormulaError,
    ModelError,
    Model,
    Semantics,
    box_strategy,
    model_check,
    node0,
    parse_formula,
    until_strategy,
    with_bound,
)
from rbatl.checker import SearchStats, _Search
from rbatl.formula import (
    CoalitionAlways,
    CoalitionNext,
    CoalitionUntil,
    Prop,
    sub_ordered,
)
from rbatl.vectors import all_inf

import modelgen


def sat(m, text, mode=Semantics.RBATL, **kw):
    f = parse_formula(text)
    return m, f, model_check(m, f, mode, **kw)[f]


def test_fig1_positive_claims(fig1):
    for text in ("<{a1}: 3,1> (true U p)", "<{a1,a2}: 0,1> (true U p)"):
        _, _, states = sat(fig1, text)
        assert "s_I" in states, text


def test_fig1_negative_claims(fig1):
    for text in (
        "<{a1}: 2,1> (true U p)",
        "<{a1}: 3,0> (true U p)",
        "<{a1}: 0,0> (true U p)",
        "<{a1,a2}: 0,0> (true U p)",
    ):
        _, _, states = sat(fig1, text)
        assert "s_I" not in states, text


def test_until_goal_state_needs_no_budget(fig1):
    _, _, states = sat(fig1, "<{a1}: 0,0> (false U p)")
    assert states == frozenset({"s_prime"})


def test_until_guard_prunes(fig1):
    f = parse_formula("<{a1}: 9,9> (true U q)")
    m = Model(
        agents=fig1.agents, resources=fig1.resources, states=fig1.states,
        labels={"p": ["s_prime"], "q": []},
        actions=fig1.actions, transitions=fig1.transitions, total=True,
    )
    labels = model_check(m, f)
    assert labels[f] == frozenset()


def test_box_zero_cost_idling(fig1):
    _, _, states = sat(fig1, "<{a1,a2}: 0,0> G true")
    assert states == fig1.state_set()


def test_box_draining_invariant(drain):
    # keeping p costs one unit per step: no finite budget suffices,
    # while the unbounded modality holds classically
    for b in ("0", "3", "9"):
        _, _, states = sat(drain, "<{a}: %s> G p" % b)
        assert "u" not in states, b
    _, _, states = sat(drain, "<{a}: inf> G p")
    assert "u" in states


def test_box_equal_loop_succeeds_at_zero(drain):
    _, _, states = sat(drain, "<{a}: 0> G true")
    assert states == drain.state_set()


def test_next_dispatches_to_pre(fig1):
    _, _, states = sat(fig1, "<{a1}: 5,0> X p")
    assert states == frozenset({"s", "s_prime"})
    _, _, states = sat(fig1, "<{a1}: 4,0> X p")
    assert states == frozenset({"s_prime"})


def test_and_or_not_desugaring_consistency(fig1):
    m, f, states = sat(fig1, "p & !p | true & false")
    assert states == frozenset()
    _, _, states = sat(fig1, "!(p | !p)")
    assert states == frozenset()


def test_model_check_rejects_bad_inputs(fig1):
    with pytest.raises(FormulaError):
        model_check(fig1, parse_formula("<{a1}: 1> X p"))  # wrong arity
    with pytest.raises(FormulaError):
        model_check(fig1, parse_formula("mystery"))
    broken = Model(
        agents=fig1.agents, resources=fig1.resources, states=fig1.states,
        labels=fig1.labels,
        actions={**fig1.actions,
                 "s": {"a1": {"idle": (0, 0)}, "a2": {"idle": (0, 0)}}},
        transitions=fig1.transitions, total=True,
    )
    with pytest.raises(ModelError):
        model_check(broken, parse_formula("p"))


def test_direct_strategy_entry_points(fig1):
    f = parse_formula("<{a1,a2}: 0,1> (true U p)")
    labels = model_check(fig1, f)
    assert until_strategy(fig1, node0("s_I", (0, 1)), f, labels) is True
    assert until_strategy(fig1, node0("s_I", (0, 0)),
                          with_bound(f, (0, 0)), labels) is False
    g = parse_formula("<{a1}: 0,0> G true")
    glabels = model_check(fig1, g)
    assert box_strategy(fig1, node0("s", (0, 0)), g, glabels) is True


def test_inf_bound_search_equals_fixpoint_labelling():
    rng = random.Random(21)
    for _ in range(25):
        m = modelgen.random_model(rng)
        top = all_inf(m.r)
        A = modelgen.random_coalition(rng, m)
        hold = modelgen.random_propositional(rng)
        goal = modelgen.random_propositional(rng)
        for f in (CoalitionUntil(A, top, hold, goal),
                  CoalitionAlways(A, top, hold)):
            labels = model_check(m, f)
            search = _Search(m, f, labels, Semantics.RBATL, SearchStats())
            if isinstance(f, CoalitionUntil):
                got = frozenset(
                    s for s in m.states if search.until(node0(s, top))[0]
                )
            else:
                got = frozenset(
                    s for s in m.states if search.box(node0(s, top))[0]
                )
            assert got == labels[f]


def test_bound_monotonicity_random():
    rng = random.Random(22)
    for _ in range(30):
        m = modelgen.random_model(rng)
        A = modelgen.random_coalition(rng, m)
        hold = modelgen.random_propositional(rng)
        goal = modelgen.random_propositional(rng)
        b = modelgen.random_bound(rng, m)
        bigger = tuple(x + rng.randint(0, 2) for x in b)
        kind = rng.choice(("U", "G", "X"))
        if kind == "U":
            small = CoalitionUntil(A, b, hold, goal)
        elif kind == "G":
            small = CoalitionAlways(A, b, hold)
        else:
            small = CoalitionNext(A, b, hold)
        large = with_bound(small, bigger)
        unbounded = with_bound(small, all_inf(m.r))
        low = model_check(m, small)[small]
        high = model_check(m, large)[large]
        top = model_check(m, unbounded)[unbounded]
        assert low <= high <= top


def test_implicit_hold_soundness():
    # every state satisfying the unbounded until outside the goal region
    # must satisfy the hold formula (justifies skipping an explicit check)
    rng = random.Random(23)
    for _ in range(25):
        m = modelgen.random_model(rng)
        A = modelgen.random_coalition(rng, m)
        hold = modelgen.random_propositional(rng)
        goal = modelgen.random_propositional(rng)
        f = CoalitionUntil(A, all_inf(m.r), hold, goal)
        labels = model_check(m, f)
        assert labels[f] - labels[goal] <= labels[hold]


def test_cache_never_changes_answers():
    rng = random.Random(24)
    for _ in range(30):
        m = modelgen.random_model(rng)
        f = modelgen.random_formula(rng, m)
        plain = model_check(m, f, use_cache=False)
        cached = model_check(m, f, use_cache=True)
        assert all(plain[g] == cached[g] for g in sub_ordered(f))


def test_single_resource_depth_bound():
    rng = random.Random(25)
    for _ in range(30):
        m = modelgen.random_model(rng, r=1)
        f = modelgen.random_formula(rng, m, modal_depth=1)
        stats = SearchStats()
        model_check(m, f, stats=stats)
        assert stats.max_depth <= 2 * len(m.states) + 1


def test_ral_mode_uses_consumption_filter(fig4):
    f = parse_formula("<{a,b}: 0> X p")
    assert "s" in model_check(fig4, f, Semantics.RBATL)[f]
    assert "s" in model_check(fig4, f, Semantics.NT)[f]
    assert "s" not in model_check(fig4, f, Semantics.RAL_FINITE)[f]
    g = parse_formula("<{a,b}: 1> X p")
    assert "s" in model_check(fig4, g, Semantics.RAL_FINITE)[g]


def test_ral_mode_until(fig4):
    f = parse_formula("<{a,b}: 0> (true U p)")
    assert "s" in model_check(fig4, f, Semantics.NT)[f]
    assert "s" not in model_check(fig4, f, Semantics.RAL_FINITE)[f]


def test_stats_are_populated(fig1):
    f = parse_formula("<{a1,a2}: 0,1> (true U p)")
    stats = SearchStats()
    model_check(fig1, f, stats=stats)
    assert stats.nodes > 0
    assert stats.max_depth >= 3
    assert stats.pumps >= 1
