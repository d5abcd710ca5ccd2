import random

import pytest

from rbatl import (
    EngineError,
    INF,
    Semantics,
    model_check,
    parse_formula,
    rb_atl_label,
    split,
)
from rbatl.formula import sub_ordered
from rbatl.symbolic import is_consumption_only

import modelgen


def test_refuses_production_models(fig1):
    assert not is_consumption_only(fig1)
    with pytest.raises(EngineError, match="produces"):
        rb_atl_label(fig1, parse_formula("p"))


def test_chain_thresholds(chain):
    assert is_consumption_only(chain)
    two = parse_formula("<{a}: 2> (true U p)")
    one = parse_formula("<{a}: 1> (true U p)")
    assert "c0" in rb_atl_label(chain, two)[two]
    assert "c0" not in rb_atl_label(chain, one)[one]
    assert rb_atl_label(chain, one)[one] == frozenset({"c1", "c2"})


def test_zero_inf_bound_cases(chain):
    # all-INF until reduces to the classical fixpoint
    f = parse_formula("<{a}: inf> (true U p)")
    assert rb_atl_label(chain, f)[f] == chain.state_set()
    # zero-budget always: idle loops qualify everywhere
    g = parse_formula("<{a}: 0> G true")
    assert rb_atl_label(chain, g)[g] == chain.state_set()
    # zero-budget until only reaches p for free
    h = parse_formula("<{a}: 0> (true U p)")
    assert rb_atl_label(chain, h)[h] == frozenset({"c2"})


def test_goal_states_always_labelled(chain):
    # a goal state failing the invariant is still in the until label
    f = parse_formula("<{a}: 2> (false U p)")
    assert rb_atl_label(chain, f)[f] == frozenset({"c2"})
    assert model_check(chain, f)[f] == frozenset({"c2"})


def test_ladder_uses_split_variants(chain):
    f = parse_formula("<{a}: 2> (true U p)")
    labels = rb_atl_label(chain, f)
    texts = {t for t in (
        "<{a}: 0> (true U p)", "<{a}: 1> (true U p)", "<{a}: 2> (true U p)"
    )}
    for text in texts:
        assert parse_formula(text) in labels


def test_engine_agreement_random():
    rng = random.Random(41)
    for _ in range(40):
        m = modelgen.random_consumption_model(rng)
        f = modelgen.random_formula(rng, m)
        tree_labels = model_check(m, f)
        sym_labels = rb_atl_label(m, f)
        for g in sub_ordered(f):
            assert tree_labels[g] == sym_labels[g], (g, sorted(tree_labels[g]),
                                                     sorted(sym_labels[g]))


def test_engine_agreement_with_inf_components():
    rng = random.Random(42)
    for _ in range(25):
        m = modelgen.random_consumption_model(rng)
        f = modelgen.random_formula(rng, m, inf_prob=0.3)
        tree_labels = model_check(m, f)
        sym_labels = rb_atl_label(m, f)
        for g in sub_ordered(f):
            assert tree_labels[g] == sym_labels[g]


def test_label_monotone_across_ladder(chain):
    f = parse_formula("<{a}: 3> (true U p)")
    labels = rb_atl_label(chain, f)
    prev = frozenset()
    for b in range(4):
        cur = labels[parse_formula("<{a}: %d> (true U p)" % b)]
        assert prev <= cur
        prev = cur
