import pytest

from rbatl import Model


@pytest.fixture
def fig1():
    """Two agents, two resources; one producing loop between the first two
    states feeds the expensive move into the goal state.

    Reconstructed from its prose description: alpha produces 2 of r1 for
    1 of r2, beta trades 1 of r1 for 1 of r2 back, gamma costs 5 of r1 and
    reaches the p-state regardless of the other agent's choice.
    """
    return Model(
        agents=["a1", "a2"],
        resources=["r1", "r2"],
        states=["s_I", "s", "s_prime"],
        labels={"p": ["s_prime"]},
        actions={
            "s_I": {"a1": {"idle": (0, 0), "alpha": (-2, 1)},
                    "a2": {"idle": (0, 0)}},
            "s": {"a1": {"idle": (0, 0), "gamma": (5, 0)},
                  "a2": {"idle": (0, 0), "beta": (1, -1)}},
            "s_prime": {"a1": {"idle": (0, 0)}, "a2": {"idle": (0, 0)}},
        },
        transitions={
            "s_I": {("idle", "idle"): "s_I", ("alpha", "idle"): "s"},
            "s": {("idle", "idle"): "s", ("idle", "beta"): "s_I",
                  ("gamma", "idle"): "s_prime", ("gamma", "beta"): "s_prime"},
            "s_prime": {("idle", "idle"): "s_prime"},
        },
        total=True,
    )


@pytest.fixture
def fig4():
    """Two agents, one resource, not total: the only joint move is free as a
    sum (one produces what the other consumes) but not consumption-free."""
    return Model(
        agents=["a", "b"],
        resources=["m"],
        states=["s", "t"],
        labels={"p": ["t"]},
        actions={
            "s": {"a": {"alpha": (-1,)}, "b": {"beta": (1,)}},
            "t": {"a": {}, "b": {}},
        },
        transitions={"s": {("alpha", "beta"): "t"}},
        total=False,
    )


@pytest.fixture
def chain():
    """Consumption-only three-state chain: two unit-cost steps reach p."""
    return Model(
        agents=["a"],
        resources=["e"],
        states=["c0", "c1", "c2"],
        labels={"p": ["c2"]},
        actions={
            "c0": {"a": {"idle": (0,), "go": (1,)}},
            "c1": {"a": {"idle": (0,), "go": (1,)}},
            "c2": {"a": {"idle": (0,)}},
        },
        transitions={
            "c0": {("idle",): "c0", ("go",): "c1"},
            "c1": {("idle",): "c1", ("go",): "c2"},
            "c2": {("idle",): "c2"},
        },
        total=True,
    )


@pytest.fixture
def drain():
    """Total model where keeping p costs 1 per step: idling leaves p."""
    return Model(
        agents=["a"],
        resources=["e"],
        states=["u", "v"],
        labels={"p": ["u"]},
        actions={
            "u": {"a": {"idle": (0,), "stay": (1,)}},
            "v": {"a": {"idle": (0,)}},
        },
        transitions={
            "u": {("idle",): "v", ("stay",): "u"},
            "v": {("idle",): "v"},
        },
        total=True,
    )
