import pytest
from hypothesis import given

from tsbridge.core import BOT, TAU, Action, make_ks, make_lts
from tsbridge.embed import embed_lts, is_reversible_ks, is_reversible_lts
from tsbridge.oracle import (
    RandomSpec,
    _bare_runs,
    bare_trace,
    check_bare_run_bijection,
    gfp_dbse,
    gfp_simulation,
    prefix_trace_ends,
    prefix_traces,
    random_ks,
    random_lts,
    random_reversible_ks,
    random_reversible_lts,
    tau_lassos,
)
from tsbridge.formats import emit_aut, emit_ks

from conftest import specs

P, Q = frozenset({"p"}), frozenset({"q"})


def test_simulation_of_single_state():
    k = make_ks([{"p"}], [(0, 0)])
    assert gfp_simulation(k) == {(0, 0)}
    distinct = make_ks([{"p"}, {"q"}], [(0, 1), (1, 0)])
    assert gfp_simulation(distinct) == {(0, 0), (1, 1)}


def test_simulation_respects_seed():
    t = make_lts(2, [(0, "a", 1), (1, "a", 0)])
    # (0, 1) needs (1, 0) to answer the a-step
    assert gfp_simulation(t, {(0, 1)}) == set()
    assert gfp_simulation(t, {(0, 1), (1, 0)}) == {(0, 1), (1, 0)}


def test_dbse_contains_identity_and_merges_chain():
    k = make_ks([{"p"}, {"p"}, {"q"}], [(0, 1), (1, 2), (2, 2)])
    rel = gfp_dbse(k)
    assert {(0, 0), (1, 1), (2, 2)} <= rel and (0, 1) in rel


def test_prefix_traces():
    k = make_ks([{"p"}, {"q"}], [(0, 1), (1, 1)])
    assert prefix_traces(k, 0, 0) == {(P,)}
    assert prefix_traces(k, 0, 2) == {(P,), (P, Q), (P, Q, Q)}
    t = make_lts(1, [(0, "tau", 0)])
    assert prefix_traces(t, 0, 2) == {(), (TAU,), (TAU, TAU)}
    assert prefix_trace_ends(t, 0, 1) == {(): {0}, (TAU,): {0}}


@given(specs(5))
def test_prefix_traces_grow_with_depth(spec):
    t = random_lts(spec)
    for d in range(4):
        assert prefix_traces(t, 0, d) <= prefix_traces(t, 0, d + 1)


def test_bare_trace():
    lab = Action.labelset({"p"})
    assert bare_trace((BOT, lab, TAU)) == (TAU,)
    assert bare_trace((Action.labelset({"q"}), BOT)) == (Action.labelset({"q"}),)
    assert bare_trace(()) == ()


@given(specs(5))
def test_bare_trace_of_a_trace_is_a_trace(spec):
    k = random_ks(spec)
    t, _ = embed_lts(k)
    ends = prefix_trace_ends(t, 0, 5)
    for sigma in ends:
        assert bare_trace(sigma) in ends


def test_bare_runs_small_instances():
    assert check_bare_run_bijection(make_ks([{"p"}], [(0, 0)]), 0, 3)
    k = make_ks([{"p"}, {"q"}], [(0, 1), (1, 1)])
    assert check_bare_run_bijection(k, 0, 4)


def test_unique_bare_labels_for_a_step():
    k = make_ks([{"p"}, {"q"}], [(0, 1), (1, 1)])
    t, _ = embed_lts(k)
    runs = [labels for states, labels in _bare_runs(t, 0, 1) if states == (0, 1)]
    assert runs == [(Action.labelset({"q"}),)]


@given(specs(5))
def test_bare_run_bijection(spec):
    k = random_ks(spec)
    assert all(check_bare_run_bijection(k, s, 4) for s in range(k.n_states))


def test_tau_lassos():
    t = make_lts(3, [(0, "tau", 0), (0, "tau", 1), (1, "tau", 0), (2, "a", 2), (1, "a", 2)])
    assert tau_lassos(t, 0) == [frozenset({0}), frozenset({0, 1})]
    assert tau_lassos(t, 2) == []


# -- generators ------------------------------------------------------------


def test_dense_single_state_is_a_loop():
    k = random_ks(RandomSpec(1, 1, 1.0, 0.3, 0))
    assert k.n_states == 1 and k.edges == {(0, 0)}


def test_degenerate_specs_rejected():
    with pytest.raises(ValueError):
        RandomSpec(0)
    with pytest.raises(ValueError):
        RandomSpec(2, density=1.5)


@given(specs(8))
def test_generators_are_deterministic(spec):
    assert emit_ks(random_ks(spec)) == emit_ks(random_ks(spec))
    assert emit_aut(random_lts(spec)) == emit_aut(random_lts(spec))
    assert emit_aut(random_reversible_lts(spec)) == emit_aut(random_reversible_lts(spec))
    assert emit_ks(random_reversible_ks(spec)) == emit_ks(random_reversible_ks(spec))


@given(specs(8))
def test_reversible_generators(spec):
    assert is_reversible_lts(random_reversible_lts(spec)) == []
    assert is_reversible_ks(random_reversible_ks(spec)) == []


def test_reversible_sample_reproduces_example_shape():
    t = random_reversible_lts(RandomSpec(1, 1, 1.0, 0.3, seed=3))
    assert {(s, str(a), u) for s, a, u in t.transitions} == {(0, "bottom", 0), (0, "{p}", 0)}
