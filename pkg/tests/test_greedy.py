import random
from fractions import Fraction

import pytest

from dbsf.generate import generate_random
from dbsf.graph import UNBOUNDED, Graph, Instance
from dbsf.greedy import (
    ForestState,
    attach_dummy_terminals,
    find_min_uptick_path,
    replay,
    run_ga,
    serve_demand,
    uptick_load,
    vertex_load,
)
from oracles import best_path_key, bfs_components


def test_vertex_load_helpers(sat):
    state = ForestState(sat.graph)
    assert vertex_load(state, 1) == 0 and uptick_load(state, 1) == 2
    state.add_edge(0)
    assert vertex_load(state, 1) == 1 and uptick_load(state, 1) == 3
    assert uptick_load(state, 0) == 0


def test_dummy_terminals_on_triangle():
    g = Graph(3, (1, 1, 1), ((0, 1), (1, 2), (0, 2)))
    t = attach_dummy_terminals(Instance(g, ((0, 1),)))
    assert t.graph.n == 5 and t.graph.m == 5
    assert t.demands == ((3, 4),)
    assert t.graph.edges[3:] == ((0, 3), (1, 4))
    assert t.graph.bounds[3] is UNBOUNDED and t.graph.bounds[4] is UNBOUNDED
    assert attach_dummy_terminals(t) is t


def test_dummy_terminals_no_demands():
    inst = Instance(Graph(2, (1, 1), ((0, 1),)))
    assert attach_dummy_terminals(inst) is inst


def test_dummy_terminals_shared_endpoint():
    g = Graph(4, (1,) * 4, ((0, 1), (0, 2), (0, 3)))
    t = attach_dummy_terminals(Instance(g, ((0, 1), (0, 2), (3, 0))))
    assert t.graph.n == 10
    assert t.graph.degrees(range(t.graph.m))[0] == 3 + 3


def test_forced_path(sat):
    ext = find_min_uptick_path(sat.graph, ForestState(sat.graph), 0, 2)
    assert ext.edges == (0, 1)
    assert ext.bottleneck == 2 and ext.hops == 2


def test_diamond_prefers_larger_bound():
    # s=0, a=1 (b=1), b=2 (b=2), t=3
    g = Graph(4, (UNBOUNDED, 1, 2, UNBOUNDED), ((0, 1), (1, 3), (0, 2), (2, 3)))
    ext = find_min_uptick_path(g, ForestState(g), 0, 3)
    assert ext.edges == (2, 3) and ext.bottleneck == 1


def test_serve_and_repeat(sat):
    state = ForestState(sat.graph)
    serve_demand(state, (0, 2))
    assert state.steps[0].tau == 2 and state.degree[1] == 2
    assert state.uf.same_set(0, 2)
    serve_demand(state, (0, 2))
    assert state.steps[1].tau == 0 and state.steps[1].edges == ()
    assert state.steps[1].already_connected


def test_empty_run():
    _, tr = run_ga(Instance(Graph(3, (1, 1, 1), ((0, 1),))))
    assert tr.steps == [] and tr.max_load() == 0


def test_sat_run(sat):
    _, tr = run_ga(sat)
    assert tr.max_load() == 2


def _random_forest(graph, rng):
    order = list(range(graph.m))
    rng.shuffle(order)
    state = ForestState(graph)
    for eid in order[: rng.randint(0, graph.m)]:
        u, v = graph.edges[eid]
        if not state.uf.same_set(u, v):
            state.add_edge(eid)
    return state


@pytest.mark.parametrize("seed", range(40))
def test_path_matches_all_paths_oracle(seed):
    rng = random.Random(seed)
    inst = generate_random(rng.randint(3, 8), 0.4, (1, 2, 3, "inf"), 0, seed)
    g = inst.graph
    state = _random_forest(g, rng)
    pairs = [(s, t) for s in range(g.n) for t in range(s + 1, g.n) if not state.uf.same_set(s, t)]
    if not pairs:
        return
    s, t = rng.choice(pairs)
    ext = find_min_uptick_path(g, state, s, t)
    assert (ext.bottleneck, ext.hops) == best_path_key(g, set(state.edges), s, t)
    # the path really joins s and t through H
    comps = bfs_components(g, keep=lambda e: e in state.edge_set or e in ext.edges)
    assert any(s in c and t in c for c in comps)


@pytest.mark.parametrize("seed", range(15))
def test_two_demand_run_matches_stepwise_oracle(seed):
    inst = generate_random(7, 0.4, (1, 2, 3, "inf"), 2, seed)
    _, tr = run_ga(inst)
    held = set()
    for st in tr.steps:
        s, t = st.demand
        if st.already_connected:
            continue
        assert (st.tau, len(st.edges)) == best_path_key(tr.graph, held, s, t)
        held |= set(st.edges)


@pytest.mark.parametrize("seed", range(25))
def test_transcript_properties(seed):
    inst = generate_random(9, 0.3, (1, 2, 3, "inf"), 4, seed)
    rng = random.Random(seed)
    order = list(range(4))
    rng.shuffle(order)
    _, tr = run_ga(inst, order)
    g = tr.graph
    state = ForestState(g)
    for st in tr.steps:
        before = list(state.degree)
        comps = bfs_components(g, keep=lambda e: e in state.edge_set)
        verts = {x for e in st.edges for x in g.edges[e]}
        if st.tau > 0:
            assert st.tau == max(state.uptick(x) for x in verts)
        for c in comps:
            assert len(verts & c) <= 2
        for eid in st.edges:
            state.add_edge(eid)
        assert all(state.degree[v] - before[v] <= 2 for v in range(g.n))
        for v in range(g.n):
            assert tr.final_uptick(v) >= state.uptick(v)
    # acyclic: a forest has n - components edges
    assert len(tr.edges) == g.n - len(bfs_components(g, keep=lambda e: e in set(tr.edges)))


def test_replay_recomputes_thresholds():
    inst = generate_random(8, 0.4, (1, 2, 3, "inf"), 3, 5)
    _, tr = run_ga(inst)
    again = replay(inst, tr.order, [st.edges for st in tr.steps])
    assert again.thresholds == tr.thresholds and again.degrees == tr.degrees


def test_replay_rejects_bad_edges(sat):
    with pytest.raises(ValueError):
        replay(sat, [0], [[0]])


def test_order_must_be_permutation(sat):
    with pytest.raises(ValueError):
        run_ga(sat, [0, 0])


def test_thresholds_exact():
    _, tr = run_ga(generate_random(10, 0.3, (1, 2, 3, "inf"), 5, 3))
    assert all(isinstance(t, Fraction) for t in tr.thresholds)
