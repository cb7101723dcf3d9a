import random
from fractions import Fraction

import pytest

from dbsf.adversaries import build_weighted_gadget, fig2_tree
from dbsf.generate import generate_random
from dbsf.graph import UNBOUNDED, Graph, Instance
from dbsf.greedy import attach_dummy_terminals, run_ga
from dbsf.oracle import (
    CapExceeded,
    Infeasible,
    brute_force_opt,
    brute_force_weighted_opt,
    is_feasible_forest,
    max_load,
)
from oracles import connects, unpruned_opt, unpruned_weighted_opt


def test_feasibility_trivial(sat):
    assert not is_feasible_forest(sat.graph, [], sat.demands)
    assert is_feasible_forest(sat.graph, range(sat.graph.m), sat.demands)


@pytest.mark.parametrize("seed", range(20))
def test_feasibility_matches_oracle(seed):
    rng = random.Random(seed)
    inst = generate_random(8, 0.4, (1, 2), 3, seed)
    g = inst.graph
    subset = [e for e in range(g.m) if rng.random() < 0.5]
    expect = connects(g.n, [g.edges[e] for e in subset], inst.demands)
    assert is_feasible_forest(g, subset, inst.demands) == expect


def test_forced_path_opt(sat):
    sol = brute_force_opt(sat)
    assert sol.value == 2 and sol.delta == 1


def test_two_routes_picks_large_bound():
    g = Graph(4, (UNBOUNDED, 1, 4, UNBOUNDED), ((0, 1), (1, 3), (0, 2), (2, 3)))
    sol = brute_force_opt(Instance(g, ((0, 3),)))
    assert sol.value == Fraction(1, 2) and sol.delta == 4


def test_no_demands():
    sol = brute_force_opt(Instance(Graph(2, (1, 1), ((0, 1),))))
    assert sol.value == 0 and sol.edges == ()


def test_cap_and_infeasible(sat):
    with pytest.raises(CapExceeded):
        brute_force_opt(sat, cap=3)
    g = Graph(3, (1, 1, 1), ((0, 1),))
    with pytest.raises(Infeasible):
        brute_force_opt(Instance(g, ((0, 2),)))


def test_env_cap(sat, monkeypatch):
    monkeypatch.setenv("DBSF_ORACLE_CAP", "2")
    with pytest.raises(CapExceeded):
        brute_force_opt(sat)


@pytest.mark.parametrize("seed", range(20))
def test_opt_matches_unpruned(seed):
    rng = random.Random(seed)
    k = rng.randint(1, 3)
    inst = generate_random(rng.randint(4, 7), 0.3, (1, 2, 3, "inf"), k, seed, max_edges=13 - 2 * k)
    sol = brute_force_opt(inst)
    t = attach_dummy_terminals(inst)
    assert sol.value == unpruned_opt(t)
    assert sol.value == max_load(t.graph, sol.edges)
    assert is_feasible_forest(t.graph, sol.edges, t.demands)
    # acyclic
    assert len(sol.edges) <= t.graph.n - 1
    assert sol.delta in sol.deltas
    _, tr = run_ga(inst)
    assert tr.max_load() >= sol.value


def test_weighted_examples():
    g3 = build_weighted_gadget(3)
    assert brute_force_weighted_opt(g3, {1, 2}, 0, 3)[0] == 0
    assert sum(g3.weight(e) for e in fig2_tree(3, 2)) == 7
    g4 = build_weighted_gadget(4)
    assert sum(g4.weight(e) for e in fig2_tree(4, 3)) == 90
    assert brute_force_weighted_opt(g4, {1, 2, 3, 4}, 0, 3)[0] == 90
    assert brute_force_weighted_opt(g4, {0}, 0, 3) == (0, ())


@pytest.mark.parametrize("k,r", [(3, 1), (3, 2), (3, 3), (4, 3), (4, 4)])
def test_weighted_matches_unpruned(k, r):
    g = build_weighted_gadget(k)
    w, tree = brute_force_weighted_opt(g, range(1, r + 1), 0, 3)
    assert w == unpruned_weighted_opt(g, range(1, r + 1), 0, 3)
    assert max(g.degrees(tree)) <= 3
    assert connects(g.n, [g.edges[e] for e in tree], [(0, x) for x in range(1, r + 1)])


@pytest.mark.parametrize("seed", range(8))
def test_weighted_random_graphs(seed):
    rng = random.Random(seed)
    inst = generate_random(6, 0.5, (1,), 0, seed, max_edges=10)
    g = inst.graph
    g = Graph(g.n, g.bounds, g.edges, tuple(rng.randint(0, 9) for _ in g.edges))
    terms = rng.sample(range(1, 6), 3)
    try:
        w, _ = brute_force_weighted_opt(g, terms, 0, 2)
    except Infeasible:
        assert unpruned_weighted_opt(g, terms, 0, 2) is None
    else:
        assert w == unpruned_weighted_opt(g, terms, 0, 2)
