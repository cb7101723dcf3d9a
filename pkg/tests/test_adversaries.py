import json
from math import ceil
from fractions import Fraction

import pytest

from dbsf.adversaries import (
    build_star,
    build_tree_lb_instance,
    build_weighted_gadget,
    fig2_tree,
    load_algorithm,
    run_group_star_adversary,
    run_tree_adversary,
    run_weighted_adversary,
    summary_line,
)
from dbsf.algorithms import (
    CoinFlipGreedy,
    ExpensiveEdgeBaseline,
    GreedyOnline,
    LowestIdGreedy,
    OnlineSteinerAlgorithm,
    ProtocolViolation,
    RootEdgeBaseline,
)
from dbsf.oracle import CapExceeded


@pytest.mark.parametrize("levels,z,x", [(1, 2, 1), (2, 4, 6), (3, 8, 28)])
def test_tree_gadget_counts(levels, z, x):
    gad = build_tree_lb_instance(levels)
    assert len(gad.Z) == z and len(gad.X) == x
    assert gad.graph.m == z * (z - 1) // 2 + 2 * x
    assert gad.graph.n == z + x


def test_tree_gadget_cap():
    with pytest.raises(CapExceeded):
        build_tree_lb_instance(7)


def test_tree_base_case():
    gad = build_tree_lb_instance(2)
    t = run_tree_adversary(GreedyOnline(), gadget=gad, S=(3,))
    assert t.requests == [] and t.stats["deg_prime_heavy"] == 0


@pytest.mark.parametrize("levels", [2, 3, 4])
def test_tree_against_ga(levels):
    t = run_tree_adversary(GreedyOnline(), levels)
    st = t.stats
    assert st["requests"] == 2 ** levels - 1
    assert st["deg_prime_heavy"] >= ceil(levels / 2)
    assert st["offline_max_deg"] <= 1
    assert st["offline_deg"][st["heavy"]] == 0
    assert st["offline_serves_all"]
    # every requested X node has both neighbours inside S
    gad = build_tree_lb_instance(levels)
    inv = {x: pair for pair, x in gad.X.items()}
    assert all(set(inv[x]) <= set(st["S"]) for x in t.requests)


def test_tree_subset():
    t = run_tree_adversary(LowestIdGreedy(), 3, S=(1, 2, 5, 6))
    assert t.stats["requests"] == 3
    assert t.stats["deg_prime_heavy"] >= 1


def test_tree_randomized():
    t = run_tree_adversary(CoinFlipGreedy, 3, trials=16, seed=1)
    st = t.stats
    assert st["deg_prime_heavy"] >= Fraction(3, 2)
    assert st["offline_max_deg"] <= 1


def test_tree_rejects_bad_subset():
    with pytest.raises(ValueError):
        run_tree_adversary(GreedyOnline(), 2, S=(0, 1, 2))


def test_weighted_gadget_shape():
    g = build_weighted_gadget(3)
    assert g.n == 7 and g.m == 9
    assert sorted(w for w in g.weights if w) == [7, 49, 343]


def test_weighted_expensive_small():
    st = run_weighted_adversary(ExpensiveEdgeBaseline(), 3).stats
    assert st["case"] == "a" and st["r"] == 1
    assert st["online_weight"] >= 7
    assert st["opt_weight"] == 0 and st["holds"]


def test_weighted_root_small():
    st = run_weighted_adversary(RootEdgeBaseline(), 3).stats
    assert st["case"] == "b" and st["root_degree"] == 3 and st["holds"]


def test_weighted_ga_k6():
    st = run_weighted_adversary(GreedyOnline(), 6).stats
    assert st["holds"]
    if st["case"] == "a":
        assert st["online_weight"] >= 13 ** st["r"]
        assert st["opt_weight"] <= st["fig2_weight"] == st["fig2_formula"]
    else:
        assert st["root_degree"] >= 6


def test_weighted_randomized():
    st = run_weighted_adversary(CoinFlipGreedy, 4, trials=8).stats
    assert st["holds"]
    for j, q in enumerate(st["q"]):
        for i in range(1, j + 2):
            assert st["p"][j][i] + q[i] >= 1


def test_fig2_tree_degrees():
    g = build_weighted_gadget(5)
    for r in range(1, 6):
        tree = fig2_tree(5, r)
        assert max(g.degrees(tree)) <= 3
        assert sum(g.weight(e) for e in tree) == sum(11 ** i for i in range(1, r))


@pytest.mark.parametrize("n", [2, 5, 16])
def test_group_star(n):
    t = run_group_star_adversary(LowestIdGreedy(), n)
    st = t.stats
    assert st["rounds"] == n - 1
    assert st["online_center_degree"] == n - 1
    assert st["offline_max_degree"] == 1
    assert st["ratio"] == n - 1
    assert st["nested"]


def test_group_star_ga():
    st = run_group_star_adversary(GreedyOnline(), 5).stats
    assert st["ratio"] == 4


def test_group_star_min_size():
    with pytest.raises(ValueError):
        build_star(1)


class Lazy(OnlineSteinerAlgorithm):
    def on_pair_demand(self, s, t):
        return ()

    def on_group_demand(self, group):
        return ()


def test_protocol_violation():
    with pytest.raises(ProtocolViolation):
        run_group_star_adversary(Lazy(), 4)
    with pytest.raises(ProtocolViolation):
        run_weighted_adversary(Lazy(), 3)
    with pytest.raises(ProtocolViolation):
        run_tree_adversary(Lazy(), 2)


def test_transcript_jsonl():
    t = run_group_star_adversary(LowestIdGreedy(), 4)
    lines = [json.loads(x) for x in t.to_jsonl().splitlines()]
    assert len(lines) == 3 and lines[0]["request"] == {"group": [1, 2, 3]}
    assert "ratio=3" in summary_line(t)


def test_load_algorithm(tmp_path):
    assert load_algorithm("ga") is GreedyOnline
    f = tmp_path / "alg.py"
    f.write_text("from dbsf.algorithms import RootEdgeBaseline\n\ndef make_algorithm():\n    return RootEdgeBaseline()\n")
    alg = load_algorithm(str(f))()
    assert isinstance(alg, RootEdgeBaseline)

