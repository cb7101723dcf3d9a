"""The three lower-bound constructions, played against bundled algorithms."""

from dbsf.adversaries import (
    run_group_star_adversary,
    run_tree_adversary,
    run_weighted_adversary,
    summary_line,
)
from dbsf.algorithms import CoinFlipGreedy, ExpensiveEdgeBaseline, GreedyOnline, LowestIdGreedy, RootEdgeBaseline

## Tree gadget: recursive halving forces a Z-node to collect many X-neighbours
## while an offline solution keeps every Z-node at X-degree at most 1.
for levels in (2, 3, 4, 5):
    t = run_tree_adversary(GreedyOnline(), levels)
    print(summary_line(t))

# randomized algorithms are handled by replaying seeded copies
print(summary_line(run_tree_adversary(CoinFlipGreedy, 3, trials=32)))

## Edge-weighted gadget (k = 6, n = 13): either an expensive edge is bought
## or the root degree blows up.
for alg in (ExpensiveEdgeBaseline(), RootEdgeBaseline(), GreedyOnline()):
    t = run_weighted_adversary(alg, 6)
    print(f"{alg.name:>10}: {summary_line(t)}")

## Group Steiner on a star: each group is the set of leaves not yet joined.
for n in (2, 5, 16):
    t = run_group_star_adversary(LowestIdGreedy(), n)
    print(summary_line(t), "nested groups:", t.stats["nested"])

# each record in the JSON lines transcript holds one request and the response
print(run_group_star_adversary(LowestIdGreedy(), 4).to_jsonl())
