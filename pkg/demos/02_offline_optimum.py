"""Exact offline optimum on small instances, and how the greedy compares."""

from dbsf import UNBOUNDED, Graph, Instance, brute_force_opt, generate_random, run_ga
from dbsf.graph import format_bound

## Two disjoint routes: one through a vertex of bound 1, one through bound 4.
g = Graph(4, (UNBOUNDED, 1, 4, UNBOUNDED), ((0, 1), (1, 3), (0, 2), (2, 3)))
sol = brute_force_opt(Instance(g, ((0, 3),)))
print("OPT", sol.value, "delta", format_bound(sol.delta))

## Random instances. OPT is the smallest achievable maximum load; the set of
## deltas collects the minimum used bound of every optimal edge set found.
print(f"{'seed':>4} {'n':>3} {'m':>3} {'h':>6} {'OPT':>6} deltas")
for seed in range(8):
    inst = generate_random(8, 0.3, (1, 2, 3, "inf"), 3, seed)
    sol = brute_force_opt(inst)
    h = run_ga(inst)[1].max_load()
    deltas = " ".join(format_bound(d) for d in sorted(sol.deltas, key=lambda b: (b is UNBOUNDED, 0 if b is UNBOUNDED else b)))
    print(f"{seed:>4} {inst.graph.n:>3} {inst.graph.m:>3} {str(h):>6} {str(sol.value):>6} {deltas}")
    assert h >= sol.value

## The edge cap guards against blow-up (override with DBSF_ORACLE_CAP).
big = generate_random(14, 0.5, (1, 2), 4, 0)
try:
    brute_force_opt(big)
except Exception as exc:
    print(type(exc).__name__, exc)
