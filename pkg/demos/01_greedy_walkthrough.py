"""Serving demands online with the min-uptick greedy."""

from fractions import Fraction

from dbsf import UNBOUNDED, ForestState, Graph, Instance, attach_dummy_terminals, find_min_uptick_path, run_ga

## A forced path s - a - t. Only a has a finite degree bound.
g = Graph(3, (UNBOUNDED, 1, UNBOUNDED), ((0, 1), (1, 2)), labels=("s", "a", "t"))
inst = Instance(g, ((0, 2),))

ext = find_min_uptick_path(g, ForestState(g), 0, 2)
print("path edges", ext.edges, "bottleneck", ext.bottleneck, "hops", ext.hops)

## Every demand endpoint is moved onto a fresh unbounded leaf before the run.
t = attach_dummy_terminals(inst)
print("after transformation: n =", t.graph.n, "demands =", t.demands)
print("labels", t.graph.labels)

## A diamond: the route through the larger bound wins, since 2/2 < 2/1.
d = Graph(4, (UNBOUNDED, 1, 2, UNBOUNDED), ((0, 1), (1, 3), (0, 2), (2, 3)), labels=("s", "a", "b", "t"))
ext = find_min_uptick_path(d, ForestState(d), 0, 3)
print("diamond picks", [d.edges[e] for e in ext.edges], "bottleneck", ext.bottleneck)

## A run records one arrival threshold per demand.
# a repeated demand gets fresh leaves, so only zero-uptick leaf edges are added
inst = Instance(d, ((0, 3), (0, 3), (1, 2)))
state, tr = run_ga(inst)
for st in tr.steps:
    print(f"step {st.index}: demand {st.demand} tau={st.tau} edges={st.edges}")
print("final degrees", tr.degrees)
print("max load", tr.max_load())

## The demand order matters; any permutation of indices is allowed.
_, rev = run_ga(inst, [2, 1, 0])
print("reversed order thresholds", [str(x) for x in rev.thresholds], "max load", rev.max_load())
assert all(isinstance(x, Fraction) for x in rev.thresholds)
