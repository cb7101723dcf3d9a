"""Exhaustive offline optima for small instances."""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Iterable, Sequence

from .graph import UNBOUNDED, Graph, Instance, UnionFind, load
from .greedy import attach_dummy_terminals

DEFAULT_CAP = 26


class CapExceeded(Exception):
    pass


class Infeasible(Exception):
    pass


def oracle_cap(cap: int | None = None) -> int:
    if cap is not None:
        return cap
    return int(os.environ.get("DBSF_ORACLE_CAP", DEFAULT_CAP))


@dataclass(frozen=True)
class OfflineSolution:
    edges: tuple[int, ...]
    value: Fraction
    degrees: tuple[int, ...]
    delta: Fraction | object
    deltas: frozenset


def is_feasible_forest(graph: Graph, edges: Iterable[int], demands: Sequence[tuple[int, int]]) -> bool:
    uf = UnionFind(graph.n)
    for eid in edges:
        u, v = graph.edges[eid]
        uf.union(u, v)
    return all(uf.same_set(s, t) for s, t in demands)


def min_bound_used(graph: Graph, edges: Iterable[int]):
    """Smallest finite degree bound among vertices touched by ``edges``."""
    deg = graph.degrees(edges)
    finite = [graph.bounds[v] for v in range(graph.n) if deg[v] and graph.bounds[v] is not UNBOUNDED]
    return min(finite) if finite else UNBOUNDED


def max_load(graph: Graph, edges: Iterable[int]) -> Fraction:
    deg = graph.degrees(edges)
    return max((load(deg[v], graph.bounds[v]) for v in range(graph.n)), default=Fraction(0))


class _Search:
    """Exhaustive search over forests built one demand at a time.

    For the first open demand every simple path between its endpoints in the
    graph with the current forest's components contracted is tried, then the
    search recurses on the enlarged forest. Every inclusion-minimal feasible
    forest is reachable this way. ``caps[v]`` is the largest degree vertex
    ``v`` may take (``None`` for no limit), which also prunes paths early.
    """

    def __init__(self, graph: Graph, demands, caps, first_only: bool = False):
        self.g = graph
        self.demands = list(demands)
        self.caps = caps
        self.first_only = first_only
        self.best = None
        self.deltas = set()
        self.done = False

    def room(self, deg, v):
        c = self.caps[v]
        return c is None or deg[v] < c

    def run(self):
        self._visit(UnionFind(self.g.n), [0] * self.g.n, [])

    def _visit(self, uf, deg, chosen):
        if self.done:
            return
        open_demands = [(s, t) for s, t in self.demands if not uf.same_set(s, t)]
        if not open_demands:
            self._record(chosen)
            return
        if self.best is not None and len(chosen) + 1 > len(self.best):
            return
        s, t = open_demands[0]
        comp = [uf.find(v) for v in range(self.g.n)]
        self._extend(uf, deg, chosen, comp, comp[s], comp[t], {comp[s]}, [])

    def _extend(self, uf, deg, chosen, comp, here, goal, visited, path):
        g = self.g
        if self.best is not None and len(chosen) + len(path) + 1 > len(self.best):
            return
        for eid, (a, b) in enumerate(g.edges):
            if self.done:
                return
            if comp[a] == here:
                u, v = a, b
            elif comp[b] == here:
                u, v = b, a
            else:
                continue
            nxt = comp[v]
            if nxt in visited or not (self.room(deg, u) and self.room(deg, v)):
                continue
            deg[u] += 1
            deg[v] += 1
            path.append(eid)
            if nxt == goal:
                grown = uf.copy()
                for e in path:
                    grown.union(*g.edges[e])
                self._visit(grown, deg, chosen + path)
            else:
                visited.add(nxt)
                self._extend(uf, deg, chosen, comp, nxt, goal, visited, path)
                visited.discard(nxt)
            path.pop()
            deg[u] -= 1
            deg[v] -= 1

    def _record(self, chosen):
        sol = tuple(sorted(chosen))
        self.deltas.add(min_bound_used(self.g, sol))
        if self.best is None or (len(sol), sol) < (len(self.best), self.best):
            self.best = sol
        if self.first_only:
            self.done = True


def _caps_for(graph: Graph, alpha: Fraction):
    caps = []
    for b in graph.bounds:
        caps.append(None if b is UNBOUNDED else floor(alpha * b))
    return caps


def brute_force_opt(instance: Instance, cap: int | None = None) -> OfflineSolution:
    """Minimum achievable maximum load, by exhaustive search.

    The instance gets dummy terminals first. Ties between optimal edge sets
    go to fewer edges, then to the lexicographically smallest sorted edge ids.
    ``deltas`` holds the minimum-used-bound of every optimal edge set met
    during the search.
    """
    inst = attach_dummy_terminals(instance)
    g = inst.graph
    limit = oracle_cap(cap)
    if g.m > limit:
        raise CapExceeded(f"{g.m} edges exceeds oracle cap {limit}")
    demands = [(s, t) for s, t in inst.demands if s != t]
    if not demands:
        return OfflineSolution((), Fraction(0), tuple([0] * g.n), UNBOUNDED, frozenset({UNBOUNDED}))
    if not is_feasible_forest(g, range(g.m), demands):
        raise Infeasible("some demand is disconnected in the graph")

    full_deg = g.degrees(range(g.m))
    values = {Fraction(0)}
    for v, b in enumerate(g.bounds):
        if b is not UNBOUNDED:
            values.update(Fraction(d) / b for d in range(1, full_deg[v] + 1))
    values = sorted(values)

    def feasible(alpha):
        s = _Search(g, demands, _caps_for(g, alpha), first_only=True)
        s.run()
        return s.best is not None

    lo, hi = 0, len(values) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(values[mid]):
            hi = mid
        else:
            lo = mid + 1
    opt = values[lo]

    search = _Search(g, demands, _caps_for(g, opt))
    search.run()
    best = search.best
    return OfflineSolution(
        best,
        max_load(g, best),
        tuple(g.degrees(best)),
        min_bound_used(g, best),
        frozenset(search.deltas),
    )


def brute_force_weighted_opt(
    graph: Graph,
    terminals: Iterable[int],
    root: int,
    degree_cap: int,
    cap: int | None = None,
) -> tuple[int, tuple[int, ...]]:
    """Minimum total weight of an edge set linking every terminal to ``root``
    with all vertex degrees at most ``degree_cap``."""
    limit = oracle_cap(cap)
    if graph.m > limit:
        raise CapExceeded(f"{graph.m} edges exceeds oracle cap {limit}")
    targets = set(terminals) - {root}
    if not targets:
        return 0, ()
    best: list = [None]

    def visit(uf, deg, chosen, weight, excluded):
        key = (weight, len(chosen))
        if best[0] is not None and key >= best[0][:2]:
            return
        r = uf.find(root)
        if all(uf.find(x) == r for x in targets):
            best[0] = (weight, len(chosen), tuple(sorted(chosen)))
            return
        probe = uf.copy()
        for eid, (u, v) in enumerate(graph.edges):
            if eid not in excluded and deg[u] < degree_cap and deg[v] < degree_cap:
                probe.union(u, v)
        if any(not probe.same_set(x, root) for x in targets):
            return
        pick = None
        for eid, (u, v) in enumerate(graph.edges):
            if eid in excluded or (uf.find(u) == r) == (uf.find(v) == r):
                continue
            if deg[u] < degree_cap and deg[v] < degree_cap:
                pick = eid
                break
        if pick is None:
            return
        u, v = graph.edges[pick]
        branch = uf.copy()
        branch.union(u, v)
        deg[u] += 1
        deg[v] += 1
        chosen.append(pick)
        visit(branch, deg, chosen, weight + graph.weight(pick), excluded)
        chosen.pop()
        deg[u] -= 1
        deg[v] -= 1
        excluded.add(pick)
        visit(uf, deg, chosen, weight, excluded)
        excluded.discard(pick)

    visit(UnionFind(graph.n), [0] * graph.n, [], 0, set())
    if best[0] is None:
        raise Infeasible(f"terminals cannot reach root {root} within degree {degree_cap}")
    return best[0][0], best[0][2]
