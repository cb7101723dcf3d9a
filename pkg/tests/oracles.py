"""Independent reference implementations used only by the tests.

None of these share code with the package beyond the data types.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import networkx as nx

from dbsf.graph import UNBOUNDED, Graph, Instance


def bfs_components(graph: Graph, removed=frozenset(), keep=lambda eid: True):
    alive = [v for v in range(graph.n) if v not in removed]
    nbrs = {v: set() for v in alive}
    for eid, (u, v) in enumerate(graph.edges):
        if u in nbrs and v in nbrs and keep(eid):
            nbrs[u].add(v)
            nbrs[v].add(u)
    seen, out = set(), []
    for v in alive:
        if v in seen:
            continue
        comp, frontier = {v}, [v]
        while frontier:
            x = frontier.pop()
            for y in nbrs[x]:
                if y not in comp:
                    comp.add(y)
                    frontier.append(y)
        seen |= comp
        out.append(frozenset(comp))
    return out


def _load(deg, b):
    return Fraction(0) if b is UNBOUNDED else Fraction(deg) / b


def _uptick(deg, b):
    return Fraction(0) if b is UNBOUNDED else Fraction(deg + 2) / b


def connects(n, edge_list, pairs):
    label = list(range(n))
    for u, v in edge_list:
        a, b = label[u], label[v]
        if a != b:
            label = [a if x == b else x for x in label]
    return all(label[s] == label[t] for s, t in pairs)


def best_path_key(graph: Graph, held, s, t):
    """Minimum (bottleneck uptick, extension-edge count) over every simple
    path of the graph with the components of ``held`` contracted."""
    deg = [0] * graph.n
    for eid in held:
        for x in graph.edges[eid]:
            deg[x] += 1
    comps = bfs_components(graph, keep=lambda eid: eid in held)
    where = {v: i for i, c in enumerate(comps) for v in c}
    cg = nx.MultiGraph()
    cg.add_nodes_from(range(len(comps)))
    for eid, (u, v) in enumerate(graph.edges):
        if where[u] != where[v]:
            cg.add_edge(where[u], where[v], key=eid)
    best = None
    for path in nx.all_simple_edge_paths(cg, where[s], where[t]):
        eids = [k for _, _, k in path]
        verts = {x for e in eids for x in graph.edges[e]}
        key = (max(_uptick(deg[x], graph.bounds[x]) for x in verts), len(eids))
        if best is None or key < best:
            best = key
    return best


def unpruned_opt(instance: Instance) -> Fraction:
    """Minimum maximum load over every edge subset (cycles included)."""
    g = instance.graph
    best = None
    for mask in range(1 << g.m):
        chosen = [g.edges[i] for i in range(g.m) if mask >> i & 1]
        deg = [0] * g.n
        for u, v in chosen:
            deg[u] += 1
            deg[v] += 1
        val = max((_load(deg[v], g.bounds[v]) for v in range(g.n)), default=Fraction(0))
        if best is not None and val >= best:
            continue
        if connects(g.n, chosen, instance.demands):
            best = val
    return best


def unpruned_weighted_opt(graph: Graph, terminals, root, degree_cap):
    best = None
    for size in range(graph.m + 1):
        for subset in combinations(range(graph.m), size):
            deg = graph.degrees(subset)
            if max(deg) > degree_cap:
                continue
            w = sum(graph.weight(e) for e in subset)
            if best is not None and w >= best:
                continue
            if connects(graph.n, [graph.edges[e] for e in subset], [(root, x) for x in terminals]):
                best = w
    return best
