"""Online greedy algorithm for degree-bounded Steiner forest.

Each arriving demand is served by the path whose extension part (edges
joining two different components of the current solution) has the smallest
bottleneck uptick load; ties go to the path with fewer extension edges.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .graph import UNBOUNDED, Graph, Instance, UnionFind, load, uptick


class NoPath(Exception):
    """Demand endpoints are disconnected in the input graph."""

    def __init__(self, s: int, t: int, index: int | None = None):
        self.s, self.t, self.index = s, t, index
        where = "" if index is None else f" (demand {index})"
        super().__init__(f"no path between {s} and {t}{where}")


@dataclass(frozen=True)
class ExtensionPath:
    edges: tuple[int, ...]
    vertices: frozenset[int]
    bottleneck: Fraction
    hops: int


@dataclass(frozen=True)
class Step:
    index: int
    demand: tuple[int, int]
    tau: Fraction
    edges: tuple[int, ...]
    already_connected: bool = False


class ForestState:
    """The online solution H: chosen edges, degrees, connectivity, thresholds."""

    def __init__(self, graph: Graph):
        self.graph = graph
        self.edges: list[int] = []
        self.edge_set: set[int] = set()
        self.degree = [0] * graph.n
        self.uf = UnionFind(graph.n)
        self.steps: list[Step] = []

    def load(self, v: int) -> Fraction:
        return load(self.degree[v], self.graph.bounds[v])

    def uptick(self, v: int) -> Fraction:
        return uptick(self.degree[v], self.graph.bounds[v])

    def max_load(self) -> Fraction:
        return max((self.load(v) for v in range(self.graph.n)), default=Fraction(0))

    @property
    def thresholds(self) -> list[Fraction]:
        return [st.tau for st in self.steps]

    def add_edge(self, eid: int) -> None:
        u, v = self.graph.edges[eid]
        if not self.uf.union(u, v):
            raise ValueError(f"edge {eid} would close a cycle in H")
        self.edges.append(eid)
        self.edge_set.add(eid)
        self.degree[u] += 1
        self.degree[v] += 1

    def copy(self) -> ForestState:
        other = ForestState.__new__(ForestState)
        other.graph = self.graph
        other.edges = list(self.edges)
        other.edge_set = set(self.edge_set)
        other.degree = list(self.degree)
        other.uf = self.uf.copy()
        other.steps = list(self.steps)
        return other


def vertex_load(state: ForestState, v: int) -> Fraction:
    return state.load(v)


def uptick_load(state: ForestState, v: int) -> Fraction:
    return state.uptick(v)


def attach_dummy_terminals(instance: Instance) -> Instance:
    """Move every demand endpoint occurrence onto a fresh unbounded leaf.

    Vertex ``n + 2k`` becomes the source of demand ``k`` and ``n + 2k + 1``
    its sink; each is joined to the original endpoint by one new edge.
    """
    if instance.transformed or not instance.demands:
        return instance
    g = instance.graph
    for s, t in instance.demands:
        if not (0 <= s < g.n and 0 <= t < g.n):
            raise ValueError(f"demand endpoint out of range: ({s}, {t})")
    bounds = list(g.bounds)
    edges = list(g.edges)
    weights = None if g.weights is None else list(g.weights)
    labels = None if g.labels is None else list(g.labels)
    demands = []
    nxt = g.n
    for k, (s, t) in enumerate(instance.demands):
        pair = []
        for end in (s, t):
            bounds.append(UNBOUNDED)
            edges.append((end, nxt))
            if weights is not None:
                weights.append(0)
            if labels is not None:
                labels.append(f"{labels[end]}'{k}")
            pair.append(nxt)
            nxt += 1
        demands.append(tuple(pair))
    graph = Graph(
        nxt,
        tuple(bounds),
        tuple(edges),
        None if weights is None else tuple(weights),
        None if labels is None else tuple(labels),
    )
    return Instance(graph, tuple(demands), instance.groups, transformed=True)


def _edge_cost(state: ForestState, eid: int) -> Fraction:
    u, v = state.graph.edges[eid]
    return max(state.uptick(u), state.uptick(v))


def find_min_uptick_path(graph: Graph, state: ForestState, s: int, t: int) -> ExtensionPath:
    """Extension path minimizing (bottleneck uptick load, number of extension edges).

    Works on the graph with each component of H contracted to a node. The
    minimum bottleneck is found by adding extension edges in cost order to a
    copy of H's connectivity; then a BFS restricted to edges of cost at most
    that bottleneck yields the fewest extension edges. On ties the path is
    rebuilt from ``t`` choosing, at every contracted node, the incoming edge
    with the smallest (predecessor vertex, current vertex, edge id).
    """
    if s == t:
        raise ValueError("demand endpoints must differ")
    uf = state.uf
    if uf.same_set(s, t):
        raise ValueError(f"{s} and {t} are already connected in H")
    comp = [uf.find(v) for v in range(graph.n)]
    ext = [eid for eid, (u, v) in enumerate(graph.edges) if comp[u] != comp[v]]
    cost = {eid: _edge_cost(state, eid) for eid in ext}

    probe = UnionFind(graph.n)
    for v in range(graph.n):
        probe.union(v, comp[v])
    limit = None
    for eid in sorted(ext, key=lambda e: (cost[e], e)):
        u, v = graph.edges[eid]
        probe.union(u, v)
        if probe.same_set(s, t):
            limit = cost[eid]
            break
    if limit is None:
        raise NoPath(s, t)

    # contracted adjacency: component -> [(neighbor component, u, v, eid)]
    adj: dict[int, list[tuple[int, int, int, int]]] = {}
    for eid in ext:
        if cost[eid] > limit:
            continue
        u, v = graph.edges[eid]
        adj.setdefault(comp[u], []).append((comp[v], u, v, eid))
        adj.setdefault(comp[v], []).append((comp[u], v, u, eid))

    src, dst = comp[s], comp[t]
    dist = {src: 0}
    queue = deque([src])
    while queue:
        c = queue.popleft()
        for d, _, _, _ in adj.get(c, ()):
            if d not in dist:
                dist[d] = dist[c] + 1
                queue.append(d)

    path: list[int] = []
    cur = dst
    while cur != src:
        best = None
        for d, here, there, eid in adj[cur]:
            if dist.get(d) == dist[cur] - 1:
                cand = (there, here, eid, d)
                if best is None or cand < best:
                    best = cand
        path.append(best[2])
        cur = best[3]
    path.reverse()
    verts = frozenset(x for eid in path for x in graph.edges[eid])
    bottleneck = max(state.uptick(x) for x in verts)
    return ExtensionPath(tuple(path), verts, bottleneck, len(path))


def serve_demand(state: ForestState, demand: tuple[int, int]) -> ForestState:
    """Connect ``demand`` in place, recording its arrival threshold."""
    s, t = demand
    index = len(state.steps) + 1
    if state.uf.same_set(s, t):
        state.steps.append(Step(index, (s, t), Fraction(0), (), already_connected=True))
        return state
    try:
        ext = find_min_uptick_path(state.graph, state, s, t)
    except NoPath as exc:
        raise NoPath(s, t, index) from exc
    for eid in ext.edges:
        state.add_edge(eid)
    state.steps.append(Step(index, (s, t), ext.bottleneck, ext.edges))
    return state


@dataclass
class GaTranscript:
    """Record of one run: the (transformed) instance, arrival order and steps."""

    instance: Instance
    order: tuple[int, ...]
    steps: list[Step]
    degrees: list[int]
    state: ForestState | None = field(default=None, repr=False)

    @property
    def graph(self) -> Graph:
        return self.instance.graph

    @property
    def demands(self) -> list[tuple[int, int]]:
        return [st.demand for st in self.steps]

    @property
    def thresholds(self) -> list[Fraction]:
        return [st.tau for st in self.steps]

    @property
    def edges(self) -> list[int]:
        return [eid for st in self.steps for eid in st.edges]

    def final_load(self, v: int) -> Fraction:
        return load(self.degrees[v], self.graph.bounds[v])

    def final_uptick(self, v: int) -> Fraction:
        return uptick(self.degrees[v], self.graph.bounds[v])

    def max_load(self) -> Fraction:
        return max((self.final_load(v) for v in range(self.graph.n)), default=Fraction(0))


def run_ga(instance: Instance, order: Sequence[int] | None = None) -> tuple[ForestState, GaTranscript]:
    """Attach dummy terminals, then serve the demands in ``order`` (indices)."""
    inst = attach_dummy_terminals(instance)
    if order is None:
        order = range(len(inst.demands))
    order = tuple(order)
    if sorted(order) != list(range(len(inst.demands))):
        raise ValueError("order must be a permutation of the demand indices")
    state = ForestState(inst.graph)
    for k in order:
        serve_demand(state, inst.demands[k])
    return state, GaTranscript(inst, order, list(state.steps), list(state.degree), state)


def replay(instance: Instance, order: Sequence[int], step_edges: Sequence[Sequence[int]]) -> GaTranscript:
    """Rebuild a transcript from stored per-step edge lists.

    Thresholds are recomputed from the pre-step state, so a stored run whose
    edges are not extension edges raises ``ValueError``.
    """
    inst = attach_dummy_terminals(instance)
    order = tuple(order)
    state = ForestState(inst.graph)
    for idx, (k, eids) in enumerate(zip(order, step_edges), start=1):
        s, t = inst.demands[k]
        if not eids:
            if not state.uf.same_set(s, t):
                raise ValueError(f"step {idx} adds no edges but demand is unconnected")
            state.steps.append(Step(idx, (s, t), Fraction(0), (), already_connected=True))
            continue
        verts = {x for eid in eids for x in inst.graph.edges[eid]}
        tau = max(state.uptick(x) for x in verts)
        for eid in eids:
            state.add_edge(eid)
        if not state.uf.same_set(s, t):
            raise ValueError(f"step {idx} leaves its demand unconnected")
        state.steps.append(Step(idx, (s, t), tau, tuple(eids)))
    return GaTranscript(inst, order, list(state.steps), list(state.degree), state)
