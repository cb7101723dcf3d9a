"""Online Steiner algorithms that can be played against the adversaries."""

from __future__ import annotations

import random
from collections import deque
from typing import Iterable

from .graph import Graph, UnionFind
from .greedy import ForestState, find_min_uptick_path, serve_demand


class ProtocolViolation(RuntimeError):
    """An algorithm left a request unserved or otherwise broke the protocol."""


class OnlineSteinerAlgorithm:
    """Base class. Subclasses implement the ``on_*`` callbacks.

    Each callback returns the tuple of edge ids it added; the solution only
    ever grows.
    """

    name = "base"

    def init(self, graph: Graph, root: int | None = None) -> None:
        self.graph = graph
        self.root = root
        self.solution: list[int] = []
        self.held: set[int] = set()
        self.uf = UnionFind(graph.n)

    def current_solution(self) -> frozenset[int]:
        return frozenset(self.held)

    def connected(self, u: int, v: int) -> bool:
        return self.uf.same_set(u, v)

    def _buy(self, eids: Iterable[int]) -> tuple[int, ...]:
        bought = []
        for eid in eids:
            if eid in self.held:
                continue
            self.held.add(eid)
            self.solution.append(eid)
            self.uf.union(*self.graph.edges[eid])
            bought.append(eid)
        return tuple(bought)

    def on_terminal(self, v: int) -> tuple[int, ...]:
        return self.on_pair_demand(self.root, v)

    def on_pair_demand(self, s: int, t: int) -> tuple[int, ...]:
        raise NotImplementedError

    def on_group_demand(self, group) -> tuple[int, ...]:
        raise NotImplementedError


def cheapest_connection(alg: OnlineSteinerAlgorithm, sources, targets, forbidden=frozenset(), rng=None) -> list[int]:
    """Fewest new edges joining any source to any target (0-1 BFS).

    Held edges are free. Neighbors are scanned in id order, or shuffled when
    ``rng`` is given.
    """
    g = alg.graph
    targets = set(targets)
    dist = {}
    prev = {}
    dq = deque()
    for s in sorted(set(sources)):
        dist[s] = 0
        dq.append(s)
    while dq:
        u = dq.popleft()
        if u in targets:
            path = []
            while u in prev:
                u, eid = prev[u]
                path.append(eid)
            return [eid for eid in reversed(path) if eid not in alg.held]
        nbrs = list(g.neighbors(u))
        if rng is not None:
            rng.shuffle(nbrs)
        for w, eid in nbrs:
            if eid in forbidden:
                continue
            cost = 0 if eid in alg.held else 1
            nd = dist[u] + cost
            if w not in dist or nd < dist[w]:
                dist[w] = nd
                prev[w] = (u, eid)
                if cost:
                    dq.append(w)
                else:
                    dq.appendleft(w)
    raise ProtocolViolation(f"no connection from {sorted(set(sources))} to {sorted(targets)}")


def _component(alg: OnlineSteinerAlgorithm, v: int) -> list[int]:
    r = alg.uf.find(v)
    return [u for u in range(alg.graph.n) if alg.uf.find(u) == r]


class GreedyOnline(OnlineSteinerAlgorithm):
    """The min-uptick greedy run directly on the given graph (no dummy leaves)."""

    name = "ga"

    def init(self, graph, root=None):
        super().init(graph, root)
        self.state = ForestState(graph)

    def on_pair_demand(self, s, t):
        if s == t or self.state.uf.same_set(s, t):
            return ()
        serve_demand(self.state, (s, t))
        return self._buy(self.state.steps[-1].edges)

    def on_group_demand(self, group):
        if any(self.state.uf.same_set(self.root, v) for v in group):
            return ()
        best = None
        for v in sorted(group):
            ext = find_min_uptick_path(self.graph, self.state, self.root, v)
            key = (ext.bottleneck, ext.hops, v)
            if best is None or key < best[0]:
                best = (key, ext)
        for eid in best[1].edges:
            self.state.add_edge(eid)
        return self._buy(best[1].edges)


class LowestIdGreedy(OnlineSteinerAlgorithm):
    """Connects the lowest-id group member (or the terminal) by fewest new edges."""

    name = "greedy"

    def on_pair_demand(self, s, t):
        if self.connected(s, t):
            return ()
        return self._buy(cheapest_connection(self, _component(self, s), _component(self, t)))

    def on_group_demand(self, group):
        if any(self.connected(self.root, v) for v in group):
            return ()
        v = min(group)
        return self._buy(cheapest_connection(self, _component(self, self.root), _component(self, v)))


class ExpensiveEdgeBaseline(LowestIdGreedy):
    """Never uses the terminal's own edge to the root unless forced."""

    name = "expensive"

    def on_terminal(self, v):
        if self.connected(self.root, v):
            return ()
        direct = {eid for w, eid in self.graph.neighbors(v) if w == self.root}
        try:
            path = cheapest_connection(self, [v], _component(self, self.root), forbidden=direct)
        except ProtocolViolation:
            path = cheapest_connection(self, [v], _component(self, self.root))
        return self._buy(path)


class RootEdgeBaseline(LowestIdGreedy):
    """Buys the terminal's direct edge to the root whenever one exists."""

    name = "root"

    def on_terminal(self, v):
        if self.connected(self.root, v):
            return ()
        for w, eid in self.graph.neighbors(v):
            if w == self.root:
                return self._buy([eid])
        return super().on_terminal(v)


class CoinFlipGreedy(LowestIdGreedy):
    """Randomized: ties among fewest-new-edge connections broken by a seeded coin."""

    name = "coin"

    def __init__(self, seed: int = 0):
        self.rng = random.Random(seed)

    def on_pair_demand(self, s, t):
        if self.connected(s, t):
            return ()
        return self._buy(cheapest_connection(self, _component(self, s), _component(self, t), rng=self.rng))


BUILTIN = {
    cls.name: cls for cls in (GreedyOnline, LowestIdGreedy, ExpensiveEdgeBaseline, RootEdgeBaseline, CoinFlipGreedy)
}


def solution_weight(graph: Graph, edges: Iterable[int]) -> int:
    return sum(graph.weight(e) for e in edges)
