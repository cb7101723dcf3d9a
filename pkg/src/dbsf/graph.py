"""Exact-rational graph substrate: degree bounds, instances, connectivity."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Iterable, Sequence


class Unbounded:
    """Degree bound of infinity. Use the ``UNBOUNDED`` singleton."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "UNBOUNDED"

    def __reduce__(self):
        return (Unbounded, ())


UNBOUNDED = Unbounded()


def is_finite(bound) -> bool:
    return bound is not UNBOUNDED


def as_bound(value) -> Fraction | Unbounded:
    """Coerce ints, Fractions, ``"p/q"`` strings and ``"inf"`` to a bound."""
    if value is UNBOUNDED or value is None:
        return UNBOUNDED
    if isinstance(value, str):
        if value.strip().lower() in ("inf", "infinity"):
            return UNBOUNDED
        value = parse_rational(value)
    q = Fraction(value)
    if q <= 0:
        raise ValueError(f"degree bound must be positive, got {value!r}")
    return q


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if "." in text or "e" in text.lower():
        raise ValueError(f"not an exact rational: {text!r}")
    return Fraction(text)


def format_rational(q: Fraction | int) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_bound(bound) -> str:
    return "inf" if bound is UNBOUNDED else format_rational(bound)


def load(degree: int, bound) -> Fraction:
    if bound is UNBOUNDED:
        return Fraction(0)
    return Fraction(degree) / bound


def uptick(degree: int, bound) -> Fraction:
    """Load ``degree`` would reach if one more path passed through the vertex."""
    if bound is UNBOUNDED:
        return Fraction(0)
    return Fraction(degree + 2) / bound


@dataclass(frozen=True)
class Graph:
    """Undirected multigraph on vertices ``0..n-1`` with per-vertex degree bounds.

    Edges are addressed by their index in ``edges``; ``weights`` is either
    ``None`` or one nonnegative integer per edge.
    """

    n: int
    bounds: tuple
    edges: tuple[tuple[int, int], ...]
    weights: tuple[int, ...] | None = None
    labels: tuple[str, ...] | None = None
    _adj: tuple = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if len(self.bounds) != self.n:
            raise ValueError("one degree bound per vertex required")
        object.__setattr__(self, "bounds", tuple(as_bound(b) for b in self.bounds))
        object.__setattr__(self, "edges", tuple((int(u), int(v)) for u, v in self.edges))
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) out of range")
        if self.weights is not None and not self.edges and not self.weights:
            object.__setattr__(self, "weights", None)
        if self.weights is not None:
            if len(self.weights) != len(self.edges):
                raise ValueError("one weight per edge required")
            if any(w < 0 for w in self.weights):
                raise ValueError("edge weights must be nonnegative")
            object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        if self.labels is not None and len(self.labels) != self.n:
            raise ValueError("one label per vertex required")
        adj = [[] for _ in range(self.n)]
        for eid, (u, v) in enumerate(self.edges):
            adj[u].append((v, eid))
            adj[v].append((u, eid))
        object.__setattr__(self, "_adj", tuple(tuple(sorted(a)) for a in adj))

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> tuple[tuple[int, int], ...]:
        """``(neighbor, edge_id)`` pairs sorted by neighbor then edge id."""
        return self._adj[v]

    def weight(self, eid: int) -> int:
        return 0 if self.weights is None else self.weights[eid]

    def label(self, v: int) -> str:
        return str(v) if self.labels is None else self.labels[v]

    def degrees(self, edge_ids: Iterable[int]) -> list[int]:
        deg = [0] * self.n
        for eid in edge_ids:
            u, v = self.edges[eid]
            deg[u] += 1
            deg[v] += 1
        return deg


@dataclass(frozen=True)
class Instance:
    """A graph plus pair demands ``(s, t)`` and optional group demands."""

    graph: Graph
    demands: tuple[tuple[int, int], ...] = ()
    groups: tuple[tuple[int, ...], ...] = ()
    transformed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "demands", tuple((int(s), int(t)) for s, t in self.demands))
        object.__setattr__(self, "groups", tuple(tuple(int(v) for v in g) for g in self.groups))
        n = self.graph.n
        for s, t in self.demands:
            if not (0 <= s < n and 0 <= t < n):
                raise ValueError(f"demand ({s}, {t}) references a vertex out of range")
        for g in self.groups:
            if not g or any(not 0 <= v < n for v in g):
                raise ValueError(f"bad group demand {g}")

    def with_demands(self, demands) -> Instance:
        return replace(self, demands=tuple(demands))


class UnionFind:
    """Disjoint sets over ``0..n-1`` with union by size and path compression."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.count = n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.count -= 1
        return True

    def same_set(self, a: int, b: int) -> bool:
        return self.find(a) == self.find(b)

    def copy(self) -> UnionFind:
        uf = UnionFind.__new__(UnionFind)
        uf.parent = list(self.parent)
        uf.size = list(self.size)
        uf.count = self.count
        return uf


def connected_components(
    graph: Graph,
    removed: Iterable[int] = (),
    edge_filter: Callable[[int], bool] | None = None,
) -> list[frozenset[int]]:
    """Components of ``graph`` minus the ``removed`` vertices.

    Only edges with both endpoints surviving and (if given) accepted by
    ``edge_filter(edge_id)`` are used. Components come sorted by their
    smallest vertex.
    """
    gone = set(removed)
    uf = UnionFind(graph.n)
    for eid, (u, v) in enumerate(graph.edges):
        if u in gone or v in gone:
            continue
        if edge_filter is not None and not edge_filter(eid):
            continue
        uf.union(u, v)
    groups: dict[int, list[int]] = {}
    for v in range(graph.n):
        if v not in gone:
            groups.setdefault(uf.find(v), []).append(v)
    return [frozenset(g) for g in sorted(groups.values(), key=lambda g: g[0])]


def reachable(graph: Graph, source: int, edge_ids: Iterable[int]) -> set[int]:
    """Vertices reachable from ``source`` using only ``edge_ids``."""
    allowed = set(edge_ids)
    seen = {source}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w, eid in graph.neighbors(u):
            if eid in allowed and w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def separates(vertex_set, demands: Sequence[tuple[int, int]]) -> bool:
    """True if the set holds exactly one endpoint of at least one demand."""
    return any((s in vertex_set) != (t in vertex_set) for s, t in demands)
