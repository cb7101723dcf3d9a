"""Seeded random instances."""

from __future__ import annotations

import random
from itertools import combinations
from typing import Sequence

from .graph import Graph, Instance, as_bound

DEFAULT_PALETTE = (1, 2, 3, "inf")


def generate_random(
    n: int,
    edge_density: float,
    bound_palette: Sequence = DEFAULT_PALETTE,
    demand_count: int = 3,
    seed: int = 0,
    max_edges: int | None = None,
) -> Instance:
    """Random connected instance.

    A uniformly random labelled spanning tree is laid down first so every
    demand is satisfiable; each remaining vertex pair then becomes an edge
    with probability ``edge_density``. ``max_edges`` caps the total edge
    count (tree edges are always kept).
    """
    if n < 2 or demand_count < 0:
        raise ValueError("need n >= 2 and demand_count >= 0")
    if not 0 < edge_density <= 1:
        raise ValueError("edge_density must lie in (0, 1]")
    if not bound_palette:
        raise ValueError("empty bound palette")
    rng = random.Random(seed)
    order = list(range(n))
    rng.shuffle(order)
    tree = set()
    for i in range(1, n):
        u, v = order[i], order[rng.randrange(i)]
        tree.add((min(u, v), max(u, v)))
    extra = []
    for pair in combinations(range(n), 2):
        if pair not in tree and rng.random() < edge_density:
            extra.append(pair)
    if max_edges is not None:
        room = max(0, max_edges - len(tree))
        if len(extra) > room:
            extra = sorted(rng.sample(extra, room))
    edges = sorted(tree | set(extra))
    bounds = tuple(as_bound(rng.choice(bound_palette)) for _ in range(n))
    demands = []
    for _ in range(demand_count):
        s, t = rng.sample(range(n), 2)
        demands.append((s, t))
    return Instance(Graph(n, bounds, tuple(edges)), tuple(demands))


def acceptance_instance(index: int, seed: int = 2024, edge_cap: int = 26, n_max: int = 12) -> Instance:
    """The ``index``-th instance of the standard sweep.

    n in [4, n_max], 1 to 5 demands, bounds from {1, 2, 3, inf}, and at most
    ``edge_cap`` edges once dummy terminals are attached.
    """
    rng = random.Random(seed * 1_000_003 + index)
    n = rng.randint(min(4, n_max), n_max)
    k = rng.randint(1, 5)
    density = rng.choice((0.1, 0.2, 0.3, 0.5))
    return generate_random(n, density, DEFAULT_PALETTE, k, rng.randrange(2**32), max_edges=edge_cap - 2 * k)
