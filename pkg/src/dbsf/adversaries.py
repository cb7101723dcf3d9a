"""Adaptive adversaries realizing the three lower-bound constructions.

Each ``run_*`` function accepts either an :class:`OnlineSteinerAlgorithm`
instance (deterministic play) or, with ``trials=m``, a factory
``seed -> algorithm``. In the randomized case every adversary decision is
taken from ``m`` seeded replays of the current request prefix, and the
reported degrees are averages over those replays.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Sequence

from .algorithms import OnlineSteinerAlgorithm, ProtocolViolation, solution_weight
from .graph import UNBOUNDED, Graph, format_rational, reachable
from .oracle import CapExceeded, brute_force_weighted_opt

DEFAULT_TRIALS = 64


@dataclass
class AdversaryTranscript:
    kind: str
    graph: Graph
    root: int
    requests: list = field(default_factory=list)
    additions: list = field(default_factory=list)
    records: list = field(default_factory=list)
    online_edges: tuple = ()
    offline_edges: tuple = ()
    stats: dict = field(default_factory=dict)

    def to_jsonl(self) -> str:
        return "".join(json.dumps(rec, sort_keys=True) + "\n" for rec in self.records)


def _record(graph: Graph, request, added, held) -> dict:
    deg = graph.degrees(held)
    return {
        "request": request,
        "added": [list(graph.edges[e]) for e in added],
        "degrees": {str(v): d for v, d in enumerate(deg) if d},
    }


def _start(alg, graph, root):
    alg.init(graph, root)
    return alg


# -- tree gadget -------------------------------------------------------------

@dataclass(frozen=True)
class TreeGadget:
    graph: Graph
    Z: tuple[int, ...]
    X: dict
    root: int

    def x_edge(self, x: int, z: int) -> int:
        for w, eid in self.graph.neighbors(x):
            if w == z:
                return eid
        raise KeyError((x, z))


def build_tree_lb_instance(levels: int) -> TreeGadget:
    """Clique on ``2**levels`` Z-nodes plus one X-node per Z-pair.

    Z-nodes are ``0..2**levels - 1`` with bound 1; X-nodes follow in
    lexicographic pair order, unbounded. Root is Z-node 0.
    """
    if levels < 1:
        raise ValueError("levels must be >= 1")
    size = 2 ** levels
    if size > 64:
        raise CapExceeded(f"2**{levels} Z-nodes exceeds the cap of 64")
    Z = tuple(range(size))
    pairs = list(combinations(Z, 2))
    X = {pair: size + k for k, pair in enumerate(pairs)}
    edges = list(pairs)
    for (a, b), x in X.items():
        edges += [(x, a), (x, b)]
    bounds = [Fraction(1)] * size + [UNBOUNDED] * len(pairs)
    labels = [f"z{z}" for z in Z] + [f"x{a}_{b}" for a, b in pairs]
    graph = Graph(size + len(pairs), tuple(bounds), tuple(edges), labels=tuple(labels))
    return TreeGadget(graph, Z, X, Z[0])


def x_degrees(gadget: TreeGadget, edges, requested=None) -> dict[int, int]:
    """Per Z-node count of X-neighbours joined by ``edges`` (only ``requested`` X if given)."""
    xs = set(gadget.X.values())
    deg = {z: 0 for z in gadget.Z}
    for eid in edges:
        u, v = gadget.graph.edges[eid]
        x, z = (u, v) if u in xs else (v, u)
        if x in xs and z in deg and (requested is None or x in requested):
            deg[z] += 1
    return deg


def run_tree_adversary(
    alg,
    levels: int = 2,
    S: Sequence[int] | None = None,
    trials: int | None = None,
    seed: int = 0,
    gadget: TreeGadget | None = None,
) -> AdversaryTranscript:
    """Recursive halving adversary on the tree gadget.

    For |S| = 2**s the sequence is sigma(S1), sigma(S2), then the X-node
    joining the two halves' heavy nodes; the new heavy node is the one whose
    edge the algorithm bought (the more frequent one under ``trials``). The
    offline companion serves that last request through the other node.
    """
    gadget = gadget or build_tree_lb_instance(levels)
    g = gadget.graph
    S = tuple(sorted(gadget.Z if S is None else S))
    s = len(S).bit_length() - 1
    if len(S) != 2 ** s or not set(S) <= set(gadget.Z):
        raise ValueError("S must be a subset of Z of power-of-two size")
    randomized = trials is not None
    sigma: list[int] = []
    offline: list[int] = []
    live = None if randomized else _start(alg, g, gadget.root)
    transcript = AdversaryTranscript("tree", g, gadget.root)

    def frequencies(x, z1, z2):
        if not randomized:
            held = live.current_solution()
            return Fraction(gadget.x_edge(x, z1) in held), Fraction(gadget.x_edge(x, z2) in held)
        c1 = c2 = 0
        for k in range(trials):
            a = _start(alg(seed + k), g, gadget.root)
            for t in sigma:
                a.on_terminal(t)
            held = a.current_solution()
            c1 += gadget.x_edge(x, z1) in held
            c2 += gadget.x_edge(x, z2) in held
        return Fraction(c1, trials), Fraction(c2, trials)

    def request(x):
        sigma.append(x)
        transcript.requests.append(x)
        if randomized:
            return
        added = live.on_terminal(x)
        if not live.connected(gadget.root, x):
            raise ProtocolViolation(f"terminal {x} left unconnected")
        transcript.additions.append(added)
        transcript.records.append(_record(g, {"terminal": x}, added, live.current_solution()))

    def solve(part):
        if len(part) == 1:
            return part[0]
        half = len(part) // 2
        z1, z2 = solve(part[:half]), solve(part[half:])
        x = gadget.X[(min(z1, z2), max(z1, z2))]
        request(x)
        f1, f2 = frequencies(x, z1, z2)
        if f1 == 0 and f2 == 0:
            raise ProtocolViolation(f"request {x} served without an edge at z{z1} or z{z2}")
        if f1 != f2:
            heavy = z1 if f1 > f2 else z2
        else:
            d = x_degrees(gadget, _held_now(), set(sigma))
            heavy = z1 if d[z1] >= d[z2] else z2
        other = z2 if heavy == z1 else z1
        offline.append(gadget.x_edge(x, other))
        return heavy

    def _held_now():
        return live.current_solution() if live is not None else ()

    heavy = solve(S)

    ring = [eid for eid, (u, v) in enumerate(g.edges[: len(gadget.Z) * (len(gadget.Z) - 1) // 2]) if v == u + 1]
    transcript.offline_edges = tuple(offline) + tuple(ring)
    requested = set(sigma)
    if randomized:
        runs = []
        for k in range(trials):
            a = _start(alg(seed + k), g, gadget.root)
            for t in sigma:
                a.on_terminal(t)
            runs.append(a.current_solution())
        dprime = {z: Fraction(sum(x_degrees(gadget, h, requested)[z] for h in runs), trials) for z in gadget.Z}
        dfull = {z: Fraction(sum(x_degrees(gadget, h)[z] for h in runs), trials) for z in gadget.Z}
        transcript.online_edges = tuple(sorted(runs[0]))
    else:
        held = live.current_solution()
        dprime = x_degrees(gadget, held, requested)
        dfull = x_degrees(gadget, held)
        transcript.online_edges = tuple(sorted(held))
    off_deg = x_degrees(gadget, offline)
    served = all(x in reachable(g, gadget.root, transcript.offline_edges) for x in sigma)
    transcript.stats = {
        "s": s,
        "S": S,
        "heavy": heavy,
        "requests": len(sigma),
        "deg": dfull,
        "deg_prime": dprime,
        "deg_prime_heavy": dprime[heavy] if S else 0,
        "offline_deg": off_deg,
        "offline_max_deg": max((off_deg[z] for z in S), default=0),
        "offline_serves_all": served,
        "ratio": Fraction(dprime[heavy]) / max(1, max((off_deg[z] for z in S), default=0)),
    }
    return transcript


# -- edge-weighted gadget ----------------------------------------------------

def build_weighted_gadget(k: int) -> Graph:
    """Root 0; nodes 1..k tied to the root (weight 0) and to k+i (weight n**i);
    zero-weight chain k+1, ..., 2k and edge 2k-root. n = 2k + 1, all bounds 1."""
    if k < 2:
        raise ValueError("k must be >= 2")
    n = 2 * k + 1
    edges, weights = [], []
    for i in range(1, k + 1):
        edges.append((i, 0))
        weights.append(0)
    for i in range(1, k + 1):
        edges.append((i, k + i))
        weights.append(n ** i)
    for i in range(k + 1, 2 * k):
        edges.append((i, i + 1))
        weights.append(0)
    edges.append((2 * k, 0))
    weights.append(0)
    labels = ["root"] + [str(i) for i in range(1, n)]
    return Graph(n, (Fraction(1),) * n, tuple(edges), tuple(weights), tuple(labels))


def _edge_between(graph: Graph, u: int, v: int) -> int:
    for w, eid in graph.neighbors(u):
        if w == v:
            return eid
    raise KeyError((u, v))


def fig2_tree(k: int, r: int) -> tuple[int, ...]:
    """Offline tree for the first ``r`` terminals: expensive edges for
    1..r-1, the zero-weight chain to the root, and r's root edge."""
    g = build_weighted_gadget(k)
    eids = [_edge_between(g, i, k + i) for i in range(1, r)]
    eids += [_edge_between(g, i, i + 1) for i in range(k + 1, 2 * k)]
    eids += [_edge_between(g, 2 * k, 0), _edge_between(g, r, 0)]
    return tuple(sorted(set(eids)))


def run_weighted_adversary(alg, k: int, trials: int | None = None, seed: int = 0, degree_bound: int = 3) -> AdversaryTranscript:
    """Present terminals 1, 2, ... and stop at the first r whose expensive
    edge {r, k+r} is held (with probability > 1/2 under ``trials``)."""
    g = build_weighted_gadget(k)
    n = g.n
    randomized = trials is not None
    transcript = AdversaryTranscript("weighted", g, 0)
    live = None if randomized else _start(alg, g, 0)
    root_edge = {i: _edge_between(g, i, 0) for i in range(1, k + 1)}
    cost_edge = {i: _edge_between(g, i, k + i) for i in range(1, k + 1)}
    p_hist, q_hist = [], []
    stop = None

    for i in range(1, k + 1):
        transcript.requests.append(i)
        if randomized:
            sols = []
            for t in range(trials):
                a = _start(alg(seed + t), g, 0)
                for j in transcript.requests:
                    a.on_terminal(j)
                sols.append(a.current_solution())
        else:
            added = live.on_terminal(i)
            if not live.connected(0, i):
                raise ProtocolViolation(f"terminal {i} left unconnected")
            transcript.additions.append(added)
            transcript.records.append(_record(g, {"terminal": i}, added, live.current_solution()))
            sols = [live.current_solution()]
        p = {j: Fraction(sum(root_edge[j] in h for h in sols), len(sols)) for j in range(1, i + 1)}
        q = {j: Fraction(sum(cost_edge[j] in h for h in sols), len(sols)) for j in range(1, i + 1)}
        p_hist.append(p)
        q_hist.append(q)
        if q[i] > Fraction(1, 2):
            stop = i
            break

    final = sols
    weight = Fraction(sum(solution_weight(g, h) for h in final), len(final))
    root_deg = Fraction(sum(g.degrees(h)[0] for h in final), len(final))
    transcript.online_edges = tuple(sorted(final[0]))
    stats = {
        "k": k,
        "n": n,
        "p": p_hist,
        "q": q_hist,
        "online_weight": weight,
        "root_degree": root_deg,
        "degree_bound": degree_bound,
    }
    if stop is not None:
        r = stop
        opt, tree = brute_force_weighted_opt(g, range(1, r + 1), 0, degree_bound)
        t_edges = fig2_tree(k, r)
        stats.update(
            case="a",
            r=r,
            opt_weight=opt,
            fig2_weight=solution_weight(g, t_edges),
            fig2_formula=sum(n ** i for i in range(1, r)),
            weight_floor=Fraction(n ** r, 2) if randomized else Fraction(n ** r),
        )
        stats["holds"] = weight >= stats["weight_floor"] and opt <= stats["fig2_weight"]
        transcript.offline_edges = tree
    else:
        stats.update(case="b", r=k, degree_floor=Fraction(k, 2) if randomized else Fraction(k))
        stats["holds"] = root_deg >= stats["degree_floor"]
        transcript.offline_edges = fig2_tree(k, k)
    transcript.stats = stats
    return transcript


# -- group Steiner star ------------------------------------------------------

def build_star(n: int) -> Graph:
    if n < 2:
        raise ValueError("n must be >= 2")
    return Graph(n, (Fraction(1),) * n, tuple((0, v) for v in range(1, n)))


def run_group_star_adversary(alg: OnlineSteinerAlgorithm, n: int) -> AdversaryTranscript:
    """Each group is the set of leaves the algorithm has not yet joined to the center."""
    g = build_star(n)
    alg.init(g, 0)
    transcript = AdversaryTranscript("group-star", g, 0)
    leaves = set(range(1, n))
    groups = []
    while True:
        joined = {v for v in leaves if alg.connected(0, v)}
        group = tuple(sorted(leaves - joined))
        if not group:
            break
        if len(groups) >= n - 1:
            raise ProtocolViolation("adversary did not terminate within n - 1 rounds")
        groups.append(group)
        transcript.requests.append(group)
        added = alg.on_group_demand(group)
        if not any(alg.connected(0, v) for v in group):
            raise ProtocolViolation(f"group {group} left unconnected")
        transcript.additions.append(added)
        transcript.records.append(_record(g, {"group": list(group)}, added, alg.current_solution()))
    common = set(leaves)
    for grp in groups:
        common &= set(grp)
    witness = min(common) if common else None
    offline = (_edge_between(g, 0, witness),) if witness is not None else ()
    online_deg = g.degrees(alg.current_solution())[0]
    off_deg = max(g.degrees(offline), default=0)
    transcript.online_edges = tuple(sorted(alg.current_solution()))
    transcript.offline_edges = offline
    transcript.stats = {
        "n": n,
        "rounds": len(groups),
        "groups": groups,
        "nested": all(set(b) < set(a) for a, b in zip(groups, groups[1:])),
        "witness": witness,
        "online_center_degree": online_deg,
        "offline_max_degree": off_deg,
        "ratio": Fraction(online_deg, off_deg) if off_deg else None,
    }
    return transcript


def summary_line(t: AdversaryTranscript) -> str:
    st = t.stats
    if t.kind == "tree":
        return (f"tree s={st['s']} requests={st['requests']} heavy=z{st['heavy']} "
                f"deg'={format_rational(Fraction(st['deg_prime_heavy']))} offline_max={st['offline_max_deg']} "
                f"ratio={format_rational(st['ratio'])}")
    if t.kind == "weighted":
        if st["case"] == "a":
            return (f"weighted k={st['k']} case=a r={st['r']} online_weight={format_rational(st['online_weight'])} "
                    f"opt3={st['opt_weight']} fig2={st['fig2_weight']} holds={st['holds']}")
        return (f"weighted k={st['k']} case=b root_degree={format_rational(st['root_degree'])} "
                f"bound={st['degree_bound']} holds={st['holds']}")
    return (f"group-star n={st['n']} rounds={st['rounds']} center_degree={st['online_center_degree']} "
            f"offline={st['offline_max_degree']} ratio={format_rational(st['ratio']) if st['ratio'] else 'inf'}")


def load_algorithm(spec: str) -> Callable[[], OnlineSteinerAlgorithm]:
    """Resolve a built-in name or a ``path.py`` defining ``make_algorithm()``."""
    from .algorithms import BUILTIN

    if spec in BUILTIN:
        return BUILTIN[spec]
    import importlib.util

    mod_spec = importlib.util.spec_from_file_location("dbsf_user_algorithm", spec)
    if mod_spec is None or mod_spec.loader is None:
        raise ValueError(f"unknown algorithm {spec!r}")
    module = importlib.util.module_from_spec(mod_spec)
    mod_spec.loader.exec_module(module)
    return module.make_algorithm


