"""Analysis of greedy runs: threshold sets, lemma checkers, dual certificates.

Every quantity is an exact ``Fraction``. The checkers take a finished
:class:`~dbsf.greedy.GaTranscript` and look only at final degrees and the
recorded arrival thresholds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .graph import UNBOUNDED, Graph, connected_components, format_rational, parse_rational, separates
from .greedy import GaTranscript


class LemmaViolation(AssertionError):
    def __init__(self, name: str, report):
        self.report = report
        super().__init__(f"{name} violated: {report}")


class BoundViolation(LemmaViolation):
    pass


class EmptyCut(ValueError):
    pass


class DegenerateRange(ValueError):
    pass


# -- exact logarithm comparisons -------------------------------------------

def log2_at_least(n: int, x: Fraction) -> bool:
    """Exactly decide ``log2(n) >= x``."""
    x = Fraction(x)
    if x <= 0:
        return n >= 1
    return 2 ** x.numerator <= n ** x.denominator


def ceil_log2(n: int) -> int:
    return max(0, (n - 1).bit_length())


def ratio_multiplier(n: int) -> Fraction:
    """``24*log2(n) + 37`` with log2 rounded up (exact when n is a power of two)."""
    return Fraction(24 * ceil_log2(n) + 37)


def theorem_bound_holds(h: Fraction, opt: Fraction, n: int) -> bool:
    """Exactly decide ``h <= (24*log2(n) + 37) * opt``."""
    if opt == 0:
        return h == 0
    return log2_at_least(n, (Fraction(h) / opt - 37) / 24)


# -- threshold sets ----------------------------------------------------------

def gamma(transcript: GaTranscript, r: Fraction, b=None) -> frozenset[int]:
    """Vertices with final uptick load >= r (and finite bound >= b if given)."""
    g = transcript.graph
    out = []
    for v in range(g.n):
        bv = g.bounds[v]
        if bv is UNBOUNDED:
            continue
        if transcript.final_uptick(v) >= r and (b is None or bv >= b):
            out.append(v)
    return frozenset(out)


def demands_above(transcript: GaTranscript, r: Fraction) -> frozenset[int]:
    """1-based indices of demands whose arrival threshold is >= r."""
    return frozenset(st.index for st in transcript.steps if st.tau >= r)


def bound_mass(graph: Graph, vertices: Iterable[int]) -> Fraction:
    return sum((graph.bounds[v] for v in vertices), Fraction(0))


def excess(transcript: GaTranscript, r: Fraction, b) -> Fraction:
    g = transcript.graph
    total = 0
    for v in gamma(transcript, r, b):
        total += transcript.degrees[v] - math.ceil(r * g.bounds[v]) + 2
    return Fraction(total)


def breakpoints(transcript: GaTranscript, midpoints: bool = True) -> list[Fraction]:
    """Distinct positive thresholds and final upticks, plus midpoints between them."""
    vals = {tau for tau in transcript.thresholds if tau > 0}
    vals.update(u for v in range(transcript.graph.n) if (u := transcript.final_uptick(v)) > 0)
    vals = sorted(vals)
    if midpoints:
        vals = sorted(set(vals) | {(a + b) / 2 for a, b in zip(vals, vals[1:])})
    return vals


def distinct_bounds(graph: Graph) -> list[Fraction]:
    return sorted({b for b in graph.bounds if b is not UNBOUNDED})


@dataclass(frozen=True)
class AnalysisSnapshot:
    r: Fraction
    b: Fraction
    gamma: frozenset[int]
    gamma_b: frozenset[int]
    demands: frozenset[int]
    excess: Fraction
    mass: Fraction


def analysis_snapshot(transcript: GaTranscript, r, b) -> AnalysisSnapshot:
    r, b = Fraction(r), Fraction(b)
    if r <= 0 or b <= 0:
        raise ValueError("r and b must be positive")
    gb = gamma(transcript, r, b)
    return AnalysisSnapshot(
        r, b,
        gamma(transcript, r),
        gb,
        demands_above(transcript, r),
        excess(transcript, r, b),
        bound_mass(transcript.graph, gb),
    )


# -- separation (multiway cut) ----------------------------------------------

@dataclass(frozen=True)
class SeparationReport:
    r: Fraction
    separating: int
    required: int
    components: int

    @property
    def holds(self) -> bool:
        return self.separating >= self.required


def check_separation(graph: Graph, transcript: GaTranscript, r, strict: bool = True) -> SeparationReport:
    """Count components of G minus Gamma(r) that split some demand; compare
    with |D(r)| + 1."""
    r = Fraction(r)
    if r <= 0:
        raise ValueError("r must be positive")
    comps = connected_components(graph, gamma(transcript, r))
    demands = transcript.demands
    count = sum(1 for c in comps if separates(c, demands))
    report = SeparationReport(r, count, len(demands_above(transcript, r)) + 1, len(comps))
    if strict and not report.holds:
        raise LemmaViolation("separation", report)
    return report


# -- excess bound ------------------------------------------------------------

@dataclass(frozen=True)
class ExcessReport:
    r: Fraction
    b: Fraction
    excess: Fraction
    bound: Fraction

    @property
    def holds(self) -> bool:
        return self.excess <= self.bound


def check_excess_bound(transcript: GaTranscript, r, b, strict: bool = True) -> ExcessReport:
    snap = analysis_snapshot(transcript, r, b)
    report = ExcessReport(snap.r, snap.b, snap.excess, Fraction(2 * len(snap.demands) + 3 * len(snap.gamma_b)))
    if strict and not report.holds:
        raise LemmaViolation("excess bound", report)
    return report


# -- dual certificates -------------------------------------------------------

@dataclass(frozen=True)
class DualCertificate:
    n: int
    delta: Fraction
    r: Fraction
    y: tuple[tuple[frozenset[int], Fraction], ...]
    z: tuple[tuple[int, Fraction], ...]

    @property
    def objective(self) -> Fraction:
        return sum((val for _, val in self.y), Fraction(0))

    def z_map(self) -> dict[int, Fraction]:
        return dict(self.z)


def restricted_vertices(graph: Graph, delta) -> frozenset[int]:
    """Vertices dropped from G_delta: finite bound below ``delta``."""
    return frozenset(v for v, b in enumerate(graph.bounds) if b is not UNBOUNDED and b < delta)


def build_dual_certificate(graph: Graph, transcript: GaTranscript, r, delta) -> DualCertificate:
    r, delta = Fraction(r), Fraction(delta)
    cut = gamma(transcript, r, delta)
    if not cut:
        raise EmptyCut(f"Gamma_delta(r) is empty for r={r}, delta={delta}")
    share = 1 / bound_mass(graph, cut)
    dropped = restricted_vertices(graph, delta)
    comps = connected_components(graph, dropped | cut)
    demands = transcript.demands
    y = tuple((c, share) for c in comps if separates(c, demands))
    z = tuple((v, share) for v in sorted(cut))
    return DualCertificate(graph.n, delta, r, y, z)


@dataclass(frozen=True)
class CertificateCheck:
    ok: bool
    reason: str = ""
    witness: object = None

    def __bool__(self) -> bool:
        return self.ok


def verify_dual_certificate(graph: Graph, cert: DualCertificate, demands: Sequence[tuple[int, int]]) -> CertificateCheck:
    """Exact feasibility check of ``cert`` for the dual program on G_delta."""
    dropped = restricted_vertices(graph, cert.delta)
    z = {}
    for v, val in cert.z:
        if val < 0:
            return CertificateCheck(False, "negative z", v)
        if v in dropped or graph.bounds[v] is UNBOUNDED:
            if val != 0:
                return CertificateCheck(False, "z outside finite-bound part of G_delta", v)
        z[v] = z.get(v, Fraction(0)) + val
    mass = sum((val * graph.bounds[v] for v, val in z.items() if val), Fraction(0))
    if mass != 1:
        return CertificateCheck(False, "sum of z(v)*b_v is not 1", mass)
    member = [[] for _ in range(graph.n)]
    for k, (members, val) in enumerate(cert.y):
        if val < 0:
            return CertificateCheck(False, "negative y", sorted(members))
        if members & dropped:
            return CertificateCheck(False, "y set leaves G_delta", sorted(members))
        if val and not separates(members, demands):
            return CertificateCheck(False, "y set separates no demand", sorted(members))
        for v in members:
            member[v].append(k)
    for eid, (u, v) in enumerate(graph.edges):
        if u in dropped or v in dropped:
            continue
        crossing = set(member[u]) ^ set(member[v])
        load = sum((cert.y[k][1] for k in crossing), Fraction(0))
        if load > z.get(u, 0) + z.get(v, 0):
            return CertificateCheck(False, "edge constraint violated", (eid, u, v, load))
    return CertificateCheck(True)


def format_certificate(cert: DualCertificate) -> str:
    lines = [
        f"n {cert.n}",
        f"delta {format_rational(cert.delta)}",
        f"r {format_rational(cert.r)}",
        f"objective {format_rational(cert.objective)}",
    ]
    lines += [f"z {v} {format_rational(val)}" for v, val in cert.z]
    lines += ["y " + " ".join(map(str, sorted(c))) + f" {format_rational(val)}" for c, val in cert.y]
    return "\n".join(lines) + "\n"


def parse_certificate(text: str) -> DualCertificate:
    head = {}
    y, z = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts:
            continue
        key = parts[0]
        try:
            if key in ("n", "delta", "r", "objective") and len(parts) == 2:
                head[key] = parts[1]
            elif key == "z" and len(parts) == 3:
                z.append((int(parts[1]), parse_rational(parts[2])))
            elif key == "y" and len(parts) >= 3:
                y.append((frozenset(int(p) for p in parts[1:-1]), parse_rational(parts[-1])))
            else:
                raise ValueError(f"unknown directive {key!r}")
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    missing = {"n", "delta", "r", "objective"} - head.keys()
    if missing:
        raise ValueError(f"certificate header incomplete: {sorted(missing)}")
    cert = DualCertificate(int(head["n"]), parse_rational(head["delta"]), parse_rational(head["r"]), tuple(y), tuple(z))
    if cert.objective != parse_rational(head["objective"]):
        raise ValueError("objective line disagrees with the y values")
    return cert


@dataclass(frozen=True)
class LowerBound:
    value: Fraction
    r: Fraction | None = None
    delta: Fraction | None = None
    certified: bool = False
    lemma_value: Fraction | None = None
    certificate: DualCertificate | None = field(default=None, repr=False)


def certified_lower_bound(graph: Graph, transcript: GaTranscript, delta_candidates: Iterable, certified: bool = False) -> LowerBound:
    """Best dual objective over r in the breakpoint set and the given deltas.

    ``certified`` says the deltas come from an offline optimum, in which case
    the value is a proven lower bound on OPT. ``lemma_value`` carries
    (|D(r)| + 1) / b(Gamma_delta(r)) at the winning pair.
    """
    best = LowerBound(Fraction(0), certified=certified)
    deltas = sorted({Fraction(d) for d in delta_candidates if d is not UNBOUNDED})
    demands = transcript.demands
    for r in breakpoints(transcript, midpoints=False):
        dr = len(demands_above(transcript, r))
        for delta in deltas:
            try:
                cert = build_dual_certificate(graph, transcript, r, delta)
            except EmptyCut:
                continue
            if not verify_dual_certificate(graph, cert, demands):
                continue
            if cert.objective > best.value:
                mass = bound_mass(graph, gamma(transcript, r, delta))
                best = LowerBound(cert.objective, r, delta, certified, Fraction(dr + 1) / mass, cert)
    return best


# -- witness interval --------------------------------------------------------

def restricted_max_load(transcript: GaTranscript, delta) -> Fraction:
    g = transcript.graph
    vals = [transcript.final_load(v) for v in range(g.n) if g.bounds[v] is not UNBOUNDED and g.bounds[v] >= delta]
    return max(vals, default=Fraction(0))


@dataclass(frozen=True)
class WitnessInterval:
    r: Fraction
    q: int
    lower: Fraction
    upper: Fraction
    excess: Fraction
    required: Fraction
    holds: bool


def _dyadic_level(x: Fraction) -> int:
    """Largest q with 2**q <= x, for x >= 1."""
    q = x.numerator // x.denominator
    return q.bit_length() - 1


def find_witness_interval(transcript: GaTranscript, delta, strict: bool = True) -> WitnessInterval:
    """Locate an r where the excess at threshold delta is large.

    The range [1/delta, h_delta) is split by the dyadic level q of
    b(Gamma_delta(r)) / delta; the longest level interval is taken and r is
    placed at its lower end (just inside it when the infimum is not
    attained). The returned record says whether
    excess(r, delta) >= (h_delta - 1/delta) / (4 log2 n + 6) * b(Gamma_delta(r)) - |Gamma_delta(r)|.
    """
    delta = Fraction(delta)
    g = transcript.graph
    h = restricted_max_load(transcript, delta)
    lo = 1 / delta
    if h <= lo:
        raise DegenerateRange(f"h_delta={h} does not exceed 1/delta={lo}")
    relevant = [v for v in range(g.n) if g.bounds[v] is not UNBOUNDED and g.bounds[v] >= delta]
    cuts = sorted({transcript.final_uptick(v) for v in relevant if lo <= transcript.final_uptick(v) < h})
    # pieces of [lo, h) on which Gamma_delta(r) is constant: [lo, c1], (c1, c2], ..., (ck, h)
    pts = [lo] + [c for c in cuts if c > lo] + [h]
    pieces = []
    if cuts and cuts[0] == lo:
        pieces.append((lo, lo, True))
    for a, b in zip(pts, pts[1:]):
        pieces.append((a, b, not pieces and a == lo))
    levels: dict[int, list] = {}
    for a, b, closed in pieces:
        probe = a if a == b else (a + b) / 2
        mass = bound_mass(g, gamma(transcript, probe, delta))
        q = _dyadic_level(mass / delta)
        levels.setdefault(q, []).append((a, b, closed))
    best_q, best = None, None
    for q in sorted(levels):
        span = levels[q]
        length = span[-1][1] - span[0][0]
        if best is None or length > best[0]:
            best_q, best = q, (length, span[0], span[-1][1])
    _, (inf, first_end, closed), sup = best
    if closed:
        r = inf
    else:
        nxt = [first_end]
        for v in relevant:
            b = g.bounds[v]
            nxt.append(Fraction(math.floor(inf * b) + 1) / b)
        r = (inf + min(x for x in nxt if x > inf)) / 2
    cut = gamma(transcript, r, delta)
    mass = bound_mass(g, cut)
    ex = excess(transcript, r, delta)
    spare = ex + len(cut)
    c = (h - lo) * mass
    holds = spare > 0 and log2_at_least(g.n, (c / spare - 6) / 4)
    required = c / Fraction(4 * ceil_log2(g.n) + 6) - len(cut)
    result = WitnessInterval(r, best_q, inf, sup, ex, required, holds)
    if strict and not holds:
        raise LemmaViolation("witness interval", result)
    return result


# -- ratio ---------------------------------------------------------------------

@dataclass(frozen=True)
class RatioReport:
    n: int
    h: Fraction
    opt: Fraction
    multiplier: Fraction
    holds: bool

    @property
    def ratio(self) -> Fraction | None:
        return None if self.opt == 0 else self.h / self.opt


def check_ratio_bound(transcript: GaTranscript, opt, strict: bool = True) -> RatioReport:
    opt = Fraction(opt)
    n = transcript.graph.n
    h = transcript.max_load()
    report = RatioReport(n, h, opt, ratio_multiplier(n), theorem_bound_holds(h, opt, n))
    if strict and not report.holds:
        raise BoundViolation("competitive bound", report)
    return report
