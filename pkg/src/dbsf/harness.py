"""Run every checker over one GA transcript and collect report rows."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .certify import (
    DegenerateRange,
    EmptyCut,
    LowerBound,
    RatioReport,
    WitnessInterval,
    bound_mass,
    breakpoints,
    build_dual_certificate,
    certified_lower_bound,
    check_excess_bound,
    check_ratio_bound,
    check_separation,
    demands_above,
    distinct_bounds,
    find_witness_interval,
    gamma,
    ratio_multiplier,
    restricted_max_load,
    verify_dual_certificate,
)
from .formats import ReportRow
from .graph import UNBOUNDED, Instance
from .greedy import GaTranscript, run_ga
from .oracle import CapExceeded, OfflineSolution, brute_force_opt


@dataclass
class CheckSuite:
    """Outcome of the checkers on one transcript. ``failures`` lists
    ``(checker, detail)`` pairs; ``ratio`` is None when OPT is unknown."""

    separation_ok: bool
    excess_ok: bool
    certificate_ok: bool
    witness_ok: bool
    ratio: RatioReport | None
    lower_bound: LowerBound
    witness: WitnessInterval | None
    witness_delta: Fraction | None = None
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        ratio_ok = self.ratio is None or self.ratio.holds
        return self.separation_ok and self.excess_ok and self.certificate_ok and self.witness_ok and ratio_ok


def check_transcript(
    transcript: GaTranscript,
    deltas: Iterable | None = None,
    opt: Fraction | None = None,
    certified: bool = False,
) -> CheckSuite:
    """Separation and excess over the breakpoint sweep, dual certificates
    over breakpoints x ``deltas``, the witness interval per delta, and the
    ratio bound when ``opt`` is known.

    ``deltas`` defaults to the distinct finite bounds of the graph.
    """
    g = transcript.graph
    demands = transcript.demands
    rs = breakpoints(transcript, midpoints=True)
    if deltas is None:
        deltas = distinct_bounds(g)
    deltas = sorted({Fraction(d) for d in deltas if d is not UNBOUNDED})
    failures = []

    sep_ok = True
    for r in rs:
        rep = check_separation(g, transcript, r, strict=False)
        if not rep.holds:
            sep_ok = False
            failures.append(("separation", rep))

    exc_ok = True
    for r in rs:
        for b in distinct_bounds(g):
            rep = check_excess_bound(transcript, r, b, strict=False)
            if not rep.holds:
                exc_ok = False
                failures.append(("excess", rep))

    cert_ok = True
    for r in rs:
        need = len(demands_above(transcript, r)) + 1
        for delta in deltas:
            try:
                cert = build_dual_certificate(g, transcript, r, delta)
            except EmptyCut:
                continue
            chk = verify_dual_certificate(g, cert, demands)
            if not chk:
                cert_ok = False
                failures.append(("certificate", (r, delta, chk.reason, chk.witness)))
                continue
            floor_ = Fraction(need) / bound_mass(g, gamma(transcript, r, delta))
            if cert.objective < floor_:
                cert_ok = False
                failures.append(("certificate", (r, delta, "objective below (|D(r)|+1)/b", cert.objective)))
            if certified and opt is not None and cert.objective > opt:
                cert_ok = False
                failures.append(("certificate", (r, delta, "objective above OPT", cert.objective)))

    wit_ok = True
    witness = None
    for delta in deltas:
        if restricted_max_load(transcript, delta) <= 1 / delta:
            continue
        try:
            w = find_witness_interval(transcript, delta, strict=False)
        except DegenerateRange:
            continue
        if witness is None:
            witness = (w, delta)
        if not w.holds:
            wit_ok = False
            failures.append(("witness", (delta, w)))

    ratio = None
    if opt is not None:
        ratio = check_ratio_bound(transcript, opt, strict=False)
        if not ratio.holds:
            failures.append(("ratio", ratio))

    lb = certified_lower_bound(g, transcript, deltas, certified=certified)
    w, wd = witness if witness is not None else (None, None)
    return CheckSuite(sep_ok, exc_ok, cert_ok, wit_ok, ratio, lb, w, wd, failures)


def evaluate_instance(
    instance: Instance,
    name: str = "0",
    order=None,
    oracle: bool = True,
    cap: int | None = None,
) -> tuple[ReportRow, GaTranscript, CheckSuite, OfflineSolution | None]:
    """Run GA, the oracle (unless capped or disabled) and all checkers."""
    start = time.perf_counter()
    _, tr = run_ga(instance, order)
    sol = None
    if oracle:
        try:
            sol = brute_force_opt(instance, cap=cap)
        except CapExceeded:
            sol = None
    if sol is not None:
        suite = check_transcript(tr, sol.deltas, sol.value, certified=True)
    else:
        suite = check_transcript(tr)
    elapsed = time.perf_counter() - start
    src = instance.graph
    row = ReportRow(
        instance=name,
        n=src.n,
        edges=src.m,
        demands=len(instance.demands),
        h=tr.max_load(),
        opt=None if sol is None else sol.value,
        lower_bound=suite.lower_bound.value,
        witness_r=None if suite.witness is None else suite.witness.r,
        witness_delta=suite.witness_delta,
        separation_ok=suite.separation_ok,
        excess_ok=suite.excess_ok,
        certificate_ok=suite.certificate_ok,
        witness_ok=suite.witness_ok,
        ratio_ok=None if suite.ratio is None else suite.ratio.holds,
        seconds=elapsed,
        multiplier=ratio_multiplier(tr.graph.n),
    )
    return row, tr, suite, sol
