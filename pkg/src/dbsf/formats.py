"""Text formats: instance files, GA transcripts (JSON lines), report CSV."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .graph import UNBOUNDED, Graph, Instance, as_bound, format_bound, format_rational, parse_rational
from .greedy import GaTranscript, replay

HEADER = "dbsf 1"
TRANSCRIPT_FORMAT = "dbsf-transcript 1"


class ParseError(ValueError):
    def __init__(self, line: int, column: int, message: str):
        self.line, self.column, self.message = line, column, message
        super().__init__(f"{line}:{column}: {message}")


def _tokens(text: str):
    """``(column, token)`` pairs; columns are 1-based."""
    out = []
    i = 0
    while i < len(text):
        if text[i].isspace():
            i += 1
            continue
        j = i
        while j < len(text) and not text[j].isspace():
            j += 1
        out.append((i + 1, text[i:j]))
        i = j
    return out


def _int(lineno, col, tok, what="integer"):
    try:
        if not tok.lstrip("-").isdigit():
            raise ValueError
        return int(tok)
    except ValueError:
        raise ParseError(lineno, col, f"expected {what}, got {tok!r}") from None


def parse_instance(text: str) -> Instance:
    """Parse the line-oriented instance format. Errors carry line and column."""
    n = None
    bounds: dict[int, object] = {}
    labels: dict[int, str] = {}
    edges, weights, demands, groups = [], [], [], []
    transformed = False
    seen_header = False
    last = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        last = lineno
        line = raw.split("#", 1)[0]
        toks = _tokens(line)
        if not toks:
            continue
        col, word = toks[0]
        args = toks[1:]
        if not seen_header:
            if [t for _, t in toks] != ["dbsf", "1"]:
                raise ParseError(lineno, col, f"expected header {HEADER!r}")
            seen_header = True
            continue
        if word == "n":
            if n is not None:
                raise ParseError(lineno, col, "duplicate n line")
            if len(args) != 1:
                raise ParseError(lineno, col, "n takes one argument")
            n = _int(lineno, args[0][0], args[0][1], "vertex count")
            if n < 1:
                raise ParseError(lineno, args[0][0], "vertex count must be positive")
            continue
        if n is None:
            raise ParseError(lineno, col, "n must precede other directives")

        def vertex(c, tok):
            v = _int(lineno, c, tok, "vertex id")
            if not 0 <= v < n:
                raise ParseError(lineno, c, f"vertex {v} out of range [0, {n})")
            return v

        if word == "v":
            if len(args) not in (2, 3):
                raise ParseError(lineno, col, "v takes an id, a bound and an optional label")
            v = vertex(*args[0])
            if v in bounds:
                raise ParseError(lineno, args[0][0], f"vertex {v} declared twice")
            try:
                bounds[v] = as_bound(args[1][1])
            except (ValueError, ZeroDivisionError) as exc:
                raise ParseError(lineno, args[1][0], f"bad bound {args[1][1]!r}: {exc}") from None
            if len(args) == 3:
                labels[v] = args[2][1]
        elif word == "e":
            if len(args) not in (2, 3):
                raise ParseError(lineno, col, "e takes two endpoints and an optional weight")
            u, v = vertex(*args[0]), vertex(*args[1])
            if u == v:
                raise ParseError(lineno, args[1][0], f"self-loop at {u}")
            edges.append((u, v))
            if len(args) == 3:
                w = _int(lineno, args[2][0], args[2][1], "weight")
                if w < 0:
                    raise ParseError(lineno, args[2][0], "weight must be nonnegative")
                weights.append(w)
            else:
                weights.append(None)
        elif word == "d":
            if len(args) != 2:
                raise ParseError(lineno, col, "d takes two endpoints")
            demands.append((vertex(*args[0]), vertex(*args[1])))
        elif word == "g":
            if not args:
                raise ParseError(lineno, col, "g needs at least one vertex")
            groups.append(tuple(vertex(*a) for a in args))
        elif word == "transformed":
            if args:
                raise ParseError(lineno, args[0][0], "transformed takes no arguments")
            transformed = True
        else:
            raise ParseError(lineno, col, f"unknown directive {word!r}")
    if not seen_header:
        raise ParseError(max(last, 1), 1, f"missing header {HEADER!r}")
    if n is None:
        raise ParseError(last, 1, "missing n line")
    missing = [v for v in range(n) if v not in bounds]
    if missing:
        raise ParseError(last, 1, f"vertex {missing[0]} has no v line")
    w = None
    if any(x is not None for x in weights):
        w = tuple(0 if x is None else x for x in weights)
    lab = None
    if labels:
        lab = tuple(labels.get(v, str(v)) for v in range(n))
    graph = Graph(n, tuple(bounds[v] for v in range(n)), tuple(edges), w, lab)
    return Instance(graph, tuple(demands), tuple(groups), transformed)


def format_instance(instance: Instance) -> str:
    g = instance.graph
    lines = [HEADER, f"n {g.n}"]
    for v in range(g.n):
        tail = "" if g.labels is None else f" {g.labels[v]}"
        lines.append(f"v {v} {format_bound(g.bounds[v])}{tail}")
    for eid, (u, v) in enumerate(g.edges):
        tail = "" if g.weights is None else f" {g.weights[eid]}"
        lines.append(f"e {u} {v}{tail}")
    for s, t in instance.demands:
        lines.append(f"d {s} {t}")
    for grp in instance.groups:
        lines.append("g " + " ".join(map(str, grp)))
    if instance.transformed:
        lines.append("transformed")
    return "\n".join(lines) + "\n"


def read_instance(path) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def write_instance(path, instance: Instance) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_instance(instance))


# -- transcripts ---------------------------------------------------------------

def transcript_records(transcript: GaTranscript) -> list[dict]:
    g = transcript.graph
    recs = [{
        "kind": "header",
        "format": TRANSCRIPT_FORMAT,
        "n": g.n,
        "m": g.m,
        "order": list(transcript.order),
    }]
    for st in transcript.steps:
        recs.append({
            "kind": "step",
            "index": st.index,
            "demand": list(st.demand),
            "tau": format_rational(st.tau),
            "edges": list(st.edges),
            "already_connected": st.already_connected,
        })
    recs.append({
        "kind": "final",
        "degrees": list(transcript.degrees),
        "max_load": format_rational(transcript.max_load()),
    })
    return recs


def format_transcript(transcript: GaTranscript) -> str:
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in transcript_records(transcript))


def parse_transcript(text: str, instance: Instance) -> GaTranscript:
    """Rebuild a run from its JSON lines against ``instance``.

    Thresholds are recomputed; a stored tau or final degree that disagrees
    with the recomputation is an error.
    """
    recs = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            recs.append((lineno, json.loads(line)))
        except json.JSONDecodeError as exc:
            raise ParseError(lineno, exc.colno, exc.msg) from None
    if not recs or recs[0][1].get("kind") != "header":
        raise ParseError(1, 1, "transcript must start with a header record")
    head = recs[0][1]
    if head.get("format") != TRANSCRIPT_FORMAT:
        raise ParseError(recs[0][0], 1, f"unsupported transcript format {head.get('format')!r}")
    steps = [(ln, r) for ln, r in recs if r.get("kind") == "step"]
    try:
        tr = replay(instance, head["order"], [r["edges"] for _, r in steps])
    except (ValueError, IndexError, KeyError) as exc:
        raise ParseError(recs[0][0], 1, f"transcript does not replay: {exc}") from None
    if tr.graph.n != head.get("n") or len(tr.steps) != len(steps):
        raise ParseError(recs[0][0], 1, "transcript does not match the instance")
    for (ln, rec), st in zip(steps, tr.steps):
        if parse_rational(rec["tau"]) != st.tau:
            raise ParseError(ln, 1, f"stored tau {rec['tau']} differs from recomputed {format_rational(st.tau)}")
    finals = [(ln, r) for ln, r in recs if r.get("kind") == "final"]
    if finals and finals[-1][1]["degrees"] != tr.degrees:
        raise ParseError(finals[-1][0], 1, "stored final degrees differ from the replay")
    return tr


# -- reports -----------------------------------------------------------------

REPORT_COLUMNS = (
    "instance", "n", "edges", "demands", "h", "opt", "ratio", "ratio_decimal",
    "bound", "lower_bound", "witness_r", "witness_delta",
    "separation_ok", "excess_ok", "certificate_ok", "witness_ok", "ratio_ok",
    "seconds",
)


@dataclass
class ReportRow:
    instance: str
    n: int
    edges: int
    demands: int
    h: Fraction
    opt: Fraction | None = None
    lower_bound: Fraction | None = None
    witness_r: Fraction | None = None
    witness_delta: Fraction | None = None
    separation_ok: bool | None = None
    excess_ok: bool | None = None
    certificate_ok: bool | None = None
    witness_ok: bool | None = None
    ratio_ok: bool | None = None
    seconds: float = 0.0
    multiplier: Fraction | None = None

    @property
    def ratio(self) -> Fraction | None:
        if self.opt is None or self.opt == 0:
            return None
        return self.h / self.opt

    @property
    def bound(self) -> Fraction | None:
        if self.opt is None or self.multiplier is None:
            return None
        return self.multiplier * self.opt

    @property
    def violations(self) -> list[str]:
        flags = ("separation_ok", "excess_ok", "certificate_ok", "witness_ok", "ratio_ok")
        return [f for f in flags if getattr(self, f) is False]

    def as_dict(self) -> dict[str, str]:
        def q(x):
            if x is None:
                return ""
            if x is UNBOUNDED:
                return "inf"
            return format_rational(x)

        def flag(x):
            return "" if x is None else ("1" if x else "0")

        ratio = self.ratio
        return {
            "instance": self.instance,
            "n": str(self.n),
            "edges": str(self.edges),
            "demands": str(self.demands),
            "h": q(self.h),
            "opt": q(self.opt),
            "ratio": q(ratio),
            "ratio_decimal": "" if ratio is None else f"{float(ratio):.6f}",
            "bound": q(self.bound),
            "lower_bound": q(self.lower_bound),
            "witness_r": q(self.witness_r),
            "witness_delta": q(self.witness_delta),
            "separation_ok": flag(self.separation_ok),
            "excess_ok": flag(self.excess_ok),
            "certificate_ok": flag(self.certificate_ok),
            "witness_ok": flag(self.witness_ok),
            "ratio_ok": flag(self.ratio_ok),
            "seconds": f"{self.seconds:.4f}",
        }


def format_report(rows: Iterable[ReportRow]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=REPORT_COLUMNS, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow(row.as_dict())
    return buf.getvalue()
