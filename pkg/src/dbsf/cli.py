"""Command line entry point: ``dbsf run|oracle|certify|adversary|gen|bench``."""

from __future__ import annotations

import argparse
import inspect
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor

from . import adversaries
from .certify import (
    EmptyCut,
    build_dual_certificate,
    format_certificate,
    verify_dual_certificate,
)
from .formats import (
    ParseError,
    format_instance,
    format_report,
    format_transcript,
    parse_transcript,
    read_instance,
)
from .generate import DEFAULT_PALETTE, acceptance_instance, generate_random
from .graph import UNBOUNDED, as_bound, format_bound, format_rational
from .harness import check_transcript, evaluate_instance
from .oracle import CapExceeded, Infeasible, brute_force_opt

EXIT_CHECK = 1
EXIT_ERROR = 2


class CliError(Exception):
    def __init__(self, kind: str, message: str):
        self.kind = kind
        super().__init__(message)


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _order(spec: str, k: int):
    if spec == "given":
        return list(range(k))
    if spec.startswith("shuffle:"):
        try:
            seed = int(spec.split(":", 1)[1])
        except ValueError:
            raise CliError("usage", f"bad shuffle seed in {spec!r}") from None
        order = list(range(k))
        random.Random(seed).shuffle(order)
        return order
    raise CliError("usage", f"--order must be 'given' or 'shuffle:SEED', got {spec!r}")


def cmd_run(args) -> int:
    inst = read_instance(args.instance)
    order = _order(args.order, len(inst.demands))
    row, tr, suite, _ = evaluate_instance(inst, args.name or args.instance, order, oracle=not args.no_oracle, cap=args.cap)
    _write(args.out, format_report([row]))
    if args.transcript:
        _write(args.transcript, format_transcript(tr))
    if args.out not in (None, "-"):
        print(f"h={format_rational(row.h)} opt={'' if row.opt is None else format_rational(row.opt)} steps={len(tr.steps)}")
    return 0


def cmd_oracle(args) -> int:
    inst = read_instance(args.instance)
    sol = brute_force_opt(inst, cap=args.cap)
    print(f"opt {format_rational(sol.value)}")
    print("edges " + " ".join(map(str, sol.edges)))
    print(f"delta {format_bound(sol.delta)}")
    print("deltas " + " ".join(format_bound(d) for d in sorted(sol.deltas, key=_bound_key)))
    return 0


def _bound_key(b):
    return (1, 0) if b is UNBOUNDED else (0, b)


def cmd_certify(args) -> int:
    inst = read_instance(args.instance)
    with open(args.transcript, encoding="utf-8") as fh:
        tr = parse_transcript(fh.read(), inst)
    opt = None
    certified = False
    if args.delta == "auto":
        try:
            sol = brute_force_opt(inst, cap=args.cap)
            deltas, opt, certified = sol.deltas, sol.value, True
        except CapExceeded:
            deltas = None
    else:
        try:
            deltas = [as_bound(args.delta)]
        except (ValueError, ZeroDivisionError):
            raise CliError("usage", f"bad --delta {args.delta!r}") from None
    suite = check_transcript(tr, deltas, opt, certified)

    def line(name, ok, extra=""):
        state = "skipped" if ok is None else ("pass" if ok else "FAIL")
        print(f"{name}: {state}{extra}")

    line("separation", suite.separation_ok)
    line("excess", suite.excess_ok)
    line("certificate", suite.certificate_ok)
    w = suite.witness
    line("witness", suite.witness_ok if w is not None else None,
         "" if w is None else f" r={format_rational(w.r)} delta={format_rational(suite.witness_delta)} q={w.q}")
    r = suite.ratio
    line("ratio", None if r is None else r.holds,
         "" if r is None else f" h={format_rational(r.h)} opt={format_rational(r.opt)} bound={format_rational(r.multiplier * r.opt)}")
    lb = suite.lower_bound
    cert_verified = True
    if lb.certificate is not None:
        cert = build_dual_certificate(tr.graph, tr, lb.r, lb.delta)
        cert_verified = bool(verify_dual_certificate(tr.graph, cert, tr.demands))
        if args.out:
            _write(args.out, format_certificate(cert))
        tag = "certified" if lb.certified else "uncertified"
        print(f"lower_bound: {format_rational(lb.value)} r={format_rational(lb.r)} delta={format_rational(lb.delta)} {tag}")
    else:
        print("lower_bound: 0")
    for kind, detail in suite.failures:
        print(f"violation {kind}: {detail}", file=sys.stderr)
    return 0 if suite.ok and cert_verified else EXIT_CHECK


def _factory(spec: str):
    try:
        make = adversaries.load_algorithm(spec)
    except (OSError, ValueError, AttributeError) as exc:
        raise CliError("algorithm", f"cannot load {spec!r}: {exc}") from None

    def seeded(seed):
        try:
            takes_seed = bool(inspect.signature(make).parameters)
        except (TypeError, ValueError):
            takes_seed = False
        return make(seed) if takes_seed else make()

    return make, seeded


def cmd_adversary(args) -> int:
    make, seeded = _factory(args.algo)
    alg = seeded if args.trials else make()
    if args.kind == "tree":
        t = adversaries.run_tree_adversary(alg, args.levels, trials=args.trials, seed=args.seed)
    elif args.kind == "weighted":
        t = adversaries.run_weighted_adversary(alg, args.k, trials=args.trials, seed=args.seed)
    else:
        if args.trials:
            raise CliError("usage", "group-star runs a single deterministic algorithm")
        t = adversaries.run_group_star_adversary(alg, args.n)
    print(adversaries.summary_line(t))
    if args.transcript:
        _write(args.transcript, t.to_jsonl())
    return 0


def cmd_gen(args) -> int:
    try:
        palette = [as_bound(tok) for tok in args.palette.split(",")]
    except (ValueError, ZeroDivisionError):
        raise CliError("usage", f"bad palette {args.palette!r}") from None
    inst = generate_random(args.n, args.density, palette, args.demands, args.seed, args.max_edges)
    _write(args.out, format_instance(inst))
    return 0


def _bench_one(job):
    index, seed, n_max, cap = job
    inst = acceptance_instance(index, seed, n_max=n_max)
    row, *_ = evaluate_instance(inst, str(index), cap=cap)
    return row


def cmd_bench(args) -> int:
    jobs = [(i, args.seed, args.n, args.cap) for i in range(args.count)]
    if args.workers > 1:
        with ProcessPoolExecutor(args.workers) as pool:
            rows = list(pool.map(_bench_one, jobs))
    else:
        rows = [_bench_one(j) for j in jobs]
    rows.sort(key=lambda r: int(r.instance))
    _write(args.out, format_report(rows))
    ratios = [r.ratio for r in rows if r.ratio is not None]
    over = sum(1 for r in rows if r.ratio_ok is False)
    flagged = sum(1 for r in rows if r.violations)
    worst = max(ratios, default=None)
    summary = {
        "instances": len(rows),
        "max_ratio": None if worst is None else format_rational(worst),
        "rows_with_violations": flagged,
        "ratio_bound_violations": over,
        "seconds": round(sum(r.seconds for r in rows), 3),
    }
    print(json.dumps(summary, sort_keys=True), file=sys.stderr if args.out in (None, "-") else sys.stdout)
    return 0 if over == 0 else EXIT_CHECK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dbsf", description="Online degree-bounded Steiner forest toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("run", help="run GA on an instance file")
    q.add_argument("--instance", required=True)
    q.add_argument("--order", default="given")
    q.add_argument("--out", default="-")
    q.add_argument("--transcript")
    q.add_argument("--name")
    q.add_argument("--cap", type=int)
    q.add_argument("--no-oracle", action="store_true")
    q.set_defaults(func=cmd_run)

    q = sub.add_parser("oracle", help="exact offline optimum")
    q.add_argument("--instance", required=True)
    q.add_argument("--cap", type=int)
    q.set_defaults(func=cmd_oracle)

    q = sub.add_parser("certify", help="check a stored GA transcript")
    q.add_argument("--instance", required=True)
    q.add_argument("--transcript", required=True)
    q.add_argument("--delta", default="auto")
    q.add_argument("--out")
    q.add_argument("--cap", type=int)
    q.set_defaults(func=cmd_certify)

    q = sub.add_parser("adversary", help="play a lower-bound adversary")
    q.add_argument("kind", choices=("tree", "weighted", "group-star"))
    q.add_argument("--algo", default="ga")
    q.add_argument("--levels", type=int, default=2)
    q.add_argument("--k", type=int, default=6)
    q.add_argument("--n", type=int, default=5)
    q.add_argument("--trials", type=int)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--transcript")
    q.set_defaults(func=cmd_adversary)

    q = sub.add_parser("gen", help="write a seeded random instance")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--density", type=float, default=0.3)
    q.add_argument("--palette", default=",".join(map(str, DEFAULT_PALETTE)))
    q.add_argument("--demands", type=int, default=3)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--max-edges", type=int)
    q.add_argument("--out", default="-")
    q.set_defaults(func=cmd_gen)

    q = sub.add_parser("bench", help="random sweep with GA, oracle and checkers")
    q.add_argument("--count", type=int, default=200)
    q.add_argument("--n", type=int, default=12)
    q.add_argument("--seed", type=int, default=2024)
    q.add_argument("--out", default="-")
    q.add_argument("--cap", type=int)
    q.add_argument("--workers", type=int, default=1)
    q.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        kind, msg = exc.kind, str(exc)
    except ParseError as exc:
        kind, msg = "parse", str(exc)
    except CapExceeded as exc:
        kind, msg = "cap", str(exc)
    except Infeasible as exc:
        kind, msg = "infeasible", str(exc)
    except OSError as exc:
        kind, msg = "io", str(exc)
    except (ValueError, EmptyCut) as exc:
        kind, msg = "value", str(exc)
    print(f"error: {kind}: {msg}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
