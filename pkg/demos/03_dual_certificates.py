"""Lower bounds from the dual program, and the checks behind the ratio bound."""

from dbsf import UNBOUNDED, Graph, Instance, brute_force_opt, generate_random, run_ga
from dbsf.certify import (
    breakpoints,
    build_dual_certificate,
    certified_lower_bound,
    check_excess_bound,
    check_ratio_bound,
    check_separation,
    demands_above,
    find_witness_interval,
    format_certificate,
    gamma,
    verify_dual_certificate,
)

## On s - a - t the certificate at r = 1 is tight: objective 2 = OPT.
g = Graph(3, (UNBOUNDED, 1, UNBOUNDED), ((0, 1), (1, 2)))
inst = Instance(g, ((0, 2),))
_, tr = run_ga(inst)
cert = build_dual_certificate(tr.graph, tr, 1, 1)
print(format_certificate(cert))
print("verifies:", bool(verify_dual_certificate(tr.graph, cert, tr.demands)))

## A bigger run. Sweep r over thresholds, final upticks and midpoints.
inst = generate_random(10, 0.3, (1, 2, 3, "inf"), 4, 7, max_edges=18)
_, tr = run_ga(inst)
sol = brute_force_opt(inst)
print("h =", tr.max_load(), "OPT =", sol.value)
print(f"{'r':>6} {'|Gamma|':>7} {'|D(r)|':>6} {'sep':>4} {'need':>4} excess<=bound")
for r in breakpoints(tr):
    sep = check_separation(tr.graph, tr, r, strict=False)
    exc = check_excess_bound(tr, r, 1, strict=False)
    print(f"{str(r):>6} {len(gamma(tr, r)):>7} {len(demands_above(tr, r)):>6} {sep.separating:>4} {sep.required:>4} "
          f"{exc.excess} <= {exc.bound}")

# above the largest threshold D(r) is empty; nothing forces a separated component there

## Best certified lower bound over the optimal deltas.
lb = certified_lower_bound(tr.graph, tr, sol.deltas, certified=True)
print("lower bound", lb.value, "at r =", lb.r, "delta =", lb.delta, "<= OPT:", lb.value <= sol.value)

## Witness interval and the final ratio check.
for delta in sorted(d for d in sol.deltas if d is not UNBOUNDED):
    try:
        w = find_witness_interval(tr, delta)
        print(f"delta={delta}: r={w.r} level q={w.q} excess={w.excess} >= {w.required}")
    except Exception as exc:
        print(f"delta={delta}: {type(exc).__name__}")
rep = check_ratio_bound(tr, sol.value)
print("ratio", rep.ratio, "bound multiplier", rep.multiplier, "holds", rep.holds)
assert rep.ratio is None or rep.ratio <= rep.multiplier
