"""A reproducible sweep: greedy, oracle and every checker per instance."""

import sys
from collections import Counter

from dbsf.formats import format_report
from dbsf.generate import acceptance_instance
from dbsf.harness import evaluate_instance

count = int(sys.argv[1]) if len(sys.argv) > 1 else 50

rows = []
for i in range(count):
    row, tr, suite, sol = evaluate_instance(acceptance_instance(i), str(i))
    rows.append(row)

## Empirical ratios sit far below the theoretical multiplier.
ratios = Counter(str(r.ratio) for r in rows if r.ratio is not None)
print("ratio histogram", dict(sorted(ratios.items())))
print("worst ratio", max(r.ratio for r in rows if r.ratio is not None))
print("rows over the bound", sum(1 for r in rows if r.ratio_ok is False))

## Flags per checker.
flags = Counter(f for r in rows for f in r.violations)
print("flagged checkers", dict(flags))

print(format_report(rows[:5]))
