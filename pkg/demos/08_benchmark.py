"""Benchmark orchestration: deterministic trials, exact per-run checks.

Every trial generates an instance from the trial seed, runs the requested
algorithms, validates each guarantee-level bound exactly, and emits one JSON
line with rationals as "p/q" strings.  Same config, same bytes.
"""

import io
import json
from fractions import Fraction as F

from wtaplab.harness import BenchConfig, run_benchmark

cfg = BenchConfig(
    seed=7,
    trials=10,
    n_range=(3, 6),
    link_density=F(1, 3),
    cost_range=(1, 10),
    algorithms=("exact", "dp", "split2", "oddcut", "structured15", "full149"),
    rho_prime=2,
)

buf = io.StringIO()
reports, summary = run_benchmark(cfg, buf)

print("summary:", json.dumps(summary, sort_keys=True))
print("\nper-trial mean ratios vs optimum:")
for r in reports:
    ratios = {k: f"{float(v):.3f}" for k, v in sorted(r.ratios_opt.items())}
    print(f"  {r.instance_id} n={r.n} m={r.m} {ratios}")

again = io.StringIO()
run_benchmark(cfg, again)
assert buf.getvalue() == again.getvalue()
print("\nre-run with the same seed is byte-identical:",
      buf.getvalue() == again.getvalue())
