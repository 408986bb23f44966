"""The star-event LP and its top-down sampling.

An event on a star asserts exactly which links cover the star's edges.
The joint LP ties per-link marginals x to the event weights y and couples
them to an odd-cut-feasible vector z that pays for everything.  Rounding
samples events down the tree, conditioning each star on its parent edge's
outcome: correlated links ride along for free, uncorrelated non-up links
pay both of their leading edges.
"""

import random
from collections import Counter
from fractions import Fraction as F

import wtaplab as W
from wtaplab import correlation
from wtaplab.structured import copies_to_set, multiset_cost

inst = W.gen_random_instance(6, F(1, 3), (1, 9), seed=39)
x0 = W.odd_cut_lp(inst)
v_cor = W.select_vcor(inst, x0, F(1, 4))
sol = W.solve_structured(inst, v_cor, 2)

print(f"correlated nodes {sorted(v_cor)}; c(z(L)) = {sol.z.objective_value}")
support = sorted(
    (ev for ev, val in sol.y.items() if val), key=lambda ev: ev.sort_key()
)
print(f"{len(sol.y)} events, {len(support)} in the support; a few of them:")
for ev in support[:6]:
    print(f"  edges {sorted(ev.edges)} links {sorted(ev.links)}  y={sol.y[ev]}")

l_cor = correlation.correlated_links(inst, v_cor)
l_up = correlation.uplinks(inst)
expect = correlation.mass_cost(
    inst, sol.x, (l for l in sol.x.values if l in l_cor or l in l_up)
) + 2 * correlation.mass_cost(
    inst, sol.x, (l for l in sol.x.values if l not in l_cor and l not in l_up)
)

rng = random.Random(0)
n_runs = 20_000
total = 0.0
mult = Counter()
for _ in range(n_runs):
    copies, trace = W.structured_rounding(sol, rng)
    assert W.is_feasible(inst, copies_to_set(copies))
    total += float(multiset_cost(inst, copies))
    for c in copies:
        mult[c.link] += 1

print(f"\nmean multiset cost over {n_runs} runs: {total / n_runs:.3f}")
print(f"exact expectation c(x(L_C u L_UP)) + 2 c(x(L_U \\ L_UP)): {float(expect):.3f}")
print("\nper-link expected multiplicity vs x:")
for l in sorted(sol.x.support()):
    kind = "corr/up" if (l in l_cor or l in l_up) else "uncorr"
    factor = 1 if (l in l_cor or l in l_up) else 2
    print(
        f"  link {inst.links[l].endpoints} ({kind}): "
        f"{mult[l] / n_runs:.3f} vs {factor} * {float(sol.x.values[l]):.3f}"
    )
