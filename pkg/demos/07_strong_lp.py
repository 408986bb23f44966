"""The subtree-event relaxation and its consistency machinery.

Events generalize from stars to subtrees with few leaves: a triple names
the subtree, the leaf edges covered by few links, and exactly which links
those are.  Extension constraints force event weights to distribute over
consistent extensions on larger subtrees, grown from a canonical center.
The 0/1 point induced by any integral optimum satisfies everything, and
the relaxation value sits between the odd-cut value and the optimum.
"""

from fractions import Fraction as F

import wtaplab as W
from wtaplab.strong import enumerate_events

inst = W.gen_random_instance(5, F(1, 4), (1, 9), seed=8)
beta, rho = 1, 2

subs = W.enumerate_subtrees(inst, beta)
events = enumerate_events(inst, subs, rho)
print(f"{len(subs)} subtrees with <= {beta + 3} leaves, "
      f"{sum(len(v) for v in events.values())} events")

r = subs[0]
q = max(subs, key=lambda s: (len(s), sorted(s)))
ev = events[r][0]
center = W.extension_center(inst, r, q)
exts = W.ext_set(inst, ev, q, events, rho)
print(f"\nevent on R={sorted(r)} extends onto Q={sorted(q)} from center {center}: "
      f"{len(exts)} extensions")

opt = W.brute_force_opt(inst)
cand = W.intended_solution(inst, opt.links, beta, rho)
viols = W.check_strong_feasibility(inst, cand, beta, rho)
print(f"\nintended solution from the optimum: {len(viols)} violations")
assert not viols

oc = W.odd_cut_lp(inst).objective_value
strong = W.solve_strong_lp(inst, beta, rho)
print(f"odd-cut {oc} <= strong {strong} <= optimum {opt.cost}")
assert oc <= strong <= opt.cost
