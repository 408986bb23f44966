"""Exact solvers: branch-and-bound brute force and the up-link tree DP.

The brute force handles any instance with few links; the DP is exact for
instances whose links are all up-links and scales much further.  They
agree wherever both run, which is the backbone of the test suite.
"""

from fractions import Fraction as F

import wtaplab as W
from wtaplab import correlation

inst = W.gen_random_instance(7, F(1, 3), (1, 9), seed=12)
print(f"random instance: {inst.n_vertices} vertices, {len(inst.links)} links")

opt = W.brute_force_opt(inst)
print(f"brute-force optimum: cost {opt.cost}, links {sorted(opt.links)}")

# Restrict to up-links; the DP solves this restriction exactly.
ups = sorted(correlation.uplinks(inst))
sub = W.build_instance(
    inst.n_vertices,
    [(inst.parent[v], v) for v in inst.real_edges()],
    [(inst.links[l].endpoints, inst.links[l].cost) for l in ups],
)
dp = W.uplink_dp_opt(sub)
bf = W.brute_force_opt(sub)
print(f"up-link restriction: DP cost {dp.cost}, brute cost {bf.cost}")
assert dp.cost == bf.cost

# add_q answers "cheapest up-link cover of a subtree": the primitive the
# cleanup phase uses to patch holes it creates.
deep = max(inst.real_edges(), key=lambda e: inst.depth[e])
q = {deep}
if inst.parent[deep] != inst.root:
    q.add(inst.parent[deep])
cover = W.add_q(sub, q, range(len(sub.links)))
print(f"ADD(Q) for Q={sorted(q)}: cost {cover.cost}, links {sorted(cover.links)}")
