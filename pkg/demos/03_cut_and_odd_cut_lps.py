"""The two base relaxations and the integrality of odd cuts.

The cut relaxation asks for one unit of fractional link mass across every
tree edge.  The odd-cut family strengthens it: for any vertex set with an
odd number of crossing tree edges, crossing links plus the per-edge masses
must total one more than the edge count.  On instances with only cross-
and up-links the odd-cut relaxation has integral vertices, which this demo
verifies against brute force.
"""

from fractions import Fraction as F

import wtaplab as W

inst = W.gen_random_instance(6, F(1, 2), (1, 9), seed=4)
cut = W.cut_lp(inst)
oc = W.odd_cut_lp(inst)
opt = W.brute_force_opt(inst)
print(f"cut LP      = {cut.objective_value}")
print(f"odd-cut LP  = {oc.objective_value}")
print(f"optimum     = {opt.cost}")
assert cut.objective_value <= oc.objective_value <= opt.cost

violation = W.separate_odd_cut(inst, cut)
if violation is not None:
    print(
        f"\ncut-LP point violates the odd cut S={sorted(violation.vertex_set)} "
        f"by {violation.deficit}"
    )
else:
    print("\ncut-LP point already satisfies every odd cut here")

# Keep only cross-links and up-links: the odd-cut vertex turns integral.
keep = [
    l
    for l in range(len(inst.links))
    if W.classify_link(inst, l).cls is not W.LinkClass.IN
]
sub = W.build_instance(
    inst.n_vertices,
    [(inst.parent[v], v) for v in inst.real_edges()],
    [(inst.links[l].endpoints, inst.links[l].cost) for l in keep],
)
frac = W.odd_cut_lp(sub)
print(f"\ncross+up restriction: odd-cut value {frac.objective_value}, "
      f"integral vertex: {W.is_integral(frac)}")
assert W.is_integral(frac)
assert frac.objective_value == W.brute_force_opt(sub).cost
print("matches the brute-force optimum exactly")
