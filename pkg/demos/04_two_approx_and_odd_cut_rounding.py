"""Splitting-based rounding: the classic factor 2 and the refined variant.

Splitting every fractional cross/in-link into two up-link halves doubles
cost at worst, and the resulting up-link problem solves exactly; that is
the classic 2-approximation.  The refined rounding splits only correlated
links, partitions the tree into pieces whose links are cross or up
relative to the piece root, and rounds each piece at no loss, paying the
factor 2 only on the correlated mass.
"""

from fractions import Fraction as F

import wtaplab as W
from wtaplab import correlation

inst = W.gen_random_instance(6, F(1, 3), (1, 9), seed=21)
cut = W.cut_lp(inst)
two = W.split_round_2approx(inst)
opt = W.brute_force_opt(inst)
print(f"cut LP {cut.objective_value}, split rounding {two.cost}, optimum {opt.cost}")
assert two.cost <= 2 * cut.objective_value

# structured pipeline supplies (z, V_cor) for the refined rounding
x0 = W.odd_cut_lp(inst)
v_cor = W.select_vcor(inst, x0, F(1, 4))
sol = W.solve_structured(inst, v_cor, 2)
l_cor = correlation.correlated_links(inst, v_cor)
bound = 2 * correlation.mass_cost(inst, sol.z, l_cor) + correlation.mass_cost(
    inst, sol.z, (l for l in sol.z.values if l not in l_cor)
)
print(f"\ncorrelated nodes: {sorted(v_cor)}; correlated links: {sorted(l_cor)}")

pieces = W.build_partition(
    inst,
    v_cor,
    [inst.links[l] for l in sorted(sol.z.support())
     if l not in l_cor or W.classify_link(inst, l).cls is W.LinkClass.UP]
    + [h for l in sorted(sol.z.support())
       if l in l_cor and W.classify_link(inst, l).cls is not W.LinkClass.UP
       for h in W.split_link(inst, l)],
)
print("pieces with edges:",
      [(p.root, sorted(p.edges)) for p in pieces if p.edges])

rounded = W.odd_cut_rounding(inst, sol.z, v_cor)
print(f"odd-cut rounding: cost {rounded.cost} <= bound {bound}")
assert rounded.cost <= bound
