"""Sweeping the correlation threshold delta.

Correlated nodes come from pairwise fractional overlap between a parent
edge and its grandparent edge: bigger delta means fewer correlated nodes,
more links paying factor 2 in the tree rounding but fewer in the odd-cut
rounding.  The sweep shows how the two costs trade off on a few instances.
"""

import random
from fractions import Fraction as F

import wtaplab as W
import wtaplab.cleanup as CL
from wtaplab.errors import WtapError

deltas = [F(1, 100), F(1, 8), F(1, 4), F(1, 2), F(1)]
seeds = [39, 55, 63]

for seed in seeds:
    inst = W.gen_random_instance(6, F(1, 3), (1, 9), seed=seed)
    x0 = W.odd_cut_lp(inst)
    opt = W.brute_force_opt(inst)
    print(f"\nseed {seed}: n={inst.n_vertices} m={len(inst.links)} "
          f"opt={opt.cost} oddcut={x0.objective_value}")
    for delta in deltas:
        v_cor = W.select_vcor(inst, x0, delta)
        try:
            sol = W.solve_structured(inst, v_cor, 2)
        except WtapError as exc:
            print(f"  delta={delta}: {type(exc).__name__}")
            continue
        oddcut = W.odd_cut_rounding(inst, sol.z, v_cor)
        cache = {}
        total = 0.0
        n_runs = 2000
        for t in range(n_runs):
            res = CL.run_149_detailed(
                inst, sol, random.Random(f"sweep:{seed}:{delta}:{t}"),
                ctx_cache=cache, oddcut_result=oddcut,
            )
            total += float(res.multiset_cost)
        print(
            f"  delta={str(delta):>5}: |V_cor|={len(v_cor)} "
            f"c(z)={sol.z.objective_value} oddcut-branch={oddcut.cost} "
            f"mean149={total / n_runs:.3f}"
        )
