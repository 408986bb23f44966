"""The cleanup phase and the combined sub-1.49 driver.

After rounding, each uncorrelated vertex is protected by a fair coin.
Unprotected copies whose covered segment is already watched by protected
links get removed; residual subtrees whose attachment edge is protected
can be re-covered by the cheapest local up-link solution when that is
strictly cheaper.  Mixing this with the odd-cut rounding at p = 25/53 and
gamma = 3/20 gives expected cost at most 789/530 of c(z(L)).
"""

import random
from fractions import Fraction as F

import wtaplab as W
import wtaplab.cleanup as CL
from wtaplab.structured import copies_to_set, multiset_cost

inst = W.gen_random_instance(6, F(1, 3), (1, 9), seed=77)
x0 = W.odd_cut_lp(inst)
v_cor = W.select_vcor(inst, x0, F(1, 4))
sol = W.solve_structured(inst, v_cor, 2)
gamma, p = F(3, 20), F(25, 53)

print(f"c(z(L)) = {sol.z.objective_value}; target ratio 789/530 ~ 1.4887")

# one run, narrated
rng = random.Random(5)
copies, trace = W.structured_rounding(sol, rng)
prot = CL.ProtectionState.draw(sol, copies, rng)
print(f"\nsampled {len(copies)} copies; protected vertices {sorted(prot.protected_indices)}")
out = CL.cleanup(copies, prot, trace, gamma)
print(f"cleanup: multiset cost {multiset_cost(inst, copies)} -> {multiset_cost(inst, out)}")
assert W.is_feasible(inst, copies_to_set(out))

# Monte Carlo over the full driver
oddcut = W.odd_cut_rounding(inst, sol.z, sol.v_cor)
cache = {}
n_runs = 20_000
total = 0.0
for t in range(n_runs):
    res = CL.run_149_detailed(
        inst, sol, random.Random(f"demo:{t}"), gamma, p,
        ctx_cache=cache, oddcut_result=oddcut,
    )
    total += float(res.multiset_cost)
mean = total / n_runs
bound = float(F(789, 530) * sol.z.objective_value)
print(f"\nmean cost of run_149 over {n_runs} runs: {mean:.3f}")
print(f"guarantee bound 789/530 * c(z(L)):      {bound:.3f}")
assert mean <= bound * 1.01
