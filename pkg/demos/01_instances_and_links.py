"""Instances, link classification, shadows, and splitting.

A WTAP instance is a rooted tree plus weighted links; a link covers the
tree path between its endpoints, and feasible solutions cover every tree
edge.  This walk-through builds a small instance by hand and inspects the
derived link metadata.
"""

from fractions import Fraction as F

import wtaplab as W

# A rooted tree:      0
#                    / \
#                   1   2
#                  / \
#                 3   4
inst = W.build_instance(
    5,
    [(0, 1), (0, 2), (1, 3), (1, 4)],
    [((3, 4), 2), ((2, 3), 5), ((0, 4), F(3, 2))],
)

print("tree edges (by child vertex):", inst.real_edges())
for rec in inst.links:
    info = W.classify_link(inst, rec.id)
    print(
        f"link {rec.endpoints} cost {rec.cost}: {info.cls.value}-link, "
        f"apex {info.apex}, leading edges {sorted(info.leading_edges)}, "
        f"covers {list(info.path)}"
    )

print("\nlinks covering edge e_1:", sorted(W.covering_links(inst, 1)))
print("{(3,4)} alone feasible?", W.is_feasible(inst, [0]))
print("{(3,4),(2,3),(0,4)} feasible?", W.is_feasible(inst, [0, 1, 2]))

# Shadow completion adds every sub-path of every link at the parent cost,
# keeping the cheapest candidate per endpoint pair.
sc = W.shadow_complete(inst)
print(f"\nafter shadow completion: {len(sc.links)} links")
for rec in sc.links:
    marker = "" if rec.origin == rec.id else f"  (shadow of link {rec.origin})"
    print(f"  {rec.endpoints} cost {rec.cost}{marker}")

# Splitting replaces a cross/in-link by its two up-link halves.
half_a, half_b = W.split_link(inst, 0)
print(f"\nsplitting {inst.links[0].endpoints} gives up-links "
      f"{half_a.endpoints} and {half_b.endpoints}, each at cost {half_a.cost}")
