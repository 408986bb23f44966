"""Correlated nodes, edges and links, shared by the rounding modules.

An edge is correlated when its child vertex belongs to the correlated node
set; a link is correlated when one of its leading edges is.  Everything
here is derived once from (instance, v_cor) so the structured, classic and
cleanup modules agree on a single source of truth.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from . import core
from .core import Instance, LinkClass


def correlated_edges(inst: Instance, v_cor: frozenset[int]) -> frozenset[int]:
    return frozenset(v for v in v_cor if v != inst.root)


def e_star(inst: Instance, v_cor: frozenset[int], v: int) -> frozenset[int]:
    """Parent edge of v plus the edges to its correlated children.

    For the root, the parent edge is the dummy edge (id == root).
    """
    out = {v}
    for c in inst.children[v]:
        if c in v_cor:
            out.add(c)
    return frozenset(out)


def uncorrelated_child_edges(inst: Instance, v_cor: frozenset[int], v: int) -> tuple[int, ...]:
    return tuple(c for c in inst.children[v] if c not in v_cor)


def uncorrelated_vertices(inst: Instance, v_cor: frozenset[int]) -> tuple[int, ...]:
    """Non-root vertices that are uncorrelated children of their parent, BFS order."""
    order = []
    queue = [inst.root]
    while queue:
        v = queue.pop(0)
        for c in inst.children[v]:
            if c not in v_cor:
                order.append(c)
            queue.append(c)
    return tuple(order)


def z_plus(inst: Instance, v_cor: frozenset[int], v_i: int) -> frozenset[int]:
    """Edge e_i plus the correlated component hanging below v_i."""
    edges = {v_i}
    stack = [v_i]
    while stack:
        x = stack.pop()
        for c in inst.children[x]:
            if c in v_cor:
                edges.add(c)
                stack.append(c)
    return frozenset(edges)


def correlated_links(inst: Instance, v_cor: frozenset[int]) -> frozenset[int]:
    """Links with at least one correlated leading edge (the set L_C)."""
    cor = set()
    for rec in inst.links:
        info = core.classify_link(inst, rec.id)
        if any(e in v_cor for e in info.leading_edges):
            cor.add(rec.id)
    return frozenset(cor)


def uplinks(inst: Instance) -> frozenset[int]:
    return frozenset(
        rec.id
        for rec in inst.links
        if core.classify_link(inst, rec.id).cls is LinkClass.UP
    )


def banned_links(inst: Instance, v_cor: frozenset[int]) -> frozenset[int]:
    """Links covering a parent edge e_v together with an uncorrelated child
    edge of v; Structured Fractional Solutions force these to zero."""
    banned = set()
    for rec in inst.links:
        path = set(inst.link_path[rec.id])
        for e in path:
            v = inst.parent[e]
            # path holds both e (uncorrelated child edge of v) and e_v
            if v != inst.root and v in path and e not in v_cor:
                banned.add(rec.id)
                break
    return frozenset(banned)


def mass_cost(inst: Instance, values, links: Iterable[int]) -> Fraction:
    """Sum of cost(l) * values(l) over the given links."""
    total = Fraction(0)
    for l in links:
        total += inst.links[l].cost * values(l)
    return total
