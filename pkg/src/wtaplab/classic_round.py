"""Splitting-based 2-approximation and the odd-cut rounding scheme.

Both algorithms share the splitting device: a cross- or in-link is replaced
by its two up-link halves at the same cost and fractional value.  The
2-approximation splits everything and solves the resulting up-link instance
exactly.  The odd-cut rounding splits only correlated links, partitions the
tree into per-vertex pieces whose links are all cross or up relative to the
piece root, and solves each piece integrally; the integrality of the
odd-cut relaxation on cross+up instances makes each piece cost at most its
fractional budget.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import core, correlation
from .core import Instance, LinkClass, LinkRecord
from .errors import SupportViolation
from .exact import ExactSolution, brute_force_opt
from .lp import FractionalSolution, cut_lp, is_integral, odd_cut_lp


@dataclass(frozen=True)
class PartitionPiece:
    vertex_set: frozenset[int]
    root: int
    edges: frozenset[int]
    links: tuple[LinkRecord, ...]


def _cheapest_by_endpoints(inst: Instance) -> dict[tuple[int, int], int]:
    table: dict[tuple[int, int], int] = {}
    for rec in inst.links:
        cur = table.get(rec.endpoints)
        if cur is None or (rec.cost, rec.id) < (inst.links[cur].cost, cur):
            table[rec.endpoints] = rec.id
    return table


def _materialize(inst: Instance, halves: Iterable[LinkRecord]) -> frozenset[int]:
    """Map split halves back to instance links: the cheapest link with the
    same endpoints when one exists (shadow-complete instances always have
    one), otherwise the origin link, which covers a superset."""
    table = _cheapest_by_endpoints(inst)
    chosen = set()
    for rec in halves:
        hit = table.get(rec.endpoints)
        chosen.add(hit if hit is not None else rec.origin)
    return frozenset(chosen)


def split_round_2approx(inst: Instance) -> ExactSolution:
    """Solve the Cut LP, split its support into up-links, cover exactly.

    The split support is an up-link-feasible fractional cover of cost at
    most twice the LP value; integrality of the Cut LP on up-link instances
    turns it into an integral cover of no larger cost.
    """
    frac = cut_lp(inst)
    from .exact import uplink_dp_opt

    split_links: list[tuple[tuple[int, int], Fraction, int]] = []
    for l in sorted(frac.support()):
        info = core.classify_link(inst, l)
        rec = inst.links[l]
        if info.cls is LinkClass.UP:
            split_links.append((rec.endpoints, rec.cost, l))
        else:
            for half in core.split_link(inst, l):
                split_links.append((half.endpoints, rec.cost, l))

    best: dict[tuple[int, int], tuple[Fraction, int]] = {}
    for ends, cost, source in split_links:
        cand = (cost, source)
        if ends not in best or cand < best[ends]:
            best[ends] = cand

    sub = core.build_instance(
        inst.n_vertices,
        [(inst.parent[v], v) for v in range(inst.n_vertices) if v != inst.root],
        [(ends, cost) for ends, (cost, _) in sorted(best.items())],
    )
    dp = uplink_dp_opt(sub)
    halves = [
        LinkRecord(
            id=-1,
            endpoints=sub.links[l].endpoints,
            cost=sub.links[l].cost,
            origin=best[sub.links[l].endpoints][1],
        )
        for l in dp.links
    ]
    chosen = _materialize(inst, halves)
    cost = inst.cost_of(chosen)
    assert core.is_feasible(inst, chosen)
    assert cost <= 2 * frac.objective_value
    return ExactSolution(cost=cost, links=frozenset(chosen))


def _check_support(inst: Instance, v_cor: frozenset[int], support: Sequence[LinkRecord]) -> None:
    for rec in support:
        u, v = rec.endpoints
        apex = inst.lca(u, v)
        path = inst.path_between(u, v)
        leading = {e for e in path if inst.parent[e] == apex}
        for e in path:
            if e not in leading and e not in v_cor:
                raise SupportViolation(
                    f"link {rec.endpoints} covers uncorrelated non-leading edge e_{e}"
                )


def build_partition(
    inst: Instance,
    v_cor: frozenset[int],
    support: Sequence[LinkRecord],
) -> list[PartitionPiece]:
    """One piece per vertex: the vertex, its uncorrelated children, and the
    correlated components hanging below them.  Piece edge sets partition the
    tree edges and the support links land in exactly one piece each."""
    _check_support(inst, v_cor, support)
    for rec in support:
        u, v = rec.endpoints
        apex = inst.lca(u, v)
        path = inst.path_between(u, v)
        leading = {e for e in path if inst.parent[e] == apex}
        if any(e in v_cor for e in leading) and apex not in rec.endpoints:
            raise SupportViolation(
                f"correlated link {rec.endpoints} was not split into up-links"
            )

    vertex_sets: dict[int, set[int]] = {}
    for i in range(inst.n_vertices):
        vs = {i}
        for c in correlation.uncorrelated_child_edges(inst, v_cor, i):
            vs.add(c)
            stack = [c]
            while stack:
                x = stack.pop()
                for w in inst.children[x]:
                    if w in v_cor:
                        vs.add(w)
                        stack.append(w)
        vertex_sets[i] = vs

    edge_sets: dict[int, set[int]] = {i: set() for i in vertex_sets}
    seen_edges: dict[int, int] = {}
    for e in inst.real_edges():
        owners = [
            i
            for i, vs in vertex_sets.items()
            if e in vs and inst.parent[e] in vs
        ]
        assert len(owners) == 1, f"edge e_{e} lies in {len(owners)} pieces"
        edge_sets[owners[0]].add(e)
        seen_edges[e] = owners[0]

    link_sets: dict[int, list[LinkRecord]] = {i: [] for i in vertex_sets}
    for rec in support:
        u, v = rec.endpoints
        owners = [i for i, vs in vertex_sets.items() if u in vs and v in vs]
        assert len(owners) == 1, f"link {rec.endpoints} lies in {len(owners)} pieces"
        i = owners[0]
        for e in inst.path_between(u, v):
            assert seen_edges[e] == i, "support link covers a foreign edge"
        link_sets[i].append(rec)

    pieces = []
    for i in sorted(vertex_sets):
        pieces.append(
            PartitionPiece(
                vertex_set=frozenset(vertex_sets[i]),
                root=i,
                edges=frozenset(edge_sets[i]),
                links=tuple(link_sets[i]),
            )
        )
    return pieces


def _piece_instance(
    inst: Instance, piece: PartitionPiece
) -> tuple[Instance, dict[int, LinkRecord], dict[int, int]]:
    """Re-indexed sub-instance for one piece.

    Duplicate endpoint pairs keep the cheapest record; the returned budget
    map still accounts every support record, so the piece budget is the full
    fractional cost of the piece's links.
    """
    verts = sorted(piece.vertex_set, key=lambda v: (inst.depth[v], v))
    remap = {v: i for i, v in enumerate(verts)}
    edges = [(remap[inst.parent[e]], remap[e]) for e in sorted(piece.edges)]
    best: dict[tuple[int, int], tuple[Fraction, LinkRecord]] = {}
    for idx, rec in enumerate(piece.links):
        u, v = rec.endpoints
        ends = (min(remap[u], remap[v]), max(remap[u], remap[v]))
        cand = (rec.cost, idx)
        if ends not in best or cand < (best[ends][0], best[ends][1]):
            best[ends] = (rec.cost, idx)
    sub = core.build_instance(
        len(verts),
        edges,
        [(ends, cost) for ends, (cost, _) in sorted(best.items())],
    )
    back = {}
    for l, srec in enumerate(sub.links):
        _, idx = best[srec.endpoints]
        back[l] = piece.links[idx]
    return sub, back, remap


def odd_cut_rounding(
    inst: Instance,
    z: FractionalSolution,
    v_cor: frozenset[int],
    use_lp_vertex: bool = False,
) -> ExactSolution:
    """Integral solution of cost at most 2 c(z(L_C)) + c(z(L_U)).

    Splits the correlated support links into up-link halves at value z(l),
    partitions, and solves each piece exactly.  With ``use_lp_vertex`` the
    per-piece solve goes through the piece's odd-cut relaxation instead and
    asserts the vertex is integral, exercising the integrality property
    directly; the default exact route cross-validates it.
    """
    support = sorted(z.support())
    support_recs = [inst.links[l] for l in support]
    _check_support(inst, v_cor, support_recs)

    l_cor = correlation.correlated_links(inst, v_cor)
    split_records: list[tuple[LinkRecord, Fraction]] = []
    for l in support:
        rec = inst.links[l]
        info = core.classify_link(inst, l)
        if l in l_cor and info.cls is not LinkClass.UP:
            for half in core.split_link(inst, l):
                split_records.append((half, z(l)))
        else:
            tagged = LinkRecord(
                id=-1, endpoints=rec.endpoints, cost=rec.cost, origin=l
            )
            split_records.append((tagged, z(l)))

    budget_total = sum((rec.cost * val for rec, val in split_records), Fraction(0))
    pieces = build_partition(inst, v_cor, [rec for rec, _ in split_records])
    value_of = {id(rec): val for rec, val in split_records}

    chosen_halves: list[LinkRecord] = []
    for piece in pieces:
        if not piece.edges:
            continue
        sub, back, _ = _piece_instance(inst, piece)
        budget = sum(
            (rec.cost * value_of[id(rec)] for rec in piece.links), Fraction(0)
        )
        if use_lp_vertex:
            frac = odd_cut_lp(sub)
            assert is_integral(frac), "piece odd-cut vertex is fractional"
            picked = sorted(l for l, v in frac.values.items() if v == 1)
            cost = sum((sub.links[l].cost for l in picked), Fraction(0))
        else:
            sol = brute_force_opt(sub, cap=len(sub.links))
            picked = sorted(sol.links)
            cost = sol.cost
        assert cost <= budget, "piece cost exceeds its fractional budget"
        chosen_halves.extend(back[l] for l in picked)

    chosen = _materialize(inst, chosen_halves)
    cost = inst.cost_of(chosen)
    bound = 2 * correlation.mass_cost(inst, z, l_cor) + correlation.mass_cost(
        inst, z, (l for l in z.values if l not in l_cor)
    )
    assert core.is_feasible(inst, chosen)
    assert cost <= bound, "odd-cut rounding exceeded its cost bound"
    return ExactSolution(cost=cost, links=frozenset(chosen))
