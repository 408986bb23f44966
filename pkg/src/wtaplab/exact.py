"""Exact oracles: brute force, up-link tree DP, and cheapest subtree covers.

The DP processes vertices bottom-up.  The state at a vertex v is the highest
ancestor reached by links chosen inside T_v: every up-link whose lower
endpoint lies in T_v covers a contiguous chain through v, so only the
maximum reach matters.  Covering an edge e_v is then "some link chosen in
T_v reaches above v".
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import core
from .core import Instance, LinkClass
from .errors import Infeasible, NonUplinkPresent, TooLarge, Uncoverable

BRUTE_FORCE_CAP = 24


@dataclass(frozen=True)
class ExactSolution:
    cost: Fraction
    links: frozenset[int]


def brute_force_opt(inst: Instance, cap: int = BRUTE_FORCE_CAP) -> ExactSolution:
    """Minimum-cost feasible link subset by branch and bound.

    Ties break toward the lexicographically smallest sorted id tuple.
    Mandatory links (sole cover of some edge) are fixed up front; branches
    are pruned on cost and on edges left with no remaining candidate.
    """
    m = len(inst.links)
    if m > cap:
        raise TooLarge(f"{m} links exceeds brute-force cap {cap}")
    edges = inst.real_edges()
    for e in edges:
        if not inst.cover[e]:
            raise Infeasible(f"edge e_{e} is covered by no link")

    mandatory = set()
    for e in edges:
        if len(inst.cover[e]) == 1:
            mandatory.update(inst.cover[e])
    base_cost = inst.cost_of(mandatory)
    base_covered = set()
    for link in mandatory:
        base_covered.update(inst.link_path[link])
    todo = [e for e in edges if e not in base_covered]
    free = sorted(set(range(m)) - mandatory)

    best: list[Optional[tuple[Fraction, tuple[int, ...]]]] = [None]

    def viable(chosen: set[int], banned: set[int]) -> bool:
        for e in todo:
            cand = inst.cover[e]
            if cand & chosen:
                continue
            if cand <= banned:
                return False
        return True

    def record(cost: Fraction, chosen: set[int]) -> None:
        key = (cost, tuple(sorted(mandatory | chosen)))
        if best[0] is None or key < best[0]:
            best[0] = key

    def search(idx: int, cost: Fraction, chosen: set[int], banned: set[int]) -> None:
        if best[0] is not None and cost > best[0][0]:
            return
        uncovered = [
            e
            for e in todo
            if not (inst.cover[e] & chosen)
        ]
        if not uncovered:
            record(cost, chosen)
            return
        if idx == len(free):
            return
        link = free[idx]
        # include first, then exclude; exclusion may kill coverage
        chosen.add(link)
        search(idx + 1, cost + inst.links[link].cost, chosen, banned)
        chosen.discard(link)
        banned.add(link)
        if viable(chosen, banned):
            search(idx + 1, cost, chosen, banned)
        banned.discard(link)

    search(0, base_cost, set(), set())
    if best[0] is None:
        raise Infeasible("no feasible subset exists")
    cost, ids = best[0]
    return ExactSolution(cost=cost, links=frozenset(ids))


@dataclass(frozen=True)
class _UpLink:
    """An up-link inside a DP subproblem: covers the chain bottom..top."""

    key: int          # caller-provided id, reported back in the solution
    top: int          # apex vertex
    bottom: int       # lower endpoint vertex
    cost: Fraction


def _chain_cover_dp(
    inst: Instance,
    root: int,
    required: frozenset[int],
    uplinks: Sequence[_UpLink],
) -> tuple[Fraction, frozenset[int]]:
    """Cheapest subset of up-links covering ``required`` edges under ``root``.

    ``required`` must be the full edge set of a subtree hanging below
    ``root`` (every edge between a required edge and ``root`` is required).
    Reaches above ``root`` are useless and clamped.
    """
    INF = None  # sentinel; table entries are (cost, choice) or None

    span = set()
    for e in required:
        span.add(e)
        span.add(inst.parent[e])
    verts = sorted(span, key=lambda v: inst.depth[v])
    vert_set = set(verts)

    links_at: dict[int, list[_UpLink]] = {v: [] for v in verts}
    for ul in uplinks:
        if ul.bottom in vert_set:
            links_at[ul.bottom].append(ul)

    kids: dict[int, list[int]] = {v: [] for v in verts}
    for e in required:
        kids[inst.parent[e]].append(e)
    for v in kids:
        kids[v].sort()

    # table[v]: dict reach-vertex -> (cost, plan); plan rebuilds the set
    table: dict[int, dict[int, tuple[Fraction, tuple]]] = {}

    def anc_chain(v: int) -> list[int]:
        out = [v]
        while v != root:
            v = inst.parent[v]
            out.append(v)
        return out

    for v in reversed(verts):
        chain = anc_chain(v)
        child_tables = []
        base = Fraction(0)
        ok = True
        for c in kids[v]:
            # child subtree must at least cover e_c, i.e. reach v or higher
            sub = table[c]
            opts = {h: sub[h] for h in sub if inst.depth[h] <= inst.depth[v]}
            if not opts:
                ok = False
                break
            child_tables.append((c, opts))
            base += min(opts.values(), key=lambda t: t[0])[0]
        entry: dict[int, tuple[Fraction, tuple]] = {}
        if ok:
            floor_plan = tuple(
                ("child", c, min(opts.items(), key=lambda kv: (kv[1][0], inst.depth[kv[0]]))[0])
                for c, opts in child_tables
            )
            entry[v] = (base, floor_plan)
            for h in chain[1:]:
                cands: list[tuple[Fraction, tuple]] = []
                # upgrade one child subtree to reach h
                for i, (c, opts) in enumerate(child_tables):
                    reach_opts = [
                        (cost, hh)
                        for hh, (cost, _) in opts.items()
                        if inst.depth[hh] <= inst.depth[h]
                    ]
                    if not reach_opts:
                        continue
                    up_cost, hh = min(reach_opts, key=lambda t: (t[0], inst.depth[t[1]]))
                    floor = min(opts.values(), key=lambda t: t[0])[0]
                    plan = tuple(
                        ("child", cc, hh if j == i else min(oo.items(), key=lambda kv: (kv[1][0], inst.depth[kv[0]]))[0])
                        for j, (cc, oo) in enumerate(child_tables)
                    )
                    cands.append((base - floor + up_cost, plan))
                # or buy a link at v reaching h
                buys = [
                    ul
                    for ul in links_at[v]
                    if inst.depth[ul.top] <= inst.depth[h]
                ]
                if buys:
                    ul = min(buys, key=lambda u: (u.cost, u.key))
                    cands.append((base + ul.cost, floor_plan + (("buy", ul.key),)))
                if cands:
                    entry[h] = min(cands, key=lambda t: t[0])
        table[v] = entry

    root_tab = table.get(root, {})
    if root not in root_tab:
        raise Uncoverable("some required edge has no admissible up-link")
    cost, _ = root_tab[root]

    chosen: set[int] = set()

    def rebuild(v: int, h: int) -> None:
        _, plan = table[v][h]
        for item in plan:
            if item[0] == "buy":
                chosen.add(item[1])
            else:
                _, c, hh = item
                rebuild(c, hh)

    rebuild(root, root)
    return cost, frozenset(chosen)


def uplink_dp_opt(inst: Instance) -> ExactSolution:
    """Exact optimum for instances whose links are all up-links."""
    uplinks = []
    for rec in inst.links:
        info = core.classify_link(inst, rec.id)
        if info.cls is not LinkClass.UP:
            raise NonUplinkPresent(f"link {rec.id} is a {info.cls.value}-link")
        u, v = rec.endpoints
        top, bottom = (u, v) if inst.depth[u] < inst.depth[v] else (v, u)
        uplinks.append(_UpLink(key=rec.id, top=top, bottom=bottom, cost=rec.cost))
    required = frozenset(inst.real_edges())
    try:
        cost, links = _chain_cover_dp(inst, inst.root, required, uplinks)
    except Uncoverable as exc:
        raise Infeasible(str(exc)) from exc
    return ExactSolution(cost=cost, links=links)


def add_q(
    inst: Instance,
    q_edges: Iterable[int],
    allowed: Iterable[int],
) -> ExactSolution:
    """Cheapest subset of ``allowed`` up-links covering every edge of Q.

    Q must be a connected subtree with a single highest edge.  Links whose
    coverage extends beyond Q are clamped to their segment inside Q.
    """
    q = frozenset(q_edges)
    if not q:
        return ExactSolution(cost=Fraction(0), links=frozenset())
    top_edge = min(q, key=lambda e: inst.depth[e])
    q_root = inst.parent[top_edge]

    effective = []
    for link in sorted(set(allowed)):
        info = core.classify_link(inst, link)
        if info.cls is not LinkClass.UP:
            raise NonUplinkPresent(f"allowed link {link} is not an up-link")
        seg = [e for e in inst.link_path[link] if e in q]
        if not seg:
            continue
        bottom = max(seg, key=lambda e: inst.depth[e])
        top_child = min(seg, key=lambda e: inst.depth[e])
        effective.append(
            _UpLink(
                key=link,
                top=inst.parent[top_child],
                bottom=bottom,
                cost=inst.links[link].cost,
            )
        )
    cost, links = _chain_cover_dp(inst, q_root, q, effective)
    return ExactSolution(cost=cost, links=links)
