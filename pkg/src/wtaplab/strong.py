"""Subtree-event relaxation at tiny scale.

Events here are triples (R, R_small, L_small): a subtree R with at most
beta+3 leaves, the subset of its leaf edges asserted to be covered by few
(at most rho) links, and exactly which links those are.  The relaxation
carries per-link indicators x, per-event weights y, and per-(event, link)
weights y_l, tied together by coverage, marginal, link-consistency and
extension-consistency constraints, with the odd-cut family on x.

Extensions propagate an event outward to a larger subtree from a canonical
center vertex, growing along every center-to-leaf path until the first
small edge; the center choice makes the consistent extension of a truthful
event unique, which is what validates the consistency constraints.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Sequence

from . import core
from .core import Instance
from .errors import (
    EventExplosion,
    InfeasibleLstar,
    NotNested,
    SubtreeExplosion,
    TooLarge,
)
from .lp import (
    FractionalSolution,
    LinearProgram,
    _odd_cut_row,
    separate_odd_cut,
    solve_lp,
)

SUBTREE_CAP = 4_096
EVENT_CAP = 100_000


@dataclass(frozen=True)
class StrongEvent:
    edges: frozenset[int]
    small_edges: frozenset[int]
    links: frozenset[int]

    def sort_key(self):
        return (
            tuple(sorted(self.edges)),
            tuple(sorted(self.small_edges)),
            tuple(sorted(self.links)),
        )


@dataclass
class StrongCandidate:
    x: FractionalSolution
    y: dict[StrongEvent, Fraction]
    y_link: dict[tuple[StrongEvent, int], Fraction]


@dataclass(frozen=True)
class Violation:
    family: str
    detail: str
    deficit: Fraction


def _subtree_vertices(inst: Instance, edges: frozenset[int]) -> set[int]:
    vs = set()
    for e in edges:
        vs.add(e)
        vs.add(inst.parent[e])
    return vs


def _leaves(inst: Instance, edges: frozenset[int]) -> list[int]:
    degree: dict[int, int] = {}
    for e in edges:
        for v in (e, inst.parent[e]):
            degree[v] = degree.get(v, 0) + 1
    return sorted(v for v, d in degree.items() if d == 1)


def leaf_edges(inst: Instance, edges: frozenset[int]) -> frozenset[int]:
    leaves = set(_leaves(inst, edges))
    out = set()
    for e in edges:
        if e in leaves or inst.parent[e] in leaves:
            out.add(e)
    return frozenset(out)


def _is_connected(inst: Instance, edges: frozenset[int]) -> bool:
    if not edges:
        return False
    vs = _subtree_vertices(inst, edges)
    start = next(iter(edges))
    seen = {start, inst.parent[start]}
    frontier = [start, inst.parent[start]]
    adj: dict[int, list[int]] = {v: [] for v in vs}
    for e in edges:
        adj[e].append(inst.parent[e])
        adj[inst.parent[e]].append(e)
    while frontier:
        v = frontier.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                frontier.append(w)
    return seen == vs


def enumerate_subtrees(
    inst: Instance, beta: int, cap: int = SUBTREE_CAP
) -> list[frozenset[int]]:
    """All connected edge subsets with at most beta+3 leaf vertices."""
    edges = inst.real_edges()
    if len(edges) > 20:
        raise SubtreeExplosion(f"{len(edges)} tree edges is past enumeration range")
    out = []
    for mask in range(1, 1 << len(edges)):
        subset = frozenset(edges[i] for i in range(len(edges)) if mask >> i & 1)
        if not _is_connected(inst, subset):
            continue
        if len(_leaves(inst, subset)) > beta + 3:
            continue
        out.append(subset)
        if len(out) > cap:
            raise SubtreeExplosion(f"more than {cap} subtrees")
    out.sort(key=lambda s: (len(s), tuple(sorted(s))))
    return out


def _compatible_unions(
    inst: Instance, small: Sequence[int], per_edge: Sequence[list[frozenset[int]]],
    cap: int, seen_total: list[int],
) -> list[frozenset[int]]:
    """Unions of per-edge cover choices that agree wherever links overlap."""
    results: set[frozenset[int]] = set()

    def extend(idx: int, chosen: list[frozenset[int]], union: frozenset[int]) -> None:
        if idx == len(small):
            for e, c in zip(small, chosen):
                if (union & inst.cover[e]) != c:
                    return
            if union not in results:
                results.add(union)
                seen_total[0] += 1
                if seen_total[0] > cap:
                    raise EventExplosion(f"more than {cap} events")
            return
        e = small[idx]
        for cover in per_edge[idx]:
            if (union & inst.cover[e]) - cover:
                continue
            ok = True
            for j in range(idx):
                if (cover & inst.cover[small[j]]) - chosen[j]:
                    ok = False
                    break
            if ok:
                extend(idx + 1, chosen + [cover], union | cover)

    extend(0, [], frozenset())
    return sorted(results, key=lambda s: tuple(sorted(s)))


def enumerate_events(
    inst: Instance,
    subtrees: Sequence[frozenset[int]],
    rho: int,
    cap: int = EVENT_CAP,
) -> dict[frozenset[int], list[StrongEvent]]:
    """All events per subtree: a choice of small leaf edges plus a small
    cover for each, consistent across shared links."""
    seen_total = [0]
    out: dict[frozenset[int], list[StrongEvent]] = {}
    for r in subtrees:
        lf = sorted(leaf_edges(inst, r))
        events = []
        for k in range(len(lf) + 1):
            for small in combinations(lf, k):
                per_edge = []
                feasible = True
                for e in small:
                    covers = [
                        frozenset(c)
                        for kk in range(1, min(rho, len(inst.cover[e])) + 1)
                        for c in combinations(sorted(inst.cover[e]), kk)
                    ]
                    if not covers:
                        feasible = False
                        break
                    per_edge.append(covers)
                if not feasible:
                    continue
                if not small:
                    events.append(
                        StrongEvent(edges=r, small_edges=frozenset(), links=frozenset())
                    )
                    seen_total[0] += 1
                    continue
                for union in _compatible_unions(inst, small, per_edge, cap, seen_total):
                    events.append(
                        StrongEvent(
                            edges=r, small_edges=frozenset(small), links=union
                        )
                    )
        events.sort(key=StrongEvent.sort_key)
        out[r] = events
    return out


def extension_center(inst: Instance, r_edges: frozenset[int], q_edges: frozenset[int]) -> int:
    """Canonical vertex the extension grows from.

    The root of R is preferred; a root that is a boundary leaf hands over
    to its unique neighbor, except that a single-edge R keeps its root
    whenever the root can still expand inside Q.
    """
    if not r_edges <= q_edges:
        raise NotNested("R must be a subtree of Q")
    r_vs = _subtree_vertices(inst, r_edges)
    u = min(r_vs, key=lambda v: (inst.depth[v], v))
    r_leaves = set(_leaves(inst, r_edges))
    if u not in r_leaves:
        return u
    # u roots R, so its unique R-edge is a child edge; its far end is v
    v = next(x for x in sorted(r_edges) if inst.parent[x] == u)
    if len(r_edges) >= 2:
        return v
    q_leaves = set(_leaves(inst, q_edges))
    return u if u not in q_leaves else v


def _paths_from_center(
    inst: Instance, q_edges: frozenset[int], c: int
) -> list[tuple[int, ...]]:
    """Edge paths from the center to every other leaf of Q, in edge order."""
    adj: dict[int, list[tuple[int, int]]] = {}
    for e in q_edges:
        adj.setdefault(e, []).append((inst.parent[e], e))
        adj.setdefault(inst.parent[e], []).append((e, e))
    q_leaves = set(_leaves(inst, q_edges))
    paths = []
    stack = [(c, None, ())]
    while stack:
        v, came, path = stack.pop()
        nxt = [t for t in adj.get(v, []) if t[1] != came]
        if not nxt and v in q_leaves and v != c:
            paths.append(path)
        for w, e in nxt:
            stack.append((w, e, path + (e,)))
    paths.sort()
    return paths


def _structure_ok(
    inst: Instance,
    r_edges: frozenset[int],
    c: int,
    rp_edges: frozenset[int],
    rp_small: frozenset[int],
    q_edges: frozenset[int],
) -> bool:
    """Extension-structure test: along every center-to-leaf path of Q the
    extension is a center-rooted prefix that either swallows the whole path
    with no small edge, or ends exactly at its unique small edge."""
    for path in _paths_from_center(inst, q_edges, c):
        k = 0
        while k < len(path) and path[k] in rp_edges:
            k += 1
        prefix = path[:k]
        if any(e in rp_edges for e in path[k:]):
            return False  # P & R' must be a prefix from the center
        smalls = [e for e in prefix if e in rp_small]
        if k == len(path):
            if smalls and smalls != [prefix[-1]]:
                return False
        else:
            if k == 0 or smalls != [prefix[-1]]:
                return False
    return True


def ext_set(
    inst: Instance,
    f: StrongEvent,
    q_edges: frozenset[int],
    all_events: dict[frozenset[int], list[StrongEvent]],
    rho: int,
) -> list[StrongEvent]:
    """Extensions of f onto Q, built by growing from the center.

    Stop decisions are forced on R's edges (stop exactly at f's small
    edges); free edges of Q may stop with any small cover or continue.  A
    naive filter over all enumerated events gives the same list and serves
    as the test oracle.
    """
    if not f.edges <= q_edges:
        raise NotNested("event subtree must live inside Q")
    c = extension_center(inst, f.edges, q_edges)

    adj: dict[int, list[tuple[int, int]]] = {}
    for e in q_edges:
        adj.setdefault(e, []).append((inst.parent[e], e))
        adj.setdefault(inst.parent[e], []).append((e, e))

    # enumerate (R', R'_small) shapes by DFS from the center
    shapes: list[tuple[frozenset[int], frozenset[int]]] = []

    def branches(v: int, came: Optional[int]) -> list[list[tuple[frozenset, frozenset]]]:
        out = []
        for w, e in sorted(adj.get(v, [])):
            if e == came:
                continue
            opts: list[tuple[frozenset, frozenset]] = []
            if e in f.edges:
                if e in f.small_edges:
                    opts.append((frozenset({e}), frozenset({e})))
                else:
                    for combo in _combine(branches(w, e)):
                        opts.append((combo[0] | {e}, combo[1]))
            else:
                opts.append((frozenset({e}), frozenset({e})))  # stop here
                for combo in _combine(branches(w, e)):
                    opts.append((combo[0] | {e}, combo[1]))
            out.append(opts)
        return out

    def _combine(branch_opts) -> list[tuple[frozenset, frozenset]]:
        combos = [(frozenset(), frozenset())]
        for opts in branch_opts:
            combos = [
                (acc_e | e2, acc_s | s2)
                for acc_e, acc_s in combos
                for e2, s2 in opts
            ]
        return combos

    for edges, smalls in _combine(branches(c, None)):
        if f.edges <= edges:
            shapes.append((edges, smalls))

    out = []
    base_slices = {e: f.links & inst.cover[e] for e in f.small_edges}
    for rp_edges, rp_small in sorted(shapes, key=lambda t: (tuple(sorted(t[0])), tuple(sorted(t[1])))):
        if (rp_small & f.edges) != f.small_edges:
            continue
        if not _structure_ok(inst, f.edges, c, rp_edges, rp_small, q_edges):
            continue
        for ev in all_events.get(rp_edges, []):
            if ev.small_edges != rp_small:
                continue
            if all(ev.links & inst.cover[e] == base_slices[e] for e in f.small_edges):
                out.append(ev)
    dedup = sorted(set(out), key=StrongEvent.sort_key)
    return dedup


def induced_event(
    inst: Instance, fp: StrongEvent, r_edges: frozenset[int]
) -> Optional[StrongEvent]:
    """The unique event on R that fp can extend, if it is a valid event."""
    r_small = r_edges & fp.small_edges
    if r_small - leaf_edges(inst, r_edges):
        return None
    links = set()
    for e in r_small:
        links |= fp.links & inst.cover[e]
    return StrongEvent(edges=r_edges, small_edges=r_small, links=frozenset(links))


def intended_solution(
    inst: Instance, lstar: Iterable[int], beta: int, rho: int
) -> StrongCandidate:
    """0/1 reference point induced by an integral solution."""
    lset = frozenset(lstar)
    if not core.is_feasible(inst, lset):
        raise InfeasibleLstar("reference link set does not cover the tree")
    subtrees = enumerate_subtrees(inst, beta)
    y: dict[StrongEvent, Fraction] = {}
    y_link: dict[tuple[StrongEvent, int], Fraction] = {}
    for r in subtrees:
        lf = leaf_edges(inst, r)
        small = frozenset(e for e in lf if len(lset & inst.cover[e]) <= rho)
        if any(len(lset & inst.cover[e]) <= rho for e in r - small):
            continue
        links = set()
        for e in small:
            links |= lset & inst.cover[e]
        ev = StrongEvent(edges=r, small_edges=small, links=frozenset(links))
        y[ev] = Fraction(1)
        relevant = set()
        for e in r:
            relevant |= inst.cover[e]
        for l in sorted(relevant & lset):
            y_link[(ev, l)] = Fraction(1)
    values = {
        rec.id: Fraction(1 if rec.id in lset else 0) for rec in inst.links
    }
    obj = inst.cost_of(lset)
    return StrongCandidate(
        x=FractionalSolution(values=values, objective_value=obj),
        y=y,
        y_link=y_link,
    )


def check_strong_feasibility(
    inst: Instance,
    candidate: StrongCandidate,
    beta: int,
    rho: int,
    separation_cap: int = 18,
) -> list[Violation]:
    """Exact evaluation of every constraint family; empty means feasible.

    Extension sums are accumulated by inverting the extension relation over
    the candidate's support, so sparse candidates are checked quickly.
    """
    violations: list[Violation] = []
    zero = Fraction(0)
    subtrees = enumerate_subtrees(inst, beta)
    subtree_set = set(subtrees)

    def viol(family: str, detail: str, deficit: Fraction) -> None:
        violations.append(Violation(family=family, detail=detail, deficit=deficit))

    # odd cuts on x
    n = inst.n_vertices
    if n <= separation_cap:
        others = [v for v in range(n) if v != 0]
        for mask in range(1 << len(others)):
            members = {0} | {others[i] for i in range(len(others)) if mask >> i & 1}
            cut_edges = [
                e
                for e in inst.real_edges()
                if (e in members) != (inst.parent[e] in members)
            ]
            if len(cut_edges) % 2 == 0:
                continue
            lhs = zero
            for e in cut_edges:
                lhs += sum((candidate.x(l) for l in inst.cover[e]), zero)
            for rec in inst.links:
                u, v = rec.endpoints
                if (u in members) != (v in members):
                    lhs += candidate.x(rec.id)
            rhs = Fraction(len(cut_edges) + 1)
            if lhs < rhs:
                viol("odd-cut", f"S={sorted(members)}", rhs - lhs)
    else:
        viol("odd-cut", "instance above separation cap; not checked", Fraction(1))

    support_y = {ev for ev, val in candidate.y.items() if val != 0}
    support_events = support_y | {ev for (ev, _) in candidate.y_link}

    # coverage per edge
    for e in inst.real_edges():
        total = sum(
            (val for ev, val in candidate.y.items() if ev.edges == frozenset({e})),
            zero,
        )
        if total != 1:
            viol("coverage", f"edge e_{e}", Fraction(1) - total)

    # marginal preservation
    for e in inst.real_edges():
        for l in sorted(inst.cover[e]):
            total = sum(
                (
                    val
                    for (ev, ll), val in candidate.y_link.items()
                    if ll == l and ev.edges == frozenset({e})
                ),
                zero,
            )
            if total != candidate.x(l):
                viol("marginal", f"edge e_{e}, link {l}", candidate.x(l) - total)

    # non-negativity
    for ev, val in candidate.y.items():
        if val < 0:
            viol("non-negativity", f"y{ev.sort_key()}", -val)
    for (ev, l), val in candidate.y_link.items():
        if val < 0:
            viol("non-negativity", f"y_link({l})", -val)

    # link consistency on small edges
    for ev in sorted(support_events, key=StrongEvent.sort_key):
        yv = candidate.y.get(ev, zero)
        for l in sorted(ev.links):
            if candidate.y_link.get((ev, l), zero) != yv:
                viol(
                    "link-consistency",
                    f"link {l} in small set of {ev.sort_key()}",
                    yv - candidate.y_link.get((ev, l), zero),
                )
        for e in sorted(ev.small_edges):
            for l in sorted(inst.cover[e] - ev.links):
                if candidate.y_link.get((ev, l), zero) != 0:
                    viol(
                        "link-exclusion",
                        f"link {l} outside small cover of edge e_{e}",
                        candidate.y_link.get((ev, l), zero),
                    )
        for e in sorted(ev.edges - ev.small_edges):
            total = sum(
                (candidate.y_link.get((ev, l), zero) for l in inst.cover[e]), zero
            )
            if total < rho * yv:
                viol("huge-edge", f"edge e_{e} of {ev.sort_key()}", rho * yv - total)

    # extension consistency, inverted over the support
    acc: dict[tuple[StrongEvent, frozenset[int]], Fraction] = {}
    acc_link: dict[tuple[StrongEvent, frozenset[int], int], Fraction] = {}
    sub_of: dict[frozenset[int], list[frozenset[int]]] = {}
    for q in subtrees:
        sub_of[q] = [r for r in subtrees if r <= q]
    for fp in sorted(support_events, key=StrongEvent.sort_key):
        for q in subtrees:
            if not fp.edges <= q:
                continue
            for r in sub_of[q]:
                if not r <= fp.edges:
                    continue
                f = induced_event(inst, fp, r)
                if f is None:
                    continue
                c = extension_center(inst, r, q)
                if not _structure_ok(inst, r, c, fp.edges, fp.small_edges, q):
                    continue
                key = (f, q)
                acc[key] = acc.get(key, zero) + candidate.y.get(fp, zero)
                relevant = set()
                for e in r:
                    relevant |= inst.cover[e]
                for l in relevant:
                    val = candidate.y_link.get((fp, l), zero)
                    if val != 0:
                        lk = (f, q, l)
                        acc_link[lk] = acc_link.get(lk, zero) + val

    checked = set()
    for (f, q), total in sorted(
        acc.items(), key=lambda kv: (kv[0][0].sort_key(), tuple(sorted(kv[0][1])))
    ):
        checked.add((f, q))
        if candidate.y.get(f, zero) != total:
            viol(
                "extension",
                f"event {f.sort_key()} on Q={sorted(q)}",
                candidate.y.get(f, zero) - total,
            )
    for f in sorted(support_y, key=StrongEvent.sort_key):
        for q in subtrees:
            if f.edges <= q and (f, q) not in checked:
                viol(
                    "extension",
                    f"event {f.sort_key()} on Q={sorted(q)} has no mass",
                    candidate.y.get(f, zero),
                )
    link_keys = set(acc_link)
    for (fp, l), val in candidate.y_link.items():
        if val != 0:
            for q in subtrees:
                if fp.edges <= q and fp.edges != q:
                    link_keys.add((fp, q, l))
    for f, q, l in sorted(
        link_keys, key=lambda k: (k[0].sort_key(), tuple(sorted(k[1])), k[2])
    ):
        if f.edges == q:
            continue  # the only extension is the event itself
        total = acc_link.get((f, q, l), zero)
        if candidate.y_link.get((f, l), zero) != total:
            viol(
                "extension-link",
                f"event {f.sort_key()}, link {l}, Q={sorted(q)}",
                candidate.y_link.get((f, l), zero) - total,
            )
    return violations


def build_strong_lp(
    inst: Instance,
    beta: int,
    rho: int,
    subtree_cap: int = SUBTREE_CAP,
    event_cap: int = EVENT_CAP,
):
    """LP with variables x, y, and the free y_l, plus all constraint rows
    except the lazily separated odd cuts.

    y_l variables are materialized only for links covering no small edge of
    their event: for links of the small cover y_l equals y, and for links
    covering a small edge outside its cover y_l is zero, so those columns
    are substituted away.
    """
    subtrees = enumerate_subtrees(inst, beta, cap=subtree_cap)
    events = enumerate_events(inst, subtrees, rho, cap=event_cap)

    names: list[str] = []
    objective: list[Fraction] = []
    bounds: list[tuple[Fraction, Optional[Fraction]]] = []
    x_var: dict[int, int] = {}
    for rec in inst.links:
        x_var[rec.id] = len(names)
        names.append(f"x{rec.id}")
        objective.append(rec.cost)
        bounds.append((Fraction(0), None))
    y_var: dict[StrongEvent, int] = {}
    for r in subtrees:
        for ev in events[r]:
            y_var[ev] = len(names)
            names.append(f"y{len(names)}")
            objective.append(Fraction(0))
            bounds.append((Fraction(0), None))

    def relevant_links(r: frozenset[int]) -> frozenset[int]:
        out: set[int] = set()
        for e in r:
            out |= inst.cover[e]
        return frozenset(out)

    free_var: dict[tuple[StrongEvent, int], int] = {}
    small_cover_links: dict[StrongEvent, frozenset[int]] = {}
    for r in subtrees:
        for ev in events[r]:
            covered_small = set()
            for e in ev.small_edges:
                covered_small |= inst.cover[e]
            small_cover_links[ev] = frozenset(covered_small)
            for l in sorted(relevant_links(r) - covered_small):
                free_var[(ev, l)] = len(names)
                names.append(f"w{len(names)}")
                objective.append(Fraction(0))
                bounds.append((Fraction(0), None))

    lp = LinearProgram(variables=names, objective=objective, bounds=bounds)
    one = Fraction(1)

    def y_link_terms(ev: StrongEvent, l: int) -> Optional[tuple[int, Fraction]]:
        """Column and sign for y_l(ev) after substitution; None means 0."""
        if l in ev.links:
            return (y_var[ev], one)
        if l in small_cover_links[ev]:
            return None
        return (free_var[(ev, l)], one)

    # coverage
    for e in inst.real_edges():
        singleton = frozenset({e})
        lp.add({y_var[ev]: one for ev in events[singleton]}, "=", Fraction(1))

    # marginal preservation
    for e in inst.real_edges():
        for l in sorted(inst.cover[e]):
            coeffs = {x_var[l]: one}
            for ev in events[frozenset({e})]:
                term = y_link_terms(ev, l)
                if term is not None:
                    var, sign = term
                    coeffs[var] = coeffs.get(var, Fraction(0)) - sign
            lp.add(coeffs, "=", Fraction(0))

    # huge edges demand rho units of link weight
    for r in subtrees:
        for ev in events[r]:
            for e in sorted(r - ev.small_edges):
                coeffs: dict[int, Fraction] = {y_var[ev]: -Fraction(rho)}
                for l in sorted(inst.cover[e]):
                    term = y_link_terms(ev, l)
                    if term is not None:
                        var, sign = term
                        coeffs[var] = coeffs.get(var, Fraction(0)) + sign
                lp.add(coeffs, ">=", Fraction(0))

    # extension consistency
    seen_rows: set = set()
    for r in subtrees:
        for q in subtrees:
            if not (r < q):
                continue
            for ev in events[r]:
                exts = ext_set(inst, ev, q, events, rho)
                coeffs = {y_var[ev]: -one}
                for fp in exts:
                    coeffs[y_var[fp]] = coeffs.get(y_var[fp], Fraction(0)) + one
                row_key = ("y", tuple(sorted(coeffs.items())))
                if row_key not in seen_rows:
                    seen_rows.add(row_key)
                    lp.add(coeffs, "=", Fraction(0))
                for l in sorted(relevant_links(r)):
                    lhs = y_link_terms(ev, l)
                    rhs_terms = [y_link_terms(fp, l) for fp in exts]
                    if lhs is not None and lhs[0] == y_var[ev] and all(
                        t is not None and t[0] == y_var[fp]
                        for t, fp in zip(rhs_terms, exts)
                    ):
                        continue  # duplicate of the y-row
                    coeffs2: dict[int, Fraction] = {}
                    if lhs is not None:
                        coeffs2[lhs[0]] = coeffs2.get(lhs[0], Fraction(0)) - lhs[1]
                    for t in rhs_terms:
                        if t is not None:
                            coeffs2[t[0]] = coeffs2.get(t[0], Fraction(0)) + t[1]
                    if not coeffs2:
                        continue
                    row_key = ("yl", tuple(sorted(coeffs2.items())))
                    if row_key not in seen_rows:
                        seen_rows.add(row_key)
                        lp.add(coeffs2, "=", Fraction(0))

    return lp, x_var


def solve_strong_lp(
    inst: Instance,
    beta: int,
    rho: int,
    subtree_cap: int = SUBTREE_CAP,
    event_cap: int = EVENT_CAP,
    separation_cap: int = 18,
) -> Fraction:
    """Optimal value of the relaxation, odd cuts added lazily."""
    lp, x_var = build_strong_lp(inst, beta, rho, subtree_cap, event_cap)
    seen: set[frozenset[int]] = set()
    while True:
        res = solve_lp(lp)
        values = {rec.id: res.point[x_var[rec.id]] for rec in inst.links}
        obj = sum((inst.links[l].cost * v for l, v in values.items()), Fraction(0))
        sol = FractionalSolution(values=values, objective_value=obj)
        violation = separate_odd_cut(inst, sol, cap=separation_cap)
        if violation is None:
            return obj
        if violation.vertex_set in seen:
            raise RuntimeError("separation returned a repeated odd cut")
        seen.add(violation.vertex_set)
        coeffs, rhs = _odd_cut_row(inst, violation.vertex_set)
        lp.add({x_var[l]: c for l, c in coeffs.items()}, ">=", rhs)
