"""Star-event LP over local covers, joint solving, and its rounding scheme.

The LP carries three groups of variables: per-link marginals x, per-event
probabilities y over stars (a star is a vertex's parent edge together with
its correlated child edges, plus at most two more incident edges), and a
second per-link vector z constrained by the odd-cut family.  Constraints
tie x to the event distributions, make the per-edge distributions proper,
force overlapping stars to agree, and dominate the cost of x by the cost
of z.  Solutions of this joint LP are exactly the structured fractional
tuples the rounding guarantees assume.

Rounding walks the tree from the root, sampling an event for each star
conditioned on the event of the parent edge; correlated links ride along
with the conditioning while each uncorrelated child edge is sampled
independently, so uncorrelated non-up links can enter the output twice
(once per leading edge).  The output is therefore a multiset of copies,
each tagged with the uncorrelated vertex it was sampled for.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import core, correlation
from .core import Instance
from .errors import (
    CombinatorialBlowup,
    EventExplosion,
    NoSmallCover,
    NotNested,
    ZeroMassBase,
)
from .lp import FractionalSolution, LinearProgram, separate_odd_cut, solve_lp

EVENT_CAP = 200_000


@dataclass(frozen=True)
class Star:
    center: int
    edges: frozenset[int]

    def sort_key(self) -> tuple:
        return (len(self.edges), tuple(sorted(self.edges)))


@dataclass(frozen=True)
class StructuredEvent:
    """Assertion that the links covering `edges` are exactly `links`."""

    edges: frozenset[int]
    links: frozenset[int]

    def sort_key(self) -> tuple:
        return (tuple(sorted(self.edges)), tuple(sorted(self.links)))


def select_vcor(inst: Instance, x0: FractionalSolution, delta: Fraction) -> frozenset[int]:
    """Vertices whose parent edge shares >= delta fractional mass with the
    grandparent edge.  Children of the root never qualify (their grandparent
    edge is the dummy edge, which no link covers)."""
    out = set()
    for v in inst.real_edges():
        u = inst.parent[v]
        if u == inst.root:
            continue
        shared = inst.cover[v] & inst.cover[u]
        if x0.mass(shared) >= delta:
            out.add(v)
    return frozenset(out)


def enumerate_stars(
    inst: Instance,
    v_cor: frozenset[int],
    rho_prime: Optional[int] = None,
    event_cap: Optional[int] = None,
    allowed: Optional[frozenset[int]] = None,
) -> list[Star]:
    """All singleton parent-edge stars plus E*(v) with at most two extra
    uncorrelated child edges, per vertex, deduplicated in canonical order.

    When ``rho_prime`` and ``event_cap`` are given, a cheap upper bound on
    each star's event count is checked and CombinatorialBlowup raised if a
    single star would exceed the cap.
    """
    stars: dict[frozenset[int], Star] = {}

    def put(center: int, edges: frozenset[int]) -> None:
        if edges not in stars:
            stars[edges] = Star(center=center, edges=edges)

    for v in range(inst.n_vertices):
        put(v, frozenset({v}))
        es = correlation.e_star(inst, v_cor, v)
        extras = correlation.uncorrelated_child_edges(inst, v_cor, v)
        put(v, es)
        for i, a in enumerate(extras):
            put(v, es | {a})
            for b in extras[i + 1 :]:
                put(v, es | {a, b})

    result = sorted(stars.values(), key=Star.sort_key)
    if rho_prime is not None and event_cap is not None:
        for star in result:
            bound = 1
            for e in star.edges:
                bound *= max(1, _cover_count(inst, e, rho_prime, allowed))
            if bound > event_cap:
                raise CombinatorialBlowup(
                    f"star {sorted(star.edges)} admits ~{bound} events (cap {event_cap})"
                )
    return result


def _cover_count(inst, e, rho_prime, allowed) -> int:
    if e == inst.root:
        return 1
    cand = inst.cover[e] if allowed is None else inst.cover[e] & allowed
    total = 0
    from math import comb

    for k in range(1, min(rho_prime, len(cand)) + 1):
        total += comb(len(cand), k)
    return total


def _edge_covers(
    inst: Instance, e: int, rho_prime: int, allowed: Optional[frozenset[int]]
) -> list[frozenset[int]]:
    """All link subsets covering edge e with size in [1, rho_prime].

    The dummy edge has exactly one cover: the empty set.
    """
    if e == inst.root:
        return [frozenset()]
    from itertools import combinations

    cand = sorted(inst.cover[e] if allowed is None else inst.cover[e] & allowed)
    out = []
    for k in range(1, min(rho_prime, len(cand)) + 1):
        out.extend(frozenset(c) for c in combinations(cand, k))
    return out


def events_for_star(
    inst: Instance,
    star: Star,
    rho_prime: int,
    allowed: Optional[frozenset[int]] = None,
    cap: int = EVENT_CAP,
) -> list[StructuredEvent]:
    """Consistent per-edge cover choices for a star, deduplicated.

    A choice (C_e)_{e in star} is consistent when the union S satisfies
    S ∩ L_e = C_e for every star edge, i.e. a link selected for one edge is
    selected for every star edge it covers.
    """
    edges = sorted(star.edges)
    per_edge = [_edge_covers(inst, e, rho_prime, allowed) for e in edges]
    results: set[frozenset[int]] = set()

    def extend(idx: int, chosen: list[frozenset[int]], union: frozenset[int]) -> None:
        if idx == len(edges):
            ok = True
            for e, c in zip(edges, chosen):
                pool = inst.cover.get(e, frozenset())
                if (union & pool) != c:
                    ok = False
                    break
            if ok:
                results.add(union)
                if len(results) > cap:
                    raise EventExplosion(
                        f"star {edges}: more than {cap} events"
                    )
            return
        e = edges[idx]
        pool = inst.cover.get(e, frozenset()) if e != inst.root else frozenset()
        for cover in per_edge[idx]:
            # links already selected that cover e must all be in this cover
            if (union & pool) - cover:
                continue
            # links in this cover that cover an earlier edge must match it
            ok = True
            for j in range(idx):
                ej = edges[j]
                pj = inst.cover.get(ej, frozenset()) if ej != inst.root else frozenset()
                if (cover & pj) - chosen[j]:
                    ok = False
                    break
            if not ok:
                continue
            extend(idx + 1, chosen + [cover], union | cover)

    extend(0, [], frozenset())
    return [
        StructuredEvent(edges=star.edges, links=s)
        for s in sorted(results, key=lambda s: tuple(sorted(s)))
    ]


@dataclass
class _StructuredIndex:
    """Shared bookkeeping between LP construction, solving, and rounding."""

    inst: Instance
    v_cor: frozenset[int]
    rho_prime: int
    allowed: frozenset[int]
    stars: list[Star]
    events: dict[frozenset[int], list[StructuredEvent]]
    x_var: dict[int, int]
    y_var: dict[StructuredEvent, int]
    z_var: dict[int, int]

    def link_pool(self, edges: frozenset[int]) -> frozenset[int]:
        pool: set[int] = set()
        for e in edges:
            if e != self.inst.root:
                pool |= self.inst.cover[e] & self.allowed
        return frozenset(pool)


def _nested_star_pairs(inst, v_cor, star_index) -> list[tuple[frozenset, frozenset]]:
    """Generating set of nested star pairs; the remaining pairs of the full
    family follow by transitivity of the agreement constraints."""
    pairs = []
    seen = set()

    def put(e1: frozenset[int], e2: frozenset[int]) -> None:
        if e1 != e2 and (e1, e2) not in seen and e1 in star_index and e2 in star_index:
            seen.add((e1, e2))
            pairs.append((e1, e2))

    for v in range(inst.n_vertices):
        es = correlation.e_star(inst, v_cor, v)
        extras = correlation.uncorrelated_child_edges(inst, v_cor, v)
        if len(es) >= 2:
            for e in sorted(es):
                put(frozenset({e}), es)
        for i, a in enumerate(extras):
            put(es, es | {a})
            put(frozenset({a}), es | {a})
            for b in extras[i + 1 :]:
                put(es | {a}, es | {a, b})
                put(es | {b}, es | {a, b})
    return pairs


def _build_structured(
    inst: Instance,
    v_cor: frozenset[int],
    rho_prime: int,
    event_cap: int,
) -> tuple[LinearProgram, _StructuredIndex]:
    if rho_prime < 1:
        raise NoSmallCover("rho_prime must be at least 1")
    banned = correlation.banned_links(inst, v_cor)
    allowed = frozenset(range(len(inst.links))) - banned
    for e in inst.real_edges():
        if not (inst.cover[e] & allowed):
            raise NoSmallCover(
                f"edge e_{e} has no admissible covering link"
            )

    stars = enumerate_stars(inst, v_cor)
    events: dict[frozenset[int], list[StructuredEvent]] = {}
    total = 0
    for star in stars:
        evs = events_for_star(inst, star, rho_prime, allowed, cap=event_cap)
        if not evs:
            raise NoSmallCover(
                f"star {sorted(star.edges)} admits no consistent small cover"
            )
        total += len(evs)
        if total > event_cap:
            raise EventExplosion(f"more than {event_cap} events in total")
        events[star.edges] = evs

    m = len(inst.links)
    names: list[str] = []
    bounds: list[tuple[Fraction, Optional[Fraction]]] = []
    objective: list[Fraction] = []

    x_var = {}
    for rec in inst.links:
        x_var[rec.id] = len(names)
        names.append(f"x{rec.id}")
        # x <= 1 is implied by the marginal and coverage rows
        bounds.append((Fraction(0), Fraction(0) if rec.id in banned else None))
        objective.append(Fraction(0))
    y_var = {}
    for star in stars:
        for ev in events[star.edges]:
            y_var[ev] = len(names)
            names.append(f"y{len(names)}")
            bounds.append((Fraction(0), None))
            objective.append(Fraction(0))
    z_var = {}
    for rec in inst.links:
        z_var[rec.id] = len(names)
        names.append(f"z{rec.id}")
        bounds.append((Fraction(0), Fraction(0) if rec.id in banned else Fraction(1)))
        objective.append(rec.cost)

    lp = LinearProgram(variables=names, objective=objective, bounds=bounds)
    index = _StructuredIndex(
        inst=inst,
        v_cor=v_cor,
        rho_prime=rho_prime,
        allowed=allowed,
        stars=stars,
        events=events,
        x_var=x_var,
        y_var=y_var,
        z_var=z_var,
    )

    one = Fraction(1)

    # marginal preservation: x(l) equals the event mass using l at each edge
    for e in inst.real_edges():
        singleton = frozenset({e})
        for l in sorted(inst.cover[e] & allowed):
            coeffs = {x_var[l]: one}
            for ev in events[singleton]:
                if l in ev.links:
                    coeffs[y_var[ev]] = coeffs.get(y_var[ev], Fraction(0)) - one
            lp.add(coeffs, "=", Fraction(0))

    # coverage: each edge's event distribution is proper (dummy included)
    for star_edges in [frozenset({e}) for e in range(inst.n_vertices)]:
        if star_edges in events:
            lp.add({y_var[ev]: one for ev in events[star_edges]}, "=", Fraction(1))

    # agreement between nested stars
    star_index = {s.edges: s for s in stars}
    for e1, e2 in _nested_star_pairs(inst, v_cor, star_index):
        pool1 = index.link_pool(e1)
        for base in events[e1]:
            coeffs = {y_var[base]: -one}
            for ev in events[e2]:
                if (ev.links & pool1) == base.links:
                    coeffs[y_var[ev]] = coeffs.get(y_var[ev], Fraction(0)) + one
            lp.add(coeffs, "=", Fraction(0))

    # cost domination: c(x(L)) <= c(z(L)) and c(x(L_U \ L_UP)) <= c(z(L_U))
    l_cor = correlation.correlated_links(inst, v_cor)
    l_up = correlation.uplinks(inst)
    coeffs = {}
    for rec in inst.links:
        if rec.cost:
            coeffs[x_var[rec.id]] = rec.cost
            coeffs[z_var[rec.id]] = -rec.cost
    lp.add(coeffs, "<=", Fraction(0))
    coeffs = {}
    for rec in inst.links:
        if rec.id in l_cor or not rec.cost:
            continue
        if rec.id not in l_up:
            coeffs[x_var[rec.id]] = rec.cost
        coeffs[z_var[rec.id]] = -rec.cost
    lp.add(coeffs, "<=", Fraction(0))

    # seed z with the per-edge coverage rows the odd-cut family implies
    for e in inst.real_edges():
        lp.add({z_var[l]: one for l in sorted(inst.cover[e] & allowed)}, ">=", Fraction(1))

    return lp, index


def build_structured_lp(
    inst: Instance,
    v_cor: frozenset[int],
    rho_prime: int,
    event_cap: int = EVENT_CAP,
) -> LinearProgram:
    lp, _ = _build_structured(inst, v_cor, rho_prime, event_cap)
    return lp


@dataclass
class StructuredSolution:
    """Tuple (x, y, z) plus its correlated node set and smallness bound."""

    inst: Instance
    x: FractionalSolution
    y: dict[StructuredEvent, Fraction]
    z: FractionalSolution
    v_cor: frozenset[int]
    rho_prime: int
    _index: Optional[_StructuredIndex] = field(default=None, repr=False)
    _buckets: dict = field(default_factory=dict, repr=False)
    _estar: dict = field(default_factory=dict, repr=False)

    def events_on(self, edges: frozenset[int]) -> list[StructuredEvent]:
        if self._index is not None:
            return self._index.events.get(edges, [])
        found = [ev for ev in self.y if ev.edges == edges]
        return sorted(found, key=StructuredEvent.sort_key)

    def link_pool(self, edges: frozenset[int]) -> frozenset[int]:
        pool: set[int] = set()
        for e in edges:
            if e != self.inst.root:
                pool |= self.inst.cover[e]
        return frozenset(pool)

    def e_star(self, v: int) -> frozenset[int]:
        if v not in self._estar:
            self._estar[v] = correlation.e_star(self.inst, self.v_cor, v)
        return self._estar[v]

    def bucket(
        self, target_edges: frozenset[int], base_edges: frozenset[int], key: frozenset[int]
    ) -> list[tuple[StructuredEvent, Fraction]]:
        """Events on the target star agreeing with ``key`` on the base star's
        link pool, with their y values; empty-mass events included."""
        tab_key = (target_edges, base_edges)
        tab = self._buckets.get(tab_key)
        if tab is None:
            pool = self.link_pool(base_edges)
            tab = {}
            for ev in self.events_on(target_edges):
                k = ev.links & pool
                tab.setdefault(k, []).append((ev, self.y.get(ev, Fraction(0))))
            self._buckets[tab_key] = tab
        return tab.get(key, [])

    def serialize(self) -> str:
        """Canonical text dump for golden tests."""
        lines = [f"vcor {' '.join(map(str, sorted(self.v_cor)))}".rstrip()]
        lines.append(f"rho_prime {self.rho_prime}")
        for ev in sorted(self.y, key=StructuredEvent.sort_key):
            val = self.y[ev]
            if val == 0:
                continue
            e_s = ",".join(map(str, sorted(ev.edges)))
            l_s = ",".join(map(str, sorted(ev.links)))
            lines.append(f"y [{e_s}] [{l_s}] {val}")
        for name, sol in (("x", self.x), ("z", self.z)):
            for l in sorted(sol.values):
                if sol.values[l] != 0:
                    lines.append(f"{name} {l} {sol.values[l]}")
        return "\n".join(lines) + "\n"


def solve_structured(
    inst: Instance,
    v_cor: frozenset[int],
    rho_prime: Optional[int] = None,
    event_cap: int = EVENT_CAP,
    separation_cap: int = 18,
) -> StructuredSolution:
    """Minimize c(z(L)) over the joint LP, adding odd-cut rows lazily."""
    if rho_prime is None:
        rho_prime = max(
            (len(inst.cover[e]) for e in inst.real_edges()), default=1
        )
    lp, index = _build_structured(inst, v_cor, rho_prime, event_cap)
    from .lp import _odd_cut_row  # row builder shared with the plain odd-cut solve

    seen: set[frozenset[int]] = set()
    while True:
        res = solve_lp(lp)
        z_values = {rec.id: res.point[index.z_var[rec.id]] for rec in inst.links}
        z_obj = sum((inst.links[l].cost * v for l, v in z_values.items()), Fraction(0))
        z_sol = FractionalSolution(values=z_values, objective_value=z_obj)
        violation = separate_odd_cut(inst, z_sol, cap=separation_cap)
        if violation is None:
            break
        if violation.vertex_set in seen:
            raise RuntimeError("separation returned a repeated odd cut")
        seen.add(violation.vertex_set)
        coeffs, rhs = _odd_cut_row(inst, violation.vertex_set)
        lp.add({index.z_var[l]: c for l, c in coeffs.items()}, ">=", rhs)

    x_values = {rec.id: res.point[index.x_var[rec.id]] for rec in inst.links}
    x_obj = sum((inst.links[l].cost * v for l, v in x_values.items()), Fraction(0))
    y = {}
    for evs in index.events.values():
        for ev in evs:
            y[ev] = res.point[index.y_var[ev]]
    return StructuredSolution(
        inst=inst,
        x=FractionalSolution(values=x_values, objective_value=x_obj),
        y=y,
        z=z_sol,
        v_cor=v_cor,
        rho_prime=rho_prime,
        _index=index,
    )


def conditional_sample(
    sol: StructuredSolution,
    base_event: StructuredEvent,
    target_star: Star,
    rng: random.Random,
) -> StructuredEvent:
    """Draw an event on the target star conditioned on the base event,
    with probability y(E2) / y(E1)."""
    if not base_event.edges <= target_star.edges:
        raise NotNested("base event edges must be a subset of the target star")
    y_base = sol.y.get(base_event, Fraction(0))
    if y_base == 0:
        raise ZeroMassBase(f"conditioning on zero-mass event {base_event}")
    bucket = sol.bucket(target_star.edges, base_event.edges, base_event.links)
    u = Fraction(rng.random()) * y_base
    acc = Fraction(0)
    chosen = None
    for ev, mass in sorted(bucket, key=lambda t: t[0].sort_key()):
        if mass == 0:
            continue
        acc += mass
        if u < acc:
            chosen = ev
            break
    if chosen is None:
        # guard against float edge effects at u == y_base
        chosen = max(
            (t for t in bucket if t[1] > 0), key=lambda t: t[0].sort_key()
        )[0]
    return chosen


@dataclass(frozen=True)
class Copy:
    """One sampled copy of a link; owner is the uncorrelated vertex whose
    edge sample produced it (None for copies fixed by correlated events)."""

    link: int
    owner: Optional[int]


@dataclass
class RoundingTrace:
    sol: StructuredSolution
    calls: dict[int, frozenset[int]] = field(default_factory=dict)
    line6_event: dict[int, StructuredEvent] = field(default_factory=dict)
    child_event: dict[int, StructuredEvent] = field(default_factory=dict)
    owned: dict[int, tuple[int, ...]] = field(default_factory=dict)


def structured_rounding(
    sol: StructuredSolution, rng: random.Random
) -> tuple[list[Copy], RoundingTrace]:
    """Top-down event sampling; returns the multiset of copies and a trace.

    Every vertex gets its own RNG stream derived from (run seed, vertex), so
    the independent sampling across uncorrelated children is reproducible.
    """
    inst = sol.inst
    run_seed = rng.getrandbits(64)
    streams = {
        v: random.Random(f"{run_seed}:{v}") for v in range(inst.n_vertices)
    }
    trace = RoundingTrace(sol=sol)
    out: list[Copy] = []

    def visit(v: int, incoming: frozenset[int]) -> None:
        # a nonempty incoming set per non-root vertex is exactly coverage
        # of its parent edge, so every run yields a feasible output
        assert incoming or v == inst.root, f"edge e_{v} left uncovered"
        trace.calls[v] = incoming
        base = StructuredEvent(edges=frozenset({v}), links=incoming)
        es = sol.e_star(v)
        stream = streams[v]
        if es != frozenset({v}):
            ev = conditional_sample(sol, base, Star(center=v, edges=es), stream)
            for l in sorted(ev.links - incoming):
                out.append(Copy(link=l, owner=None))
            current = ev
        else:
            current = base
        trace.line6_event[v] = current

        child_cover: dict[int, frozenset[int]] = {}
        for e in correlation.uncorrelated_child_edges(inst, sol.v_cor, v):
            target = Star(center=v, edges=es | {e})
            ev_e = conditional_sample(sol, current, target, stream)
            trace.child_event[e] = ev_e
            new_links = tuple(
                sorted((ev_e.links & inst.cover[e]) - current.links)
            )
            trace.owned[e] = new_links
            for l in new_links:
                out.append(Copy(link=l, owner=e))
            child_cover[e] = ev_e.links & inst.cover[e]
        for c in inst.children[v]:
            if c in sol.v_cor:
                child_cover[c] = current.links & inst.cover[c]

        for c in inst.children[v]:
            visit(c, child_cover[c])

    visit(inst.root, frozenset())
    return out, trace


def multiset_cost(inst: Instance, copies: Iterable[Copy]) -> Fraction:
    return sum((inst.links[c.link].cost for c in copies), Fraction(0))


def copies_to_set(copies: Iterable[Copy]) -> frozenset[int]:
    return frozenset(c.link for c in copies)
