"""Post-rounding cleanup and the combined randomized drivers.

After the tree rounding runs, each uncorrelated vertex flips a fair coin;
copies sampled for protected vertices are immune.  For an unprotected
vertex v_i the edges of its subtree Z_i+ that other children's samples are
likely to cover (probability at least gamma under the recorded
conditioning event) form an ancestor-closed core A_i; copies whose segment
inside Z_i+ lies in that core and is actually covered by protected links
are redundant and get removed.  The remaining subtrees of Z_i+ below the
core can, when their attachment edge is covered by protected links, be
re-covered by the cheapest local up-link solution whenever that is
strictly cheaper than the copies it replaces.

All probabilities are computed exactly from the event weights; nothing is
estimated.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import core, correlation
from .core import Instance, LinkClass
from .errors import GammaOutOfRange, NotApplicable, NotAncestorClosed
from .exact import ExactSolution, add_q
from .structured import (
    Copy,
    RoundingTrace,
    StructuredEvent,
    StructuredSolution,
    copies_to_set,
    multiset_cost,
    structured_rounding,
)

GAMMA_DEFAULT = Fraction(3, 20)
P_DEFAULT = Fraction(25, 53)


@dataclass(frozen=True)
class ProtectionState:
    protected_indices: frozenset[int]
    protected_links: tuple[Copy, ...]

    @classmethod
    def draw(
        cls, sol: StructuredSolution, copies: Sequence[Copy], rng: random.Random
    ) -> "ProtectionState":
        order = correlation.uncorrelated_vertices(sol.inst, sol.v_cor)
        protected = frozenset(v for v in order if rng.random() < 0.5)
        prot_copies = tuple(c for c in copies if c.owner in protected)
        return cls(protected_indices=protected, protected_links=prot_copies)

    def covered_by_protected(self, inst: Instance, edge: int) -> bool:
        return any(edge in inst.link_path[c.link] for c in self.protected_links)


@dataclass
class CleanupContext:
    """Per-parent-vertex inputs to the cleanup pass."""

    vertex: int
    event: StructuredEvent
    uncorrelated_children: tuple[int, ...]
    Z: dict[int, frozenset[int]]
    A: dict[int, frozenset[int]]
    Q: dict[int, tuple[tuple[int, frozenset[int]], ...]]
    gamma: Fraction


def compute_Ai(
    sol: StructuredSolution,
    v: int,
    child: int,
    event: StructuredEvent,
    gamma: Fraction,
) -> frozenset[int]:
    """Core of Z_i+: edges covered by the conditioning event itself, plus
    edges whose exact probability of being covered by a sibling's sample
    (conditioned on the event, independence across siblings) reaches gamma.
    """
    if not (0 < gamma <= Fraction(3, 4)):
        raise GammaOutOfRange(f"gamma={gamma} outside (0, 3/4]")
    inst = sol.inst
    z_plus = correlation.z_plus(inst, sol.v_cor, child)
    event_paths = set()
    for l in event.links:
        event_paths.update(inst.link_path[l])

    y_base = sol.y.get(event, Fraction(0))
    siblings = [
        j
        for j in correlation.uncorrelated_child_edges(inst, sol.v_cor, v)
        if j != child
    ]
    es = sol.e_star(v)

    out = set()
    for e in sorted(z_plus):
        if e in event_paths:
            out.add(e)
            continue
        if y_base == 0:
            continue
        miss = Fraction(1)
        for j in siblings:
            bucket = sol.bucket(es | {j}, es, event.links)
            hit = Fraction(0)
            for ev_j, mass in bucket:
                if mass == 0:
                    continue
                if any(
                    e in inst.link_path[l] for l in ev_j.links - event.links
                ):
                    hit += mass
            miss *= Fraction(1) - hit / y_base
        if Fraction(1) - miss >= gamma:
            out.add(e)

    result = frozenset(out)
    for e in result:
        parent_edge = inst.parent[e]
        if parent_edge in z_plus and parent_edge not in result:
            raise AssertionError("A_i is not ancestor-closed inside Z_i+")
    return result


def compute_Qi(
    inst: Instance, zi_plus: frozenset[int], ai: frozenset[int]
) -> tuple[tuple[int, frozenset[int]], ...]:
    """Maximal subtrees of Z_i+ minus the core, each keyed by its unique
    highest edge.  Subtrees sharing a top vertex but entered through
    different edges stay distinct."""
    for e in ai:
        parent_edge = inst.parent[e]
        if parent_edge in zi_plus and parent_edge not in ai:
            raise NotAncestorClosed(f"edge e_{e} in core, its parent edge not")
    rest = zi_plus - ai
    roots = sorted(
        e for e in rest if inst.parent[e] not in rest
    )
    out = []
    for r in roots:
        edges = {r}
        stack = [r]
        while stack:
            x = stack.pop()
            for c in inst.children[x]:
                if c in rest:
                    edges.add(c)
                    stack.append(c)
        out.append((r, frozenset(edges)))
    return tuple(out)


def build_context(
    sol: StructuredSolution, v: int, gamma: Fraction, trace: RoundingTrace
) -> CleanupContext:
    inst = sol.inst
    event = trace.line6_event[v]
    uncors = correlation.uncorrelated_child_edges(inst, sol.v_cor, v)
    Z = {}
    A = {}
    Q = {}
    for c in uncors:
        Z[c] = correlation.z_plus(inst, sol.v_cor, c)
        A[c] = compute_Ai(sol, v, c, event, gamma)
        Q[c] = compute_Qi(inst, Z[c], A[c])
    return CleanupContext(
        vertex=v,
        event=event,
        uncorrelated_children=uncors,
        Z=Z,
        A=A,
        Q=Q,
        gamma=gamma,
    )


def _q_active(
    inst: Instance, root_edge: int, prot: ProtectionState
) -> bool:
    r = inst.parent[root_edge]
    if r == inst.root:
        return False  # the dummy edge is covered by nothing
    return prot.covered_by_protected(inst, r)


def is_dominated(
    copy: Copy, ctx: CleanupContext, prot: ProtectionState, inst: Instance,
    l_cor: frozenset[int], l_up: frozenset[int],
) -> bool:
    """Two-case redundancy test for an uncorrelated non-up copy."""
    i = copy.owner
    if i is None or i not in ctx.uncorrelated_children:
        raise NotApplicable("copy was not sampled for a child of this vertex")
    if copy.link in l_up or copy.link in l_cor:
        raise NotApplicable("domination applies to uncorrelated non-up copies")
    path = set(inst.link_path[copy.link])
    seg = path & ctx.Z[i]
    if i in prot.protected_indices:
        return False
    if seg <= ctx.A[i]:
        return all(prot.covered_by_protected(inst, e) for e in sorted(seg))
    touched = [
        (root_edge, edges)
        for root_edge, edges in ctx.Q[i]
        if path & edges
    ]
    assert len(touched) == 1, "copy segment meets several residual subtrees"
    return _q_active(inst, touched[0][0], prot)


def _allowed_uplinks(
    inst: Instance, zi_plus: frozenset[int], l_up: frozenset[int]
) -> frozenset[int]:
    out = set()
    for l in l_up:
        info = core.classify_link(inst, l)
        if all(e in zi_plus for e in info.leading_edges):
            out.add(l)
    return frozenset(out)


def cleanup(
    output: Sequence[Copy],
    prot: ProtectionState,
    trace: RoundingTrace,
    gamma: Fraction = GAMMA_DEFAULT,
    _ctx_cache: Optional[dict] = None,
) -> list[Copy]:
    """Remove dominated copies and swap in cheap local up-link covers.

    Processing order over unprotected vertices is BFS from the root; the
    per-vertex removals and additions are disjoint, so the order has no
    effect on the result.
    """
    sol = trace.sol
    inst = sol.inst
    l_cor = correlation.correlated_links(inst, sol.v_cor)
    l_up = correlation.uplinks(inst)
    out = list(output)

    for v_i in correlation.uncorrelated_vertices(inst, sol.v_cor):
        if v_i in prot.protected_indices:
            continue
        v = inst.parent[v_i]
        key = (v, trace.line6_event[v], gamma)
        if _ctx_cache is not None and key in _ctx_cache:
            ctx = _ctx_cache[key]
        else:
            ctx = build_context(sol, v, gamma, trace)
            if _ctx_cache is not None:
                _ctx_cache[key] = ctx

        # remove dominated copies whose segment lies inside the core
        survivors = []
        for c in out:
            if (
                c.owner == v_i
                and c.link not in l_up
                and c.link not in l_cor
                and (set(inst.link_path[c.link]) & ctx.Z[v_i]) <= ctx.A[v_i]
                and is_dominated(c, ctx, prot, inst, l_cor, l_up)
            ):
                continue
            survivors.append(c)
        out = survivors

        # swap copies meeting an active residual subtree for ADD(Q)
        for root_edge, q_edges in ctx.Q[v_i]:
            if not _q_active(inst, root_edge, prot):
                continue
            doomed = [
                c
                for c in out
                if c.owner == v_i and set(inst.link_path[c.link]) & q_edges
            ]
            if not doomed:
                continue
            allowed = _allowed_uplinks(inst, ctx.Z[v_i], l_up)
            replacement = add_q(inst, q_edges, allowed)
            removed_cost = multiset_cost(inst, doomed)
            if replacement.cost < removed_cost:
                doomed_ids = {id(c) for c in doomed}
                out = [c for c in out if id(c) not in doomed_ids]
                out.extend(Copy(link=l, owner=None) for l in sorted(replacement.links))
    assert multiset_cost(inst, out) <= multiset_cost(inst, output), (
        "cleanup increased the multiset cost"
    )
    return out


@dataclass(frozen=True)
class RunResult:
    solution: ExactSolution
    multiset_cost: Fraction
    branch: str
    pre_cleanup_cost: Optional[Fraction] = None


def _round_and_clean(
    inst: Instance,
    sol: StructuredSolution,
    gamma: Optional[Fraction],
    rng: random.Random,
    ctx_cache: Optional[dict] = None,
) -> RunResult:
    copies, trace = structured_rounding(sol, rng)
    pre_cost = multiset_cost(inst, copies)
    if gamma is None:
        links = copies_to_set(copies)
        return RunResult(
            solution=ExactSolution(cost=inst.cost_of(links), links=links),
            multiset_cost=pre_cost,
            branch="structured",
        )
    prot = ProtectionState.draw(sol, copies, rng)
    cleaned = cleanup(copies, prot, trace, gamma, _ctx_cache=ctx_cache)
    links = copies_to_set(cleaned)
    return RunResult(
        solution=ExactSolution(cost=inst.cost_of(links), links=links),
        multiset_cost=multiset_cost(inst, cleaned),
        branch="structured+cleanup",
        pre_cleanup_cost=pre_cost,
    )


def run_15_detailed(
    inst: Instance,
    sol: StructuredSolution,
    rng: random.Random,
    oddcut_result: Optional[ExactSolution] = None,
) -> RunResult:
    from .classic_round import odd_cut_rounding

    if Fraction(rng.random()) < Fraction(1, 2):
        # the odd-cut branch is deterministic in (z, v_cor); callers looping
        # over many runs may precompute it once
        solution = oddcut_result or odd_cut_rounding(inst, sol.z, sol.v_cor)
        return RunResult(
            solution=solution, multiset_cost=solution.cost, branch="oddcut"
        )
    return _round_and_clean(inst, sol, None, rng)


def run_15(inst: Instance, sol: StructuredSolution, rng: random.Random) -> ExactSolution:
    """Fair mix of the odd-cut rounding and the tree rounding; the expected
    cost is at most 1.5 c(z(L))."""
    return run_15_detailed(inst, sol, rng).solution


def run_149_detailed(
    inst: Instance,
    sol: StructuredSolution,
    rng: random.Random,
    gamma: Fraction = GAMMA_DEFAULT,
    p: Fraction = P_DEFAULT,
    ctx_cache: Optional[dict] = None,
    oddcut_result: Optional[ExactSolution] = None,
) -> RunResult:
    from .classic_round import odd_cut_rounding

    if not (0 < gamma <= Fraction(3, 4)):
        raise GammaOutOfRange(f"gamma={gamma} outside (0, 3/4]")
    if Fraction(rng.random()) < p:
        solution = oddcut_result or odd_cut_rounding(inst, sol.z, sol.v_cor)
        return RunResult(
            solution=solution, multiset_cost=solution.cost, branch="oddcut"
        )
    return _round_and_clean(inst, sol, gamma, rng, ctx_cache)


def run_149(
    inst: Instance,
    sol: StructuredSolution,
    rng: random.Random,
    gamma: Fraction = GAMMA_DEFAULT,
    p: Fraction = P_DEFAULT,
) -> ExactSolution:
    """Odd-cut rounding with probability p, else rounding plus cleanup; the
    expected cost is at most (789/530) c(z(L)) at the default parameters."""
    return run_149_detailed(inst, sol, rng, gamma, p).solution
