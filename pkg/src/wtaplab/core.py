"""Instance model for weighted tree augmentation.

A rooted tree plus a set of weighted links.  Every tree edge is identified
by its child vertex (the edge ``e_v = {parent(v), v}``), so edge ids are
just vertex ids.  The root carries a dummy parent edge ``e_r`` that no link
covers; it exists purely so the root needs no special-casing downstream.

All costs are exact rationals (``fractions.Fraction``); no solver path in
this package touches floating point.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .errors import (
    CycleDetected,
    DisconnectedTree,
    DuplicateLink,
    NegativeCost,
    NotSplittable,
    SelfLoopLink,
    UnknownEdge,
    UnknownLink,
)


class LinkClass(enum.Enum):
    UP = "up"
    CROSS = "cross"
    IN = "in"


@dataclass(frozen=True)
class LinkRecord:
    """A candidate augmentation edge.

    ``origin`` is the id of the link this one shadows (its own id if it is
    not a shadow).  Endpoints are stored sorted.
    """

    id: int
    endpoints: tuple[int, int]
    cost: Fraction
    origin: Optional[int] = None

    def __post_init__(self):
        u, v = self.endpoints
        if u > v:
            object.__setattr__(self, "endpoints", (v, u))


@dataclass(frozen=True)
class LinkInfo:
    """Classification of a link: apex, class, leading edges, covered path."""

    apex: int
    cls: LinkClass
    leading_edges: frozenset[int]
    path: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class Instance:
    """Immutable rooted tree plus links.

    Derived tables (depth, children, per-edge cover sets, per-link paths)
    are precomputed at construction and shared read-only; all operations on
    an Instance are pure functions.
    """

    n_vertices: int
    root: int
    parent: tuple[int, ...]          # parent[root] == -1
    links: tuple[LinkRecord, ...]
    depth: tuple[int, ...] = field(repr=False)
    children: tuple[tuple[int, ...], ...] = field(repr=False)
    link_path: tuple[tuple[int, ...], ...] = field(repr=False)
    cover: Mapping[int, frozenset[int]] = field(repr=False)

    @property
    def dummy_root_edge(self) -> int:
        return self.root

    @property
    def costs(self) -> dict[int, Fraction]:
        return {rec.id: rec.cost for rec in self.links}

    def real_edges(self) -> list[int]:
        """All real tree edges, as child-vertex ids, in increasing order."""
        return [v for v in range(self.n_vertices) if v != self.root]

    def cost_of(self, link_ids: Iterable[int]) -> Fraction:
        return sum((self.links[i].cost for i in link_ids), Fraction(0))

    def is_ancestor(self, a: int, v: int) -> bool:
        """True iff ``a`` is an ancestor of ``v`` (or equal)."""
        while self.depth[v] > self.depth[a]:
            v = self.parent[v]
        return v == a

    def lca(self, u: int, v: int) -> int:
        while self.depth[u] > self.depth[v]:
            u = self.parent[u]
        while self.depth[v] > self.depth[u]:
            v = self.parent[v]
        while u != v:
            u = self.parent[u]
            v = self.parent[v]
        return u

    def path_between(self, u: int, v: int) -> tuple[int, ...]:
        """Edge ids of the unique tree path between two vertices.

        Ordered from ``min(u, v)`` up to the apex and back down.
        """
        a, b = min(u, v), max(u, v)
        apex = self.lca(a, b)
        side_a = []
        x = a
        while x != apex:
            side_a.append(x)
            x = self.parent[x]
        side_b = []
        x = b
        while x != apex:
            side_b.append(x)
            x = self.parent[x]
        return tuple(side_a + side_b[::-1])

    def equals_structure(self, other: "Instance") -> bool:
        """Structural equality: tree shape plus link endpoint/cost multiset.

        Ignores link ids and shadow provenance, which serialization does not
        preserve.
        """
        if (self.n_vertices, self.root, self.parent) != (
            other.n_vertices,
            other.root,
            other.parent,
        ):
            return False
        mine = sorted((r.endpoints, r.cost) for r in self.links)
        theirs = sorted((r.endpoints, r.cost) for r in other.links)
        return mine == theirs


def build_instance(
    n: int,
    parent_list: Sequence[tuple[int, int]],
    links: Sequence[tuple[tuple[int, int], Fraction | int | str]],
) -> Instance:
    """Validate raw input and precompute ancestry and coverage tables.

    ``parent_list`` holds (parent, child) pairs; ``links`` holds
    ((u, v), cost) pairs.  Link metadata (apex/class/leading edges) is not
    classified here; see :func:`classify_link`.
    """
    if n < 1:
        raise DisconnectedTree("instance needs at least one vertex")
    parent = [-1] * n
    seen_children = set()
    for p, c in parent_list:
        if not (0 <= p < n and 0 <= c < n):
            raise DisconnectedTree(f"edge ({p},{c}) references unknown vertex")
        if c in seen_children:
            raise CycleDetected(f"vertex {c} has two parent edges")
        seen_children.add(c)
        parent[c] = p
    roots = [v for v in range(n) if parent[v] == -1]
    if len(parent_list) != n - 1 or not roots:
        # with n-1 edges and no root something is circular, otherwise a
        # vertex is simply missing
        if len(parent_list) >= n:
            raise CycleDetected("too many tree edges")
        raise DisconnectedTree("tree needs exactly n-1 edges")
    if len(roots) > 1:
        raise DisconnectedTree(f"multiple parentless vertices: {roots}")
    root = roots[0]

    # depth via walk-up; a walk longer than n edges means a parent cycle
    depth = [-1] * n
    depth[root] = 0
    for v in range(n):
        chain = []
        x = v
        while depth[x] == -1:
            chain.append(x)
            x = parent[x]
            if len(chain) > n:
                raise CycleDetected("parent relation contains a cycle")
        d = depth[x]
        for u in reversed(chain):
            d += 1
            depth[u] = d

    children: list[list[int]] = [[] for _ in range(n)]
    for v in range(n):
        if v != root:
            children[parent[v]].append(v)

    records = []
    seen_pairs = set()
    for idx, (ends, cost) in enumerate(links):
        u, v = ends
        if u == v:
            raise SelfLoopLink(f"link {idx} joins {u} to itself")
        if not (0 <= u < n and 0 <= v < n):
            raise UnknownLink(f"link {idx} references unknown vertex")
        cost = Fraction(cost)
        if cost < 0:
            raise NegativeCost(f"link {idx} has cost {cost}")
        pair = (min(u, v), max(u, v))
        if pair in seen_pairs:
            raise DuplicateLink(f"two links between {pair[0]} and {pair[1]}")
        seen_pairs.add(pair)
        records.append(LinkRecord(id=idx, endpoints=pair, cost=cost, origin=idx))

    inst = Instance(
        n_vertices=n,
        root=root,
        parent=tuple(parent),
        links=tuple(records),
        depth=tuple(depth),
        children=tuple(tuple(c) for c in children),
        link_path=(),
        cover={},
    )
    # paths and per-edge cover sets need the ancestry tables above
    paths = tuple(inst.path_between(*rec.endpoints) for rec in records)
    cover: dict[int, set[int]] = {v: set() for v in range(n)}
    for rec, path in zip(records, paths):
        for e in path:
            cover[e].add(rec.id)
    object.__setattr__(inst, "link_path", paths)
    object.__setattr__(
        inst, "cover", {e: frozenset(s) for e, s in cover.items()}
    )
    return inst


def classify_link(inst: Instance, link: int) -> LinkInfo:
    """Apex (LCA of the endpoints), class, leading edges and path of a link."""
    if not (0 <= link < len(inst.links)):
        raise UnknownLink(f"no link with id {link}")
    u, v = inst.links[link].endpoints
    apex = inst.lca(u, v)
    path = inst.link_path[link]
    leading = set()
    for endpoint in (u, v):
        if endpoint == apex:
            continue
        x = endpoint
        while inst.parent[x] != apex:
            x = inst.parent[x]
        leading.add(x)
    if apex in (u, v):
        cls = LinkClass.UP
    elif apex == inst.root:
        cls = LinkClass.CROSS
    else:
        cls = LinkClass.IN
    return LinkInfo(apex=apex, cls=cls, leading_edges=frozenset(leading), path=path)


def shadow_complete(inst: Instance) -> Instance:
    """Add every shadow of every link, keeping the cheapest per endpoint pair.

    A shadow of a link covers a contiguous subpath of its path and inherits
    its cost.  Ties between equal-cost candidates for the same endpoint pair
    break toward the smallest source link id, so completion is deterministic
    and idempotent.
    """
    # best candidate per endpoint pair: (cost, source link id)
    best: dict[tuple[int, int], tuple[Fraction, int]] = {}
    for rec in inst.links:
        cand = (rec.cost, rec.id)
        if rec.endpoints not in best or cand < best[rec.endpoints]:
            best[rec.endpoints] = cand
    for rec in inst.links:
        u, v = rec.endpoints
        apex = inst.lca(u, v)
        side_u = _vertices_to_apex(inst, u, apex)     # [u, ..., apex]
        side_v = _vertices_to_apex(inst, v, apex)     # [v, ..., apex]
        path_vertices = side_u + side_v[-2::-1]       # apex listed once
        # all ordered pairs of distinct vertices on the path
        k = len(path_vertices)
        for i in range(k):
            for j in range(i + 1, k):
                pair = (
                    min(path_vertices[i], path_vertices[j]),
                    max(path_vertices[i], path_vertices[j]),
                )
                cand = (rec.cost, rec.id)
                if pair not in best or cand < best[pair]:
                    best[pair] = cand

    old_pair_of = {rec.id: rec.endpoints for rec in inst.links}
    pairs = sorted(best)
    new_id_of_pair = {pair: i for i, pair in enumerate(pairs)}
    new_links = []
    for pair in pairs:
        cost, source = best[pair]
        origin_pair = old_pair_of[source]
        new_links.append((pair, cost, new_id_of_pair[origin_pair]))

    rebuilt = build_instance(
        inst.n_vertices,
        [(inst.parent[v], v) for v in range(inst.n_vertices) if v != inst.root],
        [(pair, cost) for pair, cost, _ in new_links],
    )
    fixed = tuple(
        LinkRecord(id=rec.id, endpoints=rec.endpoints, cost=rec.cost, origin=origin)
        for rec, (_, _, origin) in zip(rebuilt.links, new_links)
    )
    object.__setattr__(rebuilt, "links", fixed)
    return rebuilt


def _vertices_to_apex(inst: Instance, v: int, apex: int) -> list[int]:
    out = [v]
    while v != apex:
        v = inst.parent[v]
        out.append(v)
    return out


def split_link(inst: Instance, link: int) -> tuple[LinkRecord, LinkRecord]:
    """Split a cross- or in-link into its two up-link halves.

    The halves are returned as unregistered LinkRecord values carrying the
    original cost and the original id as origin; they are not added to the
    instance.  The union of their paths equals the original path.
    """
    info = classify_link(inst, link)
    if info.cls is LinkClass.UP:
        raise NotSplittable(f"link {link} is an up-link")
    u, v = inst.links[link].endpoints
    cost = inst.links[link].cost
    half_u = LinkRecord(id=-1, endpoints=(u, info.apex), cost=cost, origin=link)
    half_v = LinkRecord(id=-1, endpoints=(v, info.apex), cost=cost, origin=link)
    return half_u, half_v


def covering_links(inst: Instance, edge: int) -> frozenset[int]:
    """Links whose path contains the edge; empty for the dummy root edge."""
    if not (0 <= edge < inst.n_vertices):
        raise UnknownEdge(f"no edge with child vertex {edge}")
    if edge == inst.root:
        return frozenset()
    return inst.cover[edge]


def is_feasible(inst: Instance, chosen: Iterable[int]) -> bool:
    """True iff every real tree edge is covered by at least one chosen link."""
    covered = set()
    for link in set(chosen):
        covered.update(inst.link_path[link])
    return all(v in covered for v in inst.real_edges())
