from fractions import Fraction as F

import pytest

import wtaplab as W
from wtaplab.errors import InfeasibleLstar, NotNested
from wtaplab.strong import (
    StrongEvent,
    _structure_ok,
    enumerate_events,
    induced_event,
    leaf_edges,
)

from conftest import path3_instance


def test_enumerate_subtrees_path():
    inst = path3_instance()
    subs = W.enumerate_subtrees(inst, beta=1)
    assert set(subs) == {
        frozenset({1}),
        frozenset({2}),
        frozenset({1, 2}),
    }


def test_enumerate_subtrees_single_edge():
    inst = W.build_instance(2, [(0, 1)], [((0, 1), 1)])
    assert W.enumerate_subtrees(inst, beta=0) == [frozenset({1})]


def test_enumerate_subtrees_leaf_bound():
    # star with 5 edges: beta=0 allows at most 3 leaves
    inst = W.build_instance(
        6, [(0, i) for i in range(1, 6)], [((1, 2), 1)]
    )
    subs = W.enumerate_subtrees(inst, beta=0)
    for s in subs:
        # a k-edge star subtree has k leaves for k >= 2, else 2
        k = len(s)
        leaves = max(k, 2) if k > 1 else 2
        assert leaves <= 3
    assert frozenset({1, 2, 3, 4}) not in subs
    assert frozenset({1, 2, 3}) in subs


def test_extension_center_cases():
    # internal root: c = root of R
    inst = W.build_instance(
        5, [(0, 1), (1, 2), (1, 3), (3, 4)], [((0, 1), 1)]
    )
    r = frozenset({2, 3})  # rooted at 1, internal (degree 2)
    q = frozenset({1, 2, 3, 4})
    assert W.extension_center(inst, r, q) == 1
    # root is a leaf of R with |R| >= 2: hand over to its neighbor
    r2 = frozenset({1, 2})  # path 0-1-2, root 0 is a leaf of R
    assert W.extension_center(inst, r2, q) == 1
    # single edge, root not a leaf of Q: keep the root (grow upward)
    r3 = frozenset({3})
    assert W.extension_center(inst, r3, frozenset({1, 3})) == 1
    # single edge, root is a leaf of Q: use the lower endpoint
    assert W.extension_center(inst, r3, frozenset({3, 4})) == 3
    r4 = frozenset({4})
    assert W.extension_center(inst, r4, frozenset({4})) == 4
    # nested check
    with pytest.raises(NotNested):
        W.extension_center(inst, frozenset({1, 2}), frozenset({2}))


def test_extension_center_single_edge_grows_upward():
    # R = {e} in the middle of a path: the root end is internal in Q, so
    # the extension grows upward from it
    inst = W.build_instance(4, [(0, 1), (1, 2), (2, 3)], [((0, 3), 1)])
    q = frozenset({1, 2, 3})
    assert W.extension_center(inst, frozenset({2}), q) == 1


def test_ext_set_identity():
    inst = path3_instance()
    subs = W.enumerate_subtrees(inst, beta=1)
    events = enumerate_events(inst, subs, rho=2)
    for r in subs:
        for ev in events[r]:
            assert W.ext_set(inst, ev, r, events, rho=2) == [ev]


def _naive_ext(inst, f, q, events, rho):
    """Oracle: filter every enumerated event by the membership conditions."""
    out = []
    c = W.extension_center(inst, f.edges, q)
    for r_p, evs in events.items():
        if not r_p <= q:
            continue
        for ev in evs:
            if (f.edges & ev.small_edges) != f.small_edges:
                continue
            if any(
                (ev.links & inst.cover[e]) != (f.links & inst.cover[e])
                for e in f.small_edges
            ):
                continue
            if not _structure_ok(inst, f.edges, c, ev.edges, ev.small_edges, q):
                continue
            out.append(ev)
    return sorted(set(out), key=StrongEvent.sort_key)


def test_ext_set_matches_naive_filter():
    for seed in (1, 4, 7):
        inst = W.gen_random_instance(4, F(1, 2), (1, 9), seed=seed)
        subs = W.enumerate_subtrees(inst, beta=1)
        events = enumerate_events(inst, subs, rho=2)
        for r in subs:
            for q in subs:
                if not r <= q:
                    continue
                for ev in events[r][:12]:
                    fast = W.ext_set(inst, ev, q, events, rho=2)
                    slow = _naive_ext(inst, ev, q, events, rho=2)
                    assert fast == slow


def test_ext_set_members_are_valid_events():
    inst = W.gen_random_instance(4, F(1, 2), (1, 9), seed=2)
    subs = W.enumerate_subtrees(inst, beta=1)
    events = enumerate_events(inst, subs, rho=2)
    for r in subs:
        for q in subs:
            if not r < q:
                continue
            for ev in events[r][:8]:
                for fp in W.ext_set(inst, ev, q, events, rho=2):
                    assert fp.edges <= q
                    assert fp.small_edges <= leaf_edges(inst, fp.edges)
                    assert (ev.edges & fp.small_edges) == ev.small_edges
                    for e in fp.small_edges:
                        assert 1 <= len(fp.links & inst.cover[e]) <= 2


def test_build_strong_lp_single_edge_rho1():
    inst = W.build_instance(2, [(0, 1)], [((0, 1), 4)])
    val = W.solve_strong_lp(inst, beta=0, rho=1)
    assert val == 4


def test_strong_lp_rho2_forces_bottom_event_empty():
    # one link, rho = 2: the huge-edge row makes the bottom event carry
    # weight only if x grows beyond 1, so the optimum zeroes it
    inst = W.build_instance(2, [(0, 1)], [((0, 1), 4)])
    lp, x_var = W.build_strong_lp(inst, beta=0, rho=2)
    from wtaplab.lp import solve_lp

    res = solve_lp(lp)
    assert res.objective >= 4
    val = W.solve_strong_lp(inst, beta=0, rho=2)
    assert val == 4


def test_intended_solution_single_edge():
    inst = W.build_instance(2, [(0, 1)], [((0, 1), 4)])
    cand = W.intended_solution(inst, [0], beta=0, rho=1)
    ev = StrongEvent(
        edges=frozenset({1}), small_edges=frozenset({1}), links=frozenset({0})
    )
    assert cand.y[ev] == 1
    assert cand.x.values[0] == 1
    assert cand.y_link[(ev, 0)] == 1
    assert not W.check_strong_feasibility(inst, cand, beta=0, rho=1)


def test_intended_solution_huge_edge():
    # edge covered by rho+1 chosen links: only the bottom event holds
    inst = W.build_instance(
        3, [(0, 1), (1, 2)], [((0, 1), 1), ((0, 2), 1), ((1, 2), 1)]
    )
    lstar = [0, 1, 2]  # e1 covered by links 0,1 -> huge at rho=1
    cand = W.intended_solution(inst, lstar, beta=1, rho=1)
    bottom = StrongEvent(
        edges=frozenset({1}), small_edges=frozenset(), links=frozenset()
    )
    assert cand.y[bottom] == 1
    assert not W.check_strong_feasibility(inst, cand, beta=1, rho=1)


def test_intended_solution_rejects_infeasible():
    inst = path3_instance()
    with pytest.raises(InfeasibleLstar):
        W.intended_solution(inst, [0], beta=1, rho=2)


def test_checker_flags_all_zero_candidate():
    from wtaplab.lp import FractionalSolution
    from wtaplab.strong import StrongCandidate

    inst = path3_instance()
    cand = StrongCandidate(
        x=FractionalSolution(values={}, objective_value=F(0)), y={}, y_link={}
    )
    viols = W.check_strong_feasibility(inst, cand, beta=1, rho=2)
    families = {v.family for v in viols}
    assert "coverage" in families
    covered = [v for v in viols if v.family == "coverage"]
    assert len(covered) == len(inst.real_edges())


def test_checker_flags_perturbed_candidate():
    inst = W.build_instance(2, [(0, 1)], [((0, 1), 4)])
    cand = W.intended_solution(inst, [0], beta=0, rho=1)
    ev = next(iter(cand.y))
    # break one marginal: double the link weight
    cand.y_link[(ev, 0)] = F(2)
    viols = W.check_strong_feasibility(inst, cand, beta=0, rho=1)
    assert viols
    families = {v.family for v in viols}
    assert families & {"marginal", "link-consistency"}


def test_unique_consistent_extension():
    for seed in (3, 8, 15):
        inst = W.gen_random_instance(4 + seed % 2, F(1, 3), (1, 9), seed=seed)
        if len(inst.links) > 24:
            continue
        opt = W.brute_force_opt(inst)
        subs = W.enumerate_subtrees(inst, beta=1)
        events = enumerate_events(inst, subs, rho=2)
        cand = W.intended_solution(inst, opt.links, beta=1, rho=2)
        support = [ev for ev, val in cand.y.items() if val == 1]
        for ev in support:
            for q in subs:
                if not ev.edges <= q:
                    continue
                chosen = [
                    fp
                    for fp in W.ext_set(inst, ev, q, events, rho=2)
                    if cand.y.get(fp, F(0)) == 1
                ]
                assert len(chosen) == 1, (seed, ev, sorted(q))


def test_strong_sandwich():
    for seed in range(8):
        inst = W.gen_random_instance(4, F(1, 3), (1, 9), seed=seed)
        if len(inst.links) > 10:
            continue
        cut = W.cut_lp(inst).objective_value
        oc = W.odd_cut_lp(inst).objective_value
        strong = W.solve_strong_lp(inst, beta=1, rho=2)
        opt = W.brute_force_opt(inst).cost
        assert cut <= oc <= strong <= opt
