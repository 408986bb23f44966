from fractions import Fraction as F

import pytest

import wtaplab as W
from wtaplab import correlation
from wtaplab.errors import Infeasible, SupportViolation
from wtaplab.lp import FractionalSolution

from conftest import path3_instance


def test_split2_uplink_only_is_exact():
    inst = path3_instance()
    sol = W.split_round_2approx(inst)
    assert sol.cost == W.uplink_dp_opt(inst).cost == F(3, 2)


def test_split2_single_cross_link_pays_two():
    star = W.build_instance(3, [(0, 1), (0, 2)], [((1, 2), 1)])
    inst = W.shadow_complete(star)
    sol = W.split_round_2approx(inst)
    assert sol.cost == 2
    assert W.brute_force_opt(inst).cost == 1


def test_split2_infeasible():
    inst = W.build_instance(3, [(0, 1), (1, 2)], [((0, 1), 1)])
    with pytest.raises(Infeasible):
        W.split_round_2approx(inst)


def test_split2_bound_randomized():
    for seed in range(40):
        inst = W.gen_random_instance(3 + seed % 6, F(1, 3), (1, 9), seed=seed)
        cut = W.cut_lp(inst).objective_value
        sol = W.split_round_2approx(inst)
        assert W.is_feasible(inst, sol.links)
        assert sol.cost <= 2 * cut


def _tagged(inst, links):
    return [inst.links[l] for l in links]


def test_build_partition_no_correlation():
    inst = W.shadow_complete(
        W.build_instance(4, [(0, 1), (1, 2), (1, 3)], [((2, 3), 1), ((0, 2), 2)])
    )
    support = [
        rec
        for rec in inst.links
        if len(inst.link_path[rec.id]) == 1 or rec.endpoints == (2, 3)
    ]
    pieces = W.build_partition(inst, frozenset(), support)
    by_root = {p.root: p for p in pieces}
    # with no correlated edges each piece is a vertex plus its children
    assert by_root[0].vertex_set == frozenset({0, 1})
    assert by_root[1].vertex_set == frozenset({1, 2, 3})
    assert by_root[0].edges == frozenset({1})
    assert by_root[1].edges == frozenset({2, 3})
    # edge sets partition the tree edges
    all_edges = [e for p in pieces for e in p.edges]
    assert sorted(all_edges) == sorted(inst.real_edges())
    # each support link in exactly one piece, covering only piece edges
    placed = [rec.endpoints for p in pieces for rec in p.links]
    assert sorted(placed) == sorted(rec.endpoints for rec in support)
    for p in pieces:
        for rec in p.links:
            assert set(inst.path_between(*rec.endpoints)) <= p.edges


def test_build_partition_three_pieces_with_correlation():
    # root with three subtrees and correlated chains below two of the
    # root's children: exactly three pieces carry edges (the big one at the
    # root, plus one at the bottom of each correlated chain)
    #
    #            0
    #         /  |  \
    #        1   2   3        e1, e2, e3 uncorrelated
    #        |   |   | \
    #        4   7  10 11     e4, e7 correlated; e10, e11 uncorrelated
    #       / \  | \
    #      5   6 8  9         e5, e6 correlated; e8, e9 uncorrelated
    inst = W.build_instance(
        12,
        [
            (0, 1), (0, 2), (0, 3),
            (1, 4), (4, 5), (4, 6),
            (2, 7), (7, 8), (7, 9),
            (3, 10), (3, 11),
        ],
        [((0, 1), 1)],
    )
    v_cor = frozenset({4, 5, 6, 7})
    pieces = W.build_partition(inst, v_cor, [])
    nonempty = {p.root: p.edges for p in pieces if p.edges}
    assert nonempty == {
        0: frozenset({1, 2, 3, 4, 5, 6, 7}),
        7: frozenset({8, 9}),
        3: frozenset({10, 11}),
    }
    all_edges = [e for p in pieces for e in p.edges]
    assert sorted(all_edges) == sorted(inst.real_edges())


def test_build_partition_rejects_bad_support():
    # 0-1-2 path, v_cor empty: link {0,2} covers non-leading uncorrelated e_2
    inst = path3_instance()
    with pytest.raises(SupportViolation):
        W.build_partition(inst, frozenset(), [inst.links[2]])


def test_partition_piece_classes_up_or_cross():
    for seed in range(12):
        inst = W.gen_random_instance(3 + seed % 5, F(1, 3), (1, 9), seed=seed)
        x0 = W.odd_cut_lp(inst)
        v_cor = W.select_vcor(inst, x0, F(1, 4))
        sol = W.solve_structured(inst, v_cor, 2)
        support = sorted(sol.z.support())
        l_cor = correlation.correlated_links(inst, v_cor)
        recs = []
        for l in support:
            info = W.classify_link(inst, l)
            if l in l_cor and info.cls is not W.LinkClass.UP:
                recs.extend(W.split_link(inst, l))
            else:
                recs.append(inst.links[l])
        pieces = W.build_partition(inst, v_cor, recs)
        for p in pieces:
            sub_root = p.root
            for rec in p.links:
                u, v = rec.endpoints
                apex = inst.lca(u, v)
                assert apex in p.vertex_set
                assert apex in rec.endpoints or apex == sub_root


def test_odd_cut_rounding_integral_input():
    # cross+up instance with integral z returns exactly the support
    star = W.shadow_complete(
        W.build_instance(3, [(0, 1), (0, 2)], [((1, 2), 1)])
    )
    cross = next(rec.id for rec in star.links if rec.endpoints == (1, 2))
    z = FractionalSolution(
        values={l: F(1 if l == cross else 0) for l in range(len(star.links))},
        objective_value=F(1),
    )
    sol = W.odd_cut_rounding(star, z, frozenset())
    assert sol.links == frozenset({cross})
    assert sol.cost == 1


def test_odd_cut_rounding_rejects_bad_support():
    # an up-link covering a non-leading uncorrelated edge cannot appear in
    # the support of a structured-feasible z
    inst = path3_instance()
    z = FractionalSolution(
        values={0: F(0), 1: F(0), 2: F(1)}, objective_value=F(3, 2)
    )
    with pytest.raises(SupportViolation):
        W.odd_cut_rounding(inst, z, frozenset())


def test_odd_cut_rounding_bound_randomized():
    count = 0
    seed = 300
    while count < 12:
        seed += 1
        inst = W.gen_random_instance(3 + seed % 5, F(1, 3), (1, 9), seed=seed)
        x0 = W.odd_cut_lp(inst)
        v_cor = W.select_vcor(inst, x0, F(1, 4))
        sol = W.solve_structured(inst, v_cor, 2)
        count += 1
        l_cor = correlation.correlated_links(inst, v_cor)
        bound = 2 * correlation.mass_cost(inst, sol.z, l_cor) + correlation.mass_cost(
            inst, sol.z, (l for l in sol.z.values if l not in l_cor)
        )
        for flag in (False, True):
            out = W.odd_cut_rounding(inst, sol.z, v_cor, use_lp_vertex=flag)
            assert W.is_feasible(inst, out.links)
            assert out.cost <= bound


def test_odd_cut_rounding_correlated_uplinks_factor_one(hand_fixture):
    # all correlated support links are up-links: no split, so the cost can
    # reach c(z) but never the doubled bound
    fx = hand_fixture
    sol = W.odd_cut_rounding(fx.inst, fx.sol.z, fx.v_cor)
    assert W.is_feasible(fx.inst, sol.links)
    assert sol.cost <= fx.sol.z.objective_value + correlation.mass_cost(
        fx.inst, fx.sol.z, correlation.correlated_links(fx.inst, fx.v_cor)
    )
