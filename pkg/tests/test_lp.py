from fractions import Fraction as F
from math import comb

import pytest

import wtaplab as W
from wtaplab.errors import Infeasible, TooLarge, Unbounded
from wtaplab.lp import LinearProgram, dump_lp, solve_lp

from conftest import path3_instance


def test_solve_lp_pinned_variable():
    lp = LinearProgram(variables=["x"], objective=[F(1)])
    lp.add({0: F(1)}, ">=", F(1))
    lp.add({0: F(1)}, "<=", F(1))
    res = solve_lp(lp)
    assert res.objective == 1 and res.point == [F(1)] and res.vertex


def test_solve_lp_two_var():
    lp = LinearProgram(
        variables=["x", "y"],
        objective=[F(1), F(1)],
        bounds=[(F(0), F(1)), (F(0), F(1))],
    )
    lp.add({0: F(1), 1: F(1)}, ">=", F(3, 2))
    res = solve_lp(lp)
    assert res.objective == F(3, 2)


def test_solve_lp_unbounded():
    lp = LinearProgram(variables=["x"], objective=[F(-1)])
    with pytest.raises(Unbounded):
        solve_lp(lp)


def test_solve_lp_infeasible():
    lp = LinearProgram(variables=["x"], objective=[F(1)], bounds=[(F(0), F(1))])
    lp.add({0: F(1)}, ">=", F(2))
    with pytest.raises(Infeasible):
        solve_lp(lp)


def test_solve_lp_equality_and_shifts():
    lp = LinearProgram(
        variables=["x", "y"],
        objective=[F(2), F(3)],
        bounds=[(F(1), F(5)), (F(0), None)],
    )
    lp.add({0: F(1), 1: F(1)}, "=", F(4))
    res = solve_lp(lp)
    assert res.objective == 2 * 4  # push x to its upper range
    assert res.point[0] + res.point[1] == 4


def test_iteration_count_within_combinatorial_bound():
    inst = W.gen_random_instance(6, F(1, 2), (1, 9), seed=5)
    lp = LinearProgram(
        variables=[f"x{i}" for i in range(len(inst.links))],
        objective=[rec.cost for rec in inst.links],
        bounds=[(F(0), F(1))] * len(inst.links),
    )
    for e in inst.real_edges():
        lp.add({l: F(1) for l in inst.cover[e]}, ">=", F(1))
    res = solve_lp(lp)
    n_cols = len(lp.variables) + 2 * len(lp.constraints)
    assert res.iterations <= comb(n_cols, min(len(lp.constraints), n_cols))


def test_cut_lp_examples():
    inst = W.build_instance(2, [(0, 1)], [((0, 1), 5)])
    sol = W.cut_lp(inst)
    assert sol.objective_value == 5 and sol.values[0] == 1

    sol = W.cut_lp(path3_instance())
    assert sol.objective_value == F(3, 2)
    assert sol.values[2] == 1

    bad = W.build_instance(3, [(0, 1), (1, 2)], [((0, 1), 1)])
    with pytest.raises(Infeasible):
        W.cut_lp(bad)


def test_separation_examples():
    inst = W.build_instance(2, [(0, 1)], [((0, 1), 5)])
    full = W.FractionalSolution(values={0: F(1)}, objective_value=F(5))
    assert W.separate_odd_cut(inst, full) is None
    half = W.FractionalSolution(values={0: F(1, 2)}, objective_value=F(5, 2))
    v = W.separate_odd_cut(inst, half)
    assert v is not None and v.deficit == 1
    assert v.vertex_set in (frozenset({0}), frozenset({1}))
    assert len(v.vertex_set) == 1


def test_separation_accepts_integral_feasible():
    for seed in range(10):
        inst = W.gen_random_instance(6, F(1, 3), (1, 9), seed=seed)
        sol = W.brute_force_opt(inst)
        frac = W.FractionalSolution(
            values={l: F(1 if l in sol.links else 0) for l in range(len(inst.links))},
            objective_value=sol.cost,
        )
        assert W.separate_odd_cut(inst, frac) is None


def test_separation_cap():
    inst = W.gen_random_instance(6, F(1, 3), (1, 9), seed=0)
    with pytest.raises(TooLarge):
        W.separate_odd_cut(
            inst, W.cut_lp(inst), cap=4
        )


def test_odd_cut_lp_single_edge():
    inst = W.build_instance(2, [(0, 1)], [((0, 1), 5)])
    sol = W.odd_cut_lp(inst)
    assert sol.objective_value == 5 and sol.values[0] == 1


def test_odd_cut_dominates_cut():
    for seed in range(25):
        inst = W.gen_random_instance(3 + seed % 5, F(1, 3), (1, 9), seed=seed)
        cut = W.cut_lp(inst).objective_value
        oc = W.odd_cut_lp(inst).objective_value
        assert cut <= oc


def test_odd_cut_solution_separates_clean():
    for seed in range(10):
        inst = W.gen_random_instance(3 + seed % 4, F(1, 2), (1, 9), seed=seed)
        sol = W.odd_cut_lp(inst)
        assert W.separate_odd_cut(inst, sol) is None


def test_is_integral():
    a = W.FractionalSolution(values={0: F(1), 1: F(0)}, objective_value=F(1))
    assert W.is_integral(a)
    b = W.FractionalSolution(values={0: F(1, 2)}, objective_value=F(1, 2))
    assert not W.is_integral(b)
    empty = W.FractionalSolution(values={}, objective_value=F(0))
    assert W.is_integral(empty)


def test_integrality_on_cross_up_instances():
    checked = 0
    seed = 100
    while checked < 30:
        seed += 1
        inst = W.gen_random_instance(3 + seed % 6, F(1, 3), (1, 9), seed=seed)
        keep = [
            l
            for l in range(len(inst.links))
            if W.classify_link(inst, l).cls is not W.LinkClass.IN
        ]
        sub = W.build_instance(
            inst.n_vertices,
            [(inst.parent[v], v) for v in inst.real_edges()],
            [(inst.links[l].endpoints, inst.links[l].cost) for l in keep],
        )
        if any(not sub.cover[e] for e in sub.real_edges()):
            continue
        checked += 1
        frac = W.odd_cut_lp(sub)
        assert W.is_integral(frac)
        if len(sub.links) <= 24:
            assert frac.objective_value == W.brute_force_opt(sub).cost


def test_dump_lp_roundtrippable_text():
    lp = LinearProgram(
        variables=["x0", "x1"],
        objective=[F(3), F(1, 2)],
        bounds=[(F(0), F(1)), (F(0), None)],
    )
    lp.add({0: F(1), 1: F(2)}, ">=", F(5, 3))
    text = dump_lp(lp)
    assert text.splitlines()[0] == "min 3 x0 + 1/2 x1"
    assert "1 x0 + 2 x1 >= 5/3" in text
    assert "0 <= x0 <= 1" in text
    assert "0 <= x1 <= inf" in text
