"""Shared fixtures: small instances and a hand-built structured solution."""

from fractions import Fraction as F

import pytest

import wtaplab as W
from wtaplab.lp import FractionalSolution
from wtaplab.structured import StructuredEvent, StructuredSolution


def path3_instance():
    """Path 0-1-2 with per-edge up-links (cost 1 each) and a spanning
    up-link of cost 3/2."""
    return W.build_instance(
        3, [(0, 1), (1, 2)], [((0, 1), 1), ((1, 2), 1), ((0, 2), F(3, 2))]
    )


def star3_instance():
    """Root 0 with children 1, 2, 3; two cross links."""
    return W.build_instance(
        4, [(0, 1), (0, 2), (0, 3)], [((1, 2), 1), ((1, 3), 2)]
    )


def fork_instance():
    """0 -> 1, 1 -> {2, 3}; one in-link between the leaves."""
    return W.build_instance(
        4, [(0, 1), (1, 2), (1, 3)], [((2, 3), 1), ((0, 1), 1), ((0, 2), 2)]
    )


class HandFixture:
    """Five-vertex instance with a hand-checkable structured solution.

    Tree: 0 -> {1, 2}, 2 -> 3, 3 -> 4; correlated nodes {3, 4}.  The event
    weights realize a fair mix of two integral solutions, A = {la, lc} and
    B = {lb, ld}, so every conditional distribution is forced or a fair
    coin and every expectation below is exact.

      la = {1,2} cost 2   cross, uncorrelated
      lb = {1,3} cost 3   cross, uncorrelated (covers e1, e2, e3)
      lc = {2,4} cost 5   up-link with correlated leading edge e3
      ld = {3,4} cost 7   up-link with correlated leading edge e4
    """

    def __init__(self):
        self.inst = W.build_instance(
            5,
            [(0, 1), (0, 2), (2, 3), (3, 4)],
            [((1, 2), 2), ((1, 3), 3), ((2, 4), 5), ((3, 4), 7)],
        )
        self.la, self.lb, self.lc, self.ld = 0, 1, 2, 3
        self.v_cor = frozenset({3, 4})
        half = F(1, 2)

        def ev(edges, links):
            return StructuredEvent(edges=frozenset(edges), links=frozenset(links))

        y = {
            ev({0}, set()): F(1),
            ev({1}, {self.la}): half,
            ev({1}, {self.lb}): half,
            ev({2}, {self.la}): half,
            ev({2}, {self.lb}): half,
            ev({3}, {self.lc}): half,
            ev({3}, {self.lb}): half,
            ev({4}, {self.lc}): half,
            ev({4}, {self.ld}): half,
            ev({0, 1}, {self.la}): half,
            ev({0, 1}, {self.lb}): half,
            ev({0, 2}, {self.la}): half,
            ev({0, 2}, {self.lb}): half,
            ev({0, 1, 2}, {self.la}): half,
            ev({0, 1, 2}, {self.lb}): half,
            ev({2, 3}, {self.la, self.lc}): half,
            ev({2, 3}, {self.lb}): half,
            ev({3, 4}, {self.lc}): half,
            ev({3, 4}, {self.lb, self.ld}): half,
        }
        values = {l: half for l in range(4)}
        cost = sum(self.inst.links[l].cost * values[l] for l in range(4))
        x = FractionalSolution(values=values, objective_value=cost)
        z = FractionalSolution(values=dict(values), objective_value=cost)
        self.sol = StructuredSolution(
            inst=self.inst, x=x, y=y, z=z, v_cor=self.v_cor, rho_prime=2
        )
        # expected multiset cost: uncorrelated non-up links pay twice
        self.expected_multiset_cost = (
            2 * half * (self.inst.links[0].cost + self.inst.links[1].cost)
            + half * (self.inst.links[2].cost + self.inst.links[3].cost)
        )


@pytest.fixture(scope="session")
def hand_fixture():
    return HandFixture()
