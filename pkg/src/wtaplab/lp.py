"""Exact rational LP engine plus the Cut LP and Odd Cut LP relaxations.

The solver is a dense two-phase primal simplex with Bland's anti-cycling
rule, run entirely in exact rational arithmetic.  gmpy2.mpq backs the
tableau when available (it is much faster than fractions.Fraction); the
public interface speaks Fraction either way.

The odd-cut separation oracle enumerates vertex subsets; that is exact and
entirely adequate below the desk-scale cap, and the interface leaves room
for a polynomial oracle later.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .core import Instance
from .errors import Infeasible, TooLarge, Unbounded

try:
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    _Q = Fraction

SEPARATION_CAP = 18
_ZERO = _Q(0)
_ONE = _Q(1)


@dataclass
class LinearProgram:
    """min objective @ x subject to rows; all data exact rationals.

    Each constraint is (coefficients, relation, rhs) with relation one of
    '>=', '=', '<='.  Bounds default to [0, None) per variable.
    """

    variables: list[str]
    objective: list[Fraction]
    constraints: list[tuple[list[Fraction], str, Fraction]] = field(default_factory=list)
    bounds: Optional[list[tuple[Fraction, Optional[Fraction]]]] = None

    def add(self, coeffs: dict[int, Fraction], rel: str, rhs: Fraction) -> None:
        row = [Fraction(0)] * len(self.variables)
        for j, c in coeffs.items():
            row[j] += c
        self.constraints.append((row, rel, Fraction(rhs)))


@dataclass(frozen=True)
class LpResult:
    objective: Fraction
    point: list[Fraction]
    vertex: bool
    iterations: int


@dataclass(frozen=True)
class FractionalSolution:
    """Exact link -> value map in [0,1] with its objective value."""

    values: dict[int, Fraction]
    objective_value: Fraction

    def __call__(self, link: int) -> Fraction:
        return self.values.get(link, Fraction(0))

    def support(self) -> frozenset[int]:
        return frozenset(l for l, v in self.values.items() if v != 0)

    def mass(self, links) -> Fraction:
        return sum((self.values.get(l, Fraction(0)) for l in links), Fraction(0))


@dataclass(frozen=True)
class OddCutViolation:
    vertex_set: frozenset[int]
    deficit: Fraction


def solve_lp(lp: LinearProgram, max_iterations: int = 2_000_000) -> LpResult:
    """Optimal basic feasible solution via two-phase simplex with Bland's rule."""
    n = len(lp.variables)
    bounds = lp.bounds or [(Fraction(0), None)] * n
    shifts = [Fraction(lo) for lo, _ in bounds]

    rows: list[tuple[list, str, object]] = []
    for coeffs, rel, rhs in lp.constraints:
        shifted = rhs - sum(c * s for c, s in zip(coeffs, shifts) if s)
        rows.append(([_Q(c.numerator, c.denominator) for c in coeffs], rel,
                     _Q(shifted.numerator, shifted.denominator)))
    for j, (lo, hi) in enumerate(bounds):
        if hi is not None:
            width = Fraction(hi) - Fraction(lo)
            if width < 0:
                raise Infeasible(f"variable {lp.variables[j]} has empty bound range")
            row = [_ZERO] * n
            row[j] = _ONE
            rows.append((row, "<=", _Q(width.numerator, width.denominator)))

    m = len(rows)
    normalized = []
    n_slack = 0
    n_art = 0
    for coeffs, rel, rhs in rows:
        if rhs < 0:
            coeffs = [-c for c in coeffs]
            rhs = -rhs
            rel = {"<=": ">=", ">=": "<=", "=": "="}[rel]
        normalized.append((coeffs, rel, rhs))
        if rel != "=":
            n_slack += 1
        if rel != "<=":
            n_art += 1
    total = n + n_slack + n_art
    art_start = n + n_slack

    A = []
    b = []
    basis = []
    slack_idx = n
    art_idx = art_start
    for coeffs, rel, rhs in normalized:
        row = coeffs + [_ZERO] * (n_slack + n_art)
        if rel == "<=":
            row[slack_idx] = _ONE
            basis_col = slack_idx
            slack_idx += 1
        elif rel == ">=":
            row[slack_idx] = -_ONE
            slack_idx += 1
            row[art_idx] = _ONE
            basis_col = art_idx
            art_idx += 1
        else:
            row[art_idx] = _ONE
            basis_col = art_idx
            art_idx += 1
        A.append(row)
        b.append(rhs)
        basis.append(basis_col)

    iterations = 0

    def pivot(pr: int, pc: int) -> None:
        prow = A[pr]
        piv = prow[pc]
        if piv != 1:
            inv = _ONE / piv
            A[pr] = prow = [c * inv for c in prow]
            b[pr] *= inv
        hot = [j for j, c in enumerate(prow) if c]
        for r in range(m):
            if r == pr:
                continue
            f = A[r][pc]
            if f:
                arow = A[r]
                for j in hot:
                    arow[j] -= f * prow[j]
                b[r] -= f * b[pr]
        basis[pr] = pc

    def run_phase(cost: list, allowed: int) -> None:
        # Dantzig entering (steepest reduced cost) while progress is made;
        # after a streak of degenerate pivots, Bland's smallest-index rule
        # takes over until the objective moves again, so no cycling.
        nonlocal iterations
        z = list(cost)
        for i, bc in enumerate(basis):
            cb = cost[bc]
            if cb:
                arow = A[i]
                for j in range(allowed):
                    if arow[j]:
                        z[j] -= cb * arow[j]
        stall = 0
        while True:
            entering = -1
            if stall < 30:
                best = _ZERO
                for j in range(allowed):
                    zj = z[j]
                    if zj < best:
                        best = zj
                        entering = j
            else:
                for j in range(allowed):
                    if z[j] < 0:
                        entering = j
                        break
            if entering < 0:
                return
            leaving = -1
            best_ratio = None
            for i in range(m):
                a = A[i][entering]
                if a > 0:
                    ratio = b[i] / a
                    if (
                        best_ratio is None
                        or ratio < best_ratio
                        or (ratio == best_ratio and basis[i] < basis[leaving])
                    ):
                        best_ratio = ratio
                        leaving = i
            if leaving < 0:
                raise Unbounded("objective is unbounded below")
            iterations += 1
            if iterations > max_iterations:
                raise RuntimeError("simplex iteration guard tripped")
            stall = stall + 1 if best_ratio == 0 else 0
            ze = z[entering]
            pivot(leaving, entering)
            prow = A[leaving]
            for j, c in enumerate(prow):
                if c and j < allowed:
                    z[j] -= ze * c
            z[entering] = _ZERO

    phase1_cost = [_ZERO] * total
    for j in range(art_start, total):
        phase1_cost[j] = _ONE
    run_phase(phase1_cost, total)
    infeas = sum((b[i] for i in range(m) if basis[i] >= art_start), _ZERO)
    if infeas != 0:
        raise Infeasible("phase-1 optimum is positive")

    # drive leftover zero-valued artificials out of the basis
    drop_rows = []
    for i in range(m):
        if basis[i] >= art_start:
            prow = A[i]
            pc = next((j for j in range(art_start) if prow[j]), None)
            if pc is None:
                drop_rows.append(i)
            else:
                pivot(i, pc)
    for i in sorted(drop_rows, reverse=True):
        del A[i], b[i], basis[i]
    m = len(A)

    phase2_cost = [_ZERO] * total
    for j in range(n):
        c = lp.objective[j]
        phase2_cost[j] = _Q(c.numerator, c.denominator)
    run_phase(phase2_cost, art_start)

    values = [Fraction(0)] * n
    for i, bc in enumerate(basis):
        if bc < n:
            q = b[i]
            values[bc] = Fraction(int(q.numerator), int(q.denominator))
    point = [v + s for v, s in zip(values, shifts)]
    objective = sum((c * v for c, v in zip(lp.objective, point)), Fraction(0))
    return LpResult(objective=objective, point=point, vertex=True, iterations=iterations)


def dump_lp(lp: LinearProgram) -> str:
    """Render a LinearProgram in the plain-text interchange format."""

    def term(c: Fraction, name: str) -> str:
        return f"{c} {name}"

    def combo(coeffs: Sequence[Fraction]) -> str:
        parts = [
            term(c, lp.variables[j]) for j, c in enumerate(coeffs) if c != 0
        ]
        return " + ".join(parts) if parts else "0"

    out = [f"min {combo(lp.objective)}", "st"]
    for coeffs, rel, rhs in lp.constraints:
        out.append(f"{combo(coeffs)} {rel} {rhs}")
    bounds = lp.bounds or [(Fraction(0), None)] * len(lp.variables)
    out.append("bounds")
    for name, (lo, hi) in zip(lp.variables, bounds):
        hi_s = str(hi) if hi is not None else "inf"
        out.append(f"{lo} <= {name} <= {hi_s}")
    return "\n".join(out) + "\n"


def _link_lp_skeleton(inst: Instance) -> LinearProgram:
    names = [f"x{rec.id}" for rec in inst.links]
    objective = [rec.cost for rec in inst.links]
    bounds = [(Fraction(0), Fraction(1))] * len(inst.links)
    return LinearProgram(variables=names, objective=objective, bounds=bounds)


def _to_solution(inst: Instance, point: Sequence[Fraction]) -> FractionalSolution:
    values = {rec.id: point[rec.id] for rec in inst.links}
    obj = sum((rec.cost * values[rec.id] for rec in inst.links), Fraction(0))
    return FractionalSolution(values=values, objective_value=obj)


def cut_lp(inst: Instance) -> FractionalSolution:
    """min c.x subject to x(L_e) >= 1 per tree edge, 0 <= x <= 1."""
    for e in inst.real_edges():
        if not inst.cover[e]:
            raise Infeasible(f"edge e_{e} is covered by no link")
    lp = _link_lp_skeleton(inst)
    for e in inst.real_edges():
        lp.add({l: Fraction(1) for l in inst.cover[e]}, ">=", Fraction(1))
    res = solve_lp(lp)
    return _to_solution(inst, res.point)


def separate_odd_cut(
    inst: Instance, x: FractionalSolution, cap: int = SEPARATION_CAP
) -> Optional[OddCutViolation]:
    """Most-violated odd-cut constraint, found by subset enumeration.

    Subsets are enumerated with vertex 0 pinned inside S (S and its
    complement induce the same constraint).
    """
    n = inst.n_vertices
    if n > cap:
        raise TooLarge(f"{n} vertices exceeds separation cap {cap}")
    edge_mass = {
        e: sum((x(l) for l in inst.cover[e]), Fraction(0)) for e in inst.real_edges()
    }
    edges = [(e, inst.parent[e]) for e in inst.real_edges()]
    link_ends = [(rec.id, *rec.endpoints) for rec in inst.links]
    others = [v for v in range(n) if v != 0]

    best: Optional[tuple[Fraction, int, frozenset[int]]] = None
    for mask in range(1 << len(others)):
        members = {0}
        mm = mask
        i = 0
        while mm:
            if mm & 1:
                members.add(others[i])
            mm >>= 1
            i += 1
        cut_edges = [e for e, p in edges if (e in members) != (p in members)]
        if len(cut_edges) % 2 == 0:
            continue
        lhs = sum((edge_mass[e] for e in cut_edges), Fraction(0))
        for lid, u, v in link_ends:
            if (u in members) != (v in members):
                lhs += x(lid)
        deficit = Fraction(len(cut_edges) + 1) - lhs
        if deficit > 0:
            key = (-deficit, mask)
            if best is None or key < (-best[0], best[1]):
                best = (deficit, mask, frozenset(members))
    if best is None:
        return None
    return OddCutViolation(vertex_set=best[2], deficit=best[0])


def _odd_cut_row(inst: Instance, members: frozenset[int]) -> tuple[dict[int, Fraction], Fraction]:
    coeffs: dict[int, Fraction] = {}
    cut_edges = [
        e for e in inst.real_edges() if (e in members) != (inst.parent[e] in members)
    ]
    for e in cut_edges:
        for l in inst.cover[e]:
            coeffs[l] = coeffs.get(l, Fraction(0)) + 1
    for rec in inst.links:
        u, v = rec.endpoints
        if (u in members) != (v in members):
            coeffs[rec.id] = coeffs.get(rec.id, Fraction(0)) + 1
    return coeffs, Fraction(len(cut_edges) + 1)


def odd_cut_lp(inst: Instance, cap: int = SEPARATION_CAP) -> FractionalSolution:
    """Odd Cut LP optimum by cutting planes over :func:`separate_odd_cut`.

    Seeded with the per-edge coverage rows, which the odd-cut family
    implies (take S = the subtree below an edge), then re-solved from
    scratch after each added cut.
    """
    if inst.n_vertices > cap:
        raise TooLarge(f"{inst.n_vertices} vertices exceeds separation cap {cap}")
    for e in inst.real_edges():
        if not inst.cover[e]:
            raise Infeasible(f"edge e_{e} is covered by no link")
    lp = _link_lp_skeleton(inst)
    for e in inst.real_edges():
        lp.add({l: Fraction(1) for l in inst.cover[e]}, ">=", Fraction(1))
    seen: set[frozenset[int]] = set()
    while True:
        res = solve_lp(lp)
        sol = _to_solution(inst, res.point)
        violation = separate_odd_cut(inst, sol, cap=cap)
        if violation is None:
            return sol
        if violation.vertex_set in seen:
            raise RuntimeError("separation returned a repeated cut")
        seen.add(violation.vertex_set)
        coeffs, rhs = _odd_cut_row(inst, violation.vertex_set)
        lp.add(coeffs, ">=", rhs)


def is_integral(x: FractionalSolution) -> bool:
    return all(v == 0 or v == 1 for v in x.values.values())
