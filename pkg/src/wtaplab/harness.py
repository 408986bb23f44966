"""Instance generation, the text format, and benchmark orchestration.

Reports are JSON lines with rationals rendered as "p/q" strings, so byte
identity of two runs with the same config is meaningful and is asserted by
the determinism tests.  Wall-clock timings are kept in memory and in the
human summary only; they never enter the report lines.
"""

from __future__ import annotations

import json
import os
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence, TextIO

from . import cleanup as cleanup_mod
from . import core, correlation
from .classic_round import odd_cut_rounding, split_round_2approx
from .core import Instance, LinkClass
from .errors import ParseError, WtapError
from .exact import brute_force_opt, uplink_dp_opt
from .lp import cut_lp, odd_cut_lp
from .structured import select_vcor, solve_structured
from .strong import solve_strong_lp

ALGORITHMS = ("exact", "dp", "split2", "oddcut", "structured15", "full149")


def gen_random_instance(
    n: int,
    density: Fraction,
    cost_range: tuple[int, int],
    seed: int,
) -> Instance:
    """Random rooted tree plus random links, coverable and shadow-complete.

    Each vertex picks a uniformly random parent among lower-indexed
    vertices; each non-tree pair becomes a link with the given probability;
    uncovered edges get a fallback up-link at the maximum cost.
    """
    rng = random.Random(f"wtap-gen:{seed}")
    lo, hi = cost_range
    edges = [(rng.randrange(v), v) for v in range(1, n)]
    tree_pairs = {(min(p, c), max(p, c)) for p, c in edges}
    links: list[tuple[tuple[int, int], Fraction]] = []
    threshold = float(density)
    for u in range(n):
        for v in range(u + 1, n):
            if (u, v) in tree_pairs:
                continue
            if rng.random() < threshold:
                links.append(((u, v), Fraction(rng.randint(lo, hi))))
    inst = core.build_instance(n, edges, links)
    uncovered = [e for e in inst.real_edges() if not inst.cover[e]]
    for e in uncovered:
        links.append(((min(inst.parent[e], e), max(inst.parent[e], e)), Fraction(hi)))
    if uncovered:
        inst = core.build_instance(n, edges, links)
    return core.shadow_complete(inst)


def serialize_instance(inst: Instance) -> str:
    lines = [f"wtap {inst.n_vertices} {len(inst.links)}"]
    for v in inst.real_edges():
        lines.append(f"edge {inst.parent[v]} {v}")
    for rec in inst.links:
        u, v = rec.endpoints
        lines.append(f"link {u} {v} {rec.cost}")
    return "\n".join(lines) + "\n"


def parse_instance(text: str) -> Instance:
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty input", line=1)
    head = lines[0].split()
    if len(head) != 3 or head[0] != "wtap":
        raise ParseError("expected header 'wtap <n> <m>'", line=1)
    try:
        n, m = int(head[1]), int(head[2])
    except ValueError:
        raise ParseError("header counts must be integers", line=1)
    if len(lines) < 1 + (n - 1) + m:
        raise ParseError("fewer lines than the header promises", line=len(lines))
    edges = []
    for i in range(1, n):
        parts = lines[i].split()
        if len(parts) != 3 or parts[0] != "edge":
            raise ParseError("expected 'edge <parent> <child>'", line=i + 1)
        try:
            edges.append((int(parts[1]), int(parts[2])))
        except ValueError:
            raise ParseError("edge endpoints must be integers", line=i + 1)
    links = []
    for i in range(n, n + m):
        parts = lines[i].split()
        if len(parts) != 4 or parts[0] != "link":
            raise ParseError("expected 'link <u> <v> <cost>'", line=i + 1)
        try:
            u, v = int(parts[1]), int(parts[2])
            cost = Fraction(parts[3])
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad link line: {lines[i]!r}", line=i + 1)
        links.append(((u, v), cost))
    try:
        return core.build_instance(n, edges, links)
    except WtapError as exc:
        raise ParseError(str(exc), line=1)


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def parse_frac(s: str) -> Fraction:
    return Fraction(s)


@dataclass(frozen=True)
class BenchConfig:
    seed: int = 0
    trials: int = 10
    n_range: tuple[int, int] = (3, 6)
    link_density: Fraction = Fraction(1, 3)
    cost_range: tuple[int, int] = (1, 10)
    algorithms: tuple[str, ...] = ("exact", "dp", "split2")
    gamma: Fraction = Fraction(3, 20)
    p: Fraction = Fraction(25, 53)
    delta: Fraction = Fraction(1, 4)
    rho_prime: Optional[int] = 3
    beta: int = 1
    rho: int = 2
    strong_lp: bool = False
    brute_cap: int = 24

    @classmethod
    def from_file(cls, path: str) -> "BenchConfig":
        kwargs: dict = {}
        with open(path) as fh:
            for raw in fh:
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                key, _, value = line.partition("=")
                key = key.strip()
                value = value.strip()
                if key in ("seed", "trials", "beta", "rho", "brute_cap"):
                    kwargs[key] = int(value)
                elif key == "rho_prime":
                    kwargs[key] = None if value == "auto" else int(value)
                elif key in ("gamma", "p", "delta", "link_density"):
                    kwargs[key] = Fraction(value)
                elif key in ("n_range", "cost_range"):
                    a, b = value.split(",")
                    kwargs[key] = (int(a), int(b))
                elif key == "algorithms":
                    kwargs[key] = tuple(v.strip() for v in value.split(",") if v.strip())
                elif key == "strong_lp":
                    kwargs[key] = value.lower() in ("1", "true", "yes")
                else:
                    raise ParseError(f"unknown config key {key!r}")
        if "WTAP_SEED" in os.environ:
            kwargs["seed"] = int(os.environ["WTAP_SEED"])
        return cls(**kwargs)


@dataclass
class TrialReport:
    instance_id: str
    n: int
    m: int
    costs: dict[str, Fraction] = field(default_factory=dict)
    opt: Optional[Fraction] = None
    lp_values: dict[str, Fraction] = field(default_factory=dict)
    feasible: dict[str, bool] = field(default_factory=dict)
    ratios_opt: dict[str, Fraction] = field(default_factory=dict)
    ratios_lp: dict[str, Fraction] = field(default_factory=dict)
    violations: list[str] = field(default_factory=list)
    errors: dict[str, str] = field(default_factory=dict)
    rng_streams: dict[str, int] = field(default_factory=dict)
    runtime_ms: dict[str, float] = field(default_factory=dict)

    def to_json_line(self) -> str:
        # runtimes are intentionally omitted: report bytes must be
        # reproducible from the config seed alone
        payload = {
            "instance_id": self.instance_id,
            "n": self.n,
            "m": self.m,
            "costs": {k: _frac_str(v) for k, v in sorted(self.costs.items())},
            "opt": _frac_str(self.opt) if self.opt is not None else None,
            "lp_values": {k: _frac_str(v) for k, v in sorted(self.lp_values.items())},
            "feasible": dict(sorted(self.feasible.items())),
            "ratios_opt": {k: _frac_str(v) for k, v in sorted(self.ratios_opt.items())},
            "ratios_lp": {k: _frac_str(v) for k, v in sorted(self.ratios_lp.items())},
            "violations": list(self.violations),
            "errors": dict(sorted(self.errors.items())),
            "rng_streams": dict(sorted(self.rng_streams.items())),
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def _uplink_restriction(inst: Instance) -> Instance:
    keep = [
        (inst.links[l].endpoints, inst.links[l].cost)
        for l in sorted(correlation.uplinks(inst))
    ]
    return core.build_instance(
        inst.n_vertices,
        [(inst.parent[v], v) for v in inst.real_edges()],
        keep,
    )


def run_trial(cfg: BenchConfig, trial: int) -> TrialReport:
    trial_seed = cfg.seed * 1_000_003 + trial
    rng = random.Random(f"wtap-bench:{trial_seed}")
    n = rng.randint(*cfg.n_range)
    inst = gen_random_instance(n, cfg.link_density, cfg.cost_range, trial_seed)
    report = TrialReport(
        instance_id=f"t{trial:05d}-s{trial_seed}",
        n=inst.n_vertices,
        m=len(inst.links),
        rng_streams={"trial": trial_seed},
    )

    def timed(name: str, fn: Callable):
        start = time.perf_counter()
        try:
            return fn()
        except WtapError as exc:
            report.errors[name] = f"{type(exc).__name__}: {exc}"
            return None
        finally:
            report.runtime_ms[name] = (time.perf_counter() - start) * 1000.0

    opt = None
    if "exact" in cfg.algorithms or len(inst.links) <= cfg.brute_cap:
        sol = timed("exact", lambda: brute_force_opt(inst, cap=cfg.brute_cap))
        if sol is not None:
            opt = sol.cost
            report.opt = opt
            if "exact" in cfg.algorithms:
                report.costs["exact"] = sol.cost
                report.feasible["exact"] = core.is_feasible(inst, sol.links)

    cut = timed("cut_lp", lambda: cut_lp(inst))
    if cut is not None:
        report.lp_values["cut"] = cut.objective_value
    oddcut_frac = timed("odd_cut_lp", lambda: odd_cut_lp(inst))
    if oddcut_frac is not None:
        report.lp_values["oddcut"] = oddcut_frac.objective_value
        if cut is not None and oddcut_frac.objective_value < cut.objective_value:
            report.violations.append("oddcut LP below cut LP")
    if cfg.strong_lp:
        strong = timed(
            "strong_lp", lambda: solve_strong_lp(inst, cfg.beta, cfg.rho)
        )
        if strong is not None:
            report.lp_values["strong"] = strong
            if oddcut_frac is not None and strong < oddcut_frac.objective_value:
                report.violations.append("strong LP below oddcut LP")
            if opt is not None and strong > opt:
                report.violations.append("strong LP above OPT")

    if "dp" in cfg.algorithms:
        def run_dp():
            sub = _uplink_restriction(inst)
            return uplink_dp_opt(sub)

        sol = timed("dp", run_dp)
        if sol is not None:
            report.costs["dp"] = sol.cost
            report.feasible["dp"] = True

    if "split2" in cfg.algorithms:
        sol = timed("split2", lambda: split_round_2approx(inst))
        if sol is not None:
            report.costs["split2"] = sol.cost
            report.feasible["split2"] = core.is_feasible(inst, sol.links)
            if cut is not None and sol.cost > 2 * cut.objective_value:
                report.violations.append("split2 exceeded 2x cut LP")

    needs_structured = any(
        a in cfg.algorithms for a in ("oddcut", "structured15", "full149")
    )
    structured_sol = None
    if needs_structured and oddcut_frac is not None:
        def solve_struct():
            v_cor = select_vcor(inst, oddcut_frac, cfg.delta)
            return solve_structured(inst, v_cor, cfg.rho_prime)

        structured_sol = timed("solve_structured", solve_struct)

    if structured_sol is not None:
        l_cor = correlation.correlated_links(inst, structured_sol.v_cor)
        z = structured_sol.z
        bound_oddcut = 2 * correlation.mass_cost(inst, z, l_cor) + correlation.mass_cost(
            inst, z, (l for l in z.values if l not in l_cor)
        )
        if "oddcut" in cfg.algorithms:
            sol = timed(
                "oddcut",
                lambda: odd_cut_rounding(inst, z, structured_sol.v_cor),
            )
            if sol is not None:
                report.costs["oddcut"] = sol.cost
                report.feasible["oddcut"] = core.is_feasible(inst, sol.links)
                if sol.cost > bound_oddcut:
                    report.violations.append("oddcut rounding exceeded its bound")
        if "structured15" in cfg.algorithms:
            run_rng = random.Random(f"wtap-run15:{trial_seed}")
            res = timed(
                "structured15",
                lambda: cleanup_mod.run_15_detailed(inst, structured_sol, run_rng),
            )
            if res is not None:
                report.costs["structured15"] = res.solution.cost
                report.feasible["structured15"] = core.is_feasible(
                    inst, res.solution.links
                )
        if "full149" in cfg.algorithms:
            run_rng = random.Random(f"wtap-run149:{trial_seed}")
            res = timed(
                "full149",
                lambda: cleanup_mod.run_149_detailed(
                    inst, structured_sol, run_rng, cfg.gamma, cfg.p
                ),
            )
            if res is not None:
                report.costs["full149"] = res.solution.cost
                report.feasible["full149"] = core.is_feasible(inst, res.solution.links)
                if (
                    res.pre_cleanup_cost is not None
                    and res.multiset_cost > res.pre_cleanup_cost
                ):
                    report.violations.append("cleanup increased the multiset cost")

    for name, cost in report.costs.items():
        if not report.feasible.get(name, False):
            report.violations.append(f"{name} produced an infeasible solution")
        if opt is not None and opt > 0:
            report.ratios_opt[name] = cost / opt
        if cut is not None and cut.objective_value > 0:
            report.ratios_lp[name] = cost / cut.objective_value
    return report


def summarize(reports: Sequence[TrialReport]) -> dict:
    algos = sorted({name for r in reports for name in r.costs})
    summary: dict = {"trials": len(reports), "violations": 0, "errors": 0, "mean_ratio_opt": {}}
    summary["violations"] = sum(len(r.violations) for r in reports)
    summary["errors"] = sum(len(r.errors) for r in reports)
    for a in algos:
        ratios = [r.ratios_opt[a] for r in reports if a in r.ratios_opt]
        if ratios:
            mean = sum(ratios, Fraction(0)) / len(ratios)
            summary["mean_ratio_opt"][a] = _frac_str(mean)
    return summary


def run_benchmark(
    cfg: BenchConfig, out: Optional[TextIO] = None
) -> tuple[list[TrialReport], dict]:
    reports = []
    for trial in range(cfg.trials):
        report = run_trial(cfg, trial)
        reports.append(report)
        if out is not None:
            out.write(report.to_json_line() + "\n")
    return reports, summarize(reports)
