"""Command-line front end: gen, solve, lp, check, bench."""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import cleanup as cleanup_mod
from . import core, correlation
from .classic_round import odd_cut_rounding, split_round_2approx
from .errors import WtapError
from .exact import brute_force_opt, uplink_dp_opt
from .harness import (
    BenchConfig,
    gen_random_instance,
    parse_instance,
    run_benchmark,
    serialize_instance,
)
from .lp import cut_lp, dump_lp, odd_cut_lp
from .structured import build_structured_lp, select_vcor, solve_structured
from .strong import build_strong_lp, solve_strong_lp


def _load(path: str) -> core.Instance:
    with open(path) as fh:
        return parse_instance(fh.read())


def _cmd_gen(args) -> int:
    inst = gen_random_instance(
        args.n, Fraction(args.density), (args.cost_min, args.cost_max), args.seed
    )
    sys.stdout.write(serialize_instance(inst))
    return 0


def _solve_structured_pipeline(inst, args):
    x0 = odd_cut_lp(inst)
    v_cor = select_vcor(inst, x0, Fraction(args.delta))
    rho_prime = None if args.rho_prime == "auto" else int(args.rho_prime)
    return solve_structured(inst, v_cor, rho_prime)


def _cmd_solve(args) -> int:
    inst = _load(args.infile)
    rng = random.Random(f"wtap-cli:{args.seed}")
    if args.algo == "exact":
        sol = brute_force_opt(inst)
    elif args.algo == "dp":
        sol = uplink_dp_opt(inst)
    elif args.algo == "split2":
        sol = split_round_2approx(inst)
    elif args.algo == "oddcut":
        ssol = _solve_structured_pipeline(inst, args)
        sol = odd_cut_rounding(inst, ssol.z, ssol.v_cor)
    elif args.algo == "structured15":
        ssol = _solve_structured_pipeline(inst, args)
        sol = cleanup_mod.run_15(inst, ssol, rng)
    elif args.algo == "full149":
        ssol = _solve_structured_pipeline(inst, args)
        sol = cleanup_mod.run_149(
            inst, ssol, rng, Fraction(args.gamma), Fraction(args.p)
        )
    else:
        raise SystemExit(f"unknown algorithm {args.algo}")
    print(f"cost {sol.cost}")
    print("links " + " ".join(map(str, sorted(sol.links))))
    return 0


def _cmd_lp(args) -> int:
    inst = _load(args.infile)
    if args.which == "cut":
        sol = cut_lp(inst)
        value = sol.objective_value
    elif args.which == "oddcut":
        sol = odd_cut_lp(inst)
        value = sol.objective_value
    elif args.which == "structured":
        ssol = _solve_structured_pipeline(inst, args)
        value = ssol.z.objective_value
        if args.dump:
            rho_prime = ssol.rho_prime
            sys.stdout.write(
                dump_lp(build_structured_lp(inst, ssol.v_cor, rho_prime))
            )
    elif args.which == "strong":
        value = solve_strong_lp(inst, args.beta, args.rho)
        if args.dump_strong_lp or args.dump:
            lp, _ = build_strong_lp(inst, args.beta, args.rho)
            sys.stdout.write(dump_lp(lp))
    else:
        raise SystemExit(f"unknown relaxation {args.which}")
    if args.dump and args.which in ("cut", "oddcut"):
        from .lp import _link_lp_skeleton

        lp = _link_lp_skeleton(inst)
        for e in inst.real_edges():
            lp.add({l: Fraction(1) for l in inst.cover[e]}, ">=", Fraction(1))
        sys.stdout.write(dump_lp(lp))
    print(f"value {value}")
    return 0


def _cmd_check(args) -> int:
    inst = _load(args.infile)
    with open(args.links) as fh:
        tokens = fh.read().split()
    links = [int(t) for t in tokens if t.lstrip("-").isdigit()]
    feasible = core.is_feasible(inst, links)
    cost = inst.cost_of(set(links))
    print(f"feasible {str(feasible).lower()}")
    print(f"cost {cost}")
    return 0 if feasible else 1


def _cmd_bench(args) -> int:
    cfg = BenchConfig.from_file(args.config)
    with open(args.out, "w") as out:
        reports, summary = run_benchmark(cfg, out)
    print(json.dumps(summary, sort_keys=True))
    return 0 if summary["violations"] == 0 else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="wtap")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--density", default="1/3")
    p.add_argument("--cost-min", type=int, default=1)
    p.add_argument("--cost-max", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_gen)

    p = sub.add_parser("solve", help="solve an instance file")
    p.add_argument("--algo", required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--delta", default="1/4")
    p.add_argument("--rho-prime", dest="rho_prime", default="auto")
    p.add_argument("--gamma", default="3/20")
    p.add_argument("--p", default="25/53")
    p.set_defaults(fn=_cmd_solve)

    p = sub.add_parser("lp", help="solve a relaxation")
    p.add_argument("--which", choices=("cut", "oddcut", "structured", "strong"), required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--beta", type=int, default=1)
    p.add_argument("--rho", type=int, default=2)
    p.add_argument("--delta", default="1/4")
    p.add_argument("--rho-prime", dest="rho_prime", default="auto")
    p.add_argument("--dump", action="store_true", help="emit the LP in interchange format")
    p.add_argument("--dump-strong-lp", action="store_true")
    p.set_defaults(fn=_cmd_lp)

    p = sub.add_parser("check", help="verify a link set against an instance")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--links", required=True)
    p.set_defaults(fn=_cmd_check)

    p = sub.add_parser("bench", help="run a benchmark config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default="bench.jsonl")
    p.set_defaults(fn=_cmd_bench)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except WtapError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
