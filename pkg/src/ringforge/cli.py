"""Command-line front end: generation, solving, validation, decomposition.

Exit codes: 0 ok, 1 validation failure, 2 parse error, 3 budget/infeasible.
Instances are the `wrap` format (or `cactus`, unfolded on load); reports are
JSON with schema 1 and are bit-reproducible under a fixed seed and config.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .errors import BudgetExceededError, FormatError, InfeasibleInstanceError
from .model import (
    RootedRingInstance,
    is_feasible,
    is_wrap_solution,
    load_instance,
    load_solution,
    make_instance,
    save_instance,
    save_solution,
)
from .directed import make_non_shortenable, min_cost_directed_solution, verify_structure
from .dropcalc import drop_by_characterization
from .component_dp import find_best_drop_component, uniform_overlay
from .thinness import is_alpha_thin
from .decomposition import decompose
from .oracle import OracleBudget, exact_opt
from .solvers import local_search, relative_greedy, two_approx

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_PARSE = 2
EXIT_BUDGET = 3


def gen(n: int, m: int, max_cost: int, seed: int, retries: int = 1000) -> RootedRingInstance:
    """Seeded random feasible instance: m distinct-endpoint links, costs <= max_cost."""
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    rng = random.Random(seed)
    for _ in range(retries):
        links = []
        costs = []
        for _ in range(m):
            u = rng.randrange(n)
            v = rng.randrange(n)
            while v == u:
                v = rng.randrange(n)
            links.append((min(u, v), max(u, v)))
            costs.append(rng.randint(0, max_cost))
        inst = make_instance(n, links, costs)
        if is_feasible(inst):
            return inst
    raise InfeasibleInstanceError(f"no feasible instance after {retries} draws")


def _read_instance(path: str) -> RootedRingInstance:
    text = Path(path).read_text()
    for line in text.splitlines():
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if stripped.startswith("cactus"):
            from .reduction import load_cactus, unfold_cactus

            return unfold_cactus(load_cactus(text))[0]
        break
    return load_instance(text)


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _cmd_gen(args) -> int:
    inst = gen(args.n, args.m, args.max_cost, args.seed)
    _write(args.out, save_instance(inst))
    return EXIT_OK


def _cmd_solve(args) -> int:
    inst = _read_instance(args.infile)
    started = time.perf_counter()
    if args.algo == "two-approx":
        report = two_approx(inst)
    elif args.algo == "greedy":
        report = relative_greedy(inst, Fraction(args.eps))
    elif args.algo == "local":
        report = local_search(inst, Fraction(args.eps))
    else:
        ids, cost = exact_opt(inst, OracleBudget.from_env())
        from .solvers import SolveReport

        report = SolveReport("exact", tuple(sorted(ids)), cost)
    elapsed = time.perf_counter() - started
    if not is_wrap_solution(inst, report.solution):
        print("internal error: solver emitted an infeasible solution", file=sys.stderr)
        return EXIT_INVALID
    payload = report.to_dict()
    payload["wall_time"] = round(elapsed, 6)
    if args.opt:
        opt_ids, opt_cost = exact_opt(inst, OracleBudget.from_env())
        payload["opt"] = opt_cost
        payload["ratio"] = str(Fraction(report.cost, opt_cost)) if opt_cost else None
    if args.out:
        _write(args.out, save_solution(report.solution))
    if args.trace:
        trace = [
            {
                "component": list(rec.component),
                "component_cost": rec.component_cost,
                "drop_cost": rec.drop_cost,
                "phi2": rec.phi2,
                "ratio": str(rec.ratio) if rec.ratio is not None else None,
            }
            for rec in report.history
        ]
        _write(args.trace, json.dumps(trace, indent=2) + "\n")
    print(json.dumps(payload, indent=2))
    return EXIT_OK


def _cmd_validate(args) -> int:
    inst = _read_instance(args.infile)
    ids = load_solution(Path(args.solution).read_text())
    if any(not 0 <= i < len(inst.links) for i in ids):
        print("solution references unknown link ids", file=sys.stderr)
        return EXIT_INVALID
    if is_wrap_solution(inst, ids):
        print(json.dumps({"schema": 1, "valid": True, "cost": inst.cost_of(set(ids))}))
        return EXIT_OK
    print(json.dumps({"schema": 1, "valid": False}))
    return EXIT_INVALID


def _cmd_verify_structure(args) -> int:
    inst = _read_instance(args.infile)
    directed = make_non_shortenable(inst, min_cost_directed_solution(inst))
    report = verify_structure(inst, directed)
    print(
        json.dumps(
            {
                "schema": 1,
                "links": [[dl.tail, dl.head, dl.origin] for dl in directed],
                "arborescence": report.arborescence_ok,
                "planar": report.planar_ok,
                "directions": report.directions_ok,
                "detail": report.detail,
            },
            indent=2,
        )
    )
    return EXIT_OK if report.ok else EXIT_INVALID


def _cmd_component(args) -> int:
    inst = _read_instance(args.infile)
    base = make_non_shortenable(inst, min_cost_directed_solution(inst))
    if args.ctilde == "uniform":
        overlay = uniform_overlay(base)
    else:
        by_head = {}
        for lineno, line in enumerate(Path(args.ctilde).read_text().splitlines(), start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                head, value = line.split()
                by_head[int(head)] = int(value)
            except ValueError:
                raise FormatError(f"expected '<head> <value>', got {line!r}", lineno) from None
        overlay = {dl: by_head.get(dl.head, 0) for dl in base}
    component, value = find_best_drop_component(inst, base, overlay, args.alpha)
    dropped = drop_by_characterization(inst, base, component)
    _, family = is_alpha_thin(inst, component, args.alpha)
    print(
        json.dumps(
            {
                "schema": 1,
                "component": sorted(component),
                "value": value,
                "drop": sorted([dl.tail, dl.head, dl.origin] for dl in dropped),
                "witness_family": sorted([c.lo, c.hi] for c in family.cuts) if family else None,
            },
            indent=2,
        )
    )
    return EXIT_OK


def _cmd_decompose(args) -> int:
    inst = _read_instance(args.infile)
    ids = load_solution(Path(args.solution).read_text())
    base = make_non_shortenable(inst, min_cost_directed_solution(inst))
    result = decompose(inst, ids, base, Fraction(args.eps))
    print(
        json.dumps(
            {
                "schema": 1,
                "alpha": result.alpha,
                "components": [list(c) for c in result.components],
                "reserve": [[dl.tail, dl.head, dl.origin] for dl in result.reserve],
                "dependency_arcs": [
                    {"from": list(result.graph.festoons[a].links),
                     "to": list(result.graph.festoons[b].links),
                     "owner": owner,
                     "label": label}
                    for a, b, owner, label in result.labels
                ],
                "checks": "all decomposition postconditions verified",
            },
            indent=2,
        )
    )
    return EXIT_OK


def _cmd_exact(args) -> int:
    inst = _read_instance(args.infile)
    ids, cost = exact_opt(inst, OracleBudget.from_env())
    if args.out:
        _write(args.out, save_solution(ids))
    print(json.dumps({"schema": 1, "algorithm": "exact", "cost": cost, "solution": sorted(ids)}))
    return EXIT_OK


def _cmd_bench(args) -> int:
    lo, _, hi = args.seeds.partition("..")
    seeds = range(int(lo), int(hi) + 1) if hi else [int(lo)]
    rows = ["seed,n,m,opt,two_approx,greedy,local,greedy_ratio,local_ratio,greedy_iters,local_iters"]
    for seed in seeds:
        inst = gen(args.n, args.m, args.max_cost, seed)
        _, opt_cost = exact_opt(inst, OracleBudget.from_env())
        two = two_approx(inst)
        greedy = relative_greedy(inst, Fraction(args.eps))
        local = local_search(inst, min(Fraction(args.eps), Fraction(1, 2)))
        g_ratio = str(Fraction(greedy.cost, opt_cost)) if opt_cost else ""
        l_ratio = str(Fraction(local.cost, opt_cost)) if opt_cost else ""
        rows.append(
            f"{seed},{inst.n},{len(inst.links)},{opt_cost},{two.cost},{greedy.cost},"
            f"{local.cost},{g_ratio},{l_ratio},{greedy.iterations},{local.iterations}"
        )
    _write(args.out, "\n".join(rows) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ringforge", description=__doc__)
    parser.add_argument("--version", action="version", version=f"ringforge {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a feasible random instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--max-cost", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("solve", help="run a solver on an instance file")
    p.add_argument("--algo", choices=["two-approx", "greedy", "local", "exact"], required=True)
    p.add_argument("--eps", default="0.25")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--trace", default=None)
    p.add_argument("--opt", action="store_true", help="also report the exact optimum")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("exact", help="brute-force optimum within the oracle budget")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_exact)

    p = sub.add_parser("validate", help="check a solution file against an instance")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--solution", required=True)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("verify-structure", help="structure checks on the 2-approx pipeline")
    p.add_argument("--in", dest="infile", required=True)
    p.set_defaults(func=_cmd_verify_structure)

    p = sub.add_parser("component", help="best drop component for an overlay")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--alpha", type=int, required=True)
    p.add_argument("--ctilde", default="uniform", help="'uniform' or a '<head> <value>' file")
    p.set_defaults(func=_cmd_component)

    p = sub.add_parser("decompose", help="thin decomposition of a solution, fully checked")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--solution", required=True)
    p.add_argument("--eps", default="0.5")
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("bench", help="compare solvers against the oracle over seeds")
    p.add_argument("--seeds", default="1..10", help="range like 1..100 or a single seed")
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--m", type=int, default=6)
    p.add_argument("--max-cost", type=int, default=8)
    p.add_argument("--eps", default="0.25")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (BudgetExceededError, InfeasibleInstanceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
