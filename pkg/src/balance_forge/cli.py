"""Command-line entry point: solve, oracle, gap, bench, verify."""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from .drivers import (
    InvariantFailure, VariantConfig, binary_search_makespan, search_target, select_parameters,
    solve_bicriteria,
)
from .instances import GENERATORS, gen_random
from .lp import RelaxationSpec, build_relaxation, is_feasible, solve_lp
from .model import Infeasible, InputError, dumps, exact_mode, read_instance, to_number
from .oracle import CapExceeded, DEFAULT_CAP, oracle

EXIT_OK, EXIT_INFEASIBLE, EXIT_INPUT, EXIT_INVARIANT, EXIT_CAP = 0, 2, 3, 4, 5

SOLVE_FIELDS = ["variant", "T", "feasible", "lp_value", "makespan", "cost", "makespan_factor", "cost_factor"]
BENCH_FIELDS = ["seed", "vertices", "edges", "param", "T", "lp_value", "makespan", "cost", "makespan_ratio",
                "cost_ratio", "promised_makespan", "promised_cost", "oracle_makespan", "oracle_cost"]


def _emit_json(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=False, allow_nan=False) + "\n")


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return "inf" if math.isinf(x) else repr(x)
    return str(x)


def _config(args) -> VariantConfig:
    gamma = None if args.variant == "srgb" else args.gamma
    return VariantConfig(args.variant, gamma=gamma, beta=args.beta, c=args.c, k=args.lp_k)


# --- solve ----------------------------------------------------------------

def cmd_solve(args) -> int:
    exact = args.exact or exact_mode()
    try:
        inst = read_instance(args.input, exact=exact)
        cfg = _config(args)
    except (OSError, InputError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        if args.target is None:
            _, rep = binary_search_makespan(inst, cfg)
        else:
            T = to_number(args.target, exact)
            rep = solve_bicriteria(inst, T, cfg)
    except InvariantFailure as exc:
        print(f"invariant failure: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    if args.out == "csv":
        d = rep.to_dict()
        row = dict(d, makespan_factor=d["promised"]["makespan_factor"], cost_factor=d["promised"]["cost_factor"])
        buf = io.StringIO()
        w = csv.DictWriter(buf, SOLVE_FIELDS, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        w.writerow({k: _fmt(v) for k, v in row.items()})
        sys.stdout.write(buf.getvalue())
    else:
        _emit_json(rep.to_dict())
    if not rep.feasible and rep.reason:
        print(f"infeasible: {rep.reason}", file=sys.stderr)
    return EXIT_OK if rep.feasible else EXIT_INFEASIBLE


# --- oracle ---------------------------------------------------------------

def cmd_oracle(args) -> int:
    exact = args.exact or exact_mode()
    try:
        inst = read_instance(args.input, exact=exact)
        T = to_number(args.target, exact)
    except (OSError, InputError, ValueError, ZeroDivisionError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        res = oracle(inst, T, cap=args.cap)
    except CapExceeded as exc:
        print(f"cap exceeded: {exc.product} orientations (cap {exc.cap})", file=sys.stderr)
        return EXIT_CAP
    _emit_json(res.to_dict())
    return EXIT_OK


# --- gap ------------------------------------------------------------------

def _parse_params(items: list[str]) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise InputError(f"parameter {item!r} is not key=value")
        key, val = item.split("=", 1)
        key = key.strip().replace("-", "_")
        if key == "k":
            out[key] = int(val)
        elif val.lower() in ("true", "false"):
            out[key] = val.lower() == "true"
        else:
            out[key] = Fraction(val)
    return out


def _ratio(num, den) -> float | None:
    num, den = float(num), float(den)
    if den == 0:
        return None if num else 1.0
    return num / den


def certify_gap(name: str, inst, params: dict) -> dict:
    """Run relaxation, rounding and oracle on a generated instance and compare with the predictions."""
    f = lambda key, default=None: float(params.get(key, default))  # noqa: E731
    if name in ("tightness-a", "tightness-b"):
        alpha, eps = f("alpha"), f("epsilon")
        rep = solve_bicriteria(inst, 1, VariantConfig("gb", gamma=(alpha - 0.5) / 2), certify=False)
        if not rep.feasible:
            raise Infeasible(rep.reason or "relaxation infeasible at target 1")
        predicted = 1.5 + 0.5 * alpha - 0.5 * eps if name == "tightness-a" else 2.5 - alpha - eps
        return {"lp_value": rep.lp_value, "makespan": float(rep.makespan), "cost": float(rep.cost),
                "predicted_makespan": predicted, "cost_ratio": _ratio(rep.cost, rep.lp_value),
                "predicted_cost_ratio": 1 / alpha}
    if name == "lb-cost":
        g, eps, k = f("gamma"), f("epsilon"), int(params.get("k", 3))
        lp = solve_lp(build_relaxation(inst, RelaxationSpec(k))).objective_value
        res = oracle(inst, 1.75 + g)
        return {"lp_value": lp, "cost_at_target": res.to_dict()["cost_at_target"],
                "cost_ratio": _ratio(res.cost_at_target, lp), "predicted_cost_ratio": 1 / (0.75 + g + 2 * eps)}
    if name == "gbu-paths":
        eps, k = f("epsilon"), int(params.get("k", 3))
        feasible = is_feasible(build_relaxation(inst, RelaxationSpec(k)))
        res = oracle(inst, math.inf, cap=10**8, with_cost=False)
        return {"lp_feasible": feasible, "min_makespan": float(res.min_makespan),
                "predicted_min_makespan_at_least": 11 / 6 - 6 * eps}
    if name == "gbu-cycle":
        g, k = f("gamma"), int(params.get("k", 3))
        lp = solve_lp(build_relaxation(inst, RelaxationSpec(k))).objective_value
        res = oracle(inst, 1.75 + g, cap=10**8)
        gp = inst.meta["gamma_prime"]
        return {"lp_value": lp, "predicted_lp_value": 2 * gp + 0.5,
                "cost_at_target": res.to_dict()["cost_at_target"],
                "cost_ratio": _ratio(res.cost_at_target, lp), "predicted_cost_ratio": 1 / (2 * gp + 0.5)}
    raise InputError(f"unknown instance {name!r}")


def cmd_gap(args) -> int:
    exact = args.exact or exact_mode()
    try:
        params = _parse_params(args.params)
        inst = GENERATORS[args.name](**params, exact=exact)
    except (InputError, ValueError, TypeError, ZeroDivisionError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = dumps(inst, indent=1) + "\n"
    if args.emit:
        with open(args.emit, "w", encoding="utf-8") as fh:
            fh.write(text)
    elif not args.certify:
        sys.stdout.write(text)
    if args.certify:
        try:
            _emit_json({"name": args.name, **certify_gap(args.name, inst, params)})
        except Infeasible as exc:
            print(f"infeasible: {exc}", file=sys.stderr)
            return EXIT_INFEASIBLE
    return EXIT_OK


# --- bench ----------------------------------------------------------------

def _parse_sizes(text: str) -> list[tuple[int, int]]:
    out = []
    for part in text.split(","):
        nv, ne = part.lower().split("x")
        out.append((int(nv), int(ne)))
    return out


def _grid(args) -> list[float]:
    raw = args.cs if args.variant == "srgb" else args.gammas
    return [float(Fraction(x)) for x in raw.split(",")]


def _bench_row(task) -> dict:
    variant, family, beta, seed, nv, ne, value, with_oracle, cap = task
    if variant == "srgb":
        cfg = VariantConfig("srgb", c=value)
        inst = gen_random("srgb", seed, nv, ne, c=value)
    else:
        cfg = VariantConfig(variant, gamma=value, beta=beta)
        inst = gen_random(family, seed, nv, ne, beta=beta if beta is not None else 0.5)
    params = select_parameters(cfg)
    T = search_target(inst, params.k, floor=1.0 if variant == "gbu" else None)
    rep = solve_bicriteria(inst, T, cfg, certify=False)
    row = {"seed": seed, "vertices": nv, "edges": ne, "param": value, "T": T,
           "promised_makespan": params.makespan_factor, "promised_cost": params.cost_factor}
    if rep.feasible:
        row.update(lp_value=rep.lp_value, makespan=float(rep.makespan), cost=float(rep.cost),
                   makespan_ratio=float(rep.makespan) / T, cost_ratio=_ratio(rep.cost, rep.lp_value))
    if with_oracle:
        try:
            res = oracle(inst, T, cap=cap)
            row.update(oracle_makespan=float(res.min_makespan), oracle_cost=float(res.cost_at_target))
        except CapExceeded:
            pass
    return row


def cmd_bench(args) -> int:
    try:
        sizes = _parse_sizes(args.sizes)
        grid = _grid(args)
    except ValueError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    family = {"gb": "gb", "gbuh": "gbuh", "gbu": "gbuh", "srgb": "srgb"}[args.variant]
    tasks = [(args.variant, family, args.beta, args.seed + s, nv, ne, value, args.oracle, args.cap)
             for (nv, ne) in sizes for s in range(args.seeds) for value in grid]
    try:
        if args.jobs > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                rows = list(pool.map(_bench_row, tasks, chunksize=4))
        else:
            rows = [_bench_row(t) for t in tasks]
    except ValueError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    buf = io.StringIO()
    w = csv.DictWriter(buf, BENCH_FIELDS, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: _fmt(row.get(k)) for k in BENCH_FIELDS})
    if args.out in (None, "-"):
        sys.stdout.write(buf.getvalue())
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    return EXIT_OK


# --- verify ---------------------------------------------------------------

def cmd_verify(args) -> int:
    from .checks import run_all
    results = run_all(print)
    failed = [r.name for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} passed")
    return EXIT_OK if not failed else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="balance-forge", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def variant_args(p, grid: bool = False):
        p.add_argument("--variant", choices=["gb", "gbuh", "gbu", "srgb"], default="gb")
        if not grid:
            p.add_argument("--gamma", type=float, default=0.25)
            p.add_argument("--c", type=float)
        p.add_argument("--beta", type=float)

    p = sub.add_parser("solve", help="solve one instance at a target makespan")
    variant_args(p)
    p.add_argument("--target", help="target makespan; searched when omitted")
    p.add_argument("--input", required=True)
    p.add_argument("--lp-k", type=int, dest="lp_k")
    p.add_argument("--out", choices=["json", "csv"], default="json")
    p.add_argument("--exact", action="store_true", help="rational arithmetic for instance data")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="exhaustive minimum makespan and C(T)")
    p.add_argument("--input", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--exact", action="store_true")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gap", help="generate a gap instance and optionally certify it")
    p.add_argument("--name", required=True, choices=sorted(GENERATORS))
    p.add_argument("--params", nargs="*", default=[], metavar="KEY=VALUE")
    p.add_argument("--emit", metavar="FILE")
    p.add_argument("--certify", action="store_true")
    p.add_argument("--exact", action="store_true")
    p.set_defaults(func=cmd_gap)

    p = sub.add_parser("bench", help="seeded sweep, one CSV row per (size, seed, grid value)")
    variant_args(p, grid=True)
    p.add_argument("--gammas", default="0.07,1/12,0.15,0.25")
    p.add_argument("--cs", default="1,2,5,10")
    p.add_argument("--seeds", type=int, default=10)
    p.add_argument("--seed", type=int, default=0, help="first seed")
    p.add_argument("--sizes", default="5x8")
    p.add_argument("--oracle", action="store_true", help="add oracle columns")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", help="CSV path, stdout when omitted")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("verify", help="run the acceptance checks")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
