"""Executable acceptance checks shared by the test suite and `balance-forge verify`."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .drivers import (
    BETA_GBU_MIN, EPS_MAX, GB, GBU, GBUH, SRGB, cubic_root, gap_reduction,
    search_target, select_parameters, solve_bicriteria, srgb_b, srgb_load_terms, srgb_poly,
)
from .instances import gen_gbu_cycle, gen_gbu_paths, gen_lb_cost, gen_random, gen_tightness_a, gen_tightness_b
from .lp import RelaxationSpec, build_relaxation, is_feasible, solve_lp
from .model import Infeasible, Instance, evaluate, scale_to_target
from .oracle import oracle
from .rounding import st_round
from .thresholds import StepHalf, TwoStep

TOL = 1e-6
GB_GAMMAS = (0.07, 1 / 12, 0.15, 0.25)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail} ({self.seconds:.1f}s)"


@dataclass
class SoundnessRecord:
    label: str
    lp_values: dict  # k -> objective, or None when that relaxation is infeasible
    c_of_t: float


@dataclass
class Context:
    """Collects (LP value, C(T)) pairs seen by the other checks for the soundness check."""

    records: list[SoundnessRecord] = field(default_factory=list)

    def record(self, label: str, scaled: Instance | None, c_of_t: float, known: dict | None = None,
               ks=(0, 3)) -> None:
        values = dict(known or {})
        for k in ks:
            if k in values:
                continue
            if scaled is None:
                values[k] = None
                continue
            try:
                values[k] = solve_lp(build_relaxation(scaled, RelaxationSpec(k))).objective_value
            except Infeasible:
                values[k] = None
        self.records.append(SoundnessRecord(label, values, c_of_t))


def _scaled(instance: Instance, T) -> Instance | None:
    try:
        return scale_to_target(instance, T).instance
    except Infeasible:
        return None


def _gb_sizes(seed: int) -> tuple[int, int]:
    return 3 + seed % 4, 4 + seed % 7


def check_gb_sweep(ctx: Context, n: int = 200) -> tuple[bool, str]:
    worst_ms = worst_cost = -math.inf
    solves = 0
    for seed in range(n):
        nv, ne = _gb_sizes(seed)
        inst = gen_random("gb", seed, n_vertices=nv, n_edges=ne)
        targets: dict[int, float] = {}
        costs: dict[float, float] = {}
        for g in GB_GAMMAS:
            params = select_parameters(GB(g))
            if params.k not in targets:
                T = search_target(inst, params.k)
                targets[params.k] = T
                res = oracle(inst, T)
                costs[T] = res.cost_at_target
                ctx.record(f"gb seed={seed} T={T:.6g}", _scaled(inst, T), res.cost_at_target)
            T = targets[params.k]
            rep = solve_bicriteria(inst, T, GB(g))
            if not rep.feasible:
                continue
            solves += 1
            worst_ms = max(worst_ms, float(rep.makespan) - params.makespan_factor * T)
            worst_cost = max(worst_cost, float(rep.cost) - costs[T] * params.cost_factor)
    ok = worst_ms <= TOL and worst_cost <= TOL
    return ok, f"{solves} solves, worst makespan excess {worst_ms:.2e}, worst cost excess {worst_cost:.2e}"


def check_tightness(ctx: Context) -> tuple[bool, str]:
    eps = Fraction(1, 1000)
    bad = []
    for alpha in (Fraction(2, 3), Fraction(3, 4), Fraction(9, 10)):
        gamma = float((alpha - Fraction(1, 2)) / 2)
        inst = gen_tightness_a(alpha, eps, exact=True)
        rep = solve_bicriteria(inst, 1, GB(gamma), certify=False)
        want = Fraction(3, 2) + alpha / 2 - eps / 2
        if not (rep.feasible and abs(rep.makespan - want) <= 1e-9 and rep.cost == 1
                and rep.lp_value <= float(alpha + 2 * eps) + 1e-9):
            bad.append(f"a alpha={alpha}: makespan {rep.makespan} cost {rep.cost}")
        ctx.record(f"tightness-a {alpha}", inst, oracle(inst, 1).cost_at_target, {0: rep.lp_value})

        inst = gen_tightness_b(alpha, eps, exact=True)
        rep = solve_bicriteria(inst, 1, GB(gamma), certify=False)
        # measured: the orientation sending both edges to u
        to_u = {e.id: ("u" if e.arity == 2 else e.endpoints[0].v) for e in inst.edges}
        measured = evaluate(inst, to_u).makespan
        if not (rep.feasible and abs(float(rep.makespan) - float(measured)) <= 1e-6
                and measured == Fraction(5, 2) - alpha - eps and rep.cost == 1):
            bad.append(f"b alpha={alpha}: makespan {rep.makespan} vs {measured} cost {rep.cost}")
        ctx.record(f"tightness-b {alpha}", inst, oracle(inst, 1).cost_at_target, {0: rep.lp_value})
    return not bad, "; ".join(bad) or "3 alphas, both instances reproduce makespan and unit cost"


def check_lower_bound(ctx: Context) -> tuple[bool, str]:
    eps = 0.01
    bad = []
    for g in (0.0, 0.1, 0.2):
        inst = gen_lb_cost(g, eps, k=3)
        lp = solve_lp(build_relaxation(inst, RelaxationSpec(3))).objective_value
        res = oracle(inst, 1.75 + g)
        if abs(lp - (0.75 + g + 2 * eps)) > 1e-9 or not res.cost_at_target >= 1:
            bad.append(f"gamma={g}: lp {lp:.12g}, C {res.cost_at_target}")
        ctx.record(f"lb-cost {g}", inst, oracle(inst, 1).cost_at_target, {3: lp})
    return not bad, "; ".join(bad) or "lp = 0.75+gamma+2eps and C(1.75+gamma) >= 1 for 3 gammas"


def check_continuity(ctx: Context) -> tuple[bool, str]:
    g = 1 / 12
    half = StepHalf(2 * g + 0.5)
    two = TwoStep(max(1 / 6 - 2 * g, 0.0))
    step_factors = (1.75 + g, 1 / half.infimum)
    two_factors = (1.75 + g, 1 / two.infimum)
    ok = all(abs(a - b) <= 1e-12 for a, b in zip(step_factors, two_factors))
    ok &= abs(step_factors[0] - 11 / 6) <= 1e-12 and abs(step_factors[1] - 1.5) <= 1e-12
    g2 = 1 / 12 - (math.sqrt(33) / 4 - 17 / 12) / 2
    p = select_parameters(GB(g2))
    eps = p.values["epsilon"]
    ok &= eps <= EPS_MAX and isinstance(p.threshold, TwoStep)
    ok &= abs(p.cost_factor - 1 / (2 * g2 + 0.5)) <= 1e-12
    return ok, f"factors at 1/12 {step_factors} vs {two_factors}; eps={eps:.6g} <= {EPS_MAX:.6g}"


def check_srgb(ctx: Context, n: int = 100) -> tuple[bool, str]:
    a = cubic_root(1)
    b = srgb_b(a, 1)
    ok = abs(a - 2 / 3) <= 1e-9 and abs(b - 1 / 3) <= 1e-9
    ok &= all(abs(t - 11 / 6) <= 1e-9 for t in srgb_load_terms(a, b, 1))
    cs = (2, 5, 10, 10**4)
    worst = -math.inf
    for c in cs:
        a = cubic_root(c)
        ok &= abs(srgb_poly(a, c)) <= 1e-10 and 0.5 <= a <= 1 - 1 / (4 * c)
    for seed in range(n):
        c = cs[seed % len(cs)]
        cfg = SRGB(c)
        p = select_parameters(cfg)
        inst = gen_random("srgb", seed, n_vertices=3 + seed % 3, n_edges=4 + seed % 5, c=c)
        T = search_target(inst, p.k)
        rep = solve_bicriteria(inst, T, cfg)
        a = p.values["a"]
        worst = max(worst, float(rep.makespan) - (1.5 + 0.5 * a) * T, float(rep.cost) - rep.lp_value / a)
        ctx.record(f"srgb seed={seed}", _scaled(inst, T), oracle(inst, T).cost_at_target, {3: rep.lp_value})
    ok &= worst <= TOL
    return ok, f"a(1)={cubic_root(1):.12f}, {n} instances, worst excess {worst:.2e}"


def check_gbuh(ctx: Context, n: int = 100) -> tuple[bool, str]:
    worst = -math.inf
    for seed in range(n):
        beta = (0.3, 0.5, 0.7)[seed % 3]
        g = max(1 / 12, beta / 3 - 1 / 12)
        cfg = GBUH(beta, g)
        inst = gen_random("gbuh", seed, n_vertices=4 + seed % 2, n_edges=5 + seed % 3, beta=beta)
        T = search_target(inst, select_parameters(cfg).k)
        rep = solve_bicriteria(inst, T, cfg)
        c_t = oracle(inst, T).cost_at_target
        worst = max(worst, float(rep.makespan) - (1.75 + g) * T, float(rep.cost) - c_t / (2 * g + 0.5))
        ctx.record(f"gbuh seed={seed}", _scaled(inst, T), c_t, {0: rep.lp_value})
    return worst <= TOL, f"{n} instances, worst excess {worst:.2e}"


def check_gbu_paths(ctx: Context) -> tuple[bool, str]:
    parts = []
    ok = True
    for eps in (Fraction(1, 4), Fraction(1, 3)):
        inst = gen_gbu_paths(eps, k=3)
        feasible = is_feasible(build_relaxation(inst, RelaxationSpec(3)))
        res = oracle(inst, 1, cap=10**8)
        bound = 11 / 6 - 6 * float(eps) - 1e-9
        ok &= feasible and res.min_makespan >= bound
        parts.append(f"eps={eps}: LP_3 feasible={feasible}, min makespan {res.min_makespan:.6g} >= {bound:.6g}")
        ctx.record(f"gbu-paths {eps}", inst, res.cost_at_target)
    return ok, "; ".join(parts)


def check_gbu_cycle(ctx: Context) -> tuple[bool, str]:
    g = 1 / 12
    inst = gen_gbu_cycle(g, 0.2, k=3)
    lp = solve_lp(build_relaxation(inst, RelaxationSpec(3))).objective_value
    want = 2 * inst.meta["gamma_prime"] + 0.5
    res = oracle(inst, 1.75 + g, cap=10**8)
    ok = abs(lp - want) <= 1e-9 and res.cost_at_target == 1
    ctx.record("gbu-cycle", inst, oracle(inst, 1, cap=10**8).cost_at_target, {3: lp})
    return ok, f"lp {lp:.12g} vs 2g'+0.5 = {want:.12g}; C(1.75+gamma) = {res.cost_at_target}"


def check_st_baseline(ctx: Context, n: int = 200) -> tuple[bool, str]:
    worst_ms = worst_cost = -math.inf
    for seed in range(n):
        inst = gen_random("gap", seed, n_vertices=3 + seed % 2, n_edges=4 + seed % 3)
        T = search_target(inst, 0)
        scaled = scale_to_target(inst, T).instance
        sol = solve_lp(build_relaxation(scaled, RelaxationSpec(0)))
        ev = evaluate(inst, st_round(scaled, sol))
        worst_ms = max(worst_ms, float(ev.makespan) - 2 * T)
        worst_cost = max(worst_cost, float(ev.total_cost) - sol.objective_value)
        ctx.record(f"gap seed={seed}", scaled, oracle(inst, T).cost_at_target, {0: sol.objective_value})
    ok = worst_ms <= TOL and worst_cost <= 1e-9
    return ok, f"{n} instances, worst makespan excess {worst_ms:.2e}, worst cost excess {worst_cost:.2e}"


def check_soundness(ctx: Context) -> tuple[bool, str]:
    bad = []
    for r in ctx.records:
        for k, val in r.lp_values.items():
            if val is not None and val > r.c_of_t + 1e-9:
                bad.append(f"{r.label} k={k}: lp {val:.9g} > C {r.c_of_t:.9g}")
            if val is None and math.isfinite(r.c_of_t):
                bad.append(f"{r.label} k={k}: relaxation infeasible but C finite")
        v0, v3 = r.lp_values.get(0), r.lp_values.get(3)
        if 3 in r.lp_values and 0 in r.lp_values and v3 is not None and v0 is None:
            bad.append(f"{r.label}: LP_3 feasible but LP infeasible")
    return not bad, "; ".join(bad[:3]) or f"{len(ctx.records)} instances consistent"


def check_gap_reduction(ctx: Context, n: int = 20) -> tuple[bool, str]:
    beta, eps = 0.5, 0.01
    b = max(beta, BETA_GBU_MIN)
    cfg = GBU(b, max(1 / 12, b / 3 - 1 / 12))
    worst = -math.inf
    for seed in range(n):
        inst = gen_random("gap", 1000 + seed, n_vertices=2 + seed % 2, n_edges=3 + seed % 3)
        opt = oracle(inst, math.inf).min_makespan
        res = gap_reduction(inst, beta, eps, cfg)
        worst = max(worst, res.makespan - (1.75 + cfg.gamma) * (opt + eps))
    return worst <= TOL, f"{n} instances, worst excess over (1.75+gamma)(OPT+eps) {worst:.2e}"


CHECKS: list[tuple[str, Callable[[Context], tuple[bool, str]]]] = [
    ("1 gb-guarantee-sweep", check_gb_sweep),
    ("2 tightness", check_tightness),
    ("3 cost-lower-bound", check_lower_bound),
    ("4 curve-continuity", check_continuity),
    ("5 srgb-root-and-guarantee", check_srgb),
    ("6 gbuh-guarantee", check_gbuh),
    ("7 gbu-path-gap", check_gbu_paths),
    ("8 gbu-cycle-gap", check_gbu_cycle),
    ("9 st-baseline", check_st_baseline),
    ("10 oracle-lp-soundness", check_soundness),
    ("11 gap-reduction", check_gap_reduction),
]


def run_check(name: str, fn, ctx: Context) -> CheckResult:
    t = time.perf_counter()
    try:
        ok, detail = fn(ctx)
    except Exception as exc:  # a crash is a failure, reported with its message
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return CheckResult(name, ok, detail, time.perf_counter() - t)


def run_all(echo: Callable[[str], None] | None = None) -> list[CheckResult]:
    ctx = Context()
    out = []
    for name, fn in CHECKS:
        res = run_check(name, fn, ctx)
        if echo:
            echo(res.line())
        out.append(res)
    return out


