"""Per-variant parameter choice, solving, binary search and the GAP reduction."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .framework import framework_round
from .lp import RelaxationSpec, build_relaxation, solve_lp
from .simplex import NumericalFailure
from .model import (
    Edge, Endpoint, Infeasible, Instance, InputError, Orientation, evaluate, scale_to_target,
)
from .thresholds import EPS_MAX, ConstantOne, StepAt, StepHalf, StepThird, ThresholdFunction, TwoStep

GAMMA_MIN = 1.5 - math.sqrt(33) / 4
BETA_GBU_MIN = math.sqrt(2) - 1
GUARANTEE_TOL = 1e-6
_RANGE_TOL = 1e-12
VARIANTS = ("gb", "gbuh", "gbu", "srgb")


class InvariantFailure(RuntimeError):
    """A proven guarantee did not hold on a run; indicates a bug."""


@dataclass(frozen=True)
class VariantConfig:
    variant: str
    gamma: float | None = None
    beta: float | None = None
    c: float | None = None
    k: int | None = None

    def __post_init__(self):
        v = self.variant
        if v not in VARIANTS:
            raise ValueError(f"unknown variant {v!r}")
        g, b = self.gamma, self.beta
        if v in ("gb", "gbuh", "gbu") and g is None:
            raise ValueError(f"{v} needs gamma")
        if v == "gb":
            _in_range(g, GAMMA_MIN, 0.25, "gamma")
        elif v == "gbuh":
            if b is None or not 0 <= b <= 1:
                raise ValueError("gbuh needs beta in [0, 1]")
            _in_range(g, max(1 / 12, b / 3 - 1 / 12), 0.25, "gamma")
        elif v == "gbu":
            if b is None or b < BETA_GBU_MIN - _RANGE_TOL or b > 1:
                raise ValueError("gbu needs beta in [sqrt(2) - 1, 1]")
            # the threshold also needs alpha = 2 gamma + 1/2 >= 2/3
            _in_range(g, max(1 / 12, b / 3 - 1 / 12), 0.25, "gamma")
        elif v == "srgb":
            if self.c is None or self.c < 1:
                raise ValueError("srgb needs c >= 1")
        if self.k is not None and (self.k < 0 or self.k == 1):
            raise ValueError("k must be 0 or at least 2")

    def to_dict(self) -> dict:
        return {k: val for k, val in (("gamma", self.gamma), ("beta", self.beta), ("c", self.c)) if val is not None}


def _in_range(x, lo, hi, name):
    if x is None or not (lo - _RANGE_TOL <= x <= hi + _RANGE_TOL):
        raise ValueError(f"{name}={x} outside [{lo:.6g}, {hi:.6g}]")


def GB(gamma: float) -> VariantConfig:
    return VariantConfig("gb", gamma=gamma)


def GBUH(beta: float, gamma: float) -> VariantConfig:
    return VariantConfig("gbuh", gamma=gamma, beta=beta)


def GBU(beta: float, gamma: float) -> VariantConfig:
    return VariantConfig("gbu", gamma=gamma, beta=beta)


def SRGB(c: float) -> VariantConfig:
    return VariantConfig("srgb", c=c)


@dataclass(frozen=True)
class Parameters:
    threshold: ThresholdFunction
    k: int
    makespan_factor: float
    cost_factor: float
    values: dict = field(default_factory=dict)


def srgb_poly(a: float, c: float) -> float:
    return (1 / c + 0.5) * a**3 + (5 / (2 * c) - 0.5) * a**2 - 7 / (2 * c) * a + 1 / c


def cubic_root(c: float, width: float = 1e-12) -> float:
    """Root of the balancing cubic in [1/2, 1 - 1/(4c)] by bisection."""
    if c < 1:
        raise ValueError("c must be at least 1")
    lo, hi = 0.5, 1 - 1 / (4 * c)
    glo = srgb_poly(lo, c)
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        gm = srgb_poly(mid, c)
        if gm == 0:
            return mid
        if (gm < 0) == (glo < 0):
            lo, glo = mid, gm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def srgb_b(a: float, c: float) -> float:
    return (1.5 + 0.5 * a - 1 / a) / c


def srgb_load_terms(a: float, b: float, c: float) -> tuple[float, float, float]:
    return (1 / a + c * b, 1.5 + 0.5 * a, 2 - (2 - 1 / a) * b)


def select_parameters(cfg: VariantConfig) -> Parameters:
    if cfg.variant == "srgb":
        a = cubic_root(cfg.c)
        b = srgb_b(a, cfg.c)
        k = 3 if cfg.k is None else cfg.k
        return Parameters(StepAt(a, b), k, 1.5 + 0.5 * a, 1 / a, {"a": a, "b": b, "k": k})
    g = cfg.gamma
    alpha = 2 * g + 0.5
    if cfg.variant == "gb" and g < 1 / 12 - _RANGE_TOL:
        eps = min(max(1 / 6 - 2 * g, 0.0), EPS_MAX)
        k = 3 if cfg.k is None else cfg.k
        f: ThresholdFunction = TwoStep(eps)
        values = {"epsilon": eps, "k": k}
        cost_factor = 1 / (2 / 3 - eps)
    elif cfg.variant in ("gb", "gbuh"):
        k = 0 if cfg.k is None else cfg.k
        f = StepHalf(min(alpha, 1.0))
        values = {"alpha": f.alpha, "k": k}
        cost_factor = 1 / f.alpha
    else:
        k = 3 if cfg.k is None else cfg.k
        f = StepThird(min(alpha, 1.0), beta=cfg.beta)
        values = {"alpha": f.alpha, "k": k}
        cost_factor = 1 / f.alpha
    return Parameters(f, k, 1.75 + g, cost_factor, values)


def heavy_edges(instance: Instance, beta: float) -> list[int]:
    """Edges of arity two whose every weight exceeds beta; metadata wins when present."""
    if "heavy" in instance.meta:
        return sorted(int(i) for i in instance.meta["heavy"])
    return sorted(e.id for e in instance.edges if e.arity == 2 and all(ep.p > beta for ep in e.endpoints))


def check_variant(instance: Instance, cfg: VariantConfig) -> list[str]:
    """Structural assumptions of the variant that the guarantees rely on."""
    out = []
    v = cfg.variant
    for e in instance.edges:
        if e.arity == 1:
            continue
        ps = [float(ep.p) for ep in e.endpoints]
        if v == "gb" and (e.arity != 2 or not e.related):
            out.append(f"edge {e.id}: gb takes related arity-2 edges")
        elif v == "srgb":
            if e.arity != 2:
                out.append(f"edge {e.id}: srgb takes arity-2 edges")
            elif min(ps) * cfg.c < max(ps) - 1e-12:
                out.append(f"edge {e.id}: weight ratio above c")
        elif v in ("gbuh", "gbu"):
            light = max(ps) <= cfg.beta + 1e-12
            if light:
                continue
            if e.arity != 2:
                out.append(f"edge {e.id}: heavy hyperedge")
            elif v == "gbuh" and not e.related:
                out.append(f"edge {e.id}: heavy edge with unrelated weights")
            elif v == "gbu" and min(ps) <= cfg.beta:
                out.append(f"edge {e.id}: mixes light and heavy weights")
    return out


@dataclass
class SolveReport:
    feasible: bool
    T: float
    variant: str
    params: dict
    lp_value: float | None = None
    makespan: float | None = None
    cost: float | None = None
    makespan_factor: float | None = None
    cost_factor: float | None = None
    orientation: Orientation | None = None
    threshold: str | None = None
    reason: str | None = None

    def to_dict(self) -> dict:
        f = lambda x: None if x is None else float(x)  # noqa: E731
        return {
            "feasible": self.feasible,
            "T": f(self.T),
            "variant": self.variant,
            "params": self.params,
            "lp_value": f(self.lp_value),
            "makespan": f(self.makespan),
            "cost": f(self.cost),
            "promised": {"makespan_factor": f(self.makespan_factor), "cost_factor": f(self.cost_factor)},
            "orientation": self.orientation.to_list() if self.orientation is not None else [],
        }


def solve_bicriteria(instance: Instance, T: float, cfg: VariantConfig, *, certify: bool = True,
                     require_unit_opt: bool = True) -> SolveReport:
    """Scale, solve the relaxation, round, and report in original units.

    When certify is set and the instance meets the variant's assumptions, a
    missed guarantee raises InvariantFailure.
    """
    params = select_parameters(cfg)
    info = dict(cfg.to_dict(), **params.values)
    report = SolveReport(False, T, cfg.variant, info, makespan_factor=params.makespan_factor,
                         cost_factor=params.cost_factor)
    if cfg.variant == "gbu" and require_unit_opt and T < 1:
        report.reason = "target below 1"
        return report
    try:
        scaled = scale_to_target(instance, T).instance
    except Infeasible as exc:
        report.reason = str(exc)
        return report
    f = params.threshold
    if cfg.variant == "gbu":
        top = max((float(ep.p) for e in scaled.edges for ep in e.endpoints), default=0.0)
        if top <= 0.75 + cfg.gamma:
            f = ConstantOne()
            report.params["escape"] = True
    report.threshold = f.name
    try:
        sol = solve_lp(build_relaxation(scaled, RelaxationSpec(params.k)))
    except Infeasible as exc:
        report.reason = str(exc)
        return report
    orientation = framework_round(scaled, sol, f)
    ev = evaluate(instance, orientation)
    report.feasible = True
    report.lp_value = sol.objective_value
    report.makespan = ev.makespan
    report.cost = ev.total_cost
    report.orientation = orientation
    if certify and not check_variant(instance, cfg):
        inf_f = f.infimum
        if float(ev.makespan) > params.makespan_factor * float(T) + GUARANTEE_TOL:
            raise InvariantFailure(f"makespan {float(ev.makespan):.9g} above {params.makespan_factor:.6g} * T")
        if float(ev.total_cost) > sol.objective_value / inf_f + GUARANTEE_TOL:
            raise InvariantFailure(f"cost {float(ev.total_cost):.9g} above lp/{inf_f:.6g}")
    return report


def makespan_bracket(instance: Instance) -> tuple[float, float]:
    lo = max((min(float(ep.p) for ep in e.endpoints) for e in instance.edges), default=0.0)
    hi = sum(max(float(ep.p) for ep in e.endpoints) for e in instance.edges)
    return lo, hi


def relaxation_feasible(instance: Instance, T: float, k: int) -> bool:
    try:
        scaled = scale_to_target(instance, T).instance
    except Infeasible:
        return False
    # a full solve, so the returned target is one the driver can actually use
    try:
        solve_lp(build_relaxation(scaled, RelaxationSpec(k)))
    except (Infeasible, NumericalFailure):
        return False
    return True


def search_target(instance: Instance, k: int, rel_tol: float = 1e-6, floor: float | None = None) -> float:
    """Smallest target (within rel_tol) at which the relaxation with Set rows up to k is feasible."""
    if rel_tol <= 0:
        raise ValueError("rel_tol must be positive")
    lo, hi = makespan_bracket(instance)
    if floor is not None:
        lo = max(lo, floor)
    hi = max(hi, lo)
    if hi <= 0:
        return 1.0
    if relaxation_feasible(instance, lo, k):
        return lo
    while hi - lo > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        if relaxation_feasible(instance, mid, k):
            hi = mid
        else:
            lo = mid
    return hi


def binary_search_makespan(instance: Instance, cfg: VariantConfig, rel_tol: float = 1e-6, *,
                           certify: bool = True, require_unit_opt: bool = True) -> tuple[float, SolveReport]:
    """Search the smallest feasible target for the variant's relaxation and solve there."""
    k = select_parameters(cfg).k
    floor = 1.0 if cfg.variant == "gbu" and require_unit_opt else None
    T = search_target(instance, k, rel_tol, floor)
    return T, solve_bicriteria(instance, T, cfg, certify=certify, require_unit_opt=require_unit_opt)


# --- GAP reduction --------------------------------------------------------

@dataclass
class ReductionResult:
    orientation: Orientation | None
    makespan: float
    cost: float
    level: float | None
    attempts: list[tuple[float, float | None]]


def _default_inner(cfg: VariantConfig) -> Callable[[Instance], Orientation | None]:
    def run(inst: Instance) -> Orientation | None:
        _, rep = binary_search_makespan(inst, cfg, certify=False, require_unit_opt=False)
        return rep.orientation if rep.feasible else None
    return run


def gap_reduction(gap_instance: Instance, beta: float, epsilon: float, cfg: VariantConfig | None = None,
                  inner: Callable[[Instance], Orientation | None] | None = None) -> ReductionResult:
    """Try each distinct weight level as a cap, padding with one heavy two-machine job."""
    if not 0 < beta <= 1 or epsilon <= 0:
        raise ValueError("need 0 < beta <= 1 and epsilon > 0")
    if cfg is None:
        cfg = GBU(max(beta, BETA_GBU_MIN), max(1 / 12, max(beta, BETA_GBU_MIN) / 3 - 1 / 12))
    solver = inner or _default_inner(cfg)
    levels = sorted({float(ep.p) for e in gap_instance.edges for ep in e.endpoints if ep.p > 0}, reverse=True)
    taken = set(gap_instance.vertices)
    i1, i2 = "__i1", "__i2"
    while i1 in taken or i2 in taken:
        i1, i2 = "_" + i1, "_" + i2
    jid = max((e.id for e in gap_instance.edges), default=-1) + 1
    best: ReductionResult = ReductionResult(None, math.inf, math.inf, None, [])
    for w in levels:
        scale = max(w / beta, w + epsilon)
        edges = []
        ok = True
        for e in gap_instance.edges:
            keep = tuple(Endpoint(ep.v, float(ep.p) / scale, ep.c) for ep in e.endpoints if float(ep.p) <= w)
            if not keep:
                ok = False
                break
            edges.append(Edge(e.id, keep))
        if not ok:
            best.attempts.append((w, None))
            continue
        edges.append(Edge(jid, (Endpoint(i1, (w + epsilon) / scale, 0.0), Endpoint(i2, (w / beta) / scale, 0.0))))
        padded = Instance(gap_instance.vertices + (i1, i2), tuple(edges), {"heavy": [jid]})
        try:
            got = solver(padded)
        except Infeasible:
            got = None
        if got is None:
            best.attempts.append((w, None))
            continue
        stripped = Orientation({eid: v for eid, v in got.items() if eid != jid})
        ev = evaluate(gap_instance, stripped)
        best.attempts.append((w, float(ev.makespan)))
        if (float(ev.makespan), float(ev.total_cost)) < (best.makespan, best.cost):
            best.orientation = stripped
            best.makespan = float(ev.makespan)
            best.cost = float(ev.total_cost)
            best.level = w
    return best


def load_instance_or_raise(obj) -> Instance:
    from .model import instance_from_dict, read_instance
    if isinstance(obj, Instance):
        return obj
    if isinstance(obj, dict):
        return instance_from_dict(obj)
    if isinstance(obj, str):
        return read_instance(obj)
    raise InputError(f"cannot read an instance from {type(obj).__name__}")
