"""Exhaustive search over orientations for ground-truth makespan and C(T)."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .model import Instance, Orientation

DEFAULT_CAP = 10**7
SLACK = 1e-9


class CapExceeded(RuntimeError):
    def __init__(self, product: int, cap: int):
        super().__init__(f"{product} orientations exceed the cap of {cap}")
        self.product = product
        self.cap = cap


@dataclass(frozen=True)
class OracleResult:
    min_makespan: float
    cost_at_target: float  # math.inf when nothing fits
    enumerated: int
    argmin_makespan: Orientation | None = None
    argmin_cost: Orientation | None = None

    def to_dict(self) -> dict:
        cost = None if math.isinf(self.cost_at_target) else float(self.cost_at_target)
        return {"min_makespan": float(self.min_makespan), "cost_at_target": cost, "enumerated": self.enumerated}


def search_space(instance: Instance) -> int:
    return math.prod(e.arity for e in instance.edges)


def oracle(instance: Instance, T, cap: int = DEFAULT_CAP, exact: bool | None = None,
           with_cost: bool = True) -> OracleResult:
    """Minimum makespan and minimum cost among orientations with makespan <= T.

    Edges are scanned in ascending id and endpoints in listed order; the first
    optimum met in that mixed-radix order is reported. Partial assignments are
    pruned once they cannot beat the best value found so far.
    """
    size = search_space(instance)
    if size > cap:
        raise CapExceeded(size, cap)
    if exact is None:
        exact = instance.is_exact and isinstance(T, (int, Fraction))
    slack = 0 if exact else SLACK
    idx = {v: i for i, v in enumerate(instance.vertices)}
    zero = Fraction(0) if exact else 0.0
    base = [zero] * len(instance.vertices)
    base_cost = zero
    forced: dict[int, str] = {}
    free = []
    for e in sorted(instance.edges, key=lambda e: e.id):
        if e.arity == 1:
            ep = e.endpoints[0]
            base[idx[ep.v]] += ep.p
            base_cost += ep.c
            forced[e.id] = ep.v
        else:
            free.append((e.id, [(idx[ep.v], ep.p, ep.c, ep.v) for ep in e.endpoints]))
    n = len(free)
    choice = [0] * n
    loads = list(base)

    # pass 1: minimum makespan
    best_ms = [math.inf]
    best_choice: list[list[int] | None] = [None]
    floor = max(base, default=zero)

    def dfs_ms(i: int, cur_max) -> None:
        if i == n:
            if cur_max < best_ms[0]:
                best_ms[0] = cur_max
                best_choice[0] = list(choice)
            return
        for k, (vi, p, _c, _v) in enumerate(free[i][1]):
            new = loads[vi] + p
            m = new if new > cur_max else cur_max
            if m >= best_ms[0]:
                continue
            old = loads[vi]
            loads[vi] = new
            choice[i] = k
            dfs_ms(i + 1, m)
            loads[vi] = old
            if best_ms[0] <= floor:
                return

    dfs_ms(0, floor)

    # pass 2: minimum cost within the target
    limit = T + slack
    best_c = [math.inf]
    best_cchoice: list[list[int] | None] = [None]
    loads = list(base)
    feasible_base = all(load <= limit for load in base)

    def dfs_cost(i: int, cost) -> None:
        if i == n:
            if cost < best_c[0]:
                best_c[0] = cost
                best_cchoice[0] = list(choice)
            return
        for k, (vi, p, c, _v) in enumerate(free[i][1]):
            new = loads[vi] + p
            if new > limit:
                continue
            nc = cost + c
            if nc >= best_c[0]:
                continue
            old = loads[vi]
            loads[vi] = new
            choice[i] = k
            dfs_cost(i + 1, nc)
            loads[vi] = old

    if feasible_base and with_cost:
        dfs_cost(0, base_cost)

    def build(ch):
        if ch is None:
            return None
        out = dict(forced)
        for (eid, opts), k in zip(free, ch):
            out[eid] = opts[k][3]
        return Orientation(out)

    return OracleResult(best_ms[0], best_c[0], size, build(best_choice[0]), build(best_cchoice[0]))


def min_makespan(instance: Instance, cap: int = DEFAULT_CAP) -> float:
    return oracle(instance, math.inf, cap, with_cost=False).min_makespan
