"""Edge/Load/Star relaxation with optional Set rows, and its solution."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .model import Instance, Infeasible
from .simplex import NumericalFailure, solve_standard

FEAS_TOL = 1e-7
MAX_SET_ROWS = 10**6
SET_TOL = 1e-9  # a set whose weight is 1 up to rounding noise still fits


class TooManyRows(ValueError):
    pass


@dataclass(frozen=True)
class RelaxationSpec:
    k: int = 0
    use_per_endpoint_weights: bool = True

    def __post_init__(self):
        if self.k < 0 or self.k == 1:
            raise ValueError("k must be 0 or at least 2")


@dataclass(frozen=True)
class Row:
    tag: str  # EDGE | LOAD | STAR | SET
    label: tuple
    coefs: tuple[tuple[int, float], ...]
    sense: str  # "=" or "<="
    rhs: float


@dataclass
class LinearProgram:
    variables: list[tuple[int, str]]
    cost: np.ndarray
    rows: list[Row]
    index: dict[tuple[int, str], int] = field(default_factory=dict)

    def count(self, tag: str) -> int:
        return sum(1 for r in self.rows if r.tag == tag)

    def violation(self, x: np.ndarray) -> float:
        worst = 0.0
        for r in self.rows:
            lhs = sum(a * x[j] for j, a in r.coefs)
            gap = abs(lhs - r.rhs) if r.sense == "=" else lhs - r.rhs
            worst = max(worst, gap)
        return max(worst, float(-x.min(initial=0.0)))

    def is_satisfied(self, x, tol: float = FEAS_TOL) -> bool:
        vec = x if isinstance(x, np.ndarray) else self.vector(x)
        return self.violation(vec) <= tol

    def vector(self, values: Mapping[tuple[int, str], float]) -> np.ndarray:
        vec = np.zeros(len(self.variables))
        for key, val in values.items():
            if key in self.index:
                vec[self.index[key]] = val
            elif val > FEAS_TOL:
                raise KeyError(f"no variable for {key}")
        return vec

    def dump(self) -> str:
        lines = []
        name = lambda j: "x[e%d,%s]" % self.variables[j]  # noqa: E731
        obj = " + ".join(f"{self.cost[j]:g}*{name(j)}" for j in range(len(self.variables)) if self.cost[j])
        lines.append(f"MIN {obj or '0'}")
        for r in self.rows:
            terms = " + ".join(f"{a:g}*{name(j)}" for j, a in r.coefs)
            if r.tag == "EDGE":
                head = f"EDGE e{r.label[0]}"
            elif r.tag == "SET":
                head = f"SET {r.label[0]} {{{','.join('e%d' % i for i in r.label[1])}}}"
            else:
                head = f"{r.tag} {r.label[0]}"
            lines.append(f"{head} {r.sense} {r.rhs:g} : {terms}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class FractionalSolution:
    x: Mapping[tuple[int, str], float]
    objective_value: float

    def value(self, eid: int, v: str) -> float:
        return self.x.get((eid, v), 0.0)


def _weight(instance: Instance, spec: RelaxationSpec):
    def w(e, v):
        if spec.use_per_endpoint_weights or e.related:
            return float(e.weight(v))
        return float(max(ep.p for ep in e.endpoints))
    return w


def enumerate_violating_sets(instance: Instance, u: str, k: int, spec: RelaxationSpec | None = None,
                             limit: int | None = None) -> list[tuple[int, ...]]:
    """Subsets S of edges at u with 2 <= |S| <= k and total weight at u above 1."""
    if k < 2:
        raise ValueError("k must be at least 2")
    w = _weight(instance, spec or RelaxationSpec(k))
    inc = [(e.id, w(e, u)) for e in instance.delta(u)]
    found: list[tuple[int, ...]] = []
    n = len(inc)
    if n < 2:
        return found
    ids = [i for i, _ in inc]
    ws = [x for _, x in inc]
    # top[i]: the largest k weights among positions >= i, for best-case completion bounds
    top: list[list[float]] = [[] for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        top[i] = sorted(top[i + 1] + [ws[i]], reverse=True)[:k]

    def grow(start: int, chosen: list[int], total: float) -> None:
        if len(chosen) >= 2 and total > 1 + SET_TOL:
            found.append(tuple(ids[i] for i in chosen))
            if limit is not None and len(found) > limit:
                raise TooManyRows(f"more than {limit} Set rows")
        room = k - len(chosen) - 1
        if room < 0:
            return
        for i in range(start, n):
            if total + ws[i] + sum(top[i + 1][:room]) <= 1 + SET_TOL:
                continue
            chosen.append(i)
            grow(i + 1, chosen, total + ws[i])
            chosen.pop()

    grow(0, [], 0.0)
    found.sort()
    return found


def build_relaxation(instance: Instance, spec: RelaxationSpec = RelaxationSpec()) -> LinearProgram:
    w = _weight(instance, spec)
    variables, cost, index = [], [], {}
    for e in sorted(instance.edges, key=lambda e: e.id):
        for ep in e.endpoints:
            index[(e.id, ep.v)] = len(variables)
            variables.append((e.id, ep.v))
            cost.append(float(ep.c))
    rows: list[Row] = []
    for e in sorted(instance.edges, key=lambda e: e.id):
        rows.append(Row("EDGE", (e.id,), tuple((index[(e.id, ep.v)], 1.0) for ep in e.endpoints), "=", 1.0))
    for u in instance.vertices:
        inc = instance.delta(u)
        rows.append(Row("LOAD", (u,), tuple((index[(e.id, u)], w(e, u)) for e in inc), "<=", 1.0))
    for u in instance.vertices:
        big = [(index[(e.id, u)], 1.0) for e in instance.delta(u) if w(e, u) > 0.5]
        if big:
            rows.append(Row("STAR", (u,), tuple(big), "<=", 1.0))
    if spec.k >= 2:
        budget = MAX_SET_ROWS
        for u in instance.vertices:
            sets = enumerate_violating_sets(instance, u, spec.k, spec, limit=budget)
            budget -= len(sets)
            for S in sets:
                rows.append(Row("SET", (u, S), tuple((index[(eid, u)], 1.0) for eid in S), "<=", float(len(S) - 1)))
    return LinearProgram(variables, np.asarray(cost, dtype=float), rows, index)


def _presolve(lp: LinearProgram):
    """Fix forced variables, drop redundant rows and merge duplicates.

    Every variable is bounded by 1 through its Edge row, and all row
    coefficients are nonnegative, so a <= row whose coefficients sum to at
    most its right-hand side can never bind.
    """
    n = len(lp.variables)
    fixed = np.full(n, np.nan)
    for r in lp.rows:
        if r.tag == "EDGE" and len(r.coefs) == 1:
            fixed[r.coefs[0][0]] = r.rhs / r.coefs[0][1]
    free = [j for j in range(n) if np.isnan(fixed[j])]
    pos = {j: i for i, j in enumerate(free)}
    eq_rows, ub_rows = {}, {}
    for r in lp.rows:
        rhs = r.rhs
        terms = []
        for j, a in r.coefs:
            if a == 0.0:
                continue
            if j in pos:
                terms.append((pos[j], a))
            else:
                rhs -= a * fixed[j]
        if not terms:
            bad = abs(rhs) > FEAS_TOL if r.sense == "=" else rhs < -FEAS_TOL
            if bad:
                raise Infeasible(f"{r.tag} row {r.label[0]} cannot be met")
            continue
        key = tuple(sorted(terms))
        if r.sense == "=":
            if key in eq_rows and abs(eq_rows[key] - rhs) > FEAS_TOL:
                raise Infeasible("conflicting equalities")
            eq_rows[key] = rhs
        else:
            if rhs < -FEAS_TOL:
                raise Infeasible(f"{r.tag} row {r.label[0]} cannot be met")
            if sum(a for _, a in terms) <= rhs + 1e-12:
                continue
            ub_rows[key] = min(ub_rows.get(key, math.inf), max(rhs, 0.0))
    return fixed, free, eq_rows, ub_rows


def _dense(rows: dict, width: int):
    A = np.zeros((len(rows), width))
    b = np.zeros(len(rows))
    for i, (key, rhs) in enumerate(rows.items()):
        for j, a in key:
            A[i, j] = a
        b[i] = rhs
    return A, b


def solve_lp(lp: LinearProgram, phase1_only: bool = False) -> FractionalSolution:
    """Optimal basic solution, or raise Infeasible when the region is empty."""
    fixed, free, eq_rows, ub_rows = _presolve(lp)
    x = np.where(np.isnan(fixed), 0.0, fixed)
    if free:
        A_eq, b_eq = _dense(eq_rows, len(free))
        A_ub, b_ub = _dense(ub_rows, len(free))
        res = solve_standard(lp.cost[free], A_ub, b_ub, A_eq, b_eq, phase1_only=phase1_only)
        if res.status == "infeasible":
            raise Infeasible("relaxation has no feasible point")
        if res.status != "optimal":
            raise NumericalFailure(f"simplex ended with status {res.status}")
        x[free] = res.x
    viol = lp.violation(x)
    if viol > 1e-6:
        raise NumericalFailure(f"solution violates a row by {viol:.3g}")
    raw = FractionalSolution({key: float(x[j]) for j, key in enumerate(lp.variables)}, float(lp.cost @ x))
    return sanitize_solution(raw, lp)


def is_feasible(lp: LinearProgram) -> bool:
    try:
        solve_lp(lp, phase1_only=True)
    except Infeasible:
        return False
    return True


def sanitize_solution(sol: FractionalSolution, lp: LinearProgram | None = None,
                      costs: Mapping[tuple[int, str], float] | None = None) -> FractionalSolution:
    """Clamp to [0, 1], make every Edge row sum to exactly 1, recompute the objective."""
    by_edge: dict[int, list] = {}
    for (eid, v), val in sol.x.items():
        by_edge.setdefault(eid, []).append([v, min(max(val, 0.0), 1.0)])
    out = {}
    for eid, pairs in by_edge.items():
        total = sum(p[1] for p in pairs)
        if total > 0 and total != 1.0:
            for p in pairs:
                p[1] /= total
            big = max(range(len(pairs)), key=lambda i: pairs[i][1])
            rest = sum(p[1] for i, p in enumerate(pairs) if i != big)
            pairs[big][1] = 1.0 - rest
        for v, val in pairs:
            out[(eid, v)] = val
    if lp is not None:
        obj = float(sum(lp.cost[lp.index[key]] * val for key, val in out.items()))
    elif costs is not None:
        obj = float(sum(costs[key] * val for key, val in out.items()))
    else:
        obj = sol.objective_value
    return FractionalSolution(out, obj)


def relax_and_solve(instance: Instance, k: int = 0, per_endpoint: bool = True) -> FractionalSolution:
    return solve_lp(build_relaxation(instance, RelaxationSpec(k, per_endpoint)))
