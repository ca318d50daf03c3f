"""Dense two-phase primal simplex.

Solves  min c x  s.t.  A_ub x <= b_ub,  A_eq x = b_eq,  x >= 0  with b >= 0.
Pivoting follows Bland's rule, so the method terminates on degenerate LPs.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PIVOT_TOL = 1e-10
PHASE1_TOL = 1e-7


class NumericalFailure(RuntimeError):
    pass


@dataclass
class SimplexResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: np.ndarray | None = None
    objective: float | None = None
    iterations: int = 0


def _pivot(T: np.ndarray, r: int, col: int) -> None:
    T[r] /= T[r, col]
    colvals = T[:, col].copy()
    colvals[r] = 0.0
    nz = np.nonzero(np.abs(colvals) > 0.0)[0]
    if nz.size:
        T[nz] -= np.outer(colvals[nz], T[r])


def _run(T: np.ndarray, basis: list[int], allowed: int, max_iter: int) -> tuple[str, int]:
    """Iterate on tableau T whose last row holds reduced costs and last column rhs."""
    m = T.shape[0] - 1
    it = 0
    while True:
        red = T[-1, :allowed]
        cand = np.nonzero(red < -PIVOT_TOL)[0]
        if cand.size == 0:
            return "optimal", it
        col = int(cand[0])
        column = T[:m, col]
        pos = np.nonzero(column > PIVOT_TOL)[0]
        if pos.size == 0:
            return "unbounded", it
        ratios = T[pos, -1] / column[pos]
        best = ratios.min()
        ties = pos[ratios <= best + 1e-12 * max(1.0, abs(best))]
        # Bland: among tied rows leave the basic variable with smallest index
        r = int(min(ties, key=lambda i: basis[i]))
        _pivot(T, r, col)
        basis[r] = col
        it += 1
        if it > max_iter:
            raise NumericalFailure("simplex iteration limit reached")


def solve_standard(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None, phase1_only=False) -> SimplexResult:
    c = np.asarray(c, dtype=float)
    n = c.size
    A_ub = np.zeros((0, n)) if A_ub is None else np.asarray(A_ub, dtype=float).reshape(-1, n)
    A_eq = np.zeros((0, n)) if A_eq is None else np.asarray(A_eq, dtype=float).reshape(-1, n)
    b_ub = np.zeros(0) if b_ub is None else np.asarray(b_ub, dtype=float)
    b_eq = np.zeros(0) if b_eq is None else np.asarray(b_eq, dtype=float)
    if (b_ub < 0).any() or (b_eq < 0).any():
        raise ValueError("right-hand sides must be nonnegative")
    mu, me = A_ub.shape[0], A_eq.shape[0]
    m = mu + me
    ncols = n + mu + me
    T = np.zeros((m + 1, ncols + 1))
    T[:mu, :n] = A_ub
    T[:mu, n:n + mu] = np.eye(mu)
    T[mu:m, :n] = A_eq
    T[mu:m, n + mu:ncols] = np.eye(me)
    T[:mu, -1] = b_ub
    T[mu:m, -1] = b_eq
    basis = list(range(n, ncols))
    max_iter = 50 * (m + ncols) + 1000
    iters = 0

    if me:
        T[-1, :] = -T[mu:m, :].sum(axis=0)
        T[-1, n + mu:ncols] = 0.0
        _, k = _run(T, basis, ncols, max_iter)
        iters += k
        if -T[-1, -1] > PHASE1_TOL:
            return SimplexResult("infeasible", iterations=iters)
        # drive remaining artificials out of the basis
        drop = []
        for r in range(m):
            if basis[r] >= n + mu:
                row = T[r, :n + mu]
                nz = np.nonzero(np.abs(row) > 1e-9)[0]
                if nz.size:
                    _pivot(T, r, int(nz[0]))
                    basis[r] = int(nz[0])
                else:
                    drop.append(r)
        if drop:
            keep = [r for r in range(m) if r not in drop]
            T = np.vstack([T[keep], T[-1:]])
            basis = [basis[r] for r in keep]
            m = len(keep)
        T = np.delete(T, np.s_[n + mu:ncols], axis=1)
        ncols = n + mu
    if phase1_only:
        x = np.zeros(ncols)
        x[basis] = T[:m, -1]
        return SimplexResult("optimal", np.clip(x[:n], 0.0, None), None, iters)

    cost = np.concatenate([c, np.zeros(ncols - n)])
    T[-1, :ncols] = cost
    T[-1, -1] = 0.0
    for r, b in enumerate(basis):
        if cost[b] != 0.0:
            T[-1] -= cost[b] * T[r]
    status, k = _run(T, basis, ncols, max_iter)
    iters += k
    if status != "optimal":
        return SimplexResult(status, iterations=iters)

    # one refinement pass: recompute basic values from the original data
    full = np.zeros((mu + me, n + mu))
    full[:mu, :n] = A_ub
    full[:mu, n:] = np.eye(mu)
    full[mu:, :n] = A_eq
    rhs = np.concatenate([b_ub, b_eq])
    raw = np.zeros(n + mu)
    raw[basis] = T[:m, -1]
    B = full[:, basis]
    candidates = [raw]
    try:
        if B.shape[0] == B.shape[1]:
            xb = np.linalg.solve(B, rhs)
            xb += np.linalg.solve(B, rhs - B @ xb)
        else:
            xb, *_ = np.linalg.lstsq(B, rhs, rcond=None)
        ref = np.zeros(n + mu)
        ref[basis] = xb
        candidates.insert(0, ref)
    except np.linalg.LinAlgError:
        pass

    def badness(v):
        v = np.where(np.abs(v) < 1e-13, 0.0, v)
        return max(np.abs(full @ v - rhs).max(initial=0.0), float(-v.min(initial=0.0)))

    x = min(candidates, key=badness)  # refinement can hurt on a near-singular basis
    resid = badness(x)
    if not np.isfinite(resid) or resid > 1e-6:
        raise NumericalFailure(f"residual {resid:.3g} after refinement")
    xs = np.clip(x[:n], 0.0, None)
    return SimplexResult("optimal", xs, float(c @ xs), iters)
