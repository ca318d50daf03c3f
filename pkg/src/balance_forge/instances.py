"""Generators for the gap constructions and seeded random families."""
from __future__ import annotations

import random
from fractions import Fraction

from .model import Edge, Endpoint, Instance, exact_mode, to_number


def _num(x, exact: bool):
    return to_number(x, exact)


def _as_int(x, what: str) -> int:
    r = round(float(x))
    if r < 1 or abs(float(x) - r) > 1e-9:
        raise ValueError(f"{what} must be a positive integer, got {float(x):.6g}")
    return r


class _Builder:
    def __init__(self, exact: bool):
        self.exact = exact
        self.vertices: list[str] = []
        self.edges: list[Edge] = []
        self.zero = Fraction(0) if exact else 0.0

    def vertex(self, name: str) -> str:
        self.vertices.append(name)
        return name

    def edge(self, *endpoints) -> int:
        eid = len(self.edges)
        eps = tuple(Endpoint(v, p, c if c is not None else self.zero) for v, p, c in endpoints)
        self.edges.append(Edge(eid, eps))
        return eid

    def loops(self, v: str, total, count: int) -> list[int]:
        """Split `total` into `count` self-loops; the last one absorbs rounding."""
        piece = total / count
        ids = [self.edge((v, piece, None)) for _ in range(count - 1)]
        ids.append(self.edge((v, total - piece * (count - 1), None)))
        return ids

    def build(self, meta: dict) -> Instance:
        return Instance(tuple(self.vertices), tuple(self.edges), meta)


def _meta(name: str, exact: bool, **params) -> dict:
    out = {}
    for k, v in params.items():
        if isinstance(v, Fraction):
            out[k] = str(v) if exact else float(v)
        else:
            out[k] = v
    return {"generator": name, "params": out}


def gen_tightness_a(alpha, epsilon, exact: bool | None = None) -> Instance:
    """Five vertices where the threshold rounding reaches makespan 1.5 + alpha/2 - eps/2.

    The unit cost that the rounding is forced to pay sits on the u' side of
    the (u', v') edge, which the local step always picks.
    """
    exact = exact_mode() if exact is None else exact
    a, eps = _num(alpha, exact), _num(epsilon, exact)
    if not (0.5 <= a < 1) or not eps > 0:
        raise ValueError("need 1/2 <= alpha < 1 and epsilon > 0")
    one, half = _num(1, exact), _num(1, exact) / 2
    b = _Builder(exact)
    u, v1, v2, u2, w2 = (b.vertex(n) for n in ("u", "v1", "v2", "u'", "v'"))
    b.edge((u, one, 0 * one), (v1, one, eps))
    b.edge((u, half, 0 * one), (v2, half, eps))
    b.edge((u2, one, one), (w2, one, 0 * one))
    loads = {u: half * a - half * eps, v1: one - a, v2: half + half * a + half * eps,
             u2: one - a - eps, w2: a + eps}
    for v in (u, v1, v2, u2, w2):
        b.loops(v, loads[v], 2)
    return b.build(_meta("tightness-a", exact, alpha=alpha, epsilon=epsilon))


def gen_tightness_b(alpha, epsilon, exact: bool | None = None) -> Instance:
    """Three vertices where the threshold rounding reaches makespan 2.5 - alpha - eps."""
    exact = exact_mode() if exact is None else exact
    a, eps = _num(alpha, exact), _num(epsilon, exact)
    if not (0.5 <= a < 1) or not eps > 0:
        raise ValueError("need 1/2 <= alpha < 1 and epsilon > 0")
    one, half = _num(1, exact), _num(1, exact) / 2
    b = _Builder(exact)
    u, v1, v2 = (b.vertex(n) for n in ("u", "v1", "v2"))
    b.edge((u, one, one), (v1, one, 0 * one))
    b.edge((u, half, 0 * one), (v2, half, eps))
    loads = {u: one - a - eps, v1: a + eps / 2, v2: half + half * eps}
    for v in (u, v1, v2):
        b.loops(v, loads[v], 2)
    return b.build(_meta("tightness-b", exact, alpha=alpha, epsilon=epsilon))


def gen_lb_cost(gamma, epsilon, k: int = 3, exact: bool | None = None, as_drawn: bool = False) -> Instance:
    """Two vertices joined by one edge of weight 1 - eps; the cheap side is u.

    By default q_u is set so that the load row of u is tight exactly when
    x[e,u] = 0.25 - gamma - 2 eps, which makes the LP optimum 0.75 + gamma + 2 eps.
    With as_drawn=True q_u = 0.75 + gamma + 2 eps instead.
    """
    exact = exact_mode() if exact is None else exact
    g, eps = _num(gamma, exact), _num(epsilon, exact)
    if not (0 <= g < 0.25) or not eps > 0 or k < 1:
        raise ValueError("need 0 <= gamma < 1/4, epsilon > 0, k >= 1")
    one = _num(1, exact)
    qv = one / 4 - g - 2 * eps
    if qv < 0:
        raise ValueError("0.25 - gamma - 2 epsilon must be nonnegative")
    qu = 3 * one / 4 + g + 2 * eps if as_drawn else one - (one - eps) * qv
    b = _Builder(exact)
    u, v = b.vertex("u"), b.vertex("v")
    b.edge((u, one - eps, 0 * one), (v, one - eps, one))
    piece = eps / k
    for name, q in ((u, qu), (v, qv)):
        count = max(1, round(float(q / piece)))
        if q > 0:
            b.loops(name, q, count)
    return b.build(_meta("lb-cost", exact, gamma=gamma, epsilon=epsilon, k=k, as_drawn=as_drawn))


def gen_gbu_paths(epsilon, k: int = 3, exact: bool | None = None) -> Instance:
    """1/eps paths of 1/eps vertices each, plus the light hyperedges tying them together.

    The right-hand weight 1 - 6 eps is clamped at 0 when eps > 1/6.
    """
    exact = exact_mode() if exact is None else exact
    eps = _num(epsilon, exact)
    n = _as_int(1 / eps, "1/epsilon")
    per = _as_int(k / eps, "k/epsilon")
    one = _num(1, exact)
    zero = 0 * one
    heavy_w = max(one - 6 * eps, zero)
    left_w = one / 2 + eps
    b = _Builder(exact)
    heavy, light = [], []
    paths = []
    for i in range(n):
        paths.append([b.vertex(f"p{i}_{j}") for j in range(n)])
    for path in paths:
        for j in range(n - 1):
            if j == 0:
                heavy.append(b.edge((path[0], heavy_w, zero), (path[1], heavy_w, zero)))
            else:
                heavy.append(b.edge((path[j], left_w, zero), (path[j + 1], heavy_w, zero)))
    for path in paths:
        if n > 1:
            light.append(b.edge(*[(v, one / 2, zero) for v in path[1:]]))
    light.append(b.edge(*[(path[0], one / 2, zero) for path in paths]))
    for path in paths:
        for v in path:
            b.loops(v, one / 3, per)
    meta = _meta("gbu-paths", exact, epsilon=epsilon, k=k)
    meta.update(heavy=heavy, light=light)
    return b.build(meta)


def gen_gbu_cycle(gamma, epsilon, k: int = 3, exact: bool | None = None, as_drawn: bool = False) -> Instance:
    """Cycle of 4/eps vertices sharing one light hyperedge; edge 0 costs 1 clockwise.

    Vertex c{i} is joined to c{i+1}; clockwise means toward c{i+1}. With
    e1 = eps/4 the shifted gamma' = (gamma + 1.75 e1) / (1 - 4 e1) keeps every
    collision and the all-counter-clockwise orientation above 1.75 + gamma.
    as_drawn=True uses gamma' = gamma / (1 - 4 e1), whose loads are too small
    by about e1 for that purpose. The pair row {incoming edge, hyperedge}
    needs gamma' <= 1/4 - e1/2.
    """
    exact = exact_mode() if exact is None else exact
    g, eps = _num(gamma, exact), _num(epsilon, exact)
    if not (1 / 12 - 1e-12 <= float(g) <= 0.25):
        raise ValueError("gamma must lie in [1/12, 1/4]")
    e1 = eps / 4
    g1 = (g if as_drawn else g + 7 * e1 / 4) / (1 - 4 * e1)
    if g1 > 0.25 - e1 / 2 + 1e-12:
        raise ValueError("epsilon too large for this gamma: gamma' exceeds 1/4 - epsilon/8")
    n = _as_int(1 / e1, "4/epsilon")
    per = _as_int(k / e1, "4k/epsilon")
    one = _num(1, exact)
    zero = 0 * one
    load = g1 + one / 4 - (4 * g1 + one / 2) * e1
    b = _Builder(exact)
    cyc = [b.vertex(f"c{i}") for i in range(n)]
    heavy = []
    for i in range(n):
        cw, ccw = cyc[(i + 1) % n], cyc[i]
        cost = one if i == 0 else zero
        heavy.append(b.edge((ccw, one - e1, zero), (cw, one / 2 + e1, cost)))
    light = [b.edge(*[(v, one / 2, zero) for v in cyc])]
    for v in cyc:
        b.loops(v, load, per)
    meta = _meta("gbu-cycle", exact, gamma=gamma, epsilon=epsilon, k=k, as_drawn=as_drawn)
    meta.update(heavy=heavy, light=light, designated=0, gamma_prime=float(g1))
    return b.build(meta)


# --- random families ------------------------------------------------------

def gen_random(family: str, seed: int, n_vertices: int = 5, n_edges: int = 8, *,
               beta: float = 0.5, c: float = 2.0, n_hyper: int = 2, n_jobs: int | None = None) -> Instance:
    """Seeded random instance of the named family: gb, gbuh, srgb or gap."""
    rng = random.Random(f"{family}:{seed}:{n_vertices}:{n_edges}:{beta}:{c}:{n_hyper}:{n_jobs}")
    verts = [f"v{i}" for i in range(n_vertices)]
    edges: list[Edge] = []

    def cost() -> float:
        return round(rng.random(), 6)

    def pair():
        if n_vertices < 2:
            raise ValueError("need at least two vertices")
        return rng.sample(verts, 2)

    if family == "gb":
        for _ in range(n_edges):
            a, b = pair()
            p = rng.randint(1, 10) / 10
            edges.append(Edge(len(edges), (Endpoint(a, p, cost()), Endpoint(b, p, cost()))))
        meta = {"family": "gb", "seed": seed}
    elif family == "gbuh":
        heavy, light = [], []
        for _ in range(n_edges):
            a, b = pair()
            p = rng.randint(1, 10) / 10
            if p <= beta:
                light.append(len(edges))
            else:
                heavy.append(len(edges))
            edges.append(Edge(len(edges), (Endpoint(a, p, cost()), Endpoint(b, p, cost()))))
        for _ in range(n_hyper):
            arity = rng.randint(2, min(4, n_vertices))
            members = rng.sample(verts, arity)
            light.append(len(edges))
            edges.append(Edge(len(edges), tuple(
                Endpoint(v, round(rng.uniform(0.05, 1.0) * beta, 6), cost()) for v in members)))
        meta = {"family": "gbuh", "seed": seed, "beta": beta, "heavy": heavy, "light": light}
    elif family == "srgb":
        for _ in range(n_edges):
            a, b = pair()
            p = rng.randint(1, 10) / 10
            q = round(min(1.0, p * rng.uniform(1.0, c)), 6)
            q = max(q, p)
            ends = [Endpoint(a, p, cost()), Endpoint(b, q, cost())]
            if rng.random() < 0.5:
                ends.reverse()
            edges.append(Edge(len(edges), tuple(ends)))
        meta = {"family": "srgb", "seed": seed, "c": c}
    elif family == "gap":
        jobs = n_edges if n_jobs is None else n_jobs
        for _ in range(jobs):
            edges.append(Edge(len(edges), tuple(
                Endpoint(v, rng.randint(1, 10) / 10, cost()) for v in verts)))
        meta = {"family": "gap", "seed": seed}
    else:
        raise ValueError(f"unknown family {family!r}")
    return Instance(tuple(verts), tuple(edges), meta)


GENERATORS = {
    "tightness-a": gen_tightness_a,
    "tightness-b": gen_tightness_b,
    "lb-cost": gen_lb_cost,
    "gbu-paths": gen_gbu_paths,
    "gbu-cycle": gen_gbu_cycle,
}


def loop_total(instance: Instance, v: str):
    """Total self-loop weight at v."""
    return sum(e.endpoints[0].p for e in instance.delta(v) if e.arity == 1)
