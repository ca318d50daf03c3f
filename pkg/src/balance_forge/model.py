"""Instances, orientations and their evaluation."""
from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real
from types import MappingProxyType
from typing import Any, Hashable, Iterable, Mapping

Number = float | Fraction


class Infeasible(Exception):
    """No orientation with makespan at most the target exists."""


class ContractViolation(ValueError):
    pass


class InputError(ValueError):
    """Malformed instance data."""


def exact_mode() -> bool:
    return os.environ.get("BALANCE_FORGE_EXACT", "") == "1"


def to_number(x: Any, exact: bool = False) -> Number:
    if isinstance(x, Fraction):
        return x if exact else float(x)
    if isinstance(x, str):
        x = x.strip()
        val = Fraction(x)
        return val if exact else float(val)
    if isinstance(x, bool) or not isinstance(x, Real):
        raise InputError(f"not a number: {x!r}")
    if exact:
        if isinstance(x, int):
            return Fraction(x)
        return Fraction(float(x)).limit_denominator(10**9)
    return float(x)


@dataclass(frozen=True)
class Endpoint:
    v: str
    p: Number
    c: Number = 0.0


@dataclass(frozen=True)
class Edge:
    id: int
    endpoints: tuple[Endpoint, ...]

    @property
    def arity(self) -> int:
        return len(self.endpoints)

    @property
    def related(self) -> bool:
        ps = {ep.p for ep in self.endpoints}
        return len(ps) <= 1

    def vertices(self) -> tuple[str, ...]:
        return tuple(ep.v for ep in self.endpoints)

    def endpoint(self, v: str) -> Endpoint:
        for ep in self.endpoints:
            if ep.v == v:
                return ep
        raise KeyError(f"vertex {v!r} is not an endpoint of edge {self.id}")

    def weight(self, v: str) -> Number:
        return self.endpoint(v).p

    def cost(self, v: str) -> Number:
        return self.endpoint(v).c


@dataclass(frozen=True)
class Instance:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    meta: Mapping[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "meta", MappingProxyType(dict(self.meta)))

    def edge(self, eid: int) -> Edge:
        return self._by_id()[eid]

    def _by_id(self) -> dict[int, Edge]:
        cache = self.__dict__.get("_edge_cache")
        if cache is None:
            cache = {e.id: e for e in self.edges}
            object.__setattr__(self, "_edge_cache", cache)
        return cache

    def delta(self, u: str) -> list[Edge]:
        """Edges incident to u, ascending id."""
        inc = self.__dict__.get("_delta_cache")
        if inc is None:
            inc = {v: [] for v in self.vertices}
            for e in sorted(self.edges, key=lambda e: e.id):
                for ep in e.endpoints:
                    inc.setdefault(ep.v, []).append(e)
            object.__setattr__(self, "_delta_cache", inc)
        return inc.get(u, [])

    def related_flags(self) -> dict[int, bool]:
        return {e.id: e.related for e in self.edges}

    def with_edges(self, edges: Iterable[Edge], meta: Mapping | None = None) -> "Instance":
        return Instance(self.vertices, tuple(edges), dict(self.meta) if meta is None else meta)

    @property
    def is_exact(self) -> bool:
        return any(isinstance(ep.p, Fraction) for e in self.edges for ep in e.endpoints)


class Orientation(Mapping):
    """Immutable map edge id -> chosen endpoint."""

    def __init__(self, assignment: Mapping[int, str] | Iterable[tuple[int, str]]):
        self._a = dict(assignment)

    def __getitem__(self, eid: int) -> str:
        return self._a[eid]

    def __iter__(self):
        return iter(sorted(self._a))

    def __len__(self):
        return len(self._a)

    def __repr__(self):
        return f"Orientation({dict(sorted(self._a.items()))!r})"

    def merged(self, other: Mapping[int, str]) -> "Orientation":
        both = dict(self._a)
        for k, v in other.items():
            if k in both:
                raise ContractViolation(f"edge {k} oriented twice")
            both[k] = v
        return Orientation(both)

    def to_list(self) -> list[dict]:
        return [{"edge": k, "to": self._a[k]} for k in sorted(self._a)]


@dataclass(frozen=True)
class Evaluation:
    loads: Mapping[str, Number]
    makespan: Number
    total_cost: Number


def validate(instance: Instance) -> list[str]:
    """Return all invariant violations; an empty list means the instance is valid."""
    problems = []
    known = set(instance.vertices)
    if len(known) != len(instance.vertices):
        problems.append("duplicate vertex identifiers")
    seen_ids = set()
    for e in instance.edges:
        if e.id in seen_ids:
            problems.append(f"duplicate edge id {e.id}")
        seen_ids.add(e.id)
        if e.arity < 1:
            problems.append(f"edge {e.id} has no endpoints")
        vs = [ep.v for ep in e.endpoints]
        if len(set(vs)) != len(vs):
            problems.append(f"edge {e.id} repeats an endpoint")
        for ep in e.endpoints:
            if ep.v not in known:
                problems.append(f"edge {e.id} references unknown vertex {ep.v!r}")
            for name, val in (("processing time", ep.p), ("cost", ep.c)):
                if isinstance(val, float) and math.isnan(val):
                    problems.append(f"edge {e.id} has NaN {name} at {ep.v!r}")
                elif val < 0:
                    problems.append(f"edge {e.id} has negative {name} at {ep.v!r}")
    return problems


@dataclass(frozen=True)
class ScaledInstance:
    """Instance in units of the target T; forbidden endpoints are removed."""

    instance: Instance
    T: Number
    forbidden: tuple[tuple[int, str], ...] = ()
    source: Instance | None = field(default=None, compare=False)


def scale_to_target(instance: Instance, T: Number) -> ScaledInstance:
    if not T > 0:
        raise ContractViolation("target must be positive")
    exact = instance.is_exact and isinstance(T, (Fraction, int))
    if exact:
        T = Fraction(T)
    edges, forbidden = [], []
    for e in instance.edges:
        kept = []
        for ep in e.endpoints:
            p = ep.p / T if exact else float(ep.p) / float(T)
            if p > 1:
                forbidden.append((e.id, ep.v))
            else:
                kept.append(Endpoint(ep.v, p, ep.c))
        if not kept:
            raise Infeasible(f"edge {e.id} exceeds the target on every endpoint")
        edges.append(Edge(e.id, tuple(kept)))
    scaled = Instance(instance.vertices, tuple(edges), instance.meta)
    return ScaledInstance(scaled, T, tuple(forbidden), instance)


def evaluate(instance: Instance, orientation: Mapping[int, str]) -> Evaluation:
    ids = {e.id for e in instance.edges}
    extra = set(orientation) - ids
    if extra:
        raise ContractViolation(f"orientation mentions unknown edges {sorted(extra)}")
    zero = Fraction(0) if instance.is_exact else 0.0
    loads = {v: zero for v in instance.vertices}
    cost = zero
    for e in sorted(instance.edges, key=lambda e: e.id):
        if e.id not in orientation:
            raise ContractViolation(f"edge {e.id} is not oriented")
        to = orientation[e.id]
        try:
            ep = e.endpoint(to)
        except KeyError as exc:
            raise ContractViolation(str(exc)) from None
        loads[to] = loads[to] + ep.p
        cost = cost + ep.c
    makespan = max(loads.values(), default=zero)
    return Evaluation(MappingProxyType(loads), makespan, cost)


# --- JSON ---------------------------------------------------------------

def _dump_number(x: Number):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    return float(x)


def instance_to_dict(instance: Instance) -> dict:
    out = {
        "vertices": list(instance.vertices),
        "edges": [
            {
                "id": e.id,
                "endpoints": [
                    {"v": ep.v, "p": _dump_number(ep.p), "c": _dump_number(ep.c)}
                    for ep in e.endpoints
                ],
            }
            for e in instance.edges
        ],
    }
    if instance.meta:
        out["meta"] = dict(instance.meta)
    return out


def dumps(instance: Instance, indent: int | None = None) -> str:
    return json.dumps(instance_to_dict(instance), indent=indent, sort_keys=False)


def _reject_constant(name):
    raise InputError(f"non-finite number {name} in input")


def instance_from_dict(data: Mapping, exact: bool | None = None) -> Instance:
    if exact is None:
        exact = exact_mode()
    if not isinstance(data, Mapping) or "vertices" not in data or "edges" not in data:
        raise InputError("instance needs 'vertices' and 'edges'")
    vertices = [str(v) for v in data["vertices"]]
    edges = []
    for pos, raw in enumerate(data["edges"]):
        if not isinstance(raw, Mapping) or "endpoints" not in raw:
            raise InputError(f"edge #{pos} lacks endpoints")
        eid = raw.get("id", pos)
        if isinstance(eid, bool) or not isinstance(eid, int):
            raise InputError(f"edge id {eid!r} is not an integer")
        eps = []
        for ep in raw["endpoints"]:
            try:
                p = to_number(ep["p"], exact)
                c = to_number(ep.get("c", 0.0), exact)
                eps.append(Endpoint(str(ep["v"]), p, c))
            except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
                raise InputError(f"bad endpoint in edge {eid}: {exc}") from None
        edges.append(Edge(eid, tuple(eps)))
    inst = Instance(tuple(vertices), tuple(edges), dict(data.get("meta", {})))
    problems = validate(inst)
    if problems:
        raise InputError("; ".join(problems))
    return inst


def loads_json(text: str, exact: bool | None = None) -> Instance:
    try:
        data = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc}") from None
    return instance_from_dict(data, exact)


def read_instance(path: str | os.PathLike, exact: bool | None = None) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return loads_json(fh.read(), exact)


def write_instance(instance: Instance, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(instance, indent=1))
        fh.write("\n")


def make_instance(vertices: Iterable[Hashable], edges: Iterable, meta: Mapping | None = None) -> Instance:
    """Build from compact tuples: each edge is a list of (v, p, c) triples or an Edge.

    Ids are assigned densely in the given order when tuples are used.
    """
    out = []
    for pos, e in enumerate(edges):
        if isinstance(e, Edge):
            out.append(e)
        else:
            out.append(Edge(pos, tuple(Endpoint(str(v), p, c) for v, p, c in e)))
    inst = Instance(tuple(str(v) for v in vertices), tuple(out), meta or {})
    problems = validate(inst)
    if problems:
        raise InputError("; ".join(problems))
    return inst
