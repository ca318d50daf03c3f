import itertools
import math

import pytest
from hypothesis import given, strategies as st

from balance_forge.instances import gen_lb_cost
from balance_forge.model import Edge, Endpoint, Instance, evaluate, make_instance
from balance_forge.oracle import CapExceeded, oracle, search_space
from strategies import graphs


def brute(inst, T):
    best_ms, best_c = math.inf, math.inf
    for combo in itertools.product(*[e.vertices() for e in inst.edges]):
        ev = evaluate(inst, {e.id: v for e, v in zip(inst.edges, combo)})
        best_ms = min(best_ms, ev.makespan)
        if ev.makespan <= T + 1e-9:
            best_c = min(best_c, ev.total_cost)
    return best_ms, best_c


def test_single_edge():
    inst = make_instance(["u", "v"], [[("u", 1, 0), ("v", 1, 1)]])
    res = oracle(inst, 1)
    assert res.min_makespan == 1 and res.cost_at_target == 0
    assert dict(res.argmin_cost) == {0: "u"}


def test_lb_cost_every_short_orientation_pays():
    inst = gen_lb_cost(0, 0.01)
    assert oracle(inst, 1.75).cost_at_target == pytest.approx(1)


def test_cost_is_infinite_below_the_optimum():
    inst = make_instance(["u", "v"], [[("u", 1, 0), ("v", 1, 1)], [("u", 1, 0), ("v", 1, 0)]])
    res = oracle(inst, 0.5)
    assert res.min_makespan == 1 and math.isinf(res.cost_at_target)
    assert res.to_dict()["cost_at_target"] is None


def test_cap():
    inst = make_instance(["u", "v"], [[("u", 1, 0), ("v", 1, 0)]] * 5)
    assert search_space(inst) == 32
    with pytest.raises(CapExceeded) as err:
        oracle(inst, 1, cap=31)
    assert err.value.product == 32


@given(graphs(max_vertices=4, max_edges=6, related=False, max_arity=3), st.sampled_from([0.5, 1.0, 1.5, 3.0]))
def test_matches_plain_enumeration(inst, T):
    res = oracle(inst, T)
    ms, c = brute(inst, T)
    assert res.min_makespan == pytest.approx(ms)
    assert res.cost_at_target == pytest.approx(c) if math.isfinite(c) else math.isinf(res.cost_at_target)
    assert math.isinf(res.cost_at_target) == (res.min_makespan > T + 1e-9)


@given(graphs(max_vertices=4, max_edges=6, related=False), st.sampled_from([0.5, 2.0, 4.0]))
def test_scale_invariance(inst, s):
    scaled = Instance(inst.vertices, tuple(
        Edge(e.id, tuple(Endpoint(ep.v, ep.p * s, ep.c) for ep in e.endpoints)) for e in inst.edges))
    a, b = oracle(inst, 1.0), oracle(scaled, s)
    assert b.min_makespan == pytest.approx(a.min_makespan * s)
    assert b.cost_at_target == pytest.approx(a.cost_at_target) or math.isinf(a.cost_at_target)


@given(graphs(max_vertices=4, max_edges=6))
def test_zero_costs_give_zero_or_infinity(inst):
    free = Instance(inst.vertices, tuple(
        Edge(e.id, tuple(Endpoint(ep.v, ep.p, 0.0) for ep in e.endpoints)) for e in inst.edges))
    assert oracle(free, 1.0).cost_at_target in (0.0, math.inf)
