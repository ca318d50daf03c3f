import math

import pytest
from hypothesis import given, strategies as st

from balance_forge import drivers
from balance_forge.drivers import (
    GAMMA_MIN, GB, GBU, GBUH, SRGB, InvariantFailure, VariantConfig, binary_search_makespan, cubic_root,
    gap_reduction, relaxation_feasible, select_parameters, solve_bicriteria, srgb_b, srgb_load_terms, srgb_poly,
)
from balance_forge.instances import gen_random
from balance_forge.model import Orientation, make_instance
from balance_forge.thresholds import ConstantOne, StepHalf, StepThird, TwoStep
from strategies import graphs


def test_gb_quarter_is_the_two_one_regime():
    p = select_parameters(GB(0.25))
    assert isinstance(p.threshold, StepHalf) and p.threshold.alpha == 1.0 and p.k == 0
    assert (p.makespan_factor, p.cost_factor) == (2.0, 1.0)


def test_gb_twelfth():
    p = select_parameters(GB(1 / 12))
    assert isinstance(p.threshold, StepHalf)
    assert p.makespan_factor == pytest.approx(11 / 6) and p.cost_factor == pytest.approx(1.5)


def test_gb_below_twelfth_uses_two_steps():
    p = select_parameters(GB(0.07))
    assert isinstance(p.threshold, TwoStep) and p.k == 3
    assert p.values["epsilon"] == pytest.approx(1 / 6 - 0.14)


@given(st.floats(GAMMA_MIN, 0.25))
def test_gb_cost_factor_on_both_branches(g):
    p = select_parameters(GB(g))
    assert p.cost_factor == pytest.approx(1 / (2 * g + 0.5), rel=1e-12)
    assert p.cost_factor == pytest.approx(1 / p.threshold.infimum, rel=1e-12)


def test_other_variants():
    assert isinstance(select_parameters(GBU(0.5, 0.1)).threshold, StepThird)
    assert select_parameters(GBU(0.5, 0.1)).k == 3
    assert select_parameters(GBUH(0.3, 1 / 12)).k == 0
    p = select_parameters(SRGB(1))
    assert p.values["a"] == pytest.approx(2 / 3) and p.values["b"] == pytest.approx(1 / 3)


@pytest.mark.parametrize("make", [
    lambda: GB(0.3), lambda: GB(0.05), lambda: GBUH(0.9, 0.1), lambda: GBU(0.3, 0.2),
    lambda: GBU(0.5, 0.05), lambda: SRGB(0.5), lambda: VariantConfig("xx"), lambda: VariantConfig("gb", 0.2, k=1),
])
def test_config_ranges(make):
    with pytest.raises(ValueError):
        make()


@pytest.mark.parametrize("c", [1, 2, 5, 10, 1e4, 1e6])
def test_cubic_root(c):
    a = cubic_root(c)
    assert 0.5 <= a <= 1 - 1 / (4 * c)
    assert abs(srgb_poly(a, c)) <= 1e-10
    terms = srgb_load_terms(a, srgb_b(a, c), c)
    assert max(terms) - min(terms) <= 1e-9
    if c == 1e6:
        assert a >= 1 - 1e-5


def test_cubic_root_sign_change():
    for c in (1, 3, 100):
        assert srgb_poly(0.5, c) == pytest.approx(-1 / 16)
        assert srgb_poly(1 - 1 / (4 * c), c) > 0


def test_single_edge_search():
    inst = make_instance(["u", "v"], [[("u", 5, 0), ("v", 5, 0)]])
    T, rep = binary_search_makespan(inst, GB(0.25))
    assert T == 5 and rep.makespan == 5


def test_two_parallel_edges_search():
    inst = make_instance(["u", "v"], [[("u", 1, 0), ("v", 1, 0)], [("u", 1, 0), ("v", 1, 0)]])
    T, rep = binary_search_makespan(inst, GB(1 / 12))
    assert T == 1 and rep.makespan == 1


@given(graphs(max_vertices=4, max_edges=6), st.sampled_from([0, 3]))
def test_feasibility_is_monotone(inst, k):
    T = drivers.search_target(inst, k)
    for factor in (1.0, 1.01, 1.5, 3.0):
        assert relaxation_feasible(inst, T * factor, k)


@given(graphs(max_vertices=4, max_edges=6), st.sampled_from([0.07, 1 / 12, 0.2]))
def test_guarantee_against_lp(inst, g):
    T, rep = binary_search_makespan(inst, GB(g))
    assert rep.feasible
    assert rep.makespan <= rep.makespan_factor * T + 1e-6
    assert rep.cost <= rep.cost_factor * rep.lp_value + 1e-6


def test_srgb_at_one_matches_gb_at_twelfth():
    for seed in range(50):
        inst = gen_random("gb", seed)
        _, a = binary_search_makespan(inst, SRGB(1))
        _, b = binary_search_makespan(inst, GB(1 / 12))
        assert a.makespan_factor == pytest.approx(b.makespan_factor, abs=1e-9)
        assert a.cost_factor == pytest.approx(b.cost_factor, abs=1e-9)


def test_gbu_rejects_small_targets():
    inst = make_instance(["u", "v"], [[("u", 0.5, 0), ("v", 0.6, 0)]])
    rep = solve_bicriteria(inst, 0.9, GBU(0.5, 0.1))
    assert not rep.feasible
    assert solve_bicriteria(inst, 0.9, GBU(0.5, 0.1), require_unit_opt=False).feasible


def test_gbu_escape_hatch():
    inst = make_instance(["u", "v"], [[("u", 0.5, 0), ("v", 0.6, 0)]])
    rep = solve_bicriteria(inst, 1, GBU(0.5, 0.1))
    assert rep.threshold == ConstantOne.name and rep.params["escape"]


def test_infeasible_target():
    inst = make_instance(["u", "v"], [[("u", 1, 0), ("v", 1, 0)], [("u", 1, 0), ("v", 1, 0)],
                                      [("u", 1, 0), ("v", 1, 0)]])
    rep = solve_bicriteria(inst, 1, GB(0.25))
    assert not rep.feasible and rep.to_dict()["orientation"] == []


def test_missed_guarantee_raises(monkeypatch):
    inst = make_instance(["u", "v"], [[("u", 1, 0), ("v", 1, 0)], [("u", 1, 0), ("v", 1, 0)]])
    monkeypatch.setattr(drivers, "framework_round", lambda *_: Orientation({0: "u", 1: "u"}))
    with pytest.raises(InvariantFailure):
        solve_bicriteria(inst, 1, GB(0.07))
    assert solve_bicriteria(inst, 1, GB(0.07), certify=False).makespan == 2


def test_report_schema():
    inst = gen_random("gb", 3)
    _, rep = binary_search_makespan(inst, GB(0.15))
    d = rep.to_dict()
    assert set(d) == {"feasible", "T", "variant", "params", "lp_value", "makespan", "cost", "promised", "orientation"}
    assert d["orientation"][0] == {"edge": 0, "to": rep.orientation[0]}


def test_reduction_padding_job():
    inst = make_instance(["m1", "m2"], [[("m1", 1, 0), ("m2", 0.4, 0)], [("m1", 0.4, 0), ("m2", 1, 0)]])
    seen = []

    def inner(padded):
        extra = padded.edge(2)
        seen.append(tuple(sorted(float(ep.p) for ep in extra.endpoints)))
        assert padded.meta["heavy"] == [2]
        return Orientation({0: "m2", 1: "m1", 2: extra.endpoints[0].v})

    res = gap_reduction(inst, 0.5, 0.01, inner=inner)
    scale = max(1 / 0.5, 1 + 0.01)
    assert seen[0] == pytest.approx(((1 + 0.01) / scale, 2 / scale))
    assert res.makespan == pytest.approx(0.4) and res.level == 1.0
    assert sorted(res.orientation) == [0, 1]


def test_reduction_with_beta_one():
    inst = make_instance(["m1", "m2"], [[("m1", 0.5, 0), ("m2", 0.5, 0)]])
    seen = []

    def inner(padded):
        seen.append(sorted(float(ep.p) for ep in padded.edge(1).endpoints))
        return None

    res = gap_reduction(inst, 1.0, 0.1, inner=inner)
    scale = 0.6
    assert seen == [pytest.approx([0.5 / scale, 0.6 / scale])]
    assert res.orientation is None and math.isinf(res.makespan)
