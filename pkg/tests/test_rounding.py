import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import linear_sum_assignment

from balance_forge.drivers import search_target
from balance_forge.lp import FractionalSolution, RelaxationSpec, build_relaxation, solve_lp
from balance_forge.model import evaluate, make_instance, scale_to_target
from balance_forge.rounding import (
    AssignmentGraph, NoPerfectMatching, build_slots, min_cost_perfect_matching, st_round,
)
from strategies import graphs


@st.composite
def bipartite(draw):
    jobs = draw(st.integers(1, 5))
    slots = draw(st.integers(jobs, 7))
    arcs = {}
    for j in range(jobs):
        chosen = draw(st.lists(st.integers(0, slots - 1), min_size=1, max_size=slots, unique=True))
        arcs[j] = sorted((s, draw(st.integers(0, 4)) / 4) for s in chosen)
    return AssignmentGraph(list(range(jobs)), [(f"s{i}", 0) for i in range(slots)], arcs)


def lsa_cost(g):
    big = 1e6
    M = np.full((len(g.jobs), len(g.slots)), big)
    for j, arcs in g.arcs.items():
        for s, c in arcs:
            M[j, s] = c
    r, c = linear_sum_assignment(M)
    total = M[r, c].sum()
    return None if total >= big else total


@given(bipartite())
def test_matching_cost_matches_hungarian(g):
    ref = lsa_cost(g)
    if ref is None:
        with pytest.raises(NoPerfectMatching):
            min_cost_perfect_matching(g)
        return
    match = min_cost_perfect_matching(g)
    assert sorted(match) == g.jobs
    assert len(set(match.values())) == len(match)
    cost = sum(dict(g.arcs[j])[s] for j, s in match.items())
    assert cost == pytest.approx(ref, abs=1e-9)


def test_ties_pick_the_smallest_slots_in_job_order():
    g = AssignmentGraph([0, 1], [("a", 0), ("b", 0), ("c", 0)],
                        {0: [(0, 0.0), (1, 0.0)], 1: [(0, 0.0), (2, 0.0)]})
    assert min_cost_perfect_matching(g) == {0: 0, 1: 2}


def test_slots_fill_heaviest_first():
    inst = make_instance(["u", "v"], [
        [("u", 0.9, 0), ("v", 0.9, 0)],
        [("u", 0.4, 0), ("v", 0.4, 0)],
        [("u", 0.2, 0), ("v", 0.2, 0)],
    ])
    x = FractionalSolution({(0, "u"): 0.6, (0, "v"): 0.4, (1, "u"): 0.7, (1, "v"): 0.3,
                            (2, "u"): 0.5, (2, "v"): 0.5}, 0.0)
    table = build_slots(inst, x)
    assert table.count("u") == 2
    assert table.slots["u"][0] == [(0, 0.6), (1, pytest.approx(0.4))]
    assert table.fraction(1, "u") == pytest.approx(0.7)


@given(graphs(max_vertices=4, max_edges=7, related=False, max_arity=4))
def test_two_approximation_without_cost_loss(inst):
    T = search_target(inst, 0)
    scaled = scale_to_target(inst, T).instance
    sol = solve_lp(build_relaxation(scaled, RelaxationSpec(0)))
    ev = evaluate(inst, st_round(scaled, sol))
    assert float(ev.makespan) <= 2 * T + 1e-6
    assert float(ev.total_cost) <= sol.objective_value + 1e-9


def test_integral_solution_is_kept():
    inst = make_instance(["u", "v"], [[("u", 1.0, 0.3), ("v", 1.0, 0.1)]])
    x = FractionalSolution({(0, "u"): 1.0, (0, "v"): 0.0}, 0.3)
    assert dict(st_round(inst, x)) == {0: "u"}
    assert math.isclose(evaluate(inst, st_round(inst, x)).total_cost, 0.3)
