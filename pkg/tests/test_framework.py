import pytest
from hypothesis import given

from balance_forge.framework import framework_round, local_step
from balance_forge.lp import FractionalSolution, build_relaxation, solve_lp
from balance_forge.model import ContractViolation, Infeasible, evaluate, make_instance
from balance_forge.thresholds import StepHalf
from strategies import graphs


def test_local_step_orients_above_threshold():
    inst = make_instance(["u", "v"], [[("u", 0.8, 0), ("v", 0.8, 1)], [("u", 0.3, 0), ("v", 0.3, 0)]])
    x = FractionalSolution({(0, "u"): 0.8, (0, "v"): 0.2, (1, "u"): 0.5, (1, "v"): 0.5}, 0.2)
    step = local_step(inst, x, StepHalf(0.75))
    assert dict(step.pre_oriented) == {0: "u"}
    assert [e.id for e in step.residual.edges] == [1]
    assert step.residual_x.objective_value == 0.0


def test_threshold_at_exactly_the_value_does_not_orient():
    inst = make_instance(["u", "v"], [[("u", 0.8, 0), ("v", 0.8, 0)]])
    x = FractionalSolution({(0, "u"): 0.75, (0, "v"): 0.25}, 0.0)
    assert dict(local_step(inst, x, StepHalf(0.75)).pre_oriented) == {}


def test_double_qualification_is_a_contract_violation():
    inst = make_instance(["u", "v", "w"], [[("u", 0.4, 0), ("v", 0.4, 0), ("w", 0.4, 0)]])
    x = FractionalSolution({(0, "u"): 0.5, (0, "v"): 0.5, (0, "w"): 0.0}, 0.0)

    class Low(StepHalf):
        def __call__(self, p):
            return 0.4

    with pytest.raises(ContractViolation):
        local_step(inst, x, Low(2 / 3))


@given(graphs(max_vertices=4, max_edges=7))
def test_every_edge_oriented_once(inst):
    try:
        sol = solve_lp(build_relaxation(inst))
    except Infeasible:
        return
    o = framework_round(inst, sol, StepHalf(2 / 3))
    assert sorted(o) == sorted(e.id for e in inst.edges)
    evaluate(inst, o)
