import json
from fractions import Fraction

import pytest
from hypothesis import given

from balance_forge.model import (
    ContractViolation, Infeasible, InputError, Orientation, dumps, evaluate, loads_json, make_instance,
    scale_to_target, validate,
)
from strategies import graphs


def tiny():
    return make_instance(["u", "v"], [[("u", 1.0, 0.0), ("v", 1.0, 1.0)], [("u", 0.5, 0.2)]])


def test_evaluate_loads_and_cost():
    ev = evaluate(tiny(), {0: "v", 1: "u"})
    assert ev.loads == {"u": 0.5, "v": 1.0}
    assert ev.makespan == 1.0
    assert ev.total_cost == pytest.approx(1.2)


def test_evaluate_rejects_partial_orientation():
    with pytest.raises(ContractViolation):
        evaluate(tiny(), {0: "u"})
    with pytest.raises(ContractViolation):
        evaluate(tiny(), {0: "w", 1: "u"})


def test_orientation_merge_refuses_overlap():
    a = Orientation({0: "u"})
    assert dict(a.merged({1: "v"})) == {0: "u", 1: "v"}
    with pytest.raises(ContractViolation):
        a.merged({0: "v"})


def test_scaling_drops_oversized_endpoints():
    inst = make_instance(["u", "v"], [[("u", 2.0, 0.0), ("v", 0.5, 0.0)]])
    s = scale_to_target(inst, 1.0)
    assert s.forbidden == ((0, "u"),)
    assert s.instance.edges[0].vertices() == ("v",)
    with pytest.raises(Infeasible):
        scale_to_target(inst, 0.25)


def test_scaling_keeps_fractions_exact():
    inst = make_instance(["u"], [[("u", Fraction(1, 3), 0)]])
    s = scale_to_target(inst, Fraction(2, 3))
    assert s.instance.edges[0].endpoints[0].p == Fraction(1, 2)


@pytest.mark.parametrize("text", [
    "{bad",
    '{"vertices": ["u"], "edges": [{"id": 0, "endpoints": [{"v": "u", "p": -1}]}]}',
    '{"vertices": ["u"], "edges": [{"id": 0, "endpoints": [{"v": "u", "p": NaN}]}]}',
    '{"vertices": ["u"], "edges": [{"id": 0, "endpoints": [{"v": "u", "p": 1}]},'
    ' {"id": 0, "endpoints": [{"v": "u", "p": 1}]}]}',
    '{"vertices": ["u"], "edges": [{"id": 0, "endpoints": [{"v": "w", "p": 1}]}]}',
    '{"edges": []}',
])
def test_parser_rejects_bad_input(text):
    with pytest.raises(InputError):
        loads_json(text)


def test_rational_strings_round_trip():
    inst = make_instance(["u", "v"], [[("u", Fraction(1, 3), Fraction(1, 7)), ("v", Fraction(2, 3), 0)]])
    back = loads_json(dumps(inst), exact=True)
    assert back == inst
    assert json.loads(dumps(inst))["edges"][0]["endpoints"][0]["p"] == "1/3"


@given(graphs(related=False, max_arity=3))
def test_json_round_trip(inst):
    assert validate(inst) == []
    back = loads_json(dumps(inst))
    assert back == inst
    assert dumps(back) == dumps(inst)
