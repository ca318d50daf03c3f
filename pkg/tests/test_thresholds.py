import math

import pytest
from hypothesis import given, strategies as st

from balance_forge.thresholds import (
    EPS_MAX, ConstantOne, StepAt, StepHalf, StepThird, ThresholdRangeError, TwoStep,
)


def test_step_half_values():
    f = StepHalf(0.75)
    assert f(0.5) == 1.0 and f(0.51) == 0.75
    assert f.infimum == 0.75


def test_two_step_pieces():
    f = TwoStep(0.03)
    assert f(1 / 3) == 1.0
    assert f(0.4) == pytest.approx(2 / 3 + 0.015)
    assert f(0.9) == pytest.approx(2 / 3 - 0.03)
    assert f.infimum == pytest.approx(2 / 3 - 0.03)


def test_eps_max_closed_form():
    assert EPS_MAX == pytest.approx(math.sqrt(33) / 2 - 17 / 6)


@pytest.mark.parametrize("make", [
    lambda: StepHalf(0.6),
    lambda: StepHalf(1.1),
    lambda: StepThird(0.7, beta=0.8),
    lambda: StepThird(0.6),
    lambda: TwoStep(EPS_MAX + 1e-6),
    lambda: TwoStep(-0.01),
    lambda: StepAt(0.4, 0.2),
    lambda: StepAt(0.7, -0.1),
])
def test_out_of_range_rejected(make):
    with pytest.raises(ThresholdRangeError):
        make()


def test_step_third_lower_end():
    assert StepThird(2 / 3, beta=0.5).alpha == pytest.approx(2 / 3)
    assert StepThird(1 / 3 + 2 * 0.8 / 3, beta=0.8).infimum == pytest.approx(1 / 3 + 1.6 / 3)


@given(st.floats(0, EPS_MAX), st.floats(0, 2))
def test_two_step_non_increasing_and_bounded(eps, p):
    f = TwoStep(eps)
    assert 0.5 <= f(p) <= 1
    assert f(p) >= f(p + 0.1)


@given(st.floats(0.5, 1), st.floats(0, 1), st.floats(0, 2))
def test_step_at_is_a_step(a, b, p):
    f = StepAt(a, b)
    assert f(p) == (1.0 if p <= b else a)
    assert f.infimum == min(a, 1.0)


def test_constant_one():
    assert ConstantOne()(0.99) == 1.0 and ConstantOne().infimum == 1.0
