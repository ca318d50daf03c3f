import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import linprog

from balance_forge.simplex import solve_standard


@st.composite
def small_lps(draw):
    n = draw(st.integers(1, 5))
    mu = draw(st.integers(0, 4))
    me = draw(st.integers(0, 2))
    ints = st.integers(0, 5)
    c = np.array([draw(st.integers(-3, 5)) for _ in range(n)], dtype=float)
    A_ub = np.array([[draw(ints) for _ in range(n)] for _ in range(mu)], dtype=float).reshape(mu, n)
    b_ub = np.array([draw(ints) for _ in range(mu)], dtype=float)
    A_eq = np.array([[draw(ints) for _ in range(n)] for _ in range(me)], dtype=float).reshape(me, n)
    b_eq = np.array([draw(ints) for _ in range(me)], dtype=float)
    return c, A_ub, b_ub, A_eq, b_eq


@given(small_lps())
def test_agrees_with_highs(lp):
    c, A_ub, b_ub, A_eq, b_eq = lp
    ref = linprog(c, A_ub=A_ub if len(b_ub) else None, b_ub=b_ub if len(b_ub) else None,
                  A_eq=A_eq if len(b_eq) else None, b_eq=b_eq if len(b_eq) else None,
                  bounds=(0, None), method="highs")
    res = solve_standard(c, A_ub, b_ub, A_eq, b_eq)
    status = {0: "optimal", 2: "infeasible", 3: "unbounded"}[ref.status]
    assert res.status == status
    if status == "optimal":
        assert res.objective == pytest.approx(ref.fun, abs=1e-7)
        assert (res.x >= 0).all()
        if len(b_ub):
            assert (A_ub @ res.x <= b_ub + 1e-7).all()
        if len(b_eq):
            assert np.allclose(A_eq @ res.x, b_eq, atol=1e-7)


def test_degenerate_cycling_example_terminates():
    # Beale's example cycles under the textbook rule; Bland's rule must not
    c = np.array([-0.75, 150, -0.02, 6])
    A = np.array([[0.25, -60, -0.04, 9], [0.5, -90, -0.02, 3], [0, 0, 1, 0]])
    b = np.array([0, 0, 1])
    res = solve_standard(c, A, b, np.zeros((0, 4)), np.zeros(0))
    assert res.status == "optimal"
    assert res.objective == pytest.approx(-0.05)
