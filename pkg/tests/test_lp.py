from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from glnq.errors import Infeasible
from glnq.lp import Unbounded, simplex_max

scipy_optimize = pytest.importorskip("scipy.optimize")

small = st.integers(-4, 6)


@st.composite
def bounded_lps(draw):
    nv = draw(st.integers(1, 4))
    mu = draw(st.integers(1, 4))
    me = draw(st.integers(0, 2))
    c = draw(st.lists(small, min_size=nv, max_size=nv))
    A = [draw(st.lists(small, min_size=nv, max_size=nv)) for _ in range(mu)]
    b = draw(st.lists(st.integers(0, 10), min_size=mu, max_size=mu))
    # a box keeps the LP bounded
    A += [[1 if j == i else 0 for j in range(nv)] for i in range(nv)]
    b += [draw(st.integers(1, 8)) for _ in range(nv)]
    Aeq = [draw(st.lists(small, min_size=nv, max_size=nv)) for _ in range(me)]
    beq = [draw(st.integers(-3, 6)) for _ in range(me)]
    return c, A, b, Aeq, beq


@given(bounded_lps())
@settings(max_examples=150, deadline=None)
def test_matches_scipy(lp):
    c, A, b, Aeq, beq = lp
    ref = scipy_optimize.linprog(
        [-x for x in c], A_ub=A, b_ub=b, A_eq=Aeq or None, b_eq=beq or None, bounds=(0, None), method="highs"
    )
    if ref.status == 2:
        with pytest.raises(Infeasible):
            simplex_max(c, A, b, Aeq, beq)
        return
    assume(ref.status == 0)
    res = simplex_max(c, A, b, Aeq, beq)
    assert abs(float(res.value) + ref.fun) < 1e-7
    # exact feasibility of the primal point
    assert all(x >= 0 for x in res.x)
    assert all(sum(Fraction(a) * x for a, x in zip(row, res.x)) <= bi for row, bi in zip(A, b))
    assert all(sum(Fraction(a) * x for a, x in zip(row, res.x)) == bi for row, bi in zip(Aeq, beq))
    # strong duality with dual feasibility
    assert all(y >= 0 for y in res.y_ub)
    assert sum(y * bi for y, bi in zip(res.y_ub, b)) + sum(y * bi for y, bi in zip(res.y_eq, beq)) == res.value
    for j in range(len(c)):
        col = sum(res.y_ub[i] * A[i][j] for i in range(len(A))) + sum(res.y_eq[i] * Aeq[i][j] for i in range(len(Aeq)))
        assert col >= c[j]


def test_textbook_example():
    res = simplex_max([3, 5], [[1, 0], [0, 2], [3, 2]], [4, 12, 18])
    assert res.value == 36 and res.x == (2, 6)
    assert res.y_ub == (0, Fraction(3, 2), 1)


def test_negative_rhs_and_equalities():
    # x + y = 3, x - y >= 1  (written -x + y <= -1), max y
    res = simplex_max([0, 1], [[-1, 1]], [-1], [[1, 1]], [3])
    assert res.value == 1 and res.x == (2, 1)


def test_unbounded_and_infeasible():
    with pytest.raises(Unbounded):
        simplex_max([1, 0], [[0, 1]], [1])
    with pytest.raises(Infeasible):
        simplex_max([1], [[1]], [-1])
    with pytest.raises(Infeasible):
        simplex_max([1], [], [], [[1], [1]], [1, 2])


def test_degenerate_cycling_example():
    # Beale's example cycles under the textbook rule; Bland's rule terminates
    c = [Fraction(3, 4), -150, Fraction(1, 50), -6]
    A = [[Fraction(1, 4), -60, Fraction(-1, 25), 9], [Fraction(1, 2), -90, Fraction(-1, 50), 3], [0, 0, 1, 0]]
    res = simplex_max(c, A, [0, 0, 1])
    assert res.value == Fraction(1, 20)
