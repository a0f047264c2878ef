
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from debtnet.errors import InfeasibleError, UnboundedError
from debtnet.lp import LinearProgram

from . import oracles


def _lp(c, A, b, exact=True):
    lp = LinearProgram(len(c), exact)
    for row, v in zip(A, b):
        lp.add(dict(enumerate(row)), "<=", v)
    return lp


@given(
    st.integers(1, 3).flatmap(
        lambda nv: st.tuples(
            st.lists(st.integers(-3, 5), min_size=nv, max_size=nv),
            st.lists(st.lists(st.integers(-2, 4), min_size=nv, max_size=nv), min_size=1, max_size=3),
        )
    ),
    st.lists(st.integers(0, 6), min_size=3, max_size=3),
)
@settings(max_examples=200, deadline=None)
def test_matches_vertex_enumeration(cA, rhs):
    c, A = cA
    # a box keeps the problem bounded
    A = A + [[int(k == j) for k in range(len(c))] for j in range(len(c))]
    b = rhs[: len(A) - len(c)] + [5] * len(c)
    x = _lp(c, A, b).solve([("max", dict(enumerate(c)))])
    assert all(v >= 0 for v in x)
    assert all(sum(r[k] * x[k] for k in range(len(c))) <= v for r, v in zip(A, b))
    assert sum(ci * xi for ci, xi in zip(c, x)) == oracles.lp_vertex_max(c, A, b)


def test_equality_and_ge_constraints():
    lp = LinearProgram(2)
    lp.add({0: 1, 1: 1}, "==", 3)
    lp.add({0: 1}, ">=", 1)
    assert lp.solve([("max", {1: 1})]) == [1, 2]


def test_lexicographic_tie_break():
    lp = LinearProgram(2)
    lp.add({0: 1, 1: 1}, "<=", 2)
    x = lp.solve([("max", {0: 1, 1: 1}), ("max", {0: 1})])
    assert x == [2, 0]
    lp2 = LinearProgram(2)
    lp2.add({0: 1, 1: 1}, "<=", 2)
    assert lp2.solve([("max", {0: 1, 1: 1}), ("max", {1: 1})]) == [0, 2]


def test_infeasible_and_unbounded():
    lp = LinearProgram(1)
    lp.add({0: 1}, "<=", 1)
    lp.add({0: 1}, ">=", 2)
    with pytest.raises(InfeasibleError):
        lp.solve([("max", {0: 1})])
    lp = LinearProgram(1)
    with pytest.raises(UnboundedError):
        lp.solve([("max", {0: 1})])


def test_float_mode():
    lp = LinearProgram(2, exact=False)
    lp.add({0: 1, 1: 2}, "<=", 4)
    lp.add({0: 3, 1: 1}, "<=", 6)
    x = lp.solve([("max", {0: 1, 1: 1})])
    assert abs(x[0] - 1.6) < 1e-9 and abs(x[1] - 1.2) < 1e-9


def test_bad_sense_and_index():
    lp = LinearProgram(1)
    with pytest.raises(ValueError):
        lp.add({0: 1}, "<", 1)
    with pytest.raises(IndexError):
        lp.add({1: 1}, "<=", 1)
