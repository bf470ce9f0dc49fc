import pytest

from braidkit import linalg
from braidkit.qcoeff import ONE, QINV, ZERO, q


def test_inverse_round_trip():
    a = [[q, ONE], [ONE, QINV]]  # det = 0
    with pytest.raises(linalg.SingularMatrixError):
        linalg.inverse(a)
    b = [[q, ONE], [ZERO, QINV]]
    assert linalg.matmul(b, linalg.inverse(b)) == linalg.identity(2)


def test_transpose():
    assert linalg.transpose([[ONE, q], [ZERO, QINV]]) == [[ONE, ZERO], [q, QINV]]


def test_rref_pivots_are_most_significant():
    rows = [{"a": ONE, "b": q}, {"a": q, "b": ONE, "c": ONE}]
    echelon = linalg.rref(rows, ["c", "b", "a"])
    assert [min(r, key=["c", "b", "a"].index) for r in echelon] == ["c", "b"]
    assert all(r[min(r, key=["c", "b", "a"].index)] == ONE for r in echelon)


def test_nullspace():
    rows = [{"x": ONE, "y": -q}]
    basis = linalg.nullspace(rows, ["x", "y"])
    assert basis == [{"y": ONE, "x": q}]
    assert linalg.nullspace([], ["x"]) == [{"x": ONE}]
