from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from homrb.coeff import (
    ExpressionError,
    FieldElem,
    FieldMatrix,
    MultiPoly,
    NoSolution,
    SparseEchelon,
    field_equals,
    parse_coefficient,
    solve_linear,
)

VARS = ("q", "r")
q = FieldElem.variable("q")
rho1 = FieldElem.variable("rho1")
rho2 = FieldElem.variable("rho2")


def test_additive_inverse_cancels():
    assert (parse_coefficient("1+q") + parse_coefficient("-1-q")).is_zero()


def test_quotient_cancels():
    assert (rho1 / rho2) * rho2 == rho1


def test_evaluate_classical_bracket_coefficient():
    c = parse_coefficient("-(1/2)*(1+q)")
    assert c.evaluate({"q": 1}).to_fraction() == Fraction(-1)


def test_field_equals_examples():
    a, b = FieldElem.variable("a"), FieldElem.variable("b")
    assert field_equals((a - b) * b, a * b - b ** 2)
    assert field_equals(FieldElem(MultiPoly.constant(1), MultiPoly.constant(1) + MultiPoly.variable("q")),
                        FieldElem(MultiPoly.constant(2), (MultiPoly.constant(1) + MultiPoly.variable("q")).scale(2)))
    assert not field_equals(q ** 2 * rho1 / rho2, q * rho1 / rho2)


def test_solve_linear_examples():
    assert solve_linear(FieldMatrix.identity(3), "rank") == 3
    assert len(solve_linear(FieldMatrix.zeros(2, 4), "kernel_basis")) == 4
    assert solve_linear(FieldMatrix.from_rows([[1, q], [q, q * q]]), "rank") == 1


def test_solve_and_kernel_are_consistent():
    m = FieldMatrix.from_rows([[1, q, 0], [0, 1, rho1]])
    x = solve_linear(m, "solve", [1, 2])
    assert list(m.apply(x)) == [FieldElem.coerce(1), FieldElem.coerce(2)]
    for v in solve_linear(m, "kernel_basis"):
        assert all(c.is_zero() for c in m.apply(v))
    with pytest.raises(NoSolution):
        solve_linear(FieldMatrix.from_rows([[1, 1], [1, 1]]), "solve", [0, 1])


def test_inverse_and_singular():
    m = FieldMatrix.from_rows([[q, 1], [0, rho1]])
    assert (m @ m.inverse()).equals(FieldMatrix.identity(2))
    with pytest.raises(ZeroDivisionError):
        FieldMatrix.from_rows([[1, q], [1, q]]).inverse()


def test_parse_errors_carry_position():
    with pytest.raises(ExpressionError) as err:
        parse_coefficient("1 + * q")
    assert err.value.position >= 0
    with pytest.raises(ExpressionError):
        parse_coefficient("x + 1", ["q"])
    with pytest.raises((ExpressionError, ZeroDivisionError)):
        parse_coefficient("1/(q-q)")


def test_sparse_echelon_rank_and_membership():
    e = SparseEchelon()
    one = FieldElem.one()
    assert e.add({0: one, 2: q})
    assert e.add({1: one})
    assert not e.add({0: q, 1: rho1, 2: q * q})
    assert e.contains({0: one, 2: q})
    assert e.rank == 2


# ---- properties against evaluation at rational points ----------------------------------------

coeffs = st.integers(min_value=-3, max_value=3)
monomials = st.tuples(st.integers(0, 2), st.integers(0, 2))


@st.composite
def polys(draw):
    terms = draw(st.dictionaries(monomials, coeffs, max_size=4))
    return MultiPoly(VARS, {k: v for k, v in terms.items() if v})


@st.composite
def elems(draw):
    num = draw(polys())
    den = draw(polys())
    if den.is_zero():
        den = MultiPoly.constant(1, VARS)
    return FieldElem(num, den)


points = st.tuples(st.fractions(min_value=-5, max_value=5, max_denominator=4),
                   st.fractions(min_value=-5, max_value=5, max_denominator=4))


def _at(x: FieldElem, pt):
    den = x.den.evaluate(dict(zip(VARS, pt)))
    if FieldElem.coerce(den).is_zero():
        return None
    return x.evaluate(dict(zip(VARS, pt))).to_fraction()


@settings(max_examples=60, deadline=None)
@given(elems(), elems(), points)
def test_ring_operations_commute_with_evaluation(x, y, pt):
    vx, vy = _at(x, pt), _at(y, pt)
    if vx is None or vy is None:
        return
    for got, want in ((x + y, vx + vy), (x - y, vx - vy), (x * y, vx * vy)):
        val = _at(got, pt)
        if val is not None:
            assert val == want


@settings(max_examples=60, deadline=None)
@given(elems(), elems(), elems())
def test_field_axioms(x, y, z):
    assert x + y == y + x
    assert x * y == y * x
    assert (x + y) * z == x * z + y * z
    assert (x * y) * z == x * (y * z)
    if not y.is_zero():
        assert (x / y) * y == x


@settings(max_examples=60, deadline=None)
@given(elems())
def test_printed_form_parses_back(x):
    assert parse_coefficient(str(x), VARS) == x


@settings(max_examples=25, deadline=None)
@given(st.lists(st.lists(st.integers(-2, 2), min_size=3, max_size=3), min_size=3, max_size=3))
def test_rank_nullity(rows):
    m = FieldMatrix.from_rows(rows)
    assert solve_linear(m, "rank") + len(solve_linear(m, "kernel_basis")) == 3
