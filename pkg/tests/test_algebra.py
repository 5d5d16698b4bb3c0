import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from homrb.algebra import (
    AlgebraError,
    BilinearOp,
    HomAlgebra,
    HomModule,
    Morphism,
    apply_product,
    check_morphism,
    classical_associator,
    hom_associator,
)
from homrb.coeff import FieldElem, FieldMatrix, parse_coefficient, vec_is_zero, zero_vector
from homrb.files import (
    AlgebraFileError,
    algebra_from_dict,
    algebra_to_dict,
    algebras_equal,
    dumps_algebra,
    loads_algebra,
)
from homrb.fixtures import DATA_FILES, load_data


def coeff(A, text):
    return parse_coefficient(text, A.parameters)


def test_jackson_bracket_x1_x2(jackson):
    x1, x2, _ = jackson.basis()
    got = apply_product(jackson, "bracket", x1, x2)
    assert got == (coeff(jackson, "0"), coeff(jackson, "-2*q"), coeff(jackson, "0"))


def test_zero_tensor_product_vanishes():
    A = HomAlgebra("z", HomModule.plain(2), {"m": BilinearOp.zero("m", 2)})
    x = A.vector([1, 2])
    assert vec_is_zero(apply_product(A, None, x, x))


def test_example1_x2_x3(example1):
    _, x2, x3 = example1.basis()
    assert apply_product(example1, "mul", x2, x3) == (coeff(example1, "0"), coeff(example1, "0"), coeff(example1, "b"))


def test_example1_hom_associator_vanishes_but_classical_does_not(example1):
    x1, _, x3 = example1.basis()
    assert vec_is_zero(hom_associator(example1, "mul", x1, x1, x3))
    assert classical_associator(example1, "mul", x1, x1, x3) == (
        coeff(example1, "0"), coeff(example1, "0"), coeff(example1, "(a-b)*b"))
    assert vec_is_zero(hom_associator(example1, "mul", zero_vector(3), x1, x3))


def test_identity_and_zero_morphisms(jackson, example1):
    assert check_morphism(Morphism(jackson, jackson, FieldMatrix.identity(3)), [("bracket", "bracket")],
                          check_operators=[("R1", "R1")])
    assert check_morphism(Morphism(example1, jackson, FieldMatrix.zeros(3, 3)), [("mul", "bracket")])


def test_symbolic_scaling_is_a_morphism_of_dual_numbers():
    table = [[(1, 0), (0, 1)], [(0, 1), (0, 0)]]
    A = HomAlgebra("dual", HomModule.plain(2), {"m": BilinearOp("m", table)}, parameters=("c",))
    f = Morphism(A, A, FieldMatrix.diagonal([1, FieldElem.variable("c")]))
    assert check_morphism(f, [("m", "m")])
    bad = Morphism(A, A, FieldMatrix.diagonal([FieldElem.variable("c"), 1]))
    rep = check_morphism(bad, [("m", "m")])
    assert not rep and not vec_is_zero(rep.witness.defect)


def test_bilinear_op_algebra(example1):
    mu = example1.product()
    x, y = example1.vector([1, 2, 3]), example1.vector([0, 1, -1])
    assert (mu - mu.opposite())(x, y) == tuple(a - b for a, b in zip(mu(x, y), mu(y, x)))
    assert mu.scaled(2)(x, y) == tuple(FieldElem.coerce(2) * c for c in mu(x, y))
    assert mu.then(FieldMatrix.identity(3)).equals(mu)


def test_validation_errors():
    with pytest.raises(AlgebraError):
        HomAlgebra("bad", HomModule.plain(2), {})
    with pytest.raises(AlgebraError):
        HomAlgebra("bad", HomModule.plain(2), {"m": BilinearOp.zero("m", 2)}, kind="dendriform")
    with pytest.raises(AlgebraError):
        HomAlgebra("bad", HomModule.plain(2), {"m": BilinearOp.zero("m", 2)},
                   operators={"R": FieldMatrix.diagonal([FieldElem.variable("t"), 1])})
    A = load_data("jackson-sl2")
    with pytest.raises(AlgebraError):
        A.operator()   # two operators, none named


@pytest.mark.parametrize("name", DATA_FILES)
def test_data_files_round_trip(name):
    A = load_data(name)
    B = loads_algebra(dumps_algebra(A))
    assert algebras_equal(A, B)
    assert dumps_algebra(B) == dumps_algebra(A)


def test_file_errors_name_the_location():
    good = algebra_to_dict(load_data("field-weight-m1"))
    bad = dict(good, products={"mul": [[["1", "2"]]]})
    with pytest.raises(AlgebraFileError) as err:
        algebra_from_dict(bad)
    assert "products.mul" in str(err.value)
    with pytest.raises(AlgebraFileError):
        algebra_from_dict(dict(good, weight="lam"))
    with pytest.raises(AlgebraFileError) as err:
        loads_algebra("{\n  \"dim\": ")
    assert err.value.line is not None
    with pytest.raises(AlgebraFileError):
        algebra_from_dict(dict(good, format="other/9"))


small = st.integers(-3, 3)


@settings(max_examples=30, deadline=None)
@given(st.lists(small, min_size=8, max_size=8), st.lists(small, min_size=4, max_size=4))
def test_serialization_round_trip_random_2dim(entries, alpha):
    table = [[tuple(entries[4 * i + 2 * j: 4 * i + 2 * j + 2]) for j in range(2)] for i in range(2)]
    A = HomAlgebra("r", HomModule.plain(2, FieldMatrix.from_rows([alpha[:2], alpha[2:]])),
                   {"m": BilinearOp("m", table)}, operators={"R": FieldMatrix.from_rows([alpha[2:], alpha[:2]])},
                   weight=FieldElem.coerce(entries[0]))
    text = dumps_algebra(A)
    json.loads(text)
    assert algebras_equal(A, loads_algebra(text))
