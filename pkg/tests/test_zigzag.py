import itertools

import pytest

from artifact.zigzag import AlgebraError, ZigzagAlgebra, zigzag


def test_a22_basis_and_degrees():
    A = zigzag(2, 2)
    assert A.dim() == 6
    labels = {b.label: b.deg for b in A.basis}
    assert labels == {"e1": 0, "e2": 0, "(2|1)": 0, "(1|2)": 2, "(1|2|1)": 2, "(2|1|2)": 2}


def test_a1n_is_dual_numbers():
    A = zigzag(1, 3)
    assert A.dim() == 2
    assert A.deg("t") == 3
    assert A.mul_basis("t", "t") is None


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_dimension_formula(m):
    assert zigzag(m, 2).dim() == 4 * m - 2


def test_products():
    A = zigzag(3, 2)
    assert A.mul_basis("(2|1)", "e1") == "(2|1)"
    assert A.mul_basis("(3|2)", "(2|1)") is None
    assert A.mul_basis("(2|1)", "(1|2)") == "(2|3|2)"
    assert A.mul_basis("(2|3)", "(3|2)") == "(2|3|2)"


@pytest.mark.parametrize("m,n", [(3, 2), (2, 1), (1, 1), (4, 3)])
def test_validate_passes(m, n):
    assert zigzag(m, n).validate() == []


def test_corrupted_product_is_reported():
    A = zigzag(2, 2)
    prods = dict(A.products)
    prods[("(1|2)", "(2|1)")] = "e1"
    bad = ZigzagAlgebra(2, 2, A.basis, prods)
    errs = bad.validate()
    assert errs


def test_associativity_exhaustive():
    A = zigzag(3, 2)
    labels = [b.label for b in A.basis]
    for a, b, c in itertools.product(labels, repeat=3):
        assert A.mul(A.mul({a: 1}, {b: 1}), {c: 1}) == A.mul({a: 1}, A.mul({b: 1}, {c: 1}))


def test_json_round_trip_and_rejection():
    A = zigzag(2, 3)
    assert ZigzagAlgebra.from_json(A.to_json()).to_json() == A.to_json()
    data = A.to_json()
    data["basis"][0]["deg"] = 5
    with pytest.raises(AlgebraError):
        ZigzagAlgebra.from_json(data)


def test_bad_parameters():
    with pytest.raises(AlgebraError):
        zigzag(0, 2)
