from fractions import Fraction

import pytest

from artifact.exact_core import (ExactnessError, FiniteComplex, ShapeError, SparseMatrix,
                                 determinant, kernel, q, qstr, rank, solve, solve_linear)


def test_q_parses_fraction_strings():
    assert q("3/6") == Fraction(1, 2)
    assert q(4) == 4
    assert qstr(Fraction(-2, 4)) == "-1/2"
    with pytest.raises(ExactnessError):
        q(0.5)


def test_identity_system():
    x, ker = solve_linear(SparseMatrix.identity(3), [1, 2, 3])
    assert x == {0: 1, 1: 2, 2: 3}
    assert ker == []


def test_zero_system_has_full_kernel():
    x, ker = solve_linear(SparseMatrix(2, 2), [0, 0])
    assert x == {}
    assert len(ker) == 2


def test_rank_one_system():
    m = SparseMatrix.from_dense([[2, 1], [4, 2]])
    x, ker = solve_linear(m, [1, 2])
    dense = [x.get(i, 0) for i in range(2)]
    assert m.matvec(dict(enumerate(dense))) == {0: 1, 1: 2}
    assert len(ker) == 1
    assert m.matvec(ker[0]) == {}


def test_inconsistent_system():
    m = SparseMatrix.from_dense([[1, 1], [1, 1]])
    with pytest.raises(ExactnessError):
        solve_linear(m, [1, 2])
    assert solve(m, [1, 2]) is None


def test_rank_and_kernel_agree():
    m = SparseMatrix.from_dense([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    assert rank(m) == 2
    assert len(kernel(m)) == 1


def test_determinant():
    assert determinant([[2, 1, 0], [1, 2, 1], [0, 1, 2]]) == 4
    assert determinant([[0, 1], [-1, 0]]) == 1


def test_acyclic_two_term_complex():
    cx = FiniteComplex({0: ["a"], 1: ["b"]}, {0: SparseMatrix.from_dense([[1]])})
    assert cx.check_d_squared()
    assert cx.cohomology().dims() == {}


def test_zero_differential_cohomology_is_chains():
    cx = FiniteComplex({0: ["a", "b"], 1: ["c"]})
    assert cx.cohomology().dims() == {0: 2, 1: 1}


def test_three_dim_hand_example():
    cx = FiniteComplex({0: ["x", "y"], 1: ["z"]}, {0: SparseMatrix.from_dense([[1, 1]])})
    h = cx.cohomology()
    assert h.dim(0) == 1 and h.dim(1) == 0
    assert cx.euler_characteristic() == 1


def test_coboundary_preimage():
    cx = FiniteComplex({0: ["x"], 1: ["y", "z"]}, {0: SparseMatrix.from_dense([[1], [2]])})
    h = cx.cohomology()
    assert h.is_coboundary(1, {0: 3, 1: 6})
    pre = h.preimage(1, {0: 3, 1: 6})
    assert cx.diff(0).matvec(pre) == {0: 3, 1: 6}
    assert not h.is_coboundary(1, {0: 1})


def test_shape_error():
    with pytest.raises(ShapeError):
        FiniteComplex({0: ["x"], 1: ["y"]}, {0: SparseMatrix(2, 1)})
