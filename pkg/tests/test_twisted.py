import json
import random
from fractions import Fraction

import pytest

from artifact.modules_core import module_cohomology_dims, realize
from artifact.twisted import (ComplexError, TwistedComplex, apply_braid, braid_relations_check,
                              central_shift_check, cone, direct_sum, ext_table, ext_total,
                              is_acyclic, is_minimal, is_shifted_projective, orbit_search,
                              projective, quasi_iso_search, reduce, same_complex, shift,
                              spherical_check, twist, untwist)
from artifact.zigzag import zigzag

A22 = zigzag(2, 2)
A32 = zigzag(3, 2)


def P(k, alg=A22, i=0, j=0):
    return projective(alg, k, i, j)


def test_delta_squared_and_degree_checks():
    with pytest.raises(ComplexError):
        TwistedComplex(A22, [(1, 0, 0), (2, 0, 0)], {(1, 0): {"(2|1)": 1}})   # wrong degree
    with pytest.raises(ComplexError):
        TwistedComplex(A22, [(1, 0, 0), (2, 0, 0)], {(1, 0): {"(1|2)": 1}})   # wrong endpoints
    TwistedComplex(A22, [(1, 0, 1), (2, 0, 0)], {(1, 0): {"(2|1)": 1}})


@pytest.mark.parametrize("n", [1, 2, 3])
def test_twist_of_neighbour_is_arrow_cone(n):
    A = zigzag(2, n)
    T = twist(P(2, A), 1)
    want = {0: 1}
    want[n - 1] = want.get(n - 1, 0) + 1
    assert module_cohomology_dims(realize(T)) == want
    assert sorted(T.gens) == [(1, 0, 1), (2, 0, 0)]


def test_twist_distant_and_self():
    assert reduce(twist(P(3, A32), 1)).gens == [(3, 0, 0)]
    assert reduce(untwist(P(3, A32), 1)).gens == [(3, 0, 0)]
    # observed fixture: T_1 P_1 = P_1{n}[1], the inverse shifts the other way
    assert reduce(twist(P(1), 1)).gens == [(1, 2, 1)]
    assert reduce(untwist(P(1), 1)).gens == [(1, -2, -1)]


def test_untwist_inverts_twist():
    assert reduce(untwist(twist(P(2), 1), 1)).gens == [(2, 0, 0)]
    assert apply_braid("1 1 -1 -1", P(2)).gens == [(2, 0, 0)]
    assert apply_braid("1 -1", P(1)).gens == [(1, 0, 0)]


def test_twist_untwist_random_corpus():
    r = random.Random(3)
    for _ in range(10):
        word = [r.choice([1, 2, -1, -2]) for _ in range(r.randint(1, 4))]
        C = apply_braid(word, P(r.randint(1, 2)))
        for k in (1, 2):
            back = reduce(twist(untwist(C, k), k))
            assert quasi_iso_search(back, C, r) is not None


def test_reduce_cancels_identity_cone():
    Z = cone({(0, 0): {"e1": 1}}, P(1), P(1))
    assert is_acyclic(Z)
    assert reduce(Z).gens == []


def test_reduce_is_minimal_and_quasi_isomorphic():
    r = random.Random(1)
    C = apply_braid("1 2 -1", P(1), reduce_each=False)
    R = reduce(C)
    assert is_minimal(R)
    assert quasi_iso_search(R, C, r) is not None


def test_spherical_check():
    assert spherical_check(P(1))[0]
    assert not spherical_check(direct_sum(P(1), P(2)))[0]
    r = random.Random(5)
    for _ in range(5):
        word = [r.choice([1, 2]) for _ in range(4)]
        assert spherical_check(apply_braid(word, P(1)))[0]


def test_ext_tables():
    assert ext_table(P(1), P(1)) == ({(0, 0): 1, (2, 0): 1}, {0: 1, 2: 1})
    assert ext_table(P(1, A32), P(3, A32)) == ({}, {})
    T = twist(P(2), 1)
    assert ext_total(T, T) == 2


def test_k_class():
    assert P(2).k_class() == [0, 1]
    T = reduce(twist(P(2), 1))
    assert T.k_class() == [-1, 1]
    assert direct_sum(T, shift(T, 1)).k_class() == [0, 0]


def test_json_round_trip():
    T = reduce(twist(P(2), 1))
    data = json.loads(json.dumps(T.to_json(), default=str))
    U = TwistedComplex.from_json(data)
    assert same_complex(T, U)
    with pytest.raises(ComplexError):
        TwistedComplex.from_json({"generators": [{"k": 1}]})


def test_same_complex_up_to_relabelling():
    C = TwistedComplex(A22, [(1, 0, 1), (2, 0, 0)], {(1, 0): {"(2|1)": Fraction(1)}})
    D = C.permuted([1, 0])
    assert same_complex(C, D)
    E = TwistedComplex(A22, [(1, 0, 1), (2, 0, 0)], {(1, 0): {"(2|1)": Fraction(2)}})
    assert not same_complex(C, E)


def test_braid_relations_m3():
    rows = braid_relations_check(A32)
    assert rows and all(r["pass"] for r in rows)
    assert {r["relation"] for r in rows} == {"witnessed", "literal"}


@pytest.mark.parametrize("n", [2, 3])
def test_central_shift(n):
    A = zigzag(2, n)
    for power, (i, j) in ((1, (3 * n, 4)), (2, (6 * n, 8))):
        rows = central_shift_check(A, power)
        assert all(r["pass"] for r in rows)
        assert [r["observed"] for r in rows] == [[[1, i, j]], [[2, i, j]]]


def test_orbit_search():
    res = orbit_search(P(1), lambda C: is_shifted_projective(C, 2), 2)
    assert res.word is not None and len(res.word.split()) <= 2
    assert is_shifted_projective(apply_braid(res.word, P(1)), 2)
    res = orbit_search(P(1), lambda C: ext_total(C, P(1)) == 1, 3)
    assert res.word is not None
    assert ext_total(apply_braid(res.word, P(1)), P(1)) == 1


def test_orbit_search_budget_and_jobs():
    res = orbit_search(P(1), lambda C: is_shifted_projective(C, 2), 0)
    assert res.word is None and res.exhausted
    a = orbit_search(P(1), P(2, i=2, j=1), 3)
    b = orbit_search(P(1), P(2, i=2, j=1), 3, jobs=2)
    assert a.to_json() == b.to_json()
