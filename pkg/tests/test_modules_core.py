import random
from fractions import Fraction

import pytest

from artifact.modules_core import (AInfModule, ModuleError, bar_tensor, canonical_map_on_cohomology,
                                   collapse_hom_compare, free_module, hom_complex, hom_mu1,
                                   module_cohomology, module_cohomology_dims, module_cone,
                                   module_quasi_iso_search, projective_module, realize,
                                   scale_transfer, shift_module, strict_hom, validate_module)
from artifact.twisted import ComplexError, apply_braid, cone, projective, twist
from artifact.zigzag import zigzag

A22 = zigzag(2, 2)


def identity_hom(M):
    return strict_hom(M, M, 0, {m: {m: Fraction(1)} for m in M.labels})


def test_free_and_projective_modules_validate():
    assert validate_module(free_module(A22)) == []
    assert validate_module(projective_module(A22, 1)) == []


def test_sign_flip_is_caught():
    P = projective_module(A22, 1)
    key = next(k for k in P.mu if k[1] and not A22.is_idempotent(k[1][0]))
    mu = {k: dict(v) for k, v in P.mu.items()}
    mu[key] = {o: -c for o, c in mu[key].items()}
    assert validate_module(AInfModule(A22, P.basis, mu))


def test_realized_twisted_complex_validates():
    M = realize(apply_braid("1 2 -1", projective(A22, 2)))
    assert validate_module(M) == []


@pytest.mark.parametrize("m,n", [(2, 2), (3, 2), (2, 3)])
def test_spherical_endomorphisms(m, n):
    A = zigzag(m, n)
    for k in range(1, m + 1):
        P = projective_module(A, k)
        assert hom_complex(P, P).cohomology_dims() == {0: 1, n: 1}


def test_chain_homs():
    A = zigzag(3, 2)
    P1, P2, P3 = (projective_module(A, k) for k in (1, 2, 3))
    assert sum(hom_complex(P1, P2).cohomology_dims().values()) == 1
    assert hom_complex(P1, P3).cohomology_dims() == {}


def test_cone_of_identity_is_acyclic():
    P = projective_module(A22, 1)
    K = module_cone(identity_hom(P))
    assert validate_module(K) == []
    assert module_cohomology_dims(K) == {}


def test_identity_is_closed():
    P = realize(twist(projective(A22, 2), 1))
    assert hom_mu1(identity_hom(P), 3).is_zero()


def test_cone_of_arrow_matches_twist():
    # left multiplication by (2|1): P_1 -> P_2
    C = cone({(0, 0): {"(2|1)": Fraction(1)}}, projective(A22, 1, 0, 0), projective(A22, 2))
    assert module_cohomology_dims(realize(C)) == {0: 1, A22.n - 1: 1}


def test_quasi_iso_search():
    r = random.Random(0)
    P1 = projective_module(zigzag(3, 2), 1)
    P2 = projective_module(zigzag(3, 2), 2)
    assert module_quasi_iso_search(P1, P1, r) is not None
    assert module_quasi_iso_search(P1, P2, r) is None
    assert module_quasi_iso_search(P1, shift_module(P1), r) is None


def test_bar_tensor_is_quasi_isomorphic():
    P = projective_module(A22, 1)
    bt = bar_tensor(P, (-4, 4))
    assert bt.inner[0] <= -2 and bt.inner[1] >= 2
    assert module_cohomology(bt.module).check_d_squared()
    for t, (hb, hm, rk) in canonical_map_on_cohomology(bt, P).items():
        assert hb == hm == rk


def test_bar_tensor_of_twisted_complex():
    M = realize(apply_braid("1 2", projective(A22, 1)))
    bt = bar_tensor(M, (-3, 4))
    for hb, hm, rk in canonical_map_on_cohomology(bt, M).values():
        assert hb == hm == rk


def test_bar_tensor_of_acyclic_module():
    K = realize(cone({(0, 0): {"e1": Fraction(1)}}, projective(A22, 1), projective(A22, 1)))
    bt = bar_tensor(K, (-4, 4))
    assert all(hb == 0 for hb, _, _ in canonical_map_on_cohomology(bt, K).values())


def test_bar_tensor_errors():
    with pytest.raises(ModuleError):
        bar_tensor(projective_module(A22, 1), (0, 0))
    # n = 2 without internal degrees: length is not bounded by a degree window
    with pytest.raises(ModuleError):
        bar_tensor(realize(projective(A22, 1).collapse()), (-4, 4))


def test_bar_tensor_without_internal_degrees_for_large_n():
    A = zigzag(2, 3)
    M = realize(projective(A, 1).collapse())
    bt = bar_tensor(M, (-2, 5))
    for hb, hm, rk in canonical_map_on_cohomology(bt, M).values():
        assert hb == hm == rk


def test_collapse_hom_compare_projectives():
    tb, tc, injective, bijective = collapse_hom_compare(projective(A22, 1), projective(A22, 1))
    assert tb == tc == {0: 1, 2: 1}
    assert injective and bijective


def test_collapse_hom_compare_twisted():
    C = apply_braid("1 -2", projective(A22, 1))
    assert collapse_hom_compare(C, C)[3]


def test_scale_transfer():
    A4 = zigzag(2, 4)
    C = apply_braid("1 2", projective(A4, 1))
    D = scale_transfer(C, 2)
    assert D.alg.n == 2
    assert [g[1] for g in D.gens] == [g[1] // 2 for g in C.gens]
    with pytest.raises(ComplexError):
        scale_transfer(projective(A4, 1, 1, 0).__class__(A4, [(1, 0, 0), (2, 1, 0)], {}), 2)


def test_module_json_round_trip():
    M = realize(twist(projective(A22, 2), 1))
    again = AInfModule.from_json(M.to_json())
    assert again.to_json() == M.to_json()
