import json
import random
from fractions import Fraction

import pytest

from artifact.equivariance import (EquivarianceError, HomotopyAction, LaurentHom, RationalRep,
                                   bar_d, cochain_d, cocycle_defect, epsilon, homotopy_extend,
                                   killing_certificate, killing_counterexample, killing_relation,
                                   literal_check, naive_rho1, pipeline_for_word, random_gauge,
                                   sampled_check, solve_killing, strictify, verify_group_cohomology,
                                   verify_weak, weak_action_solve, weight_decomposition)
from artifact.twisted import apply_braid, direct_sum, projective, reduce, shift, twist
from artifact.zigzag import zigzag

A22 = zigzag(2, 2)


def test_group_differentials_square_to_zero():
    v = (3, 0)
    for r in range(1, 4):
        b = {((1, -2, 3)[:r], v): Fraction(1)}
        assert bar_d(bar_d(b, r), r + 1) == {}
        c = {((2, 5, -1)[:r - 1], v): Fraction(1)}
        assert cochain_d(cochain_d(c, r), r + 1) == {}


def test_group_cohomology_small():
    rep = verify_group_cohomology(RationalRep({0: 2, 3: 1}))
    assert rep["ok"]
    assert rep["weights"]["0"] == {"bar": [2, 0, 0], "cochain": [2, 0, 0]}
    assert rep["weights"]["3"] == {"bar": [1, 0, 0], "cochain": [0, 0, 0]}


def test_group_cohomology_random_reps():
    r = random.Random(0)
    for _ in range(20):
        V = RationalRep.random(r)
        assert verify_group_cohomology(V)["ok"], V


def test_killing_for_projective_and_twist():
    for C in (projective(A22, 1, bigraded=False), reduce(twist(projective(A22, 2), 1)).collapse()):
        alpha = solve_killing(C)
        assert alpha is not None
        rel = killing_relation(C, alpha)
        assert rel == {"closed": True, "omega_relation": True, "alpha_bounds": True}


def test_killing_counterexample():
    C = killing_counterexample()
    assert solve_killing(C) is None
    cert = killing_certificate(C)
    assert cert["nonzero"] and cert["coords"] == ["-2", "0"]


def test_weak_action_needs_minimal_and_rigid():
    C = direct_sum(projective(A22, 1), projective(A22, 1)).collapse()
    with pytest.raises(EquivarianceError):
        weak_action_solve(C)


def test_naive_action_is_homotopy_action():
    Cb = direct_sum(projective(A22, 1), shift(projective(A22, 1), 1))
    Cc, rho1 = naive_rho1(Cb)
    rho2 = verify_weak(rho1)
    assert rho2 is not None
    act = homotopy_extend(rho1, rho2)
    assert literal_check(act) == [] and sampled_check(act, 10) == []


def test_obstruction_repairs_injected_fault():
    # a closed but non-exact change of rho^2 makes epsilon^3 nonzero; the
    # level-3 step has to correct rho^2 by a closed eta
    Cb = direct_sum(projective(A22, 1), shift(projective(A22, 1), 1))
    Cc, rho1 = naive_rho1(Cb)
    rho2 = verify_weak(rho1)
    bad = rho2.add(LaurentHom(Cc, 2, -1, {(1, 0, "e1", (1, 0)): 1, (1, 0, "e1", (0, 2)): -3}))
    assert not epsilon({1: rho1, 2: bad}, 3).is_zero()
    act = homotopy_extend(rho1, bad)
    assert [(s.s, s.eta_terms) for s in act.steps] == [(3, 2)]
    assert literal_check(act) == [] and sampled_check(act, 10) == []


def test_checks_catch_a_broken_action():
    Cc, rho1 = naive_rho1(direct_sum(projective(A22, 1), shift(projective(A22, 1), 1)))
    act = homotopy_extend(rho1, verify_weak(rho1))
    broken = dict(act.rho)
    broken[1] = rho1.add(LaurentHom(Cc, 1, 0, {(0, 0, "e1", (1,)): 1}))
    bad = HomotopyAction(Cc, broken, act.R)
    assert not cocycle_defect(broken, 2).is_zero()
    assert literal_check(bad) and sampled_check(bad, 5)


@pytest.mark.parametrize("word,j", [("1", 2), ("1 2", 1), ("-2 -1", 1), ("1 1", 2)])
def test_pipeline(word, j):
    rep, act = pipeline_for_word(word, j)
    assert rep["ok"], rep
    assert rep["ki_vanishes"] and rep["weak_verified"]
    assert rep["R"] <= rep["R_bound"]
    assert rep["cocycle_literal_failures"] == 0 == rep["cocycle_sampled_failures"]
    assert rep["weights_match_lift"]
    assert rep["strictification_ok"]


def test_pipeline_after_gauge():
    r = random.Random(8)
    lift = apply_braid("1 2", projective(A22, 1))
    C2, g = random_gauge(lift.collapse(), r)
    alpha = solve_killing(C2)
    assert alpha is not None
    w = weak_action_solve(C2, alpha)
    act = homotopy_extend(w.rho1, verify_weak(w))
    assert literal_check(act) == []
    assert weight_decomposition(act, lift)["matches_lift"]


def test_weight_decomposition_of_naive_action():
    lift = apply_braid("1 2", projective(A22, 1))
    Cc, rho1 = naive_rho1(lift)
    wd = weight_decomposition(rho1, lift)
    assert wd["strict"] and wd["complete"] and wd["matches_lift"] and wd["shift"] == 0


def test_strictification_of_projective():
    rep, act = pipeline_for_word("", 1, with_strictification=False)
    st = strictify(act)
    assert st.matches and st.phi_closed and st.splits and st.weight_preserved


def test_action_json_round_trip():
    rep, act = pipeline_for_word("1", 2, with_strictification=False)
    data = json.loads(json.dumps(act.to_json(), default=str))
    back = HomotopyAction.from_json(data)
    assert literal_check(back) == []
    assert {r: Y.terms for r, Y in back.rho.items()} == {r: Y.terms for r, Y in act.rho.items()}


def test_degree_scaling_keeps_structure():
    rep4, _ = pipeline_for_word("1 1", 2, m=2, n=4, with_strictification=False)
    rep2, _ = pipeline_for_word("1 1", 2, m=2, n=2, with_strictification=False)
    assert rep4["ok"] and rep2["ok"]
    assert rep4["R_effective"] == rep2["R_effective"] == 1
