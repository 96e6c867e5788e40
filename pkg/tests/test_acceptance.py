"""Acceptance criteria 1-10, one summary line each."""

import random

from artifact.equivariance import (RationalRep, pipeline_for_word, strictify,
                                   verify_group_cohomology)
from artifact.hochschild import (alg_class, bilinear, cardy_corpus, cardy_tasks, gram_det,
                                 gram_matrix, transport_check)
from artifact.twisted import (apply_braid, braid_relations_check, central_shift_check, ext_table,
                              projective, same_complex, spherical_check)
from artifact.zigzag import zigzag

_pipeline_cache = {}


def pipeline_corpus():
    """10 spherical objects over A_2^2 from braid words of length <= 6 (fixed seed)."""
    if not _pipeline_cache:
        rng = random.Random(11)
        for _ in range(10):
            word = " ".join(str(rng.choice([1, -1, 2, -2])) for _ in range(rng.randint(1, 6)))
            j = rng.randint(1, 2)
            rep, act = pipeline_for_word(word, j, with_strictification=False)
            lift = apply_braid(word, projective(zigzag(2, 2), j))
            _pipeline_cache[(word, j)] = (lift, rep, act)
    return _pipeline_cache


def test_criterion_01_algebra_suite(criterion):
    c = criterion(1, "algebra suite m<=4, n<=3", 1)
    ok = True
    for m in (1, 2, 3, 4):
        for n in (1, 2, 3):
            A = zigzag(m, n)
            ok &= A.validate() == [] and A.dim() == (2 if m == 1 else 4 * m - 2)
    assert c.finish(ok)


def test_criterion_02_chain_dimensions(criterion):
    c = criterion(2, "end and neighbour hom dimensions", 1)
    ok = True
    for m in (2, 3, 4):
        for n in (1, 2, 3):
            A = zigzag(m, n)
            P = {k: projective(A, k) for k in A.vertices()}
            for k in A.vertices():
                want = {0: 1}
                want[n] = want.get(n, 0) + 1
                ok &= ext_table(P[k], P[k])[1] == want
                for l in A.vertices():
                    if abs(k - l) >= 2:
                        ok &= ext_table(P[k], P[l]) == ({}, {})
                if k < m:
                    pair = sorted([ext_table(P[k], P[k + 1])[1], ext_table(P[k + 1], P[k])[1]],
                                  key=lambda t: sorted(t))
                    ok &= pair == sorted([{0: 1}, {n: 1}], key=lambda t: sorted(t))
    assert c.finish(ok)


def test_criterion_03_braid_relations(criterion):
    c = criterion(3, "braid relations m=3, n=2", 60)
    rows = braid_relations_check(zigzag(3, 2))
    c.note("%d witnessed, %d literal" % (sum(r["relation"] == "witnessed" for r in rows),
                                          sum(r["relation"] == "literal" for r in rows)))
    assert c.finish(bool(rows) and all(r["pass"] for r in rows))


def test_criterion_04_central_shift(criterion):
    c = criterion(4, "central shift m=2, n in {2,3}", 120)
    ok = True
    for n in (2, 3):
        A = zigzag(2, n)
        for power, (i, j) in ((1, (3 * n, 4)), (2, (6 * n, 8))):
            rows = central_shift_check(A, power)
            ok &= all(r["pass"] and r["observed"] == [[r["k"], i, j]] for r in rows)
    assert c.finish(ok)


def test_criterion_05_cardy(criterion):
    c = criterion(5, "Euler form vs k_class Gram product, 100 pairs", 300)
    rows = cardy_corpus(100, 7)
    ok = len(rows) == 100 and all(r["pass"] for r in rows)
    for m in (1, 2, 3):
        for n in (2, 3):
            d = gram_det(zigzag(m, n))
            ok &= abs(d) == m + 1 if n % 2 == 0 else d in (0, 1) and d == (m + 1) % 2
    literal = sum(bilinear(r["class1"], gram_matrix(zigzag(r["m"], r["n"])), r["class0"]) == r["euler"]
                  for r in rows)
    c.note("k0^T G k1 holds %d/100; k1^T G k0 as written holds %d/100" %
           (sum(r["pass"] for r in rows), literal))
    assert c.finish(ok)


def test_criterion_06_hochschild_invariance(criterion):
    c = criterion(6, "alg_class = k_class, 20 transports with coboundary", 120)
    ok = True
    objects = []
    for m, n, w0, j0, w1, j1 in cardy_tasks(100, 7):
        A = zigzag(m, n)
        for w, j in ((w0, j0), (w1, j1)):
            C = apply_braid(w, projective(A, j))
            objects.append(C)
            ok &= alg_class(C) == C.k_class()
    r = random.Random(20)
    terms = 0
    for C in r.sample(objects, 20):
        res = transport_check(C, r)
        ok &= res["coboundary_ok"] and res["class0"] == res["class1"] == C.k_class()
        terms += len(res["chain"].terms)
    c.note("%d objects, coboundary chains with %d terms in total" % (len(objects), terms))
    assert c.finish(ok)


def test_criterion_07_group_cohomology(criterion):
    c = criterion(7, "bar and cochain cohomology of 50 random reps", 30)
    r = random.Random(7)
    ok = all(verify_group_cohomology(RationalRep.random(r, -5, 5))["ok"] for _ in range(50))
    assert c.finish(ok)


def test_criterion_08_pipeline(criterion):
    c = criterion(8, "equivariance pipeline on 10 spherical objects over A_2^2", 600)
    ok = True
    corpus = pipeline_corpus()
    for (word, j), (lift, rep, act) in corpus.items():
        ok &= spherical_check(lift)[0]
        ok &= rep["ok"] and rep["ki_vanishes"] and rep["weak_verified"] and act is not None
        ok &= rep["R"] <= rep["width"] + 2
        ok &= rep["killing_relation"] == {"closed": True, "omega_relation": True,
                                          "alpha_bounds": True}
        ok &= rep["cocycle_literal_failures"] == 0 and rep["cocycle_sampled_failures"] == 0
        ok &= rep["weights_match_lift"]
    c.note("R per object %s" % [rep["R"] for _, rep, _ in corpus.values()])
    assert c.finish(ok)


def test_criterion_09_degree_scaling(criterion):
    c = criterion(9, "A_2^4 -> A_2^2 -> A_2^4 transfer keeps ext tables", 60)
    A4 = zigzag(2, 4)
    r = random.Random(9)
    corpus = [projective(A4, 1), projective(A4, 2)]
    for _ in range(8):
        word = [r.choice([1, -1, 2, -2]) for _ in range(r.randint(1, 4))]
        corpus.append(apply_braid(word, projective(A4, r.randint(1, 2))))
    down = [C.scale_degrees(2) for C in corpus]
    ok = all(same_complex(D.scale_degrees(4), C) for C, D in zip(corpus, down))
    for a in range(len(corpus)):
        for b in range(len(corpus)):
            t4, tot4 = ext_table(corpus[a], corpus[b])
            t2, tot2 = ext_table(down[a], down[b])
            ok &= {(i // 2, j): d for (i, j), d in t4.items()} == t2
            ok &= all(i % 2 == 0 for (i, j) in t4)
            ok &= sum(tot4.values()) == sum(tot2.values())
    assert c.finish(ok)


def test_criterion_10_strictification(criterion):
    corpus = pipeline_corpus()
    c = criterion(10, "strictification window check on pipeline outputs", 120)
    ok = True
    windows = []
    for (word, j), (lift, rep, act) in corpus.items():
        st = strictify(act)
        ok &= st.matches and st.splits and st.phi_closed and st.weight_preserved
        windows.append(st.window)
    c.note("certified windows %s" % windows)
    assert c.finish(ok)
