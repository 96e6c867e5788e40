"""Hochschild chains, fundamental classes and the Euler form.

Chains live over the graded category Gen whose objects are pairs (k, t)
standing for P_k[-t] and whose morphisms (k0, t0) -> (k1, t1) are paths from
k0 to k1 of degree |p| + t1 - t0.  Composition is mu^2(b, a) = (-1)^|a| ba.
A twisted complex over A is then an unshifted twisted complex over Gen, and
Gen is Morita equivalent to A, with [e_(k,t)] = (-1)^t [e_k] in HH_0.

An atom is (src, tgt, path).  A word is a tuple (x_l, ..., x_1, x_0) with
x_0 the distinguished factor and tgt(x_i) = src(x_{i+1}) cyclically.
"""

from fractions import Fraction
import itertools

from .exact_core import Echelon, ExactnessError, determinant
from .twisted import HomComplex, TwistedComplex, compose, mor_add, mor_scale


class HochschildError(ValueError):
    pass


def atom_degree(alg, x):
    s, t, p = x
    return alg.deg(p) + t[1] - s[1]


def mu2(alg, y, x):
    """mu^2(y, x) for atoms, as (atom, sign) or None."""
    if x[1] != y[0]:
        raise HochschildError("atoms %r and %r are not composable" % (y, x))
    p = alg.mul_basis(y[2], x[2])
    if p is None:
        return None
    return (x[0], y[1], p), (-1 if atom_degree(alg, x) % 2 else 1)


class HochschildChain:
    def __init__(self, alg, terms=None):
        self.alg = alg
        self.terms = {}
        for w, c in (terms or {}).items():
            if c:
                self.terms[tuple(w)] = Fraction(c)

    def add_term(self, word, c):
        if not c:
            return
        word = tuple(word)
        v = self.terms.get(word, 0) + c
        if v:
            self.terms[word] = v
        else:
            self.terms.pop(word, None)

    def __add__(self, other):
        out = HochschildChain(self.alg, self.terms)
        for w, c in other.terms.items():
            out.add_term(w, c)
        return out

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return HochschildChain(self.alg, {w: c * x for w, x in self.terms.items()})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (self - other).is_zero()

    def __len__(self):
        return len(self.terms)

    def degree(self, word):
        a = self.alg
        return sum(atom_degree(a, x) for x in word) - (len(word) - 1)

    def degrees(self):
        return {self.degree(w) for w in self.terms}

    def max_length(self):
        return max((len(w) - 1 for w in self.terms), default=0)

    def length_component(self, l):
        return HochschildChain(self.alg, {w: c for w, c in self.terms.items() if len(w) == l + 1})

    def check(self):
        """Every word is a composable cycle x_0 -> x_1 -> ... -> x_l -> x_0."""
        for w in self.terms:
            seq = list(reversed(w))
            for j in range(len(seq)):
                if seq[j][1] != seq[(j + 1) % len(seq)][0]:
                    return False
        return True

    def __repr__(self):
        return "HochschildChain(%d terms)" % len(self.terms)

    def to_json(self):
        out = []
        for w, c in sorted(self.terms.items(), key=lambda kv: repr(kv[0])):
            out.append({"word": [[list(x[0]), list(x[1]), x[2]] for x in w], "coeff": c})
        return out


def hh_differential(c):
    """The two-sum Hochschild differential with mu^1 = 0 and mu^{>=3} = 0."""
    alg = c.alg
    out = HochschildChain(alg)
    for w, coef in c.terms.items():
        l = len(w) - 1
        # abar_k = w[l - k] for k = 1..l, a = w[l]
        a = w[l]
        da = atom_degree(alg, a)
        bar = [None] + [w[l - k] for k in range(1, l + 1)]
        dbar = [None] + [atom_degree(alg, bar[k]) for k in range(1, l + 1)]
        run = da
        for i in range(0, l - 1):
            if i > 0:
                run += dbar[i] - 1
            r = mu2(alg, bar[i + 2], bar[i + 1])
            if r is not None:
                atom, s = r
                sign = -1 if run % 2 else 1
                new = list(w)
                pos = l - (i + 2)
                new[pos:pos + 2] = [atom]
                out.add_term(new, sign * s * coef)
        if l >= 1:
            r = mu2(alg, bar[1], a)
            if r is not None:
                atom, s = r
                out.add_term(list(w[:l - 1]) + [atom], -s * coef)
            r = mu2(alg, a, bar[l])
            if r is not None:
                atom, s = r
                e = (dbar[l] - 1) * (da + sum(dbar[1:l]) + l)
                sign = -1 if e % 2 else 1
                out.add_term(list(w[1:l]) + [atom], -sign * s * coef)
    return out


# --- twisted complexes as Gen objects -------------------------------------

def gen_object(C, f):
    return (C.gens[f][0], C.t(f))


def _atoms(C0, C1, mor):
    """Morphism dict between twisted complexes -> {(b, a): [(atom, coeff)]}."""
    out = {}
    for (b, a), v in mor.items():
        s, t = gen_object(C0, a), gen_object(C1, b)
        out[(b, a)] = [((s, t, p), x) for p, x in v.items()]
    return out


def _delta_strings(C, start):
    """All delta strings f_0 -> ... -> f_l starting at generator start.

    Yields (end generator, list of atom choices lists) including the empty one.
    """
    succ = {}
    for (b, a) in C.delta:
        succ.setdefault(a, []).append(b)
    at = _atoms(C, C, C.delta)
    stack = [(start, [])]
    while stack:
        f, seq = stack.pop()
        yield f, seq
        for g in succ.get(f, ()):
            stack.append((g, seq + [at[(g, f)]]))


def end_to_hh(C, a):
    """Sum of delta_{f_l f_{l-1}} x ... x delta_{f_1 f_0} x a_{f_0 f_l}."""
    return tw_to_hh([C], [a])


def tw_to_hh(objs, mors, coeff=1):
    """Image of a tw-Hochschild word mors = [x_m, ..., x_0] under the insertion map.

    x_i : objs[i] -> objs[i+1] (indices mod m+1).  Delta strings of objs[i]
    are inserted between x_{i-1} and x_i, and strings of objs[0] to the left
    of x_m; nothing is inserted to the right of x_0.
    """
    m = len(mors) - 1
    alg = objs[0].alg
    xs = list(reversed(mors))
    atoms = [_atoms(objs[i], objs[(i + 1) % (m + 1)], xs[i]) for i in range(m + 1)]
    by_src = []
    for i in range(m + 1):
        d = {}
        for (b, a), lst in atoms[i].items():
            d.setdefault(a, []).append((b, lst))
        by_src.append(d)
    out = HochschildChain(alg)

    def go(i, cur, seq, first):
        if i == m + 1:
            for end, s in _delta_strings(objs[0], cur):
                if end == first:
                    yield seq + s
            return
        for end, s in _delta_strings(objs[i], cur):
            for b, lst in by_src[i].get(end, ()):
                yield from go(i + 1, b, seq + s + [lst], first)

    for (b, a), lst in atoms[0].items():
        for seq in go(1, b, [lst], a):
            for combo in itertools.product(*seq):
                c = coeff
                for _, x in combo:
                    c = c * x
                out.add_term(tuple(atom for atom, _ in reversed(combo)), c)
    return out


# --- classes in HH_0 -------------------------------------------------------

def trace(chain):
    """Length-0 idempotent part, e_(k,t) -> (-1)^t e_k; kills all boundaries."""
    alg = chain.alg
    out = [Fraction(0)] * alg.m
    for w, c in chain.terms.items():
        if len(w) == 1:
            (s, t, p), = w
            if s == t and alg.is_idempotent(p):
                out[s[0] - 1] += c * (-1) ** (s[1] % 2)
    return out


def _words(alg, objects, length, total_path_degree):
    """Normalized cyclic words of length+1 atoms over objects with sum |p| fixed."""
    objs = list(objects)
    out = []

    def atoms_between(s, t):
        for p in alg.paths(s[0], t[0]):
            yield (s, t, p)

    def rec(seq, budget):
        if len(seq) == length + 1:
            if seq[-1][1] == seq[0][0] and budget == 0:
                out.append(tuple(reversed(seq)))
            return
        s = seq[-1][1]
        for t in objs:
            for x in atoms_between(s, t):
                d = alg.deg(x[2])
                if d > budget:
                    continue
                # normalization: bar factors are never identities
                if len(seq) >= 1 and x[0] == x[1] and alg.is_idempotent(x[2]):
                    continue
                rec(seq + [x], budget - d)

    for s in objs:
        for t in objs:
            for x in atoms_between(s, t):
                d = alg.deg(x[2])
                if d <= total_path_degree:
                    rec([x], total_path_degree - d)
    return out


def _normalize(chain):
    """Drop words with an identity bar factor (the normalized quotient)."""
    alg = chain.alg
    out = HochschildChain(alg)
    for w, c in chain.terms.items():
        if any(x[0] == x[1] and alg.is_idempotent(x[2]) for x in w[:-1]):
            continue
        out.add_term(w, c)
    return out


def reduce_class(chain, extra_length=1):
    """Write a degree-0 cycle as sum c_k e_(k,0) + boundary in a finite window.

    Returns (coefficients, witness y) with chain - sum c_k e_k = d(y) in the
    normalized complex, or None when the window is too small.  The e_k are
    independent in HH because the trace separates them.
    """
    alg = chain.alg
    z = _normalize(chain)
    if not hh_differential(z).is_zero():
        raise HochschildError("chain is not a cycle")
    objects = {(k, 0) for k in alg.vertices()}
    for w in z.terms:
        for x in w:
            objects.add(x[0])
            objects.add(x[1])
    L = z.max_length() + extra_length
    ech = Echelon(track=True)
    index = {}

    def vec(ch):
        v = {}
        for w, c in _normalize(ch).terms.items():
            if w not in index:
                index[w] = len(index)
            v[index[w]] = c
        return v

    for k in alg.vertices():
        e = ((k, 0), (k, 0), alg.e(k))
        ech.insert(vec(HochschildChain(alg, {(e,): 1})), ("e", k))
    cand = []
    for l in range(1, L + 1):
        # chain degree -1 means sum |p| = l - 1
        for w in _words(alg, objects, l, l - 1):
            cand.append(w)
    for w in cand:
        ech.insert(vec(hh_differential(HochschildChain(alg, {w: 1}))), ("y", w))
    target = vec(z)
    coords = ech.coordinates(target)
    if coords is None:
        return None
    cs = [Fraction(0)] * alg.m
    y = HochschildChain(alg)
    for tag, c in coords.items():
        if tag[0] == "e":
            cs[tag[1] - 1] += c
        else:
            y.add_term(tag[1], c)
    return cs, y


def alg_class(C, a=None, certify=True):
    """Class of end_to_hh(C, a) (a = identity by default) in the basis [e_k]."""
    if a is None:
        a = identity(C)
    z = end_to_hh(C, a)
    tr = trace(z)
    if not certify:
        return tr
    res = reduce_class(z)
    if res is None:
        raise HochschildError("degree-0 class not reached in the window")
    cs, y = res
    if cs != tr:
        raise HochschildError("boundary reduction %s disagrees with trace %s" % (cs, tr))
    return cs


def identity(C):
    return {(f, f): {C.alg.e(C.gens[f][0]): Fraction(1)} for f in range(len(C.gens))}


# --- Euler form --------------------------------------------------------------

def euler_pairing(C0, C1):
    tot = HomComplex(C0, C1).total_table()
    return sum((-1) ** (t % 2) * d for t, d in tot.items())


def euler_pairing_chain(C0, C1):
    """Chain-level Euler characteristic, equal to euler_pairing."""
    H = HomComplex(C0, C1)
    return sum((-1) ** (H.total_degree(i) % 2) for i in range(len(H.elements)))


def gram_matrix(alg):
    from .twisted import projective
    Ps = [projective(alg, k) for k in alg.vertices()]
    return [[euler_pairing(Ps[k], Ps[l]) for l in range(alg.m)] for k in range(alg.m)]


def bilinear(u, G, v):
    return sum(u[k] * G[k][l] * v[l] for k in range(len(u)) for l in range(len(v)))


def cardy_verify(C0, C1, G=None):
    """chi(hom(C0, C1)) = k(C0)^T G k(C1)."""
    G = G or gram_matrix(C0.alg)
    return euler_pairing(C0, C1) == bilinear(C0.k_class(), G, C1.k_class())


def gram_det(alg):
    return determinant(gram_matrix(alg))


def random_word(r, m, length):
    letters = [s for k in range(1, m + 1) for s in (k, -k)]
    return [r.choice(letters) for _ in range(length)]


def _cardy_row(task):
    from .twisted import apply_braid, projective
    from .zigzag import zigzag
    m, n, w0, j0, w1, j1 = task
    alg = zigzag(m, n)
    C0 = apply_braid(w0, projective(alg, j0))
    C1 = apply_braid(w1, projective(alg, j1))
    e = euler_pairing(C0, C1)
    k0, k1 = C0.k_class(), C1.k_class()
    g = bilinear(k0, gram_matrix(alg), k1)
    return {"m": m, "n": n, "word0": " ".join(map(str, w0)), "start0": j0,
            "word1": " ".join(map(str, w1)), "start1": j1, "euler": e,
            "class0": k0, "class1": k1, "gram_product": g, "pass": e == g}


def cardy_tasks(size, seed, ms=(1, 2, 3), ns=(2, 3), max_len=4):
    import random
    r = random.Random(seed)
    tasks = []
    for _ in range(size):
        m, n = r.choice(ms), r.choice(ns)
        w0 = random_word(r, m, r.randint(0, max_len))
        w1 = random_word(r, m, r.randint(0, max_len))
        tasks.append((m, n, w0, r.randint(1, m), w1, r.randint(1, m)))
    return tasks


def cardy_corpus(size, seed, ms=(1, 2, 3), ns=(2, 3), max_len=4, jobs=1):
    """Rows (m, n, word0, start0, word1, start1, euler, class0, class1, gram_product, pass).

    Words are drawn up front so the rows do not depend on jobs.
    """
    tasks = cardy_tasks(size, seed, ms, ns, max_len)
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(jobs) as pool:
            return list(pool.map(_cardy_row, tasks, chunksize=4))
    return [_cardy_row(t) for t in tasks]


# --- transport and the explicit coboundary ------------------------------------

def contractible_pair(alg, k, i, j):
    """Cone of the identity of P_k{i}[j]."""
    return TwistedComplex(alg, [(k, i, j + 1), (k, i, j)], {(1, 0): {alg.e(k): 1}})


def random_transport(C, r, pairs=1, gauge_terms=3):
    """C' = g (C + contractible pairs) g^-1 with a random unipotent gauge g.

    Returns (C', inclusion C -> C') where the inclusion is a strict chain map.
    """
    from .twisted import direct_sum
    alg = C.alg
    parts = [C]
    for _ in range(pairs):
        k = r.randint(1, alg.m)
        if C.gens:
            _, i, j = r.choice(C.gens)
        else:
            i, j = 0, 0
        parts.append(contractible_pair(alg, k, i, j + r.choice((-1, 0, 1))))
    S = direct_sum(*parts)
    order = S.topological_order()
    pos = {g: n for n, g in enumerate(order)}
    S = S.permuted(order)
    inc = {(pos[f], f): {alg.e(C.gens[f][0]): Fraction(1)} for f in range(len(C.gens))}
    # unipotent gauge: strictly lower triangular bidegree (0,0) entries
    N = {}
    cands = []
    for a in range(len(S.gens)):
        for b in range(a + 1, len(S.gens)):
            ka, ia, ja = S.gens[a]
            kb, ib, jb = S.gens[b]
            if ja != jb:
                continue
            for p in alg.paths(ka, kb):
                if S.bigraded and ib + alg.deg(p) - ia != 0:
                    continue
                if not S.bigraded and alg.deg(p) + S.t(b) - S.t(a) != 0:
                    continue
                cands.append((b, a, p))
    for _ in range(gauge_terms):
        if not cands:
            break
        b, a, p = r.choice(cands)
        N = mor_add(N, {(b, a): {p: Fraction(r.choice((-2, -1, 1, 2)))}})
    g = mor_add(identity(S), N)
    ginv = identity(S)
    power = identity(S)
    for s in range(1, len(S.gens) + 1):
        power = compose(alg, N, power)
        if not power:
            break
        ginv = mor_add(ginv, power, (-1) ** s)
    delta = compose(alg, compose(alg, g, S.delta), ginv)
    C2 = TwistedComplex(alg, S.gens, delta, S.bigraded)
    return C2, compose(alg, g, inc)


def _closed_basis(H, w, h):
    cx = H.complex(w)
    from .exact_core import kernel
    d = cx.diff(h)
    n = cx.dim(h)
    if d.nrows == 0:
        return [{i: Fraction(1)} for i in range(n)]
    return kernel(d)


def bc_data(C0, C1, b0):
    """Solve mu^2(b1, b0) + mu^1(c0) = id, mu^2(b0, b1) + mu^1(c1) = id.

    With mu^1 = (-1)^|x| D and mu^2(y, x) = (-1)^|x| yx this reads
    b1 b0 - D c0 = id and b0 b1 - D c1 = id with D b1 = 0.
    """
    from .exact_core import solve_linear
    alg = C0.alg
    H10 = HomComplex(C1, C0)
    H00 = HomComplex(C0, C0)
    H11 = HomComplex(C1, C1)
    id0, id1 = identity(C0), identity(C1)
    zs = [H10.to_mor(v, 0, 0) for v in _closed_basis(H10, 0, 0)]
    cs = [H00.to_mor({i: Fraction(1)}, 0, -1) for i in range(len(H00.blocks.get(0, {}).get(-1, [])))]
    cols = []
    for z in zs:
        cols.append(H00.to_vec(compose(alg, z, b0), 0, 0))
    for c in cs:
        cols.append(H00.to_vec(mor_scale(H00.D(c, -1), -1), 0, 0))
    rhs = H00.to_vec(id0, 0, 0)
    from .exact_core import SparseMatrix
    nrows = len(H00.blocks.get(0, {}).get(0, []))
    M = SparseMatrix(nrows, len(cols))
    for j, v in enumerate(cols):
        for i, x in v.items():
            M.add(i, j, x)
    try:
        x, _ = solve_linear(M, rhs, with_kernel=False)
    except ExactnessError:
        return None
    b1, c0 = {}, {}
    for j, cf in x.items():
        if j < len(zs):
            b1 = mor_add(b1, zs[j], cf)
        else:
            c0 = mor_add(c0, cs[j - len(zs)], cf)
    err = mor_add(compose(alg, b0, b1), id1, -1)
    if err:
        c1 = H11.preimage(err, 0, 0)
        if c1 is None:
            return None
    else:
        c1 = {}
    return {"b0": b0, "b1": b1, "c0": c0, "c1": c1}


def bc_chain(C0, C1, data):
    """Image of b1 (x) b0 + c0 - c1 under the insertion map."""
    b0, b1, c0, c1 = data["b0"], data["b1"], data["c0"], data["c1"]
    chain = tw_to_hh([C0, C1], [b1, b0])
    chain = chain + tw_to_hh([C0], [c0])
    chain = chain - tw_to_hh([C1], [c1])
    return chain


def transport_check(C, r, pairs=1, gauge_terms=3):
    """Transport C, build the explicit coboundary and compare classes.

    Returns a dict with the classes, the chain and whether
    d(chain) = Phi(id_C') - Phi(id_C) holds exactly.
    """
    from .twisted import quasi_iso_search
    C2, inc = random_transport(C, r, pairs, gauge_terms)
    b0 = quasi_iso_search(C, C2, r)
    if b0 is None:
        raise HochschildError("no quasi-isomorphism found for the transport")
    data = bc_data(C, C2, b0)
    if data is None:
        raise HochschildError("could not solve for b1, c0, c1")
    chain = bc_chain(C, C2, data)
    lhs = hh_differential(chain)
    rhs = end_to_hh(C2, identity(C2)) - end_to_hh(C, identity(C))
    return {"complex": C2, "data": data, "chain": chain,
            "class0": alg_class(C), "class1": alg_class(C2),
            "coboundary_ok": lhs == rhs}
