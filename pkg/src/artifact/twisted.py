"""One-sided twisted complexes over a zigzag algebra.

A generator (k, i, j) stands for P_k{i}[j]: it lives in bidegree (-j, i) and
total degree t = i - j.  A morphism entry from generator a to generator b is a
linear combination of paths from vertex k_a to vertex k_b; a path p has
bidegree (j_a - j_b, i_b + |p| - i_a) and total degree |p| + t_b - t_a.
Composition is the plain algebra product and the hom differential is
D f = delta_1 f - (-1)^|f| f delta_0.

A complex is bigraded when every differential entry has bidegree (1, 0);
collapsed complexes only keep total degrees (stored with i = 0, j = -t).
"""

from fractions import Fraction
import json

from .exact_core import FiniteComplex, SparseMatrix, ExactnessError, q, viadd
from .zigzag import zigzag


class ComplexError(ValueError):
    pass


# --- morphisms: dict (b, a) -> {path label: coeff} --------------------------

def mor_add(f, g, c=1):
    out = {k: dict(v) for k, v in f.items()}
    for k, v in g.items():
        r = viadd(out.get(k, {}), v, c)
        if r:
            out[k] = r
        else:
            out.pop(k, None)
    return out


def mor_scale(f, c):
    if not c:
        return {}
    return {k: {p: c * x for p, x in v.items()} for k, v in f.items()}


def compose(alg, g, f):
    """g o f for morphism dicts."""
    by_src = {}
    for (c, b), v in g.items():
        by_src.setdefault(b, []).append((c, v))
    out = {}
    for (b, a), v in f.items():
        for c, w in by_src.get(b, ()):
            x = alg.mul(w, v)
            if x:
                key = (c, a)
                r = viadd(out.get(key, {}), x)
                if r:
                    out[key] = r
                else:
                    out.pop(key, None)
    return out


def mor_equal(f, g):
    return not mor_add(f, g, -1)


class TwistedComplex:
    def __init__(self, alg, gens, delta=None, bigraded=True, check=True):
        self.alg = alg
        self.gens = [tuple(int(x) for x in g) for g in gens]
        self.bigraded = bigraded
        self.delta = {}
        for (b, a), v in (delta or {}).items():
            v = {p: q(x) for p, x in v.items() if x}
            if v:
                self.delta[(b, a)] = v
        if check:
            errs = self.check()
            if errs:
                raise ComplexError("; ".join(errs[:5]))

    # degrees
    def t(self, a):
        k, i, j = self.gens[a]
        return i - j

    def entry_degree(self, a, b, p):
        return self.alg.deg(p) + self.t(b) - self.t(a)

    def entry_bidegree(self, a, b, p):
        ka, ia, ja = self.gens[a]
        kb, ib, jb = self.gens[b]
        return (ja - jb, ib + self.alg.deg(p) - ia)

    def __len__(self):
        return len(self.gens)

    def __repr__(self):
        return "TwistedComplex(%d generators, %d entries, %s)" % (
            len(self.gens), len(self.delta), "bigraded" if self.bigraded else "collapsed")

    def check(self):
        errs = []
        alg = self.alg
        for g in self.gens:
            if not 1 <= g[0] <= alg.m:
                errs.append("generator vertex %d out of range" % g[0])
        for (b, a), v in self.delta.items():
            if not (0 <= a < len(self.gens) and 0 <= b < len(self.gens)) or a == b:
                errs.append("bad entry indices (%s, %s)" % (b, a))
                continue
            for p in v:
                if p not in alg.by_label:
                    errs.append("unknown path %s" % p)
                    continue
                if alg.src(p) != self.gens[a][0] or alg.tgt(p) != self.gens[b][0]:
                    errs.append("path %s does not run from generator %d to %d" % (p, a, b))
                    continue
                if self.bigraded:
                    if self.entry_bidegree(a, b, p) != (1, 0):
                        errs.append("entry %s from %d to %d has bidegree %s, not (1,0)"
                                    % (p, a, b, self.entry_bidegree(a, b, p)))
                elif self.entry_degree(a, b, p) != 1:
                    errs.append("entry %s from %d to %d has degree %d, not 1"
                                % (p, a, b, self.entry_degree(a, b, p)))
        if errs:
            return errs
        if self.topological_order() is None:
            errs.append("differential is not one-sided (cycle among generators)")
        d2 = compose(alg, self.delta, self.delta)
        if d2:
            errs.append("delta^2 != 0 (%d nonzero entries)" % len(d2))
        return errs

    def topological_order(self):
        n = len(self.gens)
        indeg = [0] * n
        out = {}
        for (b, a) in self.delta:
            indeg[b] += 1
            out.setdefault(a, []).append(b)
        ready = [a for a in range(n) if indeg[a] == 0]
        order = []
        while ready:
            ready.sort(reverse=True)
            a = ready.pop()
            order.append(a)
            for b in out.get(a, ()):
                indeg[b] -= 1
                if indeg[b] == 0:
                    ready.append(b)
        return order if len(order) == n else None

    def copy(self):
        return TwistedComplex(self.alg, self.gens, self.delta, self.bigraded, check=False)

    def collapse(self):
        """Forget the internal grading, keeping total degrees."""
        gens = [(k, 0, j - i) for (k, i, j) in self.gens]
        return TwistedComplex(self.alg, gens, self.delta, bigraded=False, check=False)

    def permuted(self, order):
        pos = {a: n for n, a in enumerate(order)}
        gens = [self.gens[a] for a in order]
        delta = {(pos[b], pos[a]): v for (b, a), v in self.delta.items()}
        return TwistedComplex(self.alg, gens, delta, self.bigraded, check=False)

    def k_class(self):
        out = [0] * self.alg.m
        for (k, i, j) in self.gens:
            out[k - 1] += (-1) ** ((i + j) % 2)
        return out

    def width(self):
        ts = [self.t(a) for a in range(len(self.gens))]
        return (max(ts) - min(ts)) if ts else 0

    def scale_degrees(self, n_new):
        """Move to A_m^{n_new}: internal degrees divide by n and multiply by n_new."""
        n = self.alg.n
        if not self.bigraded:
            raise ComplexError("scale transfer needs a bigraded complex")
        gens = []
        for (k, i, j) in self.gens:
            if n == 0:
                if i:
                    raise ComplexError("cannot rescale nonzero internal degree from n = 0")
                gens.append((k, 0, j))
                continue
            if i % n:
                raise ComplexError("internal degree %d is not a multiple of n = %d "
                                   "(mixed residues)" % (i, n))
            gens.append((k, i // n * n_new, j))
        return TwistedComplex(zigzag(self.alg.m, n_new), gens, self.delta, True)

    # serialization
    def to_json(self):
        return {
            "algebra": {"m": self.alg.m, "n": self.alg.n},
            "bigraded": self.bigraded,
            "generators": [{"k": k, "i": i, "j": j} for (k, i, j) in self.gens],
            "differential": [{"from": a, "to": b, "elem": p, "coeff": x}
                             for (b, a), v in sorted(self.delta.items()) for p, x in sorted(v.items())],
        }

    @classmethod
    def from_json(cls, data, alg=None):
        try:
            if alg is None:
                a = data["algebra"]
                alg = zigzag(int(a["m"]), int(a["n"]))
            gens = [(int(g["k"]), int(g["i"]), int(g["j"])) for g in data["generators"]]
            delta = {}
            for e in data["differential"]:
                key = (int(e["to"]), int(e["from"]))
                viadd(delta.setdefault(key, {}), {str(e["elem"]): q(e["coeff"])})
        except (KeyError, TypeError, ValueError, ExactnessError) as exc:
            raise ComplexError("malformed twisted complex JSON: %s" % exc)
        return cls(alg, gens, delta, bool(data.get("bigraded", True)))


def load_complex(path, alg=None):
    with open(path) as fh:
        return TwistedComplex.from_json(json.load(fh), alg)


def projective(alg, k, i=0, j=0, bigraded=True):
    if bigraded:
        return TwistedComplex(alg, [(k, i, j)], {}, True)
    return TwistedComplex(alg, [(k, 0, j - i)], {}, False)


def shift(C, s=1, internal=0):
    """C[s]{internal}."""
    sign = -1 if s % 2 else 1
    gens = [(k, i + internal, j + s) for (k, i, j) in C.gens]
    delta = {key: {p: sign * x for p, x in v.items()} for key, v in C.delta.items()}
    return TwistedComplex(C.alg, gens, delta, C.bigraded, check=False)


def direct_sum(*cs):
    gens, delta, off = [], {}, 0
    for C in cs:
        gens.extend(C.gens)
        for (b, a), v in C.delta.items():
            delta[(b + off, a + off)] = dict(v)
        off += len(C.gens)
    return TwistedComplex(cs[0].alg, gens, delta, all(C.bigraded for C in cs), check=False)


def cone(f, C0, C1, check=True):
    """Cone of a closed degree zero morphism f: C0 -> C1 (generators C0[1] then C1)."""
    n0 = len(C0.gens)
    gens = [(k, i, j + 1) for (k, i, j) in C0.gens] + list(C1.gens)
    delta = {}
    for (b, a), v in C0.delta.items():
        delta[(b, a)] = {p: -x for p, x in v.items()}
    for (b, a), v in C1.delta.items():
        delta[(b + n0, a + n0)] = dict(v)
    for (b, a), v in f.items():
        if v:
            delta[(b + n0, a)] = dict(v)
    return TwistedComplex(C0.alg, gens, delta, C0.bigraded and C1.bigraded, check=check)


# --- hom complexes ------------------------------------------------------------

class HomComplex:
    """hom(C0, C1) split by internal degree (bigraded) or by total degree only."""

    def __init__(self, C0, C1, bigraded=None):
        if C0.alg is not C1.alg and C0.alg.to_json() != C1.alg.to_json():
            raise ComplexError("complexes over different algebras")
        self.C0, self.C1, self.alg = C0, C1, C0.alg
        if bigraded is None:
            bigraded = C0.bigraded and C1.bigraded
        self.bigraded = bigraded
        alg = self.alg
        self.elements = []       # (b, a, p)
        self.key = []            # (w, h): internal degree and cohomological degree
        for a, (ka, ia, ja) in enumerate(C0.gens):
            for b, (kb, ib, jb) in enumerate(C1.gens):
                for p in alg.paths(ka, kb):
                    if bigraded:
                        h, w = ja - jb, ib + alg.deg(p) - ia
                    else:
                        h, w = alg.deg(p) + C1.t(b) - C0.t(a), 0
                    self.elements.append((b, a, p))
                    self.key.append((w, h))
        self.blocks = {}
        self.local = {}
        for idx, (w, h) in enumerate(self.key):
            lst = self.blocks.setdefault(w, {}).setdefault(h, [])
            self.local[idx] = len(lst)
            lst.append(idx)
        self._pos = {e: i for i, e in enumerate(self.elements)}
        self._cx = {}
        self._coh = {}

    def total_degree(self, idx):
        b, a, p = self.elements[idx]
        return self.alg.deg(p) + self.C1.t(b) - self.C0.t(a)

    def D(self, f, deg):
        """Hom differential of a homogeneous morphism of total degree deg."""
        g = compose(self.alg, self.C1.delta, f)
        h = compose(self.alg, f, self.C0.delta)
        return mor_add(g, h, -1 if deg % 2 == 0 else 1)

    def to_mor(self, vec, w, h):
        out = {}
        lst = self.blocks.get(w, {}).get(h, [])
        for i, x in vec.items():
            b, a, p = self.elements[lst[i]]
            out.setdefault((b, a), {})[p] = x
        return out

    def to_vec(self, f, w, h):
        out = {}
        for (b, a), v in f.items():
            for p, x in v.items():
                idx = self._pos[(b, a, p)]
                if self.key[idx] != (w, h):
                    raise ComplexError("morphism is not homogeneous of degree %s" % ((w, h),))
                out[self.local[idx]] = x
        return out

    def degree_of(self, f):
        keys = {self.key[self._pos[(b, a, p)]] for (b, a), v in f.items() for p in v}
        if len(keys) > 1:
            raise ComplexError("inhomogeneous morphism")
        return keys.pop() if keys else None

    def complex(self, w):
        if w in self._cx:
            return self._cx[w]
        hs = self.blocks.get(w, {})
        basis = {h: list(idxs) for h, idxs in hs.items()}
        cx = FiniteComplex(basis)
        for h, idxs in hs.items():
            tgt = hs.get(h + 1)
            m = SparseMatrix(len(tgt) if tgt else 0, len(idxs))
            if tgt:
                for col, idx in enumerate(idxs):
                    b, a, p = self.elements[idx]
                    img = self.D({(b, a): {p: Fraction(1)}}, self.total_degree(idx))
                    for row, x in self.to_vec(img, w, h + 1).items():
                        m.add(row, col, x)
            cx.set_d(h, m)
        self._cx[w] = cx
        return cx

    def cohomology(self, w):
        if w not in self._coh:
            self._coh[w] = self.complex(w).cohomology()
        return self._coh[w]

    def internal_degrees(self):
        return sorted(self.blocks)

    def table(self):
        """{(w, h): dim H^h in internal degree w}."""
        out = {}
        for w in self.internal_degrees():
            for h, d in self.cohomology(w).dims().items():
                out[(w, h)] = d
        return out

    def total_table(self):
        out = {}
        for (w, h), d in self.table().items():
            t = h + w if self.bigraded else h
            out[t] = out.get(t, 0) + d
        return {t: d for t, d in out.items() if d}

    def class_reps(self, w, h):
        coh = self.cohomology(w)
        return [self.to_mor(v, w, h) for v in coh.reps.get(h, [])]

    def class_coords(self, f, w, h):
        return self.cohomology(w).coordinates(h, self.to_vec(f, w, h))

    def is_exact(self, f, w, h):
        return all(x == 0 for x in self.class_coords(f, w, h))

    def preimage(self, f, w, h):
        v = self.cohomology(w).preimage(h, self.to_vec(f, w, h))
        if v is None:
            return None
        return self.to_mor(v, w, h - 1)

    def zero_key(self):
        return (0, 0)


def ext_table(C0, C1, bigraded=None):
    """Bigraded table {(internal i, cohomological j): dim} and total-degree summary."""
    H = HomComplex(C0, C1, bigraded)
    return H.table(), H.total_table()


def is_acyclic(C):
    for k in C.alg.vertices():
        P = projective(C.alg, k, bigraded=C.bigraded)
        H = HomComplex(P, C)
        if H.table():
            return False
    return True


def is_quasi_iso(f, C0, C1):
    return is_acyclic(cone(f, C0, C1))


def quasi_iso_search(C0, C1, rng, tries=20):
    """Random combination of degree (0,0) classes certified by an acyclic cone."""
    H = HomComplex(C0, C1)
    reps = H.class_reps(0, 0)
    if not reps:
        return None
    for _ in range(tries):
        f = {}
        for r in reps:
            c = Fraction(rng.randint(-4, 4))
            if c:
                f = mor_add(f, r, c)
        if f and is_quasi_iso(f, C0, C1):
            return f
    return None


def isomorphic(C0, C1, rng=None):
    import random
    return quasi_iso_search(C0, C1, rng or random.Random(0)) is not None


def spherical_check(C):
    """True when H(hom(C, C)) is one line in degree 0 plus one line in total degree n."""
    n = C.alg.n
    tot = HomComplex(C, C).total_table()
    want = {0: 1}
    want[n] = want.get(n, 0) + 1
    return tot == want, tot


# --- twists -----------------------------------------------------------------

def twist(C, k):
    """T_{P_k}(C): cone of evaluation hom(P_k, C) (x) P_k -> C."""
    alg = C.alg
    P = projective(alg, k, bigraded=C.bigraded)
    H = HomComplex(P, C)
    bgens, ev = [], {}
    for w in H.internal_degrees():
        coh = H.cohomology(w)
        for h in sorted(coh.reps):
            for rep in H.class_reps(w, h):
                idx = len(bgens)
                if C.bigraded:
                    bgens.append((k, w, -h))
                else:
                    bgens.append((k, 0, -h))
                for (b, a), v in rep.items():
                    ev[(b, idx)] = dict(v)
    B = TwistedComplex(alg, bgens, {}, C.bigraded, check=False)
    return cone(ev, B, C, check=False)


def untwist(C, k):
    """T_{P_k}^{-1}(C): cone(C -> hom(C, P_k)^dual (x) P_k)[-1]."""
    alg = C.alg
    P = projective(alg, k, bigraded=C.bigraded)
    H = HomComplex(C, P)
    gens = list(C.gens)
    delta = {key: dict(v) for key, v in C.delta.items()}
    for w in H.internal_degrees():
        coh = H.cohomology(w)
        for h in sorted(coh.reps):
            for rep in H.class_reps(w, h):
                idx = len(gens)
                if C.bigraded:
                    gens.append((k, -w, h - 1))
                else:
                    gens.append((k, 0, h - 1))
                for (b, a), v in rep.items():
                    delta[(idx, a)] = {p: -x for p, x in v.items()}
    return TwistedComplex(alg, gens, delta, C.bigraded, check=False)


def _cancellable(C, b, a):
    v = C.delta.get((b, a))
    if not v or len(v) != 1:
        return None
    (p, c), = v.items()
    if not C.alg.is_idempotent(p):
        return None
    return c


def reduce(C):
    """Gaussian elimination of invertible scalar entries until none remain."""
    gens = list(C.gens)
    delta = {key: dict(v) for key, v in C.delta.items()}
    alg = C.alg
    alive = set(range(len(gens)))
    out_of, into = {}, {}
    for (b, a) in delta:
        out_of.setdefault(a, set()).add(b)
        into.setdefault(b, set()).add(a)

    def cands():
        res = []
        for (b, a), v in delta.items():
            if len(v) == 1:
                (p, c), = v.items()
                if alg.is_idempotent(p):
                    cost = (len(out_of.get(a, ())) - 1) * (len(into.get(b, ())) - 1)
                    res.append((cost, b, a, c))
        res.sort()
        return res

    skipped = set()
    while True:
        found = False
        for cost, b, a, c in cands():
            if (b, a) in skipped:
                continue
            xs = [x for x in out_of.get(a, ()) if x != b]
            ys = [y for y in into.get(b, ()) if y != a]
            new = {}
            for x in xs:
                for y in ys:
                    prod = alg.mul(delta[(x, a)], delta[(b, y)])
                    if prod:
                        new[(x, y)] = prod
            if not C.bigraded and new:
                # refuse eliminations that would create a cycle
                if _creates_cycle(alive - {a, b}, delta, new, a, b):
                    skipped.add((b, a))
                    continue
            inv = 1 / c
            for (x, y), prod in new.items():
                r = viadd(delta.get((x, y), {}), prod, -inv)
                if r:
                    if (x, y) not in delta:
                        out_of.setdefault(y, set()).add(x)
                        into.setdefault(x, set()).add(y)
                    delta[(x, y)] = r
                elif (x, y) in delta:
                    del delta[(x, y)]
                    out_of[y].discard(x)
                    into[x].discard(y)
            for g in (a, b):
                for x in list(out_of.get(g, ())):
                    delta.pop((x, g), None)
                    into[x].discard(g)
                for y in list(into.get(g, ())):
                    delta.pop((g, y), None)
                    out_of[y].discard(g)
                out_of.pop(g, None)
                into.pop(g, None)
            alive -= {a, b}
            skipped = set()
            found = True
            break
        if not found:
            break
    keep = sorted(alive)
    pos = {g: n for n, g in enumerate(keep)}
    new_gens = [gens[g] for g in keep]
    new_delta = {(pos[b], pos[a]): v for (b, a), v in delta.items()}
    R = TwistedComplex(alg, new_gens, new_delta, C.bigraded, check=False)
    order = R.topological_order()
    if order is None:
        raise ComplexError("reduction produced a cyclic differential")
    if C.bigraded:
        order = sorted(range(len(new_gens)), key=lambda g: (-new_gens[g][2], g))
    return R.permuted(order)


def _creates_cycle(alive, delta, new, a, b):
    succ = {}
    for (x, y) in delta:
        if x in alive and y in alive:
            succ.setdefault(y, set()).add(x)
    for (x, y) in new:
        succ.setdefault(y, set()).add(x)
    state = {}

    def visit(u):
        stack = [(u, iter(succ.get(u, ())))]
        state[u] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                state[node] = 2
                stack.pop()
                continue
            s = state.get(nxt)
            if s == 1:
                return True
            if s is None:
                state[nxt] = 1
                stack.append((nxt, iter(succ.get(nxt, ()))))
        return False

    return any(state.get(u) is None and visit(u) for u in alive)


def is_minimal(C):
    return not any(_cancellable(C, b, a) for (b, a) in C.delta)


def parse_word(word):
    if isinstance(word, (list, tuple)):
        return [int(x) for x in word]
    toks = word.replace(",", " ").split()
    try:
        return [int(x) for x in toks]
    except ValueError:
        raise ComplexError("bad braid word %r" % word)


def apply_braid(word, C, reduce_each=True):
    """Apply a braid word; "1 2 -1" is T1 T2 T1^{-1}, rightmost letter first."""
    letters = parse_word(word)
    for s in letters:
        if s == 0 or abs(s) > C.alg.m:
            raise ComplexError("braid letter %d out of range 1..%d" % (s, C.alg.m))
    for s in reversed(letters):
        C = twist(C, s) if s > 0 else untwist(C, -s)
        if reduce_each:
            C = reduce(C)
    return C


def canonical_form(C):
    """Sort key for reduced complexes, used for orbit deduplication."""
    return (tuple(sorted(C.gens)), len(C.delta))


def same_complex(C0, C1):
    """Literal equality up to relabelling generators (no change of basis)."""
    import itertools
    if sorted(C0.gens) != sorted(C1.gens) or len(C0.delta) != len(C1.delta):
        return False
    groups = {}
    for a, g in enumerate(C0.gens):
        groups.setdefault(g, [[], []])[0].append(a)
    for b, g in enumerate(C1.gens):
        groups[g][1].append(b)
    keys = sorted(groups)
    choices = [itertools.permutations(groups[g][1]) for g in keys]
    for pick in itertools.product(*choices):
        pi = {}
        for g, perm in zip(keys, pick):
            pi.update(zip(groups[g][0], perm))
        if all(C1.delta.get((pi[b], pi[a])) == v for (b, a), v in C0.delta.items()):
            return True
    return False


def braid_relations_check(alg, seed=0):
    """Braid relations on every projective: witnessed for neighbours, literal for distant letters."""
    import random
    r = random.Random(seed)
    m = alg.m
    rows = []
    for k in range(1, m + 1):
        for l in range(k + 1, m + 1):
            for x in range(1, m + 1):
                X = projective(alg, x)
                if l == k + 1:
                    A = apply_braid([k, l, k], X)
                    B = apply_braid([l, k, l], X)
                    ok = sorted(A.gens) == sorted(B.gens) and quasi_iso_search(A, B, r) is not None
                    kind = "witnessed"
                else:
                    A = apply_braid([k, l], X)
                    B = apply_braid([l, k], X)
                    ok = same_complex(A, B)
                    kind = "literal"
                rows.append({"k": k, "l": l, "object": "P_%d" % x, "relation": kind, "pass": ok})
    return rows


def central_word(m, power=2):
    """(s_1 ... s_m)^{(m+1) power}: power 1 is the Garside element delta."""
    return list(range(1, m + 1)) * ((m + 1) * power)


def central_shift_check(alg, power=2):
    """Reduced delta^power image of each P_k against the single generator P_k[2m power]{(m+1) n power}."""
    m, n = alg.m, alg.n
    want_j, want_i = 2 * m * power, (m + 1) * n * power
    rows = []
    for k in range(1, m + 1):
        C = apply_braid(central_word(m, power), projective(alg, k))
        ok = C.gens == [(k, want_i, want_j)] and not C.delta
        rows.append({"k": k, "observed": [list(g) for g in C.gens], "expected": [k, want_i, want_j],
                     "pass": ok})
    return rows


def is_shifted_projective(C, k):
    """C is literally P_k{i}[j] for some shifts."""
    return len(C.gens) == 1 and C.gens[0][0] == k and not C.delta


def ext_total(C0, C1):
    return sum(HomComplex(C0, C1).total_table().values())


class OrbitResult:
    def __init__(self, word, explored, exhausted):
        self.word = word
        self.explored = explored
        self.exhausted = exhausted      # depth budget hit with unexplored objects left

    def to_json(self):
        return {"word": self.word, "explored": self.explored, "exhausted": self.exhausted,
                "found": self.word is not None}


def _children(task):
    word, C, letters = task
    out = []
    for s in letters:
        if word and word[0] == -s:
            continue
        out.append(((s,) + word, reduce(twist(C, s) if s > 0 else untwist(C, -s))))
    return out


def orbit_search(start, target, depth, letters=None, jobs=1):
    """Breadth-first search for a braid word w with target(w(start)).

    target is a predicate on reduced complexes or a complex (matched up to
    quasi-isomorphism).  Expansion runs on a process pool when jobs > 1.
    """
    import random
    alg = start.alg
    letters = letters or [s for k in alg.vertices() for s in (k, -k)]
    r = random.Random(0)
    if not callable(target):
        tgt = reduce(target)

        def target(C):
            return sorted(C.gens) == sorted(tgt.gens) and quasi_iso_search(C, tgt, r) is not None
    first = reduce(start)
    frontier = [((), first)]
    seen = {canonical_form(first): [first]}
    explored = 0
    pool = None
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        pool = ProcessPoolExecutor(jobs)
    try:
        for level in range(depth + 1):
            for word, C in frontier:
                explored += 1
                if target(C):
                    return OrbitResult(" ".join(str(x) for x in word), explored, False)
            if level == depth:
                return OrbitResult(None, explored, bool(frontier))
            tasks = [(w, C, letters) for w, C in frontier]
            batches = pool.map(_children, tasks) if pool else map(_children, tasks)
            nxt = []
            for batch in batches:
                for word, D in batch:
                    bucket = seen.setdefault(canonical_form(D), [])
                    if any(quasi_iso_search(E, D, r) is not None for E in bucket):
                        continue
                    bucket.append(D)
                    nxt.append((word, D))
            frontier = nxt
            if not frontier:
                return OrbitResult(None, explored, False)
    finally:
        if pool:
            pool.shutdown()
