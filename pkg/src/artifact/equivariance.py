"""C*-equivariance for perfect modules over the zigzag algebras.

G = C* acts on A_m^n with weight equal to degree.  A perfect module is a
(collapsed) twisted complex C; the families hom(p*N^0, N^r) over G^r are
modelled by twisted endomorphisms of C with Laurent polynomial coefficients.

Laurent morphisms
    A LaurentHom Y in r variables is a dict (b, a, p, ex) -> coeff, where
    ex[i] is the exponent of g_{i+1}.  It acts on a module element gen_a x by
        Y(gen_a x) = sum gen_b (p x) * z^ex * (g_r ... g_1)^{wt x},
    and the A-infinity component is rho^{r,1}(m) = (-1)^|m| Y(m), with all
    rho^{r,d+1}, d > 0, equal to zero.  In these terms the hom differential of
    the family is
        D_z Y = delta Y - (-1)^|Y| Y z(delta),
    where z(delta) scales each path by (g_r ... g_1)^{weight}, and the cocycle
    equations of a homotopy action read
        (-1)^{1-r} D_z Y^r + sum_q (-1)^{1-q} Y^{r-q} * Y^q
                           + sum_q (-1)^q m_{q+1,q}^* Y^{r-1} = 0,
    with L * R the composition of the two families (exponents concatenated,
    R's paths weighed by L's variables) and m_{q+1,q}^* the merge g_{q+1} g_q.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import itertools
import random

from .exact_core import (FiniteComplex, SparseMatrix, q, qstr, rank,
                         solve_columns)
from .twisted import (TwistedComplex, HomComplex, ComplexError, compose, mor_add,
                      mor_scale, apply_braid, projective, is_minimal)
from .modules_core import (AInfModule, HomElement, realize, strict_hom, hom_mu1,
                           hom_mu2, twisted_to_hom)


class EquivarianceError(ValueError):
    pass


class WindowExhausted(EquivarianceError):
    pass


def _par(x):
    return -1 if x % 2 else 1


def _iadd(d, key, c):
    v = d.get(key, 0) + c
    if v:
        d[key] = v
    else:
        d.pop(key, None)


# --- rational representations and group cohomology -----------------------------

@dataclass
class RationalRep:
    """Finite-dimensional rational representation: weight -> multiplicity."""
    dims: dict

    def __post_init__(self):
        self.dims = {int(w): int(d) for w, d in self.dims.items() if d}

    @property
    def dim(self):
        return sum(self.dims.values())

    def weights(self):
        return sorted(self.dims)

    def basis(self):
        return [(w, i) for w in self.weights() for i in range(self.dims[w])]

    def invariants(self):
        return RationalRep({0: self.dims.get(0, 0)})

    @classmethod
    def random(cls, rng, lo=-5, hi=5, max_dim=4):
        dims = {}
        for _ in range(rng.randint(1, max_dim)):
            w = rng.randint(lo, hi)
            dims[w] = dims.get(w, 0) + 1
        return cls(dims)


def _merge_ex(ex, q):
    """Substitute g_{q+1} g_q for the q-th variable (1-based)."""
    return ex[:q] + (ex[q - 1],) + ex[q:]


def bar_d(b, r):
    """Bar differential on B^{r-1}(G, V) -> B^r(G, V).

    Elements are dicts (ex, (w, i)) -> coeff with len(ex) = r; ex[j] is the
    exponent of g_{j+1} and (w, i) a basis vector of weight w.
    """
    out = {}
    for (ex, v), c in b.items():
        for qq in range(1, r + 1):
            _iadd(out, (_merge_ex(ex, qq), v), _par(qq) * c)
        _iadd(out, (ex + (v[0],), v), _par(r + 1) * c)
    return out


def cochain_d(c, r):
    """Group cochain differential C^{r-1}(G, V) -> C^r(G, V)."""
    out = {}
    for (ex, v), x in c.items():
        for qq in range(1, r):
            _iadd(out, (_merge_ex(ex, qq), v), _par(qq) * x)
        _iadd(out, (ex + (v[0],), v), _par(r) * x)
        _iadd(out, ((0,) + ex, v), x)
    return out


def _window_values(w, window):
    if window == "minimal":
        return sorted({0, w})
    lo, hi = min(0, w), max(0, w)
    return list(range(lo, hi + 1))


def group_complex(V, kind, w, top, window="box"):
    """Weight-w part of the bar (kind='bar') or cochain complex, levels 0..top.

    Exponents are restricted to the values of the window; the monomials whose
    exponents all lie in {0, w} (or in [min(0,w), max(0,w)]) span a subcomplex
    that is also a direct summand, so its cohomology is the full cohomology.
    """
    vals = _window_values(w, window)
    vecs = [(w, i) for i in range(V.dims.get(w, 0))]
    shift = 1 if kind == "bar" else 0
    basis = {}
    for r in range(top + 1):
        basis[r] = [(ex, v) for ex in itertools.product(vals, repeat=r + shift) for v in vecs]
    cx = FiniteComplex(basis)
    for r in range(top):
        pos = {e: n for n, e in enumerate(basis[r + 1])}
        m = SparseMatrix(len(basis[r + 1]), len(basis[r]))
        for col, e in enumerate(basis[r]):
            img = bar_d({e: 1}, r + 1) if kind == "bar" else cochain_d({e: 1}, r + 1)
            for key, c in img.items():
                if key not in pos:
                    raise EquivarianceError("window is not closed under the differential")
                m.add(pos[key], col, c)
        cx.set_d(r, m)
    cx.set_d(top, SparseMatrix(0, len(basis[top])))
    return cx


def verify_group_cohomology(V, top=3, window="box"):
    """Cohomology of the truncated bar and cochain complexes, certified below top.

    Returns a report with per-weight dimensions and the comparison with V and V^G.
    """
    report = {"rep": {str(w): d for w, d in sorted(V.dims.items())}, "top": top,
              "certified_levels": list(range(top)), "weights": {}, "bar_ok": True,
              "cochain_ok": True}
    for w in V.weights():
        entry = {}
        for kind in ("bar", "cochain"):
            dims = group_complex(V, kind, w, top, window).cohomology().dims()
            got = [dims.get(r, 0) for r in range(top)]
            want = [0] * top
            if kind == "bar" or w == 0:
                want[0] = V.dims[w]
            entry[kind] = got
            if got != want:
                report[kind + "_ok"] = False
        report["weights"][str(w)] = entry
    report["ok"] = report["bar_ok"] and report["cochain_ok"]
    return report


# --- Laurent morphisms ------------------------------------------------------------

class LaurentHom:
    """Element of hom(p*N^0, N^r) in the twisted model; see the module docstring."""

    __slots__ = ("C", "r", "deg", "terms")

    def __init__(self, C, r, deg, terms=None):
        self.C, self.r, self.deg = C, r, deg
        self.terms = {}
        alg = C.alg
        for key, c in (terms or {}).items():
            if c:
                b, a, p, ex = key
                if len(ex) != r:
                    raise EquivarianceError("exponent tuple of length %d in %d variables"
                                            % (len(ex), r))
                if alg.deg(p) + C.t(b) - C.t(a) != deg:
                    raise EquivarianceError("entry %s does not have degree %d" % ((b, a, p), deg))
                self.terms[key] = q(c)

    def __repr__(self):
        return "LaurentHom(r=%d, deg=%d, terms=%d)" % (self.r, self.deg, len(self.terms))

    @classmethod
    def constant(cls, C, r, deg, mor):
        z = (0,) * r
        return cls(C, r, deg, {(b, a, p, z): c for (b, a), v in mor.items()
                               for p, c in v.items()})

    @classmethod
    def identity(cls, C, r=1):
        alg = C.alg
        return cls(C, r, 0, {(a, a, alg.e(g[0]), (0,) * r): 1
                             for a, g in enumerate(C.gens)})

    def copy(self):
        return LaurentHom(self.C, self.r, self.deg, self.terms)

    def is_zero(self):
        return not self.terms

    def add(self, other, c=1):
        if other.r != self.r:
            raise EquivarianceError("adding families over different G^r")
        out = dict(self.terms)
        for key, x in other.terms.items():
            _iadd(out, key, c * x)
        return LaurentHom(self.C, self.r, self.deg, out)

    def scale(self, c):
        return LaurentHom(self.C, self.r, self.deg, {k: c * x for k, x in self.terms.items()})

    def __eq__(self, other):
        return self.r == other.r and self.add(other, -1).is_zero()

    def exponents(self):
        return sorted({k[3] for k in self.terms})

    def support_window(self):
        """Per-variable [min, max] exponent ranges."""
        if not self.terms:
            return []
        exs = [k[3] for k in self.terms]
        return [[min(e[i] for e in exs), max(e[i] for e in exs)] for i in range(self.r)]

    def evaluate(self, point):
        """Specialize at (g_1, ..., g_r) (rational, nonzero): a plain twisted morphism."""
        out = {}
        for (b, a, p, ex), c in self.terms.items():
            x = c
            for g, e in zip(point, ex):
                x *= Fraction(g) ** e
            v = out.setdefault((b, a), {})
            _iadd(v, p, x)
        return {k: v for k, v in out.items() if v}

    def at_identity(self):
        return self.evaluate((1,) * self.r)

    def idempotent_part(self):
        alg = self.C.alg
        return {k: c for k, c in self.terms.items() if alg.is_idempotent(k[2])}

    def to_json(self):
        return {"r": self.r, "deg": self.deg,
                "terms": [[b, a, p, list(ex), qstr(c)]
                          for (b, a, p, ex), c in sorted(self.terms.items())]}

    @classmethod
    def from_json(cls, C, data):
        return cls(C, data["r"], data["deg"],
                   {(t[0], t[1], t[2], tuple(t[3])): q(t[4]) for t in data["terms"]})


class _Ops:
    """Precomputed composition tables for a twisted complex."""

    def __init__(self, C):
        self.C = C
        alg = C.alg
        self.alg = alg
        self.delta_by_src = {}
        self.delta_by_tgt = {}
        for (b, a), v in C.delta.items():
            for p, c in v.items():
                self.delta_by_src.setdefault(a, []).append((b, p, c, alg.wt(p)))
                self.delta_by_tgt.setdefault(b, []).append((a, p, c, alg.wt(p)))
        self.elements = {}
        for a, ga in enumerate(C.gens):
            for b, gb in enumerate(C.gens):
                for p in alg.paths(ga[0], gb[0]):
                    d = alg.deg(p) + C.t(b) - C.t(a)
                    self.elements.setdefault(d, []).append((b, a, p))
        self.min_degree = min(self.elements) if self.elements else 0


_OPS = {}


def ops(C):
    key = id(C)
    o = _OPS.get(key)
    if o is None or o.C is not C:
        o = _Ops(C)
        _OPS[key] = o
    return o


def D_z(Y):
    """Hom differential of the family: delta Y - (-1)^|Y| Y z(delta)."""
    o = ops(Y.C)
    mul = o.alg.mul_basis
    sgn = -_par(Y.deg)
    out = {}
    for (b, a, p, ex), c in Y.terms.items():
        for (b2, pd, cd, wd) in o.delta_by_src.get(b, ()):
            x = mul(pd, p)
            if x is not None:
                _iadd(out, (b2, a, x, ex), c * cd)
        for (a0, pd, cd, wd) in o.delta_by_tgt.get(a, ()):
            x = mul(p, pd)
            if x is not None:
                _iadd(out, (b, a0, x, tuple(e + wd for e in ex)), sgn * c * cd)
    return LaurentHom(Y.C, Y.r, Y.deg + 1, out)


def star(L, R):
    """Composition of p*-pulled families: L in the variables after R's."""
    alg = L.C.alg
    mul = alg.mul_basis
    by_src = {}
    for (c, b, p, ex), x in L.terms.items():
        by_src.setdefault(b, []).append((c, p, ex, x))
    out = {}
    for (b, a, pr, er), xr in R.terms.items():
        w = alg.wt(pr)
        for (c, pl, el, xl) in by_src.get(b, ()):
            pp = mul(pl, pr)
            if pp is not None:
                _iadd(out, (c, a, pp, er + tuple(e + w for e in el)), xl * xr)
    return LaurentHom(L.C, L.r + R.r, L.deg + R.deg, out)


def merge(Y, qq):
    """m_{q+1,q}^* Y: a family over G^{r+1}."""
    return LaurentHom(Y.C, Y.r + 1, Y.deg,
                      {(b, a, p, _merge_ex(ex, qq)): c for (b, a, p, ex), c in Y.terms.items()})


def compose_z(Y, f, scale=True):
    """Y z(f) for a plain twisted morphism f (paths weighed by all variables)."""
    alg = Y.C.alg
    by_tgt = {}
    for (a, a0), v in f.items():
        for p, c in v.items():
            by_tgt.setdefault(a, []).append((a0, p, c, alg.wt(p) if scale else 0))
    out = {}
    for (b, a, p, ex), c in Y.terms.items():
        for (a0, pf, cf, w) in by_tgt.get(a, ()):
            x = alg.mul_basis(p, pf)
            if x is not None:
                _iadd(out, (b, a0, x, tuple(e + w for e in ex)), c * cf)
    return out


# --- Laurent linear solves -------------------------------------------------------

def _unit_columns(C, r, deg, exps, op):
    o = ops(C)
    cols = {}
    for (b, a, p) in o.elements.get(deg, ()):
        for ex in exps:
            img = op(LaurentHom(C, r, deg, {(b, a, p, ex): 1}))
            cols[(b, a, p, ex)] = img
    return cols


def _diag_shifts(exps, lo, hi):
    out = set()
    for ex in exps:
        for j in range(lo, hi + 1):
            out.add(tuple(e + j for e in ex))
    return sorted(out)


def solve_Dz(rhs, deg, window, extra_exps=()):
    """Find X of degree deg with D_z X = rhs, exponents rhs +- j(1,..,1), |j| <= window."""
    C, r = rhs.C, rhs.r
    if rhs.is_zero():
        return LaurentHom(C, r, deg)
    exps = _diag_shifts(set(rhs.exponents()) | set(extra_exps), -window, window)
    cols = {k: D_z(LaurentHom(C, r, deg, {k: 1})).terms
            for k in _keys(C, deg, exps)}
    x = solve_columns(cols, rhs.terms)
    if x is None:
        return None
    return LaurentHom(C, r, deg, x)


def _keys(C, deg, exps):
    return [(b, a, p, ex) for (b, a, p) in ops(C).elements.get(deg, ()) for ex in exps]


def _window_policy(C, n):
    ws = _spread(C)
    base = max(ws + n, 1)
    return base, 8 * max(ws, 1) + n


def _spread(C):
    ts = [C.t(a) for a in range(len(C.gens))]
    return (max(ts) - min(ts)) * max(C.alg.n, 1) if ts else 0


def solve_Dz_adaptive(rhs, deg, extra_exps=()):
    base, cap = _window_policy(rhs.C, rhs.C.alg.n)
    w = base
    while True:
        x = solve_Dz(rhs, deg, w, extra_exps)
        if x is not None:
            return x, w
        if w >= cap:
            return None, w
        w = min(2 * w, cap)


# --- Killing cocycle ---------------------------------------------------------------

def weight_delta(C):
    """W delta: every differential entry scaled by the weight of its path."""
    alg = C.alg
    out = {}
    for (b, a), v in C.delta.items():
        r = {p: alg.wt(p) * c for p, c in v.items() if alg.wt(p)}
        if r:
            out[(b, a)] = r
    return out


def killing_twisted(C):
    """Twisted-model Killing cocycle -W delta (a closed degree one endomorphism)."""
    return mor_scale(weight_delta(C), -1)


def killing_cocycle(M):
    """ki_M as a HomElement: ki^2(m, a) = -wt(a) mu^2(m, a), higher terms of mu^{d+1} likewise."""
    alg = M.alg
    phi = {}
    for (m, ins), v in M.mu.items():
        if not ins:
            continue
        w = sum(alg.wt(a) for a in ins)
        if w:
            phi[(m, ins)] = {x: -w * c for x, c in v.items()}
    return HomElement(M, M, 1, phi)


def module_weight(M, label):
    """Weight of a realized basis element (g, x): the weight of the path x."""
    return M.alg.wt(label[1])


def omega(M):
    """omega^1(m) = (-1)^|m| wt(m) m on a realized module."""
    phi = {}
    for m in M.labels:
        w = module_weight(M, m)
        if w:
            phi[(m, ())] = {m: _par(M.deg[m]) * w}
    return HomElement(M, M, 0, phi)


def killing_relation(C, alpha=None):
    """Check ki = mu^1(omega) + phi_{W delta} and, given alpha, ki = mu^1(omega - phi_alpha).

    Here D alpha = -W delta in the twisted model; phi is the strict embedding.
    """
    M = realize(C)
    ki = killing_cocycle(M).truncate(3)
    closed = hom_mu1(ki, 3).is_zero()
    wd = twisted_to_hom(weight_delta(C), M, M, 1)
    out = {"closed": closed, "omega_relation": hom_mu1(omega(M), 3).add(wd) == ki}
    if alpha is not None:
        total = omega(M).add(twisted_to_hom(alpha, M, M, 0), -1)
        out["alpha_bounds"] = hom_mu1(total, 3) == ki
    return out


def solve_killing(C):
    """alpha with D alpha = -W delta in end(C), or None when the Killing class is nonzero."""
    H = HomComplex(C, C, bigraded=False)
    kappa = killing_twisted(C)
    if not kappa:
        return {}
    return H.preimage(kappa, 0, 1)


def killing_class_coords(C):
    H = HomComplex(C, C, bigraded=False)
    kappa = killing_twisted(C)
    if not kappa:
        return []
    return H.class_coords(kappa, 0, 1)


# --- weak actions -----------------------------------------------------------------

def rigid_simple(C):
    H = HomComplex(C, C, bigraded=False)
    t = H.total_table()
    return t.get(0, 0) == 1 and t.get(1, 0) == 0


def _alpha_zero_blocks(C, alpha):
    """Idempotent part of alpha as matrices on (vertex, t) blocks."""
    alg = C.alg
    blocks = {}
    for a, g in enumerate(C.gens):
        blocks.setdefault((g[0], C.t(a)), []).append(a)
    mats = {}
    for key, gens in blocks.items():
        pos = {a: i for i, a in enumerate(gens)}
        m = [[Fraction(0)] * len(gens) for _ in gens]
        e = alg.e(key[0])
        for (b, a), v in alpha.items():
            if a in pos and b in pos and e in v:
                m[pos[b]][pos[a]] = v[e]
        mats[key] = (gens, m)
    return mats


def _diagonalize(m):
    """Rational eigen-decomposition: list of (eigenvalue, projector) or None."""
    import sympy
    M = sympy.Matrix(m)
    try:
        P, D = M.diagonalize()
    except sympy.matrices.common.MatrixError:
        return None
    vals = [D[i, i] for i in range(D.rows)]
    if any(not v.is_rational for v in vals) or any(not x.is_rational for x in P):
        return None
    Pinv = P.inv()
    out = {}
    for i, lam in enumerate(vals):
        proj = P[:, i] * Pinv[i, :]
        out[lam] = proj if lam not in out else out[lam] + proj
    res = []
    for lam, proj in out.items():
        pm = [[Fraction(int(proj[i, j].p), int(proj[i, j].q)) for j in range(proj.cols)]
              for i in range(proj.rows)]
        res.append((Fraction(int(lam.p), int(lam.q)), pm))
    return res


def residue_data(C, alpha):
    """Eigenvalues of the idempotent part of alpha and the residue shift c.

    For a minimal complex the idempotent part rho^0 of a covariantly constant,
    unital rho^1 solves z d/dz rho^0 = -rho^0 (alpha^0 + c), so rho^0 = z^{-(alpha^0 + c)}.
    This is Laurent exactly when the eigenvalues are rational, congruent mod Z
    and alpha^0 is diagonalizable; c = -(largest eigenvalue) makes them integral.
    """
    mats = _alpha_zero_blocks(C, alpha)
    blocks = {}
    eig = []
    for key, (gens, m) in mats.items():
        d = _diagonalize(m)
        if d is None:
            raise EquivarianceError("idempotent part of alpha is not rationally diagonalizable "
                                    "on block %s" % (key,))
        blocks[key] = (gens, d)
        eig.extend(lam for lam, _ in d)
    lam_max = max(eig)
    if any((lam_max - lam).denominator != 1 for lam in eig):
        raise EquivarianceError("eigenvalues of alpha^0 are not congruent mod Z: %s"
                                % sorted(set(eig)))
    c = -lam_max
    rho0 = {}
    for key, (gens, d) in blocks.items():
        e = C.alg.e(key[0])
        for lam, proj in d:
            ex = int(-(lam + c))
            for i, b in enumerate(gens):
                for j, a in enumerate(gens):
                    if proj[i][j]:
                        _iadd(rho0, (b, a, e, (ex,)), proj[i][j])
    return {"eigenvalues": sorted(set(eig)), "c": c, "rho0": LaurentHom(C, 1, 0, rho0)}


def connection(Y, alpha, c):
    """nabla Y = z dY/dz + Y z(alpha) + c Y for a one-variable family."""
    out = {}
    for (b, a, p, ex), x in Y.terms.items():
        _iadd(out, (b, a, p, ex), (ex[0] + c) * x)
    for key, x in compose_z(Y, alpha).items():
        _iadd(out, key, x)
    return LaurentHom(Y.C, 1, Y.deg, out)


@dataclass
class WeakAction:
    C: object
    alpha: dict
    c: Fraction
    eigenvalues: list
    rho1: LaurentHom
    tau: LaurentHom
    window: list
    unit_exact: bool


def weak_action_solve(C, alpha=None, exact_unit=True):
    """Covariantly constant unital rho^1 on a rigid, simple, minimal complex."""
    if not is_minimal(C):
        raise EquivarianceError("weak_action_solve needs a minimal (reduced) complex")
    if not rigid_simple(C):
        raise EquivarianceError("module is not rigid and simple")
    if alpha is None:
        alpha = solve_killing(C)
        if alpha is None:
            raise EquivarianceError("Killing class is nonzero")
    res = residue_data(C, alpha)
    rho0, c = res["rho0"], res["c"]
    alg = C.alg
    ex0 = [k[3][0] for k in rho0.terms]
    spread = _spread(C) + alg.n
    width = max(spread, 1)
    cap = 8 * width + alg.n
    while True:
        lo, hi = min(ex0) - width, max(ex0) + width + alg.n
        x = _weak_system(C, alpha, c, rho0, lo, hi, exact_unit)
        if x is not None:
            rho_rad, tau = x
            rho1 = rho0.add(rho_rad)
            unit_exact = _unit_is_exact(C, rho1)
            return WeakAction(C, alpha, c, res["eigenvalues"], rho1, tau, [lo, hi], unit_exact)
        if width >= cap:
            if exact_unit:
                return weak_action_solve(C, alpha, exact_unit=False)
            raise WindowExhausted("no covariantly constant rho^1 in exponent window [%d, %d]"
                                  % (lo, hi))
        width = min(2 * width, cap)


def _weak_system(C, alpha, c, rho0, lo, hi, exact_unit):
    alg = C.alg
    o = ops(C)
    exps = [(e,) for e in range(lo, hi + 1)]
    texps = [(e,) for e in range(lo - alg.n, hi + alg.n + 1)]
    cols = {}
    for (b, a, p) in o.elements.get(0, ()):
        if alg.is_idempotent(p):
            continue
        for ex in exps:
            u = LaurentHom(C, 1, 0, {(b, a, p, ex): 1})
            col = {("D",) + k: x for k, x in D_z(u).terms.items()}
            for k, x in connection(u, alpha, c).terms.items():
                col[("N",) + k] = x
            if exact_unit:
                col[("U", b, a, p)] = 1
            cols[("rho", b, a, p, ex)] = col
    for (b, a, p) in o.elements.get(-1, ()):
        for ex in texps:
            u = LaurentHom(C, 1, -1, {(b, a, p, ex): 1})
            cols[("tau", b, a, p, ex)] = {("N",) + k: -x for k, x in D_z(u).terms.items()}
    rhs = {}
    for k, x in D_z(rho0).terms.items():
        rhs[("D",) + k] = -x
    for k, x in connection(rho0, alpha, c).terms.items():
        rhs[("N",) + k] = -x
    sol = solve_columns(cols, rhs)
    if sol is None:
        return None
    rho = {k[1:]: x for k, x in sol.items() if k[0] == "rho"}
    tau = {k[1:]: x for k, x in sol.items() if k[0] == "tau"}
    return LaurentHom(C, 1, 0, rho), LaurentHom(C, 1, -1, tau)


def _unit_is_exact(C, rho1):
    diff = mor_add(rho1.at_identity(), LaurentHom.identity(C).at_identity(), -1)
    if not diff:
        return True
    H = HomComplex(C, C, bigraded=False)
    return H.is_exact(diff, 0, 0)


def naive_rho1(C):
    """The strict action of a bigraded complex: diag(z^{i_a}) on the collapse."""
    if not C.bigraded:
        raise EquivarianceError("naive action needs a bigraded complex")
    Cc = C.collapse()
    alg = C.alg
    rho = LaurentHom(Cc, 1, 0, {(a, a, alg.e(g[0]), (g[1],)): 1
                                for a, g in enumerate(C.gens)})
    return Cc, rho


# --- cocycle equations -------------------------------------------------------------

def epsilon(rhos, s):
    """sum_q (-1)^{1-q} rho^{s-q} * rho^q + sum_q (-1)^q m_{q+1,q}^* rho^{s-1}."""
    C = rhos[1].C
    out = LaurentHom(C, s, 2 - s)
    for qq in range(1, s):
        L, R = rhos.get(s - qq), rhos.get(qq)
        if L is not None and R is not None and L.terms and R.terms:
            out = out.add(star(L, R), _par(1 - qq))
    prev = rhos.get(s - 1)
    if prev is not None:
        for qq in range(1, s):
            out = out.add(merge(prev, qq), _par(qq))
    return out


def cocycle_defect(rhos, r):
    """Left side of the level-r cocycle equation (zero for a homotopy action)."""
    C = rhos[1].C
    Yr = rhos.get(r)
    out = epsilon(rhos, r) if r >= 2 else LaurentHom(C, 1, 1)
    if Yr is not None:
        out = out.add(D_z(Yr), _par(1 - r))
    return out


def _eps_linear(eta, rho1, s):
    """Part of epsilon^s that depends on rho^{s-1}, applied to eta."""
    out = star(eta, rho1)
    out = out.add(star(rho1, eta), _par(s))
    for qq in range(1, s):
        out = out.add(merge(eta, qq), _par(qq))
    return out


def verify_weak(w_or_rho1):
    """Solve D_z rho^2 = rho^1 * rho^1 - m^* rho^1; returns rho^2 or None."""
    rho1 = w_or_rho1.rho1 if isinstance(w_or_rho1, WeakAction) else w_or_rho1
    rhs = epsilon({1: rho1}, 2)
    if rhs.is_zero():
        return LaurentHom(rho1.C, 2, -1)
    x, _ = solve_Dz_adaptive(rhs, -1)
    return x


@dataclass
class StepInfo:
    s: int
    epsilon_terms: int
    eta_terms: int
    rho_terms: int
    window: int


def obstruction_step(rhos, s):
    """Extend a partial homotopy action from level s-1 to level s.

    Solves D_z rho^s = (-1)^s epsilon^s, adjusting rho^{s-1} by a D_z-closed
    correction eta when epsilon^s is not yet exact.  Returns (rhos, info).
    """
    C = rhos[1].C
    o = ops(C)
    eps = epsilon(rhos, s)
    deg = 1 - s
    target = eps.scale(_par(s))
    if target.is_zero():
        rhos = dict(rhos)
        rhos[s] = LaurentHom(C, s, deg)
        return rhos, StepInfo(s, 0, 0, 0, 0)
    if deg >= o.min_degree:
        x, w = solve_Dz_adaptive(target, deg)
        if x is not None:
            rhos = dict(rhos)
            rhos[s] = x
            return rhos, StepInfo(s, len(eps.terms), 0, len(x.terms), w)
    base, cap = _window_policy(C, C.alg.n)
    w = base
    while True:
        got = _joint_step(rhos, s, target, w)
        if got is not None:
            eta, x = got
            rhos = dict(rhos)
            rhos[s - 1] = rhos[s - 1].add(eta)
            rhos[s] = x
            return rhos, StepInfo(s, len(eps.terms), len(eta.terms), len(x.terms), w)
        if w >= cap:
            raise WindowExhausted("level %d obstruction not removable within window %d" % (s, w))
        w = min(2 * w, cap)


def _joint_step(rhos, s, target, window):
    C = rhos[1].C
    o = ops(C)
    rho1 = rhos[1]
    prev = rhos[s - 1]
    deg = 1 - s
    eta_exps = _diag_shifts(set(prev.exponents()) | set(rhos[s - 1].exponents()),
                            -window, window)
    cols = {}
    for key in _keys(C, 2 - s, eta_exps):
        u = LaurentHom(C, s - 1, 2 - s, {key: 1})
        col = {("C",) + k: x for k, x in D_z(u).terms.items()}
        for k, x in _eps_linear(u, rho1, s).terms.items():
            _iadd(col, ("E",) + k, -_par(s) * x)
        cols[("eta",) + key] = col
    if deg >= o.min_degree:
        img_exps = set(target.exponents())
        for c in cols.values():
            img_exps |= {k[4] for k in c if k[0] == "E"}
        x_exps = _diag_shifts(img_exps, -window, window)
        for key in _keys(C, deg, x_exps):
            u = LaurentHom(C, s, deg, {key: 1})
            cols[("x",) + key] = {("E",) + k: x for k, x in D_z(u).terms.items()}
    rhs = {("E",) + k: x for k, x in target.terms.items()}
    sol = solve_columns(cols, rhs)
    if sol is None:
        return None
    eta = LaurentHom(C, s - 1, 2 - s, {k[1:]: x for k, x in sol.items() if k[0] == "eta"})
    x = LaurentHom(C, s, deg, {k[1:]: x for k, x in sol.items() if k[0] == "x"})
    return eta, x


@dataclass
class HomotopyAction:
    C: object
    rho: dict                 # r -> LaurentHom
    R: int
    steps: list = field(default_factory=list)
    weak: object = None

    def level_windows(self):
        return {r: Y.support_window() for r, Y in sorted(self.rho.items())}

    def to_json(self):
        return {"complex": self.C.to_json(), "R": self.R,
                "rho": {str(r): Y.to_json() for r, Y in sorted(self.rho.items())}}

    @classmethod
    def from_json(cls, data):
        C = TwistedComplex.from_json(data["complex"])
        rho = {int(r): LaurentHom.from_json(C, v) for r, v in data["rho"].items()}
        return cls(C, rho, int(data["R"]))

    def effective_level(self):
        """Largest r with rho^r nonzero; invariant under degree rescaling."""
        return max(r for r, Y in self.rho.items() if r == 1 or not Y.is_zero())


def termination_level(C):
    """Largest r for which the level-r equation can be nonzero: 2 - min hom degree."""
    return 2 - ops(C).min_degree


def homotopy_extend(rho1, rho2):
    """Iterate obstruction_step until the degree bound forces everything to vanish."""
    C = rho1.C
    rhos = {1: rho1, 2: rho2}
    R = termination_level(C)
    steps = []
    for s in range(3, R + 1):
        rhos, info = obstruction_step(rhos, s)
        steps.append(info)
    for r in list(rhos):
        if rhos[r].is_zero() and r > 1:
            rhos[r] = LaurentHom(C, r, 1 - r)
    return HomotopyAction(C, rhos, R, steps)


# --- validation ---------------------------------------------------------------------

def _apply_rho(Y, M, label, c=1):
    """rho^{r,1}(m) = (-1)^|m| Y(m) as a Laurent vector {(ex, label'): coeff}."""
    alg = M.alg
    g, x = label
    w = alg.wt(x)
    out = {}
    s = _par(M.deg[label]) * c
    for (b, p, ex, cy) in _by_src(Y).get(g, ()):
        px = alg.mul_basis(p, x)
        if px is not None:
            _iadd(out, (tuple(e + w for e in ex), (b, px)), s * cy)
    return out


_BYSRC = {}


def _by_src(Y):
    key = id(Y)
    hit = _BYSRC.get(key)
    if hit is not None and hit[0] is Y:
        return hit[1]
    table = {}
    for (b, a, p, ex), c in Y.terms.items():
        table.setdefault(a, []).append((b, p, ex, c))
    _BYSRC[key] = (Y, table)
    return table


def _apply_rho_vec(Y, M, vec):
    out = {}
    for (ex, m), c in vec.items():
        for (ex2, m2), x in _apply_rho(Y, M, m, c).items():
            _iadd(out, (ex + ex2, m2), x)
    return out


def _mu1_vec(M, vec):
    out = {}
    for (ex, m), c in vec.items():
        for m2, x in M.apply(m, ()).items():
            _iadd(out, (ex, m2), c * x)
    return out


def _mu2_vec(M, vec, a):
    """mu^2(v, (g_r...g_1)(a)) for a Laurent vector v."""
    w = M.alg.wt(a)
    out = {}
    for (ex, m), c in vec.items():
        for m2, x in M.apply(m, (a,)).items():
            _iadd(out, (tuple(e + w for e in ex), m2), c * x)
    return out


def literal_check(action, levels=None):
    """Component check of the A-infinity cocycle equations on the realized module.

    Components with d >= 2 inputs vanish identically (mu^{>=3} = 0 and
    rho^{r, >=2} = 0), so the arity one and two components are the full
    content.  Returns the list of (r, d, m, a) where the equation fails.
    """
    C = action.C
    M = realize(C)
    alg = C.alg
    rho = action.rho
    bad = []
    top = action.R + 1 if levels is None else levels
    for r in range(1, top + 1):
        Yr = rho.get(r)
        for m in M.labels:
            sm = _par(M.deg[m])
            unit = {((), m): 1}
            acc = {}
            if Yr is not None and Yr.terms:
                for k, x in _mu1_vec(M, _apply_rho(Yr, M, m)).items():
                    _iadd(acc, k, sm * x)
                for k, x in _apply_rho_vec(Yr, M, {((), m2): c for (_, m2), c in
                                                    _mu1_vec(M, unit).items()}).items():
                    _iadd(acc, k, sm * x)
            for qq in range(1, r):
                L, R_ = rho.get(r - qq), rho.get(qq)
                if L is None or R_ is None or not L.terms or not R_.terms:
                    continue
                inner = _apply_rho(R_, M, m)
                for k, x in _apply_rho_vec(L, M, inner).items():
                    _iadd(acc, k, sm * x)
            prev = rho.get(r - 1) if r >= 2 else None
            if prev is not None and prev.terms:
                base = _apply_rho(prev, M, m)
                for qq in range(1, r):
                    for (ex, m2), x in base.items():
                        _iadd(acc, (_merge_ex(ex, qq), m2), _par(qq) * x)
            if acc:
                bad.append((r, 0, m, None))
            if Yr is None or not Yr.terms:
                continue
            v = M.vertex[m]
            for b in alg.basis:
                if b.length == 0 or b.tgt != v:
                    continue
                a = b.label
                acc = {}
                for k, x in _mu2_vec(M, _apply_rho(Yr, M, m), a).items():
                    _iadd(acc, k, sm * x)
                s2 = _par(alg.deg(a) + M.deg[m] + 1)
                for m2, c in M.apply(m, (a,)).items():
                    for k, x in _apply_rho(Yr, M, m2, c).items():
                        _iadd(acc, k, s2 * x)
                if acc:
                    bad.append((r, 1, m, a))
    return bad


def _pullback_module(M, g):
    """g^*M for a scalar g: inputs a scaled by g^{wt a}."""
    alg = M.alg
    mu = {}
    for (m, ins), v in M.mu.items():
        w = sum(alg.wt(a) for a in ins)
        f = Fraction(g) ** w
        mu[(m, ins)] = {x: f * c for x, c in v.items()}
    return AInfModule(alg, M.basis, mu, name="pullback")


def _fibre_map(Y, M, point, src, tgt):
    """rho^r at a rational point as a HomElement src -> tgt."""
    alg = M.alg
    total = Fraction(1)
    for g in point:
        total *= Fraction(g)
    f = Y.evaluate(point)
    lin = {}
    for (g_, x) in M.labels:
        img = {}
        for (b, a), v in f.items():
            if a != g_:
                continue
            for p, c in v.items():
                px = alg.mul_basis(p, x)
                if px is not None:
                    _iadd(img, (b, px), c * total ** alg.wt(x))
        if img:
            lin[(g_, x)] = img
    return strict_hom(src, tgt, Y.deg, lin)


def sampled_check(action, points=20, seed=0):
    """Cocycle equations at random rational points via the module category operations."""
    C = action.C
    M = realize(C)
    rng = random.Random(seed)
    bad = []
    for r in range(1, action.R + 1):
        for _ in range(points):
            pt = tuple(Fraction(rng.choice([-1, 1]) * rng.randint(1, 5), rng.randint(1, 4))
                       for _ in range(r))
            mods = {}

            def pulled(lo, hi):
                g = Fraction(1)
                for x in pt[lo:hi]:
                    g *= x
                key = (lo, hi)
                if key not in mods:
                    mods[key] = _pullback_module(M, g)
                return mods[key]

            Mr = pulled(0, r)
            Yr = action.rho.get(r)
            total = HomElement(M, Mr, 2 - r, {})
            if Yr is not None:
                total = total.add(hom_mu1(_fibre_map(Yr, M, pt, M, Mr), 2))
            for qq in range(1, r):
                L, R_ = action.rho.get(r - qq), action.rho.get(qq)
                if L is None or R_ is None:
                    continue
                Mq = pulled(0, qq)
                right = _fibre_map(R_, M, pt[:qq], M, Mq)
                left = _fibre_map(L, M, pt[qq:], Mq, Mr)
                total = total.add(hom_mu2(left, right, 2))
            prev = action.rho.get(r - 1) if r >= 2 else None
            if prev is not None:
                for qq in range(1, r):
                    merged = pt[:qq - 1] + (pt[qq - 1] * pt[qq],) + pt[qq + 1:]
                    total = total.add(_fibre_map(prev, M, merged, M, Mr), _par(qq))
            if not total.is_zero():
                bad.append((r, pt))
    return bad


# --- gauge transport ------------------------------------------------------------------

def random_gauge(C, rng, terms=3, tries=50):
    """C' = g delta g^{-1} for a random degree zero automorphism g = 1 + N, N radical.

    Returns (C', g) with g: C -> C' an isomorphism of twisted complexes; C'
    stays minimal when C is, but its entries no longer respect any bigrading.
    """
    alg = C.alg
    cands = [(b, a, p) for (b, a, p) in ops(C).elements.get(0, ()) if not alg.is_idempotent(p)]
    ident = LaurentHom.identity(C).at_identity()
    for _ in range(tries):
        N = {}
        for _ in range(min(terms, len(cands))):
            b, a, p = rng.choice(cands)
            N.setdefault((b, a), {})[p] = Fraction(rng.choice([-2, -1, 1, 2, 3]))
        if not N:
            return C.copy(), ident
        g = mor_add(ident, N)
        ginv, power = dict(ident), dict(ident)
        for k in range(1, 4):
            power = compose(alg, power, N)
            if not power:
                break
            ginv = mor_add(ginv, power, _par(k))
        if mor_add(compose(alg, g, ginv), ident, -1):
            continue
        delta = compose(alg, compose(alg, g, C.delta), ginv)
        try:
            C2 = TwistedComplex(alg, C.gens, delta, bigraded=False)
        except ComplexError:
            continue
        return C2, g
    return C.copy(), ident


# --- Killing class counterexample -------------------------------------------------------

def killing_counterexample():
    """A perfect module over A_2^1 whose Killing class is nonzero.

    Generators P_1[1], P_2, P_2', P_1 with differential (2|1): P_1[1] -> P_2,
    the loop P_2 -> P_2', -(1|2): P_2' -> P_1 and the identity P_1[1] -> P_1.
    It arises as the cone of a closed degree zero map whose two components
    have internal weights 0 and 1.  Cancelling the identity entry leaves two
    loops running in opposite directions between the copies of P_2, a cycle of
    total weight 2 that no second grading can absorb.
    """
    from .zigzag import zigzag
    A = zigzag(2, 1)
    gens = [(1, 0, 1), (2, 0, 0), (2, 0, 0), (1, 0, 0)]
    delta = {(1, 0): {"(2|1)": 1}, (2, 1): {"(2|1|2)": 1},
             (3, 2): {"(1|2)": -1}, (3, 0): {"e1": 1}}
    return TwistedComplex(A, gens, delta, bigraded=False)


def killing_certificate(C):
    """Coordinates of [ki] in a basis of H^1(end C); any nonzero entry certifies Ki != 0."""
    coords = killing_class_coords(C)
    return {"coords": [qstr(x) for x in coords], "nonzero": any(x != 0 for x in coords)}


# --- weight decomposition -------------------------------------------------------------------

def weight_decomposition(action, lift=None):
    """Weights of the strict representation carried by the generators of a minimal complex.

    The idempotent part Y^0 of rho^1 multiplies correctly on the nose,
    Y^0(g_2 g_1) = Y^0(g_2) Y^0(g_1); its eigenvalue exponents on each
    (vertex, total degree) block are the candidate internal degrees.  When a
    bigraded lift is given, they are compared with its internal degrees up to
    one uniform shift.
    """
    C = action.C if not isinstance(action, LaurentHom) else action.C
    rho1 = action.rho[1] if hasattr(action, "rho") else action
    if not is_minimal(C):
        raise EquivarianceError("weight decomposition needs a minimal complex")
    Y0 = LaurentHom(C, 1, 0, rho1.idempotent_part())
    strict = star(Y0, Y0) == merge(Y0, 1)
    blocks = {}
    for a, g in enumerate(C.gens):
        blocks.setdefault((g[0], C.t(a)), []).append(a)
    weights = {}
    for key, gens in blocks.items():
        pos = {a: i for i, a in enumerate(gens)}
        by_ex = {}
        for (b, a, p, ex), c in Y0.terms.items():
            if a in pos and b in pos:
                m = by_ex.setdefault(ex[0], [[Fraction(0)] * len(gens) for _ in gens])
                m[pos[b]][pos[a]] = c
        ws = []
        for e, m in sorted(by_ex.items()):
            sm = SparseMatrix(len(gens), len(gens))
            for i, row in enumerate(m):
                for j, x in enumerate(row):
                    if x:
                        sm.add(i, j, x)
            ws += [e] * rank(sm)
        weights[key] = sorted(ws)
    complete = all(len(weights[k]) == len(v) for k, v in blocks.items())
    out = {"strict": strict, "complete": complete,
           "weights": {"%d,%d" % k: v for k, v in sorted(weights.items())},
           "multiset": sorted(w for v in weights.values() for w in v)}
    if lift is not None:
        want = {}
        for (k, i, j) in lift.gens:
            want.setdefault((k, i - j), []).append(i)
        shifts = set()
        ok = set(want) == set(weights)
        for key in want:
            a, b = sorted(want[key]), weights.get(key, [])
            if len(a) != len(b):
                ok = False
                continue
            shifts |= {y - x for x, y in zip(a, b)}
        out["matches_lift"] = ok and len(shifts) <= 1
        out["shift"] = shifts.pop() if len(shifts) == 1 else None
    return out


# --- deformation cocycle ------------------------------------------------------------------

def deformation_cocycle(C, probes=(-1, 0, 2)):
    """def_N of the orbit family with its trivial pre-connection, next to gamma^* ki.

    Family elements are Laurent vectors {(k, m): c} meaning c z^k m; the
    pre-connection is z d/dz and mu_N(n, a)(g) = mu(n(g), g(a)).  Both sides
    are computed on the probes z^k m and divided by z^k, which also checks
    C[G]-linearity.  Returns (def, image_of_ki, equal).
    """
    M = realize(C)
    alg = M.alg
    ki = killing_cocycle(M)

    def mu_N(vec, ins):
        w = sum(alg.wt(a) for a in ins)
        out = {}
        for (k, m), c in vec.items():
            for m2, x in M.apply(m, ins).items():
                _iadd(out, (k + w, m2), c * x)
        return out

    def nabla(vec):
        return {(k, m): k * c for (k, m), c in vec.items() if k}

    keys = [(m, ()) for m in M.labels]
    for m in M.labels:
        for b in alg.basis:
            if b.length and b.tgt == M.vertex[m]:
                keys.append((m, (b.label,)))
    dfm, img, linear = {}, {}, True
    for (m, ins) in keys:
        vals = []
        for k in probes:
            n = {(k, m): Fraction(1)}
            out = {}
            for key, x in mu_N(nabla(n), ins).items():
                _iadd(out, key, x)
            for key, x in nabla(mu_N(n, ins)).items():
                _iadd(out, key, -x)
            vals.append({(kk - k, m2): x for (kk, m2), x in out.items()})
        if any(v != vals[0] for v in vals):
            linear = False
        if vals[0]:
            dfm[(m, ins)] = vals[0]
        w = sum(alg.wt(a) for a in ins)
        g = {(w, m2): x for m2, x in ki.apply(m, ins).items()}
        if g:
            img[(m, ins)] = g
    return dfm, img, linear and dfm == img


# --- strictification ---------------------------------------------------------------------

@dataclass
class Strictification:
    C: object
    values: list
    window: list
    cohomology: dict
    module_cohomology: dict
    phi_closed: bool
    splits: bool
    weight_preserved: bool
    dims: dict

    @property
    def matches(self):
        lo, hi = self.window
        return all(self.cohomology.get(t, 0) == self.module_cohomology.get(t, 0)
                   for t in range(lo, hi + 1))


def _naive_d(action, M, elem, deg_of):
    """mu^1 of M^naive on a basis element (ex, m) with len(ex) = level + 1."""
    ex, m = elem
    p = len(ex)
    out = {}
    for m2, c in M.apply(m, ()).items():
        _iadd(out, (ex, m2), c)
    for k, Y in action.rho.items():
        if not Y.terms:
            continue
        for (ex2, m2), c in _apply_rho(Y, M, m).items():
            _iadd(out, (ex + ex2, m2), c)
    sb = deg_of(elem)
    for qq in range(1, p + 1):
        _iadd(out, (_merge_ex(ex, qq), m), _par(qq + sb))
    return out


def strictify(action, top=None, budget=40000):
    """Truncated M^naive with its comparison map, certified on a degree window.

    Elements are (ex, m) with len(ex) = r + 1 in degree |m| + r, exponents
    drawn from the value set S (all rho exponents plus module path weights),
    which spans a direct summand.  In degrees <= min|M| + L no level above L
    can occur, so the truncation at level L is exact there and H^t is
    certified for t < min|M| + L.  The window grows until the basis budget.
    """
    C = action.C
    M = realize(C)
    alg = C.alg
    wts = sorted({alg.wt(m[1]) for m in M.labels})
    vals = set()
    for Y in action.rho.values():
        for (b, a, p, ex) in Y.terms:
            for e in ex:
                for w in wts:
                    vals.add(e + w)
    vals = sorted(vals)
    degs = [M.deg[m] for m in M.labels]
    lo = min(degs)
    hi_M = max(degs)
    by_deg = {}
    for m in M.labels:
        by_deg.setdefault(M.deg[m], []).append(m)

    def deg_of(elem):
        return M.deg[elem[1]] + len(elem[0]) - 1

    def basis_in(t):
        out = []
        for r in range(0, t - lo + 1):
            for m in by_deg.get(t - r, ()):
                for ex in itertools.product(vals, repeat=r + 1):
                    out.append((ex, m))
        return out

    mod_dims = {t: d for t, d in _module_dims(M).items() if d}
    if top is None:
        top = lo
        total = len(basis_in(lo)) + len(basis_in(lo + 1))
        while top < hi_M + 1:
            nxt = len(basis_in(top + 2))
            if total + nxt > budget:
                break
            total += nxt
            top += 1
    if top < lo:
        raise EquivarianceError("window too small: no certified degree (need budget for degrees "
                                "%d..%d)" % (lo, lo + 1))
    bases = {t: basis_in(t) for t in range(lo - 1, top + 2)}
    # split by the weight of the translation action (exponent of g_1)
    coh = {}
    weight_ok = True
    d_cache = {}
    for t in range(lo, top + 1):
        dim_t = {}
        for e in bases[t]:
            dim_t[e[0][0]] = dim_t.get(e[0][0], 0) + 1
        for s in (t - 1, t):
            if s in d_cache:
                continue
            tgt = {}
            for e in bases[s + 1]:
                tgt.setdefault(e[0][0], {})[e] = len(tgt.get(e[0][0], {}))
            mats = {}
            src_count = {}
            for e in bases.get(s, ()):
                w = e[0][0]
                col = src_count.get(w, 0)
                src_count[w] = col + 1
                img = _naive_d(action, M, e, deg_of)
                mat = mats.setdefault(w, [])
                colv = {}
                for key, c in img.items():
                    kw = key[0][0]
                    if kw != w:
                        weight_ok = False
                        continue
                    colv[tgt[w][key]] = c
                mat.append(colv)
            rk = {}
            for w, cols in mats.items():
                n_rows = len(tgt.get(w, {}))
                sm = SparseMatrix(n_rows, len(cols))
                for j, colv in enumerate(cols):
                    for i, c in colv.items():
                        sm.add(i, j, c)
                rk[w] = rank(sm)
            d_cache[s] = rk
        total = 0
        for w, n in dim_t.items():
            total += n - d_cache[t].get(w, 0) - d_cache[t - 1].get(w, 0)
        coh[t] = total
    phi_closed, splits = _check_phi(action, M, deg_of, top)
    return Strictification(C, vals, [lo, top], {t: d for t, d in coh.items() if d},
                           {t: d for t, d in mod_dims.items() if lo <= t <= top},
                           phi_closed, splits, weight_ok,
                           {t: len(bases[t]) for t in range(lo, top + 1)})


def _module_dims(M):
    from .modules_core import module_cohomology_dims
    return module_cohomology_dims(M)


def phi_map(action, M, m):
    """phi^1(m) = sum_r rho^{r,1}(.., m), placed at level r - 1."""
    out = {}
    for r, Y in action.rho.items():
        if Y.terms:
            for key, c in _apply_rho(Y, M, m).items():
                _iadd(out, key, c)
    return out


def _check_phi(action, M, deg_of, top):
    """phi is a chain map M -> M^naive (up to level cut) and beta -> beta^1(e) inverts it."""
    closed = True
    splits = True
    limit = top + 1
    for m in M.labels:
        if M.deg[m] > limit:
            continue
        lhs = {}
        for e, c in phi_map(action, M, m).items():
            for key, x in _naive_d(action, M, e, deg_of).items():
                _iadd(lhs, key, c * x)
        for m2, c in M.apply(m, ()).items():
            for key, x in phi_map(action, M, m2).items():
                _iadd(lhs, key, c * x)
        if lhs:
            closed = False
        back = {}
        for (ex, m2), c in phi_map(action, M, m).items():
            if len(ex) == 1:
                _iadd(back, m2, c)
        if back != {m: _par(M.deg[m])}:
            splits = False
    return closed, splits


# --- end-to-end pipeline ---------------------------------------------------------------------

def _mor_json(f):
    return [[b, a, p, qstr(c)] for (b, a), v in sorted(f.items()) for p, c in sorted(v.items())]


def run_pipeline(C, lift=None, ref=None, samples=20, seed=0, strictify_budget=40000,
                 with_strictification=True):
    """Killing class -> weak action -> rho^2 -> homotopy action -> weights (-> strictification).

    C is a minimal collapsed complex; lift is an optional bigraded complex whose
    collapse is C, used to compare the weights.  Returns (report, action).
    """
    report = {"module": ref, "algebra": {"m": C.alg.m, "n": C.alg.n},
              "generators": len(C.gens), "width": C.width()}
    alpha = solve_killing(C)
    report["ki_vanishes"] = alpha is not None
    if alpha is None:
        report["ki_certificate"] = killing_certificate(C)
        report["ok"] = False
        return report, None
    report["alpha"] = _mor_json(alpha)
    report["killing_relation"] = killing_relation(C, alpha)
    weak = weak_action_solve(C, alpha)
    report["residue"] = {"eigenvalues": [qstr(x) for x in weak.eigenvalues], "c": qstr(weak.c)}
    report["unit_exact"] = weak.unit_exact
    rho2 = verify_weak(weak)
    report["weak_verified"] = rho2 is not None
    if rho2 is None:
        report["ok"] = False
        return report, None
    act = homotopy_extend(weak.rho1, rho2)
    act.weak = weak
    report["R"] = act.R
    report["R_effective"] = act.effective_level()
    report["R_bound"] = C.width() + 2
    report["rho_support"] = {str(r): Y.support_window() for r, Y in sorted(act.rho.items())}
    report["rho_terms"] = {str(r): len(Y.terms) for r, Y in sorted(act.rho.items())}
    report["eta_corrections"] = sum(s.eta_terms for s in act.steps)
    lit = literal_check(act)
    smp = sampled_check(act, samples, seed)
    report["cocycle_literal_failures"] = len(lit)
    report["cocycle_sampled_failures"] = len(smp)
    wd = weight_decomposition(act, lift)
    report["weights"] = wd["multiset"]
    report["weights_by_block"] = wd["weights"]
    report["weights_strict"] = wd["strict"]
    if lift is not None:
        report["weights_match_lift"] = wd["matches_lift"]
        report["weight_shift"] = wd["shift"]
    report["deformation_matches_ki"] = deformation_cocycle(C)[2]
    ok = (not lit and not smp and wd["strict"] and wd["complete"]
          and report["killing_relation"]["omega_relation"]
          and act.R <= C.width() + 2 and report["deformation_matches_ki"]
          and report["killing_relation"]["closed"] and report["killing_relation"]["alpha_bounds"])
    if lift is not None:
        ok = ok and wd["matches_lift"]
    if with_strictification:
        st = strictify(act, budget=strictify_budget)
        report["certified_window"] = st.window
        report["strict_cohomology"] = {str(t): d for t, d in sorted(st.cohomology.items())}
        report["module_cohomology"] = {str(t): d for t, d in sorted(st.module_cohomology.items())}
        report["strictification_ok"] = (st.matches and st.phi_closed and st.splits
                                         and st.weight_preserved)
        ok = ok and report["strictification_ok"]
    report["ok"] = bool(ok)
    return report, act


def pipeline_for_word(word, j, m=2, n=2, **kw):
    from .zigzag import zigzag
    A = zigzag(m, n)
    lift = apply_braid(word, projective(A, j)) if word.strip() else projective(A, j)
    return run_pipeline(lift.collapse(), lift, ref="%s P_%d over A_%d^%d" % (word or "id", j, m, n),
                        **kw)
