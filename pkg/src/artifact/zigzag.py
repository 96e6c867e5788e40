"""Graded zigzag algebras A_m^n over Q.

Paths are written right to left: (k+1|k) goes from vertex k to vertex k+1 and
sits in degree 0, (k|k+1) goes back and sits in degree n.  The loop at k is
l_k = (k|k+1|k) = (k|k-1|k), stored under the first form when k < m.
For m = 1 the algebra is Q[t]/t^2 with |t| = n.  Weights agree with degrees.
"""

from dataclasses import dataclass
import itertools
import json

from .exact_core import q, ExactnessError


class AlgebraError(ValueError):
    pass


@dataclass(frozen=True)
class Basis:
    label: str
    src: int
    tgt: int
    deg: int
    length: int


def idem(k):
    return "e%d" % k


def arrow(src, tgt):
    return "(%d|%d)" % (tgt, src)


def loop(k, m):
    if k < m:
        return "(%d|%d|%d)" % (k, k + 1, k)
    return "(%d|%d|%d)" % (k, k - 1, k)


class ZigzagAlgebra:
    def __init__(self, m, n, basis, products):
        self.m = m
        self.n = n
        self.basis = list(basis)
        self.by_label = {b.label: b for b in self.basis}
        if len(self.by_label) != len(self.basis):
            raise AlgebraError("duplicate basis labels")
        self.products = dict(products)   # (a, b) -> label of a*b (a after b)
        self._hom = {}
        for b in self.basis:
            self._hom.setdefault((b.src, b.tgt), []).append(b.label)

    # basic data
    def __repr__(self):
        return "ZigzagAlgebra(m=%d, n=%d)" % (self.m, self.n)

    def dim(self):
        return len(self.basis)

    def vertices(self):
        return range(1, self.m + 1)

    def deg(self, label):
        return self.by_label[label].deg

    def wt(self, label):
        return self.by_label[label].deg

    def src(self, label):
        return self.by_label[label].src

    def tgt(self, label):
        return self.by_label[label].tgt

    def paths(self, src, tgt):
        """Basis of e_tgt A e_src."""
        return self._hom.get((src, tgt), [])

    def e(self, k):
        return idem(k)

    def loop(self, k):
        return loop(k, self.m) if self.m > 1 else "t"

    def is_idempotent(self, label):
        return self.by_label[label].length == 0

    def mul_basis(self, a, b):
        """a*b for basis labels (a after b); None when zero."""
        return self.products.get((a, b))

    def mul(self, x, y):
        out = {}
        for a, ca in x.items():
            for b, cb in y.items():
                c = self.products.get((a, b))
                if c is not None:
                    v = out.get(c, 0) + ca * cb
                    if v:
                        out[c] = v
                    else:
                        out.pop(c, None)
        return out

    def validate(self):
        """Exact check of associativity, grading and the defining relations."""
        errs = []
        labels = [b.label for b in self.basis]
        for a, b in itertools.product(labels, labels):
            c = self.products.get((a, b))
            if c is not None:
                A, B, C = self.by_label[a], self.by_label[b], self.by_label[c]
                if A.src != B.tgt:
                    errs.append("product %s*%s of non-composable paths" % (a, b))
                if C.deg != A.deg + B.deg:
                    errs.append("product %s*%s breaks the grading" % (a, b))
                if (C.src, C.tgt) != (B.src, A.tgt):
                    errs.append("product %s*%s has wrong endpoints" % (a, b))
        for a, b, c in itertools.product(labels, labels, labels):
            l = self.mul(self.mul({a: 1}, {b: 1}), {c: 1})
            r = self.mul({a: 1}, self.mul({b: 1}, {c: 1}))
            if l != r:
                errs.append("associativity fails on %s,%s,%s" % (a, b, c))
        for k in self.vertices():
            e = idem(k)
            for b in self.basis:
                want = {b.label: 1} if b.tgt == k else {}
                if self.mul({e: 1}, {b.label: 1}) != want:
                    errs.append("e%d is not a left unit on %s" % (k, b.label))
                want = {b.label: 1} if b.src == k else {}
                if self.mul({b.label: 1}, {e: 1}) != want:
                    errs.append("e%d is not a right unit on %s" % (k, b.label))
        m = self.m
        want_dim = 2 if m == 1 else 4 * m - 2
        if self.dim() != want_dim:
            errs.append("dimension %d, expected %d" % (self.dim(), want_dim))
        if m >= 3:
            for k in range(1, m - 1):
                if self.mul({arrow(k + 1, k + 2): 1}, {arrow(k, k + 1): 1}):
                    errs.append("(%d|%d|%d) is not zero" % (k + 2, k + 1, k))
                if self.mul({arrow(k + 1, k): 1}, {arrow(k + 2, k + 1): 1}):
                    errs.append("(%d|%d|%d) is not zero" % (k, k + 1, k + 2))
        if m >= 3:
            for k in range(2, m):
                up = self.mul({arrow(k + 1, k): 1}, {arrow(k, k + 1): 1})
                down = self.mul({arrow(k - 1, k): 1}, {arrow(k, k - 1): 1})
                if up != down or not up:
                    errs.append("loop relation fails at vertex %d" % k)
        return errs

    def grade_scaled(self, n_new):
        return zigzag(self.m, n_new)

    # serialization
    def to_json(self):
        prods = []
        for (a, b), c in sorted(self.products.items()):
            prods.append({"left": a, "right": b, "output": c, "coeff": "1"})
        return {
            "m": self.m,
            "n": self.n,
            "basis": [{"label": b.label, "src": b.src, "tgt": b.tgt, "deg": b.deg}
                      for b in self.basis],
            "products": prods,
        }

    @classmethod
    def from_json(cls, data):
        try:
            m, n = int(data["m"]), int(data["n"])
            basis = []
            for b in data["basis"]:
                lab = str(b["label"])
                length = 0 if lab.startswith("e") else (lab.count("|") if lab.startswith("(") else 2)
                basis.append(Basis(lab, int(b["src"]), int(b["tgt"]), int(b["deg"]), length))
            prods = {}
            for p in data["products"]:
                if q(p.get("coeff", "1")) != 1:
                    raise AlgebraError("zigzag products have unit coefficients")
                prods[(p["left"], p["right"])] = p["output"]
        except (KeyError, TypeError, ValueError, ExactnessError) as exc:
            raise AlgebraError("malformed algebra JSON: %s" % exc)
        alg = cls(m, n, basis, prods)
        ref = zigzag(m, n)
        if alg.to_json() != ref.to_json():
            raise AlgebraError("algebra JSON does not describe the zigzag algebra A_%d^%d" % (m, n))
        return alg


_CACHE = {}


def zigzag(m, n):
    """Build A_m^n; raises AlgebraError for m < 1 or n < 1."""
    if not isinstance(m, int) or not isinstance(n, int) or m < 1 or n < 1:
        raise AlgebraError("need integers m >= 1, n >= 1 (got m=%r, n=%r)" % (m, n))
    key = (m, n)
    if key in _CACHE:
        return _CACHE[key]
    basis = [Basis(idem(k), k, k, 0, 0) for k in range(1, m + 1)]
    prods = {}
    if m == 1:
        basis.append(Basis("t", 1, 1, n, 2))
        prods[("e1", "e1")] = "e1"
        prods[("e1", "t")] = "t"
        prods[("t", "e1")] = "t"
    else:
        for k in range(1, m):
            basis.append(Basis(arrow(k, k + 1), k, k + 1, 0, 1))
            basis.append(Basis(arrow(k + 1, k), k + 1, k, n, 1))
        for k in range(1, m + 1):
            basis.append(Basis(loop(k, m), k, k, n, 2))
        for b in basis:
            prods[(idem(b.tgt), b.label)] = b.label
            prods[(b.label, idem(b.src))] = b.label
        for k in range(1, m):
            # (k|k+1)(k+1|k) = l_k and (k+1|k)(k|k+1) = l_{k+1}
            prods[(arrow(k + 1, k), arrow(k, k + 1))] = loop(k, m)
            prods[(arrow(k, k + 1), arrow(k + 1, k))] = loop(k + 1, m)
    alg = ZigzagAlgebra(m, n, basis, prods)
    _CACHE[key] = alg
    return alg


def save_algebra(alg, path):
    from .serialize import dump_json
    dump_json(alg.to_json(), path)


def load_algebra(path):
    with open(path) as fh:
        return ZigzagAlgebra.from_json(json.load(fh))
