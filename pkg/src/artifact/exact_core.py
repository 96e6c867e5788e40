"""Exact rational linear algebra: sparse matrices, elimination, finite complexes."""

from fractions import Fraction
import random


class ExactnessError(ValueError):
    pass


class ShapeError(ValueError):
    pass


def q(x):
    """Coerce ints, Fractions and "p/q" strings to Fraction. Floats are refused."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise ExactnessError("boolean is not a coefficient")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise ExactnessError("inexact or unsupported coefficient %r" % (x,))


def qstr(x):
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return "%d/%d" % (x.numerator, x.denominator)


def rng(seed):
    return random.Random(seed)


def rand_q(r, lo=-3, hi=3, allow_zero=True):
    while True:
        v = Fraction(r.randint(lo, hi))
        if allow_zero or v:
            return v


# --- sparse vectors (dict index -> Fraction) -------------------------------

def vadd(u, v, c=1):
    """Return u + c*v as a new dict."""
    out = dict(u)
    if not c:
        return out
    for k, x in v.items():
        y = out.get(k, 0) + c * x
        if y:
            out[k] = y
        else:
            out.pop(k, None)
    return out


def viadd(u, v, c=1):
    """In-place u += c*v."""
    if not c:
        return u
    for k, x in v.items():
        y = u.get(k, 0) + c * x
        if y:
            u[k] = y
        else:
            u.pop(k, None)
    return u


def vscale(v, c):
    if not c:
        return {}
    return {k: c * x for k, x in v.items()}


class SparseMatrix:
    """Row-major dict-of-dicts matrix over Q."""

    def __init__(self, nrows, ncols, rows=None):
        if nrows < 0 or ncols < 0:
            raise ShapeError("negative shape")
        self.nrows = nrows
        self.ncols = ncols
        self.rows = {}
        if rows:
            for i, r in rows.items():
                r = {j: q(x) for j, x in r.items() if x}
                if r:
                    self.rows[i] = r

    @classmethod
    def from_entries(cls, nrows, ncols, entries):
        m = cls(nrows, ncols)
        for (i, j), x in entries:
            m.add(i, j, x)
        return m

    @classmethod
    def from_dense(cls, data):
        nrows = len(data)
        ncols = len(data[0]) if nrows else 0
        m = cls(nrows, ncols)
        for i, row in enumerate(data):
            if len(row) != ncols:
                raise ShapeError("ragged dense matrix")
            for j, x in enumerate(row):
                if x:
                    m.add(i, j, q(x))
        return m

    @classmethod
    def identity(cls, n):
        return cls(n, n, {i: {i: Fraction(1)} for i in range(n)})

    def add(self, i, j, x):
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise ShapeError("index (%d,%d) out of range %dx%d" % (i, j, self.nrows, self.ncols))
        if not x:
            return
        r = self.rows.setdefault(i, {})
        y = r.get(j, 0) + x
        if y:
            r[j] = y
        else:
            del r[j]
            if not r:
                del self.rows[i]

    def get(self, i, j):
        return self.rows.get(i, {}).get(j, Fraction(0))

    def nnz(self):
        return sum(len(r) for r in self.rows.values())

    def is_zero(self):
        return not self.rows

    def to_dense(self):
        out = [[Fraction(0)] * self.ncols for _ in range(self.nrows)]
        for i, r in self.rows.items():
            for j, x in r.items():
                out[i][j] = x
        return out

    def transpose(self):
        t = SparseMatrix(self.ncols, self.nrows)
        for i, r in self.rows.items():
            for j, x in r.items():
                t.rows.setdefault(j, {})[i] = x
        return t

    def matvec(self, v):
        out = {}
        for i, r in self.rows.items():
            s = 0
            for j, x in r.items():
                y = v.get(j)
                if y:
                    s += x * y
            if s:
                out[i] = s
        return out

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ShapeError("shape mismatch %dx%d @ %dx%d"
                             % (self.nrows, self.ncols, other.nrows, other.ncols))
        out = SparseMatrix(self.nrows, other.ncols)
        for i, r in self.rows.items():
            acc = {}
            for k, x in r.items():
                orow = other.rows.get(k)
                if orow:
                    viadd(acc, orow, x)
            if acc:
                out.rows[i] = acc
        return out

    def __add__(self, other):
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ShapeError("shape mismatch in sum")
        out = SparseMatrix(self.nrows, self.ncols)
        out.rows = {i: dict(r) for i, r in self.rows.items()}
        for i, r in other.rows.items():
            acc = viadd(out.rows.get(i, {}), r)
            if acc:
                out.rows[i] = acc
            else:
                out.rows.pop(i, None)
        return out

    def scale(self, c):
        out = SparseMatrix(self.nrows, self.ncols)
        if c:
            out.rows = {i: vscale(r, c) for i, r in self.rows.items()}
        return out

    def __eq__(self, other):
        return (isinstance(other, SparseMatrix) and self.nrows == other.nrows
                and self.ncols == other.ncols and self.rows == other.rows)

    def __repr__(self):
        return "SparseMatrix(%d, %d, nnz=%d)" % (self.nrows, self.ncols, self.nnz())

    def column_vectors(self):
        cols = {}
        for i, r in self.rows.items():
            for j, x in r.items():
                cols.setdefault(j, {})[i] = x
        return [cols.get(j, {}) for j in range(self.ncols)]


# --- elimination ------------------------------------------------------------

class Echelon:
    """Incremental reduced row echelon form of a growing set of row vectors.

    Each stored row remembers which combination of inserted vectors it is,
    so membership tests also return coordinates.
    """

    def __init__(self, track=False):
        self.pivots = {}     # pivot column -> (row, combo)
        self.colidx = {}     # column -> set of pivot columns whose row touches it
        self.track = track
        self.count = 0

    def _reduce(self, v, combo):
        v = dict(v)
        for c in [c for c in v if c in self.pivots]:
            x = v.get(c)
            if not x:
                continue
            row, rc = self.pivots[c]
            viadd(v, row, -x)
            if self.track:
                viadd(combo, rc, -x)
        return v, combo

    def reduce(self, v):
        v, combo = self._reduce(v, {})
        return v, combo

    def insert(self, v, tag=None):
        """Insert v; return True if it enlarged the span."""
        idx = self.count if tag is None else tag
        self.count += 1
        combo = {idx: Fraction(1)} if self.track else {}
        v, combo = self._reduce(v, combo)
        if not v:
            return False
        # pick a pivot column touching few existing rows
        pc = min(v, key=lambda c: (len(self.colidx.get(c, ())), c))
        inv = 1 / v[pc]
        v = vscale(v, inv)
        combo = vscale(combo, inv) if self.track else combo
        for other in list(self.colidx.get(pc, ())):
            row, rc = self.pivots[other]
            x = row.get(pc)
            if not x:
                continue
            for c in row:
                self.colidx[c].discard(other)
            row = vadd(row, v, -x)
            rc = vadd(rc, combo, -x) if self.track else rc
            self.pivots[other] = (row, rc)
            for c in row:
                self.colidx.setdefault(c, set()).add(other)
        self.pivots[pc] = (v, combo)
        for c in v:
            self.colidx.setdefault(c, set()).add(pc)
        return True

    def rank(self):
        return len(self.pivots)

    def coordinates(self, v):
        """Coefficients expressing v in the inserted vectors, or None."""
        r, combo = self._reduce(v, {})
        if r:
            return None
        return vscale(combo, -1)

    def contains(self, v):
        r, _ = self._reduce(v, {})
        return not r


def rank(m):
    e = Echelon()
    for r in m.rows.values():
        e.insert(r)
    return e.rank()


def kernel(m):
    """Basis of {x : m x = 0} as sparse dicts."""
    e = Echelon()
    for r in m.rows.values():
        e.insert(r)
    piv = e.pivots
    free = [j for j in range(m.ncols) if j not in piv]
    # rows are in RREF: x_p = -sum_f row_p[f] x_f
    by_free = {}
    for p, (row, _) in piv.items():
        for c, x in row.items():
            if c != p:
                by_free.setdefault(c, {})[p] = -x
    out = []
    for f in free:
        v = {f: Fraction(1)}
        v.update(by_free.get(f, {}))
        out.append(v)
    return out


def solve_linear(m, b, with_kernel=True):
    """One solution x of m x = b plus a kernel basis; raises if inconsistent.

    b is a sparse dict {row: value} or a dense sequence.
    """
    if isinstance(b, (list, tuple)):
        b = {i: q(x) for i, x in enumerate(b) if x}
    n = m.ncols
    e = Echelon()
    for i in range(m.nrows):
        r = dict(m.rows.get(i, {}))
        if b.get(i):
            r[n] = b[i]
        if r:
            _insert_avoiding(e, r, n)
    x = {}
    for p, (row, _) in e.pivots.items():
        if p == n:
            raise ExactnessError("inconsistent linear system")
        if row.get(n):
            x[p] = row[n]
    return x, (kernel(m) if with_kernel else None)


def _insert_avoiding(e, v, avoid):
    """Insert into an Echelon preferring pivots outside column `avoid`."""
    e.count += 1
    v, _ = e._reduce(v, {})
    if not v:
        return False
    cands = [c for c in v if c != avoid] or [avoid]
    pc = min(cands, key=lambda c: (len(e.colidx.get(c, ())), c))
    inv = 1 / v[pc]
    v = vscale(v, inv)
    for other in list(e.colidx.get(pc, ())):
        row, rc = e.pivots[other]
        x = row.get(pc)
        if not x:
            continue
        for c in row:
            e.colidx[c].discard(other)
        row = vadd(row, v, -x)
        e.pivots[other] = (row, rc)
        for c in row:
            e.colidx.setdefault(c, set()).add(other)
    e.pivots[pc] = (v, {})
    for c in v:
        e.colidx.setdefault(c, set()).add(pc)
    return True


def solve(m, b):
    """Solution of m x = b or None when inconsistent."""
    try:
        return solve_linear(m, b, with_kernel=False)[0]
    except ExactnessError:
        return None


def determinant(dense):
    n = len(dense)
    a = [[q(x) for x in row] for row in dense]
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            if a[r][c]:
                f = a[r][c] / a[c][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return det


# --- finite complexes ---------------------------------------------------------

class FiniteComplex:
    """Cochain complex with finite-dimensional pieces; d raises degree by one.

    `basis[k]` lists labels of C^k; `d[k]` is a SparseMatrix C^k -> C^{k+1}.
    """

    def __init__(self, basis, d=None):
        self.basis = {k: list(v) for k, v in basis.items() if v}
        self.d = {}
        self.index = {k: {lab: i for i, lab in enumerate(v)} for k, v in self.basis.items()}
        for k, m in (d or {}).items():
            self.set_d(k, m)

    def dim(self, k):
        return len(self.basis.get(k, ()))

    def degrees(self):
        return sorted(self.basis)

    def set_d(self, k, m):
        if m.ncols != self.dim(k) or m.nrows != self.dim(k + 1):
            raise ShapeError("differential in degree %d has shape %dx%d, expected %dx%d"
                             % (k, m.nrows, m.ncols, self.dim(k + 1), self.dim(k)))
        self.d[k] = m

    def diff(self, k):
        m = self.d.get(k)
        if m is None:
            return SparseMatrix(self.dim(k + 1), self.dim(k))
        return m

    def check_d_squared(self):
        for k in self.degrees():
            if not (self.diff(k + 1) @ self.diff(k)).is_zero():
                return False
        return True

    def euler_characteristic(self):
        return sum((-1) ** (k % 2) * self.dim(k) for k in self.degrees())

    def cohomology(self, degrees=None):
        return Cohomology(self, degrees)


class Cohomology:
    """Cohomology with explicit representatives and class coordinates."""

    def __init__(self, cx, degrees=None):
        self.cx = cx
        degs = cx.degrees() if degrees is None else list(degrees)
        self.reps = {}
        self._span = {}
        self._nb = {}
        for k in degs:
            z = kernel(cx.diff(k))
            e = Echelon(track=True)
            dprev = cx.diff(k - 1)
            nb = 0
            for v in dprev.column_vectors():
                if v and e.insert(v, tag=("b", nb)):
                    pass
                nb += 1
            reps = []
            for v in z:
                if e.insert(v, tag=("r", len(reps))):
                    reps.append(v)
                else:
                    continue
            # re-tag: representatives are numbered by their order of acceptance
            self.reps[k] = reps
            self._span[k] = e
            self._nb[k] = nb

    def dim(self, k):
        return len(self.reps.get(k, ()))

    def dims(self):
        return {k: len(v) for k, v in self.reps.items() if v}

    def is_cocycle(self, k, v):
        return not self.cx.diff(k).matvec(v)

    def coordinates(self, k, v):
        """Coordinates of the class of cocycle v in the representative basis."""
        if not self.is_cocycle(k, v):
            raise ExactnessError("not a cocycle")
        co = self._span[k].coordinates(v)
        if co is None:
            raise ExactnessError("cocycle outside computed span")
        out = [Fraction(0)] * len(self.reps[k])
        # representatives were tagged by insertion order among accepted ones
        for tag, x in co.items():
            if tag[0] == "r":
                out[tag[1]] += x
        return out

    def is_coboundary(self, k, v):
        return all(x == 0 for x in self.coordinates(k, v))

    def preimage(self, k, v):
        """Some w with d w = v, or None."""
        return solve(self.cx.diff(k - 1), v)


def solve_columns(cols, rhs):
    """Solve sum_k x_k cols[k] = rhs for dict-valued columns keyed by anything.

    Returns {key: value} (free variables set to zero) or None when inconsistent.
    """
    keys = list(cols)
    rowidx = {}
    for k in keys:
        for r in cols[k]:
            rowidx.setdefault(r, len(rowidx))
    for r in rhs:
        rowidx.setdefault(r, len(rowidx))
    m = SparseMatrix(len(rowidx), len(keys))
    for j, k in enumerate(keys):
        for r, x in cols[k].items():
            m.add(rowidx[r], j, x)
    b = {rowidx[r]: x for r, x in rhs.items() if x}
    x = solve(m, b)
    if x is None:
        return None
    return {keys[j]: v for j, v in x.items() if v}
