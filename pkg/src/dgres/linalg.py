"""Exact sparse linear algebra over the rationals.

Elimination is fraction-free: each row is scaled to coprime integers and
rows are combined with integer multipliers, dividing out the content after
every step.  Pivots are chosen by scanning columns left to right and taking
the first remaining row with a nonzero entry, so results are reproducible.
"""

from fractions import Fraction
from math import gcd, lcm

from .errors import DomainMismatch


def _int_row(row):
    """Scale a {col: Fraction} row to primitive integers."""
    den = 1
    for v in row.values():
        den = lcm(den, v.denominator) if isinstance(v, Fraction) else den
    out = {c: int(v * den) for c, v in row.items() if v}
    return _primitive(out)


def _primitive(row):
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {c: v // g for c, v in row.items()}
    return row


def row_reduce(rows, ncols=None):
    """Gauss-Jordan elimination of sparse rows.

    Returns a list of ``(pivot_col, row)`` in increasing pivot order, where
    each row is a primitive integer dict and no other returned row has a
    nonzero entry in its pivot column.
    """
    work = [r for r in (_int_row(r) for r in rows) if r]
    pivots = {}  # col -> row
    order = []
    remaining = work
    while remaining:
        col = min(min(r) for r in remaining)
        idx = next(i for i, r in enumerate(remaining) if col in r)
        prow = remaining.pop(idx)
        p = prow[col]
        nxt = []
        for r in remaining:
            a = r.get(col)
            if a:
                r = _combine(r, p, prow, a)
            if r:
                nxt.append(r)
        remaining = nxt
        for c in order:
            r = pivots[c]
            a = r.get(col)
            if a:
                pivots[c] = _combine(r, p, prow, a)
        pivots[col] = prow
        order.append(col)
    return [(c, pivots[c]) for c in sorted(order)]


def _combine(r, p, prow, a):
    """p*r - a*prow, made primitive."""
    g = gcd(p, a)
    mp, ma = p // g, a // g
    out = {c: v * mp for c, v in r.items()}
    for c, v in prow.items():
        w = out.get(c, 0) - ma * v
        if w:
            out[c] = w
        else:
            out.pop(c, None)
    return _primitive(out)


class Matrix:
    """Sparse rational matrix stored by rows."""

    def __init__(self, nrows, ncols, rows=None):
        self.nrows = nrows
        self.ncols = ncols
        self.rows = rows if rows is not None else {}

    @classmethod
    def from_dense(cls, data, ncols=None):
        data = [list(r) for r in data]
        nrows = len(data)
        if ncols is None:
            ncols = len(data[0]) if data else 0
        rows = {}
        for i, r in enumerate(data):
            d = {j: Fraction(v) for j, v in enumerate(r) if v}
            if d:
                rows[i] = d
        return cls(nrows, ncols, rows)

    @classmethod
    def from_columns(cls, nrows, columns):
        rows = {}
        for j, col in enumerate(columns):
            for i, v in col.items():
                if v:
                    rows.setdefault(i, {})[j] = Fraction(v)
        return cls(nrows, len(columns), rows)

    def to_dense(self):
        out = [[Fraction(0)] * self.ncols for _ in range(self.nrows)]
        for i, r in self.rows.items():
            for j, v in r.items():
                out[i][j] = v
        return out

    def columns(self):
        cols = [dict() for _ in range(self.ncols)]
        for i, r in self.rows.items():
            for j, v in r.items():
                cols[j][i] = v
        return cols

    def transpose(self):
        rows = {}
        for i, r in self.rows.items():
            for j, v in r.items():
                rows.setdefault(j, {})[i] = v
        return Matrix(self.ncols, self.nrows, rows)

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise DomainMismatch(f"shape mismatch {self.shape} @ {other.shape}")
        rows = {}
        for i, r in self.rows.items():
            acc = {}
            for k, v in r.items():
                orow = other.rows.get(k)
                if orow:
                    for j, w in orow.items():
                        acc[j] = acc.get(j, 0) + v * w
            acc = {j: v for j, v in acc.items() if v}
            if acc:
                rows[i] = acc
        return Matrix(self.nrows, other.ncols, rows)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def is_zero(self):
        return not any(self.rows.values())

    def apply(self, vec):
        """Multiply by a sparse column vector {index: value}."""
        out = {}
        for i, r in self.rows.items():
            s = sum((v * vec[j] for j, v in r.items() if j in vec), Fraction(0))
            if s:
                out[i] = s
        return out

    def rank(self):
        return len(row_reduce(self.rows.values()))

    def kernel(self):
        """Basis of the null space as sparse vectors."""
        red = row_reduce(self.rows.values())
        pivcols = {c for c, _ in red}
        basis = []
        for f in range(self.ncols):
            if f in pivcols:
                continue
            v = {f: Fraction(1)}
            for c, r in red:
                a = r.get(f)
                if a:
                    v[c] = Fraction(-a, r[c])
            basis.append(v)
        return basis

    def column_space(self):
        """Indices of a maximal independent set of columns."""
        return [c for c, _ in row_reduce(self.rows.values())]

    def solve(self, rhs):
        """Solve self * x = rhs; returns a ``Solution``."""
        aug = []
        n = self.ncols
        for i in range(self.nrows):
            r = dict(self.rows.get(i, {}))
            b = rhs.get(i)
            if b:
                r[n] = Fraction(b)
            aug.append(r)
        for i in rhs:
            if i >= self.nrows and rhs[i]:
                raise DomainMismatch("right-hand side longer than matrix")
        red = row_reduce(aug)
        for c, r in red:
            if c == n:
                return Solution(None, self._certificate(rhs))
        x = {}
        for c, r in red:
            b = r.get(n)
            if b:
                x[c] = Fraction(b, r[c])
        return Solution(x, None)

    def _certificate(self, rhs):
        for y in self.transpose().kernel():
            if sum((v * Fraction(rhs.get(i, 0)) for i, v in y.items()), Fraction(0)):
                return y
        raise AssertionError("inconsistent system without a certificate")


class Solution:
    """Result of a linear solve: either ``vector`` or an inconsistency ``certificate``.

    A certificate is a vector y with y.A = 0 and y.b != 0.
    """

    def __init__(self, vector, certificate):
        self.vector = vector
        self.certificate = certificate

    @property
    def ok(self):
        return self.vector is not None


class Echelon:
    """Incrementally maintained echelon basis of a span of sparse vectors."""

    def __init__(self, vectors=()):
        self.piv = {}  # pivot col -> primitive integer row whose min col is the pivot
        for v in vectors:
            self.add(v)

    def reduce(self, v):
        r = _int_row(v)
        while r:
            c = min(r)
            prow = self.piv.get(c)
            if prow is None:
                return r
            r = _combine(r, prow[c], prow, r[c])
        return r

    def add(self, v):
        r = self.reduce(v)
        if r:
            self.piv[min(r)] = r
            return True
        return False

    def __len__(self):
        return len(self.piv)


def independent_subset(vectors, start=()):
    """Indices into ``vectors`` that extend the span of ``start`` greedily."""
    ech = Echelon(start)
    return [k for k, v in enumerate(vectors) if ech.add(v)]


class FiniteComplex:
    """Cochain complex of finite-dimensional rational vector spaces.

    ``dims[n]`` is the dimension in degree n and ``maps[n]`` the matrix of
    d: C^n -> C^{n+1}.  Missing maps are zero.  ``bases`` optionally labels
    the coordinates.
    """

    def __init__(self, dims, maps, bases=None):
        self.dims = dict(dims)
        self.maps = dict(maps)
        self.bases = bases or {}
        for n, m in self.maps.items():
            if m.shape != (self.dims.get(n + 1, 0), self.dims.get(n, 0)):
                raise DomainMismatch(f"d^{n} has shape {m.shape}")

    def d(self, n):
        m = self.maps.get(n)
        if m is None:
            m = Matrix(self.dims.get(n + 1, 0), self.dims.get(n, 0))
        return m

    def check_square_zero(self):
        return all((self.d(n + 1) @ self.d(n)).is_zero() for n in self.dims)

    def cohomology_dim(self, n):
        dim = self.dims.get(n, 0)
        if not dim:
            return 0
        return dim - self.d(n).rank() - self.d(n - 1).rank()

    def cohomology_dims(self, degrees=None):
        degrees = sorted(self.dims) if degrees is None else degrees
        return {n: self.cohomology_dim(n) for n in degrees}

    def boundaries(self, n):
        prev = self.d(n - 1)
        cols = prev.columns()
        return [cols[k] for k in independent_subset(cols)]

    def representatives(self, n):
        """Cocycles whose classes form a basis of H^n."""
        bnd = self.boundaries(n)
        ker = self.d(n).kernel()
        return [ker[k] for k in independent_subset(ker, bnd)]

    def is_acyclic(self):
        return all(self.cohomology_dim(n) == 0 for n in self.dims)

    def class_coordinates(self, n, cocycle, reps=None):
        """Coordinates of a cocycle in the basis ``representatives(n)``.

        Returns None if the vector is not a cocycle.
        """
        if self.d(n).apply(cocycle):
            return None
        reps = self.representatives(n) if reps is None else reps
        bnd = self.boundaries(n)
        cols = reps + bnd
        m = Matrix.from_columns(self.dims.get(n, 0), cols)
        sol = m.solve(cocycle)
        if not sol.ok:
            raise AssertionError("cocycle outside span of representatives and boundaries")
        return [sol.vector.get(k, Fraction(0)) for k in range(len(reps))]
