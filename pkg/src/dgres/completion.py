"""Truncations A/m^N at a rational point and comparisons of completions.

After moving the point to the origin (x -> x + value), the maximal ideal m
is spanned by the monomials of positive total exponent, so A/m^N has the
monomials of total exponent < N as an exact basis.  The differential
preserves m because it vanishes at the point.
"""

from collections import defaultdict

from .dga import Augmentation, FreeDGA, origin
from .errors import PreconditionError
from .graded import monomials, vectorize
from .linalg import Echelon, FiniteComplex, Matrix
from .poly import Poly, substitute


def default_point(A):
    pt = origin(A)
    if not pt.validate().ok:
        raise PreconditionError("the origin is not a point of this algebra; pass one explicitly")
    return pt


def shifted_algebra(A, point):
    """A with coordinates moved so that ``point`` becomes the origin."""
    if not point.validate().ok:
        raise PreconditionError(f"not a point of the algebra: {point.validate().problems}")
    shift = point.shift_images()
    diff = {n: substitute(A.dmap[n], shift, A.ring) if A.dmap[n].terms else A.zero()
            for n in A.names}
    return FreeDGA(A.ring, diff, weights=A.weights, name=A.name)


class TruncatedDGA:
    """A/m^N in shifted coordinates, with its exact monomial basis."""

    def __init__(self, algebra, point, order):
        self.original = algebra
        self.point = point
        self.order = order
        self.algebra = shifted_algebra(algebra, point)
        for n in self.algebra.names:
            if self.algebra.dmap[n].constant_term():
                raise PreconditionError(f"d({n}) does not vanish at the point")
        by_deg = defaultdict(list)
        for m in monomials(self.algebra.ring, max_total=order - 1):
            by_deg[self.algebra.ring.mono_degree(m)].append(m)
        self.bases = dict(by_deg)
        self.index = {n: {m: k for k, m in enumerate(b)} for n, b in self.bases.items()}

    def truncate(self, p):
        N = self.order
        return Poly(p.ring, {m: c for m, c in p.terms.items() if sum(m) < N})

    def d(self, p):
        return self.truncate(self.algebra.d(p))

    def degrees(self):
        return sorted(self.bases)

    def bases_window(self, lo, hi):
        return {n: self.bases.get(n, []) for n in range(lo, hi + 1)}

    def complex(self, lo=None, hi=None):
        degs = self.degrees()
        lo = degs[0] if lo is None else lo
        hi = degs[-1] if hi is None else hi
        bases = self.bases_window(lo, hi)
        maps = {}
        ring = self.algebra.ring
        for n in range(lo, hi):
            cols = [vectorize(self.d(ring.monomial(m)), self.index.get(n + 1, {}))
                    for m in bases[n]]
            maps[n] = Matrix.from_columns(len(bases[n + 1]), cols)
        return FiniteComplex({n: len(b) for n, b in bases.items()}, maps, bases)

    def cohomology_dims(self):
        cx = self.complex()
        return {n: cx.cohomology_dim(n) for n in self.degrees()}


def madic_truncate(A, point, order):
    if not isinstance(point, Augmentation):
        point = Augmentation(A, point)
    return TruncatedDGA(A, point, order)


def truncated_map(f, TA, TB):
    """Matrices of the chain map A/m^N -> B/m^N induced by f, per degree."""
    ring_a, ring_b = TA.algebra.ring, TB.algebra.ring
    shift_b = TB.point.shift_images()
    imgs = {}
    for n in ring_a.names:
        img = f.images[n] - TA.point.values.get(n, 0) if ring_a.degree_of(n) == 0 else f.images[n]
        img = substitute(img, shift_b, ring_b) if img.terms else ring_b.zero()
        if img.constant_term():
            raise PreconditionError("the points are not compatible with the morphism")
        imgs[n] = TB.truncate(img)
    out = {}
    for deg, basis in TA.bases.items():
        cols = []
        for m in basis:
            p = substitute(ring_a.monomial(m), imgs, ring_b)
            cols.append(vectorize(TB.truncate(p), TB.index.get(deg, {})))
        out[deg] = Matrix.from_columns(len(TB.bases.get(deg, [])), cols)
    return out


def induced_iso_report(cx_a, cx_b, maps, degrees):
    """Per degree: (dim h_A, dim h_B, whether the induced map is an isomorphism)."""
    out = {}
    for n in degrees:
        ha = cx_a.cohomology_dim(n)
        hb = cx_b.cohomology_dim(n)
        ok = ha == hb
        if ok and ha:
            bnd = cx_b.boundaries(n)
            ech = Echelon(bnd)
            m = maps.get(n)
            for z in cx_a.representatives(n):
                if not ech.add(m.apply(z)):
                    ok = False
                    break
        out[n] = (ha, hb, ok)
    return out


def compare_at_level(f, point_b, level):
    point_a = point_b.pullback(f)
    TA = madic_truncate(f.source, point_a, level)
    TB = madic_truncate(f.target, point_b, level)
    maps = truncated_map(f, TA, TB)
    degs = sorted(set(TA.bases) | set(TB.bases))
    cx_a = TA.complex(degs[0], degs[-1])
    cx_b = TB.complex(degs[0], degs[-1])
    return induced_iso_report(cx_a, cx_b, maps, degs)


def graded_piece(A, point, n):
    """The complex m^n / m^(n+1): monomials of total exponent n with the exponent-preserving part of d."""
    S = shifted_algebra(A, point)
    by_deg = defaultdict(list)
    for m in monomials(S.ring, max_total=n):
        if sum(m) == n:
            by_deg[S.ring.mono_degree(m)].append(m)
    if not by_deg:
        return FiniteComplex({}, {})
    lo, hi = min(by_deg), max(by_deg)
    bases = {k: by_deg.get(k, []) for k in range(lo, hi + 1)}
    index = {k: {m: i for i, m in enumerate(b)} for k, b in bases.items()}
    maps = {}
    for k in range(lo, hi):
        cols = []
        for m in bases[k]:
            dm = S.d(S.ring.monomial(m))
            dm = Poly(S.ring, {e: c for e, c in dm.terms.items() if sum(e) == n})
            cols.append(vectorize(dm, index[k + 1]))
        maps[k] = Matrix.from_columns(len(bases[k + 1]), cols)
    return FiniteComplex({k: len(b) for k, b in bases.items()}, maps, bases)


def symmetric_power_dims(dims, n):
    """Graded dimensions of the n-th graded-symmetric power of a graded space.

    Even degrees contribute polynomially, odd degrees exteriorly.
    """
    # generating function in one variable per degree, truncated to total power n
    poly = {(0, 0): 1}  # (power, degree) -> count
    for deg, dim in sorted(dims.items()):
        for _ in range(dim):
            new = defaultdict(int)
            for (p, d), c in poly.items():
                top = 1 if deg % 2 else n - p
                for e in range(0, top + 1):
                    if p + e <= n:
                        new[(p + e, d + e * deg)] += c
            poly = new
    out = defaultdict(int)
    for (p, d), c in poly.items():
        if p == n and c:
            out[d] += c
    return dict(out)
