"""Finite graded pieces of free algebras and their cochain complexes.

An algebra with degree-zero generators is infinite-dimensional in every
degree, so cohomology is only computed in one of three finite modes:

* ``Exact``: no degree-zero generators, so every degree is finite.
* ``WeightExact``: positive weights with a weight-preserving differential;
  each (degree, weight) piece is finite.
* ``TruncatedAtOrder``: the quotient by the N-th power of the maximal ideal
  at a rational point (see ``completion``).
"""

from fractions import Fraction

from .errors import UnsupportedMode
from .linalg import FiniteComplex, Matrix


class Exact:
    def describe(self):
        return "exact"

    def __repr__(self):
        return "Exact()"


class WeightExact:
    def __init__(self, weight):
        self.weight = weight

    def describe(self):
        return f"weight:{self.weight}"

    def __repr__(self):
        return f"WeightExact({self.weight})"


class TruncatedAtOrder:
    def __init__(self, order, point=None):
        if order < 1:
            raise UnsupportedMode("truncation order must be >= 1")
        self.order = order
        self.point = point

    def describe(self):
        return f"truncate:{self.order}"

    def __repr__(self):
        return f"TruncatedAtOrder({self.order})"


def monomials(ring, degree=None, max_total=None, weights=None, weight=None):
    """Exponent tuples of the given degree, in lexicographic order.

    The search must be finite: every even generator needs a bound coming
    from ``max_total``, from ``weight`` (positive weights) or, when all
    degrees are non-positive, from the target degree.
    """
    n = ring.n
    degs = ring.degrees
    odd = ring.is_odd
    wts = [weights[name] for name in ring.names] if weights is not None else None
    if weight is not None and wts is None:
        raise UnsupportedMode("weight requested without weights")
    all_nonpos = all(d <= 0 for d in degs)
    # achievable degree range of a suffix, used for pruning
    suffix_pos = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        extra = degs[i] if (degs[i] > 0 and odd[i]) else 0
        if degs[i] > 0 and not odd[i]:
            extra = float("inf")
        suffix_pos[i] = suffix_pos[i + 1] + extra
    suffix_min = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix_min[i] = min(suffix_min[i + 1], degs[i])

    out = []
    exps = [0] * n

    def rec(i, cur_deg, total, wsum):
        if degree is not None:
            if all_nonpos and cur_deg < degree:
                return
            if cur_deg + suffix_pos[i] < degree:
                return
            if suffix_min[i] >= 0:
                if cur_deg > degree:
                    return
            elif max_total is not None:
                if cur_deg + (max_total - total) * suffix_min[i] > degree:
                    return
        if i == n:
            if (degree is None or cur_deg == degree) and (weight is None or wsum == weight):
                out.append(tuple(exps))
            return
        if odd[i]:
            top = 1
        else:
            bounds = []
            if max_total is not None:
                bounds.append(max_total - total)
            if weight is not None:
                bounds.append((weight - wsum) // wts[i])
            if degree is not None and all_nonpos and degs[i] < 0:
                bounds.append((cur_deg - degree) // (-degs[i]))
            if not bounds:
                raise UnsupportedMode(
                    f"graded piece is infinite: generator {ring.names[i]!r} is unbounded")
            top = min(bounds)
        if max_total is not None:
            top = min(top, max_total - total)
        if weight is not None:
            top = min(top, (weight - wsum) // wts[i])
        for e in range(0, max(top, -1) + 1):
            exps[i] = e
            rec(i + 1, cur_deg + e * degs[i], total + e,
                wsum + (e * wts[i] if wts else 0))
        exps[i] = 0

    rec(0, 0, 0, 0)
    return out


def monomials_of_degree(ring, degree, max_total=None):
    return monomials(ring, degree=degree, max_total=max_total)


def vectorize(p, index):
    """Coordinates of ``p`` in a monomial basis given as {exps: position}."""
    vec = {}
    for m, c in p.terms.items():
        k = index.get(m)
        if k is None:
            raise KeyError(m)
        vec[k] = c
    return vec


def algebra_complex(A, lo, hi, mode=None):
    """The finite complex of A in degrees lo..hi under ``mode``.

    Degrees just outside the window are not included, so cohomology at the
    two ends is only meaningful if the caller widens the window by one.
    Returns (complex, bases) where ``bases[n]`` lists exponent tuples.
    """
    mode = mode or Exact()
    if isinstance(mode, TruncatedAtOrder):
        from .completion import madic_truncate, default_point
        pt = mode.point if mode.point is not None else default_point(A)
        T = madic_truncate(A, pt, mode.order)
        return T.complex(lo, hi), T.bases_window(lo, hi)
    if isinstance(mode, WeightExact):
        if not A.weight_homogeneous():
            raise UnsupportedMode("weight mode needs positive weights preserved by d")
        bases = {n: monomials(A.ring, degree=n, weights=A.weights, weight=mode.weight)
                 for n in range(lo, hi + 1)}
    elif isinstance(mode, Exact):
        if A.generators_of_degree(0) or any(d > 0 for d in A.ring.degrees):
            raise UnsupportedMode("exact mode needs all generators in negative degree")
        bases = {n: monomials(A.ring, degree=n) for n in range(lo, hi + 1)}
    else:
        raise UnsupportedMode(f"unknown mode {mode!r}")
    return complex_from_bases(A, bases), bases


def complex_from_bases(A, bases):
    index = {n: {m: k for k, m in enumerate(b)} for n, b in bases.items()}
    maps = {}
    for n, b in bases.items():
        if n + 1 not in bases:
            continue
        cols = []
        for m in b:
            dm = A.d(A.ring.monomial(m))
            cols.append(vectorize(dm, index[n + 1]))
        maps[n] = Matrix.from_columns(len(bases[n + 1]), cols)
    return FiniteComplex({n: len(b) for n, b in bases.items()}, maps, bases)


def cohomology_dims(A, lo, hi, mode=None):
    """dim h^n(A) for lo <= n <= hi, computed exactly in the given mode."""
    cx, _ = algebra_complex(A, lo - 1, hi + 1, mode)
    return {n: cx.cohomology_dim(n) for n in range(lo, hi + 1)}


def cohomology_basis(A, n, mode=None):
    """Cocycles in degree n whose classes form a basis, as polynomials."""
    cx, bases = algebra_complex(A, n - 1, n + 1, mode)
    return [from_vector(A.ring, bases[n], v) for v in cx.representatives(n)]


def from_vector(ring, basis, vec):
    from .poly import Poly
    return Poly(ring, {basis[k]: Fraction(v) for k, v in vec.items() if v})


def is_coboundary(A, z, mode=None):
    """Return a primitive b with d(b) = z, or None, searching the finite piece of z."""
    if not z.terms:
        return A.zero()
    n = z.degree()
    cx, bases = algebra_complex(A, n - 1, n, mode)
    index = {m: k for k, m in enumerate(bases[n])}
    try:
        vec = vectorize(z, index)
    except KeyError:
        raise UnsupportedMode("element does not lie in the requested finite piece") from None
    sol = cx.d(n - 1).solve(vec)
    if not sol.ok:
        return None
    return from_vector(A.ring, bases[n - 1], sol.vector)
