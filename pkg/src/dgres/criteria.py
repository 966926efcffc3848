"""Decision procedures: etaleness at points, completions, quasi-isomorphism."""

from collections import defaultdict

from .completion import compare_at_level, induced_iso_report
from .dga import Augmentation
from .dgmod import cotangent_complex, fiber_at
from .errors import PreconditionError, UnsupportedMode
from .graded import complex_from_bases, monomials, vectorize
from .groebner import Ideal, h0_map_is_iso, h0_presentation, is_unit_mod
from .linalg import Matrix
from .poly import GradedRing, graded_partial


class Verdict:
    """Outcome of a check: ``holds`` is True, False or None (inconclusive)."""

    def __init__(self, name, holds, scope, witness=None):
        self.name = name
        self.holds = holds
        self.scope = scope
        self.witness = witness or {}

    def __bool__(self):
        return bool(self.holds)

    def __repr__(self):
        return f"Verdict({self.name}: {self.holds}, scope={self.scope!r})"


def _point(A, p):
    return p if isinstance(p, Augmentation) else Augmentation(A, p)


def is_etale_at(f, point):
    """f: A -> B is etale at a point of B iff the fiber of L_{B/A} there is acyclic."""
    point = _point(f.target, point)
    rep = point.validate()
    if not rep.ok:
        raise PreconditionError(f"not a point: {rep.problems}")
    L = cotangent_complex(f)
    cx = fiber_at(L, point)
    dims = cx.cohomology_dims()
    holds = all(v == 0 for v in dims.values())
    return Verdict("etale", holds, "at point", {"fiber_cohomology": dims})


def jacobian_unit_check(A, xs, fs):
    """Is det(df_i/dx_j) a unit in h^0(A)[xs]/(fs)?

    ``A`` supplies the base relations; ``xs`` are new degree-zero variable
    names and ``fs`` polynomials in A's degree-zero generators and the xs.
    Returns (is_unit, determinant, inverse or None).
    """
    base = h0_presentation(A)
    ring = GradedRing(list(base.ring.gens_spec) + [(x, 0) for x in xs])
    fs = [ring.coerce(f) if hasattr(f, "terms") else ring.parse(f) for f in fs]
    if len(fs) != len(xs):
        raise PreconditionError("need as many equations as variables")
    jac = [[graded_partial(f, x) for x in xs] for f in fs]
    det = _det(jac, ring)
    ideal = Ideal(ring, [ring.coerce(g) for g in base.gens] + fs)
    ok, inv = is_unit_mod(det, ideal)
    return ok, det, inv


def _det(mat, ring):
    n = len(mat)
    if n == 0:
        return ring.one()
    if n == 1:
        return mat[0][0]
    total = ring.zero()
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in mat[1:]]
        term = mat[0][j] * _det(minor, ring)
        total = total + term if j % 2 == 0 else total - term
    return total


def completion_compare(f, point, levels):
    """Compare A/m^n and B/m^n for n = 1..levels at a point of B.

    Holds if every level induces isomorphisms on all cohomology groups; the
    scope records the highest level verified.
    """
    point = _point(f.target, point)
    table = {}
    first_bad = None
    for n in range(1, levels + 1):
        rep = compare_at_level(f, point, n)
        table[n] = rep
        if first_bad is None and not all(ok for _, _, ok in rep.values()):
            first_bad = n
            break
    holds = first_bad is None
    scope = f"verified to level {levels}" if holds else f"fails at level {first_bad}"
    return Verdict("completion", holds, scope, {"levels": table, "first_failure": first_bad})


class AtPoints:
    def __init__(self, points, order=3):
        self.points = list(points)
        self.order = order


class WeightBounded:
    def __init__(self, max_weight):
        self.max_weight = max_weight


class H0Only:
    pass


def is_qis(f, mode):
    """Quasi-isomorphism check for f: A -> B in one of the supported scopes.

    * ``AtPoints``: h^0 isomorphism by elimination, acyclic cotangent fibers
      and matching completions up to the given order at each point.
    * ``WeightBounded``: exact comparison of every weight piece up to a bound.
    * ``H0Only``: only the h^0 isomorphism.
    """
    if isinstance(mode, H0Only):
        h0 = h0_map_is_iso(f)
        return Verdict("qis", h0["iso"], "h0 only", {"h0": h0})
    if isinstance(mode, AtPoints):
        h0 = h0_map_is_iso(f)
        wit = {"h0": h0, "points": []}
        holds = h0["iso"]
        for p in mode.points:
            p = _point(f.target, p)
            et = is_etale_at(f, p)
            comp = completion_compare(f, p, mode.order)
            wit["points"].append({"etale": et.witness, "completion": comp.scope})
            holds = holds and et.holds and comp.holds
        return Verdict("qis", holds, f"at {len(mode.points)} point(s), order {mode.order}", wit)
    if isinstance(mode, WeightBounded):
        return weight_compare(f, mode.max_weight)
    raise UnsupportedMode(f"unknown mode {mode!r}")


def _weight_bases(A, w):
    by = defaultdict(list)
    for m in monomials(A.ring, weights=A.weights, weight=w):
        by[A.ring.mono_degree(m)].append(m)
    return by


def weight_compare(f, max_weight):
    A, B = f.source, f.target
    for X in (A, B):
        if not X.weight_homogeneous():
            raise UnsupportedMode("weight comparison needs weight-homogeneous differentials")
    for n, v in f.images.items():
        ws = B.weights_of(v)
        if ws and ws != {A.weights[n]}:
            raise UnsupportedMode("morphism does not preserve weights")
    table = {}
    holds = True
    for w in range(0, max_weight + 1):
        ba, bb = _weight_bases(A, w), _weight_bases(B, w)
        degs = sorted(set(ba) | set(bb))
        if not degs:
            continue
        lo, hi = degs[0] - 1, degs[-1] + 1
        bases_a = {n: ba.get(n, []) for n in range(lo, hi + 1)}
        bases_b = {n: bb.get(n, []) for n in range(lo, hi + 1)}
        cx_a = complex_from_bases(A, bases_a)
        cx_b = complex_from_bases(B, bases_b)
        maps = {}
        for n in range(lo, hi + 1):
            idx = {m: k for k, m in enumerate(bases_b[n])}
            cols = [vectorize(f.apply(A.ring.monomial(m)), idx) for m in bases_a[n]]
            maps[n] = Matrix.from_columns(len(bases_b[n]), cols)
        rep = induced_iso_report(cx_a, cx_b, maps, degs)
        table[w] = rep
        if not all(ok for _, _, ok in rep.values()):
            holds = False
    return Verdict("qis", holds, f"weights 0..{max_weight}", {"weights": table})
