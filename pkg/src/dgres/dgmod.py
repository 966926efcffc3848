"""Free DG modules over quasi-free algebras.

Module elements are dicts {basis symbol: coefficient polynomial}, with the
coefficient written on the left.  The differential obeys
d(a e) = (da) e + (-1)^{|a|} a d(e).
"""

from fractions import Fraction

from .dga import Augmentation, ValidationReport, apply_derivation
from .errors import DomainMismatch, PreconditionError, UnsupportedMode
from .graded import Exact, TruncatedAtOrder, WeightExact, monomials
from .linalg import FiniteComplex, Matrix
from .poly import Poly, graded_partial, substitute


def _signed(p, parity_shift=0):
    """(-1)^{|a| + parity_shift} a, applied per homogeneous component."""
    out = {}
    ring = p.ring
    for m, c in p.terms.items():
        s = (ring.mono_degree(m) + parity_shift) % 2
        out[m] = -c if s else c
    return Poly(ring, out)


def madd(x, y, scale=1):
    out = dict(x)
    for k, v in y.items():
        w = out[k] + v * scale if k in out else v * scale
        if w.terms:
            out[k] = w
        else:
            out.pop(k, None)
    return out


def mscale(a, x):
    """Left multiplication of a module element by an algebra element."""
    out = {}
    for k, v in x.items():
        w = a * v
        if w.terms:
            out[k] = w
    return out


def mclean(x):
    return {k: v for k, v in x.items() if v.terms}


class FreeDGModule:
    """A free graded module over ``algebra`` with a differential on the basis."""

    def __init__(self, algebra, basis, differential=None, name=None):
        self.algebra = algebra
        self.basis = [(str(s), int(d)) for s, d in basis]
        self.name = name
        self.deg = dict(self.basis)
        if len(self.deg) != len(self.basis):
            raise PreconditionError("duplicate basis symbols")
        differential = differential or {}
        self.dmap = {}
        for s, _ in self.basis:
            v = differential.get(s, {})
            self.dmap[s] = mclean({k: algebra.elem(c) for k, c in v.items()})

    @property
    def symbols(self):
        return [s for s, _ in self.basis]

    def gen(self, s):
        if s not in self.deg:
            raise DomainMismatch(f"{s!r} is not a basis element")
        return {s: self.algebra.one()}

    def degree(self, x):
        ds = set()
        for s, a in x.items():
            ds |= {d + self.deg[s] for d in a.degrees()}
        if len(ds) != 1:
            raise ValueError("element is zero or not homogeneous")
        return next(iter(ds))

    def d(self, x):
        out = {}
        for s, a in x.items():
            out = madd(out, {s: self.algebra.d(a)})
            if self.dmap[s]:
                out = madd(out, mscale(_signed(a), self.dmap[s]))
        return out

    def validate(self):
        problems = []
        for s, deg in self.basis:
            de = self.dmap[s]
            for t, c in de.items():
                if t not in self.deg:
                    problems.append((s, f"unknown symbol {t!r} in d({s})", None))
                    continue
                want = deg + 1 - self.deg[t]
                if c.degrees() != {want}:
                    problems.append((s, f"coefficient of {t} in d({s}) must have degree {want}", str(c)))
            if not problems:
                dd = self.d(de)
                if dd:
                    problems.append((s, f"d(d({s})) is nonzero", format_element(dd)))
        return ValidationReport(problems)

    def __repr__(self):
        return f"<FreeDGModule {self.name or ''} basis={self.symbols}>"


def format_element(x):
    parts = []
    for s in sorted(x):
        parts.append(f"({x[s]})*{s}")
    return " + ".join(parts) if parts else "0"


class ModuleMap:
    """A-linear degree-zero map determined by images of basis elements."""

    def __init__(self, source, target, images):
        if source.algebra.ring != target.algebra.ring:
            raise DomainMismatch("modules over different algebras")
        self.source = source
        self.target = target
        self.images = {s: mclean(images.get(s, {})) for s in source.symbols}

    def apply(self, x):
        out = {}
        for s, a in x.items():
            out = madd(out, mscale(a, self.images[s]))
        return out

    def validate(self):
        problems = []
        for s in self.source.symbols:
            lhs = self.apply(self.source.dmap[s])
            rhs = self.target.d(self.images[s])
            diff = madd(lhs, rhs, -1)
            if diff:
                problems.append((s, "map does not commute with d", format_element(diff)))
        return ValidationReport(problems)


def kaehler(A, base=(), prefix="D", suffix=""):
    """Kaehler differentials of A relative to the sub-DGA on ``base`` generators.

    Returns (module, universal_derivation) where the derivation sends an
    element f to sum_i (right partial of f in x_i) * Dx_i.
    """
    base = set(base)
    gens = [(n, d) for n, d in A.ring.gens_spec if n not in base]
    sym = {n: f"{prefix}{n}{suffix}" for n, _ in gens}

    def universal(f):
        f = A.elem(f)
        out = {}
        for n in f.variables():
            if n in base:
                continue
            part = graded_partial(f, n, "right")
            if part.terms:
                out[sym[n]] = part
        return out

    diff = {sym[n]: universal(A.dmap[n]) for n, _ in gens}
    M = FreeDGModule(A, [(sym[n], d) for n, d in gens], diff, name=f"Omega({A.name or 'A'})")
    M.universal = universal
    M.symbol_of = sym
    return M, universal


def shift(M, tag="[1]"):
    """M[1]: degrees lowered by one and the differential negated.

    With the action a.(m[1]) = (-1)^{|a|} (a m)[1], the coefficient c of
    e'[1] in d(e[1]) is -(-1)^{|c|} times the coefficient of e' in d(e).
    """
    basis = [(s + tag, d - 1) for s, d in M.basis]
    diff = {}
    for s, _ in M.basis:
        diff[s + tag] = {t + tag: -_signed(c) for t, c in M.dmap[s].items()}
    out = FreeDGModule(M.algebra, basis, diff, name=f"{M.name}{tag}")
    return out


def cone(phi, tag="[1]"):
    """Cone N (+) M[1] of a module map phi: M -> N, with d(m[1]) = phi(m) - (dm)[1].

    Returns (cone, inclusion of N, projection to M[1]).
    """
    M, N = phi.source, phi.target
    Ms = shift(M, tag)
    clash = set(N.symbols) & set(Ms.symbols)
    if clash:
        raise PreconditionError(f"basis symbols clash in cone: {sorted(clash)}")
    basis = list(N.basis) + list(Ms.basis)
    diff = {s: dict(N.dmap[s]) for s in N.symbols}
    for s in M.symbols:
        diff[s + tag] = madd(Ms.dmap[s + tag], phi.images[s])
    C = FreeDGModule(M.algebra, basis, diff, name=f"cone({M.name}->{N.name})")
    inc = ModuleMap(N, C, {s: C.gen(s) for s in N.symbols})
    proj = ModuleMap(C, Ms, {s: (Ms.gen(s) if s in Ms.deg else {}) for s in C.symbols})
    return C, inc, proj


def base_change(M, f, suffix=""):
    """M tensored along f: A -> B, a free B-module on the same basis."""
    if M.algebra.ring != f.source.ring:
        raise DomainMismatch("module is not over the source of the morphism")
    diff = {s + suffix: {t + suffix: f.apply(c) for t, c in M.dmap[s].items()} for s in M.symbols}
    return FreeDGModule(f.target, [(s + suffix, d) for s, d in M.basis], diff,
                        name=f"{M.name}(x)B")


def cotangent_complex(f):
    """Relative cotangent complex of f: B -> A.

    The cone of Omega_B (x)_B A -> Omega_A sending D(b) to the universal
    derivative of f(b).  Source symbols carry an ``@src`` suffix.
    """
    B, A = f.source, f.target
    OmB, _ = kaehler(B, suffix="@src")
    OmA, univ_a = kaehler(A)
    OmB_A = base_change(OmB, f)
    images = {OmB.symbol_of[n]: univ_a(f.images[n]) for n in B.names}
    phi = ModuleMap(OmB_A, OmA, images)
    C, _, _ = cone(phi)
    C.name = "L"
    C.comparison = phi
    return C


def fiber_at(M, point):
    """The finite complex M (x)_A k at a rational point of A."""
    if not isinstance(point, Augmentation):
        point = Augmentation(M.algebra, point)
    degs = sorted({d for _, d in M.basis})
    if not degs:
        return FiniteComplex({}, {})
    bases = {n: [s for s, d in M.basis if d == n] for n in range(degs[0], degs[-1] + 1)}
    index = {n: {s: k for k, s in enumerate(b)} for n, b in bases.items()}
    maps = {}
    for n in range(degs[0], degs[-1]):
        cols = []
        for s in bases[n]:
            col = {}
            for t, c in M.dmap[s].items():
                v = point.evaluate(c)
                if v:
                    col[index[n + 1][t]] = v
            cols.append(col)
        maps[n] = Matrix.from_columns(len(bases[n + 1]), cols)
    return FiniteComplex({n: len(b) for n, b in bases.items()}, maps, bases)


def fiber_map(phi, point):
    """Matrices of phi (x) k at a point, one per degree, in the bases of ``fiber_at``."""
    if not isinstance(point, Augmentation):
        point = Augmentation(phi.source.algebra, point)
    M, N = phi.source, phi.target
    out = {}
    for n in sorted({d for _, d in M.basis}):
        rows = [s for s, d in N.basis if d == n]
        index = {s: k for k, s in enumerate(rows)}
        cols = []
        for s, d in M.basis:
            if d != n:
                continue
            col = {}
            for t, c in phi.images[s].items():
                v = point.evaluate(c)
                if v:
                    col[index[t]] = v
            cols.append(col)
        out[n] = Matrix.from_columns(len(rows), cols)
    return out

class PerfectnessReport:
    def __init__(self, dims, window, reliable):
        self.dims = dims
        self.window = window
        self.reliable = reliable

    @property
    def amplitude(self):
        nz = [n for n, v in self.dims.items() if v and self._trusted(n)]
        return -min(nz) if nz else 0

    def _trusted(self, n):
        return self.reliable is None or self.reliable[0] <= n <= self.reliable[1]

    def within(self, lo, hi):
        return all(not v for n, v in self.dims.items() if self._trusted(n) and not lo <= n <= hi)

    def __repr__(self):
        return f"PerfectnessReport(dims={self.dims}, amplitude={self.amplitude})"


def perfectness_report(A, point, reliable_from=None):
    """Fiber cohomology of the Kaehler differentials of A at a point.

    For an algebra truncated at generator degree -n the fiber is only exact
    in degrees > -n; pass ``reliable_from=-n+1`` to ignore the bottom.
    """
    M, _ = kaehler(A)
    cx = fiber_at(M, point)
    dims = cx.cohomology_dims()
    lo = min(dims) if dims else 0
    reliable = None if reliable_from is None else (reliable_from, 0)
    return PerfectnessReport(dims, (lo, 0), reliable)


# derivations -------------------------------------------------------------

class DerComplex:
    """Complex of derivations of B relative to its base generators, with values in A via P.

    A degree-n derivation is recorded by its values D(x) in A of degree
    deg(x) + n on the non-base generators x of B.  Its differential is
    (dD)(x) = d(D(x)) - (-1)^n D(d x).
    """

    def __init__(self, P, base=(), mode=None, weight_shift=0):
        self.P = P
        self.B = P.source
        self.A = P.target
        self.base = set(base)
        self.mode = mode or Exact()
        self.free = [n for n in self.B.names if n not in self.base]
        for n in self.base:
            if n not in self.B.ring.index:
                raise DomainMismatch(f"unknown base generator {n!r}")
            dv = self.B.dmap[n]
            if set(dv.variables()) - self.base:
                raise PreconditionError("base generators must span a sub-DGA")
        self.weight_shift = weight_shift
        if isinstance(self.mode, TruncatedAtOrder):
            from .completion import default_point, madic_truncate
            pt = self.mode.point if self.mode.point is not None else default_point(self.A)
            self.trunc = madic_truncate(self.A, pt, self.mode.order)
            tgt = self.trunc.algebra
            shiftmap = pt.shift_images()
            imgs = {n: self.trunc.truncate(substitute(v, shiftmap, tgt.ring) if v.terms else tgt.zero())
                    for n, v in P.images.items()}
            from .dga import DGAMorphism
            self.Pt = DGAMorphism(self.B, tgt, imgs)
            self.target = tgt
        else:
            self.trunc = None
            self.Pt = P
            self.target = self.A
            if isinstance(self.mode, WeightExact):
                if not (self.A.weight_homogeneous() and self.B.weights):
                    raise UnsupportedMode("weight mode needs weights on both algebras")
            elif isinstance(self.mode, Exact):
                if self.A.generators_of_degree(0) or any(d > 0 for d in self.A.ring.degrees):
                    raise UnsupportedMode("exact mode needs the target in negative degrees")
            else:
                raise UnsupportedMode(f"unknown mode {self.mode!r}")
        self._cache = {}

    def _piece(self, degree, gen):
        ring = self.target.ring
        if self.trunc is not None:
            return list(self.trunc.bases.get(degree, []))
        if isinstance(self.mode, WeightExact):
            w = self.B.weights[gen] + self.weight_shift
            if w < 0:
                return []
            return monomials(ring, degree=degree, weights=self.A.weights, weight=w)
        if degree > 0:
            return []
        return monomials(ring, degree=degree)

    def space(self, n):
        """Basis of degree-n derivations: list of (generator, monomial)."""
        if n not in self._cache:
            out = []
            for x in self.free:
                for m in self._piece(self.B.ring.degree_of(x) + n, x):
                    out.append((x, m))
            self._cache[n] = out
        return self._cache[n]

    def extend(self, D, f):
        """D(f) for an element f of B."""
        val = apply_derivation(f, D, along=self.Pt, target=self.target.ring)
        return self.trunc.truncate(val) if self.trunc is not None else val

    def differential(self, D, n):
        sign = -1 if n % 2 else 1
        out = {}
        for x in self.free:
            v = self.target.d(D[x]) if x in D else self.target.zero()
            v = v - self.extend(D, self.B.dmap[x]).scale(sign)
            if self.trunc is not None:
                v = self.trunc.truncate(v)
            if v.terms:
                out[x] = v
        return out

    def from_vector(self, n, vec):
        D = {}
        ring = self.target.ring
        basis = self.space(n)
        for k, c in vec.items():
            x, m = basis[k]
            D[x] = D.get(x, ring.zero()) + ring.monomial(m, c)
        return {x: v for x, v in D.items() if v.terms}

    def to_vector(self, n, D):
        index = {b: k for k, b in enumerate(self.space(n))}
        vec = {}
        for x, v in D.items():
            for m, c in v.terms.items():
                k = index.get((x, m))
                if k is None:
                    raise UnsupportedMode("derivation leaves the finite piece")
                vec[k] = c
        return vec

    def matrix(self, n):
        cols = []
        for k in range(len(self.space(n))):
            D = self.from_vector(n, {k: Fraction(1)})
            cols.append(self.to_vector(n + 1, self.differential(D, n)))
        return Matrix.from_columns(len(self.space(n + 1)), cols)

    def complex(self, lo, hi):
        dims = {n: len(self.space(n)) for n in range(lo, hi + 1)}
        maps = {n: self.matrix(n) for n in range(lo, hi)}
        return FiniteComplex(dims, maps)


def der_cohomology(P, n, base=(), mode=None, weight_shift=0):
    """dim h^n of the derivation complex and representative cocycles."""
    DC = DerComplex(P, base, mode, weight_shift)
    cx = DC.complex(n - 1, n + 1)
    reps = [DC.from_vector(n, v) for v in cx.representatives(n)]
    return cx.cohomology_dim(n), reps, DC
