"""Quasi-free differential graded algebras and their morphisms."""

from fractions import Fraction

from .errors import DomainMismatch, InvalidSubstitution, PreconditionError, ValidationError
from .poly import GradedRing, Poly, as_fraction, graded_partial, substitute


def _to_poly(ring, value):
    if value is None:
        return ring.zero()
    if isinstance(value, Poly):
        return ring.coerce(value)
    if isinstance(value, str):
        return ring.parse(value)
    return ring.const(value)


def apply_derivation(p, values, along=None, target=None):
    """Extend generator values of a derivation to the polynomial ``p``.

    Uses D(f) = sum_i D(x_i) * along(df/dx_i) with left partials, which is
    the unique derivation (of any degree) with the given values, relative to
    the algebra map ``along`` (identity if None).  Generators missing from
    ``values`` are sent to zero.
    """
    if target is None:
        target = along.target.ring if along is not None else p.ring
    out = target.zero()
    for name in p.variables():
        v = values.get(name)
        if v is None or not v.terms:
            continue
        part = graded_partial(p, name, "left")
        if along is not None:
            part = along.apply(part)
        out = out + v * part
    return out


class ValidationReport:
    def __init__(self, problems=()):
        self.problems = list(problems)

    @property
    def ok(self):
        return not self.problems

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return f"ValidationReport(ok={self.ok}, problems={self.problems})"


class FreeDGA:
    """A free graded-commutative algebra with a differential given on generators.

    Degrees are arbitrary here; ``ResolvingAlgebra`` adds the restriction to
    non-positive degrees.
    """

    def __init__(self, gens, differential=None, weights=None, name=None):
        self.ring = gens if isinstance(gens, GradedRing) else GradedRing(gens)
        self.name = name
        differential = differential or {}
        for k in differential:
            if k not in self.ring.index:
                raise DomainMismatch(f"differential given for unknown generator {k!r}")
        self.dmap = {n: _to_poly(self.ring, differential.get(n)) for n in self.ring.names}
        self.weights = dict(weights) if weights else None
        self._mono_cache = {}

    # basic access
    @property
    def names(self):
        return self.ring.names

    @property
    def degrees(self):
        return dict(self.ring.gens_spec)

    def gen(self, name):
        return self.ring.gen(name)

    def parse(self, text):
        return self.ring.parse(text)

    def elem(self, value):
        return _to_poly(self.ring, value)

    def zero(self):
        return self.ring.zero()

    def one(self):
        return self.ring.one()

    def const(self, c):
        return self.ring.const(c)

    def __repr__(self):
        label = self.name or type(self).__name__
        gens = ", ".join(f"{n}:{d}" for n, d in self.ring.gens_spec)
        return f"<{label} [{gens}]>"

    def d(self, p):
        if p.ring != self.ring:
            raise DomainMismatch(f"element of {p.ring!r} passed to {self!r}")
        out = {}
        for m, c in p.terms.items():
            dm = self._mono_cache.get(m)
            if dm is None:
                dm = apply_derivation(Poly(self.ring, {m: Fraction(1)}), self.dmap)
                self._mono_cache[m] = dm
            for k, v in dm.terms.items():
                out[k] = out.get(k, 0) + c * v
        return Poly(self.ring, {k: v for k, v in out.items() if v})

    def weight_of_mono(self, m):
        w = self.weights
        return sum(e * w[n] for e, n in zip(m, self.ring.names) if e)

    def weights_of(self, p):
        return {self.weight_of_mono(m) for m in p.terms}

    def validate(self):
        problems = []
        for n in self.ring.names:
            dx = self.dmap[n]
            want = self.ring.degree_of(n) + 1
            if dx.terms and dx.degrees() != {want}:
                problems.append((n, f"d({n}) should have degree {want}", str(dx)))
                continue
            ddx = self.d(dx)
            if ddx.terms:
                problems.append((n, f"d(d({n})) is nonzero", str(ddx)))
        if self.weights is not None:
            for n in self.ring.names:
                if n not in self.weights:
                    problems.append((n, "missing weight", None))
                elif self.weights[n] <= 0:
                    problems.append((n, "weights must be positive", self.weights[n]))
        return ValidationReport(problems)

    def weight_homogeneous(self):
        """True if every d(x) is weight-homogeneous of the weight of x."""
        if self.weights is None:
            return False
        for n in self.ring.names:
            ws = self.weights_of(self.dmap[n])
            if ws and ws != {self.weights[n]}:
                return False
        return True

    def generators_of_degree(self, degree):
        return [n for n, d in self.ring.gens_spec if d == degree]

    def with_name(self, name):
        out = self.__class__.__new__(self.__class__)
        out.__dict__.update(self.__dict__)
        out.name = name
        return out


class ResolvingAlgebra(FreeDGA):
    """Quasi-free commutative DGA concentrated in non-positive degrees."""

    def validate(self):
        rep = super().validate()
        for n, deg in self.ring.gens_spec:
            if deg > 0:
                rep.problems.insert(0, (n, "generator degree must be <= 0", deg))
        return rep

    def max_generator_depth(self):
        return max((-d for d in self.ring.degrees), default=0)


def ground_algebra():
    """The ground field as a resolving algebra with no generators."""
    return ResolvingAlgebra([], name="k")


class DGAMorphism:
    """Algebra map determined by images of the source generators."""

    def __init__(self, source, target, images, name=None):
        self.source = source
        self.target = target
        self.name = name
        imgs = {}
        for n in source.ring.names:
            if n not in images:
                raise InvalidSubstitution(f"no image given for generator {n!r}")
            imgs[n] = _to_poly(target.ring, images[n])
        extra = set(images) - set(source.ring.names)
        if extra:
            raise InvalidSubstitution(f"images given for unknown generators {sorted(extra)}")
        for n, v in imgs.items():
            if v.terms and v.degrees() != {source.ring.degree_of(n)}:
                raise InvalidSubstitution(
                    f"image of {n} must have degree {source.ring.degree_of(n)}, got {v}")
        self.images = imgs

    def __call__(self, p):
        return self.apply(p)

    def apply(self, p):
        if not isinstance(p, Poly):
            p = self.source.elem(p)
        if p.ring != self.source.ring:
            raise DomainMismatch("element does not belong to the source algebra")
        if not self.source.ring.n:
            return self.target.ring.const(p.constant_term())
        return substitute(p, self.images, self.target.ring)

    def validate(self):
        problems = []
        for n in self.source.ring.names:
            lhs = self.target.d(self.images[n])
            rhs = self.apply(self.source.dmap[n])
            if lhs != rhs:
                problems.append((n, "morphism does not commute with d", str(lhs - rhs)))
        return ValidationReport(problems)

    def __repr__(self):
        return f"<DGAMorphism {self.name or ''} {self.source!r} -> {self.target!r}>"


def identity(A):
    return DGAMorphism(A, A, {n: A.gen(n) for n in A.names})


def compose(g, f):
    """g o f."""
    if f.target.ring != g.source.ring:
        raise DomainMismatch("morphisms are not composable")
    return DGAMorphism(f.source, g.target, {n: g.apply(v) for n, v in f.images.items()})


def inclusion(A, B):
    """Inclusion of A into B, matching generators by name."""
    return DGAMorphism(A, B, {n: B.gen(n) for n in A.names})


class Augmentation:
    """A rational point: degree-zero generators get values, the rest go to zero."""

    def __init__(self, algebra, values=None, name=None):
        self.algebra = algebra
        self.name = name
        values = dict(values or {})
        extra = set(values) - set(algebra.names)
        if extra:
            raise InvalidSubstitution(f"values given for unknown generators {sorted(extra)}")
        self.values = {}
        for n, deg in algebra.ring.gens_spec:
            if deg == 0:
                self.values[n] = as_fraction(values.get(n, 0))
            elif n in values and as_fraction(values[n]) != 0:
                raise InvalidSubstitution(f"generator {n} has nonzero degree; its value must be 0")

    def evaluate(self, p):
        ring = p.ring
        total = Fraction(0)
        for m, c in p.terms.items():
            v = c
            for i, e in enumerate(m):
                if e:
                    if ring.degrees[i] != 0:
                        v = 0
                        break
                    v *= self.values.get(ring.names[i], 0) ** e
            total += v
        return total

    def validate(self):
        problems = []
        for n in self.algebra.generators_of_degree(-1):
            v = self.evaluate(self.algebra.dmap[n])
            if v:
                problems.append((n, f"d({n}) does not vanish at the point", str(v)))
        return ValidationReport(problems)

    def as_morphism(self):
        k = ground_algebra()
        return DGAMorphism(self.algebra, k, {n: self.values.get(n, 0) for n in self.algebra.names})

    def pullback(self, f):
        """The point of the source of ``f`` obtained by composing with ``f``."""
        vals = {}
        for n, deg in f.source.ring.gens_spec:
            if deg == 0:
                vals[n] = self.evaluate(f.images[n])
        return Augmentation(f.source, vals)

    def shift_images(self):
        """Generator substitution x -> x + value moving this point to the origin."""
        ring = self.algebra.ring
        return {n: ring.gen(n) + self.values.get(n, 0) for n in ring.names}


def origin(A):
    return Augmentation(A, {})


# constructions --------------------------------------------------------------

def _fresh(name, taken):
    while name in taken:
        name = name + "'"
    return name


def tensor(A, B, rename=None, name=None):
    """Tensor product A (x) B with both inclusions.

    Generators of B whose names clash with A get primes appended, unless an
    explicit ``rename`` map (B-name -> new name) is supplied.
    """
    taken = set(A.names)
    bnames = {}
    for n in B.names:
        new = rename.get(n, n) if rename else n
        new = _fresh(new, taken)
        taken.add(new)
        bnames[n] = new
    ring = A.ring.extend([(bnames[n], d) for n, d in B.ring.gens_spec])
    bsub = {n: ring.gen(bnames[n]) for n in B.names}
    diff = {n: ring.coerce(A.dmap[n]) for n in A.names}
    for n in B.names:
        diff[bnames[n]] = substitute(B.dmap[n], bsub, ring) if B.dmap[n].terms else ring.zero()
    weights = None
    if A.weights is not None and B.weights is not None:
        weights = dict(A.weights)
        weights.update({bnames[n]: w for n, w in B.weights.items()})
    cls = ResolvingAlgebra if isinstance(A, ResolvingAlgebra) and isinstance(B, ResolvingAlgebra) else FreeDGA
    R = cls(ring, diff, weights=weights, name=name)
    inc_a = DGAMorphism(A, R, {n: R.gen(n) for n in A.names})
    inc_b = DGAMorphism(B, R, {n: R.gen(bnames[n]) for n in B.names})
    return R, inc_a, inc_b


def subalgebra(A, names, name=None):
    """Sub-DGA on a set of generators closed under d, with its inclusion."""
    keep = [n for n in A.names if n in set(names)]
    ring = GradedRing([(n, A.ring.degree_of(n)) for n in keep])
    diff = {}
    for n in keep:
        try:
            diff[n] = _restrict(A.dmap[n], ring)
        except DomainMismatch:
            raise PreconditionError(f"d({n}) leaves the chosen generators") from None
    weights = {n: A.weights[n] for n in keep} if A.weights else None
    S = type(A)(ring, diff, weights=weights, name=name)
    return S, inclusion(S, A)


def _restrict(p, ring):
    used = set(p.variables())
    if not used <= set(ring.names):
        raise DomainMismatch("element uses generators outside the subalgebra")
    return _drop_unused(p, ring)


def _drop_unused(p, ring):
    idx = [p.ring.index[n] for n in ring.names]
    out = {}
    for m, c in p.terms.items():
        out[tuple(m[i] for i in idx)] = c
    # generators keep their relative order, so no sign changes
    return Poly(ring, out)


def truncation(B, n, name=None):
    """Subalgebra on the generators of degree >= -n, with its inclusion."""
    keep = [g for g, d in B.ring.gens_spec if d >= -n]
    return subalgebra(B, keep, name=name)


def adjoin_cells(A, cells, name=None, weights=None):
    """Adjoin generators with prescribed differentials.

    ``cells`` is a list of ``(name, degree, d_value)``; differentials may use
    generators of A and any of the new cells.  Raises ValidationError if a
    differential is not a cocycle of the right degree.
    """
    taken = set(A.names)
    for c in cells:
        if c[0] in taken:
            raise ValidationError(f"generator {c[0]!r} already exists")
        taken.add(c[0])
    ring = A.ring.extend([(c[0], c[1]) for c in cells])
    diff = {n: ring.coerce(A.dmap[n]) for n in A.names}
    for cname, deg, dv in cells:
        diff[cname] = _to_poly(ring, dv)
    w = None
    if A.weights is not None and weights is not None:
        w = dict(A.weights)
        w.update(weights)
    cls = type(A) if isinstance(A, FreeDGA) else ResolvingAlgebra
    B = cls(ring, diff, weights=w, name=name)
    rep = B.validate()
    if not rep.ok:
        raise ValidationError(f"cell attachment is invalid: {rep.problems}")
    return B, inclusion(A, B)


def localize(A, g, names=("y", "eta"), name=None):
    """Adjoin an inverse of the degree-zero element g: d(eta) = y*g - 1."""
    y, eta = names
    g = A.elem(g)
    if g.terms and g.degrees() != {0}:
        raise PreconditionError("can only invert a degree-zero element")
    ring = A.ring.extend([(y, 0), (eta, -1)])
    dv = ring.gen(y) * ring.coerce(g) - 1
    return adjoin_cells(A, [(y, 0, None), (eta, -1, dv)], name=name)


def standard_etale(A, cells, name=None):
    """Adjoin pairs (x_i of degree 0, xi_i of degree -1) with d(xi_i) = f_i.

    ``cells`` is a list of ``(x_name, xi_name, f)`` with f a polynomial in A
    and the new x's.  Returns the inclusion A -> B.  Whether the Jacobian is
    invertible is checked separately by ``criteria.jacobian_unit_check``.
    """
    ring = A.ring.extend([(c[0], 0) for c in cells])
    fs = [_to_poly(ring, c[2]) for c in cells]
    spec = [(c[0], 0, None) for c in cells] + [
        (c[1], -1, f) for c, f in zip(cells, fs)]
    B, inc = adjoin_cells(A, spec, name=name)
    return inc


def koszul(n, sections, var="x", cell="e", name=None):
    """Koszul algebra k[x_1..x_n]{e_1..e_m} with d(e_j) = s_j.

    Variables get weight 1; each cell gets the weight of its section when the
    section is weight-homogeneous.
    """
    base = [(f"{var}{i}", 0) for i in range(1, n + 1)]
    ring0 = GradedRing(base)
    secs = [_to_poly(ring0, s) for s in sections]
    ring = ring0.extend([(f"{cell}{j}", -1) for j in range(1, len(secs) + 1)])
    diff = {f"{cell}{j}": ring.coerce(s) for j, s in enumerate(secs, 1)}
    weights = {f"{var}{i}": 1 for i in range(1, n + 1)}
    for j, s in enumerate(secs, 1):
        ws = {sum(m) for m in s.terms}
        if len(ws) == 1 and next(iter(ws)) > 0:
            weights[f"{cell}{j}"] = next(iter(ws))
        else:
            weights = None
            break
    return ResolvingAlgebra(ring, diff, weights=weights, name=name)


def lambda_algebra(n):
    """Free model of k[x]/(x^2) with deg x = -n.

    For odd n this is k[x] itself; for even n a cell xi with d(xi) = x^2 is
    added.
    """
    if n <= 0:
        raise PreconditionError("n must be positive")
    if n % 2:
        return ResolvingAlgebra([("x", -n)], name=f"Lambda{n}")
    return ResolvingAlgebra([("x", -n), ("xi", -2 * n - 1)], {"xi": "x^2"}, name=f"Lambda{n}")
