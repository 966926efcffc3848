"""Buchberger's algorithm for commutative polynomial ideals over the rationals.

Polynomials are ``Poly`` elements of a ring whose generators all have degree
zero.  Internally they are handled as plain dicts {exponents: Fraction}.
"""

from fractions import Fraction

from .errors import PreconditionError, ResourceError
from .poly import GradedRing, Poly


def _grevlex(e):
    return (sum(e), tuple(-x for x in reversed(e)))


class MonomialOrder:
    def __init__(self, name, nvars, block=None):
        self.name = name
        self.block = block
        if name == "lex":
            self.key = tuple
        elif name == "grevlex":
            self.key = _grevlex
        elif name == "elim":
            k = block
            self.key = lambda e: (_grevlex(e[:k]), _grevlex(e[k:]))
        else:
            raise PreconditionError(f"unknown monomial order {name!r}")

    def __repr__(self):
        return f"MonomialOrder({self.name}{'' if self.block is None else ', ' + str(self.block)})"


def _lead(p, key):
    return max(p, key=key)


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _monic(p, key):
    lc = p[_lead(p, key)]
    return {m: c / lc for m, c in p.items()}


def _add_scaled(p, q, c, shift):
    """p - c * x^shift * q, in place on p."""
    for m, v in q.items():
        mm = tuple(x + y for x, y in zip(m, shift))
        w = p.get(mm, 0) - c * v
        if w:
            p[mm] = w
        else:
            p.pop(mm, None)


def reduce_full(f, G, key):
    """Normal form of f modulo the list G of monic dicts (fully reduced)."""
    p = dict(f)
    rem = {}
    leads = [(_lead(g, key), g) for g in G]
    while p:
        m = _lead(p, key)
        c = p[m]
        for lm, g in leads:
            if _divides(lm, m):
                _add_scaled(p, g, c, _sub(m, lm))
                break
        else:
            rem[m] = c
            del p[m]
    return rem


def groebner_basis(polys, order, max_pairs=20000):
    """Reduced Groebner basis (monic, sorted by decreasing leading monomial)."""
    key = order.key
    G = []
    for f in polys:
        if f:
            G.append(_monic(dict(f), key))
    if not G:
        return []
    pairs = [(i, j) for j in range(len(G)) for i in range(j)]
    done = 0
    while pairs:
        pairs.sort(key=lambda ij: key(_lcm(_lead(G[ij[0]], key), _lead(G[ij[1]], key))), reverse=True)
        i, j = pairs.pop()
        done += 1
        if done > max_pairs:
            raise ResourceError(f"Groebner computation exceeded {max_pairs} S-pairs")
        li, lj = _lead(G[i], key), _lead(G[j], key)
        l = _lcm(li, lj)
        if all(a == 0 or b == 0 for a, b in zip(li, lj)):
            continue  # coprime leading terms
        s = {}
        _add_scaled(s, G[i], Fraction(-1), _sub(l, li))
        _add_scaled(s, G[j], Fraction(1), _sub(l, lj))
        r = reduce_full(s, G, key)
        if r:
            G.append(_monic(r, key))
            n = len(G) - 1
            pairs.extend((k, n) for k in range(n))
    return _reduce_basis(G, key)


def _reduce_basis(G, key):
    G = [g for g in G if g]
    # drop elements whose leading monomial is divisible by another's
    keep = []
    leads = [_lead(g, key) for g in G]
    for i, g in enumerate(G):
        li = leads[i]
        redundant = False
        for j, lj in enumerate(leads):
            if j != i and _divides(lj, li) and (lj != li or j < i):
                redundant = True
                break
        if not redundant:
            keep.append(g)
    out = []
    for i, g in enumerate(keep):
        others = keep[:i] + keep[i + 1:]
        lm = _lead(g, key)
        tail = {m: c for m, c in g.items() if m != lm}
        r = reduce_full(tail, others, key)
        r[lm] = Fraction(1)
        out.append(r)
    out.sort(key=lambda g: key(_lead(g, key)), reverse=True)
    return out


class Ideal:
    """An ideal of a polynomial ring in even degree-zero variables."""

    def __init__(self, ring, gens, order="grevlex", block=None, max_pairs=20000):
        if any(d != 0 for d in ring.degrees):
            raise PreconditionError("Groebner bases need degree-zero generators only")
        self.ring = ring
        self.gens = [ring.coerce(g) if isinstance(g, Poly) else ring.parse(g) for g in gens]
        self.order = MonomialOrder(order, ring.n, block)
        self.max_pairs = max_pairs
        self._gb = None

    def groebner(self):
        if self._gb is None:
            self._gb = groebner_basis([g.terms for g in self.gens], self.order, self.max_pairs)
        return [Poly(self.ring, dict(g)) for g in self._gb]

    def normal_form(self, f):
        self.groebner()
        f = self.ring.coerce(f) if isinstance(f, Poly) else self.ring.parse(f)
        return Poly(self.ring, reduce_full(f.terms, self._gb, self.order.key))

    def contains(self, f):
        return self.normal_form(f).is_zero()

    def is_whole_ring(self):
        gb = self.groebner()
        return len(gb) == 1 and gb[0] == 1

    def same_as(self, other):
        """Ideal equality via mutual containment of generators."""
        return all(other.contains(g) for g in self.gens) and all(self.contains(g) for g in other.gens)

    def standard_monomials(self, limit=10000):
        """Basis of the quotient ring, or None if it is infinite-dimensional."""
        gb = self.groebner()
        key = self.order.key
        leads = [_lead(g.terms, key) for g in gb]
        n = self.ring.n
        # each variable needs a pure power among the leading monomials
        for i in range(n):
            if not any(l[i] > 0 and sum(l) == l[i] for l in leads):
                return None
        out = []
        stack = [(0,) * n]
        seen = set(stack)
        while stack:
            m = stack.pop()
            if any(_divides(l, m) for l in leads):
                continue
            out.append(m)
            if len(out) > limit:
                raise ResourceError("quotient basis exceeds limit")
            for i in range(n):
                mm = m[:i] + (m[i] + 1,) + m[i + 1:]
                if mm not in seen:
                    seen.add(mm)
                    stack.append(mm)
        out.sort(key=key)
        return out

    def quotient_dim(self):
        sm = self.standard_monomials()
        return None if sm is None else len(sm)

    def __repr__(self):
        return f"Ideal({', '.join(str(g) for g in self.gens)})"


def is_unit_mod(g, ideal):
    """Decide whether g is invertible modulo the ideal.

    Returns (is_unit, inverse) where inverse q satisfies g*q - 1 in ideal.
    Invertibility is tested as 1 in I + (g); the inverse comes from an
    auxiliary variable t with g*t - 1 adjoined, eliminated first.
    """
    ring = ideal.ring
    g = ring.coerce(g) if isinstance(g, Poly) else ring.parse(g)
    test = Ideal(ring, ideal.gens + [g], max_pairs=ideal.max_pairs)
    if not test.is_whole_ring():
        return False, None
    tname = "t"
    while tname in ring.index:
        tname += "'"
    big = GradedRing([(tname, 0)] + list(ring.gens_spec))
    t = big.gen(tname)
    J = Ideal(big, [big.coerce(h) for h in ideal.gens] + [big.coerce(g) * t - 1],
              order="elim", block=1, max_pairs=ideal.max_pairs)
    q = J.normal_form(t)
    if q.terms and any(m[0] for m in q.terms):
        raise AssertionError("inverse did not eliminate the auxiliary variable")
    inv = Poly(ring, {m[1:]: c for m, c in q.terms.items()})
    inv = ideal.normal_form(inv)
    assert ideal.contains(g * inv - 1)
    return True, inv


def h0_presentation(A, order="grevlex"):
    """h^0 of a resolving algebra as a quotient of the degree-zero polynomial ring.

    The ideal is generated by the differentials of the degree -1 generators.
    """
    zero = [n for n, d in A.ring.gens_spec if d == 0]
    ring = GradedRing([(n, 0) for n in zero])
    rels = []
    for n in A.generators_of_degree(-1):
        dv = A.dmap[n]
        if dv.terms:
            rels.append(_project(dv, ring))
    return Ideal(ring, rels, order=order)


def _project(p, ring):
    idx = [p.ring.index[n] for n in ring.names]
    out = {}
    for m, c in p.terms.items():
        if any(e for i, e in enumerate(m) if i not in idx):
            raise PreconditionError(f"{p} involves non-degree-zero generators")
        out[tuple(m[i] for i in idx)] = c
    return Poly(ring, out)


def h0_map_is_iso(f):
    """Check that f induces an isomorphism h^0(A) -> h^0(B) by elimination.

    Returns a dict with keys ``surjective``, ``injective`` and ``iso``.
    """
    IA = h0_presentation(f.source)
    IB = h0_presentation(f.target)
    a_names = IA.ring.names
    b_names = IB.ring.names
    bn = [("b_" + n, 0) for n in b_names]
    an = [("a_" + n, 0) for n in a_names]
    big = GradedRing(bn + an)
    ren_b = {n: big.gen("b_" + n) for n in b_names}
    from .poly import substitute
    rels = [substitute(g, ren_b, big) for g in IB.gens if g.terms]
    for n in a_names:
        img = _project(f.images[n], IB.ring) if f.images[n].terms else IB.ring.zero()
        img = substitute(img, ren_b, big) if img.terms else big.zero()
        rels.append(big.gen("a_" + n) - img)
    J = Ideal(big, rels, order="elim", block=len(b_names))
    surj = True
    for n in b_names:
        r = J.normal_form(big.gen("b_" + n))
        if any(any(m[:len(b_names)]) for m in r.terms):
            surj = False
            break
    elim = []
    for g in J.groebner():
        if not any(any(m[:len(b_names)]) for m in g.terms):
            elim.append(Poly(IA.ring, {m[len(b_names):]: c for m, c in g.terms.items()}))
    E = Ideal(IA.ring, elim)
    inj = E.same_as(IA)
    return {"surjective": surj, "injective": inj, "iso": surj and inj}
