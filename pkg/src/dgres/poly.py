"""Graded-commutative polynomials over the rationals.

A ``GradedRing`` fixes an ordered list of named generators with integer
degrees.  Odd generators anticommute and square to zero, even ones commute.
Monomials are stored as dense exponent tuples in generator order; the sign
produced by reordering odd factors is folded into the coefficient, so every
element has a unique normal form.
"""

import re
from fractions import Fraction
from numbers import Rational

from .errors import DomainMismatch, InvalidSubstitution, DSLError

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")


def as_fraction(c):
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"not a rational scalar: {c!r}")


class GradedRing:
    """Free graded-commutative algebra on an ordered list of generators."""

    def __init__(self, gens):
        gens = [(str(n), int(d)) for n, d in gens]
        names = [n for n, _ in gens]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names in {names}")
        for n in names:
            if not _IDENT.match(n):
                raise ValueError(f"bad generator name {n!r}")
        self.gens_spec = tuple(gens)
        self.names = tuple(names)
        self.degrees = tuple(d for _, d in gens)
        self.index = {n: i for i, n in enumerate(names)}
        self.n = len(gens)
        self.odd_idx = tuple(i for i, d in enumerate(self.degrees) if d % 2)
        self.is_odd = tuple(d % 2 == 1 for d in self.degrees)
        self._zero = (0,) * self.n
        self._hash = hash(self.gens_spec)

    def __eq__(self, other):
        return isinstance(other, GradedRing) and self.gens_spec == other.gens_spec

    def __hash__(self):
        return self._hash

    def __repr__(self):
        inner = ", ".join(f"{n}:{d}" for n, d in self.gens_spec)
        return f"GradedRing({inner})"

    def __contains__(self, name):
        return name in self.index

    def degree_of(self, name):
        return self.degrees[self.index[name]]

    def zero(self):
        return Poly(self, {})

    def one(self):
        return Poly(self, {self._zero: Fraction(1)})

    def const(self, c):
        c = as_fraction(c)
        return Poly(self, {self._zero: c} if c else {})

    def gen(self, name):
        try:
            i = self.index[name]
        except KeyError:
            raise DomainMismatch(f"{name!r} is not a generator of {self!r}") from None
        e = [0] * self.n
        e[i] = 1
        return Poly(self, {tuple(e): Fraction(1)})

    def gens(self):
        return [self.gen(n) for n in self.names]

    def monomial(self, exps, coeff=1):
        exps = tuple(exps)
        for i in self.odd_idx:
            if exps[i] > 1:
                return self.zero()
        c = as_fraction(coeff)
        return Poly(self, {exps: c} if c else {})

    def mono_degree(self, exps):
        return sum(e * d for e, d in zip(exps, self.degrees) if e)

    def extend(self, more):
        """Ring with extra generators appended after the existing ones."""
        return GradedRing(list(self.gens_spec) + [(n, d) for n, d in more])

    def coerce(self, p):
        """Re-express ``p`` in this ring, matching generators by name."""
        if p.ring == self:
            return p
        pos = []
        for name, deg in p.ring.gens_spec:
            j = self.index.get(name)
            if j is None or self.degrees[j] != deg:
                raise DomainMismatch(f"cannot coerce generator {name!r} into {self!r}")
            pos.append(j)
        # a permutation of odd generators may reintroduce signs
        if pos == sorted(pos):
            out = {}
            for m, c in p.terms.items():
                e = [0] * self.n
                for i, k in enumerate(m):
                    if k:
                        e[pos[i]] = k
                out[tuple(e)] = c
            return Poly(self, out)
        return substitute(p, {n: self.gen(n) for n in p.ring.names}, self)

    def parse(self, text):
        return _Parser(text, self).parse_all()

    def random_element(self, rng, degree, max_terms=3, max_exp=3, coeff_range=3):
        """A random homogeneous element of the given degree (possibly zero)."""
        from .graded import monomials_of_degree
        monos = monomials_of_degree(self, degree, max_total=max_exp)
        if not monos:
            return self.zero()
        out = self.zero()
        for _ in range(rng.randint(1, max_terms)):
            m = rng.choice(monos)
            c = rng.randint(-coeff_range, coeff_range)
            out = out + self.monomial(m, c)
        return out


def _mono_mul(ring, a, b):
    """Product of two monomials as (sign, exps), or None if it vanishes."""
    sign = 1
    odd = ring.odd_idx
    if odd:
        ob = [j for j in odd if b[j]]
        if ob:
            oa = [i for i in odd if a[i]]
            if oa:
                flips = 0
                for j in ob:
                    if a[j]:
                        return None
                    for i in oa:
                        if i > j:
                            flips += 1
                if flips & 1:
                    sign = -1
    return sign, tuple(x + y for x, y in zip(a, b))


class Poly:
    """An element of a ``GradedRing``: a dict from exponent tuples to rationals."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms

    # construction helpers
    def _lift(self, other):
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise DomainMismatch(f"{self.ring!r} vs {other.ring!r}")
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c):
        c = as_fraction(c)
        if not c:
            return self.ring.zero()
        return Poly(self.ring, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        if other.ring != self.ring:
            raise DomainMismatch(f"{self.ring!r} vs {other.ring!r}")
        ring = self.ring
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                r = _mono_mul(ring, m1, m2)
                if r is None:
                    continue
                s, m = r
                v = out.get(m, 0) + (c1 * c2 if s > 0 else -c1 * c2)
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Poly(ring, out)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, c):
        return self.scale(1 / as_fraction(c))

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power")
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        try:
            return self.terms == self.ring.const(other).terms
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    # grading
    def degrees(self):
        return {self.ring.mono_degree(m) for m in self.terms}

    def is_homogeneous(self):
        return len(self.degrees()) <= 1

    def degree(self):
        """Degree of a nonzero homogeneous element."""
        ds = self.degrees()
        if len(ds) != 1:
            raise ValueError(f"not homogeneous or zero: {self}")
        return next(iter(ds))

    def components(self):
        """Split into homogeneous components, keyed by degree."""
        out = {}
        for m, c in self.terms.items():
            out.setdefault(self.ring.mono_degree(m), {})[m] = c
        return {d: Poly(self.ring, t) for d, t in out.items()}

    def constant_term(self):
        return self.terms.get(self.ring._zero, Fraction(0))

    def max_total_exponent(self):
        return max((sum(m) for m in self.terms), default=0)

    def variables(self):
        used = set()
        for m in self.terms:
            used.update(i for i, e in enumerate(m) if e)
        return [self.ring.names[i] for i in sorted(used)]

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0]), [-e for e in t[0]]))

    def __str__(self):
        if not self.terms:
            return "0"
        names = self.ring.names
        parts = []
        for m, c in self.sorted_terms():
            factors = []
            for i, e in enumerate(m):
                if e == 1:
                    factors.append(names[i])
                elif e:
                    factors.append(f"{names[i]}^{e}")
            neg = c < 0
            a = -c if neg else c
            if factors:
                body = "*".join(factors)
                if a != 1:
                    body = f"{a}*{body}"
            else:
                body = str(a)
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __repr__(self):
        return f"Poly({self})"


def graded_partial(p, name, side="left"):
    """Graded partial derivative with respect to a generator.

    ``side="left"`` pulls the generator to the front before deleting it, so
    d(pq) = (dp)q + (-1)^{|g||p|} p(dq).  ``side="right"`` pulls it to the
    back, which is the form appearing in f = sum (df/dx_i) x_i style
    expansions such as the universal derivation.
    """
    ring = p.ring
    k = ring.index[name]
    dg = ring.degrees[k]
    odd_g = dg % 2
    out = {}
    for m, c in p.terms.items():
        e = m[k]
        if not e:
            continue
        if odd_g:
            if side == "left":
                passed = sum(m[i] * ring.degrees[i] for i in range(k))
            else:
                passed = sum(m[i] * ring.degrees[i] for i in range(k + 1, ring.n))
            v = -c if passed % 2 else c
        else:
            v = c * e
        nm = m[:k] + (e - 1,) + m[k + 1:]
        out[nm] = out.get(nm, 0) + v
    return Poly(ring, {m: c for m, c in out.items() if c})


def degree_component(p, degree):
    return Poly(p.ring, {m: c for m, c in p.terms.items() if p.ring.mono_degree(m) == degree})


def substitute(p, images, target=None, check_degrees=True):
    """Algebra homomorphism determined by generator images, applied to ``p``.

    ``images`` maps every generator name occurring in ``p`` to an element of
    ``target``.  Images must be homogeneous of the generator's degree (or
    zero) unless ``check_degrees`` is off.
    """
    ring = p.ring
    if target is None:
        for v in images.values():
            target = v.ring
            break
        else:
            raise InvalidSubstitution("cannot infer target ring from empty substitution")
    imgs = [None] * ring.n
    for i, name in enumerate(ring.names):
        v = images.get(name)
        if v is None:
            continue
        if not isinstance(v, Poly):
            v = target.const(v)
        if v.ring != target:
            raise InvalidSubstitution(f"image of {name} lives in {v.ring!r}")
        if check_degrees and v.terms and v.degrees() != {ring.degrees[i]}:
            raise InvalidSubstitution(
                f"image of {name} (degree {ring.degrees[i]}) has degrees {sorted(v.degrees())}")
        imgs[i] = v
    powers = {}

    def power(i, e):
        key = (i, e)
        r = powers.get(key)
        if r is None:
            r = imgs[i] if e == 1 else power(i, e - 1) * imgs[i]
            powers[key] = r
        return r

    acc = {}
    for m, c in p.terms.items():
        term = None
        for i, e in enumerate(m):
            if not e:
                continue
            if imgs[i] is None:
                raise InvalidSubstitution(f"no image given for generator {ring.names[i]!r}")
            f = power(i, e)
            term = f if term is None else term * f
            if not term.terms:
                break
        if term is None:
            term = target.one()
        for tm, tc in term.terms.items():
            acc[tm] = acc.get(tm, 0) + c * tc
    return Poly(target, {m: c for m, c in acc.items() if c})


# expression parser -------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_']*)|(\S))")


def tokenize(text, line=1, col0=1):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group(1) is not None:
            toks.append(("num", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            toks.append(("id", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            toks.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    return toks


class _Parser:
    def __init__(self, text, ring, line=1, col0=1):
        self.toks = tokenize(text)
        self.i = 0
        self.ring = ring
        self.line = line
        self.col0 = col0
        self.end = len(text)

    def err(self, msg):
        if self.i < len(self.toks):
            col = self.col0 + self.toks[self.i][2]
        else:
            col = self.col0 + self.end
        raise DSLError(msg, self.line, col)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, None)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def parse_all(self):
        if not self.toks:
            self.err("empty expression")
        p = self.expr()
        if self.i != len(self.toks):
            self.err(f"unexpected token {self.peek()[1]!r}")
        return p

    def expr(self):
        p = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        p = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            if op == "*":
                p = p * self.factor()
            else:
                kind, val, _ = self.take()
                if kind != "num":
                    self.err("division only by integer literals")
                if int(val) == 0:
                    self.err("division by zero")
                p = p.scale(Fraction(1, int(val)))
        return p

    def factor(self):
        kind, val, _ = self.peek()
        if kind == "op" and val in ("-", "+"):
            self.take()
            f = self.factor()
            return -f if val == "-" else f
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            kind, val, _ = self.take()
            if kind != "num":
                self.err("exponent must be a non-negative integer")
            base = base ** int(val)
        return base

    def atom(self):
        kind, val, _ = self.peek()
        if kind == "num":
            self.take()
            return self.ring.const(int(val))
        if kind == "id":
            if val not in self.ring.index:
                self.err(f"unknown generator {val!r}")
            self.take()
            return self.ring.gen(val)
        if kind == "op" and val == "(":
            self.take()
            p = self.expr()
            if self.peek()[1] != ")":
                self.err("expected ')'")
            self.take()
            return p
        self.err(f"unexpected token {val!r}" if val else "unexpected end of expression")
