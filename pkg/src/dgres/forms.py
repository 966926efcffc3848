"""Polynomial differential forms on algebraic simplices with coefficients in a DGA.

The simplex of dimension l has coordinates t1..tl (degree 0) and their
differentials dt1..dtl (degree 1); the barycentric coordinate t0 is
1 - (t1 + ... + tl).  Face 0 is t0 = 0 and face i >= 1 is ti = 0.  Forms
with coefficients in A live in the free DGA on A's generators followed by
the t's and dt's, whose differential is the total one.
"""

from math import factorial

from .dga import DGAMorphism, FreeDGA
from .errors import PreconditionError
from .poly import Poly


class SimplexAlgebra(FreeDGA):
    """A (x) Omega(simplex of dimension ``ell``) in coordinates ``prefix``1.."""

    def __init__(self, base, ell, prefix="t"):
        if ell < 0:
            raise PreconditionError("simplex dimension must be >= 0")
        self.base = base
        self.ell = ell
        self.prefix = prefix
        self.tnames = [f"{prefix}{i}" for i in range(1, ell + 1)]
        self.dtnames = [f"d{prefix}{i}" for i in range(1, ell + 1)]
        clash = (set(self.tnames) | set(self.dtnames)) & set(base.names)
        if clash:
            raise PreconditionError(f"coordinate names clash with generators: {sorted(clash)}")
        ring = base.ring.extend([(t, 0) for t in self.tnames] + [(d, 1) for d in self.dtnames])
        diff = {n: ring.coerce(base.dmap[n]) for n in base.names}
        for t, dt in zip(self.tnames, self.dtnames):
            diff[t] = ring.gen(dt)
        super().__init__(ring, diff, name=f"{base.name or 'A'}*Omega{ell}")

    def t(self, i):
        return self.gen(self.tnames[i - 1])

    def dt(self, i):
        return self.gen(self.dtnames[i - 1])

    def lift(self, a):
        """Constant form with coefficient a in the base algebra."""
        return self.ring.coerce(a) if isinstance(a, Poly) else self.elem(a)


_CACHE = {}


def simplex_algebra(base, ell, prefix="t"):
    key = (id(base), ell, prefix)
    hit = _CACHE.get(key)
    if hit is None or hit[0] is not base:
        hit = (base, SimplexAlgebra(base, ell, prefix) if ell > 0 else base)
        _CACHE[key] = hit
    return hit[1]


def _find(X, prefix):
    """The SimplexAlgebra layer of X using coordinates ``prefix``."""
    Y = X
    while isinstance(Y, SimplexAlgebra):
        if Y.prefix == prefix:
            return Y
        Y = Y.base
    raise PreconditionError(f"no simplex coordinates named {prefix!r}")


def face_target(X, prefix="t"):
    if not isinstance(X, SimplexAlgebra):
        raise PreconditionError("not a simplex algebra")
    if X.prefix == prefix:
        return simplex_algebra(X.base, X.ell - 1, prefix)
    return simplex_algebra(face_target(X.base, prefix), X.ell, X.prefix)


def _face_images(X, i, prefix, target):
    S = _find(X, prefix)
    ell = S.ell
    if not 0 <= i <= ell:
        raise PreconditionError(f"face index {i} out of range 0..{ell}")
    imgs = {}
    tr = target.ring
    for n in X.names:
        if n not in S.tnames and n not in S.dtnames:
            imgs[n] = tr.gen(n)
    tn = [f"{prefix}{k}" for k in range(1, ell)]
    dn = [f"d{prefix}{k}" for k in range(1, ell)]

    def T(k):
        return tr.gen(tn[k - 1])

    def dT(k):
        return tr.gen(dn[k - 1])

    for k in range(1, ell + 1):
        t, dt = S.tnames[k - 1], S.dtnames[k - 1]
        if i == 0:
            if k == 1:
                imgs[t] = tr.one() - sum((T(j) for j in range(1, ell)), tr.zero())
                imgs[dt] = -sum((dT(j) for j in range(1, ell)), tr.zero())
            else:
                imgs[t], imgs[dt] = T(k - 1), dT(k - 1)
        elif k < i:
            imgs[t], imgs[dt] = T(k), dT(k)
        elif k == i:
            imgs[t], imgs[dt] = tr.zero(), tr.zero()
        else:
            imgs[t], imgs[dt] = T(k - 1), dT(k - 1)
    return imgs


def face_map(X, i, prefix="t"):
    """The restriction to face i as a DGA morphism."""
    target = face_target(X, prefix)
    return DGAMorphism(X, target, _face_images(X, i, prefix, target))


def face(p, X, i, prefix="t"):
    return face_map(X, i, prefix).apply(p)


def restrict_coordinate_zero(p, X, i, prefix="t"):
    """Set t_i = 0 and dt_i = 0 but stay in the same algebra."""
    S = _find(X, prefix)
    imgs = {n: X.gen(n) for n in X.names}
    imgs[S.tnames[i - 1]] = X.zero()
    imgs[S.dtnames[i - 1]] = X.zero()
    from .poly import substitute
    return substitute(p, imgs, X.ring)


def vertex_swap(p, X, k, prefix="t"):
    """Pull back along the affine involution exchanging vertices 0 and k."""
    if k == 0:
        return p
    S = _find(X, prefix)
    imgs = {n: X.gen(n) for n in X.names}
    imgs[S.tnames[k - 1]] = X.one() - sum((X.gen(t) for t in S.tnames), X.zero())
    imgs[S.dtnames[k - 1]] = -sum((X.gen(d) for d in S.dtnames), X.zero())
    from .poly import substitute
    return substitute(p, imgs, X.ring)


def _dt_product(X, indices):
    out = X.one()
    for i in indices:
        out = out * X.dt(i)
    return out


def omega(X, m=None):
    """m! dt1...dtm (default m = dimension): the volume form of the m-face."""
    m = X.ell if m is None else m
    return _dt_product(X, range(1, m + 1)).scale(factorial(m))


def tau(X):
    """A primitive of omega vanishing on faces 1..l and restricting to omega on face 0."""
    ell = X.ell
    out = X.zero()
    for i in range(1, ell + 1):
        rest = [j for j in range(1, ell + 1) if j != i]
        term = X.t(i) * _dt_product(X, rest)
        out = out + (-term if i % 2 else term)
    return out.scale(-factorial(ell - 1))


def sigma(X):
    """tau + (-1)^l omega_(l-1): primitive of omega vanishing on faces 0..l-1."""
    ell = X.ell
    lower = omega(X, ell - 1)
    return tau(X) + (lower if ell % 2 == 0 else -lower)


def koszul_sign(ell):
    return -1 if (ell * (ell - 1) // 2) % 2 else 1


def normalized_omega(X):
    """(-1)^{l(l-1)/2} omega_l."""
    return omega(X).scale(koszul_sign(X.ell))


def normalized_class(a, X):
    return normalized_omega(X) * X.lift(a)


def boundary_shift_witness(b, X):
    """For b in A and the (l+1)-simplex X: a form psi with normalized last face omega_l d(b).

    psi = sigma_{l+1} d(b) + (-1)^l omega_{l+1} b; it vanishes on faces 0..l
    and is closed.
    """
    ell = X.ell - 1
    bb = X.lift(b)
    db = X.d(bb)
    w = omega(X) * bb
    return sigma(X) * db + (w if ell % 2 == 0 else -w)


def normalized_last_face(p, X):
    """(-1)^l times the restriction to the last face."""
    out = face(p, X, X.ell)
    return out if X.ell % 2 == 0 else -out


# filling and extension ----------------------------------------------------

def _split(X):
    """Positions of the coordinates; they must be the trailing generators."""
    n = X.ring.n
    ell = X.ell
    nb = n - 2 * ell
    if list(X.ring.names[nb:nb + ell]) != X.tnames or list(X.ring.names[nb + ell:]) != X.dtnames:
        raise PreconditionError("simplex coordinates must be the last generators")
    return nb


def radial_homotopy(p, X):
    """Contraction K with dK + Kd = id - (evaluation at the origin).

    On a monomial a t^alpha dt_I it is (-1)^{|a|} a (i_E t^alpha dt_I)/(|alpha|+|I|),
    where i_E is contraction with the Euler vector field.
    """
    ring = X.ring
    nb = _split(X)
    ell = X.ell
    out = {}
    for m, c in p.terms.items():
        alpha = m[nb:nb + ell]
        dts = [j for j in range(ell) if m[nb + ell + j]]
        k = len(dts)
        w = sum(alpha) + k
        if w == 0 or k == 0:
            continue
        a_deg = sum(e * d for e, d in zip(m[:nb], ring.degrees[:nb]))
        base = c / w
        if a_deg % 2:
            base = -base
        for pos, j in enumerate(dts):
            e = list(m)
            e[nb + j] += 1
            e[nb + ell + j] = 0
            v = base if pos % 2 == 0 else -base
            e = tuple(e)
            out[e] = out.get(e, 0) + v
    return Poly(ring, {e: v for e, v in out.items() if v})


def _check_horn(eta, X, missing):
    for i in range(X.ell + 1):
        if i != missing and face(eta, X, i).terms:
            return i
    return None


def horn_fill(eta, X, missing=0):
    """theta with d(theta) = eta vanishing on every face except ``missing``.

    Requires eta closed and zero on those faces.  A primitive is produced by
    the radial contraction at vertex 0 and then corrected face by face.
    """
    if X.d(eta).terms:
        raise PreconditionError("form is not closed")
    bad = _check_horn(eta, X, missing)
    if bad is not None:
        raise PreconditionError(f"form does not vanish on face {bad}")
    e = vertex_swap(eta, X, missing)
    theta = radial_homotopy(e, X)
    for i in range(1, X.ell + 1):
        theta = theta - restrict_coordinate_zero(theta, X, i)
    return vertex_swap(theta, X, missing)


def extend_from_face(psi, X):
    """Extend a form on the last face of X to X, vanishing on faces 0..l-1.

    psi lives on the (l-1)-simplex and must vanish on its boundary.  The
    extension is (1 - t_l)^(N+1) psi(t_j / (1 - t_l)) with N clearing
    denominators.
    """
    ell = X.ell
    small = face_target(X)
    if psi.ring != small.ring:
        raise PreconditionError("form does not live on the last face")
    if ell >= 2:
        for i in range(ell):
            if face(psi, small, i).terms:
                raise PreconditionError(f"form does not vanish on face {i} of the boundary")
    nb = X.ring.n - 2 * ell
    m_small = ell - 1
    one_minus = X.one() - X.t(ell)
    need = 0
    for m in psi.terms:
        alpha = m[nb:nb + m_small]
        k = sum(m[nb + m_small:])
        need = max(need, sum(alpha) + 2 * k)
    out = X.zero()
    pw = {}

    def power(e):
        if e not in pw:
            pw[e] = one_minus ** e
        return pw[e]

    for m, c in psi.terms.items():
        a = [0] * X.ring.n
        a[:nb] = m[:nb]
        for j in range(m_small):
            a[nb + j] = m[nb + j]
        term = X.ring.monomial(tuple(a), c)
        alpha = m[nb:nb + m_small]
        dts = [j + 1 for j in range(m_small) if m[nb + m_small + j]]
        term = term * power(need + 1 - sum(alpha) - 2 * len(dts))
        for j in dts:
            term = term * (one_minus * X.dt(j) + X.t(j) * X.dt(ell))
        out = out + term
    return out


def random_horn_form(rng, X, missing=0, max_exp=2, degree=None):
    """A random closed form vanishing on all faces but ``missing``: d of t1...tl times a random form."""
    ell = X.ell
    if degree is None:
        degree = rng.randint(-2, ell)
    from .graded import monomials
    target_deg = degree - 1
    monos = monomials(X.ring, degree=target_deg, max_total=max_exp)
    if not monos:
        return X.zero()
    body = X.zero()
    for _ in range(rng.randint(1, 3)):
        body = body + X.ring.monomial(rng.choice(monos), rng.randint(-3, 3))
    bump = X.one()
    for i in range(1, ell + 1):
        bump = bump * X.t(i)
    theta = vertex_swap(bump * body, X, missing)
    return X.d(theta)
