"""Linearization of simplicial morphism spaces by derivations.

A derivation D of degree -l (relative to base generators, along P: B -> A)
gives the morphism B -> A (x) Omega_l sending x to P(x) + w D(x), where w
is the normalized volume form.  This module builds those morphisms, the
homotopies showing they are well defined and additive, the boundary maps,
and the transport of derivation classes along a homotopy.
"""

from math import factorial

from .dga import DGAMorphism, apply_derivation
from .dgmod import DerComplex
from .errors import PreconditionError, ResourceError
from .forms import (face_map, koszul_sign, normalized_omega, simplex_algebra, tau,
                    _dt_product)
from .graded import Exact, algebra_complex, is_coboundary, monomials, vectorize
from .linalg import Matrix
from .poly import Poly


def _lift_values(D, X):
    return {n: X.lift(v) for n, v in D.items() if v.terms}


def der_apply(P, D, f):
    """D(f) for a derivation D (values on generators) along P."""
    return apply_derivation(f, D, along=P, target=P.target.ring)


def der_differential(P, D, n, base=()):
    """(dD)(x) = d(D(x)) - (-1)^n D(dx) for a degree-n derivation along P."""
    A, B = P.target, P.source
    out = {}
    for x in B.names:
        if x in base:
            continue
        v = A.d(D[x]) if x in D else A.zero()
        w = der_apply(P, D, B.dmap[x])
        v = v + w if n % 2 else v - w
        if v.terms:
            out[x] = v
    return out


def is_derivation_cocycle(P, D, n, base=()):
    return not der_differential(P, D, n, base)


def xi_ell(P, D, ell, prefix="t"):
    """The morphism B -> A (x) Omega_l, x -> P(x) + (-1)^{l(l-1)/2} omega_l D(x).

    For l = 0 this is x -> P(x) + D(x) into A itself.
    """
    A, B = P.target, P.source
    if ell == 0:
        imgs = {n: P.images[n] + D.get(n, A.zero()) for n in B.names}
        return DGAMorphism(B, A, imgs)
    X = simplex_algebra(A, ell, prefix)
    w = normalized_omega(X)
    imgs = {}
    for n in B.names:
        v = X.lift(P.images[n])
        if n in D and D[n].terms:
            v = v + w * X.lift(D[n])
        imgs[n] = v
    return DGAMorphism(B, X, imgs)


def well_defined_homotopy(P, D, E, ell, base=()):
    """Homotopy between xi_l(D) and xi_l(D + dE), with E of degree -l-1.

    Returns (Phi, D') with Phi: B -> (A (x) Omega_l) (x) Omega_1 in the
    coordinate s; s = 0 gives xi_l(D) and s = 1 gives xi_l(D').
    """
    A, B = P.target, P.source
    dE = der_differential(P, E, -ell - 1, base)
    Dp = {n: D.get(n, A.zero()) + dE.get(n, A.zero()) for n in B.names if n not in base}
    X = simplex_algebra(A, ell, "t") if ell else A
    Y = simplex_algebra(X, 1, "s")
    w = Y.lift(normalized_omega(X)) if ell else Y.one()
    s, ds = Y.t(1), Y.dt(1)
    imgs = {}
    for n in B.names:
        v = Y.lift(P.images[n])
        if n not in base:
            d0 = Y.lift(D.get(n, A.zero()))
            d1 = Y.lift(Dp.get(n, A.zero()))
            e = Y.lift(E.get(n, A.zero()))
            v = v + w * ((Y.one() - s) * d0 + s * d1) + w * ds * e
        imgs[n] = v
    return DGAMorphism(B, Y, imgs), {n: v for n, v in Dp.items() if v.terms}


def homotopy_check(H, f, g, prefix="s"):
    """H restricts to f on face 0 (s = 1) and to g on face 1 (s = 0), and is a DGA map."""
    if not H.validate().ok:
        return False
    X = H.target
    from .dga import compose
    h0 = compose(face_map(X, 0, prefix), H)
    h1 = compose(face_map(X, 1, prefix), H)
    return _same(h0, f) and _same(h1, g)


def _same(f, g):
    if f.target.ring != g.target.ring:
        return False
    return all(f.images[n] == g.images[n] for n in f.source.names)


def constant_homotopy(f, prefix="s"):
    Y = simplex_algebra(f.target, 1, prefix)
    return DGAMorphism(f.source, Y, {n: Y.lift(v) for n, v in f.images.items()})


def concat_witness(P, D, Dp, ell, outside=None):
    """A morphism from the (l+1)-simplex whose faces exhibit xi(D) + xi(D') = xi(D + D').

    Returns (Phi, faces) where ``faces`` maps a face index to the morphism
    expected there.  For l >= 2: face l-1 is xi(D), face l+1 is xi(D') and
    face l is xi(D + D'); the rest are P.  For l = 1 the second derivation
    must vanish on every generator not listed in ``outside`` and those
    generators must have differentials avoiding ``outside``; then face 0 is
    xi(D), face 1 is xi(D + D') and face 2 is xi(D').
    """
    A, B = P.target, P.source
    X = simplex_algebra(A, ell + 1)
    zero = A.zero()
    Dsum = {n: D.get(n, zero) + Dp.get(n, zero) for n in B.names}
    Dsum = {n: v for n, v in Dsum.items() if v.terms}
    if ell >= 2:
        eps = koszul_sign(ell) * factorial(ell)
        first = list(range(1, ell - 1))
        alpha = (_dt_product(X, first + [ell, ell + 1]) + _dt_product(X, first + [ell - 1, ell + 1])).scale(eps)
        beta = (_dt_product(X, first + [ell - 1, ell + 1]) + _dt_product(X, list(range(1, ell + 1)))).scale(eps)
        faces = {i: P for i in range(ell + 2)}
        faces[ell - 1] = xi_ell(P, D, ell)
        faces[ell + 1] = xi_ell(P, Dp, ell)
        faces[ell] = xi_ell(P, Dsum, ell)
    elif ell == 1:
        outside = set(outside or ())
        for n in B.names:
            if n not in outside and n in Dp and Dp[n].terms:
                raise PreconditionError("second derivation must vanish off the split generators")
            if n in outside and set(B.dmap[n].variables()) & outside:
                raise PreconditionError("split generators need differentials in the subalgebra")
        alpha = X.dt(2)
        beta = X.dt(1) + X.dt(2)
        faces = {0: xi_ell(P, D, 1), 1: xi_ell(P, Dsum, 1), 2: xi_ell(P, Dp, 1)}
    else:
        raise PreconditionError("l must be >= 1")
    imgs = {}
    for n in B.names:
        v = X.lift(P.images[n])
        if n in D and D[n].terms:
            v = v + alpha * X.lift(D[n])
        if n in Dp and Dp[n].terms:
            v = v + beta * X.lift(Dp[n])
        imgs[n] = v
    return DGAMorphism(B, X, imgs), faces


def check_faces(Phi, faces):
    """Compare every face of Phi with the expected morphisms (P means constant)."""
    from .dga import compose
    X = Phi.target
    report = {}
    for i, want in faces.items():
        got = compose(face_map(X, i), Phi)
        if want.target.ring != got.target.ring:
            # constant morphism P, compared after lifting
            T = got.target
            ok = all(got.images[n] == T.lift(want.images[n]) for n in got.source.names)
        else:
            ok = _same(got, want)
        report[i] = ok
    return report


def boundary_witness(P, D, ell, outside):
    """Extend xi_l(D) from B' to B = B'[outside] using tau_l.

    D is a degree -l cocycle on B' (generators not in ``outside``).  Returns
    (h', delta_D) where h'(x) = P(x) + (-1)^{l(l-1)/2} tau_l D(dx) on the
    outside generators and delta_D(x) = (-1)^{l-1} D(dx) is the boundary
    derivation of degree 1 - l, which vanishes on B'.
    """
    A, B = P.target, P.source
    outside = list(outside)
    for n in outside:
        if set(B.dmap[n].variables()) & set(outside):
            raise PreconditionError(f"d({n}) must lie in the subalgebra")
    X = simplex_algebra(A, ell)
    w = normalized_omega(X)
    t = tau(X).scale(koszul_sign(ell))
    imgs = {}
    delta = {}
    for n in B.names:
        v = X.lift(P.images[n])
        if n in outside:
            val = der_apply(P, D, B.dmap[n])
            if val.terms:
                v = v + t * X.lift(val)
                delta[n] = val if (ell - 1) % 2 == 0 else -val
        elif n in D and D[n].terms:
            v = v + w * X.lift(D[n])
        imgs[n] = v
    return DGAMorphism(B, X, imgs), delta


def xi_P(P, D, x, mode=None):
    """The obstruction D(dx) of a degree -1 cocycle D on B' against extending over x.

    Returns (value, coordinates in a cohomology basis of A or None if A's
    piece cannot be computed exactly).
    """
    val = der_apply(P, D, P.source.dmap[x])
    coords = None
    if val.terms:
        coords = _class_coordinates(P.target, val, mode)
    return val, coords


def _class_coordinates(A, z, mode=None):
    n = z.degree()
    cx, bases = algebra_complex(A, n - 1, n + 1, mode or Exact())
    idx = {m: k for k, m in enumerate(bases[n])}
    return cx.class_coordinates(n, vectorize(z, idx))


def extension_obstruction(h, B, x, mode=None):
    """Can h: B' -> A extend over the generator x of B = B'[x]?

    The obstruction is the class of h(dx).  Returns (obstruction value,
    extension or None).
    """
    Bp = h.source
    if set(Bp.names) | {x} != set(B.names):
        raise PreconditionError("B must be B' with the single extra generator x")
    dx = B.dmap[x]
    dxp = Bp.ring.coerce(_drop(dx, Bp.ring))
    val = h.apply(dxp)
    a = is_coboundary(h.target, val, mode or Exact()) if val.terms else h.target.zero()
    if a is None:
        return val, None
    imgs = dict(h.images)
    imgs[x] = a
    return val, DGAMorphism(B, h.target, imgs)


def _drop(p, ring):
    idx = [p.ring.index[n] for n in ring.names]
    out = {}
    for m, c in p.terms.items():
        if any(e for i, e in enumerate(m) if e and i not in idx):
            raise PreconditionError("differential leaves the subalgebra")
        out[tuple(m[i] for i in idx)] = c
    return Poly(ring, out)


def der_transport(theta, D, ell, base=(), cap=4, rounds=3):
    """Transport a derivation class along a homotopy theta: B -> A (x) Omega_1.

    With f = theta at s = 1 and g = theta at s = 0, finds a cocycle D~ of
    degree -l along theta and E along f with D~(s=1) = D + dE, and returns
    D~(s=0), a cocycle along g representing the transported class.  The
    search is over coefficients of total exponent <= cap (doubling up to
    ``rounds`` times); ResourceError is raised if no lift is found.
    """
    Y = theta.target
    B = theta.source
    A = Y.base
    from .dga import compose
    f = compose(face_map(Y, 0, Y.prefix), theta)
    g = compose(face_map(Y, 1, Y.prefix), theta)
    free = [n for n in B.names if n not in base]
    caps = list(range(1, cap + 1))
    c = cap
    for _ in range(rounds - 1):
        c *= 2
        caps.append(c)
    for c in caps:
        unknowns = []
        for n in free:
            for m in monomials(Y.ring, degree=B.ring.degree_of(n) - ell, max_total=c):
                unknowns.append(("lift", n, m))
        for n in free:
            for m in monomials(A.ring, degree=B.ring.degree_of(n) - ell - 1, max_total=c):
                unknowns.append(("E", n, m))
        if not unknowns:
            continue
        cols = []
        rhs_index = {}

        def key(tag, n, m):
            k = (tag, n, m)
            if k not in rhs_index:
                rhs_index[k] = len(rhs_index)
            return rhs_index[k]

        for kind, n, m in unknowns:
            col = {}
            if kind == "lift":
                Dt = {n: Y.ring.monomial(m)}
                for x, v in der_differential(theta, Dt, -ell, base).items():
                    for mm, cc in v.terms.items():
                        col[key("cocycle", x, mm)] = cc
                v = face_map(Y, 0, Y.prefix).apply(Dt[n])
                for mm, cc in v.terms.items():
                    col[key("face", n, mm)] = col.get(key("face", n, mm), 0) + cc
            else:
                E = {n: A.ring.monomial(m)}
                for x, v in der_differential(f, E, -ell - 1, base).items():
                    for mm, cc in v.terms.items():
                        k = key("face", x, mm)
                        col[k] = col.get(k, 0) - cc
            cols.append({k: v for k, v in col.items() if v})
        rhs = {}
        for x, v in D.items():
            for mm, cc in v.terms.items():
                rhs[key("face", x, mm)] = cc
        M = Matrix.from_columns(len(rhs_index), cols)
        sol = M.solve(rhs)
        if sol.ok:
            lift = {}
            for k, v in sol.vector.items():
                kind, n, m = unknowns[k]
                if kind == "lift":
                    lift[n] = lift.get(n, Y.zero()) + Y.ring.monomial(m, v)
            out = {}
            for n, v in lift.items():
                w = face_map(Y, 1, Y.prefix).apply(v)
                if w.terms:
                    out[n] = w
            return out, {"cap": c, "f": f, "g": g, "lift": lift}
    raise ResourceError(f"no lift of the derivation found up to cap {caps[-1]}")


def transport_matrix(theta, ell, base=(), mode=None, cap=4):
    """Matrix of the transport map on h^{-l} of derivations, in cohomology bases."""
    from .dga import compose
    Y = theta.target
    f = compose(face_map(Y, 0, Y.prefix), theta)
    g = compose(face_map(Y, 1, Y.prefix), theta)
    DCf = DerComplex(f, base, mode)
    DCg = DerComplex(g, base, mode)
    cxf = DCf.complex(-ell - 1, -ell + 1)
    cxg = DCg.complex(-ell - 1, -ell + 1)
    reps_f = cxf.representatives(-ell)
    reps_g = cxg.representatives(-ell)
    cols = []
    for v in reps_f:
        D = DCf.from_vector(-ell, v)
        out, _ = der_transport(theta, D, ell, base, cap)
        coords = cxg.class_coordinates(-ell, DCg.to_vector(-ell, out), reps_g)
        cols.append(coords)
    return cols, len(reps_f), len(reps_g)
