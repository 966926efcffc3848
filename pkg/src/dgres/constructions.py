"""Explicit resolutions: the diagonal, morphisms, and derived tensor products."""

from .dga import DGAMorphism, FreeDGA, ResolvingAlgebra, subalgebra
from .errors import PreconditionError, ResourceError
from .graded import monomials, vectorize
from .linalg import Matrix
from .poly import GradedRing, Poly, substitute


class SolveResult:
    def __init__(self, solution, cap, attempts):
        self.solution = solution
        self.cap = cap
        self.attempts = attempts

    @property
    def ok(self):
        return self.solution is not None

    def __repr__(self):
        return f"SolveResult(ok={self.ok}, cap={self.cap}, solution={self.solution})"


def bounded_d_solve(A, target, cap=8, rounds=3):
    """Find g with d(g) = target among monomials of total exponent <= cap.

    Caps are tried in increasing order starting from 0, so the returned
    primitive uses the smallest cap that works; within a cap the solution
    is the one produced by elimination with free variables set to zero.
    After ``cap`` the bound doubles up to ``rounds`` times.
    """
    if not target.terms:
        return SolveResult(A.zero(), 0, [0])
    deg = target.degree()
    caps = list(range(0, cap + 1))
    c = cap
    for _ in range(rounds - 1):
        c *= 2
        caps.append(c)
    attempts = []
    for c in caps:
        attempts.append(c)
        basis = monomials(A.ring, degree=deg - 1, max_total=c)
        if not basis:
            continue
        index = {}
        images = []
        for m in basis:
            dm = A.d(A.ring.monomial(m))
            for k in dm.terms:
                index.setdefault(k, len(index))
            images.append(dm)
        for k in target.terms:
            index.setdefault(k, len(index))
        cols = [vectorize(p, index) for p in images]
        M = Matrix.from_columns(len(index), cols)
        sol = M.solve(vectorize(target, index))
        if sol.ok:
            g = Poly(A.ring, {basis[k]: v for k, v in sol.vector.items() if v})
            return SolveResult(g, c, attempts)
    return SolveResult(None, None, attempts)


def _resolution_order(A):
    """Generators sorted by non-increasing degree (stable)."""
    return sorted(A.names, key=lambda n: -A.ring.degree_of(n))


class DiagonalResolution:
    """A (x) A[cells] resolving the multiplication map A (x) A -> A.

    Attributes: ``algebra`` (the resolution), ``left`` and ``right``
    (inclusions of A as the two tensor factors), ``mult`` (the map to A),
    ``cells`` (A-generator -> cell name) and ``witness`` (per generator:
    the correction term h, the primitive g with d(g) = mult(h), caps used).
    """

    def __init__(self, A, algebra, left, right, mult, names, witness):
        self.A = A
        self.algebra = algebra
        self.left = left
        self.right = right
        self.mult = mult
        self.names = names  # A-generator -> (left name, right name, cell name)
        self.witness = witness


def diagonal_resolution(A, cap=8, rounds=3, prefixes=("y_", "z_", "c_")):
    py, pz, pc = prefixes
    order = _resolution_order(A)
    names = {n: (py + n, pz + n, pc + n) for n in A.names}
    gens = [(names[n][0], A.ring.degree_of(n)) for n in A.names]
    gens += [(names[n][1], A.ring.degree_of(n)) for n in A.names]
    gens += [(names[n][2], A.ring.degree_of(n) - 1) for n in order]
    ring = GradedRing(gens)
    ysub = {n: ring.gen(names[n][0]) for n in A.names}
    zsub = {n: ring.gen(names[n][1]) for n in A.names}
    diff = {}
    for n in A.names:
        f = A.dmap[n]
        diff[names[n][0]] = substitute(f, ysub, ring) if f.terms else ring.zero()
        diff[names[n][1]] = substitute(f, zsub, ring) if f.terms else ring.zero()
    mult_img = {}
    for n in A.names:
        mult_img[names[n][0]] = A.gen(n)
        mult_img[names[n][1]] = A.gen(n)
    witness = {}
    done = []
    for n in order:
        y, z, c = names[n]
        allowed = [names[m][0] for m in done] + [names[m][1] for m in done] + [names[m][2] for m in done]
        partial = FreeDGA(ring, {k: v for k, v in diff.items()})
        S, inc = subalgebra(partial, allowed)
        target = S.ring.coerce(_restrict(diff[y] - diff[z], S.ring))
        res = bounded_d_solve(S, target, cap, rounds)
        if not res.ok:
            raise ResourceError(
                f"no primitive for f({n}) at the left minus the right copy up to cap {res.attempts[-1]}")
        h = ring.coerce(res.solution)
        # d(mult(h)) = 0, so mult(h) needs a primitive g in A
        sub_a_names = [m for m in done]
        Asub, _ = subalgebra(A, sub_a_names)
        mh = _mult(h, mult_img, A)
        g_res = bounded_d_solve(Asub, Asub.ring.coerce(_restrict(mh, Asub.ring)), cap, rounds) \
            if mh.terms else None
        corrected = False
        if mh.terms and not g_res.ok:
            # subtract the left-copy image of mult(h), a cocycle with the same image
            h = h - substitute(mh, ysub, ring)
            corrected = True
            g = A.zero()
        elif mh.terms:
            g = A.ring.coerce(g_res.solution)
        else:
            g = A.zero()
        diff[c] = ring.gen(z) - ring.gen(y) + h
        mult_img[c] = g
        witness[n] = {"h": h, "g": g, "cap": res.cap,
                      "g_cap": g_res.cap if g_res else 0, "corrected": corrected}
        done.append(n)
    R = ResolvingAlgebra(ring, diff, name=f"diag({A.name or 'A'})")
    left = DGAMorphism(A, R, {n: R.gen(names[n][0]) for n in A.names})
    right = DGAMorphism(A, R, {n: R.gen(names[n][1]) for n in A.names})
    mult = DGAMorphism(R, A, mult_img)
    return DiagonalResolution(A, R, left, right, mult, names, witness)


def _restrict(p, ring):
    idx = [p.ring.index[n] for n in ring.names]
    out = {}
    for m, c in p.terms.items():
        if any(e for i, e in enumerate(m) if e and i not in idx):
            raise PreconditionError("element uses generators outside the subalgebra")
        out[tuple(m[i] for i in idx)] = c
    return Poly(ring, out)


def _mult(h, mult_img, A):
    return substitute(h, {k: v for k, v in mult_img.items() if k in h.ring.index}, A.ring) \
        if h.terms else A.zero()


def _fresh(name, taken):
    while name in taken:
        name += "'"
    taken.add(name)
    return name


def _glue(diag, f, g, name=None):
    """B (x) C[cells] for f: A -> B and g: A -> C, transporting the diagonal cells.

    Returns (R, B -> R, C -> R, C-renaming, cell-renaming).
    """
    A = diag.A
    B, C = f.target, g.target
    taken = set(B.names)
    cren = {n: _fresh(n, taken) for n in C.names}
    cellren = {n: _fresh(diag.names[n][2], taken) for n in _resolution_order(A)}
    gens = list(B.ring.gens_spec) + [(cren[n], d) for n, d in C.ring.gens_spec]
    gens += [(cellren[n], A.ring.degree_of(n) - 1) for n in _resolution_order(A)]
    ring = GradedRing(gens)
    bsub = {n: ring.gen(n) for n in B.names}
    csub = {n: ring.gen(cren[n]) for n in C.names}
    diff = {}
    for n in B.names:
        diff[n] = substitute(B.dmap[n], bsub, ring) if B.dmap[n].terms else ring.zero()
    for n in C.names:
        diff[cren[n]] = substitute(C.dmap[n], csub, ring) if C.dmap[n].terms else ring.zero()
    transport = {}
    for n in A.names:
        y, z, c = diag.names[n]
        fx = f.images[n]
        gx = g.images[n]
        transport[y] = substitute(fx, bsub, ring) if fx.terms else ring.zero()
        transport[z] = substitute(gx, csub, ring) if gx.terms else ring.zero()
        transport[c] = ring.gen(cellren[n])
    for n in _resolution_order(A):
        _, _, c = diag.names[n]
        dv = diag.algebra.dmap[c]
        diff[cellren[n]] = substitute(dv, transport, ring)
    R = ResolvingAlgebra(ring, diff, name=name)
    to_b = DGAMorphism(B, R, {n: R.gen(n) for n in B.names})
    to_c = DGAMorphism(C, R, {n: R.gen(cren[n]) for n in C.names})
    return R, to_b, to_c, cren, cellren, transport


def derived_tensor(f, g, diag=None, cap=8, name=None):
    """Derived tensor product of f: A -> B and g: A -> C.

    R = B (x) C[cells] with d(cell_i) = g(x_i) - f(x_i) + h_i(f, g, cells).
    Returns (R, B -> R, C -> R).
    """
    if f.source.ring != g.source.ring:
        raise PreconditionError("morphisms must share a source")
    diag = diag or diagonal_resolution(f.source, cap)
    R, to_b, to_c, _, _, _ = _glue(diag, f, g, name=name)
    return R, to_b, to_c


def resolve_morphism(f, diag=None, cap=8, name=None):
    """Factor f: A -> B as A -> B' -> B with B' quasi-free over A and B' -> B a quasi-isomorphism.

    Returns (B', A -> B', B' -> B).
    """
    from .dga import identity
    A, B = f.source, f.target
    diag = diag or diagonal_resolution(A, cap)
    R, to_b, to_a, aren, cellren, _ = _glue(diag, f, identity(A), name=name)
    images = {n: B.gen(n) for n in B.names}
    for n in A.names:
        images[aren[n]] = f.images[n]
    for n in A.names:
        gw = diag.witness[n]["g"]
        images[cellren[n]] = f.apply(gw) if gw.terms else B.zero()
    back = DGAMorphism(R, B, images)
    return R, to_a, back
