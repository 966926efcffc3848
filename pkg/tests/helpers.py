"""Shared fixture builders for the test suite."""

from fractions import Fraction

from dgres.dga import ResolvingAlgebra
from dgres.poly import GradedRing

ELLIPTIC = "y^2 - 4*x^3 + 4*x"
ALPHA = "x^2 - x - 1"
BETA = "y - (x^2 + x - 1)"
GAMMA = "y + (x^2 + x - 1)"
DELTA = "-(x^2 - x - 1)"


def elliptic_resolution(level):
    """k[x, y]{xi} with d(xi) = f, plus the matrix-factorization tail up to degree -level."""
    gens = [("x", 0), ("y", 0), ("xi", -1)]
    for i in range(1, level + 1):
        gens += [(f"theta{i}", -i), (f"eta{i}", -i)]
    diff = {"xi": ELLIPTIC}
    for i in range(1, level):
        prev = f" - xi*theta{i - 1}" if i > 1 else ""
        prev_e = f" - xi*eta{i - 1}" if i > 1 else ""
        diff[f"theta{i + 1}"] = f"({ALPHA})*theta{i} + ({GAMMA})*eta{i}{prev}"
        diff[f"eta{i + 1}"] = f"({BETA})*theta{i} + ({DELTA})*eta{i}{prev_e}"
    return ResolvingAlgebra(gens, diff, name=f"Elliptic{level}")


def _small_fraction(rng):
    return rng.choice([0, 0, 1, -1, 2, Fraction(1, 2), -3])


def random_degree_zero_poly(rng, ring, names, max_exp=2, terms=3):
    p = ring.zero()
    for _ in range(rng.randint(1, terms)):
        m = ring.one().scale(rng.randint(-3, 3) or 1)
        for n in names:
            e = rng.randint(0, max_exp)
            if e:
                m = m * ring.gen(n) ** e
        p = p + m
    return p


def random_resolving_algebra(rng, max_zero=2, max_cells=2, allow_second=True):
    """A small valid resolving algebra together with a point on it.

    Cells of degree -1 get differentials vanishing at the point; an optional
    degree -2 cell kills a multiple of a Koszul relation.  Returns (A, values).
    """
    nz = rng.randint(1, max_zero)
    zero = [f"x{i}" for i in range(1, nz + 1)]
    point = {x: _small_fraction(rng) for x in zero}
    nc = rng.randint(0, max_cells)
    cells = [f"e{j}" for j in range(1, nc + 1)]
    gens = [(x, 0) for x in zero] + [(c, -1) for c in cells]
    second = allow_second and nc >= 2 and rng.random() < 0.5
    if second:
        gens.append(("s", -2))
    ring = GradedRing(gens)
    diff = {}
    sections = []
    for c in cells:
        f = random_degree_zero_poly(rng, ring, zero)
        f = f - ring.const(_evaluate(f, point))
        sections.append(f)
        diff[c] = f
    if second:
        p = random_degree_zero_poly(rng, ring, zero, max_exp=1, terms=2)
        rel = sections[1] * ring.gen(cells[0]) - sections[0] * ring.gen(cells[1])
        diff["s"] = p * rel
    return ResolvingAlgebra(ring, diff, name="R"), point


def _evaluate(p, point):
    total = Fraction(0)
    for m, c in p.terms.items():
        v = Fraction(c)
        for n, e in zip(p.ring.names, m):
            if e:
                v *= Fraction(point.get(n, 0)) ** e
        total += v
    return total


def random_element(rng, A, degree, max_total=2, terms=3):
    from dgres.graded import monomials
    monos = monomials(A.ring, degree=degree, max_total=max_total)
    p = A.zero()
    if not monos:
        return p
    for _ in range(rng.randint(1, terms)):
        p = p + A.ring.monomial(rng.choice(monos), rng.randint(-3, 3))
    return p
