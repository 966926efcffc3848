import random
from fractions import Fraction

import pytest
import sympy

from dgres.dga import DGAMorphism, ResolvingAlgebra, localize
from dgres.errors import ResourceError
from dgres.groebner import Ideal, groebner_basis, h0_map_is_iso, h0_presentation, is_unit_mod
from dgres.poly import GradedRing

RING = GradedRing([("x", 0), ("y", 0), ("z", 0)])
SYMS = sympy.symbols("x y z")


def _monic_set(polys, order):
    out = set()
    for p in polys:
        p = sympy.Poly(p, *SYMS, domain="QQ")
        p = p.quo_ground(p.LC(order=order))
        out.add(tuple(sorted((m, Fraction(int(c.p), int(c.q))) for m, c in p.terms())))
    return out


def _ours(ideal):
    out = set()
    for g in ideal.groebner():
        out.add(tuple(sorted(g.terms.items())))
    return out


@pytest.mark.parametrize("order", ["grevlex", "lex"])
def test_reduced_basis_matches_sympy(order):
    rng = random.Random(51 if order == "lex" else 52)
    for _ in range(40):
        gens = [RING.random_element(rng, 0, max_terms=3, max_exp=2) for _ in range(rng.randint(1, 3))]
        gens = [g for g in gens if g.terms]
        if not gens:
            continue
        ours = _ours(Ideal(RING, gens, order=order))
        theirs = sympy.groebner([sympy.sympify(str(g)) for g in gens], *SYMS, order=order, domain="QQ")
        if list(theirs.exprs) == [1]:
            assert ours == {(((0, 0, 0), Fraction(1)),)}
        else:
            assert ours == _monic_set(theirs.exprs, order)


def test_membership_and_quotient_dimension():
    ring = GradedRing([("x", 0), ("y", 0)])
    I = Ideal(ring, ["x^2 + y^2 - 1", "x - y"])
    assert I.quotient_dim() == 2
    assert I.contains(ring.parse("2*y^2 - 1"))
    assert not I.contains(ring.parse("y"))
    assert Ideal(ring, ["x"]).quotient_dim() is None


def test_units():
    ring = GradedRing([("x", 0)])
    ok, inv = is_unit_mod(ring.parse("1 + x"), Ideal(ring, ["x^2"]))
    assert ok and inv == ring.parse("1 - x")
    assert is_unit_mod(ring.parse("x"), Ideal(ring, ["x^2"]))[0] is False
    ring2 = GradedRing([("x", 0), ("y", 0)])
    ok, inv = is_unit_mod(ring2.parse("x"), Ideal(ring2, ["x*y - 1"]))
    assert ok and inv == ring2.parse("y")


def test_unit_random_against_inverse_check():
    rng = random.Random(53)
    ring = GradedRing([("x", 0), ("y", 0)])
    for _ in range(60):
        I = Ideal(ring, [ring.random_element(rng, 0, max_exp=2) for _ in range(2)])
        g = ring.random_element(rng, 0, max_exp=2)
        ok, inv = is_unit_mod(g, I)
        whole = Ideal(ring, I.gens + [g]).is_whole_ring()
        assert ok == whole
        if ok:
            assert I.contains(g * inv - 1)


def test_pair_budget():
    ring = GradedRing([("x", 0), ("y", 0), ("z", 0)])
    gens = [ring.parse(s).terms for s in ["x^3 - y*z + 1", "y^3 - x*z", "z^3 - x*y - 2"]]
    from dgres.groebner import MonomialOrder
    with pytest.raises(ResourceError):
        groebner_basis(gens, MonomialOrder("lex", 3), max_pairs=2)


def test_h0_presentation_and_isomorphism():
    curve = ResolvingAlgebra([("x", 0), ("y", 0), ("xi", -1)], {"xi": "y^2 - 4*x^3 + 4*x"})
    I = h0_presentation(curve)
    assert [str(g) for g in I.gens] == ["-4*x^3 + y^2 + 4*x"]
    line = ResolvingAlgebra([("x", 0)])
    L, inc = localize(line, "x")
    assert h0_map_is_iso(inc) == {"surjective": False, "injective": True, "iso": False}
    # k[x] -> k[x, y]{eta: d eta = y - x^2} is an isomorphism on h0
    graph = ResolvingAlgebra([("x", 0), ("y", 0), ("eta", -1)], {"eta": "y - x^2"})
    f = DGAMorphism(line, graph, {"x": "x"})
    assert h0_map_is_iso(f)["iso"]
    sq = DGAMorphism(line, line, {"x": "x^2"})
    assert h0_map_is_iso(sq) == {"surjective": False, "injective": True, "iso": False}
