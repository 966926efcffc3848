import random

import pytest

from dgres.constructions import (bounded_d_solve, derived_tensor, diagonal_resolution,
                                 resolve_morphism)
from dgres.criteria import AtPoints, is_qis
from dgres.dga import Augmentation, DGAMorphism, ResolvingAlgebra, compose, lambda_algebra, localize
from dgres.errors import ResourceError
from dgres.groebner import h0_map_is_iso, h0_presentation
from dgres.poly import substitute
from helpers import random_resolving_algebra

NODE = ResolvingAlgebra([("x", 0), ("xi", -1)], {"xi": "x^2"})


def test_bounded_solve_uses_smallest_cap():
    L = lambda_algebra(2)
    res = bounded_d_solve(L, L.parse("x^3"), cap=4)
    assert res.ok and res.cap == 2 and L.d(res.solution) == L.parse("x^3")
    miss = bounded_d_solve(L, L.parse("x"), cap=2, rounds=2)
    assert not miss.ok and miss.attempts == [0, 1, 2, 4]
    assert bounded_d_solve(L, L.zero()).solution == L.zero()


def _check_diagonal(A, diag):
    R = diag.algebra
    assert R.validate().ok
    for f in (diag.left, diag.right, diag.mult):
        assert f.validate().ok
    for side in (diag.left, diag.right):
        back = compose(diag.mult, side)
        assert all(back.images[n] == A.gen(n) for n in A.names)
    ysub = {n: R.gen(diag.names[n][0]) for n in A.names}
    zsub = {n: R.gen(diag.names[n][1]) for n in A.names}
    for n in A.names:
        f = A.dmap[n]
        if not f.terms:
            continue
        w = diag.witness[n]
        lhs = R.d(w["h"])
        rhs = substitute(f, ysub, R.ring) - substitute(f, zsub, R.ring)
        assert lhs == rhs


def test_diagonal_of_node():
    diag = diagonal_resolution(NODE, cap=4)
    _check_diagonal(NODE, diag)
    assert str(diag.witness["xi"]["h"]) == "-y_x*c_x - z_x*c_x"
    assert str(diag.algebra.dmap["c_xi"]) == "-y_x*c_x - z_x*c_x - y_xi + z_xi"
    assert h0_map_is_iso(diag.mult)["iso"]


def test_diagonal_of_lambda_algebras():
    for n in (1, 2, 3):
        A = lambda_algebra(n)
        _check_diagonal(A, diagonal_resolution(A, cap=4))


def test_diagonal_of_random_algebras():
    rng = random.Random(71)
    for _ in range(40):
        A, values = random_resolving_algebra(rng)
        diag = diagonal_resolution(A, cap=4)
        _check_diagonal(A, diag)
        assert is_qis(diag.mult, AtPoints([Augmentation(A, values)], 2)).holds


def test_diagonal_resource_error():
    with pytest.raises(ResourceError):
        diagonal_resolution(ResolvingAlgebra([("x", 0), ("xi", -1)], {"xi": "x^5"}), cap=1, rounds=1)


def test_resolve_morphism_to_a_point():
    line = ResolvingAlgebra([("x", 0)])
    ground = ResolvingAlgebra([])
    f = DGAMorphism(line, ground, {"x": "0"})
    Bp, inc, back = resolve_morphism(f, cap=4)
    assert Bp.validate().ok and inc.validate().ok and back.validate().ok
    assert [str(g) for g in h0_presentation(Bp).groebner()] == ["x"]
    assert h0_map_is_iso(back)["iso"]
    assert all(compose(back, inc).images[n] == f.images[n] for n in line.names)


def test_resolve_localization():
    line = ResolvingAlgebra([("x", 0)])
    L, inc = localize(line, "x")
    Bp, i2, back = resolve_morphism(inc, cap=4)
    assert back.validate().ok and h0_map_is_iso(back)["iso"]
    pt = Augmentation(L, {"x": 2, "y": "1/2"})
    assert is_qis(back, AtPoints([pt], 3)).holds


def test_derived_tensor_generator_count():
    pt = ResolvingAlgebra([("u", 0), ("e", -1)], {"e": "u"})
    dbl = ResolvingAlgebra([("v", 0), ("e", -1)], {"e": "v^2"})
    f = DGAMorphism(NODE, pt, {"x": "u", "xi": "u*e"})
    g = DGAMorphism(NODE, dbl, {"x": "v", "xi": "e"})
    R, to_b, to_c = derived_tensor(f, g, cap=4)
    assert len(R.names) == 6
    assert R.validate().ok and to_b.validate().ok and to_c.validate().ok
    assert list(R.names[:4]) == ["u", "e", "v", "e'"]
