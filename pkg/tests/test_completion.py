import random

from dgres.completion import (compare_at_level, graded_piece, madic_truncate, symmetric_power_dims)
from dgres.dga import Augmentation, DGAMorphism, ResolvingAlgebra, localize
from dgres.dgmod import fiber_at, kaehler
from helpers import random_resolving_algebra


def test_truncation_basis():
    A = ResolvingAlgebra([("x", 0), ("y", 0), ("e", -1)], {"e": "x*y - 1"})
    T = madic_truncate(A, Augmentation(A, {"x": 2, "y": "1/2"}), 3)
    assert {d: len(b) for d, b in T.bases.items()} == {0: 6, -1: 3}
    # d(e), d(a e), d(b e) are independent in shifted coordinates a, b
    assert T.cohomology_dims() == {-1: 0, 0: 3}


def test_squaring_map_fails_at_level_two():
    line = ResolvingAlgebra([("x", 0)])
    sq = DGAMorphism(line, line, {"x": "x^2"})
    pt = Augmentation(line, {})
    assert all(ok for _, _, ok in compare_at_level(sq, pt, 1).values())
    assert not all(ok for _, _, ok in compare_at_level(sq, pt, 2).values())


def test_localization_matches_at_every_level():
    line = ResolvingAlgebra([("x", 0)])
    L, inc = localize(line, "x")
    pt = Augmentation(L, {"x": 3, "y": "1/3"})
    for level in range(1, 5):
        assert all(ok for _, _, ok in compare_at_level(inc, pt, level).values())


def test_symmetric_powers_by_hand():
    assert symmetric_power_dims({0: 2}, 3) == {0: 4}
    assert symmetric_power_dims({-1: 2}, 2) == {-2: 1}
    assert symmetric_power_dims({-1: 2}, 3) == {}
    assert symmetric_power_dims({0: 1, -1: 1}, 2) == {0: 1, -1: 1}


def test_associated_graded_is_symmetric_algebra():
    rng = random.Random(41)
    for i in range(1000):
        A, values = random_resolving_algebra(rng)
        pt = Augmentation(A, values)
        n = 1 + i % 4
        gens = {}
        for _, d in A.ring.gens_spec:
            gens[d] = gens.get(d, 0) + 1
        piece = graded_piece(A, pt, n)
        assert piece.check_square_zero()
        assert {d: v for d, v in piece.dims.items() if v} == symmetric_power_dims(gens, n)
        linear = graded_piece(A, pt, 1)
        lin_h = {d: v for d, v in linear.cohomology_dims().items() if v}
        got = {d: v for d, v in piece.cohomology_dims().items() if v}
        assert got == symmetric_power_dims(lin_h, n)
        if n == 1:
            fib = fiber_at(kaehler(A)[0], pt)
            assert {d: v for d, v in fib.cohomology_dims().items() if v} == lin_h
