import random

import pytest
import sympy

from dgres.dga import FreeDGA, ResolvingAlgebra, koszul, lambda_algebra
from dgres.errors import UnsupportedMode
from dgres.graded import (TruncatedAtOrder, WeightExact, algebra_complex, cohomology_basis,
                          cohomology_dims, is_coboundary, monomials)
from dgres.poly import GradedRing


def test_monomials_enumeration():
    ring = GradedRing([("x", -2), ("xi", -1), ("eta", -1)])
    got = monomials(ring, degree=-4)
    assert sorted(got) == sorted([(2, 0, 0), (1, 1, 1)])
    with pytest.raises(UnsupportedMode):
        monomials(GradedRing([("t", 0)]), degree=0)
    assert len(monomials(GradedRing([("t", 0), ("s", 0)]), degree=0, max_total=2)) == 6


def test_exact_mode_requires_negative_generators():
    A = ResolvingAlgebra([("x", 0)])
    with pytest.raises(UnsupportedMode):
        cohomology_dims(A, -1, 0)


def test_free_algebra_on_odd_generator():
    A = ResolvingAlgebra([("x", -3)])
    assert cohomology_dims(A, -7, 0) == {-7: 0, -6: 0, -5: 0, -4: 0, -3: 1, -2: 0, -1: 0, 0: 1}


def test_truncated_mode_by_hand():
    # basis of A/m^3: 1, x, x^2 | xi, x*xi; d(xi) = x^2 and d(x*xi) = x^3 = 0
    A = ResolvingAlgebra([("x", 0), ("xi", -1)], {"xi": "x^2"})
    assert cohomology_dims(A, -2, 0, TruncatedAtOrder(3)) == {-2: 0, -1: 1, 0: 2}


def euler_series(n, weights, max_weight):
    t = sympy.symbols("t")
    expr = sympy.Integer(1)
    for w in weights:
        expr *= (1 - t ** w)
    expr /= (1 - t) ** n
    ser = sympy.series(expr, t, 0, max_weight + 1).removeO()
    return [ser.coeff(t, k) for k in range(max_weight + 1)]


def test_koszul_euler_characteristic_matches_generating_function():
    rng = random.Random(31)
    for _ in range(40):
        n = rng.randint(1, 3)
        secs = []
        for _ in range(rng.randint(1, 3)):
            w = rng.randint(1, 2)
            monos = [m for m in monomials(GradedRing([(f"x{i}", 0) for i in range(1, n + 1)]),
                                          degree=0, max_total=w) if sum(m) == w]
            pick = rng.sample(monos, rng.randint(1, len(monos)))
            secs.append(" + ".join("*".join(f"x{i + 1}^{e}" for i, e in enumerate(m) if e) for m in pick))
        K = koszul(n, secs)
        ws = [K.weights[f"e{j}"] for j in range(1, len(secs) + 1)]
        expected = euler_series(n, ws, 4)
        for w in range(5):
            dims = cohomology_dims(K, -len(secs), 0, WeightExact(w))
            assert sum((-1) ** (-k) * v for k, v in dims.items()) == expected[w]


def test_regular_sequence_koszul_is_a_resolution():
    K = koszul(2, ["x1", "x2^2"])
    for w in range(6):
        dims = cohomology_dims(K, -2, 0, WeightExact(w))
        assert dims[-1] == dims[-2] == 0
        assert dims[0] == (1 if w <= 1 else 0)


def test_weight_mode_requires_homogeneity():
    A = FreeDGA([("x", 0), ("e", -1)], {"e": "x + x^2"}, weights={"x": 1, "e": 1})
    with pytest.raises(UnsupportedMode):
        cohomology_dims(A, -1, 0, WeightExact(1))


def test_cohomology_basis_and_coboundaries():
    L = lambda_algebra(2)
    basis = cohomology_basis(L, -2)
    assert len(basis) == 1 and str(basis[0]) == "x"
    x2 = L.parse("x^2")
    b = is_coboundary(L, x2)
    assert L.d(b) == x2
    assert is_coboundary(L, L.parse("x")) is None


def test_complex_squares_to_zero():
    A = koszul(3, ["x1*x2", "x2*x3", "x1*x3"])
    cx, _ = algebra_complex(A, -3, 0, WeightExact(4))
    assert cx.check_square_zero()
