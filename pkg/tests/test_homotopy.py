from fractions import Fraction

import pytest

from dgres.dga import DGAMorphism, ResolvingAlgebra, lambda_algebra
from dgres.dgmod import der_cohomology
from dgres.errors import PreconditionError
from dgres.forms import normalized_class, simplex_algebra
from dgres.homotopy import (boundary_witness, check_faces, concat_witness, constant_homotopy,
                            der_differential, der_transport, extension_obstruction, homotopy_check,
                            is_derivation_cocycle, transport_matrix, well_defined_homotopy, xi_ell, xi_P)
from dgres.poly import substitute

B1 = ResolvingAlgebra([("x", -2)])
FREE = ResolvingAlgebra([("u", -2), ("v", -3)])
P_FREE = DGAMorphism(B1, FREE, {"x": "u"})


def test_xi_one_on_odd_generators():
    B = ResolvingAlgebra([("x", -1)])
    A = ResolvingAlgebra([("u", -1), ("v", -1)])
    P = DGAMorphism(B, A, {"x": "0"})
    h = xi_ell(P, {"x": A.parse("u*v")}, 1)
    assert str(h.images["x"]) == "u*v*dt1"
    assert h.validate().ok
    assert all(check_faces(h, {0: P, 1: P}).values())


def test_xi_differs_from_constant_by_normalized_volume_class():
    for ell in (1, 2, 3):
        dim, reps, _ = der_cohomology(P_FREE, -ell)
        assert dim == 1
        D = reps[0]
        h = xi_ell(P_FREE, D, ell)
        X = h.target
        assert h.validate().ok
        assert h.images["x"] - X.lift(P_FREE.images["x"]) == normalized_class(D["x"], X)
        assert all(check_faces(h, {i: P_FREE for i in range(ell + 1)}).values())


def test_well_defined_up_to_coboundaries():
    A = ResolvingAlgebra([("u", -2), ("v", -3), ("w", -4)], {"w": "v"})
    P = DGAMorphism(B1, A, {"x": "u"})
    D = {"x": A.parse("v")}
    E = {"x": A.parse("w")}
    assert is_derivation_cocycle(P, D, -1)
    Phi, Dp = well_defined_homotopy(P, D, E, 1)
    assert str(Dp["x"]) == "2*v"
    assert homotopy_check(Phi, xi_ell(P, Dp, 1), xi_ell(P, D, 1))
    assert not homotopy_check(Phi, xi_ell(P, D, 1), xi_ell(P, Dp, 1))


def test_group_law_two_simplex():
    B = ResolvingAlgebra([("x", -2), ("y", -3)])
    P = DGAMorphism(B, FREE, {"x": "u", "y": "v"})
    D = {"x": FREE.parse("u^2"), "y": FREE.parse("u*v")}
    Dp = {"x": FREE.parse("2*u^2")}
    for ell_D in (D, {"x": FREE.parse("u^2")}):
        Phi, faces = concat_witness(P, ell_D, Dp, 2)
        assert Phi.validate().ok
        assert all(check_faces(Phi, faces).values())


def test_group_law_one_simplex_with_split():
    B = ResolvingAlgebra([("c", -1), ("x", -2)], {"x": "0"})
    A = ResolvingAlgebra([("u", -2), ("v", -3)])
    P = DGAMorphism(B, A, {"c": "0", "x": "u"})
    D = {"x": A.parse("v")}
    Dp = {"x": A.parse("-v")}
    Phi, faces = concat_witness(P, D, Dp, 1, outside={"x"})
    assert Phi.validate().ok and all(check_faces(Phi, faces).values())
    with pytest.raises(PreconditionError):
        concat_witness(P, D, Dp, 1, outside=set())


def test_boundary_witness():
    for ell in (1, 2, 3):
        B = ResolvingAlgebra([("u", -1), ("x", -2)], {"x": "u"})
        A = ResolvingAlgebra([("a", -1 - ell)])
        P = DGAMorphism(B, A, {"u": "0", "x": "0"})
        D = {"u": A.parse("a")}
        h, delta = boundary_witness(P, D, ell, ["x"])
        assert h.validate().ok
        assert delta == {"x": A.parse("a") if ell % 2 else -A.parse("a")}
        faces = {i: P for i in range(1, ell + 1)}
        faces[0] = xi_ell(P, delta, ell - 1)
        assert all(check_faces(h, faces).values())


def test_obstruction_classes():
    Bp = ResolvingAlgebra([("y", 0)])
    B = ResolvingAlgebra([("y", 0), ("xi", -1)], {"xi": "y"})
    k = ResolvingAlgebra([])
    val, ext = extension_obstruction(DGAMorphism(Bp, k, {"y": 3}), B, "xi")
    assert str(val) == "3" and ext is None
    val, ext = extension_obstruction(DGAMorphism(Bp, k, {"y": 0}), B, "xi")
    assert ext is not None and ext.validate().ok
    L = lambda_algebra(2)
    Bx = ResolvingAlgebra([("x", -2)])
    Bbig = ResolvingAlgebra([("x", -2), ("z", -5)], {"z": "x^2"})
    val, ext = extension_obstruction(DGAMorphism(Bx, L, {"x": "x"}), Bbig, "z")
    assert str(val) == "x^2" and str(ext.images["z"]) == "xi" and ext.validate().ok


def test_xi_P_class():
    A = ResolvingAlgebra([("u", -1), ("v", -1)])
    B2 = ResolvingAlgebra([("y", -1), ("y2", -1), ("x", -3)], {"x": "y*y2"})
    P = DGAMorphism(B2, A, {"y": "u", "y2": "0", "x": "0"})
    val, coords = xi_P(P, {"y2": A.parse("v")}, "x")
    assert str(val) == "u*v"
    assert coords in ([Fraction(1)], [Fraction(-1)])


def _nontrivial_homotopy():
    A = ResolvingAlgebra([("u", -2), ("p", -3), ("xa", -5), ("q", -6), ("v", -3), ("w", -2)],
                         {"xa": "u^2", "q": "-2*u*p", "v": "w"})
    B = lambda_algebra(2)
    P = DGAMorphism(B, A, {"x": "u", "xi": "xa"})
    Q = DGAMorphism(B, A, {"x": "u + w", "xi": "xa + 2*u*v + w*v"})
    Y = simplex_algebra(A, 1, "s")
    s, ds = Y.t(1), Y.dt(1)
    theta = DGAMorphism(B, Y, {
        "x": Y.lift(A.parse("u")) + s * Y.lift(A.parse("w")) + ds * Y.lift(A.parse("v")),
        "xi": Y.lift(A.parse("xa")) + s * s * Y.lift(A.parse("v*w")) + s * Y.lift(A.parse("2*u*v")),
    })
    return A, B, P, Q, Y, theta


def test_transport_along_a_homotopy():
    A, B, P, Q, Y, theta = _nontrivial_homotopy()
    assert homotopy_check(theta, Q, P)
    dim, reps, _ = der_cohomology(Q, -1)
    assert dim == 1
    out, info = der_transport(theta, reps[0], 1)
    assert is_derivation_cocycle(P, out, -1)
    cols, nf, ng = transport_matrix(theta, 1)
    assert nf == ng == 1 and cols[0][0] != 0


def test_transport_is_independent_of_the_homotopy():
    A, B, P, Q, Y, theta = _nontrivial_homotopy()
    s, ds = Y.t(1), Y.dt(1)
    square = {n: Y.gen(n) for n in Y.names}
    square["s1"] = s * s
    square["ds1"] = (s * ds).scale(2)
    theta2 = DGAMorphism(B, Y, {n: substitute(v, square, Y.ring) for n, v in theta.images.items()})
    assert homotopy_check(theta2, Q, P)
    assert transport_matrix(theta, 1)[0] == transport_matrix(theta2, 1)[0]


def test_constant_homotopy_transports_identically():
    theta = constant_homotopy(P_FREE)
    for ell in (1, 2):
        cols, nf, ng = transport_matrix(theta, ell)
        assert cols == [[Fraction(1)]]


def test_derivation_differential_sign():
    A = ResolvingAlgebra([("u", -2), ("v", -3), ("w", -4)], {"w": "v"})
    P = DGAMorphism(B1, A, {"x": "u"})
    assert der_differential(P, {"x": A.parse("w")}, -2) == {"x": A.parse("v")}
