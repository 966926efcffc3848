import random

import pytest

from dgres.dga import lambda_algebra
from dgres.errors import PreconditionError
from dgres.forms import (extend_from_face, face, face_target, horn_fill, normalized_omega, omega,
                         radial_homotopy, random_horn_form, sigma, simplex_algebra, tau, vertex_swap)

BASE = lambda_algebra(2)


def random_form(rng, X, degree, max_total=3):
    return X.ring.random_element(rng, degree, max_exp=max_total)


def test_face_maps_commute_with_d():
    rng = random.Random(81)
    for ell in (1, 2, 3):
        X = simplex_algebra(BASE, ell)
        for _ in range(60):
            p = random_form(rng, X, rng.randint(-3, ell))
            for i in range(ell + 1):
                Y = face_target(X)
                assert face(X.d(p), X, i) == Y.d(face(p, X, i))


def test_simplicial_identities():
    rng = random.Random(82)
    for ell in (2, 3):
        X = simplex_algebra(BASE, ell)
        Y = face_target(X)
        for _ in range(30):
            p = random_form(rng, X, rng.randint(-2, ell))
            for j in range(ell + 1):
                for i in range(j):
                    assert face(face(p, X, j), Y, i) == face(face(p, X, i), Y, j - 1)


def test_form_identities():
    for ell in range(1, 5):
        X = simplex_algebra(BASE, ell)
        Y = face_target(X)
        t = tau(X)
        assert X.d(t) == omega(X)
        for i in range(1, ell + 1):
            assert not face(t, X, i).terms
        assert face(t, X, 0) == omega(Y) if ell > 1 else face(t, X, 0) == Y.one()
        s = sigma(X)
        assert X.d(s) == omega(X)
        for i in range(ell):
            assert not face(s, X, i).terms


def test_radial_homotopy_formula():
    rng = random.Random(83)
    for ell in (1, 2, 3):
        X = simplex_algebra(BASE, ell)
        origin = {n: X.zero() for n in X.tnames + X.dtnames}
        from dgres.poly import substitute
        for _ in range(100):
            p = random_form(rng, X, rng.randint(-3, ell))
            at_origin = substitute(p, {**{n: X.gen(n) for n in X.names}, **origin}, X.ring)
            lhs = X.d(radial_homotopy(p, X)) + radial_homotopy(X.d(p), X)
            assert lhs == p - at_origin


def test_vertex_swap_is_an_involution_commuting_with_d():
    rng = random.Random(84)
    X = simplex_algebra(BASE, 3)
    for _ in range(60):
        p = random_form(rng, X, rng.randint(-2, 3))
        k = rng.randint(1, 3)
        q = vertex_swap(p, X, k)
        assert vertex_swap(q, X, k) == p
        assert X.d(q) == vertex_swap(X.d(p), X, k)


def test_horn_fill_all_missing_faces():
    rng = random.Random(85)
    for ell in (2, 3):
        X = simplex_algebra(BASE, ell)
        for missing in range(ell + 1):
            for _ in range(10):
                eta = random_horn_form(rng, X, missing)
                theta = horn_fill(eta, X, missing)
                assert X.d(theta) == eta
                for i in range(ell + 1):
                    if i != missing:
                        assert not face(theta, X, i).terms


def test_horn_fill_preconditions():
    X = simplex_algebra(BASE, 2)
    with pytest.raises(PreconditionError):
        horn_fill(X.t(1), X)
    with pytest.raises(PreconditionError):
        horn_fill(X.dt(1), X)


def test_extend_from_face():
    rng = random.Random(86)
    for ell in (2, 3):
        X = simplex_algebra(BASE, ell)
        small = face_target(X)
        for _ in range(20):
            psi = small.d(_bump(small) * random_form(rng, small, rng.randint(-2, ell - 2), 2))
            ext = extend_from_face(psi, X)
            assert face(ext, X, ell) == psi
            for i in range(ell):
                assert not face(ext, X, i).terms


def _bump(X):
    """A function vanishing on every face of X."""
    out = X.one() - sum((X.t(i) for i in range(1, X.ell + 1)), X.zero())
    for i in range(1, X.ell + 1):
        out = out * X.t(i)
    return out


def test_normalized_omega_sign():
    assert normalized_omega(simplex_algebra(BASE, 2)) == -omega(simplex_algebra(BASE, 2))
    assert normalized_omega(simplex_algebra(BASE, 1)) == omega(simplex_algebra(BASE, 1))
