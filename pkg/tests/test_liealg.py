import random

import pytest
from hypothesis import given, settings, strategies as st

from commvar import linalg
from commvar.liealg import (AlgebraSpecError, UnsupportedAlgebraError, bracket, build_algebra, centralizer,
                            check_antisymmetry, check_form_invariance, check_jacobi, check_triple, describe_text,
                            invariant_form, is_regular, pair, principal_triple, random_point, random_regular)

from conftest import BUILTINS, algebra, vec


@pytest.mark.parametrize("spec,n,l,k", [("A1", 3, 1, 2), ("A2", 8, 2, 5), ("A1+z1", 4, 2, 3),
                                        ("B2", 10, 2, 6), ("C2", 10, 2, 6), ("A1+A1+z1", 7, 3, 5),
                                        ("z3", 3, 3, 3), ("A3", 15, 3, 9)])
def test_dimensions(spec, n, l, k):
    g = algebra(spec)
    assert (g.dim, g.rank, g.borel_dim) == (n, l, k)
    assert len(g.borel_indices) == k


def test_center_block_is_identity():
    g = algebra("A1+z1")
    z = g.center_indices[0]
    assert g.form[z][z] == 1
    assert all(g.form[z][i] == 0 for i in range(g.dim) if i != z)


@pytest.mark.parametrize("spec", ["D4", "G2", "E6", "F4"])
def test_unsupported_types(spec):
    with pytest.raises(UnsupportedAlgebraError):
        build_algebra(spec)


@pytest.mark.parametrize("spec", ["", "A0", "B1", "X3", "A1++z1", "sl2"])
def test_parse_errors(spec):
    with pytest.raises(AlgebraSpecError):
        build_algebra(spec)


def test_sl2_brackets(sl2):
    h, e, f = (vec(sl2, h1=1), vec(sl2, e1=1), vec(sl2, f1=1))
    assert bracket(sl2, h, e) == [2 * v for v in e]
    assert bracket(sl2, e, f) == h
    assert bracket(sl2, e, e) == [0, 0, 0]
    with pytest.raises(ValueError):
        bracket(sl2, h, [1, 0])


def test_sl2_killing_values(sl2):
    h, e, f = (vec(sl2, h1=1), vec(sl2, e1=1), vec(sl2, f1=1))
    assert pair(sl2, h, h) == 8
    assert pair(sl2, e, f) == 4
    assert pair(sl2, e, h) == 0


def _ad(g, u):
    return [bracket(g, u, g.basis_vector(j)) for j in range(g.dim)]  # columns


@pytest.mark.parametrize("spec", ["A1", "A2", "B2", "C2"])
def test_form_is_trace_of_ad_products(spec):
    # oracle: tr(ad u ad v) computed directly from brackets
    g = algebra(spec)
    kappa = invariant_form(g)
    for i in range(g.dim):
        for j in range(g.dim):
            ad_i = _ad(g, g.basis_vector(i))
            ad_j = _ad(g, g.basis_vector(j))
            tr = sum(ad_i[c][r] * ad_j[r][c] for r in range(g.dim) for c in range(g.dim))
            assert kappa[i][j] == tr


@pytest.mark.parametrize("spec", BUILTINS + ("A3", "z3"))
def test_structure_identities(spec):
    g = algebra(spec)
    assert check_antisymmetry(g)
    assert check_jacobi(g)
    assert check_form_invariance(g)
    assert (g.dim + g.rank) % 2 == 0


@pytest.mark.parametrize("spec", BUILTINS)
def test_principal_triple(spec):
    g = algebra(spec)
    assert check_triple(g)
    xi, rho, eta = principal_triple(g)
    assert is_regular(g, rho) and is_regular(g, xi)
    cartan = [g.basis_vector(i) for i in g.cartan_indices + g.center_indices]
    assert linalg.spans_equal(centralizer(g, rho), cartan)


def test_sl2_triple_is_e_h_f(sl2):
    xi, rho, eta = principal_triple(sl2)
    assert (xi, rho, eta) == (vec(sl2, e1=1), vec(sl2, h1=1), vec(sl2, f1=1))


def test_sl3_rho_values(sl3):
    xi, rho, _ = principal_triple(sl3)
    for s in sl3.simple_root_indices():
        e = sl3.basis_vector(s)
        assert bracket(sl3, rho, e) == [2 * v for v in e]
    assert xi == [1 if i in sl3.simple_root_indices() else 0 for i in range(sl3.dim)]


def test_abelian_has_no_triple():
    with pytest.raises(ValueError):
        principal_triple(algebra("z3"))


def test_centralizers(sl2):
    h, e = vec(sl2, h1=1), vec(sl2, e1=1)
    assert linalg.spans_equal(centralizer(sl2, h), [h])
    assert linalg.spans_equal(centralizer(sl2, e), [e])
    assert len(centralizer(sl2, [0, 0, 0])) == 3
    assert is_regular(sl2, h) and is_regular(sl2, e)
    assert not is_regular(sl2, [0, 0, 0])


def test_random_point_determinism(sl3):
    a = random_point(sl3, 1, 10)
    assert a == random_point(sl3, 1, 10)
    assert a != random_point(sl3, 2, 10)
    assert all(-10 <= v <= 10 for v in a)
    with pytest.raises(ValueError):
        random_point(sl3, 1, 0)


@pytest.mark.parametrize("spec", BUILTINS)
def test_random_points_are_regular(spec):
    g = algebra(spec)
    rng = random.Random(5)
    for _ in range(20):
        x = random_point(g, rng)
        assert is_regular(g, x)
        assert len(centralizer(g, x)) == g.rank
    assert is_regular(g, random_regular(g, rng))


def test_describe_text():
    assert describe_text(algebra("A2")) == "dim 8, rank 2, borel 5, degrees [2,3]"
    assert describe_text(algebra("A1")) == "dim 3, rank 1, borel 2, degrees [2]"
    assert describe_text(algebra("z3")) == "dim 3, rank 3, borel 3, degrees [1,1,1]"


coeffs = st.lists(st.integers(-5, 5), min_size=8, max_size=8)


@settings(max_examples=40, deadline=None)
@given(coeffs, coeffs, coeffs, st.integers(-4, 4))
def test_bracket_bilinear_antisymmetric_invariant(u, v, w, c):
    g = algebra("A2")
    uv = bracket(g, u, v)
    assert uv == [-t for t in bracket(g, v, u)]
    assert bracket(g, [c * a + b for a, b in zip(u, w)], v) == [
        c * a + b for a, b in zip(uv, bracket(g, w, v))]
    assert pair(g, uv, w) == pair(g, u, bracket(g, v, w))


def test_as_rng():
    from commvar.liealg import as_rng
    r = random.Random(1)
    assert as_rng(r) is r
    assert as_rng(5).random() == random.Random(5).random()
    with pytest.raises(TypeError):
        as_rng((1, 2))
