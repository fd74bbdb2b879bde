import random
from fractions import Fraction
from importlib import resources

import pytest
from hypothesis import given, settings, strategies as st

from commvar import charmod as cm
from commvar import linalg
from commvar.liealg import bracket, pair, random_point
from commvar.polyalg import MultiPoly, PolyVector

from conftest import BUILTINS, algebra, family, vec


def xy_vars(g):
    nv = 2 * g.dim
    return ([MultiPoly.var(nv, i) for i in range(g.dim)],
            [MultiPoly.var(nv, g.dim + i) for i in range(g.dim)])


@pytest.mark.parametrize("spec,degrees", [("A1", (2,)), ("A2", (2, 3)), ("C2", (2, 4)), ("B2", (2, 4)),
                                          ("A1+A1+z1", (2, 2, 1)), ("z3", (1, 1, 1))])
def test_invariant_degrees(spec, degrees):
    inv = cm.invariant_polynomials(algebra(spec))
    assert inv.degrees == degrees
    for p, d in zip(inv.polys, degrees):
        assert p.is_homogeneous() and p.bidegrees() == {(d, 0)}


@pytest.mark.parametrize("spec", BUILTINS)
def test_invariants_are_ad_invariant(spec):
    # derivative along x -> [v, x] kills each invariant, for every basis v
    g = algebra(spec)
    for p in cm.invariant_polynomials(g).polys:
        for i in range(g.dim):
            defect = cm.equivariance_defect(g, PolyVector([p] + [MultiPoly.zero(p.nvars)] * (g.dim - 1)),
                                            g.basis_vector(i))
            assert defect[0].is_zero()


@pytest.mark.parametrize("spec,k", [("A1", 2), ("A2", 5), ("B2", 6), ("C2", 6), ("A1+A1+z1", 5), ("z3", 3)])
def test_generator_count_is_borel_dim(spec, k):
    B = family(spec)
    assert len(B) == k == algebra(spec).borel_dim
    assert all(m >= 1 for _, m, _ in B.labels)


def test_labels():
    assert family("A1").labels == ((1, 1, 1), (1, 2, 0))
    assert family("A2").labels == ((1, 1, 1), (1, 2, 0), (2, 1, 2), (2, 2, 1), (2, 3, 0))


def test_sl2_generators_are_2x_2y(sl2):
    B = family("A1")
    x, y = xy_vars(sl2)
    gens = dict(zip(B.labels, B.gens))
    assert list(gens[(1, 2, 0)]) == [v.scale(2) for v in x]
    assert list(gens[(1, 1, 1)]) == [v.scale(2) for v in y]


def test_gradient_of_y_only_poly_is_zero(sl2):
    _, y = xy_vars(sl2)
    q = y[0] * y[0]
    assert all(c.is_zero() for c in cm.gradient_x(sl2, q))


def test_sl3_generator_212_traceless_y_squared(sl3):
    # eps_{2,1,2} is proportional to the traceless part of y^2 in the defining rep
    B = family("A2")
    eps = dict(zip(B.labels, B.gens))[(2, 1, 2)]
    rng = random.Random(4)
    mats = sl3.blocks[0].simple.matrices
    for _ in range(3):
        x, y = random_point(sl3, rng, 5), random_point(sl3, rng, 5)
        val = eps.evaluate(list(x) + list(y))
        Y = [[sum(y[t] * mats[t][r][c] for t in range(sl3.dim)) for c in range(3)] for r in range(3)]
        Y2 = [[sum(Y[r][s] * Y[s][c] for s in range(3)) for c in range(3)] for r in range(3)]
        tr = sum(Y2[i][i] for i in range(3))
        target = [[Y2[r][c] - (Fraction(tr, 3) if r == c else 0) for c in range(3)] for r in range(3)]
        flat = [v for row in target for v in row]
        # image of eps in the defining rep must be a multiple of target
        img = [sum(val[t] * mats[t][r][c] for t in range(sl3.dim)) for r in range(3) for c in range(3)]
        assert linalg.rank([flat, img]) <= 1
        assert any(flat) == any(img)


def test_evaluate_span_examples(sl2):
    B = family("A1")
    h, e = vec(sl2, h1=1), vec(sl2, e1=1)
    dim, basis = cm.evaluate_span(B, h, e)
    assert dim == 2
    assert linalg.spans_equal(basis, [h, e])
    assert cm.evaluate_span(B, e, [2 * v for v in e])[0] == 1
    for spec in BUILTINS:
        g = algebra(spec)
        # only the constant gradients of center coordinates survive at the origin
        assert cm.evaluate_span(family(spec), [0] * g.dim, [0] * g.dim)[0] == len(g.center_indices)


@pytest.mark.parametrize("spec", BUILTINS)
def test_cycle_identity(spec):
    g = algebra(spec)
    assert cm.cycle_identity_check(g, family(spec))


def test_cycle_negative_control(sl2):
    # a constant direction does not pair to zero with [x, y]
    nv = 2 * sl2.dim
    witness = PolyVector([MultiPoly.const(nv, 1)] + [MultiPoly.zero(nv)] * 2)
    assert not cm.pairing_with_commutator(sl2, witness).is_zero()


@pytest.mark.parametrize("spec", ["A1", "A2", "A1+A1+z1"])
def test_equivariance_along_basis(spec):
    g = algebra(spec)
    B = family(spec)
    for i in range(g.dim):
        assert cm.equivariance_check(g, B, g.basis_vector(i))
    assert cm.equivariance_check(g, B, [0] * g.dim)


def test_equivariance_negative_control(sl2):
    # a constant vector field is not equivariant
    nv = 2 * sl2.dim
    bad = PolyVector([MultiPoly.zero(nv), MultiPoly.const(nv, 1), MultiPoly.zero(nv)])
    assert not cm.equivariance_defect(sl2, bad, vec(sl2, h1=1)).is_zero()


@settings(max_examples=15, deadline=None)
@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(0, 10**6))
def test_pencil_covariance(a, b, seed):
    for spec in ("A1", "A2"):
        g = algebra(spec)
        rng = random.Random(seed)
        x, y = random_point(g, rng, 6), random_point(g, rng, 6)
        assert cm.pencil_covariance_check(g, family(spec), (a, b), x, y)


def test_pencil_covariance_negative_control(sl2):
    # swap the generators: the identity must break at a generic point
    B = family("A1")
    swapped = cm.CharacteristicModule(B.g, B.invariants, B.labels, tuple(reversed(B.gens)))
    x, y = vec(sl2, h1=1, e1=2), vec(sl2, f1=3)
    assert not cm.pencil_covariance_check(sl2, swapped, (2, 1), x, y)


@pytest.mark.parametrize("spec", BUILTINS)
def test_generic_rank(spec):
    assert cm.generic_rank(family(spec), seed=7) == algebra(spec).borel_dim


def test_principal_point_span_is_borel():
    from commvar.liealg import principal_triple
    for spec in ("A1", "A2", "B2"):
        g = algebra(spec)
        xi, rho, _ = principal_triple(g)
        dim, basis = cm.evaluate_span(family(spec), rho, xi)
        assert dim == g.borel_dim
        assert linalg.spans_equal(basis, [g.basis_vector(i) for i in cm.borel(g)])


@pytest.mark.parametrize("spec", ["A2", "B2"])
def test_parabolic_containment(spec):
    g = algebra(spec)
    B = family(spec)
    subs = [cm.borel(g)] + list(cm.maximal_parabolics(g).values())
    subs += [cm.b_beta(g, s) for s in g.simple_root_indices()]
    for indices in subs:
        assert cm.parabolic_containment_check(g, B, indices, samples=10, seed=3)


def test_parabolic_rejects_cartan_line(sl2):
    h = sl2.basis_labels.index("h1")
    with pytest.raises(cm.SubalgebraError):
        cm.parabolic_containment_check(sl2, family("A1"), (h,), samples=1)
    e, f = sl2.basis_labels.index("e1"), sl2.basis_labels.index("f1")
    with pytest.raises(cm.SubalgebraError):
        cm.check_parabolic_like(sl2, (e, f))


def test_full_algebra_is_parabolic(sl3):
    assert cm.check_parabolic_like(sl3, tuple(range(sl3.dim))) == "parabolic"


def test_cartan_regular_points(sl3):
    rng = random.Random(2)
    xi = [1 if i in sl3.simple_root_indices() else 0 for i in range(sl3.dim)]
    for _ in range(5):
        h = cm.cartan_regular_point(sl3, rng)
        assert all(h[i] == 0 for i in range(sl3.dim) if i not in sl3.cartan_indices)
        assert cm.evaluate_span(family("A2"), h, xi)[0] == sl3.borel_dim


@pytest.mark.parametrize("spec,name", [("A1", "sl2_generators.txt"), ("A2", "sl3_generators.txt")])
def test_golden_generators(spec, name):
    golden = resources.files("commvar.golden").joinpath(name).read_text()
    assert cm.export_generators(family(spec)) == golden


def test_lambda_is_commutator_pairing(sl3):
    rng = random.Random(9)
    lam = cm.lambda_polys(sl3)
    for _ in range(3):
        x, y = random_point(sl3, rng, 5), random_point(sl3, rng, 5)
        c = bracket(sl3, x, y)
        pt = list(x) + list(y)
        for k in range(sl3.dim):
            assert lam[k].evaluate(pt) == pair(sl3, sl3.basis_vector(k), c)
