import json
import random
from importlib import resources

import pytest
import sympy

from commvar import complexes as cx
from commvar import varieties as vt
from commvar.liealg import random_point
from commvar.polyalg import monomial_count

from conftest import BUILTINS, algebra, family, vec


def test_sl2_canonical_degree_one(sl2):
    sl = cx.canonical_slice(sl2, (0, 0), 1)
    m = sl.matrix(1)
    assert (len(m), len(m[0])) == (3, 9)
    assert sympy.Matrix(m).rank() == 3


def test_canonical_degree_zero_is_zero_map(sl2):
    sl = cx.canonical_slice(sl2, (1, 1), 0)
    assert all(not img for img in sl.pieces[0].images)


@pytest.mark.parametrize("spec", ["A1", "A1+z1", "A2"])
def test_d_squared_zero(spec):
    g = algebra(spec)
    top = min(g.dim, 4 if g.dim <= 4 else 3)
    sl = cx.canonical_slice(g, (0, 0), (1, top))
    assert sl.check_shapes()
    assert sl.d_squared_zero()


def test_sl2_degree_two_formula(sl2):
    # d(u ^ v) = <u, c> v - <v, c> u with c = [x, y], built by hand
    from commvar.charmod import lambda_polys
    lam = lambda_polys(sl2)
    sl = cx.canonical_slice(sl2, (1, 1), 2)
    assert sl.d_squared_zero()
    for (mono, (u, v)), img in zip(sl.pieces[2].ambient, sl.pieces[2].images):
        expect = {}
        for w, other, sign in ((u, v, 1), (v, u, -1)):
            for e, c in lam[w].terms.items():
                key = (tuple(s + t for s, t in zip(e, mono)), (other,))
                expect[key] = expect.get(key, 0) + sign * c
        assert img == {k: c for k, c in expect.items() if c}


def test_sl2_volume(sl2):
    B = family("A1")
    omega = cx.characteristic_volume(B)
    assert cx.volume_bidegree(B) == (1, 1)
    h, e = vec(sl2, h1=1), vec(sl2, e1=1)
    point = h + e
    vals = {s: c.evaluate(point) for s, c in omega.parts.items()}
    ih, ie = sl2.basis_labels.index("h1"), sl2.basis_labels.index("e1")
    key = tuple(sorted((ih, ie)))
    sign = 1 if (ih, ie) == key else -1
    assert {s: v for s, v in vals.items() if v} == {key: 4 * sign}


@pytest.mark.parametrize("spec", BUILTINS)
def test_volume_nonzero(spec):
    g = algebra(spec)
    B = family(spec)
    rng = random.Random(1)
    z = random_point(g, rng, 5) + random_point(g, rng, 5)
    assert any(cx._volume_at(B, z).values())


@pytest.mark.parametrize("spec", ["A1", "A1+z1", "z3"])
def test_omega_cycle(spec):
    ok, how = cx.omega_cycle_check(algebra(spec))
    assert ok and how == "symbolic"


def test_omega_cycle_by_derivation():
    ok, how = cx.omega_cycle_check(algebra("A2"), budget=10)
    assert ok and how == "derivation"


def test_sl2_e_pieces(sl2):
    omega = cx.characteristic_volume(family("A1"))
    sl = cx.e_complex_slice(sl2, omega, (1, 1), 2)
    assert sl.dims()[2] == 1
    sl3 = cx.e_complex_slice(sl2, omega, (1, 1), 3)
    assert sl3.dims()[3] == 3
    assert cx.e_complex_slice(sl2, omega, (0, 0), 2).dims()[2] == 0
    with pytest.raises(ValueError):
        cx.e_complex_slice(sl2, omega, (1, 1), 1)


@pytest.mark.parametrize("spec,bd", [("A1", (1, 1)), ("A1", (2, 2)), ("A1+z1", (1, 1))])
def test_e_is_subcomplex(spec, bd):
    g = algebra(spec)
    omega = cx.characteristic_volume(family(spec))
    k = len(family(spec).labels)
    for j in range(k, g.dim + 1):
        sl = cx.e_complex_slice(g, omega, bd, j)
        assert sl.is_subcomplex()
        assert sl.d_squared_zero()


def test_sl2_hilbert_values(sl2):
    h2 = cx.hilbert_table(sl2, 2, 4)
    h3 = cx.hilbert_table(sl2, 3, 4)
    assert h3.all_zero()
    assert h2[(1, 1, 2)] == 6
    assert h2[(0, 0, 2)] == 1
    # oracle: monomials minus the ideal piece, computed independently
    for (a, b, _), v in h2.entries.items():
        assert v == monomial_count(3, (a, b)) - vt.ideal_piece_dim(sl2, (a, b))


def test_sl2_golden_hilbert():
    golden = json.loads(resources.files("commvar.golden").joinpath("sl2_hilbert.json").read_text())
    g = algebra("A1")
    rows = []
    for j in (2, 3):
        rows += cx.hilbert_table(g, j, golden["max_bidegree"]).rows()
    key = lambda r: (r["j"], r["a"], r["b"])
    assert sorted(rows, key=key) == sorted(golden["rows"], key=key)


def test_projected_matches_exact():
    for spec, j, bound in (("A1", 2, 3), ("A1", 3, 3), ("A1+z1", 3, 2), ("A1+z1", 4, 1)):
        g = algebra(spec)
        exact = cx.hilbert_table(g, j, bound)
        proj = cx.hilbert_table(g, j, bound, method="projected", seed=5)
        assert exact.entries == proj.entries


def test_budget_raises():
    with pytest.raises(cx.ResourceError):
        cx.hilbert_table(algebra("A2"), 6, 2, budget=1000)
    with pytest.raises(cx.ResourceError):
        cx.canonical_slice(algebra("A2"), (2, 2), 4, budget=1000)


def test_certify_sl2_quotient():
    cert = cx.certify_nonvanishing(algebra("A1"), 2, (0, 2))
    assert cert["lower_bound"] == 6 == cert["cycles"]
    with pytest.raises(ValueError):
        cx.certify_nonvanishing(algebra("A1"), 2, (1, 1))


@pytest.mark.slow
def test_certify_sl3_degree_seven():
    # H_7(E(sl3)) is nonzero at multiplier (0, 1): exact lower bound
    g = algebra("A2")
    for bd in ((0, 1), (1, 0)):
        cert = cx.certify_nonvanishing(g, 7, bd)
        assert cert["lower_bound"] == 8


def test_koszul():
    sl2 = algebra("A1")
    assert cx.koszul_point_check(sl2, vec(sl2, e1=1), vec(sl2, f1=1))
    with pytest.raises(ValueError):
        cx.koszul_point_check(sl2, vec(sl2, h1=1), vec(sl2, h1=1))
    g = algebra("A2")
    rng = random.Random(8)
    for _ in range(3):
        assert cx.koszul_point_check(g, random_point(g, rng, 5), random_point(g, rng, 5))


@pytest.mark.parametrize("k", [0, 1, 2])
def test_d_complex_sl2(sl2, k):
    assert cx.d_complex_acyclic(sl2, k, vec(sl2, h1=1), vec(sl2, e1=1))


def test_d_complex_rejects_xg_points(sl2):
    e = vec(sl2, e1=1)
    with pytest.raises(cx.XgPointError):
        cx.d_complex_at_point(sl2, 0, e, [2 * v for v in e])


def test_d_complex_sl3_random(sl3):
    rng = random.Random(3)
    x, y = random_point(sl3, rng, 5), random_point(sl3, rng, 5)
    for k in range(3):
        assert cx.d_complex_acyclic(sl3, k, x, y)


@pytest.mark.parametrize("m,trunc,totals", [(1, 3, [1, 0]), (3, 3, [1, 0, 0, 0]), (0, 2, [1]), (2, 4, [1, 0, 0])])
def test_de_rham(m, trunc, totals):
    assert cx.de_rham_totals(cx.de_rham_control(m, trunc)) == totals


def test_homology_table_rows_round_trip():
    t = cx.hilbert_table(algebra("A1"), 2, 2)
    assert cx.HomologyTable.from_rows(t.rows()).entries == t.entries
    assert t.merge(t).entries == t.entries
    other = cx.HomologyTable({(0, 0, 2): 99})
    with pytest.raises(ValueError):
        t.merge(other)
