import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from commvar import varieties as vt
from commvar.complexes import ResourceError
from commvar.liealg import bracket, centralizer, principal_triple
from commvar.polyalg import monomial_basis

from conftest import BUILTINS, algebra, vec


@pytest.mark.parametrize("spec", BUILTINS + ("z3",))
def test_samples_commute(spec):
    g = algebra(spec)
    for x, y in vt.commuting_samples(g, 10, seed=1):
        assert not any(bracket(g, x, y))
        assert len(centralizer(g, x)) == g.rank


def test_sl2_samples_are_colinear(sl2):
    from commvar import linalg
    for x, y in vt.commuting_samples(sl2, 5, seed=2):
        assert linalg.rank([x, y]) == 1


def test_direct_sum_samples_commute_per_factor():
    g = algebra("A1+A1+z1")
    x, y = vt.sample_commuting(g, 3)
    for blk in g.blocks:
        xb = [x[i] if i in blk.indices else 0 for i in range(g.dim)]
        yb = [y[i] if i in blk.indices else 0 for i in range(g.dim)]
        assert not any(bracket(g, xb, yb))


@pytest.mark.parametrize("spec", BUILTINS)
def test_tangent_rank(spec):
    g = algebra(spec)
    for x, y in vt.commuting_samples(g, 5, seed=4):
        assert vt.commutator_jacobian_rank(g, x, y) == g.dim - g.rank


def test_tangent_rank_examples(sl2):
    h = vec(sl2, h1=1)
    assert vt.commutator_jacobian_rank(sl2, h, [2 * v for v in h]) == 2
    assert vt.commutator_jacobian_rank(sl2, [0] * 3, [0] * 3) == 0
    with pytest.raises(ValueError):
        vt.commutator_jacobian_rank(sl2, vec(sl2, e1=1), vec(sl2, f1=1))


def _oracle_ideal_dim(g, bidegree):
    # spanners built by hand, rank taken with sympy
    import sympy
    a, b = bidegree
    if a < 1 or b < 1:
        return 0
    from commvar.charmod import lambda_polys
    lam = lambda_polys(g)
    rows, keys = [], {}
    for m in monomial_basis(g.dim, (a - 1, b - 1)):
        for f in lam:
            row = {}
            for e, c in f.terms.items():
                key = tuple(u + v for u, v in zip(e, m))
                keys.setdefault(key, len(keys))
                row[keys[key]] = c
            rows.append(row)
    mat = sympy.zeros(len(rows), len(keys))
    for i, r in enumerate(rows):
        for j, c in r.items():
            mat[i, j] = c
    return mat.rank()


@pytest.mark.parametrize("bd,dim", [((1, 1), 3), ((2, 1), 8), ((0, 0), 0), ((1, 0), 0)])
def test_sl2_ideal_pieces(sl2, bd, dim):
    assert vt.ideal_piece_dim(sl2, bd) == dim == _oracle_ideal_dim(sl2, bd)


def test_ideal_pieces_match_oracle_sl3(sl3):
    assert vt.ideal_piece_dim(sl3, (1, 1)) == _oracle_ideal_dim(sl3, (1, 1))


@pytest.mark.parametrize("bd,dim", [((1, 1), 3), ((1, 0), 0), ((0, 0), 0)])
def test_sl2_vanishing_pieces(sl2, bd, dim):
    assert vt.vanishing_piece_dim(sl2, bd, samples=60, seed=1) == dim


def test_vanishing_needs_enough_samples(sl2):
    with pytest.raises(ValueError):
        vt.vanishing_piece_dim(sl2, (1, 1), samples=5, seed=0)


def test_radicality_sl2_two_seeds(sl2):
    reports = [vt.radicality_report(sl2, 4, 200, seed) for seed in (0, 1)]
    for rep in reports:
        assert all(r["verdict"] == "pass" for r in rep)
        assert len(rep) == 15
    assert [r["vanishing"] for r in reports[0]] == [r["vanishing"] for r in reports[1]]
    assert vt.radicality_report(sl2, 0, 200, 0)[0]["verdict"] == "pass"


def test_stabilization_nonincreasing(sl2):
    dims = [d for _, d in vt.stabilization(sl2, (2, 1), seed=3, rounds=3)]
    assert dims == sorted(dims, reverse=True)
    assert dims[-1] == 8


def test_nilpair_counts():
    assert len(vt.nilpair_equations(algebra("A1"))) == 3
    assert len(vt.nilpair_equations(algebra("A2"))) == 7
    with pytest.raises(ValueError):
        vt.nilpair_equations(algebra("A1+A1+z1"))


@pytest.mark.parametrize("q", [2, 3, 5, 7])
def test_sl2_fiber_count(sl2, q):
    xi = principal_triple(sl2)[0]
    assert vt.fiber_count(sl2, xi, q) == q


def test_fiber_count_rejects_prime_powers(sl2):
    with pytest.raises(ValueError):
        vt.fiber_count(sl2, principal_triple(sl2)[0], 4)


def test_point_budget(sl3):
    with pytest.raises(ResourceError):
        vt.fiber_count(sl3, principal_triple(sl3)[0], 5, budget=1000)


@pytest.mark.parametrize("counts,dim", [([(3, 9), (5, 25)], 2), ([(3, 3), (5, 5), (7, 7)], 1),
                                        ([(3, 27), (5, 125)], 3)])
def test_dimension_estimate(counts, dim):
    assert vt.dimension_estimate(counts) == dim


def test_dimension_estimate_errors():
    with pytest.raises(ValueError):
        vt.dimension_estimate([(3, 9)])
    with pytest.raises(ValueError):
        vt.dimension_estimate([(3, 0), (5, 4)])


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 5), st.integers(1, 5))
def test_dimension_estimate_recovers_powers(d, c):
    assert vt.dimension_estimate([(q, c * q**d) for q in (3, 5, 7)]) == Fraction(d)


def test_property_N_sl2():
    (rec,) = vt.property_N_check(algebra("A1"), [2, 3, 5, 7])
    assert rec["counts"] == [[2, 2], [3, 3], [5, 5], [7, 7]]
    assert rec["rounded"] == 1 < rec["bound"] == 3
    with pytest.raises(ValueError):
        vt.property_N_check(algebra("A1"), [5])


def test_property_N_direct_sum_uses_factors():
    recs = vt.property_N_check(algebra("A1+A1+z1"), [3, 5])
    assert [r["factor"] for r in recs] == ["A1", "A1"]


@pytest.mark.slow
def test_property_N_sl3():
    (rec,) = vt.property_N_check(algebra("A2"), [3, 5])
    assert rec["rounded"] <= 6 < rec["bound"] == 7


def test_sl2_strata():
    dims = vt.strata_dims_sl2([3, 5, 7])
    assert (dims["T3"]["rounded"], dims["T4"]["rounded"], dims["T5"]["rounded"]) == (3, 4, 5)


def test_strata_reject_other_algebras(sl3):
    with pytest.raises(ValueError):
        vt.strata_equations(sl3)


def test_report_verdicts():
    rep = vt.VarietyReport("A1")
    rep.add("x", {}, {}, "pass")
    with pytest.raises(ValueError):
        rep.add("y", {}, {}, "maybe")
    assert rep.to_json()["records"][0]["verdict"] == "pass"
