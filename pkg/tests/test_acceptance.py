"""Acceptance criteria 1-10, one test each.

Every test records a single PASS/FAIL line (printed at the end of the pytest
run, or directly when this file is executed as a script).
"""

import json
import os
import random
import subprocess
import sys
import time
from fractions import Fraction

import pytest

from commvar import charmod as cm
from commvar import complexes as cx
from commvar import linalg, suites
from commvar import varieties as vt
from commvar.liealg import (build_algebra, check_antisymmetry, check_form_invariance, check_jacobi,
                            check_triple, principal_triple, random_point)
from commvar.polyalg import monomial_count

BUILTINS = ("A1", "A2", "B2", "C2", "A1+A1+z1")
RESULTS = []


def record(num, ok, detail, elapsed, limit=None):
    within = limit is None or elapsed < limit
    verdict = "PASS" if ok and within else "FAIL"
    timing = f"{elapsed:.1f}s" + (f" (< {limit}s)" if limit else "")
    RESULTS.append(f"criterion {num:>2}: {verdict}  {detail}  [{timing}]")
    assert ok, detail
    assert within, f"runtime {elapsed:.1f}s exceeds {limit}s"


def test_criterion_01_structure():
    t0 = time.perf_counter()
    bad = []
    for spec in BUILTINS:
        g = build_algebra(spec)
        checks = (check_antisymmetry(g), check_jacobi(g), check_form_invariance(g), check_triple(g),
                  (g.dim + g.rank) % 2 == 0)
        if not all(checks):
            bad.append(spec)
    record(1, not bad, f"structure identities exact for {len(BUILTINS) - len(bad)}/{len(BUILTINS)} algebras",
           time.perf_counter() - t0, 5)


def test_criterion_02_characteristic_module():
    t0 = time.perf_counter()
    expected = {"A1": 2, "A2": 5, "B2": 6, "C2": 6, "A1+A1+z1": 5}
    bad = []
    for spec in BUILTINS:
        g = build_algebra(spec)
        B = cm.characteristic_family(g)
        rng = random.Random(f"crit2:{spec}")
        ok = len(B) == expected[spec]
        ok &= cm.generic_rank(B, rng, count=10) == len(B)
        ok &= cm.cycle_identity_check(g, B)
        ok &= all(cm.equivariance_check(g, B, g.basis_vector(i)) for i in range(g.dim))
        for _ in range(5):
            ab = (rng.randint(-5, 5), rng.randint(-5, 5))
            ok &= cm.pencil_covariance_check(g, B, ab, random_point(g, rng), random_point(g, rng))
        if not ok:
            bad.append(spec)
    record(2, not bad, f"count, generic rank, cycle, equivariance, pencil covariance; failures {bad}",
           time.perf_counter() - t0, 60)


def test_criterion_03_principal_points():
    t0 = time.perf_counter()
    bad = []
    for spec in ("A1", "A2", "B2"):
        g = build_algebra(spec)
        B = cm.characteristic_family(g)
        xi, rho, _ = principal_triple(g)
        dim, basis = cm.evaluate_span(B, rho, xi)
        borel = [g.basis_vector(i) for i in cm.borel(g)]
        if not (dim == g.borel_dim and linalg.spans_equal(basis, borel)):
            bad.append(f"{spec}:rho")
        rng = random.Random(f"crit3:{spec}")
        for _ in range(5):
            h = cm.cartan_regular_point(g, rng)
            if cm.evaluate_span(B, h, xi)[0] != len(B):
                bad.append(f"{spec}:h")
    record(3, not bad, f"V(rho, xi) = b and (h, xi) full rank; failures {bad}", time.perf_counter() - t0)


def test_criterion_04_parabolic_containment():
    t0 = time.perf_counter()
    total = failures = 0
    for spec in ("A2", "B2"):
        g = build_algebra(spec)
        B = cm.characteristic_family(g)
        subs = [cm.borel(g)] + list(cm.maximal_parabolics(g).values())
        subs += [cm.b_beta(g, s) for s in g.simple_root_indices()]
        for n, idx in enumerate(subs):
            total += 1
            failures += not cm.parabolic_containment_check(g, B, idx, samples=50, seed=n)
    record(4, failures == 0, f"{total} subalgebras x 50 samples, {failures} failures", time.perf_counter() - t0)


def test_criterion_05_complexes():
    t0 = time.perf_counter()
    wanted = ("complexes.01", "complexes.02", "complexes.04", "complexes.05", "complexes.06")
    bad = []
    for spec in ("A1", "A2", "A1+A1+z1"):
        g = build_algebra(spec)
        ctx = suites.Context(g, 42, linalg.BIG_PRIME, 200, None)
        for c in suites.checks("complexes"):
            if c.id in wanted and suites.run_check(c, ctx)["verdict"] != "pass":
                bad.append(f"{spec}:{c.id}")
    record(5, not bad, f"d^2, omega cycle, Koszul, D_k, de Rham exact; failures {bad}", time.perf_counter() - t0)


def test_criterion_06_sl2_graded_evidence():
    t0 = time.perf_counter()
    g = build_algebra("A1")
    h3 = cx.hilbert_table(g, 3, 4)
    h2 = cx.hilbert_table(g, 2, 4)
    quotient = monomial_count(3, (1, 1)) - vt.ideal_piece_dim(g, (1, 1))
    reps = [vt.radicality_report(g, 4, 200, seed) for seed in (0, 1)]
    rad_ok = all(r["verdict"] == "pass" for rep in reps for r in rep)
    agree = [r["vanishing"] for r in reps[0]] == [r["vanishing"] for r in reps[1]]
    ok = h3.all_zero() and h2[(1, 1, 2)] == 6 == quotient and rad_ok and agree
    record(6, ok, f"H_3 = 0 on a+b<=4, H_2(1,1) = {h2[(1, 1, 2)]}, radicality {rad_ok}, seeds agree {agree}",
           time.perf_counter() - t0, 120)


def test_criterion_07_property_N():
    t0 = time.perf_counter()
    (sl2,) = vt.property_N_check(build_algebra("A1"), [2, 3, 5, 7])
    exact = sl2["counts"] == [[q, q] for q in (2, 3, 5, 7)]
    (sl3,) = vt.property_N_check(build_algebra("A2"), [3, 5])
    ok = exact and sl2["rounded"] == 1 < 3 and sl3["rounded"] <= 6 < 7
    record(7, ok, f"sl2 counts = q, estimate {sl2['estimate']}; sl3 counts {sl3['counts']}, "
                  f"estimate {float(Fraction(sl3['estimate'])):.3f} (evidence)", time.perf_counter() - t0, 600)


def test_criterion_08_tangent_rank():
    t0 = time.perf_counter()
    bad = []
    for spec in BUILTINS:
        g = build_algebra(spec)
        ranks = {vt.commutator_jacobian_rank(g, x, y) for x, y in vt.commuting_samples(g, 20, seed=8)}
        if ranks != {g.dim - g.rank}:
            bad.append(spec)
    record(8, not bad, f"rank n - l at 20 commuting pairs per algebra; failures {bad}", time.perf_counter() - t0)


def test_criterion_09_sl2_strata():
    t0 = time.perf_counter()
    dims = vt.strata_dims_sl2([3, 5, 7])
    got = tuple(dims[t]["rounded"] for t in ("T3", "T4", "T5"))
    record(9, got == (3, 4, 5), f"strata estimates {got} (evidence)", time.perf_counter() - t0)


def test_criterion_10_determinism(tmp_path):
    t0 = time.perf_counter()
    outs = []
    for n, hashseed in enumerate(("1", "2")):
        path = tmp_path / f"run{n}.json"
        env = dict(os.environ, PYTHONHASHSEED=hashseed)
        env = {k: v for k, v in env.items() if not k.startswith("COMMVAR_")}
        subprocess.run([sys.executable, "-m", "commvar.cli", "verify", "--algebra", "A2", "--suite", "all",
                        "--seed", "42", "--format", "json", "--out", str(path)], env=env, check=False)
        outs.append(path.read_bytes())
    same = outs[0] == outs[1]
    summary = json.loads(outs[0])["summary"]
    record(10, same, f"two A2 runs byte-identical: {same}; summary {summary}", time.perf_counter() - t0)


if __name__ == "__main__":
    code = pytest.main([__file__, "-q", "-p", "no:cacheprovider"])
    sys.exit(code)
