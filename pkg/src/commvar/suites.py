"""Check registry for the verification suites.

Every check is a function ``ctx -> (verdict, data)`` registered under a
stable id; reports list rows in id order regardless of how they were run.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import charmod as cm
from . import complexes as cx
from . import linalg
from . import varieties as vr
from .liealg import (bracket, check_antisymmetry, check_form_invariance, check_integral,
                     check_jacobi, check_triple, is_regular, principal_triple, random_point)
from .polyalg import monomial_count

SUITES = ("algebra", "charmod", "complexes", "varieties")

PARABOLIC_SAMPLES = 50
KOSZUL_POINTS = 20
TANGENT_POINTS = 20
PENCIL_POINTS = 5
CARTAN_POINTS = 5
GENERIC_POINTS = 10
SUITE_SPANNER_LIMIT = 2500  # largest E slice (spanners) a suite run will project


@dataclass
class Context:
    g: object
    seed: int
    prime: int
    samples: int
    max_bidegree: int | None = None
    _cache: dict = field(default_factory=dict)

    @property
    def B(self):
        if "B" not in self._cache:
            self._cache["B"] = cm.characteristic_family(self.g)
        return self._cache["B"]

    @property
    def k(self):
        return len(self.B.labels)

    def rng(self, tag):
        """Independent stream per check, derived from the master seed."""
        return random.Random(f"{self.seed}:{tag}")

    def bound(self, default):
        return default if self.max_bidegree is None else min(default, self.max_bidegree)


@dataclass(frozen=True)
class Check:
    id: str
    anchor: str
    fn: object
    skip: object = None  # g -> reason string or None


_REGISTRY = {name: [] for name in SUITES}


def check(suite, cid, anchor, skip=None):
    def deco(fn):
        _REGISTRY[suite].append(Check(f"{suite}.{cid}", anchor, fn, skip))
        return fn
    return deco


def checks(suite):
    return sorted(_REGISTRY[suite], key=lambda c: c.id)


def _verdict(ok):
    return "pass" if ok else "fail"


def _plain(value):
    """JSON-ready copy: tuples to lists, fractions to strings, keys to strings."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, Fraction):
        return str(value) if value.denominator != 1 else value.numerator
    return value


def _abelian(g):
    return "abelian algebra: no principal triple" if g.is_abelian else None


def _no_simple_factor(g):
    return "abelian algebra: no simple factor" if g.is_abelian else None


def _not_sl2(g):
    return None if g.spec == "A1" else "defined for sl2 (A1) only"


# --- algebra -------------------------------------------------------------------

@check("algebra", "01", "bracket antisymmetry")
def _antisym(ctx):
    return _verdict(check_antisymmetry(ctx.g)), {}


@check("algebra", "02", "Jacobi identity")
def _jacobi(ctx):
    return _verdict(check_jacobi(ctx.g)), {}


@check("algebra", "03", "invariant form: symmetric, nondegenerate, ad-invariant")
def _form(ctx):
    return _verdict(check_form_invariance(ctx.g)), {}


@check("algebra", "04", "principal sl2-triple relations", _abelian)
def _triple(ctx):
    return _verdict(check_triple(ctx.g)), {}


@check("algebra", "05", "n + rank even, Borel dimension")
def _parity(ctx):
    g = ctx.g
    ok = (g.dim + g.rank) % 2 == 0 and 2 * g.borel_dim == g.dim + g.rank
    ok = ok and len(g.borel_indices) == g.borel_dim
    return _verdict(ok), {"dim": g.dim, "rank": g.rank, "borel_dim": g.borel_dim}


@check("algebra", "06", "integral structure constants")
def _integral(ctx):
    return _verdict(check_integral(ctx.g)), {}


# --- characteristic module -----------------------------------------------------

@check("charmod", "01", "generator count equals Borel dimension")
def _count(ctx):
    labels = [list(lab) for lab in ctx.B.labels]
    return _verdict(ctx.k == ctx.g.borel_dim), {"count": ctx.k, "borel_dim": ctx.g.borel_dim, "labels": labels}


@check("charmod", "02", "generic evaluated rank equals Borel dimension")
def _generic(ctx):
    r = cm.generic_rank(ctx.B, ctx.rng("generic"), GENERIC_POINTS)
    return _verdict(r == ctx.g.borel_dim), {"rank": r, "points": GENERIC_POINTS}


@check("charmod", "03", "generators are orthogonal to [x, y]")
def _cycle(ctx):
    return _verdict(cm.cycle_identity_check(ctx.g, ctx.B)), {}


@check("charmod", "04", "infinitesimal equivariance")
def _equiv(ctx):
    g = ctx.g
    bad = [g.basis_labels[i] for i in range(g.dim) if not cm.equivariance_check(g, ctx.B, g.basis_vector(i))]
    return _verdict(not bad), {"directions": g.dim, "failures": bad}


@check("charmod", "05", "pencil covariance of invariant gradients")
def _pencil(ctx):
    g, rng = ctx.g, ctx.rng("pencil")
    fails = 0
    for _ in range(PENCIL_POINTS):
        ab = (rng.randint(-9, 9), rng.randint(-9, 9))
        x, y = random_point(g, rng), random_point(g, rng)
        fails += not cm.pencil_covariance_check(g, ctx.B, ab, x, y)
    return _verdict(fails == 0), {"points": PENCIL_POINTS, "failures": fails}


@check("charmod", "06", "span at (rho, xi) is the Borel subalgebra", _abelian)
def _principal(ctx):
    g = ctx.g
    xi, rho, _ = principal_triple(g)
    dim, basis = cm.evaluate_span(ctx.B, rho, xi)
    borel = [g.basis_vector(i) for i in g.borel_indices]
    ok = dim == g.borel_dim and linalg.spans_equal(basis, borel)
    return _verdict(ok), {"span_dim": dim, "borel_dim": g.borel_dim}


@check("charmod", "07", "(h, xi) has full rank for regular Cartan h", _abelian)
def _cartan(ctx):
    g, rng = ctx.g, ctx.rng("cartan")
    xi = principal_triple(g)[0]
    dims = [cm.evaluate_span(ctx.B, cm.cartan_regular_point(g, rng), xi)[0] for _ in range(CARTAN_POINTS)]
    return _verdict(all(d == g.borel_dim for d in dims)), {"dims": dims}


@check("charmod", "08", "span at pairs in a parabolic stays in it", _abelian)
def _parabolic(ctx):
    g = ctx.g
    subs = {"borel": cm.borel(g)}
    for label, idx in sorted(cm.maximal_parabolics(g).items()):
        subs[f"parabolic[{label}]"] = idx
    for s in g.simple_root_indices():
        subs[f"b_beta[{g.basis_labels[s]}]"] = cm.b_beta(g, s)
    results = {}
    for name, idx in subs.items():
        seed = ctx.rng(f"parabolic:{name}").getrandbits(32)
        results[name] = cm.parabolic_containment_check(g, ctx.B, idx, PARABOLIC_SAMPLES, seed)
    return _verdict(all(results.values())), {"samples": PARABOLIC_SAMPLES, "subalgebras": results}


# --- complexes -----------------------------------------------------------------

@check("complexes", "01", "d o d = 0 on canonical slices")
def _dsq(ctx):
    g = ctx.g
    cells = [(0, 0)] + ([(1, 0), (0, 1)] if g.dim <= 4 else [])
    bad = []
    count = 0
    for bd in cells:
        for j in range(1, g.dim + 1):
            sl = cx.canonical_slice(g, bd, j)
            count += 1
            if not (sl.check_shapes() and sl.d_squared_zero((j,))):
                bad.append([bd[0], bd[1], j])
    return _verdict(not bad), {"slices": count, "failures": bad}


@check("complexes", "02", "omega is a cycle")
def _omega(ctx):
    ok, method = cx.omega_cycle_check(ctx.g, ctx.B)
    return _verdict(ok), {"method": method, "omega_bidegree": list(cx.volume_bidegree(ctx.B))}


def _small_omega(g):
    B = cm.characteristic_family(g)
    if cx.omega_size_bound(B) > cx.DEFAULT_BUDGET // 20:
        return "omega too large to expand within budget"
    return None


@check("complexes", "03", "E is a subcomplex", _small_omega)
def _subcomplex(ctx):
    g, B = ctx.g, ctx.B
    omega = cx._e_omega(g, B)
    wa, wb = cx.volume_bidegree(B)
    bad = []
    count = 0
    for j in range(ctx.k, g.dim + 1):
        for a, b in ((0, 0), (1, 0), (0, 1)):
            sl = cx.e_complex_slice(g, omega, (a + wa, b + wb), j)
            count += 1
            if not (sl.is_subcomplex() and sl.d_squared_zero()):
                bad.append([a, b, j])
    return _verdict(not bad), {"slices": count, "failures": bad}


@check("complexes", "04", "Koszul complex exact off the commuting variety")
def _koszul(ctx):
    g, rng = ctx.g, ctx.rng("koszul")
    if g.is_abelian:
        return "pass", {"points": 0, "note": "abelian: every pair commutes"}
    done = fails = 0
    while done < KOSZUL_POINTS:
        x, y = random_point(g, rng), random_point(g, rng)
        if not any(bracket(g, x, y)):
            continue
        done += 1
        fails += not cx.koszul_point_check(g, x, y)
    return _verdict(fails == 0), {"points": done, "failures": fails}


def _lambda_point(ctx, rng):
    for _ in range(100):
        x, y = random_point(ctx.g, rng), random_point(ctx.g, rng)
        if cm.evaluate_span(ctx.B, x, y)[0] == ctx.k:
            return x, y
    raise RuntimeError("no full-rank point found in 100 draws")


@check("complexes", "05", "D_k acyclic at full-rank points, k = 0..3")
def _dk(ctx):
    rng = ctx.rng("dk")
    out = {}
    for kk in range(4):
        x, y = _lambda_point(ctx, rng)
        sl = cx.d_complex_at_point(ctx.g, kk, x, y, B=ctx.B)
        out[kk] = sum(cx.homology_dims(sl).values())
    return _verdict(not any(out.values())), {"total_homology": out}


@check("complexes", "06", "de Rham control: cohomology is one-dimensional in degree 0")
def _derham(ctx):
    m = min(ctx.g.dim, 3)
    totals = cx.de_rham_totals(cx.de_rham_control(m, 3))
    expected = [1] + [0] * (len(totals) - 1)
    return _verdict(totals == expected), {"dim": m, "truncation": 3, "totals": totals}


def _e_bound(ctx, j):
    """Default multiplier-bidegree bound for H_j(E): 4 in rank 1, shrinking with j above."""
    if ctx.g.rank == 1:
        return ctx.bound(4)
    return ctx.bound({0: 3, 1: 2}.get(j - ctx.k, 1))


def _worst_slice(g, B, j, bound):
    return max(max(cx._e_sizes(g, B, j, (a, b))) for a in range(bound + 1) for b in range(bound + 1 - a))


def _e_table(ctx, j):
    g = ctx.g
    bound = _e_bound(ctx, j)
    while bound > 0 and _worst_slice(g, ctx.B, j, bound) > SUITE_SPANNER_LIMIT:
        bound -= 1
    try:
        table = cx.hilbert_table(g, j, bound, method="auto")
    except cx.ResourceError:
        table = cx.hilbert_table(g, j, bound, p=ctx.prime, method="projected", seed=ctx.seed)
    return table


def _homology_skip(g):
    B = cm.characteristic_family(g)
    if _worst_slice(g, B, len(B.labels), 0) > SUITE_SPANNER_LIMIT:
        return "E slices exceed the suite size limit"
    return None


@check("complexes", "07", "E homology in degree k_g is the commuting-variety quotient", _homology_skip)
def _hk(ctx):
    g = ctx.g
    table = _e_table(ctx, ctx.k)
    rows, bad = [], []
    for (a, b, _), dim in sorted(table.entries.items()):
        expected = monomial_count(g.dim, (a, b)) - vr.ideal_piece_dim(g, (a, b))
        rows.append([a, b, dim, expected])
        if dim != expected:
            bad.append([a, b])
    method = table.meta["method"]
    verdict = "fail" if bad else ("pass" if method == "exact" else "evidence")
    return verdict, {"method": method, "rows[a,b,dim,quotient]": rows, "mismatch": bad}


def _e_upper(ctx, j):
    g = ctx.g
    table = _e_table(ctx, j)
    method = table.meta["method"]
    nonzero = [[a, b, d] for (a, b, _), d in sorted(table.entries.items()) if d]
    data = {"method": method, "bound": table.meta["bound"], "cells": len(table.entries), "nonzero": nonzero}
    if method == "projected":
        data["prime"] = table.meta["prime"]
    if not nonzero:
        return ("pass" if method == "exact" else "evidence"), data
    certs = []
    for a, b, _ in nonzero:
        if a < 1 or b < 1:
            c = cx.certify_nonvanishing(g, j, (a, b), seed=ctx.seed)
            certs.append({"bidegree": [a, b], "exact_lower_bound": c["lower_bound"], "cycles": c["cycles"]})
    data["certificates"] = certs
    return "fail", data


def _upper_row(off):
    def fn(ctx):
        return _e_upper(ctx, ctx.k + off)

    def skip(g):
        B = cm.characteristic_family(g)
        j = len(B.labels) + off
        if j > g.dim:
            return f"k_g + {off} exceeds dim g"
        if _worst_slice(g, B, j, 0) > SUITE_SPANNER_LIMIT:
            return "E slices exceed the suite size limit"
        return None

    return Check(f"complexes.08.k+{off}", f"E has no homology in degree k_g + {off}", fn, skip)


for _off in range(1, 8):
    _REGISTRY["complexes"].append(_upper_row(_off))


# --- varieties -----------------------------------------------------------------

@check("varieties", "01", "sampled pairs commute, first entry regular")
def _samples(ctx):
    g = ctx.g
    pairs = vr.commuting_samples(g, TANGENT_POINTS, ctx.rng("commuting"))
    ok = all(not any(bracket(g, x, y)) and is_regular(g, x) for x, y in pairs)
    return _verdict(ok), {"samples": len(pairs)}


@check("varieties", "02", "commutator map has rank n - rank at commuting pairs")
def _tangent(ctx):
    g = ctx.g
    pairs = vr.commuting_samples(g, TANGENT_POINTS, ctx.rng("tangent"))
    ranks = sorted({vr.commutator_jacobian_rank(g, x, y) for x, y in pairs})
    ok = ranks == [g.dim - g.rank]
    return _verdict(ok), {"samples": len(pairs), "ranks": ranks, "expected": g.dim - g.rank,
                          "commuting_dim": 2 * g.dim - ranks[0]}


@check("varieties", "03", "ideal pieces equal sampled vanishing pieces")
def _radical(ctx):
    g = ctx.g
    bound = ctx.bound(4 if g.rank == 1 else 2)
    need = max(monomial_count(g.dim, (a, bound - a)) for a in range(bound + 1))
    samples = max(ctx.samples, 3 * need)
    reports = [vr.radicality_report(g, bound, samples, ctx.seed + t, ctx.prime) for t in (0, 1)]
    rows = [[r["bidegree"][0], r["bidegree"][1], r["ideal"], r["vanishing"]] for r in reports[0]]
    agree = [[r["ideal"], r["vanishing"]] for r in reports[0]] == [[r["ideal"], r["vanishing"]] for r in reports[1]]
    ok = agree and all(r["verdict"] == "pass" for rep in reports for r in rep)
    return _verdict(ok), {"bound": bound, "samples": samples, "seeds": [ctx.seed, ctx.seed + 1],
                          "prime": ctx.prime, "seeds_agree": agree, "rows[a,b,ideal,vanishing]": rows}


def _primes_for(g):
    return [2, 3, 5, 7] if max(b.rank for b in g.blocks if b.kind != "z") == 1 else [3, 5]


@check("varieties", "04", "nilpotent-pair fibers have small dimension", _no_simple_factor)
def _propN(ctx):
    primes = _primes_for(ctx.g)
    recs = vr.property_N_check(ctx.g, primes)
    return "evidence", {"primes": primes, "factors": recs, "supports": all(r["supports"] for r in recs)}


@check("varieties", "05", "nilpotent-pair fiber over xi has q points", _not_sl2)
def _fiber(ctx):
    g = ctx.g
    xi = principal_triple(g)[0]
    counts = [[q, vr.fiber_count(g, xi, q)] for q in (2, 3, 5, 7)]
    est = vr.dimension_estimate(counts)
    ok = all(n == q for q, n in counts) and est == 1
    return _verdict(ok), {"counts": counts, "estimate": str(est), "bound": g.borel_dim + g.rank}


@check("varieties", "06", "sl2 strata dimensions 3, 4, 5", _not_sl2)
def _strata(ctx):
    dims = vr.strata_dims_sl2([3, 5, 7])
    got = [dims[t]["rounded"] for t in ("T3", "T4", "T5")]
    data = {"rounded": got, "estimates": {t: dims[t]["estimate"] for t in dims}}
    return ("evidence" if got == [3, 4, 5] else "fail"), data


def run_check(c, ctx, timings=False):
    t0 = time.perf_counter()
    try:
        verdict, data = c.fn(ctx)
    except cx.ResourceError as exc:
        raise cx.ResourceError(f"{c.id}: {exc}") from exc
    row = {"id": c.id, "anchor": c.anchor, "verdict": verdict, "data": _plain(data)}
    if timings:
        row["elapsed"] = round(time.perf_counter() - t0, 3)
    return row
