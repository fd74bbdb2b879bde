"""Evidence for variety-level statements: commuting pairs, graded ideal pieces,
nilpotent-pair equations and finite-field point counts."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels, linalg
from .charmod import commutator_polys, invariant_polynomials, lambda_polys
from .complexes import ResourceError
from .liealg import as_rng, bracket, build_algebra, centralizer, random_regular
from .polyalg import MultiPoly, monomial_basis, substitute_pencil

DEFAULT_POINT_BUDGET = 10**8  # q^n ceiling for brute-force enumeration


@dataclass
class VarietyReport:
    spec: str
    seeds: list = field(default_factory=list)
    primes: list = field(default_factory=list)
    records: list = field(default_factory=list)

    def add(self, name, inputs, data, verdict, elapsed=None):
        if verdict not in ("pass", "fail", "evidence"):
            raise ValueError(f"bad verdict {verdict!r}")
        rec = {"name": name, "inputs": inputs, "data": data, "verdict": verdict}
        if elapsed is not None:
            rec["elapsed"] = elapsed
        self.records.append(rec)
        return rec

    def to_json(self):
        return {"spec": self.spec, "seeds": self.seeds, "primes": self.primes, "records": self.records}


# --- commuting pairs ---------------------------------------------------------------

def sample_commuting(g, seed, bound=10):
    """(x, y) with x regular and y a random element of the centralizer of x."""
    rng = as_rng(seed)
    x = random_regular(g, rng, bound)
    basis = centralizer(g, x)
    y = [0] * g.dim
    for z in basis:
        c = rng.randint(-bound, bound)
        y = [a + c * b for a, b in zip(y, z)]
    y = [v.numerator if isinstance(v, Fraction) and v.denominator == 1 else v for v in y]
    return x, y


def commuting_samples(g, count, seed, bound=10):
    rng = as_rng(seed)
    return [sample_commuting(g, rng, bound) for _ in range(count)]


def commutator_jacobian_rank(g, x, y, p=None):
    """Rank of (u, v) -> [u, y] + [x, v], a linear map g x g -> g."""
    if any(bracket(g, x, y)):
        raise ValueError("[x, y] != 0: the tangent check needs a commuting pair")
    rows = []
    for i in range(g.dim):
        e = g.basis_vector(i)
        rows.append(bracket(g, e, y))
        rows.append(bracket(g, x, e))
    return linalg.rank(rows, p)


# --- graded pieces -----------------------------------------------------------------

def ideal_piece_dim(g, bidegree, p=None):
    """dim of span{ monomial * <b_k, [x, y]> } in bidegree (a, b)."""
    a, b = bidegree
    if a < 1 or b < 1:
        return 0
    lam = [f.terms for f in lambda_polys(g)]
    rows = []
    for m in monomial_basis(g.dim, (a - 1, b - 1)):
        for t in lam:
            if t:
                rows.append({tuple(u + v for u, v in zip(e, m)): c for e, c in t.items()})
    return linalg.rank(rows, p)


def _monomial_values(exps, point, p):
    pt = [linalg.reduce_mod(v, p) if p is not None else v for v in point]
    out = []
    for e in exps:
        v = 1
        for t, d in enumerate(e):
            if d:
                v = v * pt[t] ** d
                if p is not None:
                    v %= p
        out.append(v)
    return out


def vanishing_piece_dim(g, bidegree, samples, seed, p=linalg.BIG_PRIME, points=None):
    """Nullity of the evaluation matrix of bidegree-(a, b) monomials at sampled commuting pairs.

    Over F_p the nullity can only grow, so the value is an upper bound for the
    true dimension of the vanishing piece (as is any finite sample).
    """
    exps = monomial_basis(g.dim, bidegree)
    if not exps:
        return 0
    if samples < 3 * len(exps):
        raise ValueError(f"need at least {3 * len(exps)} samples for bidegree {tuple(bidegree)}")
    if points is None:
        points = commuting_samples(g, samples, seed)
    rows = [_monomial_values(exps, list(x) + list(y), p) for x, y in points[:samples]]
    return len(exps) - linalg.rank(rows, p)


def radicality_report(g, bound, samples, seed, p=linalg.BIG_PRIME):
    """Per bidegree a + b <= bound: ideal piece vs sampled vanishing piece."""
    points = commuting_samples(g, samples, seed)
    out = []
    for a in range(bound + 1):
        for b in range(bound + 1 - a):
            ideal = ideal_piece_dim(g, (a, b))
            van = vanishing_piece_dim(g, (a, b), samples, seed, p, points)
            out.append({
                "bidegree": [a, b],
                "ideal": ideal,
                "vanishing": van,
                "monomials": len(monomial_basis(g.dim, (a, b))),
                "seed": seed,
                "prime": p,
                "samples": samples,
                "verdict": "pass" if ideal == van else "fail",
            })
    return out


def stabilization(g, bidegree, seed, p=linalg.BIG_PRIME, start=None, factor=2, rounds=4):
    """Vanishing dims at growing sample counts; nonincreasing by construction."""
    exps = monomial_basis(g.dim, bidegree)
    n0 = start or max(3 * len(exps), 1)
    counts = [n0 * factor**i for i in range(rounds)]
    points = commuting_samples(g, counts[-1], seed)
    return [(c, vanishing_piece_dim(g, bidegree, c, seed, p, points)) for c in counts]


# --- nilpotent pairs and point counts ----------------------------------------------

def _simple_factors(g):
    """Each simple summand as a standalone algebra (None when g itself is simple)."""
    simple = [blk for blk in g.blocks if blk.kind != "z"]
    if len(simple) == 1 and len(g.blocks) == 1:
        return [g]
    return [build_algebra(f"{blk.kind}{blk.rank}") for blk in simple]


def nilpair_equations(g):
    """All nonzero p_{i,m,n}, m + n = d_i, for the invariants of a simple algebra."""
    if len(g.blocks) != 1 or g.is_abelian:
        raise ValueError("nilpair equations are formed per simple factor; pass a simple algebra")
    out = []
    for p in invariant_polynomials(g).polys:
        for _, q in substitute_pencil(p).items():
            if q:
                out.append(q)
    return out


def fiber_equations(g, xi):
    """Primitive integer forms of p_{i,m,n}(x, xi) as polynomials in x."""
    n = g.dim
    xs = [MultiPoly.var(n, i) for i in range(n)]
    images = xs + [MultiPoly.const(n, v) for v in xi]
    out = []
    for q in nilpair_equations(g):
        f = q.substitute(images)
        if f:
            out.append(f.primitive())
    return out


def _kernel_form(polys, nvars):
    eqs = []
    for f in polys:
        terms = sorted(f.terms.items())
        coeffs = np.array([int(c) for _, c in terms], dtype=np.int64)
        exps = np.array([list(e) for e, _ in terms], dtype=np.int64).reshape(len(terms), nvars)
        eqs.append((coeffs, exps))
    return eqs


def _check_prime(q):
    if q < 2 or any(q % d == 0 for d in range(2, math.isqrt(q) + 1)):
        raise ValueError(f"q = {q} must be prime (prime powers are not supported)")


def count_points(polys, nvars, q, budget=DEFAULT_POINT_BUDGET):
    """Number of common zeros in F_q^nvars of integer polynomials."""
    _check_prime(q)
    if q**nvars > budget:
        raise ResourceError(f"q^n = {q}^{nvars} exceeds point budget {budget}")
    reduced = [f for f in (f.reduce(q) for f in polys) if f.terms]
    return int(kernels.count_zeros(_kernel_form(reduced, nvars), nvars, q))


def fiber_count(g, xi, q, budget=DEFAULT_POINT_BUDGET):
    """#{x in F_q^n : p_{i,m,n}(x, xi) = 0 for all i, m, n}."""
    return count_points(fiber_equations(g, xi), g.dim, q, budget)


def dimension_estimate(counts):
    """Least-squares slope of log N against log q, as a rational."""
    qs = {q for q, _ in counts}
    if len(qs) < 2:
        raise ValueError("need counts at two distinct q")
    if any(nv < 1 for _, nv in counts):
        raise ValueError("zero count: the variety has no F_q-points there")
    xs = [math.log(q) for q, _ in counts]
    ys = [math.log(nv) for _, nv in counts]
    mx = sum(xs) / len(xs)
    my = sum(ys) / len(ys)
    sxx = sum((u - mx) ** 2 for u in xs)
    sxy = sum((u - mx) * (v - my) for u, v in zip(xs, ys))
    return Fraction(sxy / sxx).limit_denominator(10**6)


def property_N_check(g, primes, budget=DEFAULT_POINT_BUDGET):
    """Fiber-count evidence that dim N_{g, xi} < k_g + l, one record per simple factor."""
    if len(set(primes)) < 2:
        raise ValueError("property (N) estimate needs at least two primes")
    from .liealg import principal_triple

    out = []
    for h in _simple_factors(g):
        xi = principal_triple(h)[0]
        counts = [(q, fiber_count(h, xi, q, budget)) for q in primes]
        est = dimension_estimate(counts)
        rounded = round(est)
        bound = h.borel_dim + h.rank
        out.append({
            "factor": h.spec,
            "counts": [list(c) for c in counts],
            "estimate": str(est),
            "rounded": rounded,
            "residual": str(est - rounded),
            "bound": bound,
            "supports": rounded < bound,
            "verdict": "evidence",
        })
    return out


def _sl2_coordinates():
    g = build_algebra("A1")
    labels = list(g.basis_labels)
    return g, labels.index("h1"), labels.index("e1"), labels.index("f1")


def strata_equations(g=None):
    """Defining equations of T3, T4, T5 for sl2 on g x g (6 coordinates)."""
    if g is not None and g.spec != "A1":
        raise ValueError("strata are defined here for sl2 (A1) only")
    g, ih, ie, jf = _sl2_coordinates()
    n = g.dim
    x = [MultiPoly.var(2 * n, i) for i in range(n)]
    y = [MultiPoly.var(2 * n, n + i) for i in range(n)]
    nil_x = x[ih] * x[ih] + x[ie] * x[jf]
    nil_y = y[ih] * y[ih] + y[ie] * y[jf]
    minors = [x[i] * y[j] - x[j] * y[i] for i in range(n) for j in range(i + 1, n)]
    comm = commutator_polys(g)
    same_borel = MultiPoly.zero(2 * n)
    for k in range(n):
        for l in range(n):
            if g.form[k][l]:
                same_borel = same_borel + (comm[k] * comm[l]).scale(g.form[k][l])
    return {
        "T3": [nil_x, nil_y] + minors,
        "T4": minors,
        "T5": [same_borel.primitive()],
    }


def strata_dims_sl2(primes, budget=DEFAULT_POINT_BUDGET):
    """Dimension estimates of (T3, T4, T5) from point counts over F_q^6."""
    if len(set(primes)) < 2:
        raise ValueError("need at least two primes")
    eqs = strata_equations()
    out = {}
    for name, polys in eqs.items():
        counts = [(q, count_points(polys, 6, q, budget)) for q in primes]
        est = dimension_estimate(counts)
        out[name] = {"counts": [list(c) for c in counts], "estimate": str(est), "rounded": round(est)}
    return out


def timed(fn, *args, **kwargs):
    t0 = time.perf_counter()
    val = fn(*args, **kwargs)
    return val, time.perf_counter() - t0
