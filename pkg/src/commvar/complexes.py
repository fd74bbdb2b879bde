"""Graded slices of the canonical complex, the E-complex and the D_k complexes.

Chains are sparse dicts keyed by ``(exponent, subset)``: a monomial in the
coordinates times a basis wedge e_S.  A slice stores, per degree, a spanning
set and the images of its members under the differential; homology is read
off from exact ranks of those two families.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from math import comb

import numpy as np

from . import linalg
from .charmod import characteristic_family, evaluate_span, lambda_polys
from .liealg import bracket, pair
from .polyalg import WedgePoly, _merge_sign, monomial_basis, monomial_count


class ResourceError(RuntimeError):
    """A computation would exceed its configured size budget."""


class XgPointError(ValueError):
    """The point lies in X_g: the evaluated characteristic span is rank deficient."""


DEFAULT_BUDGET = 2_000_000  # stored chain terms per computation


@dataclass
class Piece:
    degree: int
    bidegree: tuple
    spanners: list
    images: list
    ambient: list | None = None  # explicit basis of the ambient space, when known


@dataclass
class ComplexSlice:
    bidegree: tuple
    direction: str  # "homological" (d lowers degree) or "cohomological"
    pieces: dict
    bottom: int
    top: int
    op: object = field(default=None, repr=False)  # differential on arbitrary chains

    def target(self, j):
        return j - 1 if self.direction == "homological" else j + 1

    def source(self, j):
        return j + 1 if self.direction == "homological" else j - 1

    def matrix(self, j):
        """Matrix of d_j: one row per spanner of degree j, columns over the target basis."""
        piece = self.pieces[j]
        tgt = self.pieces.get(self.target(j))
        if tgt is not None and tgt.ambient is not None:
            cols = tgt.ambient
        else:
            cols = sorted({k for img in piece.images for k in img})
        index = {k: c for c, k in enumerate(cols)}
        out = []
        for img in piece.images:
            row = [0] * len(cols)
            for k, v in img.items():
                row[index[k]] = v
            out.append(row)
        return out

    def check_shapes(self):
        for j, piece in self.pieces.items():
            if len(piece.images) != len(piece.spanners):
                return False
            tgt = self.pieces.get(self.target(j))
            if tgt is not None and tgt.ambient is not None:
                allowed = set(tgt.ambient)
                if any(k not in allowed for img in piece.images for k in img):
                    return False
        return True

    def d_squared_zero(self, degrees=None):
        """d(d(s)) == 0 for every spanner (of the given degrees), using the slice's differential."""
        if self.op is None:
            raise ValueError("slice carries no differential operator")
        for j, piece in self.pieces.items():
            if degrees is not None and j not in degrees:
                continue
            for img in piece.images:
                if img and self.op(img):
                    return False
        return True

    def is_subcomplex(self, p=None):
        """d maps each spanning set into the span of the next spanning set."""
        for j, piece in self.pieces.items():
            tgt = self.pieces.get(self.target(j))
            if tgt is None:
                continue
            base = linalg.rank(tgt.spanners, p)
            imgs = [img for img in piece.images if img]
            if imgs and linalg.rank(tgt.spanners + imgs, p) != base:
                return False
        return True

    def dims(self, p=None):
        return {j: linalg.rank(pc.spanners, p) for j, pc in sorted(self.pieces.items())}


def homology_dims(slice_, p=None, degrees=None):
    """Homology dimension per degree: rank S_j - rank d(S_j) - rank d(S_incoming).

    Only degrees whose incoming neighbour is present (or lies outside the
    complex) are reported.
    """
    out = {}
    for j in sorted(slice_.pieces):
        if degrees is not None and j not in degrees:
            continue
        src = slice_.source(j)
        if src in slice_.pieces:
            incoming = linalg.rank(slice_.pieces[src].images, p)
        elif slice_.bottom <= src <= slice_.top:
            continue
        else:
            incoming = 0
        piece = slice_.pieces[j]
        dim = linalg.rank(piece.spanners, p) - linalg.rank(piece.images, p) - incoming
        if dim < 0:
            raise ArithmeticError(f"negative homology at degree {j}: spanning sets are not a complex")
        out[j] = dim
    return out


# --- chain helpers --------------------------------------------------------------

def _flatten(w):
    """WedgePoly -> {(exp, subset): coeff}."""
    out = {}
    for s, f in w.parts.items():
        for e, c in f.terms.items():
            out[(e, s)] = c
    return out


def _shift(chain, exp):
    if not any(exp):
        return dict(chain)
    return {(tuple(a + b for a, b in zip(e, exp)), s): c for (e, s), c in chain.items()}


def _accumulate(out, key, c):
    v = out.get(key, 0) + c
    if v:
        out[key] = v
    else:
        out.pop(key, None)


class _Contraction:
    """The canonical differential: odd derivation e_k -> <b_k, [x, y]>."""

    def __init__(self, g):
        self.g = g
        self.lam = [{e: c for e, c in f.terms.items()} for f in lambda_polys(g)]
        self._cache = {}

    def of_subset(self, s):
        got = self._cache.get(s)
        if got is None:
            got = {}
            for pos, k in enumerate(s):
                rest = s[:pos] + s[pos + 1:]
                sign = -1 if pos % 2 else 1
                for e, c in self.lam[k].items():
                    _accumulate(got, (e, rest), sign * c)
            self._cache[s] = got
        return got

    def __call__(self, chain):
        out = {}
        for (e, s), c in chain.items():
            for (e2, s2), c2 in self.of_subset(s).items():
                _accumulate(out, (tuple(a + b for a, b in zip(e, e2)), s2), c * c2)
        return out


def _check_budget(size, budget, what):
    if budget is not None and size > budget:
        raise ResourceError(f"{what}: {size} coordinates exceeds budget {budget}")


# --- canonical complex ----------------------------------------------------------

def canonical_slice(g, bidegree, wedge_range, budget=DEFAULT_BUDGET):
    """Slice of C(g) = C[g x g] (x) Lambda(g) with d(e_v) = <v, [x, y]>.

    ``bidegree`` is the coefficient bidegree at the top wedge degree of
    ``wedge_range`` (an int or an inclusive (lo, hi) pair); each step down in
    wedge degree raises the bidegree by (1, 1).  The slice also holds the
    target piece of the lowest requested degree.
    """
    a, b = bidegree
    if a < 0 or b < 0:
        raise ValueError("bidegree must be nonnegative")
    lo, hi = (wedge_range, wedge_range) if isinstance(wedge_range, int) else wedge_range
    n = g.dim
    lo = max(lo, 0)
    hi = min(hi, n)
    d = _Contraction(g)
    pieces = {}
    for j in range(hi, max(lo - 1, 0) - 1, -1):
        shift = hi - j
        bd = (a + shift, b + shift)
        monos = monomial_basis(n, bd)
        subsets = list(combinations(range(n), j))
        _check_budget(len(monos) * len(subsets), budget, f"canonical slice degree {j}")
        keys = [(m, s) for m in monos for s in subsets]
        spanners = [{k: 1} for k in keys]
        images = [d({k: 1}) for k in keys]
        pieces[j] = Piece(j, bd, spanners, images, keys)
    return ComplexSlice(bidegree, "homological", pieces, 0, n, d)


# --- E-complex ------------------------------------------------------------------

def characteristic_volume(B):
    """omega: the exterior product of all generators.

    Within each invariant the generators are taken with x-degree decreasing,
    so for sl2 omega = (2x) ^ (2y).
    """
    order = sorted(range(len(B.labels)), key=lambda t: (B.labels[t][0], -B.labels[t][1]))
    g = B.g
    omega = None
    for t in order:
        w = WedgePoly.from_vector(B.gens[t], g.dim)
        omega = w if omega is None else omega.wedge(w)
    return omega


def volume_bidegree(B):
    """Coefficient bidegree of omega: (sum (m - 1), sum n)."""
    return (sum(m - 1 for _, m, _ in B.labels), sum(n for _, _, n in B.labels))


class _Volume:
    """Cached omega ^ e_S and d(omega ^ e_S) as flattened chains."""

    def __init__(self, g, omega, bid):
        self.g = g
        self.omega = omega
        self.bid = bid
        self.d = _Contraction(g)
        self._cache = {}

    def get(self, s):
        got = self._cache.get(s)
        if got is None:
            w = self.omega.wedge(WedgePoly.basis(self.g.dim, 2 * self.g.dim, s)) if s else self.omega
            flat = _flatten(w)
            got = (flat, self.d(flat))
            self._cache[s] = got
        return got


def _volume_for(g, omega, bid):
    key = ("volume", id(omega))
    vol = g._cache.get(key)
    if vol is None or vol.omega is not omega:
        vol = _Volume(g, omega, bid)
        g._cache[key] = vol
    return vol


def _e_piece(vol, k, j, bidegree, budget):
    """E_j at absolute coefficient bidegree: monomial * omega ^ e_S with |S| = j - k."""
    g = vol.g
    n = g.dim
    wa, wb = vol.bid
    a, b = bidegree
    if j < k or j > n or a < wa or b < wb:
        return Piece(j, bidegree, [], [])
    monos = monomial_basis(n, (a - wa, b - wb))
    subsets = list(combinations(range(n), j - k))
    _check_budget(len(monos) * len(subsets), budget, f"E slice degree {j}")
    spanners, images = [], []
    for s in subsets:
        flat, dflat = vol.get(s)
        for m in monos:
            spanners.append(_shift(flat, m))
            images.append(_shift(dflat, m))
    return Piece(j, bidegree, spanners, images)


def e_complex_slice(g, omega, bidegree, j, budget=DEFAULT_BUDGET):
    """Degrees j+1, j, j-1 of E(g) = C[g x g] omega ^ Lambda(g) around absolute bidegree (a, b).

    The degree-j piece has coefficient bidegree (a, b); its neighbours sit at
    (a - 1, b - 1) and (a + 1, b + 1).  Below omega's bidegree the piece is empty.
    """
    B = characteristic_family(g)
    k = len(B.labels)
    if j < k:
        raise ValueError(f"E_j is zero below degree k_g = {k}")
    vol = _volume_for(g, omega, volume_bidegree(B))
    a, b = bidegree
    pieces = {}
    for jj, bd in ((j + 1, (a - 1, b - 1)), (j, (a, b)), (j - 1, (a + 1, b + 1))):
        if k <= jj <= g.dim:
            pieces[jj] = _e_piece(vol, k, jj, bd, budget)
    return ComplexSlice(tuple(bidegree), "homological", pieces, k, g.dim, vol.d)


def omega_is_cycle(g, omega):
    """d(omega) == 0, expanded term by term (omega rescaled to integer coefficients)."""
    flat = linalg._integral(_flatten(omega))
    return not _Contraction(g)(flat)


@dataclass
class HomologyTable:
    """(a, b, j) -> dimension, with a JSON row form."""

    entries: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.entries[key]

    def merge(self, other):
        out = dict(self.entries)
        for key, v in other.entries.items():
            if key in out and out[key] != v:
                raise ValueError(f"conflicting entries at {key}")
            out[key] = v
        return HomologyTable(out, dict(self.meta))

    def rows(self):
        return [{"a": a, "b": b, "j": j, "dim": d} for (a, b, j), d in sorted(self.entries.items())]

    @classmethod
    def from_rows(cls, rows):
        return cls({(r["a"], r["b"], r["j"]): r["dim"] for r in rows})

    def all_zero(self):
        return all(v == 0 for v in self.entries.values())


def omega_size_bound(B):
    """Upper bound on the number of terms of omega (monomials times k-subsets)."""
    n = B.g.dim
    return monomial_count(n, volume_bidegree(B)) * comb(n, len(B.labels))


def _e_omega(g, B):
    omega = g._cache.get("omega")
    if omega is None:
        omega = g._cache["omega"] = characteristic_volume(B)
    return omega


def _e_sizes(g, B, j, bidegree):
    """Spanner counts of E_{j+1}, E_j, E_{j-1} around multiplier bidegree (a, b)."""
    k, n = len(B.labels), g.dim
    a, b = bidegree
    out = []
    for jj, shift in ((j + 1, -1), (j, 0), (j - 1, 1)):
        if k <= jj <= n:
            out.append(monomial_count(n, (a + shift, b + shift)) * comb(n, jj - k))
    return out or [0]


def _e_cost(g, B, j, bidegree):
    return sum(_e_sizes(g, B, j, bidegree))


def e_homology(g, j, bidegree, p=None, budget=DEFAULT_BUDGET):
    """H_j(E) at multiplier bidegree (a, b), i.e. coefficient bidegree (a, b) + bideg(omega)."""
    B = characteristic_family(g)
    _check_budget(_e_cost(g, B, j, bidegree) * omega_size_bound(B), budget, f"E slice j={j} {tuple(bidegree)}")
    wa, wb = volume_bidegree(B)
    sl = e_complex_slice(g, _e_omega(g, B), (bidegree[0] + wa, bidegree[1] + wb), j, None)
    return homology_dims(sl, p, degrees={j})[j]


def _mono_values(exps, point, p):
    out = []
    for e in exps:
        v = 1
        for t, d in enumerate(e):
            if d:
                v = v * pow(point[t], d, p) % p
        out.append(v)
    return out


def _reduced_terms(f, p):
    return [(linalg.reduce_mod(c, p), e) for e, c in f.terms.items()]


def _eval_reduced(terms, z, p):
    acc = 0
    for c, e in terms:
        for t, d in enumerate(e):
            if d:
                c = c * pow(z[t], d, p) % p
        acc += c
    return acc % p


class _Projector:
    """Random evaluation functionals on E pieces, all modulo p.

    A chain f (x) e_S of multiplier bidegree (a, b) in degree j is sent to
    (L_{j,t}(f(z_t) omega(z_t) ^ e_S))_t for random points z_t and random
    linear forms L_{j,t}; the rank of the projected family is a lower bound
    for the true rank and equals it for generic choices.
    """

    def __init__(self, g, B, npoints, p, seed):
        rng = random.Random(seed)
        self.g, self.B, self.p = g, B, p
        self.k = len(B.labels)
        n = g.dim
        gens = [[_reduced_terms(c, p) for c in vec] for vec in B.gens]
        lam = [_reduced_terms(f, p) for f in lambda_polys(g)]
        self.ksets = list(combinations(range(n), self.k))
        self.points, self.omegas, self.lams = [], [], []
        for _ in range(npoints):
            z = [rng.randrange(p) for _ in range(2 * n)]
            om = {(): 1}
            for vec in gens:
                v = {(t,): _eval_reduced(c, z, p) for t, c in enumerate(vec)}
                om = _wedge_numeric(om, v, p)
            self.points.append(z)
            self.omegas.append(np.array([om.get(u, 0) for u in self.ksets], dtype=np.int64))
            self.lams.append([_eval_reduced(f, z, p) for f in lam])
        self._rng = rng
        self._forms = {}
        self._tables = {}

    def forms(self, j):
        got = self._forms.get(j)
        if got is None:
            size = comb(self.g.dim, j)
            got = [np.array([self._rng.randrange(1, self.p) for _ in range(size)], dtype=np.int64)
                   for _ in self.points]
            self._forms[j] = got
        return got

    def table(self, m):
        """Signs and union indices for e_U ^ e_S, |U| = k, |S| = m."""
        got = self._tables.get(m)
        if got is None:
            n = self.g.dim
            msets = list(combinations(range(n), m))
            jindex = {u: i for i, u in enumerate(combinations(range(n), self.k + m))}
            sign = np.zeros((len(msets), len(self.ksets)), dtype=np.int64)
            idx = np.zeros_like(sign)
            for si, sv in enumerate(msets):
                for ui, uv in enumerate(self.ksets):
                    sg, un = _merge_sign(uv, sv)
                    if sg:
                        sign[si, ui] = sg
                        idx[si, ui] = jindex[un]
            got = self._tables[m] = (msets, sign, idx)
        return got

    def phi(self, m):
        """Per point, the vector S -> L_{k+m,t}(omega(z_t) ^ e_S) over m-subsets."""
        msets, sign, idx = self.table(m)
        out = []
        for om, c in zip(self.omegas, self.forms(self.k + m)):
            prod = om[None, :] * c[idx] % self.p
            out.append((sign * prod).sum(axis=1) % self.p)
        return msets, out

    def piece(self, j, bidegree):
        """Projected spanners of E_j at multiplier bidegree and their projected images."""
        n, k, p = self.g.dim, self.k, self.p
        a, b = bidegree
        if j < k or j > n or a < 0 or b < 0:
            return [], []
        m = j - k
        exps = monomial_basis(n, (a, b))
        msets, phi = self.phi(m)
        npts = len(self.points)
        if m > 0:
            lower, phi_low = self.phi(m - 1)
            lindex = {u: i for i, u in enumerate(lower)}
        sign = -1 if k % 2 else 1
        vals = np.zeros((len(msets), npts), dtype=np.int64)
        dvals = np.zeros_like(vals)
        mono = np.zeros((len(exps), npts), dtype=np.int64)
        for t in range(npts):
            mono[:, t] = _mono_values(exps, self.points[t], p)
            vals[:, t] = phi[t]
            if m > 0:
                lam = self.lams[t]
                for si, sv in enumerate(msets):
                    acc = 0
                    for pos, q in enumerate(sv):
                        if lam[q]:
                            term = lam[q] * int(phi_low[t][lindex[sv[:pos] + sv[pos + 1:]]])
                            acc += -term if pos % 2 else term
                    dvals[si, t] = sign * acc % p
        rows = (vals[:, None, :] * mono[None, :, :] % p).reshape(-1, npts)
        images = (dvals[:, None, :] * mono[None, :, :] % p).reshape(-1, npts)
        return rows.tolist(), images.tolist()


PROJECTED_ROW_LIMIT = 6000


def _projector_seed(seed, j, bidegree):
    a, b = bidegree
    return seed * 1000003 + j * 1009 + a * 31 + b


def e_homology_projected(g, j, bidegree, p=linalg.BIG_PRIME, seed=0):
    """H_j(E) at multiplier bidegree (a, b) from projected ranks modulo p (evidence, not proof)."""
    B = characteristic_family(g)
    a, b = bidegree
    need = max(_e_sizes(g, B, j, bidegree))
    if need > PROJECTED_ROW_LIMIT:
        raise ResourceError(f"projected E slice j={j} {tuple(bidegree)}: {need} spanners exceeds {PROJECTED_ROW_LIMIT}")
    proj = _Projector(g, B, need + 8, p, _projector_seed(seed, j, bidegree))
    rows, images = proj.piece(j, (a, b))
    _, incoming = proj.piece(j + 1, (a - 1, b - 1))
    dim = linalg.rank(rows, p) - linalg.rank(images, p) - linalg.rank(incoming, p)
    return max(dim, 0)


def _generator_chains(B):
    """Each generator as a flattened 1-form chain, with its coefficient bidegree."""
    out = []
    for (_, m, nn), vec in zip(B.labels, B.gens):
        chain = {}
        for t, f in enumerate(vec):
            for e, c in f.terms.items():
                chain[(e, (t,))] = c
        out.append((chain, (m - 1, nn)))
    return out


def _wedge_subset(chain, subset):
    """chain ^ e_subset."""
    out = {}
    for (e, s), c in chain.items():
        sign, u = _merge_sign(s, subset)
        if sign:
            _accumulate(out, (e, u), sign * c)
    return out


def _volume_at(B, z):
    """omega evaluated at a point, as {k-subset: value}."""
    order = sorted(range(len(B.labels)), key=lambda t: (B.labels[t][0], -B.labels[t][1]))
    om = {(): 1}
    for t in order:
        vec = {(i,): f.evaluate(z) for i, f in enumerate(B.gens[t]) if f}
        om = _wedge_numeric(om, {s: v for s, v in vec.items() if v})
    return om


def certify_nonvanishing(g, j, bidegree, points=None, seed=0, p=linalg.BIG_PRIME):
    """Exact lower bound for H_j(E) at a multiplier bidegree with no incoming boundaries.

    Candidates are chains omega ^ beta, beta a (j - k)-form with coefficients
    of the given bidegree, such that d(beta) = sum eps_i ^ eta_i exactly; then
    d(omega ^ beta) = +-omega ^ d(beta) = 0 because omega is a cycle.  The
    relation space is found modulo p, lifted to the rationals and re-checked
    exactly.  Independence of the cycles is certified by exact evaluation at
    integer points.  With E_{j+1} empty at (a - 1, b - 1) nothing is a
    boundary, so the rank is a lower bound for dim H_j.
    """
    a, b = bidegree
    B = characteristic_family(g)
    k, n = len(B.labels), g.dim
    q = j - k
    if a < 0 or b < 0:
        raise ValueError("bidegree must be nonnegative")
    if not (a < 1 or b < 1 or j + 1 > n):
        raise ValueError("E_{j+1} is nonzero in the incoming bidegree; no boundary-free certificate")
    empty = {"j": j, "bidegree": [a, b], "candidates": 0, "unverified": 0, "lower_bound": 0}
    if q < 0 or j > n:
        return empty
    d = _Contraction(g)
    exps = monomial_basis(n, (a, b))
    betas = [(e, s) for s in combinations(range(n), q) for e in exps]
    rows = [d({key: 1}) for key in betas]
    etas = []
    if q >= 2:
        for chain, (ga, gb) in _generator_chains(B):
            for e in monomial_basis(n, (a + 1 - ga, b + 1 - gb)):
                for t in combinations(range(n), q - 2):
                    etas.append(_shift(_wedge_subset(chain, t), e))
    allrows = rows + [{key: -c for key, c in r.items()} for r in etas]
    cols = sorted({key for r in allrows for key in r})
    index = {key: c for c, key in enumerate(cols)}
    transpose = [[0] * len(allrows) for _ in cols]
    for r, row in enumerate(allrows):
        for key, c in row.items():
            transpose[index[key]][r] = c
    kernel = linalg.nullspace(transpose, len(allrows), p) if cols else [
        [1 if i == r else 0 for i in range(len(allrows))] for r in range(len(allrows))]
    verified, failed = [], 0
    for vec in kernel:
        coeffs = [linalg.rational_reconstruct(int(v), p) for v in vec]
        if any(c is None for c in coeffs):
            failed += 1
            continue
        total = {}
        for c, row in zip(coeffs, allrows):
            if c:
                for key, v in row.items():
                    _accumulate(total, key, c * v)
        if total:
            failed += 1
            continue
        beta = {betas[i]: c for i, c in enumerate(coeffs[:len(betas)]) if c}
        if beta:
            verified.append(beta)
    rng = random.Random(seed)
    npoints = points or len(verified) + 3
    evals = [[] for _ in verified]
    for _ in range(npoints):
        z = [rng.randint(-20, 20) for _ in range(2 * n)]
        om = _volume_at(B, z)
        for row, beta in zip(evals, verified):
            bz = {}
            for (e, s), c in beta.items():
                v = c
                for t, dt in enumerate(e):
                    if dt:
                        v *= z[t] ** dt
                _accumulate(bz, s, v)
            w = _wedge_numeric(om, bz)
            row.extend(w.get(u, 0) for u in combinations(range(n), j))
    return {
        "j": j,
        "bidegree": [a, b],
        "candidates": len(kernel),
        "unverified": failed,
        "cycles": len(verified),
        "points": npoints,
        "lower_bound": linalg.rank(evals) if evals else 0,
    }


def hilbert_table(g, j, bound, p=None, budget=DEFAULT_BUDGET, method="exact", seed=0):
    """H_j(E(g)) for every multiplier bidegree (a, b) with a + b <= bound.

    ``method="exact"`` raises ResourceError before doing any work when the
    slices exceed ``budget``; ``"projected"`` uses random evaluation
    functionals modulo a large prime; ``"auto"`` picks exact when it fits.
    """
    B = characteristic_family(g)
    k = len(B.labels)
    n = g.dim
    cells = [(a, bb) for a in range(bound + 1) for bb in range(bound + 1 - a)]
    exact_cost = sum(_e_cost(g, B, j, c) for c in cells) * omega_size_bound(B)
    if method == "auto":
        method = "exact" if exact_cost <= budget else "projected"
    if method == "exact":
        _check_budget(exact_cost, budget, f"hilbert table j={j} bound={bound}")
    elif method == "projected":
        worst = max(max(_e_sizes(g, B, j, c)) for c in cells)
        if worst > PROJECTED_ROW_LIMIT:
            raise ResourceError(f"hilbert table j={j} bound={bound}: {worst} spanners exceeds {PROJECTED_ROW_LIMIT}")
    else:
        raise ValueError(f"unknown method {method!r}")
    meta = {"algebra": g.spec, "j": j, "bound": bound, "grading": "multiplier", "method": method}
    if method == "projected":
        meta["prime"] = p or linalg.BIG_PRIME
        meta["seed"] = seed
    table = HomologyTable(meta=meta)
    for a, bb in cells:
        if j < k or j > n:
            table.entries[(a, bb, j)] = 0
        elif method == "exact":
            table.entries[(a, bb, j)] = e_homology(g, j, (a, bb), p, None)
        else:
            table.entries[(a, bb, j)] = e_homology_projected(g, j, (a, bb), p or linalg.BIG_PRIME, seed)
    return table


def omega_cycle_check(g, B=None, budget=10 * DEFAULT_BUDGET):
    """(holds, method): d(omega) = 0, expanded symbolically when omega fits the budget.

    Otherwise the statement follows from d(eps) = <eps, [x, y]> = 0 for every
    generator, since d is a derivation; that identity is checked exactly.
    """
    from .charmod import cycle_identity_check

    B = B or characteristic_family(g)
    if omega_size_bound(B) <= budget:
        return omega_is_cycle(g, _e_omega(g, B)), "symbolic"
    return cycle_identity_check(g, B), "derivation"


# --- pointwise complexes --------------------------------------------------------

def koszul_point_check(g, x, y, p=None):
    """Exactness of (Lambda g, contraction by v -> <v, [x, y]>) in positive degrees."""
    c = bracket(g, x, y)
    if not any(c):
        raise ValueError("[x, y] = 0: the point is commuting")
    lam = [pair(g, g.basis_vector(k), c) for k in range(g.dim)]
    hom = koszul_point_homology(g, lam, p)
    return all(v == 0 for j, v in hom.items() if j >= 1)


def koszul_point_homology(g, lam, p=None):
    n = g.dim
    empty = ()

    def op(chain):
        out = {}
        for (e, s), c in chain.items():
            for pos, k in enumerate(s):
                if lam[k]:
                    sign = -1 if pos % 2 else 1
                    _accumulate(out, (e, s[:pos] + s[pos + 1:]), sign * c * lam[k])
        return out

    pieces = {}
    for j in range(n + 1):
        keys = [(empty, s) for s in combinations(range(n), j)]
        spanners = [{k: 1} for k in keys]
        pieces[j] = Piece(j, (0, 0), spanners, [op(sp) for sp in spanners], keys)
    sl = ComplexSlice((0, 0), "homological", pieces, 0, n, op)
    return homology_dims(sl, p)


def _de_rham_op(chain):
    """d(f (x) alpha) = sum_t d_t f (x) v_t ^ alpha."""
    out = {}
    for (e, s), c in chain.items():
        for t, et in enumerate(e):
            if not et:
                continue
            sign, u = _merge_sign((t,), s)
            if not sign:
                continue
            e2 = e[:t] + (et - 1,) + e[t + 1:]
            _accumulate(out, (e2, u), sign * c * et)
    return out


def _monomials(n, d):
    out = []
    for combo in combinations_with_replacement(range(n), d):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return out


def de_rham_control(m, truncation, p=None):
    """Cohomology of S(V) (x) Lambda(V), dim V = m, per polynomial weight w <= truncation.

    Entry (w, 0, j) is the dimension in wedge degree j on the weight-w piece
    S^(w-j) V (x) Lambda^j V.
    """
    if m < 0 or truncation < 0:
        raise ValueError("dimensions must be nonnegative")
    table = HomologyTable(meta={"dim": m, "truncation": truncation})
    for w in range(truncation + 1):
        pieces = {}
        top = min(w, m)
        for j in range(top + 1):
            keys = [(e, s) for e in _monomials(m, w - j) for s in combinations(range(m), j)]
            spanners = [{k: 1} for k in keys]
            pieces[j] = Piece(j, (w, 0), spanners, [_de_rham_op(sp) for sp in spanners], keys)
        sl = ComplexSlice((w, 0), "cohomological", pieces, 0, top, _de_rham_op)
        for j, v in homology_dims(sl, p).items():
            table.entries[(w, 0, j)] = v
    return table


def de_rham_totals(table):
    """Sum a de Rham table over weights: wedge degree -> dimension."""
    out = {}
    for (_, _, j), v in table.entries.items():
        out[j] = out.get(j, 0) + v
    return [out[j] for j in sorted(out)]


def _wedge_numeric(a, b, p=None):
    out = {}
    for s, c in a.items():
        for t, d in b.items():
            sign, u = _merge_sign(s, t)
            if sign:
                _accumulate(out, u, sign * c * d if p is None else sign * c * d % p)
    if p is not None:
        out = {u: v % p for u, v in out.items() if v % p}
    return out


def _linear_product(vectors, n):
    """prod_i (sum_t v_i[t] X_t) as {exponent: coeff}."""
    poly = {(0,) * n: 1}
    for v in vectors:
        nxt = {}
        for e, c in poly.items():
            for t, vt in enumerate(v):
                if vt:
                    e2 = e[:t] + (e[t] + 1,) + e[t + 1:]
                    _accumulate(nxt, e2, c * vt)
        poly = nxt
    return poly


def d_complex_at_point(g, k, x, y, p=None, B=None):
    """D_k(g, L) with L = V(x, y); cohomological, degrees r-1 .. r+k (r = dim L).

    Degree r-1 is S^k(L) omega_L, included into S^k(g) omega_L; degree r+i is
    S^(k-i)(g) omega_L ^ Lambda^i(g) with the de Rham differential.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    B = B or characteristic_family(g)
    kg = len(B.labels)
    r, basis = evaluate_span(B, x, y, p)
    if r < kg:
        raise XgPointError(f"point lies in X_g: evaluated span has dimension {r} < k_g = {kg}")
    n = g.dim
    if p is None:
        # rescaling basis vectors keeps L and only rescales omega_L
        basis = [[row.get(t, 0) for t in range(n)] for row in (linalg._integral(dict(enumerate(v))) for v in basis)]
    omega_l = {(): 1}
    for v in basis:
        omega_l = _wedge_numeric(omega_l, {(t,): c for t, c in enumerate(v) if c})
    pieces = {}
    spanners = []
    for combo in combinations_with_replacement(range(r), k):
        poly = _linear_product([basis[i] for i in combo], n)
        chain = {}
        for e, c in poly.items():
            for s, w in omega_l.items():
                _accumulate(chain, (e, s), c * w)
        spanners.append(chain)
    pieces[r - 1] = Piece(r - 1, (k, 0), spanners, [dict(sp) for sp in spanners])
    for i in range(k + 1):
        monos = _monomials(n, k - i)
        spanners = []
        for s in combinations(range(n), i):
            wedge = _wedge_numeric(omega_l, {s: 1})
            if not wedge:
                continue
            for m in monos:
                spanners.append({(m, u): c for u, c in wedge.items()})
        pieces[r + i] = Piece(r + i, (k - i, 0), spanners, [_de_rham_op(sp) for sp in spanners])
    return ComplexSlice((k, 0), "cohomological", pieces, r - 1, r + k, _de_rham_op)


def d_complex_acyclic(g, k, x, y, p=None):
    sl = d_complex_at_point(g, k, x, y, p)
    return all(v == 0 for v in homology_dims(sl, p).values())
