"""Reductive Lie algebras given by structure constants.

Built-in types are A_r (sl_{r+1}), B_r (so_{2r+1}), C_r (sp_{2r}) and abelian
centers z_d, combined with ``+``.  Each simple factor gets a Chevalley basis
ordered as (Cartan, positive roots by height, negative roots by height),
computed from the defining matrix representation.
"""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg

MAX_REGULAR_RETRIES = 20


class AlgebraSpecError(ValueError):
    """The algebra spec string does not parse."""


class UnsupportedAlgebraError(AlgebraSpecError):
    """The spec names a type that is not built in (D, exceptional)."""


# --- small exact matrix helpers -------------------------------------------

def _zeros(n):
    return [[0] * n for _ in range(n)]


def _unit(n, i, j, c=1):
    m = _zeros(n)
    m[i][j] = c
    return m


def _madd(*ms):
    n = len(ms[0])
    return [[sum(m[i][j] for m in ms) for j in range(n)] for i in range(n)]


def _mscale(m, c):
    return [[c * v for v in row] for row in m]


def _mmul(a, b):
    n = len(a)
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(a[i], bt[j]) if x and y) for j in range(n)] for i in range(n)]


def _comm(a, b):
    ab, ba = _mmul(a, b), _mmul(b, a)
    return [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(ab, ba)]


def _transpose(m):
    return [list(r) for r in zip(*m)]


def _is_zero(m):
    return all(not v for row in m for v in row)


def _norm(v):
    v = Fraction(v)
    return v.numerator if v.denominator == 1 else v


# --- simple factors ---------------------------------------------------------

def _simple_root_vectors(kind, r):
    """Defining-representation size and the simple root vectors e_1..e_r."""
    if kind == "A":
        N = r + 1
        return N, [_unit(N, i, i + 1) for i in range(r)]
    if kind == "B":
        # form J with J[0][0] = 1 and J pairing i <-> r+i, basis indices 0..2r
        N = 2 * r + 1
        es = [_madd(_unit(N, i, i + 1), _unit(N, r + i + 1, r + i, -1)) for i in range(1, r)]
        es.append(_madd(_unit(N, r, 0), _unit(N, 0, 2 * r, -1)))
        return N, es
    if kind == "C":
        # J = [[0, I], [-I, 0]], basis indices 0..2r-1
        N = 2 * r
        es = [_madd(_unit(N, i, i + 1), _unit(N, r + i + 1, r + i, -1)) for i in range(r - 1)]
        es.append(_unit(N, r - 1, 2 * r - 1))
        return N, es
    raise UnsupportedAlgebraError(f"type {kind} is not built in")


def _eigen(h, e):
    """The scalar c with [h, e] = c e."""
    m = _comm(h, e)
    for i, row in enumerate(e):
        for j, v in enumerate(row):
            if v:
                return Fraction(m[i][j], v)
    raise ValueError("zero root vector")


@dataclass(frozen=True)
class SimpleFactor:
    kind: str
    rank: int
    size: int  # defining representation dimension
    cartan_matrix: tuple
    roots: tuple  # positive roots in simple-root coordinates, by height
    matrices: tuple  # basis matrices in the local order h, e_+, f_+

    @property
    def dim(self):
        return len(self.matrices)


def _build_factor(kind, r):
    N, es = _simple_root_vectors(kind, r)
    fs, hs = [], []
    for e in es:
        h0 = _comm(e, _transpose(e))
        c = Fraction(2) / _eigen(h0, e)
        f = _mscale(_transpose(e), c)
        fs.append(f)
        hs.append(_comm(e, f))
    A = [[_eigen(hs[i], es[j]) for j in range(r)] for i in range(r)]
    A = [[int(v) for v in row] for row in A]

    simple = [tuple(1 if k == i else 0 for k in range(r)) for i in range(r)]
    evec = {s: es[i] for i, s in enumerate(simple)}
    fvec = {s: fs[i] for i, s in enumerate(simple)}
    found = list(simple)
    known = set(simple)
    layer = list(simple)
    while layer:
        nxt = []
        for g in layer:
            for i in range(r):
                p = 0
                while True:
                    cand = tuple(g[k] - (p + 1) * (k == i) for k in range(r))
                    if cand in known:
                        p += 1
                    else:
                        break
                pairing = sum(g[j] * A[i][j] for j in range(r))
                if p - pairing <= 0:
                    continue
                new = tuple(g[k] + (k == i) for k in range(r))
                if new in known:
                    continue
                known.add(new)
                nxt.append(new)
                e_new = _mscale(_comm(es[i], evec[g]), Fraction(1, p + 1))
                f_new = _mscale(_comm(fvec[g], fs[i]), Fraction(1, p + 1))
                h_new = _comm(e_new, f_new)
                val = _eigen(h_new, e_new)
                if val == -2:
                    f_new = _mscale(f_new, -1)
                elif val != 2:
                    raise AssertionError(f"root {new}: [e,f] pairs to {val}")
                evec[new], fvec[new] = e_new, f_new
        nxt.sort(key=lambda t: tuple(-v for v in t))
        found.extend(nxt)
        layer = nxt
    found.sort(key=lambda t: (sum(t), tuple(-v for v in t)))
    mats = [hs[i] for i in range(r)] + [evec[a] for a in found] + [fvec[a] for a in found]
    mats = tuple(tuple(tuple(_norm(v) for v in row) for row in m) for m in mats)
    return SimpleFactor(kind, r, N, tuple(tuple(row) for row in A), tuple(found), mats)


# --- the algebra ------------------------------------------------------------

_TERM = re.compile(r"^([A-Za-z])(\d+)$")


def parse_spec(spec):
    """Parse ``term ("+" term)*`` into a list of (kind, int)."""
    if not isinstance(spec, str) or not spec.strip():
        raise AlgebraSpecError("empty algebra spec")
    out = []
    for raw in spec.split("+"):
        term = raw.strip()
        m = _TERM.match(term)
        if not m:
            raise AlgebraSpecError(f"cannot parse term {term!r}")
        kind, r = m.group(1), int(m.group(2))
        if kind in ("D", "E", "F", "G"):
            raise UnsupportedAlgebraError(f"type {term} is not supported (only A, B, C and z)")
        if kind not in ("A", "B", "C", "z"):
            raise AlgebraSpecError(f"unknown term {term!r}")
        minimum = {"A": 1, "B": 2, "C": 2, "z": 1}[kind]
        if r < minimum:
            raise AlgebraSpecError(f"term {term!r} needs index >= {minimum}")
        out.append((kind, r))
    return out


@dataclass(frozen=True)
class FactorBlock:
    """Placement of one summand inside the full basis."""

    kind: str
    rank: int
    offset: int
    dim: int
    simple: SimpleFactor | None = None

    @property
    def indices(self):
        return range(self.offset, self.offset + self.dim)


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    spec: str
    dim: int
    rank: int
    structure: tuple  # structure[i][j] = sparse tuple of (k, c) with [b_i, b_j] = sum c b_k
    form: tuple
    basis_labels: tuple
    cartan_indices: tuple
    pos_root_indices: tuple
    neg_root_indices: tuple
    center_indices: tuple
    blocks: tuple
    root_of: dict = field(repr=False)  # basis index -> (block number, signed root tuple)
    triple: tuple | None = field(default=None, repr=False)
    _cache: dict = field(default_factory=dict, repr=False, compare=False, hash=False)

    @property
    def borel_indices(self):
        return tuple(sorted(self.cartan_indices + self.center_indices + self.pos_root_indices))

    @property
    def borel_dim(self):
        return (self.dim + self.rank) // 2

    @property
    def is_abelian(self):
        return not any(b.kind != "z" for b in self.blocks)

    def const(self, i, j, k):
        for kk, c in self.structure[i][j]:
            if kk == k:
                return c
        return 0

    def basis_vector(self, i, scale=1):
        v = [0] * self.dim
        v[i] = scale
        return v

    def simple_root_indices(self):
        """Basis indices of the simple root vectors, factor by factor."""
        out = []
        for idx, (blk, root) in sorted(self.root_of.items()):
            if sum(root) == 1 and min(root) == 0:
                out.append(idx)
        return tuple(out)

    def form_inverse(self):
        if "kinv" not in self._cache:
            self._cache["kinv"] = tuple(tuple(_norm(v) for v in row) for row in linalg.inverse(self.form))
        return self._cache["kinv"]

    def to_json(self):
        consts = []
        for i in range(self.dim):
            for j in range(self.dim):
                for k, c in self.structure[i][j]:
                    consts.append([i, j, k, str(c)])
        return {
            "spec": self.spec,
            "dim": self.dim,
            "rank": self.rank,
            "borel_dim": self.borel_dim,
            "labels": list(self.basis_labels),
            "cartan_indices": list(self.cartan_indices),
            "pos_root_indices": list(self.pos_root_indices),
            "neg_root_indices": list(self.neg_root_indices),
            "center_indices": list(self.center_indices),
            "structure_constants": consts,
            "form": [[str(v) for v in row] for row in self.form],
        }


def _root_label(root):
    return "".join(str(v) for v in root)


def build_algebra(spec):
    """Construct the reductive Lie algebra named by ``spec`` (e.g. "A2", "A1+z1")."""
    terms = parse_spec(spec)
    blocks, labels = [], []
    offset = 0
    multi = len(terms) > 1
    cartan, pos, neg, center = [], [], [], []
    root_of = {}
    for num, (kind, r) in enumerate(terms):
        prefix = f"{kind}{r}#{num + 1}." if multi else ""
        if kind == "z":
            blocks.append(FactorBlock("z", r, offset, r))
            for t in range(r):
                labels.append(f"{prefix}z{t + 1}")
                center.append(offset + t)
            offset += r
            continue
        sf = _build_factor(kind, r)
        blocks.append(FactorBlock(kind, r, offset, sf.dim, sf))
        nroots = len(sf.roots)
        for t in range(r):
            labels.append(f"{prefix}h{t + 1}")
            cartan.append(offset + t)
        for t, root in enumerate(sf.roots):
            idx = offset + r + t
            labels.append(f"{prefix}e{_root_label(root)}")
            pos.append(idx)
            root_of[idx] = (num, root)
        for t, root in enumerate(sf.roots):
            idx = offset + r + nroots + t
            labels.append(f"{prefix}f{_root_label(root)}")
            neg.append(idx)
            root_of[idx] = (num, tuple(-v for v in root))
        offset += sf.dim
    n = offset
    structure = [[() for _ in range(n)] for _ in range(n)]
    for blk in blocks:
        if blk.simple is None:
            continue
        mats = blk.simple.matrices
        coords = _coordinate_map(mats)
        for a in range(blk.dim):
            for b in range(blk.dim):
                if a == b:
                    continue
                vec = coords(_comm(mats[a], mats[b]))
                structure[blk.offset + a][blk.offset + b] = tuple(
                    (blk.offset + k, _norm(c)) for k, c in enumerate(vec) if c
                )
    structure = tuple(tuple(row) for row in structure)
    form = _killing(structure, n)
    for i in center:
        form[i][i] = 1
    rank = len(cartan) + len(center)
    g = LieAlgebra(
        spec=spec.replace(" ", ""),
        dim=n,
        rank=rank,
        structure=structure,
        form=tuple(tuple(row) for row in form),
        basis_labels=tuple(labels),
        cartan_indices=tuple(cartan),
        pos_root_indices=tuple(pos),
        neg_root_indices=tuple(neg),
        center_indices=tuple(center),
        blocks=tuple(blocks),
        root_of=root_of,
    )
    if not g.is_abelian:
        object.__setattr__(g, "triple", _principal_triple(g))
    return g


def _coordinate_map(mats):
    """Function taking a matrix in span(mats) to its coordinates."""
    n = len(mats)
    N = len(mats[0])
    flat = [[m[i][j] for i in range(N) for j in range(N)] for m in mats]
    # matrix positions carrying an invertible n x n minor
    ech = linalg._Echelon()
    positions = []
    for col in range(N * N):
        if ech.add({k: flat[k][col] for k in range(n)}):
            positions.append(col)
        if len(positions) == n:
            break
    sub = [[flat[k][c] for k in range(n)] for c in positions]
    inv = linalg.inverse(sub)

    def coords(m):
        vals = [m[c // N][c % N] for c in positions]
        return [sum(inv[k][t] * vals[t] for t in range(n) if vals[t]) for k in range(n)]

    return coords


def _killing(structure, n):
    ad = [[[0] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            for k, c in structure[i][j]:
                ad[i][k][j] = c  # (ad b_i)[k][j]
    form = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            s = 0
            for k in range(n):
                row = ad[i][k]
                for l in range(n):
                    if row[l] and ad[j][l][k]:
                        s += row[l] * ad[j][l][k]
            form[i][j] = form[j][i] = _norm(s)
    return form


# --- vectors ------------------------------------------------------------------

def _check_len(g, *vs):
    for v in vs:
        if len(v) != g.dim:
            raise ValueError(f"vector of length {len(v)} in algebra of dimension {g.dim}")


def bracket(g, u, v):
    """[u, v] for coordinate vectors u, v."""
    _check_len(g, u, v)
    out = [0] * g.dim
    for i, a in enumerate(u):
        if not a:
            continue
        row = g.structure[i]
        for j, b in enumerate(v):
            if not b:
                continue
            ab = a * b
            for k, c in row[j]:
                out[k] += ab * c
    return out


def ad_matrix(g, x):
    """Matrix of ad x: column j is [x, b_j]."""
    cols = [bracket(g, x, g.basis_vector(j)) for j in range(g.dim)]
    return [[cols[j][i] for j in range(g.dim)] for i in range(g.dim)]


def invariant_form(g):
    return g.form


def pair(g, u, v):
    """<u, v> under the invariant form."""
    return sum(g.form[i][j] * u[i] * v[j] for i in range(g.dim) if u[i] for j in range(g.dim) if v[j])


def centralizer(g, x):
    """Exact basis of ker(ad x)."""
    _check_len(g, x)
    return linalg.nullspace(ad_matrix(g, x), g.dim)


def is_regular(g, x):
    return len(centralizer(g, x)) == g.rank


def as_rng(seed):
    """A ``random.Random`` from an int seed; an existing generator is passed through."""
    if isinstance(seed, random.Random):
        return seed
    if not isinstance(seed, (int, str)):
        raise TypeError(f"seed must be an int or random.Random, not {type(seed).__name__}")
    return random.Random(seed)


def random_point(g, seed, bound=10, indices=None):
    """Integer vector with coordinates in [-bound, bound], reproducible from ``seed``.

    ``seed`` may be an int or a ``random.Random`` instance (streams then continue).
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    rng = as_rng(seed)
    allowed = range(g.dim) if indices is None else indices
    v = [0] * g.dim
    for i in allowed:
        v[i] = rng.randint(-bound, bound)
    return v


def random_regular(g, rng, bound=10, indices=None):
    """Random point certified regular by the rank test, with bounded retries."""
    for _ in range(MAX_REGULAR_RETRIES):
        x = random_point(g, rng, bound, indices)
        if is_regular(g, x):
            return x
    raise RuntimeError(f"no regular point found in {MAX_REGULAR_RETRIES} attempts")


def _principal_triple(g):
    xi = [0] * g.dim
    rho = [0] * g.dim
    eta = [0] * g.dim
    for blk in g.blocks:
        if blk.simple is None:
            continue
        sf = blk.simple
        r = sf.rank
        A = sf.cartan_matrix
        # rho = sum c_i h_i with alpha_j(rho) = sum_i c_i A[i][j] = 2
        c = linalg.solve([[A[i][j] for i in range(r)] for j in range(r)], [2] * r)
        for i in range(r):
            ci = _norm(c[i])
            rho[blk.offset + i] = ci
            xi[blk.offset + r + i] = 1  # simple roots come first among positive roots
            eta[blk.offset + r + len(sf.roots) + i] = ci
    return (tuple(xi), tuple(rho), tuple(eta))


def principal_triple(g):
    """(xi, rho, eta) with [rho, xi] = 2 xi, [rho, eta] = -2 eta, [xi, eta] = rho."""
    if g.triple is None:
        raise ValueError(f"abelian algebra {g.spec} has no principal sl2-triple")
    return tuple(list(v) for v in g.triple)


def describe(g):
    from .charmod import invariant_polynomials

    degrees = invariant_polynomials(g).degrees
    out = g.to_json()
    out["invariant_degrees"] = list(degrees)
    if g.triple is not None:
        out["triple"] = {k: [str(v) for v in vec] for k, vec in zip(("xi", "rho", "eta"), g.triple)}
    out["positive_roots"] = {
        g.basis_labels[i]: list(g.root_of[i][1]) for i in g.pos_root_indices
    }
    return out


def describe_text(g):
    d = describe(g)
    degs = ",".join(str(v) for v in d["invariant_degrees"])
    return f"dim {g.dim}, rank {g.rank}, borel {g.borel_dim}, degrees [{degs}]"


def dump_json(g):
    return json.dumps(g.to_json(), sort_keys=True)


# --- structural checks --------------------------------------------------------

def check_antisymmetry(g):
    n = g.dim
    for i in range(n):
        for j in range(i, n):
            u, v = g.basis_vector(i), g.basis_vector(j)
            if any(a + b for a, b in zip(bracket(g, u, v), bracket(g, v, u))):
                return False
    return True


def check_jacobi(g):
    """[b_i, [b_j, b_k]] + cyclic = 0 on all basis triples i < j < k."""
    n = g.dim
    basis = [g.basis_vector(i) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                a, b, c = basis[i], basis[j], basis[k]
                s = [x + y + z for x, y, z in zip(
                    bracket(g, a, bracket(g, b, c)),
                    bracket(g, b, bracket(g, c, a)),
                    bracket(g, c, bracket(g, a, b)))]
                if any(s):
                    return False
    return True


def check_form_invariance(g):
    """<[b_i, b_j], b_k> = <b_i, [b_j, b_k]>, and the form is symmetric and nondegenerate."""
    n = g.dim
    basis = [g.basis_vector(i) for i in range(n)]
    if any(g.form[i][j] != g.form[j][i] for i in range(n) for j in range(n)):
        return False
    if linalg.det(g.form) == 0:
        return False
    for i in range(n):
        for j in range(n):
            bij = bracket(g, basis[i], basis[j])
            for k in range(n):
                if pair(g, bij, basis[k]) != pair(g, basis[i], bracket(g, basis[j], basis[k])):
                    return False
    return True


def check_triple(g):
    """[rho, xi] = 2 xi, [rho, eta] = -2 eta, [xi, eta] = rho, xi regular."""
    xi, rho, eta = principal_triple(g)
    ok = bracket(g, rho, xi) == [2 * v for v in xi]
    ok = ok and bracket(g, rho, eta) == [-2 * v for v in eta]
    ok = ok and bracket(g, xi, eta) == list(rho)
    return ok and is_regular(g, xi)


def check_integral(g):
    return all(isinstance(c, int) for row in g.structure for cell in row for _, c in cell)
