"""Invariant polynomials, their pencil components and the characteristic module.

For homogeneous generators p_i of the invariant algebra, p_i(a x + b y)
splits into bihomogeneous pieces p_{i,m,n}; the x-gradients of the pieces with
m >= 1 form the generating family of the characteristic submodule.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .liealg import as_rng, bracket, random_point, random_regular
from .polyalg import MultiPoly, PolyVector, substitute_pencil


@dataclass(frozen=True, eq=False)
class InvariantSet:
    g: object
    polys: tuple
    degrees: tuple
    blocks: tuple  # block number of each invariant


@dataclass(frozen=True, eq=False)
class CharacteristicModule:
    g: object
    invariants: InvariantSet
    labels: tuple  # (i, m, n), 1-based i
    gens: tuple  # PolyVector per label

    def __len__(self):
        return len(self.gens)


def _ring(g, modulus=None):
    return 2 * g.dim, modulus


def coordinate_polys(g, which="x"):
    """The coordinate functions x_1..x_n (or y_1..y_n) as polynomials."""
    nv = 2 * g.dim
    off = 0 if which == "x" else g.dim
    return [MultiPoly.var(nv, off + i) for i in range(g.dim)]


def defining_matrix(g, block):
    """M(x) = sum_i x_i B_i over the block's basis in the defining representation."""
    nv = 2 * g.dim
    sf = block.simple
    N = sf.size
    out = [[MultiPoly.zero(nv) for _ in range(N)] for _ in range(N)]
    for local, mat in enumerate(sf.matrices):
        xv = MultiPoly.var(nv, block.offset + local)
        for i in range(N):
            for j in range(N):
                if mat[i][j]:
                    out[i][j] = out[i][j] + xv.scale(mat[i][j])
    return out


def _matmul_poly(a, b):
    n = len(a)
    nv = a[0][0].nvars
    out = [[MultiPoly.zero(nv) for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for k in range(n):
            if not a[i][k]:
                continue
            for j in range(n):
                if b[k][j]:
                    out[i][j] = out[i][j] + a[i][k] * b[k][j]
    return out


def trace_power(M, d):
    """tr(M^d) for a matrix of polynomials."""
    P = M
    for _ in range(d - 1):
        P = _matmul_poly(P, M)
    out = P[0][0]
    for i in range(1, len(P)):
        out = out + P[i][i]
    return out


def killing_quadratic(g, block):
    """kappa(x, x) restricted to one simple block."""
    nv = 2 * g.dim
    idx = list(block.indices)
    terms = {}
    for i in idx:
        for j in idx:
            c = g.form[i][j]
            if c:
                e = [0] * nv
                e[i] += 1
                e[j] += 1
                e = tuple(e)
                terms[e] = terms.get(e, 0) + c
    return MultiPoly(nv, terms)


def _higher_degrees(kind, r):
    if kind == "A":
        return list(range(3, r + 2))
    return [2 * j for j in range(2, r + 1)]


def invariant_polynomials(g):
    """Generators of S(g)^G, as polynomials in the x-variables of g x g.

    Per simple block: kappa(x, x), then tr(M(x)^d) in the defining
    representation (d = 3..r+1 for A_r, d = 4, 6, .., 2r for B_r and C_r).
    Each center coordinate contributes itself.
    """
    cached = g._cache.get("invariants")
    if cached is not None:
        return cached
    polys, degrees, owners = [], [], []
    nv = 2 * g.dim
    for num, blk in enumerate(g.blocks):
        if blk.kind == "z":
            for t in blk.indices:
                polys.append(MultiPoly.var(nv, t))
                degrees.append(1)
                owners.append(num)
            continue
        polys.append(killing_quadratic(g, blk))
        degrees.append(2)
        owners.append(num)
        highs = _higher_degrees(blk.kind, blk.rank)
        if highs:
            M = defining_matrix(g, blk)
            for d in highs:
                polys.append(trace_power(M, d))
                degrees.append(d)
                owners.append(num)
    inv = InvariantSet(g, tuple(polys), tuple(degrees), tuple(owners))
    g._cache["invariants"] = inv
    return inv


def pencil_components(inv):
    """All nonzero p_{i,m,n}, keyed by (i, m, n) with 1-based i."""
    out = {}
    for i, p in enumerate(inv.polys, start=1):
        for (m, n), q in substitute_pencil(p).items():
            if q:
                out[(i, m, n)] = q
    return out


def gradient_x(g, q):
    """The g-valued map eps with <eps(x,y), v> = d/dt q(x + t v, y) at t = 0."""
    kinv = g.form_inverse()
    n = g.dim
    parts = [q.partial(l) for l in range(n)]
    coords = []
    for k in range(n):
        acc = MultiPoly.zero(q.nvars, q.modulus)
        for l in range(n):
            if kinv[k][l] and parts[l]:
                acc = acc + parts[l].scale(kinv[k][l])
        coords.append(acc)
    return PolyVector(coords)


def characteristic_family(g):
    """Generators eps_{i,m,n} (m >= 1, m + n = d_i) of the characteristic module."""
    cached = g._cache.get("charmod")
    if cached is not None:
        return cached
    inv = invariant_polynomials(g)
    comps = pencil_components(inv)
    labels, gens = [], []
    for (i, m, n), q in sorted(comps.items()):
        if m < 1 or m + n != inv.degrees[i - 1]:
            continue
        labels.append((i, m, n))
        gens.append(gradient_x(g, q))
    B = CharacteristicModule(g, inv, tuple(labels), tuple(gens))
    g._cache["charmod"] = B
    return B


def evaluate_generators(B, x, y, p=None):
    point = list(x) + list(y)
    if p is not None:
        point = [linalg.reduce_mod(v, p) for v in point]
        return [[linalg.reduce_mod(c.evaluate(point), p) for c in vec] for vec in B.gens]
    return [vec.evaluate(point) for vec in B.gens]


def evaluate_span(B, x, y, p=None):
    """(dim V(x, y), basis of V(x, y)) from the evaluated generators."""
    rows = evaluate_generators(B, x, y, p)
    keep = linalg.independent_rows(rows, p)
    return len(keep), [rows[i] for i in keep]


def commutator_polys(g):
    """[x, y] as a list of n bilinear polynomials."""
    cached = g._cache.get("commutator")
    if cached is not None:
        return cached
    n = g.dim
    nv = 2 * n
    acc = [dict() for _ in range(n)]
    for i in range(n):
        for j in range(n):
            for k, c in g.structure[i][j]:
                e = [0] * nv
                e[i] = 1
                e[n + j] = 1
                e = tuple(e)
                acc[k][e] = acc[k].get(e, 0) + c
    out = [MultiPoly(nv, t) for t in acc]
    g._cache["commutator"] = out
    return out


def lambda_polys(g):
    """lambda_k = <b_k, [x, y]>, the degree-one images of the canonical differential."""
    cached = g._cache.get("lambda")
    if cached is not None:
        return cached
    comm = commutator_polys(g)
    nv = 2 * g.dim
    out = []
    for k in range(g.dim):
        acc = MultiPoly.zero(nv)
        for l in range(g.dim):
            if g.form[k][l] and comm[l]:
                acc = acc + comm[l].scale(g.form[k][l])
        out.append(acc)
    g._cache["lambda"] = out
    return out


def pairing_with_commutator(g, vec):
    """<vec(x, y), [x, y]> as a polynomial."""
    lam = lambda_polys(g)
    acc = MultiPoly.zero(2 * g.dim)
    for k, c in enumerate(vec):
        if c and lam[k]:
            acc = acc + c * lam[k]
    return acc


def cycle_identity_check(g, B):
    """True iff <eps, [x, y]> is the zero polynomial for every generator."""
    return all(pairing_with_commutator(g, eps).is_zero() for eps in B.gens)


def _action_field(g, v):
    """Linear polynomials of x -> [v, x] and y -> [v, y], coordinate by coordinate."""
    n = g.dim
    nv = 2 * n
    cols = [bracket(g, v, g.basis_vector(j)) for j in range(n)]
    vx = [MultiPoly.linear(nv, [cols[j][i] for j in range(n)], 0) for i in range(n)]
    vy = [MultiPoly.linear(nv, [cols[j][i] for j in range(n)], n) for i in range(n)]
    return vx, vy, cols


def equivariance_defect(g, eps, v):
    """D_v(eps) - [v, eps] where D_v differentiates along (x, y) -> ([v,x], [v,y])."""
    n = g.dim
    vx, vy, cols = _action_field(g, v)
    out = []
    for k in range(n):
        f = eps[k]
        lhs = MultiPoly.zero(f.nvars, f.modulus)
        if f:
            for i in range(n):
                if vx[i]:
                    d = f.partial(i)
                    if d:
                        lhs = lhs + d * vx[i]
                if vy[i]:
                    d = f.partial(n + i)
                    if d:
                        lhs = lhs + d * vy[i]
        rhs = MultiPoly.zero(f.nvars, f.modulus)
        for j in range(n):
            if cols[j][k] and eps[j]:
                rhs = rhs + eps[j].scale(cols[j][k])
        out.append(lhs - rhs)
    return PolyVector(out)


def equivariance_check(g, B, v):
    """Infinitesimal G-equivariance of every generator along v, as a polynomial identity."""
    return all(equivariance_defect(g, eps, v).is_zero() for eps in B.gens)


def pencil_covariance_check(g, B, ab, x, y):
    """grad p_i(a x + b y) = sum_m a^(m-1) b^(d-m) eps_{i,m,d-m}(x, y), exactly."""
    a, b = ab
    z = [a * u + b * w for u, w in zip(x, y)]
    zero = [0] * g.dim
    gens = dict(zip(B.labels, B.gens))
    point = list(x) + list(y)
    for i, p in enumerate(B.invariants.polys, start=1):
        d = B.invariants.degrees[i - 1]
        lhs = gradient_x(g, p).evaluate(list(z) + zero)
        rhs = [0] * g.dim
        for m in range(1, d + 1):
            eps = gens.get((i, m, d - m))
            if eps is None:
                continue
            w = a ** (m - 1) * b ** (d - m)
            if not w:
                continue
            for k, c in enumerate(eps.evaluate(point)):
                rhs[k] += w * c
        if any(u != v for u, v in zip(lhs, rhs)):
            return False
    return True


# --- subalgebras ---------------------------------------------------------------

class SubalgebraError(ValueError):
    """Index set is not a bracket-closed subalgebra of the required kind."""


def is_closed(g, indices):
    s = set(indices)
    for i in s:
        for j in s:
            for k, c in g.structure[i][j]:
                if c and k not in s:
                    return False
    return True


def _simple_in_block(g):
    """Map block number -> list of (simple root basis index, position in root tuple)."""
    out = {}
    for num, blk in enumerate(g.blocks):
        if blk.simple is None:
            continue
        out[num] = [(blk.offset + blk.rank + t, t) for t in range(blk.rank)]
    return out


def borel(g):
    return tuple(g.borel_indices)


def standard_parabolic(g, levi_simple):
    """Borel plus every negative root space whose support lies in ``levi_simple``.

    ``levi_simple`` is a set of basis indices of simple root vectors.
    """
    simple = _simple_in_block(g)
    allowed = {}
    for num, pairs in simple.items():
        allowed[num] = {t for idx, t in pairs if idx in levi_simple}
    out = set(g.borel_indices)
    for idx in g.neg_root_indices:
        num, root = g.root_of[idx]
        support = {t for t, c in enumerate(root) if c}
        if support <= allowed.get(num, set()):
            out.add(idx)
    return tuple(sorted(out))


def maximal_parabolics(g):
    """One standard maximal parabolic per simple root (that root left out of the Levi)."""
    simples = g.simple_root_indices()
    return {g.basis_labels[s]: standard_parabolic(g, set(simples) - {s}) for s in simples}


def b_beta(g, simple_index):
    """Cartan plus all positive root spaces except the given simple one."""
    if simple_index not in g.simple_root_indices():
        raise SubalgebraError(f"{g.basis_labels[simple_index]} is not a simple root vector")
    return tuple(i for i in g.borel_indices if i != simple_index)


def check_parabolic_like(g, indices):
    """Raise unless ``indices`` is a standard parabolic or some b_beta."""
    s = set(indices)
    if not is_closed(g, s):
        raise SubalgebraError("index set is not closed under the bracket")
    if set(g.borel_indices) <= s:
        candidates = [standard_parabolic(g, {i for i in g.simple_root_indices() if g.neg_root_indices and _neg_of(g, i) in s})]
        if set(candidates[0]) == s:
            return "parabolic"
        raise SubalgebraError("contains the Borel but is not a standard parabolic")
    for beta in g.simple_root_indices():
        if set(b_beta(g, beta)) == s:
            return "b_beta"
    raise SubalgebraError("not a standard parabolic nor a b_beta subalgebra")


def _neg_of(g, pos_index):
    num, root = g.root_of[pos_index]
    target = (num, tuple(-v for v in root))
    for idx in g.neg_root_indices:
        if g.root_of[idx] == target:
            return idx
    return None


def parabolic_containment_check(g, B, indices, samples=50, seed=0, bound=10):
    """V(x, y) inside span(indices) for ``samples`` seeded random (x, y) in p x p."""
    check_parabolic_like(g, indices)
    rows = [g.basis_vector(i) for i in indices]
    base = linalg.rank(rows)
    rng = as_rng(seed)
    for _ in range(samples):
        x = random_point(g, rng, bound, indices)
        y = random_point(g, rng, bound, indices)
        for vec in evaluate_generators(B, x, y):
            if linalg.rank(rows + [vec]) != base:
                return False
    return True


def generic_rank(B, seed, count=10, bound=10, p=None):
    """Maximum evaluated span dimension over ``count`` seeded random points."""
    g = B.g
    rng = as_rng(seed)
    best = 0
    for _ in range(count):
        x = random_point(g, rng, bound)
        y = random_point(g, rng, bound)
        best = max(best, evaluate_span(B, x, y, p)[0])
    return best


def cartan_regular_point(g, rng, bound=10):
    """Random regular element of the Cartan subalgebra (center included)."""
    return random_regular(g, rng, bound, tuple(g.cartan_indices) + tuple(g.center_indices))


def export_generators(B):
    """Text lines ``(i,m,n) [k]: poly`` for every nonzero coordinate."""
    lines = []
    for (i, m, n), vec in zip(B.labels, B.gens):
        for k, c in enumerate(vec):
            if c:
                lines.append(f"({i},{m},{n}) [{B.g.basis_labels[k]}]: {c.to_text()}")
    return "\n".join(lines) + "\n"
