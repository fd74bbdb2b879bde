"""Exact linear algebra over Q and F_p.

Matrices are lists of rows.  A row is either a dense sequence of scalars or a
sparse ``dict`` mapping a hashable column key to a scalar; every function here
accepts both.  Over Q the scalars are ints or ``Fraction``; over F_p they are
ints and the field is selected by passing ``p``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from math import gcd, lcm

import numpy as np

from . import kernels

DEFAULT_PRIME = 32003
BIG_PRIME = 2147483629  # largest prime below 2**31
DENSE_LIMIT = 20_000_000  # entries; wider systems use sparse elimination


def _sparse(row):
    if isinstance(row, dict):
        return {k: v for k, v in row.items() if v}
    return {k: v for k, v in enumerate(row) if v}


def _integral(row):
    """Scale a sparse rational row to a primitive integer row."""
    den = lcm(*(v.denominator for v in row.values() if isinstance(v, Fraction)))
    if den == 1:
        return _primitive({k: int(v) for k, v in row.items()})
    return _primitive({k: int(v * den) for k, v in row.items()})


def _primitive(row):
    """Divide an integer row by the gcd of its entries."""
    g = gcd(*row.values())
    if g > 1:
        return {k: v // g for k, v in row.items()}
    return row


class _Echelon:
    """Incremental row echelon form; reports whether each new row is independent."""

    def __init__(self, p=None, order=None):
        self.p = p
        self.pivots = {}
        self._order = order

    def _lead(self, row):
        if self._order is None:
            return min(row)
        return min(row, key=self._order)

    def reduce(self, row):
        row = _sparse(row)
        p = self.p
        if p is None:
            row = _integral(row)
        else:
            row = {k: reduce_mod(v, p) for k, v in row.items()}
            row = {k: v for k, v in row.items() if v}
        while row:
            c = self._lead(row)
            piv = self.pivots.get(c)
            if piv is None:
                return row, c
            a = row[c]
            if p is None:
                b = piv[c]
                new = {k: v * b for k, v in row.items()}
                for k, v in piv.items():
                    w = new.get(k, 0) - a * v
                    if w:
                        new[k] = w
                    else:
                        new.pop(k, None)
                row = _primitive(new) if new else new
            else:
                for k, v in piv.items():
                    w = (row.get(k, 0) - a * v) % p
                    if w:
                        row[k] = w
                    else:
                        row.pop(k, None)
        return row, None

    def add(self, row):
        reduced, c = self.reduce(row)
        if c is None:
            return False
        if self.p is not None:
            inv = pow(reduced[c], -1, self.p)
            reduced = {k: v * inv % self.p for k, v in reduced.items()}
        self.pivots[c] = reduced
        return True

    @property
    def rank(self):
        return len(self.pivots)


def _dense_int_rows(rows, p):
    """Dense int64-ready rows mod p (None if a denominator vanishes mod p)."""
    keys = {}
    sparse_rows = [_sparse(r) for r in rows]
    for r in sparse_rows:
        for k in r:
            if k not in keys:
                keys[k] = len(keys)
    out = []
    for r in sparse_rows:
        dense = [0] * len(keys)
        for k, v in r.items():
            if isinstance(v, Fraction):
                if v.denominator % p == 0:
                    raise ZeroDivisionError(f"denominator divisible by {p}")
                v = v.numerator * pow(v.denominator, -1, p)
            dense[keys[k]] = v % p
        out.append(dense)
    return out, len(keys)


def _full_rank_shortcut(rows):
    """min(#rows, #cols) when the rank mod BIG_PRIME already reaches it, else None.

    Reduction mod p can only lower the rank of a rational matrix, so hitting
    the trivial upper bound there settles the rank over Q.
    """
    ncols = len({k for r in rows for k in _sparse(r)})
    bound = min(len(rows), ncols)
    if bound == 0 or len(rows) * ncols > DENSE_LIMIT:
        return None
    try:
        dense, _ = _dense_int_rows(rows, BIG_PRIME)
    except ZeroDivisionError:
        return None
    return bound if int(kernels.rank_mod_p(dense, BIG_PRIME)) == bound else None


def rank(rows, p=None):
    """Exact rank over Q (``p=None``) or over F_p."""
    rows = list(rows)
    if not rows:
        return 0
    if p is None:
        full = _full_rank_shortcut(rows)
        if full is not None:
            return full
    if p is not None and p < 2**31:
        ncols = len({k for r in rows for k in _sparse(r)})
        if ncols == 0:
            return 0
        if len(rows) * ncols <= DENSE_LIMIT:
            dense, _ = _dense_int_rows(rows, p)
            return int(kernels.rank_mod_p(dense, p))
    ech = _Echelon(p)
    for r in rows:
        ech.add(r)
    return ech.rank


def independent_rows(rows, p=None):
    """Indices of a maximal independent subfamily (greedy, in input order)."""
    ech = _Echelon(p)
    return [i for i, r in enumerate(rows) if ech.add(r)]


def in_span(vec, rows, p=None):
    """Whether ``vec`` lies in the row span of ``rows`` (rank augmentation)."""
    rows = list(rows)
    return rank(rows + [vec], p) == rank(rows, p)


def spans_equal(rows_a, rows_b, p=None):
    rows_a, rows_b = list(rows_a), list(rows_b)
    ra, rb = rank(rows_a, p), rank(rows_b, p)
    return ra == rb == rank(rows_a + rows_b, p)


def _rref_mod(rows, ncols, p):
    """numpy elimination for p < 2**31 (products stay below 2**62)."""
    m = np.array([[reduce_mod(v, p) for v in r] for r in rows], dtype=np.int64).reshape(len(rows), ncols)
    pivots = []
    r = 0
    for c in range(ncols):
        nz = np.nonzero(m[r:, c])[0]
        if not len(nz):
            continue
        piv = r + int(nz[0])
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        m[r] = m[r] * pow(int(m[r, c]), -1, p) % p
        col = m[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if len(hit):
            m[hit] = (m[hit] - col[hit, None] * m[r][None, :] % p) % p
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return [[int(v) for v in row] for row in m[:r]], pivots


def rref(rows, ncols, p=None):
    """Reduced row echelon form of dense rows; returns (rows, pivot columns)."""
    if p is not None and p < 2**31 and rows:
        return _rref_mod(rows, ncols, p)
    one = 1 if p is not None else Fraction(1)
    m = [[(one * v) % p if p is not None else Fraction(v) for v in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        lead = m[r][c]
        inv = pow(lead, -1, p) if p is not None else 1 / lead
        m[r] = [(v * inv) % p if p is not None else v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                if p is not None:
                    m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
                else:
                    m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def nullspace(rows, ncols, p=None):
    """Basis of {v : M v = 0} for the dense matrix ``rows`` (ncols columns)."""
    red, pivots = rref(rows, ncols, p) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0 if p is not None else Fraction(0)] * ncols
        v[f] = 1 if p is not None else Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = (-row[f]) % p if p is not None else -row[f]
        basis.append(v)
    return basis


def solve(rows, rhs, p=None):
    """One solution x of M x = rhs, or None when inconsistent."""
    ncols = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, ncols + 1, p)
    if ncols in pivots:
        return None
    x = [0 if p is not None else Fraction(0)] * ncols
    for row, pc in zip(red, pivots):
        x[pc] = row[ncols]
    return x


def inverse(matrix):
    """Exact inverse of a square rational matrix."""
    n = len(matrix)
    aug = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(matrix)]
    red, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red[:n]]


def det(matrix):
    """Exact determinant by fraction-preserving elimination."""
    m = [[Fraction(v) for v in r] for r in matrix]
    n = len(m)
    out = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            out = -out
        out *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] / m[c][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return out


def reduce_mod(value, p):
    """Image of a rational in F_p."""
    if isinstance(value, Fraction):
        if value.denominator % p == 0:
            raise ZeroDivisionError(f"denominator divisible by {p}")
        return value.numerator * pow(value.denominator, -1, p) % p
    return int(value) % p


def rational_reconstruct(a, p):
    """The fraction r/s with |r|, |s| <= sqrt(p/2) and r = a s mod p, or None."""
    bound = math.isqrt(p // 2)
    r0, r1 = p, a % p
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    return Fraction(r1, s1)
