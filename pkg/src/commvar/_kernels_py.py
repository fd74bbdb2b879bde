"""Pure-Python versions of the compiled kernels (reference semantics)."""

import numpy as np


def rank_mod_p(matrix, p):
    """Rank of an integer matrix over F_p, numpy row operations."""
    a = np.array(matrix, dtype=np.int64)
    if a.ndim != 2 or a.size == 0:
        return 0
    a %= p
    nrows, ncols = a.shape
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r, c:] = (a[r, c:] * inv) % p
        below = a[r + 1:, c].copy()
        rows = np.nonzero(below)[0]
        if rows.size:
            idx = rows + r + 1
            a[idx, c:] = (a[idx, c:] - np.outer(below[rows], a[r, c:])) % p
        r += 1
    return r


def count_zeros(equations, nvars, q):
    """Pruned enumeration of the common zeros of ``equations`` in F_q^nvars.

    Same input convention as the compiled kernel: a list of ``(coeffs, exps)``.
    """
    eqs = []
    ready = [[] for _ in range(max(nvars, 1))]
    for coeffs, exps in equations:
        coeffs = [int(c) % q for c in np.asarray(coeffs).ravel()]
        exps = np.asarray(exps, dtype=np.int64).reshape(-1, nvars) if nvars else np.zeros((len(coeffs), 0), dtype=np.int64)
        terms = []
        for c, row in zip(coeffs, exps):
            if c:
                terms.append((c, [(k, int(d)) for k, d in enumerate(row) if d]))
        used = [k for k in range(nvars) if exps.shape[0] and exps[:, k].any()]
        ready[used[-1] if used else 0].append(terms)
        eqs.append(terms)
    if nvars == 0:
        return 1 if all(sum(c for c, _ in terms) % q == 0 for terms in eqs) else 0

    point = [0] * nvars

    def vanishes(terms):
        acc = 0
        for c, mono in terms:
            for k, d in mono:
                c = c * pow(point[k], d, q) % q
            acc += c
        return acc % q == 0

    def walk(level):
        total = 0
        for v in range(q):
            point[level] = v
            if not all(vanishes(t) for t in ready[level]):
                continue
            total += 1 if level == nvars - 1 else walk(level + 1)
        return total

    return walk(0)
