# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: dense row reduction mod p and pruned zero counting over F_q.

Both functions mirror ``_kernels_py`` exactly; the pure-Python module is the
reference semantics and is used whenever this extension is not built.
"""

import numpy as np
cimport numpy as cnp

ctypedef long long i64


cdef i64 _inv(i64 a, i64 p):
    cdef i64 t = 0, newt = 1, r = p, newr = a % p, q, tmp
    while newr != 0:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


def rank_mod_p(object matrix, long long p):
    """Rank of an integer matrix over F_p (p < 2**31)."""
    cdef cnp.ndarray[i64, ndim=2] a = np.array(matrix, dtype=np.int64, copy=True)
    if a.ndim != 2 or a.shape[0] == 0 or a.shape[1] == 0:
        return 0
    cdef Py_ssize_t nrows = a.shape[0], ncols = a.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, piv
    cdef i64 inv, f, v
    for i in range(nrows):
        for j in range(ncols):
            v = a[i, j] % p
            if v < 0:
                v += p
            a[i, j] = v
    for c in range(ncols):
        if r == nrows:
            break
        piv = -1
        for i in range(r, nrows):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(c, ncols):
                v = a[piv, j]
                a[piv, j] = a[r, j]
                a[r, j] = v
        inv = _inv(a[r, c], p)
        for j in range(c, ncols):
            a[r, j] = (a[r, j] * inv) % p
        for i in range(r + 1, nrows):
            f = a[i, c]
            if f == 0:
                continue
            for j in range(c, ncols):
                if a[r, j] != 0:
                    a[i, j] = (a[i, j] - f * a[r, j]) % p
                    if a[i, j] < 0:
                        a[i, j] += p
        r += 1
    return r


def count_zeros(list equations, int nvars, long long q):
    """Number of points of F_q^nvars where every equation vanishes.

    ``equations`` is a list of ``(coeffs, exps)`` pairs: ``coeffs`` an int64
    vector already reduced mod q, ``exps`` an int64 matrix with one row per
    term.  Variables are assigned in index order and an equation is tested as
    soon as its last variable is fixed.
    """
    cdef Py_ssize_t neq = len(equations)
    if nvars == 0:
        return 1 if all(not np.any(np.asarray(c) % q) for c, _ in equations) else 0
    cdef int maxdeg = 1
    cdef Py_ssize_t e, t, k
    ready = [[] for _ in range(nvars)]
    coeff_list = []
    exp_list = []
    for e in range(neq):
        coeffs = np.ascontiguousarray(equations[e][0], dtype=np.int64) % q
        exps = np.ascontiguousarray(equations[e][1], dtype=np.int64).reshape(-1, nvars)
        coeff_list.append(coeffs)
        exp_list.append(exps)
        if exps.shape[0]:
            maxdeg = max(maxdeg, int(exps.max()))
            used = np.nonzero(exps.sum(axis=0))[0]
            last = int(used[-1]) if used.size else 0
        else:
            last = 0
        ready[last].append(e)

    # power table pw[v * (maxdeg + 1) + d] = v**d mod q
    cdef cnp.ndarray[i64, ndim=1] pw = np.zeros(q * (maxdeg + 1), dtype=np.int64)
    cdef i64 v, acc, term
    for v in range(q):
        acc = 1
        for k in range(maxdeg + 1):
            pw[v * (maxdeg + 1) + k] = acc
            acc = (acc * v) % q

    # flatten the equations checked at each level
    cdef list level_eqs = []
    for k in range(nvars):
        level_eqs.append([(coeff_list[e], exp_list[e]) for e in ready[k]])

    cdef cnp.ndarray[i64, ndim=1] point = np.zeros(nvars, dtype=np.int64)
    cdef long long count = 0
    cdef Py_ssize_t level = 0
    cdef cnp.ndarray[i64, ndim=1] cf
    cdef cnp.ndarray[i64, ndim=2] ex
    cdef bint ok
    cdef int stride = maxdeg + 1
    point[0] = -1
    while level >= 0:
        point[level] += 1
        if point[level] >= q:
            level -= 1
            continue
        ok = True
        for cf_ex in level_eqs[level]:
            cf = cf_ex[0]
            ex = cf_ex[1]
            acc = 0
            for t in range(cf.shape[0]):
                term = cf[t]
                for k in range(level + 1):
                    if ex[t, k]:
                        term = (term * pw[point[k] * stride + ex[t, k]]) % q
                acc += term
            if acc % q != 0:
                ok = False
                break
        if not ok:
            continue
        if level == nvars - 1:
            count += 1
        else:
            level += 1
            point[level] = -1
    return count
