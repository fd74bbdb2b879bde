"""Sparse polynomials on g x g and exterior-algebra valued polynomials.

A polynomial in ``nvars`` variables is a dict from exponent tuples to nonzero
coefficients.  On g x g with dim g = n the variables are ordered
``x1..xn, y1..yn`` and the bidegree of a monomial is (x-degree, y-degree).
Coefficients are ints/Fractions over Q, or ints in [0, p) over F_p.
"""

from __future__ import annotations

import re
from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb

from .linalg import reduce_mod


class DomainError(ValueError):
    """Operands live in different rings."""


def _glex_key(exp):
    return (sum(exp), exp)


class MultiPoly:
    __slots__ = ("nvars", "terms", "modulus")

    def __init__(self, nvars, terms=None, modulus=None):
        self.nvars = nvars
        self.modulus = modulus
        self.terms = {}
        if terms:
            for e, c in terms.items():
                if len(e) != nvars:
                    raise DomainError(f"exponent {e} has wrong length for {nvars} variables")
                if modulus is not None:
                    c = reduce_mod(c, modulus)
                if c:
                    self.terms[tuple(e)] = c

    @classmethod
    def _raw(cls, nvars, terms, modulus):
        out = cls.__new__(cls)
        out.nvars = nvars
        out.terms = terms
        out.modulus = modulus
        return out

    @classmethod
    def zero(cls, nvars, modulus=None):
        return cls._raw(nvars, {}, modulus)

    @classmethod
    def const(cls, nvars, c, modulus=None):
        return cls(nvars, {(0,) * nvars: c}, modulus)

    @classmethod
    def var(cls, nvars, i, modulus=None):
        e = [0] * nvars
        e[i] = 1
        return cls._raw(nvars, {tuple(e): 1}, modulus)

    @classmethod
    def monomial(cls, exp, coeff=1, modulus=None):
        return cls(len(exp), {tuple(exp): coeff}, modulus)

    @classmethod
    def linear(cls, nvars, coeffs, offset=0, modulus=None):
        """sum_k coeffs[k] * var(offset + k)."""
        terms = {}
        for k, c in enumerate(coeffs):
            if c:
                e = [0] * nvars
                e[offset + k] = 1
                terms[tuple(e)] = c
        return cls(nvars, terms, modulus)

    def _check(self, other):
        if self.nvars != other.nvars or self.modulus != other.modulus:
            raise DomainError(
                f"ring mismatch: ({self.nvars} vars, mod {self.modulus}) vs "
                f"({other.nvars} vars, mod {other.modulus})"
            )

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return MultiPoly.const(self.nvars, other, self.modulus)

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self.modulus == other.modulus and self.terms == other.terms
        if other == 0:
            return not self.terms
        return self.terms == MultiPoly.const(self.nvars, other, self.modulus).terms

    def __hash__(self):
        return hash((self.nvars, self.modulus, frozenset(self.terms.items())))

    def copy(self):
        return MultiPoly._raw(self.nvars, dict(self.terms), self.modulus)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        p = self.modulus
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if p is not None:
                v %= p
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return MultiPoly._raw(self.nvars, out, p)

    __radd__ = __add__

    def __neg__(self):
        p = self.modulus
        if p is None:
            return MultiPoly._raw(self.nvars, {e: -c for e, c in self.terms.items()}, p)
        return MultiPoly._raw(self.nvars, {e: (-c) % p for e, c in self.terms.items()}, p)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        p = self.modulus
        if p is not None:
            c = reduce_mod(c, p)
            if not c:
                return MultiPoly.zero(self.nvars, p)
            return MultiPoly._raw(self.nvars, {e: v * c % p for e, v in self.terms.items()}, p)
        if not c:
            return MultiPoly.zero(self.nvars)
        return MultiPoly._raw(self.nvars, {e: v * c for e, v in self.terms.items()}, p)

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        self._check(other)
        p = self.modulus
        out = {}
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        for e1, c1 in b.items():
            for e2, c2 in a.items():
                e = tuple([u + v for u, v in zip(e1, e2)])
                out[e] = out.get(e, 0) + c1 * c2
        if p is not None:
            out = {e: c % p for e, c in out.items() if c % p}
        else:
            out = {e: c for e, c in out.items() if c}
        return MultiPoly._raw(self.nvars, out, p)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power")
        out = MultiPoly.const(self.nvars, 1, self.modulus)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self):
        return len({sum(e) for e in self.terms}) <= 1

    def bidegrees(self):
        """Set of (x-degree, y-degree) over all terms (variables split in halves)."""
        n = self.nvars // 2
        return {(sum(e[:n]), sum(e[n:])) for e in self.terms}

    def bihomogeneous_part(self, a, b):
        n = self.nvars // 2
        return MultiPoly._raw(
            self.nvars,
            {e: c for e, c in self.terms.items() if sum(e[:n]) == a and sum(e[n:]) == b},
            self.modulus,
        )

    def used_vars(self):
        return {i for e in self.terms for i, d in enumerate(e) if d}

    def partial(self, i):
        """Formal partial derivative with respect to variable ``i`` (0-based)."""
        if not 0 <= i < self.nvars:
            raise IndexError(f"variable index {i} out of range")
        p = self.modulus
        out = {}
        for e, c in self.terms.items():
            d = e[i]
            if d:
                ne = e[:i] + (d - 1,) + e[i + 1:]
                v = c * d
                if p is not None:
                    v %= p
                if v:
                    out[ne] = out.get(ne, 0) + v
        if p is not None:
            out = {e: c % p for e, c in out.items() if c % p}
        return MultiPoly._raw(self.nvars, out, p)

    def evaluate(self, point):
        if len(point) != self.nvars:
            raise ValueError(f"point has {len(point)} coordinates, expected {self.nvars}")
        p = self.modulus
        if p is not None:
            point = [reduce_mod(v, p) for v in point]
        total = 0
        for e, c in self.terms.items():
            t = c
            for v, d in zip(point, e):
                if d:
                    t = t * (pow(v, d, p) if p is not None else v**d)
            total += t
        return total % p if p is not None else total

    def substitute(self, images):
        """Replace variable i by the polynomial ``images[i]`` (all in one target ring)."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        target = images[0]
        cache = {}
        out = MultiPoly.zero(target.nvars, target.modulus)
        for e, c in self.terms.items():
            t = MultiPoly.const(target.nvars, c, target.modulus)
            for i, d in enumerate(e):
                if d:
                    key = (i, d)
                    if key not in cache:
                        cache[key] = images[i] ** d
                    t = t * cache[key]
            out = out + t
        return out

    def reduce(self, p):
        """Image in F_p[vars]."""
        if self.modulus is not None:
            if self.modulus != p:
                raise DomainError("already reduced modulo a different prime")
            return self
        return MultiPoly(self.nvars, self.terms, p)

    def primitive(self):
        """Integer polynomial with content 1 and the same zero set (over Q)."""
        if self.modulus is not None:
            raise DomainError("primitive part is defined over Q")
        from .linalg import _integral

        keys = sorted(self.terms, key=_glex_key)
        row = _integral({i: self.terms[e] for i, e in enumerate(keys)})
        return MultiPoly._raw(self.nvars, {keys[i]: v for i, v in row.items()}, None)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _glex_key(t[0]), reverse=True)

    def to_text(self, names=None):
        return poly_to_text(self, names)

    def __repr__(self):
        return f"MultiPoly({self.to_text()})"


def var_names(nvars):
    n = nvars // 2
    return [f"x{i + 1}" for i in range(n)] + [f"y{i + 1}" for i in range(n)]


def poly_to_text(poly, names=None):
    """Deterministic ``coeff * x1^a1 ... yn^bn`` rendering, glex-descending."""
    if not poly.terms:
        return "0"
    names = names or var_names(poly.nvars)
    parts = []
    for e, c in poly.sorted_terms():
        mono = " ".join(names[i] if d == 1 else f"{names[i]}^{d}" for i, d in enumerate(e) if d)
        parts.append(f"{c} * {mono}" if mono else f"{c}")
    return " + ".join(parts)


_TERM = re.compile(r"^\s*(-?\d+(?:/\d+)?)\s*(?:\*\s*(.*))?$")


def parse_poly(text, nvars, modulus=None, names=None):
    """Inverse of :func:`poly_to_text`."""
    names = names or var_names(nvars)
    index = {nm: i for i, nm in enumerate(names)}
    text = text.strip()
    if text == "0":
        return MultiPoly.zero(nvars, modulus)
    terms = {}
    for chunk in text.split(" + "):
        m = _TERM.match(chunk)
        if not m:
            raise ValueError(f"cannot parse term {chunk!r}")
        c = Fraction(m.group(1))
        if c.denominator == 1:
            c = c.numerator
        e = [0] * nvars
        if m.group(2):
            for factor in m.group(2).split():
                nm, _, d = factor.partition("^")
                if nm not in index:
                    raise ValueError(f"unknown variable {nm!r}")
                e[index[nm]] += int(d) if d else 1
        terms[tuple(e)] = terms.get(tuple(e), 0) + c
    return MultiPoly(nvars, terms, modulus)


def substitute_pencil(p):
    """Components p_{m,n} of p(a x + b y) = sum a^m b^n p_{m,n}(x, y).

    ``p`` must use only the x-variables of its 2n-variable ring and be
    homogeneous.  The expansion is done literally: substitute
    x_i -> a*x_i + b*y_i in a ring with two extra variables and collect.
    """
    nv = p.nvars
    n = nv // 2
    if any(i >= n for i in p.used_vars()):
        raise ValueError("pencil expansion expects a polynomial in the x-variables only")
    if not p.is_homogeneous():
        raise ValueError("pencil expansion expects a homogeneous polynomial")
    big = nv + 2
    a = MultiPoly.var(big, nv, p.modulus)
    b = MultiPoly.var(big, nv + 1, p.modulus)
    images = []
    for i in range(n):
        images.append(a * MultiPoly.var(big, i, p.modulus) + b * MultiPoly.var(big, n + i, p.modulus))
    images += [MultiPoly.zero(big, p.modulus)] * n
    expanded = p.substitute(images) if p.terms else MultiPoly.zero(big, p.modulus)
    out = {}
    for e, c in expanded.terms.items():
        key = (e[nv], e[nv + 1])
        out.setdefault(key, {})[e[:nv]] = c
    return {k: MultiPoly(nv, t, p.modulus) for k, t in sorted(out.items())}


def monomial_basis(n, bidegree):
    """Exponent vectors (length 2n) of x-degree a and y-degree b, glex order."""
    a, b = bidegree
    if a < 0 or b < 0:
        return []
    xs = _monomials(n, a)
    ys = _monomials(n, b)
    out = [x + y for x in xs for y in ys]
    out.sort(key=_glex_key, reverse=True)
    return out


def _monomials(n, d):
    out = []
    for combo in combinations_with_replacement(range(n), d):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return out


def monomial_count(n, bidegree):
    a, b = bidegree
    if a < 0 or b < 0:
        return 0
    return comb(a + n - 1, a) * comb(b + n - 1, b)


class PolyVector:
    """A g-valued polynomial map: one MultiPoly per basis coordinate."""

    __slots__ = ("coords",)

    def __init__(self, coords):
        coords = tuple(coords)
        if coords:
            ring = (coords[0].nvars, coords[0].modulus)
            if any((c.nvars, c.modulus) != ring for c in coords):
                raise DomainError("coordinates live in different rings")
        self.coords = coords

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __eq__(self, other):
        return isinstance(other, PolyVector) and self.coords == other.coords

    def __add__(self, other):
        return PolyVector(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other):
        return PolyVector(a - b for a, b in zip(self.coords, other.coords))

    def scale(self, c):
        return PolyVector(a * c for a in self.coords)

    def is_zero(self):
        return all(c.is_zero() for c in self.coords)

    def evaluate(self, point):
        return [c.evaluate(point) for c in self.coords]

    def bidegrees(self):
        out = set()
        for c in self.coords:
            out |= c.bidegrees()
        return out

    def __repr__(self):
        return f"PolyVector({[c.to_text() for c in self.coords]})"


def _merge_sign(s, t):
    """Sign and sorted union for e_s ^ e_t, or (0, None) if they overlap."""
    if set(s) & set(t):
        return 0, None
    inversions = 0
    for a in s:
        for b in t:
            if a > b:
                inversions += 1
    return (-1 if inversions % 2 else 1), tuple(sorted(s + t))


class WedgePoly:
    """Element of C[g x g] (x) Lambda(g): sorted index tuple -> MultiPoly."""

    __slots__ = ("n", "nvars", "modulus", "parts")

    def __init__(self, n, nvars, parts=None, modulus=None):
        self.n = n
        self.nvars = nvars
        self.modulus = modulus
        self.parts = {}
        for s, f in (parts or {}).items():
            s = tuple(s)
            if list(s) != sorted(set(s)):
                raise ValueError(f"wedge index {s} must be strictly increasing")
            if any(not 0 <= i < n for i in s):
                raise ValueError(f"wedge index {s} out of range")
            if f.nvars != nvars or f.modulus != modulus:
                raise DomainError("coefficient ring mismatch")
            if f:
                self.parts[s] = f

    @classmethod
    def basis(cls, n, nvars, subset, modulus=None):
        return cls(n, nvars, {tuple(subset): MultiPoly.const(nvars, 1, modulus)}, modulus)

    @classmethod
    def from_vector(cls, vec, n=None):
        """Degree-one element sum_k vec[k] e_k from a PolyVector."""
        first = vec.coords[0]
        return cls(n or len(vec), first.nvars, {(k,): c for k, c in enumerate(vec.coords)}, first.modulus)

    def _check(self, other):
        if (self.n, self.nvars, self.modulus) != (other.n, other.nvars, other.modulus):
            raise DomainError("wedge operands live in different algebras")

    def __bool__(self):
        return bool(self.parts)

    def is_zero(self):
        return not self.parts

    def __eq__(self, other):
        return isinstance(other, WedgePoly) and self.parts == other.parts and self.n == other.n

    def degrees(self):
        return {len(s) for s in self.parts}

    def __add__(self, other):
        self._check(other)
        out = dict(self.parts)
        for s, f in other.parts.items():
            v = out[s] + f if s in out else f
            if v:
                out[s] = v
            else:
                out.pop(s, None)
        return WedgePoly._make(self, out)

    def __neg__(self):
        return WedgePoly._make(self, {s: -f for s, f in self.parts.items()})

    def __sub__(self, other):
        return self + (-other)

    @staticmethod
    def _make(like, parts):
        out = WedgePoly.__new__(WedgePoly)
        out.n, out.nvars, out.modulus = like.n, like.nvars, like.modulus
        out.parts = parts
        return out

    def times(self, f):
        """Multiply every part by the scalar polynomial (or number) ``f``."""
        out = {}
        for s, g in self.parts.items():
            v = g * f
            if v:
                out[s] = v
        return WedgePoly._make(self, out)

    def wedge(self, other):
        self._check(other)
        out = {}
        for s, f in self.parts.items():
            for t, g in other.parts.items():
                sign, u = _merge_sign(s, t)
                if not sign:
                    continue
                v = f * g
                if sign < 0:
                    v = -v
                out[u] = out[u] + v if u in out else v
        return WedgePoly._make(self, {u: v for u, v in out.items() if v})

    __xor__ = wedge

    def contract(self, lam):
        """Odd derivation extending e_k -> lam[k] (a list of MultiPoly)."""
        out = {}
        for s, f in self.parts.items():
            for pos, k in enumerate(s):
                if not lam[k]:
                    continue
                u = s[:pos] + s[pos + 1:]
                v = f * lam[k]
                if pos % 2:
                    v = -v
                out[u] = out[u] + v if u in out else v
        return WedgePoly._make(self, {u: v for u, v in out.items() if v})

    def bidegrees(self):
        out = set()
        for f in self.parts.values():
            out |= f.bidegrees()
        return out

    def evaluate(self, point):
        """Numeric wedge: sorted index tuple -> scalar."""
        out = {}
        for s, f in self.parts.items():
            v = f.evaluate(point)
            if v:
                out[s] = v
        return out

    def __repr__(self):
        return "WedgePoly(" + ", ".join(f"{s}: {f.to_text()}" for s, f in sorted(self.parts.items())) + ")"
