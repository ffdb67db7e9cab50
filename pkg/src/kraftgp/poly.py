"""Univariate polynomials over a FieldCtx and the rational canonical form.

Polynomials are little-endian coefficient lists with no trailing zeros.
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import gcd as igcd
from typing import Sequence

from .field import FieldCtx, _prime_factors
from .linalg import block_diag

__all__ = [
    "trim",
    "padd",
    "psub",
    "pmul",
    "pdivmod",
    "pgcd",
    "monic",
    "invariant_factors",
    "companion",
    "rational_canonical_form",
    "is_irreducible",
    "is_primary",
    "radical",
    "factor",
    "elementary_divisors",
]

Poly = list


def trim(a: Sequence) -> Poly:
    a = list(a)
    while a and not a[-1]:
        a.pop()
    return a


def deg(a: Poly) -> int:
    return len(a) - 1


def padd(ctx: FieldCtx, a: Poly, b: Poly) -> Poly:
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return trim(ctx.row_add(a, b))


def psub(ctx: FieldCtx, a: Poly, b: Poly) -> Poly:
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return trim(ctx.row_sub_scaled(a, 1, b))


def pmul(ctx: FieldCtx, a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            seg = ctx.row_scale(b, x)
            out[i:i + len(b)] = ctx.row_add(out[i:i + len(b)], seg)
    return trim(out)


def pdivmod(ctx: FieldCtx, a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    q = [0] * max(len(a) - len(b) + 1, 0)
    inv = ctx.inv(b[-1])
    while len(a) >= len(b) and a:
        c = ctx.mul(a[-1], inv)
        s = len(a) - len(b)
        q[s] = c
        a[s:] = ctx.row_sub_scaled(a[s:], c, b)
        a = trim(a)
    return trim(q), a


def monic(ctx: FieldCtx, a: Poly) -> Poly:
    if not a:
        return []
    return ctx.row_scale(a, ctx.inv(a[-1]))


def pgcd(ctx: FieldCtx, a: Poly, b: Poly) -> Poly:
    a, b = trim(a), trim(b)
    while b:
        a, b = b, pdivmod(ctx, a, b)[1]
    return monic(ctx, a)


def derivative(ctx: FieldCtx, a: Poly) -> Poly:
    return trim([ctx.mul(ctx.from_int(i), c) for i, c in enumerate(a)][1:])


def powmod(ctx: FieldCtx, base: Poly, e: int, m: Poly) -> Poly:
    result: Poly = [1]
    base = pdivmod(ctx, base, m)[1]
    while e:
        if e & 1:
            result = pdivmod(ctx, pmul(ctx, result, base), m)[1]
        base = pdivmod(ctx, pmul(ctx, base, base), m)[1]
        e >>= 1
    return result


# ---- Smith form of xI - A ------------------------------------------------------

def invariant_factors(ctx: FieldCtx, a: Sequence[Sequence]) -> list[Poly]:
    """Monic invariant factors of A of positive degree, each dividing the next."""
    d = len(a)
    m: list[list[Poly]] = [[trim([ctx.neg(a[i][j])] + ([1] if i == j else [])) for j in range(d)]
                           for i in range(d)]
    for t in range(d):
        while True:
            best = None
            for i in range(t, d):
                for j in range(t, d):
                    if m[i][j] and (best is None or len(m[i][j]) < len(m[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return _finish(ctx, m, t)
            i, j = best
            m[t], m[i] = m[i], m[t]
            for row in m:
                row[t], row[j] = row[j], row[t]
            piv = m[t][t]
            clean = True
            for i in range(t + 1, d):
                if m[i][t]:
                    q, r = pdivmod(ctx, m[i][t], piv)
                    m[i] = [psub(ctx, x, pmul(ctx, q, y)) for x, y in zip(m[i], m[t])]
                    clean = clean and not r
            for j in range(t + 1, d):
                if m[t][j]:
                    q, r = pdivmod(ctx, m[t][j], piv)
                    for row in m:
                        row[j] = psub(ctx, row[j], pmul(ctx, q, row[t]))
                    clean = clean and not r
            if not clean:
                continue
            bad = next(((i, j) for i in range(t + 1, d) for j in range(t + 1, d)
                        if pdivmod(ctx, m[i][j], piv)[1]), None)
            if bad is None:
                break
            m[t] = [padd(ctx, x, y) for x, y in zip(m[t], m[bad[0]])]
    return _finish(ctx, m, d)


def _finish(ctx: FieldCtx, m, t: int) -> list[Poly]:
    diag = [monic(ctx, m[i][i]) for i in range(t)]
    return [f for f in diag if len(f) > 1]


def companion(ctx: FieldCtx, f: Poly) -> list[list]:
    f = monic(ctx, f)
    n = len(f) - 1
    c = [[0] * n for _ in range(n)]
    for i in range(1, n):
        c[i][i - 1] = 1
    for i in range(n):
        c[i][n - 1] = ctx.neg(f[i])
    return c


def rational_canonical_form(ctx: FieldCtx, a: Sequence[Sequence]) -> tuple[list[Poly], list[list]]:
    facs = invariant_factors(ctx, a)
    blocks = [companion(ctx, f) for f in facs]
    return facs, block_diag(blocks)


# ---- irreducibility and primary polynomials --------------------------------------------

def _pth_root_poly(ctx: FieldCtx, f: Poly) -> Poly:
    p = ctx.p
    return [ctx.pth_root(f[i]) for i in range(0, len(f), p)]


def _squarefree_parts(ctx: FieldCtx, f: Poly) -> list[Poly]:
    """Squarefree factors (of any multiplicity) whose product is the radical of f."""
    f = monic(ctx, f)
    if len(f) <= 1:
        return []
    out = []
    c = pgcd(ctx, f, derivative(ctx, f))
    w = pdivmod(ctx, f, c)[0]
    while len(w) > 1:
        y = pgcd(ctx, w, c)
        fac = pdivmod(ctx, w, y)[0]
        if len(fac) > 1:
            out.append(fac)
        w = y
        c = pdivmod(ctx, c, y)[0]
    if len(c) > 1:
        if ctx.characteristic == 0:
            raise AssertionError("squarefree decomposition failed")
        out += _squarefree_parts(ctx, _pth_root_poly(ctx, c))
    return out


def radical(ctx: FieldCtx, f: Poly) -> Poly:
    """Product of the distinct monic irreducible factors of f."""
    parts = _squarefree_parts(ctx, f)
    r: Poly = [1]
    for g in parts:
        r = pmul(ctx, r, pdivmod(ctx, g, pgcd(ctx, g, r))[0])
    return monic(ctx, r)


def is_irreducible(ctx: FieldCtx, f: Poly) -> bool | None:
    """Irreducibility of f over K; None when undecided (rationals beyond degree 3)."""
    f = monic(ctx, trim(f))
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    if ctx.kind == "Q":
        if n > 3:
            return None
        return not _has_rational_root(f)
    q = ctx.q
    x = [0, 1]
    y = x
    for _ in range(n):
        y = powmod(ctx, y, q, f)
    if psub(ctx, y, x):
        return False
    for r in _prime_factors(n):
        y = x
        for _ in range(n // r):
            y = powmod(ctx, y, q, f)
        if len(pgcd(ctx, f, psub(ctx, y, x))) != 1:
            return False
    return True


def _has_rational_root(f: Poly) -> bool:
    den = 1
    for c in f:
        den = den * Fraction(c).denominator // igcd(den, Fraction(c).denominator)
    ints = [int(Fraction(c) * den) for c in f]
    while ints and ints[0] == 0:
        return True
    a0, an = abs(ints[0]), abs(ints[-1])

    def divisors(n):
        return [d for d in range(1, n + 1) if n % d == 0]

    for p in divisors(a0):
        for q in divisors(an):
            for s in (1, -1):
                r = Fraction(s * p, q)
                if sum(c * r ** i for i, c in enumerate(ints)) == 0:
                    return True
    return False


def is_primary(ctx: FieldCtx, f: Poly) -> bool | None:
    """Whether f is a power of a single irreducible polynomial."""
    r = radical(ctx, f)
    return is_irreducible(ctx, r)


# ---- factorization over finite fields ------------------------------------------------------

def _ddf(ctx: FieldCtx, f: Poly) -> list[tuple[Poly, int]]:
    """Distinct-degree factorization of a squarefree monic f."""
    out, q = [], ctx.q
    h, d = [0, 1], 0
    while len(f) - 1 >= 2 * (d + 1):
        d += 1
        h = powmod(ctx, h, q, f)
        g = pgcd(ctx, f, psub(ctx, h, [0, 1]))
        if len(g) > 1:
            out.append((g, d))
            f = pdivmod(ctx, f, g)[0]
            h = pdivmod(ctx, h, f)[1]
    if len(f) > 1:
        out.append((f, len(f) - 1))
    return out


def _edf(ctx: FieldCtx, f: Poly, d: int, rng) -> list[Poly]:
    """Split f, a product of irreducibles of degree d, into its factors."""
    n = len(f) - 1
    if n == d:
        return [f]
    q = ctx.q
    while True:
        a = trim([ctx.random_element(rng) for _ in range(n)])
        if len(a) < 2:
            continue
        if q % 2:
            b = psub(ctx, powmod(ctx, a, (q ** d - 1) // 2, f), [1])
        else:
            b, t = [], a
            for _ in range(ctx.k * d):
                b = padd(ctx, b, t)
                t = pdivmod(ctx, pmul(ctx, t, t), f)[1]
        g = pgcd(ctx, f, b)
        if 1 < len(g) < len(f):
            return _edf(ctx, g, d, rng) + _edf(ctx, pdivmod(ctx, f, g)[0], d, rng)


def factor(ctx: FieldCtx, f: Poly, rng=None) -> list[tuple[Poly, int]] | None:
    """Monic irreducible factors with multiplicities; None over the rationals."""
    if ctx.kind == "Q":
        return None
    rng = rng or random.Random(0)
    f = monic(ctx, trim(f))
    if len(f) <= 1:
        return []
    irr = []
    for g, d in _ddf(ctx, radical(ctx, f)):
        irr += _edf(ctx, g, d, rng)
    out = []
    for g in sorted(irr, key=lambda p: (len(p), [ctx.encode(c) for c in reversed(p)])):
        m, r = 0, f
        while True:
            qt, rem = pdivmod(ctx, r, g)
            if rem:
                break
            m, r = m + 1, qt
        out.append((g, m))
    return out


def elementary_divisors(ctx: FieldCtx, a: Sequence[Sequence], rng=None) -> list[Poly] | None:
    """Prime-power parts of the invariant factors of A; None when factoring is unavailable."""
    out = []
    for f in invariant_factors(ctx, a):
        fs = factor(ctx, f, rng)
        if fs is None:
            prim = is_primary(ctx, f)
            if prim is not True:
                return None
            out.append(f)
            continue
        for g, m in fs:
            gm = [1]
            for _ in range(m):
                gm = pmul(ctx, gm, g)
            out.append(gm)
    return out
