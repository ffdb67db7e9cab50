"""Exact fields with an explicit automorphism sigma.

Three kinds are supported: the rationals (sigma is the identity), prime
fields F_p and extension fields F_{p^k} = F_p[x]/(modulus).  Elements of
finite fields are plain ints.  For F_{p^k} the int ``a_0 + a_1 p + ...``
encodes the little-endian coefficient vector ``(a_0, a_1, ...)``; use
:meth:`FieldCtx.to_coeffs` / :meth:`FieldCtx.from_coeffs` to convert.
Rational elements are :class:`fractions.Fraction`.

All hot arithmetic goes through lookup tables (extension fields) or
``% p`` (prime fields), exposed as row-level helpers used by ``linalg``.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Any, Iterable, Sequence

__all__ = [
    "FieldCtx",
    "FieldError",
    "BUILTIN_MODULI",
    "gf",
    "rationals",
]

# little-endian monic irreducible moduli
BUILTIN_MODULI: dict[int, tuple[int, int, tuple[int, ...]]] = {
    4: (2, 2, (1, 1, 1)),
    8: (2, 3, (1, 1, 0, 1)),
    9: (3, 2, (1, 0, 1)),
    25: (5, 2, (2, 0, 1)),
    27: (3, 3, (1, 2, 0, 1)),
}

MAX_TABLE_ORDER = 256


class FieldError(ValueError):
    """Raised for invalid field construction or arithmetic (e.g. inverting 0)."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# --- tiny polynomial helpers over F_p (lists, little-endian) -------------

def _ptrim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], m: Sequence[int], p: int) -> list[int]:
    a = _ptrim([c % p for c in a])
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        _ptrim(a)
    return a


def _pmul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _ptrim(out)


def _psub(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _ptrim(out)


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _ptrim(list(a)), _ptrim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _ppowmod(base: list[int], e: int, m: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(base, m, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        base = _pmod(_pmul(base, base, p), m, p)
        e >>= 1
    return result


def is_irreducible_mod_p(modulus: Sequence[int], p: int) -> bool:
    """Rabin's test for a monic polynomial over F_p."""
    f = _ptrim([c % p for c in modulus])
    k = len(f) - 1
    if k < 1 or f[-1] != 1:
        return False
    if k == 1:
        return True
    x = [0, 1]
    # x^(p^k) == x mod f
    y = x
    for _ in range(k):
        y = _ppowmod(y, p, f, p)
    if _psub(y, x, p):
        return False
    for r in _prime_factors(k):
        y = x
        for _ in range(k // r):
            y = _ppowmod(y, p, f, p)
        g = _pgcd(list(f), _psub(y, x, p), p)
        if len(g) != 1:
            return False
    return True


class FieldCtx:
    """A field K together with an automorphism sigma.

    Use :func:`rationals`, :func:`gf` or the ``FieldCtx.prime`` /
    ``FieldCtx.extension`` constructors.
    """

    def __init__(self, kind: str, p: int = 0, k: int = 1,
                 modulus: Sequence[int] | None = None, sigma_kind: str = "identity"):
        if sigma_kind not in ("identity", "frobenius"):
            raise FieldError(f"unknown sigma kind {sigma_kind!r}")
        self.kind = kind
        self.p = p
        self.k = k
        self.sigma_kind = sigma_kind
        if kind == "Q":
            if sigma_kind != "identity":
                raise FieldError("the rationals only carry the identity automorphism")
            self.modulus: tuple[int, ...] = ()
            self.q = 0
            self.sigma_order = 1
            return
        if not _is_prime(p):
            raise FieldError(f"{p} is not prime")
        if kind == "Fp":
            self.k = 1
            self.modulus = (0, 1)
            self.q = p
            self.sigma_order = 1
            self._inv = None if p > 4096 else [0] + [pow(a, p - 2, p) for a in range(1, p)]
            return
        if kind != "Fq":
            raise FieldError(f"unknown field kind {kind!r}")
        if modulus is None:
            raise FieldError("extension field needs a modulus")
        mod = tuple(int(c) % p for c in modulus)
        if len(mod) != k + 1 or mod[-1] != 1:
            raise FieldError("modulus must be monic of degree k")
        if not is_irreducible_mod_p(mod, p):
            raise FieldError(f"modulus {list(mod)} is not irreducible over F_{p}")
        self.modulus = mod
        self.q = p ** k
        if self.q > MAX_TABLE_ORDER:
            raise FieldError(f"extension fields are limited to order <= {MAX_TABLE_ORDER}")
        self.sigma_order = k if sigma_kind == "frobenius" else 1
        self._build_tables()

    # ---- constructors -------------------------------------------------
    @classmethod
    def prime(cls, p: int, sigma_kind: str = "identity") -> "FieldCtx":
        return cls("Fp", p=p, sigma_kind=sigma_kind)

    @classmethod
    def extension(cls, p: int, k: int, modulus: Sequence[int],
                  sigma_kind: str = "frobenius") -> "FieldCtx":
        if k == 1:
            return cls.prime(p, sigma_kind)
        return cls("Fq", p=p, k=k, modulus=modulus, sigma_kind=sigma_kind)

    def _build_tables(self) -> None:
        p, k, q = self.p, self.k, self.q
        pw = [p ** i for i in range(k)]

        def enc(c: Sequence[int]) -> int:
            return sum(ci * pw[i] for i, ci in enumerate(c))

        coeffs = [[(a // pw[i]) % p for i in range(k)] for a in range(q)]
        self._coeffs = [tuple(c) for c in coeffs]
        add = [[0] * q for _ in range(q)]
        sub = [[0] * q for _ in range(q)]
        for a in range(q):
            ca = coeffs[a]
            ra, rs = add[a], sub[a]
            for b in range(q):
                cb = coeffs[b]
                ra[b] = enc([(x + y) % p for x, y in zip(ca, cb)])
                rs[b] = enc([(x - y) % p for x, y in zip(ca, cb)])
        # multiplication through a primitive element's log table
        def order(c: list[int]) -> int:
            n, cur = 1, list(c)
            while cur != [1]:
                cur = _pmod(_pmul(cur, c, p), self.modulus, p)
                n += 1
            return n

        gen = next(a for a in range(1, q) if order(_ptrim(list(coeffs[a]))) == q - 1)
        exp_t = [0] * (q - 1)
        log_t = [0] * q
        cur_c = [1]
        gc = _ptrim(list(coeffs[gen]))
        for i in range(q - 1):
            val = enc(cur_c + [0] * (k - len(cur_c)))
            exp_t[i] = val
            log_t[val] = i
            cur_c = _pmod(_pmul(cur_c, gc, p), self.modulus, p)
        mul = [[0] * q for _ in range(q)]
        for a in range(1, q):
            la, row = log_t[a], mul[a]
            for b in range(1, q):
                row[b] = exp_t[(la + log_t[b]) % (q - 1)]
        self._add, self._sub, self._mul = add, sub, mul
        self._neg = [sub[0][a] for a in range(q)]
        self._inv = [0] + [exp_t[(-log_t[a]) % (q - 1)] for a in range(1, q)]
        # sigma tables: sig[e][a] = a^(p^e) for e in [0, k)
        frob = [0] * q
        for a in range(1, q):
            frob[a] = exp_t[(log_t[a] * p) % (q - 1)]
        sig = [list(range(q))]
        if self.sigma_kind == "frobenius":
            for _ in range(1, k):
                prev = sig[-1]
                sig.append([frob[prev[a]] for a in range(q)])
        self._sig = sig
        self._frob = frob

    # ---- identity / description ----------------------------------------
    def descriptor(self) -> dict[str, Any]:
        if self.kind == "Q":
            return {"kind": "Q"}
        d: dict[str, Any] = {"kind": "Fq", "p": self.p, "k": self.k,
                             "modulus": list(self.modulus)}
        if self.sigma_kind != "frobenius":
            d["sigma"] = self.sigma_kind
        return d

    @classmethod
    def from_descriptor(cls, d: dict[str, Any]) -> "FieldCtx":
        if not isinstance(d, dict) or "kind" not in d:
            raise FieldError("field descriptor must be an object with 'kind'")
        if d["kind"] == "Q":
            return rationals()
        if d["kind"] != "Fq":
            raise FieldError(f"unknown field kind {d['kind']!r}")
        p = int(d["p"])
        k = int(d.get("k", 1))
        sigma = d.get("sigma", "frobenius")
        if k == 1:
            return cls.prime(p, sigma)
        modulus = d.get("modulus")
        if modulus is None:
            q = p ** k
            if q not in BUILTIN_MODULI:
                raise FieldError(f"no built-in modulus for order {q}")
            modulus = BUILTIN_MODULI[q][2]
        return cls.extension(p, k, modulus, sigma)

    def _key(self) -> tuple:
        # on F_p frobenius is the identity
        sk = self.sigma_kind if self.sigma_order > 1 else "identity"
        return (self.kind, self.p, self.k, self.modulus, sk)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FieldCtx) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        if self.kind == "Q":
            return "FieldCtx(Q)"
        if self.kind == "Fp":
            return f"FieldCtx(F_{self.p})"
        return f"FieldCtx(F_{self.q}, modulus={list(self.modulus)}, sigma={self.sigma_kind})"

    @property
    def is_finite(self) -> bool:
        return self.kind != "Q"

    @property
    def characteristic(self) -> int:
        return 0 if self.kind == "Q" else self.p

    # ---- scalar arithmetic ---------------------------------------------
    zero = 0
    one = 1

    def add(self, a, b):
        if self.kind == "Fq":
            return self._add[a][b]
        if self.kind == "Fp":
            return (a + b) % self.p
        return a + b

    def sub(self, a, b):
        if self.kind == "Fq":
            return self._sub[a][b]
        if self.kind == "Fp":
            return (a - b) % self.p
        return a - b

    def neg(self, a):
        if self.kind == "Fq":
            return self._neg[a]
        if self.kind == "Fp":
            return (-a) % self.p
        return -a

    def mul(self, a, b):
        if self.kind == "Fq":
            return self._mul[a][b]
        if self.kind == "Fp":
            return a * b % self.p
        return a * b

    def inv(self, a):
        if a == 0:
            raise FieldError("inverse of zero")
        if self.kind == "Fq":
            return self._inv[a]
        if self.kind == "Fp":
            return self._inv[a] if self._inv is not None else pow(a, self.p - 2, self.p)
        return 1 / Fraction(a)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def eq(self, a, b) -> bool:
        return a == b

    def from_int(self, n: int):
        if self.kind == "Q":
            return Fraction(n)
        return self.from_coeffs([n % self.p]) if self.kind == "Fq" else n % self.p

    def from_coeffs(self, c: Sequence[int]) -> int:
        if self.kind == "Q":
            raise FieldError("rationals have no coefficient representation")
        if len(c) > self.k:
            c = _pmod(list(c), self.modulus, self.p)
        return sum((int(ci) % self.p) * self.p ** i for i, ci in enumerate(c))

    def to_coeffs(self, a: int) -> tuple[int, ...]:
        if self.kind == "Q":
            raise FieldError("rationals have no coefficient representation")
        return tuple((a // self.p ** i) % self.p for i in range(self.k))

    def elements(self) -> list:
        if self.kind == "Q":
            raise FieldError("the rationals are infinite")
        return list(range(self.q))

    def random_element(self, rng: random.Random, nonzero: bool = False):
        if self.kind == "Q":
            while True:
                v = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
                if v or not nonzero:
                    return v
        return rng.randrange(1 if nonzero else 0, self.q)

    def contains(self, a) -> bool:
        if self.kind == "Q":
            return isinstance(a, (int, Fraction)) and not isinstance(a, bool)
        return isinstance(a, int) and not isinstance(a, bool) and 0 <= a < self.q

    # ---- sigma ----------------------------------------------------------
    def sigma_pow(self, a, e: int = 1):
        """sigma^e(a); negative e uses the inverse automorphism."""
        if self.sigma_order == 1:
            return a
        return self._sig[e % self.sigma_order][a]

    def sigma_identity(self, e: int) -> bool:
        return e % self.sigma_order == 0

    def sigma_vec(self, v: Sequence, e: int) -> list:
        if self.sigma_order == 1 or e % self.sigma_order == 0:
            return list(v)
        t = self._sig[e % self.sigma_order]
        return [t[a] for a in v]

    def sigma_mat(self, m: Sequence[Sequence], e: int) -> list[list]:
        if self.sigma_order == 1 or e % self.sigma_order == 0:
            return [list(r) for r in m]
        t = self._sig[e % self.sigma_order]
        return [[t[a] for a in r] for r in m]

    def pth_root(self, a):
        """The unique b with b^p = a (finite fields)."""
        if self.kind == "Q":
            raise FieldError("no p-th roots on the rationals")
        if self.kind == "Fp":
            return a
        for _ in range(self.k - 1):
            a = self._frob[a]
        return a

    def frobenius_matrix(self) -> list[list[int]]:
        """Matrix over F_p of x -> x^p on little-endian coefficient vectors."""
        if self.kind == "Q":
            raise FieldError("no Frobenius on the rationals")
        if self.kind == "Fp":
            return [[1]]
        cols = [self.to_coeffs(self._frob[self.p ** j]) for j in range(self.k)]
        return [[cols[j][i] for j in range(self.k)] for i in range(self.k)]

    # ---- row helpers used by the linear algebra kernel --------------------
    def row_scale(self, r: Sequence, c) -> list:
        if self.kind == "Fq":
            m = self._mul[c]
            return [m[a] for a in r]
        if self.kind == "Fp":
            p = self.p
            return [a * c % p for a in r]
        return [a * c for a in r]

    def row_sub_scaled(self, r1: Sequence, c, r2: Sequence) -> list:
        """r1 - c*r2."""
        if self.kind == "Fq":
            m = self._mul[c]
            s = self._sub
            return [s[a][m[b]] for a, b in zip(r1, r2)]
        if self.kind == "Fp":
            p = self.p
            return [(a - c * b) % p for a, b in zip(r1, r2)]
        return [a - c * b for a, b in zip(r1, r2)]

    def row_add(self, r1: Sequence, r2: Sequence) -> list:
        if self.kind == "Fq":
            ad = self._add
            return [ad[a][b] for a, b in zip(r1, r2)]
        if self.kind == "Fp":
            p = self.p
            return [(a + b) % p for a, b in zip(r1, r2)]
        return [a + b for a, b in zip(r1, r2)]

    def dot(self, r1: Iterable, r2: Iterable):
        if self.kind == "Fq":
            ad, mu = self._add, self._mul
            acc = 0
            for a, b in zip(r1, r2):
                if a and b:
                    acc = ad[acc][mu[a][b]]
            return acc
        if self.kind == "Fp":
            return sum(a * b for a, b in zip(r1, r2)) % self.p
        return sum((a * b for a, b in zip(r1, r2)), Fraction(0))

    # ---- JSON -------------------------------------------------------------
    def encode(self, a) -> Any:
        if self.kind == "Q":
            a = Fraction(a)
            return f"{a.numerator}/{a.denominator}"
        if self.kind == "Fp":
            return int(a)
        return list(self.to_coeffs(a))

    def decode(self, v: Any):
        if self.kind == "Q":
            if isinstance(v, bool):
                raise FieldError(f"not a rational: {v!r}")
            if isinstance(v, int):
                return Fraction(v)
            if isinstance(v, str):
                try:
                    return Fraction(v)
                except (ValueError, ZeroDivisionError) as exc:
                    raise FieldError(f"not a rational: {v!r}") from exc
            raise FieldError(f"not a rational: {v!r}")
        if isinstance(v, bool):
            raise FieldError(f"not a field element: {v!r}")
        if isinstance(v, int):
            return self.from_int(v)
        if isinstance(v, list) and self.kind == "Fq" and all(isinstance(c, int) for c in v):
            if len(v) > self.k:
                raise FieldError(f"coefficient array too long: {v!r}")
            return self.from_coeffs(v)
        raise FieldError(f"not an element of {self!r}: {v!r}")

    def format(self, a) -> str:
        if self.kind == "Q":
            return str(Fraction(a))
        if self.kind == "Fp":
            return str(a)
        terms = []
        for i, c in enumerate(self.to_coeffs(a)):
            if c:
                mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
                coef = "" if (c == 1 and i) else str(c)
                terms.append(coef + mono)
        return "+".join(reversed(terms)) or "0"


def rationals() -> FieldCtx:
    return FieldCtx("Q")


def gf(q: int, sigma_kind: str = "frobenius") -> FieldCtx:
    """Finite field of order q; extension orders use the built-in moduli."""
    if _is_prime(q):
        return FieldCtx.prime(q, sigma_kind)
    if q not in BUILTIN_MODULI:
        raise FieldError(f"no built-in modulus for order {q}")
    p, k, mod = BUILTIN_MODULI[q]
    return FieldCtx.extension(p, k, mod, sigma_kind)
