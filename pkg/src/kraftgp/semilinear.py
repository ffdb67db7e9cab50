"""Semilinear maps and sigma^e-linear relations on K^n.

A relation B is stored untwisted: the ordinary subspace
``{(x, sigma^{-e}(y)) : (x, y) in B}`` of K^{2n}.  Every operation below is
then a row-reduction over the field.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .field import FieldCtx
from .linalg import (
    Quotient,
    Subspace,
    identity,
    inverse,
    mat_mul,
    mat_vec,
    solve,
    transpose,
    zero_prefix_rows,
)

__all__ = [
    "SemilinearMap",
    "SigmaRelation",
    "WeakDecomposition",
    "WeakDecompositionError",
    "StableParts",
    "graph_of",
    "theta",
    "one",
    "zero",
    "compose",
    "converse",
    "parts",
    "image_of",
    "preimage_of",
    "restrict",
    "direct_sum",
    "canonical_relation",
    "stable_parts",
    "stable_kernel_indet_check",
    "weak_decomposition",
    "check_weak_decomposition",
    "relation_power",
    "find_successor",
]


@dataclass(frozen=True)
class SemilinearMap:
    """x -> matrix . sigma^twist(x); the matrix may be rectangular."""

    ctx: FieldCtx
    matrix: tuple
    twist: int

    def __init__(self, ctx: FieldCtx, matrix: Sequence[Sequence], twist: int):
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "matrix", tuple(tuple(r) for r in matrix))
        object.__setattr__(self, "twist", int(twist))

    @property
    def rows(self) -> int:
        return len(self.matrix)

    @property
    def cols(self) -> int:
        return len(self.matrix[0]) if self.matrix else 0

    @property
    def ambient_dim(self) -> int:
        return self.rows

    def mat(self) -> list[list]:
        return [list(r) for r in self.matrix]

    def apply(self, x: Sequence) -> list:
        return mat_vec(self.ctx, self.matrix, self.ctx.sigma_vec(x, self.twist))

    def __call__(self, x: Sequence) -> list:
        return self.apply(x)

    def compose(self, inner: "SemilinearMap") -> "SemilinearMap":
        """self o inner."""
        ctx = self.ctx
        m = mat_mul(ctx, self.matrix, ctx.sigma_mat(inner.matrix, self.twist))
        return SemilinearMap(ctx, m, self.twist + inner.twist)

    def inverse(self) -> "SemilinearMap":
        inv = inverse(self.ctx, self.mat())
        if inv is None:
            raise ValueError("semilinear map is not invertible")
        return SemilinearMap(self.ctx, self.ctx.sigma_mat(inv, -self.twist), -self.twist)

    def is_invertible(self) -> bool:
        return self.rows == self.cols and inverse(self.ctx, self.mat()) is not None

    def power(self, k: int) -> "SemilinearMap":
        out = SemilinearMap(self.ctx, identity(self.rows), 0)
        for _ in range(k):
            out = self.compose(out)
        return out

    @staticmethod
    def identity(ctx: FieldCtx, n: int) -> "SemilinearMap":
        return SemilinearMap(ctx, identity(n), 0)


class SigmaRelation:
    """A sigma^twist-linear relation on K^n."""

    __slots__ = ("ctx", "n", "twist", "space", "_parts")

    def __init__(self, ctx: FieldCtx, n: int, twist: int, space: Subspace):
        if space.n != 2 * n:
            raise ValueError("stored space must live in K^{2n}")
        self.ctx = ctx
        self.n = n
        self.twist = int(twist)
        self.space = space
        self._parts = None

    @property
    def ambient_dim(self) -> int:
        return self.n

    @property
    def stored_space(self) -> Subspace:
        return self.space

    @classmethod
    def from_pairs(cls, ctx: FieldCtx, n: int, twist: int, pairs) -> "SigmaRelation":
        """Relation generated by pairs (x, y) given in twisted coordinates."""
        rows = []
        for x, y in pairs:
            if len(x) != n or len(y) != n:
                raise ValueError("generator of wrong length")
            rows.append(list(x) + ctx.sigma_vec(y, -twist))
        return cls(ctx, n, twist, Subspace.span(ctx, 2 * n, rows))

    def generators(self) -> list[tuple[list, list]]:
        """Pairs (x, y) in twisted coordinates spanning the relation."""
        n, ctx = self.n, self.ctx
        return [(list(r[:n]), ctx.sigma_vec(r[n:], self.twist)) for r in self.space.basis]

    def to_json(self) -> dict:
        enc = self.ctx.encode
        return {"ambient_dim": self.n, "twist": self.twist,
                "generators": [[[enc(a) for a in x], [enc(a) for a in y]] for x, y in self.generators()]}

    @classmethod
    def from_json(cls, ctx: FieldCtx, d: dict) -> "SigmaRelation":
        dec = ctx.decode
        pairs = [([dec(a) for a in x], [dec(a) for a in y]) for x, y in d["generators"]]
        return cls.from_pairs(ctx, int(d["ambient_dim"]), int(d["twist"]), pairs)

    def contains_pair(self, x: Sequence, y: Sequence) -> bool:
        return self.space.contains_vector(list(x) + self.ctx.sigma_vec(y, -self.twist))

    def contains(self, other: "SigmaRelation") -> bool:
        _compatible(self, other)
        return self.space.contains(other.space)

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, SigmaRelation) and self.n == other.n
                and self.twist == other.twist and self.space == other.space)

    def __hash__(self) -> int:
        return hash((self.n, self.twist, self.space))

    def __repr__(self) -> str:
        return f"SigmaRelation(n={self.n}, twist={self.twist}, dim={self.space.dim})"

    # convenience accessors
    def parts(self) -> tuple[Subspace, Subspace, Subspace, Subspace]:
        return parts(self)

    @property
    def dom(self) -> Subspace:
        return parts(self)[0]

    @property
    def ker(self) -> Subspace:
        return parts(self)[1]

    @property
    def im(self) -> Subspace:
        return parts(self)[2]

    @property
    def indet(self) -> Subspace:
        return parts(self)[3]

    def is_null(self) -> bool:
        d, k, _, _ = parts(self)
        return d == k


def _compatible(a: SigmaRelation, b: SigmaRelation) -> None:
    if a.n != b.n:
        raise ValueError(f"ambient dimension mismatch: {a.n} vs {b.n}")
    if a.ctx != b.ctx:
        raise ValueError("relations over different fields")


def _check_twist(a: SigmaRelation, b: SigmaRelation) -> None:
    if a.twist != b.twist:
        raise TypeError(f"twist mismatch: {a.twist} vs {b.twist}")


# ---- constructors -------------------------------------------------------------

def graph_of(f: SemilinearMap) -> SigmaRelation:
    n = f.rows
    if f.cols != n:
        raise ValueError("graph_of needs a square map")
    ctx = f.ctx
    cols = transpose(f.mat(), n)
    eye = identity(n)
    rows = [eye[i] + ctx.sigma_vec(cols[i], -f.twist) for i in range(n)]
    return SigmaRelation(ctx, n, f.twist, Subspace.span(ctx, 2 * n, rows))


def theta(N: Subspace, twist: int = 0) -> SigmaRelation:
    n = N.n
    return SigmaRelation(N.ctx, n, twist, Subspace.span(N.ctx, 2 * n, [list(v) + [0] * n for v in N.basis]))


def one(ctx: FieldCtx, n: int) -> SigmaRelation:
    return graph_of(SemilinearMap.identity(ctx, n))


def zero(ctx: FieldCtx, n: int, twist: int = 0) -> SigmaRelation:
    return SigmaRelation(ctx, n, twist, Subspace.zero(ctx, 2 * n))


def canonical_relation(kind: str, n: int, ctx: FieldCtx, twist: int = 1) -> SigmaRelation:
    """T(n), T+(n), +T(n), +T+(n) with kinds 'T', 'T_plus', 'plus_T', 'plus_T_plus'."""
    if n < 1:
        raise ValueError("canonical relations need n >= 1")
    if kind not in ("T", "T_plus", "plus_T", "plus_T_plus"):
        raise ValueError(f"unknown canonical relation {kind!r}")
    eye = identity(n)
    z = [0] * n
    pairs = [(eye[i], eye[i + 1]) for i in range(n - 1)]
    if kind in ("T_plus", "plus_T_plus"):
        pairs.append((eye[n - 1], z))
    if kind in ("plus_T", "plus_T_plus"):
        pairs.append((z, eye[0]))
    return SigmaRelation.from_pairs(ctx, n, twist, pairs)


# ---- algebra ------------------------------------------------------------------

def compose(b2: SigmaRelation, b1: SigmaRelation) -> SigmaRelation:
    """b2 b1: x -> z iff x ->_{b1} y ->_{b2} z for some y."""
    _compatible(b1, b2)
    ctx, n = b1.ctx, b1.n
    e1 = b1.twist
    c = ctx.sigma_mat(b2.space.basis, -e1)
    z = [0] * n
    # columns ordered (middle | x | z)
    rows = [list(r[n:]) + list(r[:n]) + z for r in b1.space.basis]
    rows += [[ctx.neg(a) for a in r[:n]] + z + list(r[n:]) for r in c]
    out = zero_prefix_rows(ctx, rows, 3 * n, n)
    return SigmaRelation(ctx, n, e1 + b2.twist, Subspace.span(ctx, 2 * n, out))


def converse(b: SigmaRelation) -> SigmaRelation:
    ctx, n, e = b.ctx, b.n, b.twist
    rows = [ctx.sigma_vec(list(r[n:]) + list(r[:n]), e) for r in b.space.basis]
    return SigmaRelation(ctx, n, -e, Subspace.span(ctx, 2 * n, rows))


def parts(b: SigmaRelation) -> tuple[Subspace, Subspace, Subspace, Subspace]:
    """(Dom, Ker, Im, Indet)."""
    if b._parts is not None:
        return b._parts
    ctx, n, e = b.ctx, b.n, b.twist
    basis = b.space.basis
    dom = Subspace.span(ctx, n, [r[:n] for r in basis])
    # rows with zero first block are exactly the (0, u) part, since the basis is RREF
    indet = Subspace.span(ctx, n, [r[n:] for r, p in zip(basis, b.space.pivots) if p >= n]).sigma(e)
    im = Subspace.span(ctx, n, [r[n:] for r in basis]).sigma(e)
    swapped = [list(r[n:]) + list(r[:n]) for r in basis]
    ker = Subspace.span(ctx, n, zero_prefix_rows(ctx, swapped, 2 * n, n))
    b._parts = (dom, ker, im, indet)
    return b._parts


def image_of(b: SigmaRelation, N: Subspace) -> Subspace:
    """B(N) = {y : x -> y for some x in N}."""
    ctx, n = b.ctx, b.n
    if N.n != n:
        raise ValueError("dimension mismatch")
    if N.is_full():
        return parts(b)[2]
    z = [0] * n
    rows = [list(r) for r in b.space.basis] + [[ctx.neg(a) for a in v] + z for v in N.basis]
    return Subspace.span(ctx, n, zero_prefix_rows(ctx, rows, 2 * n, n)).sigma(b.twist)


def preimage_of(b: SigmaRelation, N: Subspace) -> Subspace:
    """B^{-1}(N) = {x : x -> y for some y in N}."""
    ctx, n = b.ctx, b.n
    if N.n != n:
        raise ValueError("dimension mismatch")
    if N.is_full():
        return parts(b)[0]
    z = [0] * n
    rows = [list(r[n:]) + list(r[:n]) for r in b.space.basis]
    rows += [[ctx.neg(a) for a in v] + z for v in N.sigma(-b.twist).basis]
    return Subspace.span(ctx, n, zero_prefix_rows(ctx, rows, 2 * n, n))


def restrict(b: SigmaRelation, N: Subspace) -> SigmaRelation:
    """B intersected with N + N, kept in the ambient coordinates."""
    ctx, n = b.ctx, b.n
    z = [0] * n
    box = [list(v) + z for v in N.basis] + [z + list(v) for v in N.sigma(-b.twist).basis]
    return SigmaRelation(ctx, n, b.twist, b.space.intersect(Subspace.span(ctx, 2 * n, box)))


def direct_sum(b1: SigmaRelation, b2: SigmaRelation) -> SigmaRelation:
    _check_twist(b1, b2)
    ctx = b1.ctx
    n1, n2 = b1.n, b2.n
    rows = [list(r[:n1]) + [0] * n2 + list(r[n1:]) + [0] * n2 for r in b1.space.basis]
    rows += [[0] * n1 + list(r[:n2]) + [0] * n1 + list(r[n2:]) for r in b2.space.basis]
    n = n1 + n2
    return SigmaRelation(ctx, n, b1.twist, Subspace.span(ctx, 2 * n, rows))


def relation_power(b: SigmaRelation, k: int) -> SigmaRelation:
    out = one(b.ctx, b.n)
    for _ in range(k):
        out = compose(b, out)
    return out


# ---- stable subspaces -------------------------------------------------------------

@dataclass(frozen=True)
class StableParts:
    dom: Subspace
    ker: Subspace
    im: Subspace
    indet: Subspace
    ker_chain: tuple  # Ker(B^0) = 0, Ker(B^1), ..., Ker(B^m) = Ker_inf

    def __iter__(self):
        return iter((self.dom, self.ker, self.im, self.indet))


def stable_parts(b: SigmaRelation) -> StableParts:
    """Stable domain, kernel, image and indeterminacy.

    Uses Dom(B^{k+1}) = B^{-1}(Dom B^k), Ker(B^{k+1}) = B^{-1}(Ker B^k),
    Im(B^{k+1}) = B(Im B^k), Indet(B^{k+1}) = B(Indet B^k).
    """
    ctx, n = b.ctx, b.n
    full, nil = Subspace.full(ctx, n), Subspace.zero(ctx, n)
    dom, im = full, full
    ker, ind = nil, nil
    ker_chain = [nil]
    done = [False] * 4
    for _ in range(n + 2):
        if all(done):
            break
        if not done[0]:
            nd = preimage_of(b, dom)
            assert dom.contains(nd), "stable domain chain not descending"
            done[0] = nd == dom
            dom = nd
        if not done[1]:
            nk = preimage_of(b, ker)
            assert nk.contains(ker), "stable kernel chain not ascending"
            done[1] = nk == ker
            ker = nk
            if not done[1]:
                ker_chain.append(nk)
        if not done[2]:
            ni = image_of(b, im)
            assert im.contains(ni), "stable image chain not descending"
            done[2] = ni == im
            im = ni
        if not done[3]:
            nj = image_of(b, ind)
            assert nj.contains(ind), "stable indeterminacy chain not ascending"
            done[3] = nj == ind
            ind = nj
    assert all(done), "stable chains did not stabilise within n+1 steps"
    return StableParts(dom, ker, im, ind, tuple(ker_chain))


def stable_kernel_indet_check(b: SigmaRelation) -> bool:
    sp = stable_parts(b)
    _, ker1, _, ind1 = parts(b)
    return sp.ker.contains(sp.dom.intersect(ind1)) and sp.indet.contains(sp.im.intersect(ker1))


# ---- weak decomposition ---------------------------------------------------------------

class WeakDecompositionError(ArithmeticError):
    def __init__(self, msg: str, witness=None):
        super().__init__(msg)
        self.witness = witness


@dataclass(frozen=True)
class WeakDecomposition:
    """S with an explicit basis, T on S in that basis, and N = Ker_inf + Indet_inf."""

    S: Subspace
    basis: tuple
    T: SemilinearMap
    N: Subspace
    stable: StableParts

    def to_ambient(self, c: Sequence) -> list:
        """Vector of S with coordinates c in the chosen basis."""
        ctx = self.S.ctx
        out = [0] * self.S.n
        for ci, v in zip(c, self.basis):
            if ci:
                out = ctx.row_sub_scaled(out, ctx.neg(ci), v)
        return out


def _combination(ctx: FieldCtx, rows: Sequence[Sequence], target: Sequence, k: int) -> list | None:
    """Coefficients c with sum c_i rows_i[:k] = target, or None."""
    if not rows:
        return [] if not any(target) else None
    a = transpose([list(r[:k]) for r in rows])
    return solve(ctx, a, target, len(rows))


def find_successor(b: SigmaRelation, x: Sequence, target: Subspace | None = None) -> list | None:
    """Some y with x -> y and y in target (any y if target is None)."""
    ctx, n = b.ctx, b.n
    space = b.space
    if target is not None and not target.is_full():
        z = [0] * n
        box = [list(v) + z for v in Subspace.full(ctx, n).basis]
        box += [z + list(v) for v in target.sigma(-b.twist).basis]
        space = space.intersect(Subspace.span(ctx, 2 * n, box))
    c = _combination(ctx, space.basis, x, n)
    if c is None:
        return None
    u = [0] * n
    for ci, r in zip(c, space.basis):
        if ci:
            u = ctx.row_sub_scaled(u, ctx.neg(ci), r[n:])
    return ctx.sigma_vec(u, b.twist)


def weak_decomposition(b: SigmaRelation) -> WeakDecomposition:
    """Split off the part of B that is the graph of a semilinear automorphism.

    Step 1 builds the automorphism Tbar of Dom_inf/Ker_inf, step 2 corrects the
    pivot-completion section iota by f = sum_j delta_j Tbar^{-j-1}, and step 3
    takes S as the image of iota + f.
    """
    ctx, n, e = b.ctx, b.n, b.twist
    sp = stable_parts(b)
    dom_inf, ker_inf = sp.dom, sp.ker
    indet1 = parts(b)[3]
    target = dom_inf.sum(indet1)
    img = image_of(b, dom_inf)
    for v in img.basis:
        if not target.contains_vector(v):
            raise WeakDecompositionError("B(Dom_inf) is not inside Dom_inf + Indet(B)", list(v))

    quo = Quotient(dom_inf, ker_inf)
    d = quo.dim
    reps = quo.reps
    N = ker_inf.sum(sp.indet)
    if d == 0:
        T = SemilinearMap(ctx, [], e)
        return WeakDecomposition(Subspace.zero(ctx, n), (), T, N, sp)

    # step 1: Tbar, and x1_i with iota(e_i) -> x1_i, x1_i in Dom_inf
    split_rows = [list(v) for v in dom_inf.basis] + [list(v) for v in indet1.basis]
    x1s, tcols = [], []
    for r in reps:
        y = find_successor(b, r)
        assert y is not None, "section vector outside the domain"
        c = _combination(ctx, split_rows, y, n)
        assert c is not None
        x1 = [0] * n
        for ci, v in zip(c[:dom_inf.dim], dom_inf.basis):
            if ci:
                x1 = ctx.row_sub_scaled(x1, ctx.neg(ci), v)
        x1s.append(x1)
        tcols.append(quo.coords(x1))
    tbar = transpose(tcols)  # column i = coordinates of Tbar(e_i)
    tbar_inv = inverse(ctx, tbar)
    if tbar_inv is None:
        raise WeakDecompositionError("induced map on Dom_inf/Ker_inf is not invertible")

    # step 2: z_i = x1_i - iota(Tbar e_i) in Ker_inf; chains z_i -> z^i_1 -> ... -> 0
    kc = sp.ker_chain
    m = len(kc) - 1
    chains = []
    for i in range(d):
        z = ctx.row_sub_scaled(x1s[i], 1, quo.lift(tcols[i]))
        chain = [z]
        for j in range(1, m):
            nxt = find_successor(b, chain[-1], kc[m - j])
            assert nxt is not None, "kernel chain broken"
            chain.append(nxt)
        chains.append(chain)

    def tbar_inv_apply(c: list, times: int) -> list:
        # Tbar^{-1}(c) = sigma^{-e}(Tbar^{-1} c)
        for _ in range(times):
            c = ctx.sigma_vec(mat_vec(ctx, tbar_inv, c), -e)
        return c

    svecs = []
    for k in range(d):
        ek = [1 if i == k else 0 for i in range(d)]
        s = list(reps[k])
        cur = ek
        for j in range(m):
            cur = tbar_inv_apply(cur, 1)  # Tbar^{-j-1} e_k
            tw = ctx.sigma_vec(cur, (j + 1) * e)
            for i in range(d):
                if tw[i]:
                    s = ctx.row_sub_scaled(s, ctx.neg(tw[i]), chains[i][j])
        svecs.append(s)

    # step 3
    S = Subspace.span(ctx, n, svecs)
    assert S.dim == d
    T = SemilinearMap(ctx, tbar, e)
    return WeakDecomposition(S, tuple(tuple(v) for v in svecs), T, N, sp)


def check_weak_decomposition(b: SigmaRelation, wd: WeakDecomposition) -> list[str]:
    """Independent membership checks of the decomposition's postconditions."""
    ctx, n = b.ctx, b.n
    sp = stable_parts(b)
    S, N = wd.S, wd.N
    errors = []
    if N != sp.ker.sum(sp.indet):
        errors.append("N != Ker_inf + Indet_inf")
    if not (sp.dom.contains(S) and sp.im.contains(S)):
        errors.append("S not inside Dom_inf and Im_inf")
    if S.intersect(sp.ker).dim or S.sum(sp.ker) != sp.dom:
        errors.append("Dom_inf != S + Ker_inf (direct)")
    m_prime = sp.dom.sum(sp.im)
    if S.intersect(N).dim or S.sum(N) != m_prime:
        errors.append("M' != S + N (direct)")
    # B|S is the graph of T: each basis pair lies in B and B|S has dimension dim S
    t_cols = transpose(wd.T.mat(), S.dim) if S.dim else []
    for k, v in enumerate(wd.basis):
        tv = wd.to_ambient(t_cols[k])
        if not b.contains_pair(v, tv):
            errors.append(f"pair (s_{k}, T s_{k}) not in B")
    b_s = restrict(b, S)
    graph = SigmaRelation.from_pairs(
        ctx, n, b.twist, [(v, wd.to_ambient(t_cols[k])) for k, v in enumerate(wd.basis)])
    if b_s != graph:
        errors.append("B|S != graph of T")
    if wd.T.rows and not wd.T.is_invertible():
        errors.append("T not invertible")
    b_m = restrict(b, m_prime)
    if b_m.space != b_s.space.sum(restrict(b, N).space):
        errors.append("B|M' != B|S + B|N")
    return errors
