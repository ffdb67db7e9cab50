"""Sigma-linear representations of Kraft quivers and their modules.

An F-arrow carries a matrix R acting as x -> R sigma(x), a V-arrow one acting
as x -> R sigma^{-1}(x); matrices are stored head x tail.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from math import gcd
from typing import Mapping, Sequence

from .field import FieldCtx
from .linalg import (
    identity,
    inverse,
    is_zero_matrix,
    mat_mul,
    mat_sub,
    nullspace,
    rank,
    solve,
    transpose,
    zeros,
)
from .poly import invariant_factors
from .quiver import (
    F,
    KraftError,
    KraftQuiver,
    LabeledGraph,
    PeriodicWord,
    Shape,
    classify_connected,
    minimal_period,
    quiver_of_periodic,
    validate_kraft,
)
from .semilinear import SemilinearMap

__all__ = [
    "GPModule",
    "GPError",
    "Representation",
    "Monodromy",
    "Verdict",
    "trivial_rep",
    "module_of",
    "monodromy",
    "semilinear_conjugate",
    "reps_isomorphic",
    "unreduce_transport",
    "direct_sum_reps",
    "random_invertible",
    "twisted_power",
]


class GPError(ValueError):
    """F V != 0 or V F != 0."""

    def __init__(self, which: str, row: int, col: int, value):
        super().__init__(f"{which} has nonzero entry at ({row}, {col})")
        self.which, self.row, self.col, self.value = which, row, col, value


class GPModule:
    """K^n with F = A_F sigma and V = A_V sigma^{-1}."""

    def __init__(self, ctx: FieldCtx, dim: int, F_matrix: Sequence[Sequence], V_matrix: Sequence[Sequence],
                 blocks: Mapping | None = None):
        if len(F_matrix) != dim or len(V_matrix) != dim or any(len(r) != dim for r in F_matrix) \
                or any(len(r) != dim for r in V_matrix):
            raise ValueError("F and V must be dim x dim")
        self.ctx = ctx
        self.dim = dim
        self.F = [list(r) for r in F_matrix]
        self.V = [list(r) for r in V_matrix]
        self.blocks = dict(blocks) if blocks else {}

    def __repr__(self) -> str:
        return f"GPModule(dim={self.dim}, {self.ctx!r})"

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, GPModule) and self.ctx == other.ctx and self.dim == other.dim
                and self.F == other.F and self.V == other.V)

    @property
    def F_map(self) -> SemilinearMap:
        return SemilinearMap(self.ctx, self.F, 1)

    @property
    def V_map(self) -> SemilinearMap:
        return SemilinearMap(self.ctx, self.V, -1)

    def apply_F(self, x):
        return self.F_map(x)

    def apply_V(self, x):
        return self.V_map(x)

    def gp_violation(self) -> GPError | None:
        ctx = self.ctx
        fv = mat_mul(ctx, self.F, ctx.sigma_mat(self.V, 1))
        vf = mat_mul(ctx, self.V, ctx.sigma_mat(self.F, -1))
        for name, m in (("F.sigma(V)", fv), ("V.sigma^-1(F)", vf)):
            for i, r in enumerate(m):
                for j, a in enumerate(r):
                    if a:
                        return GPError(name, i, j, a)
        return None

    @staticmethod
    def zero(ctx: FieldCtx) -> "GPModule":
        return GPModule(ctx, 0, [], [])

    def direct_sum(self, other: "GPModule") -> "GPModule":
        if self.ctx != other.ctx:
            raise ValueError("modules over different fields")
        n1, n2 = self.dim, other.dim

        def bd(a, b):
            return [list(r) + [0] * n2 for r in a] + [[0] * n1 + list(r) for r in b]

        return GPModule(self.ctx, n1 + n2, bd(self.F, other.F), bd(self.V, other.V))

    def change_basis(self, p: Sequence[Sequence]) -> "GPModule":
        """Module in the basis given by the columns of p: F' = p^{-1} A_F sigma(p)."""
        ctx = self.ctx
        pinv = inverse(ctx, [list(r) for r in p])
        if pinv is None:
            raise ValueError("change of basis is singular")
        f = mat_mul(ctx, pinv, mat_mul(ctx, self.F, ctx.sigma_mat(p, 1)))
        v = mat_mul(ctx, pinv, mat_mul(ctx, self.V, ctx.sigma_mat(p, -1)))
        return GPModule(ctx, self.dim, f, v)

    def restrict(self, basis: Sequence[Sequence]) -> "GPModule":
        """F and V on the span of basis vectors, which must be F- and V-stable."""
        ctx = self.ctx
        r = len(basis)
        if r == 0:
            return GPModule.zero(ctx)
        cols = transpose([list(v) for v in basis])  # n x r
        mats = []
        for m, tw in ((self.F, 1), (self.V, -1)):
            img = mat_mul(ctx, m, ctx.sigma_mat(cols, tw))  # n x r
            out = []
            for j in range(r):
                x = solve(ctx, cols, [row[j] for row in img], r)
                if x is None:
                    raise ValueError("subspace is not stable")
                out.append(x)
            mats.append(transpose(out))
        return GPModule(ctx, r, mats[0], mats[1])


@dataclass
class Representation:
    """Vertex dimensions and head x tail matrices on a labelled graph.

    The graph is usually a Kraft quiver; the graded first-kind tree is the
    one place where it need not be.
    """

    quiver: LabeledGraph
    dims: dict
    maps: dict  # edge index -> head x tail matrix

    def __post_init__(self):
        for v in self.quiver.vertices:
            if v not in self.dims:
                raise ValueError(f"no dimension for vertex {v}")
        for i, e in enumerate(self.quiver.edges):
            m = self.maps.get(i)
            if m is None:
                raise ValueError(f"no map for edge {i}")
            dh, dt = self.dims[e.head], self.dims[e.tail]
            if len(m) != dh or any(len(r) != dt for r in m):
                raise ValueError(f"map on edge {i} must be {dh}x{dt}")

    def to_json(self, ctx: FieldCtx) -> dict:
        return {"quiver": self.quiver.to_json(),
                "dims": {str(v): self.dims[v] for v in self.quiver.vertices},
                "maps": [{"edge": i, "matrix": [[ctx.encode(a) for a in r] for r in self.maps[i]]}
                         for i in range(len(self.quiver.edges))]}

    @classmethod
    def from_json(cls, d: dict, ctx: FieldCtx) -> "Representation":
        q = LabeledGraph.from_json(d["quiver"])
        dims = {int(k): int(v) for k, v in d["dims"].items()}
        maps = {int(m["edge"]): [[ctx.decode(a) for a in r] for r in m["matrix"]] for m in d["maps"]}
        return cls(q, dims, maps)

    def twist(self, i: int) -> int:
        return 1 if self.quiver.edges[i].label == F else -1

    def is_strict(self, ctx: FieldCtx) -> bool:
        for i, e in enumerate(self.quiver.edges):
            m = self.maps[i]
            if self.dims[e.head] != self.dims[e.tail]:
                return False
            if self.dims[e.head] and inverse(ctx, [list(r) for r in m]) is None:
                return False
        return True


def trivial_rep(g: LabeledGraph) -> Representation:
    return Representation(KraftQuiver.of(g), {v: 1 for v in g.vertices},
                          {i: [[1]] for i in range(len(g.edges))})


def direct_sum_reps(r1: Representation, r2: Representation) -> Representation:
    """Vertex-wise direct sum of two representations of the same quiver."""
    if r1.quiver != r2.quiver:
        raise ValueError("representations of different quivers")
    dims = {v: r1.dims[v] + r2.dims[v] for v in r1.quiver.vertices}
    maps = {}
    for i, e in enumerate(r1.quiver.edges):
        a, b = r1.maps[i], r2.maps[i]
        dt1, dt2 = r1.dims[e.tail], r2.dims[e.tail]
        maps[i] = [list(r) + [0] * dt2 for r in a] + [[0] * dt1 + list(r) for r in b]
    return Representation(r1.quiver, dims, maps)


def module_of(rep: Representation, ctx: FieldCtx, allow_non_kraft: bool = False) -> GPModule:
    """The module attached to rep; blocks maps vertex -> (offset, dim).

    Non-Kraft graphs are rejected unless allow_non_kraft is set, in which case
    F V = V F = 0 must come from the maps themselves (GPError otherwise).
    """
    kraft = isinstance(rep.quiver, KraftQuiver) or not validate_kraft(rep.quiver)
    if not kraft and not allow_non_kraft:
        raise KraftError(validate_kraft(rep.quiver))
    offs, off = {}, 0
    for v in rep.quiver.vertices:
        offs[v] = off
        off += rep.dims[v]
    n = off
    a_f, a_v = zeros(n, n), zeros(n, n)
    for i, e in enumerate(rep.quiver.edges):
        target = a_f if e.label == F else a_v
        ht, tt = offs[e.head], offs[e.tail]
        for r, row in enumerate(rep.maps[i]):
            for c, val in enumerate(row):
                if val:
                    target[ht + r][tt + c] = ctx.add(target[ht + r][tt + c], val)
    m = GPModule(ctx, n, a_f, a_v, blocks={v: (offs[v], rep.dims[v]) for v in rep.quiver.vertices})
    bad = m.gp_violation()
    if bad is not None:
        assert not kraft, f"module of a Kraft quiver violates FV = VF = 0: {bad}"
        raise bad
    return m


# ---- monodromy ------------------------------------------------------------------------

@dataclass(frozen=True)
class Monodromy:
    vertex: int
    matrix: tuple
    twist: int

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def mat(self) -> list[list]:
        return [list(r) for r in self.matrix]


def _step_maps(rep: Representation, ctx: FieldCtx, shape: Shape) -> list[SemilinearMap]:
    """phi_{v_i}: U_{v_i} -> U_{v_{i+1}}, all sigma-linear."""
    out = []
    for i in shape.edges:
        m = SemilinearMap(ctx, rep.maps[i], rep.twist(i))
        out.append(m if rep.quiver.edges[i].label == F else m.inverse())
    return out


def monodromy(rep: Representation, ctx: FieldCtx, at: int | None = None,
              shape: Shape | None = None) -> Monodromy:
    shape = shape or classify_connected(rep.quiver)
    if shape.kind != "circular":
        raise ValueError("monodromy needs a circular quiver")
    if not rep.is_strict(ctx):
        raise ValueError("monodromy needs a strict representation")
    n = len(shape.order)
    k = shape.order.index(shape.order[0] if at is None else at)
    steps = _step_maps(rep, ctx, shape)
    d = rep.dims[shape.order[k]]
    phi = SemilinearMap.identity(ctx, d)
    for s in range(n):
        phi = steps[(k + s) % n].compose(phi)
    return Monodromy(shape.order[k], phi.matrix, phi.twist)


def twisted_power(ctx: FieldCtx, a: Sequence[Sequence], twist: int, r: int) -> list[list]:
    """Matrix of (A sigma^t)^r, i.e. A sigma^t(A) ... sigma^{(r-1)t}(A)."""
    out = identity(len(a))
    for i in range(r):
        out = mat_mul(ctx, out, ctx.sigma_mat(a, i * twist))
    return out


# ---- semilinear conjugacy ----------------------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    status: str  # "yes" | "no" | "undetermined"
    witness: tuple | None = None
    reason: str = ""
    exact: bool = True

    def __bool__(self) -> bool:
        return self.status == "yes"


@dataclass
class SearchConfig:
    seed: int = 0
    trials: int = 400
    exhaustive_limit: int = 2 ** 20
    extra: dict = field(default_factory=dict)


def _is_invertible(ctx: FieldCtx, h) -> bool:
    return rank(ctx, [list(r) for r in h], len(h)) == len(h)


def _witness_search(ctx: FieldCtx, basis: list[list[list]], check, rng: random.Random,
                    trials: int, exhaustive_limit: int, coeff_ctx: FieldCtx | None = None):
    """Look for an invertible element of span(basis) (over coeff_ctx).

    Returns (matrix or None, exhausted: bool)."""
    d = len(basis[0]) if basis else 0
    if not basis:
        return None, True
    cctx = coeff_ctx or ctx

    def combo(coeffs):
        h = zeros(d, d)
        for c, b in zip(coeffs, basis):
            if c:
                for i in range(d):
                    for j in range(d):
                        if b[i][j]:
                            h[i][j] = ctx.add(h[i][j], ctx.mul(_embed(ctx, cctx, c), b[i][j]))
        return h

    for b in basis:
        if check(b):
            return b, False
    for _ in range(trials):
        coeffs = [cctx.random_element(rng) for _ in basis]
        h = combo(coeffs)
        if check(h):
            return h, False
    if cctx.kind == "Q":
        return None, False
    size = cctx.q ** len(basis)
    if size > exhaustive_limit:
        return None, False
    for coeffs in product(range(cctx.q), repeat=len(basis)):
        if any(coeffs):
            h = combo(coeffs)
            if check(h):
                return h, False
    return None, True


def _embed(ctx: FieldCtx, sub: FieldCtx, c):
    return c if sub is ctx else ctx.from_int(c)


def semilinear_conjugate(ctx: FieldCtx, a: Sequence[Sequence], b: Sequence[Sequence], twist: int,
                         config: SearchConfig | None = None) -> Verdict:
    """Is there a linear invertible h with B sigma^t(h) = h A?"""
    cfg = config or SearchConfig()
    a = [list(r) for r in a]
    b = [list(r) for r in b]
    d = len(a)
    if len(b) != d:
        return Verdict("no", reason=f"dimensions differ ({d} vs {len(b)})")
    if d == 0:
        return Verdict("yes", witness=())
    if a == b:
        return Verdict("yes", witness=tuple(tuple(r) for r in identity(d)))
    rng = random.Random(cfg.seed)

    def check(h):
        return _is_invertible(ctx, h) and mat_mul(ctx, b, ctx.sigma_mat(h, twist)) == mat_mul(ctx, h, a)

    if ctx.sigma_identity(twist):
        if invariant_factors(ctx, a) != invariant_factors(ctx, b):
            return Verdict("no", reason="rational canonical forms differ")
        # K-linear solution space of B H = H A
        rows = []
        for i in range(d):
            for j in range(d):
                row = [0] * (d * d)
                for k in range(d):
                    # (B H)_{ij} = sum_k B_ik H_kj ; (H A)_{ij} = sum_k H_ik A_kj
                    row[k * d + j] = ctx.add(row[k * d + j], b[i][k])
                    row[i * d + k] = ctx.sub(row[i * d + k], a[k][j])
                rows.append(row)
        sols = nullspace(ctx, rows, d * d)
        basis = [[s[i * d:(i + 1) * d] for i in range(d)] for s in sols]
        h, _ = _witness_search(ctx, basis, check, rng, cfg.trials, cfg.exhaustive_limit)
        wit = tuple(tuple(r) for r in h) if h is not None else None
        return Verdict("yes", witness=wit, reason="equal rational canonical forms")

    # sigma^t is not the identity: screen with the linear power, then search
    so = ctx.sigma_order
    r = so // gcd(twist % so, so)
    na, nb = twisted_power(ctx, a, twist, r), twisted_power(ctx, b, twist, r)
    if invariant_factors(ctx, na) != invariant_factors(ctx, nb):
        return Verdict("no", reason=f"canonical forms of the {r}-fold powers differ")
    basis = _fp_solution_space(ctx, a, b, twist)
    prime = FieldCtx.prime(ctx.p)
    h, exhausted = _witness_search(ctx, basis, check, rng, cfg.trials, cfg.exhaustive_limit, prime)
    if h is not None:
        return Verdict("yes", witness=tuple(tuple(x) for x in h), reason="witness found")
    if exhausted:
        return Verdict("no", reason="no invertible solution (exhaustive search)")
    return Verdict("undetermined", reason="search budget exhausted", exact=False)


def _fp_solution_space(ctx: FieldCtx, a, b, twist: int) -> list[list[list]]:
    """F_p-basis of {H : B sigma^t(H) = H A}, an F_p-subspace of M_d(K)."""
    d, k, p = len(a), ctx.k, ctx.p
    prime = FieldCtx.prime(p)
    gens = []
    for i in range(d):
        for j in range(d):
            for l in range(k):
                h = zeros(d, d)
                h[i][j] = ctx.from_coeffs([0] * l + [1])
                gens.append(h)
    cols = []
    for h in gens:
        img = mat_sub(ctx, mat_mul(ctx, b, ctx.sigma_mat(h, twist)), mat_mul(ctx, h, a))
        cols.append([c for r in img for x in r for c in ctx.to_coeffs(x)])
    rows = transpose(cols)
    out = []
    for s in nullspace(prime, rows, len(gens)):
        h = zeros(d, d)
        for c, g in zip(s, gens):
            if c:
                h = [[ctx.add(x, ctx.mul(ctx.from_int(c), y)) for x, y in zip(r1, r2)] for r1, r2 in zip(h, g)]
        out.append(h)
    return out


def reps_isomorphic(r1: Representation, r2: Representation, ctx: FieldCtx,
                    config: SearchConfig | None = None) -> tuple[Verdict, dict | None]:
    """Decide r1 ~ r2 on a shared connected circular quiver; returns the vertex-wise family."""
    if r1.quiver != r2.quiver:
        raise ValueError("representations live on different quivers")
    shape = classify_connected(r1.quiver)
    if shape.kind != "circular":
        raise ValueError("reps_isomorphic handles connected circular quivers")
    v0 = shape.order[0]
    m1 = monodromy(r1, ctx, v0, shape)
    m2 = monodromy(r2, ctx, v0, shape)
    verdict = semilinear_conjugate(ctx, m1.mat(), m2.mat(), m1.twist, config)
    if verdict.status != "yes" or verdict.witness is None:
        return verdict, None
    s1, s2 = _step_maps(r1, ctx, shape), _step_maps(r2, ctx, shape)
    n = len(shape.order)
    fam = {v0: [list(r) for r in verdict.witness]}
    f = SemilinearMap(ctx, fam[v0], 0)
    for i in range(n - 1):
        f = s2[i].compose(f).compose(s1[i].inverse())
        assert f.twist == 0
        fam[shape.order[i + 1]] = f.mat()
    # f_head rho = rho' sigma^{+-}(f_tail) on every arrow
    for i, e in enumerate(r1.quiver.edges):
        lhs = mat_mul(ctx, fam[e.head], r1.maps[i])
        rhs = mat_mul(ctx, r2.maps[i], ctx.sigma_mat(fam[e.tail], r1.twist(i)))
        assert lhs == rhs, "constructed isomorphism family does not intertwine"
    return verdict, fam


def unreduce_transport(rep: Representation, ctx: FieldCtx) -> tuple[Representation, list[int]]:
    """Collapse Gamma([w], kt) to Gamma([w], t) by block-summing the fibres.

    Returns the new representation and the coordinate permutation perm with
    new coordinate i = old coordinate perm[i] (both in module_of block order).
    """
    shape = classify_connected(rep.quiver)
    if shape.kind != "circular":
        raise ValueError("unreduce_transport needs a circular quiver")
    m = len(shape.order)
    t = minimal_period(shape.letters)
    if t == m:
        offs, off = {}, 0
        for v in rep.quiver.vertices:
            offs[v] = off
            off += rep.dims[v]
        return rep, list(range(off))
    k = m // t
    disp = tuple(reversed(shape.letters))[m - t:]
    target = quiver_of_periodic(PeriodicWord(disp), t)
    # fibre of new vertex i (0-based) = old order positions i, i+t, ..., in that order
    fib = {i: [shape.order[i + a * t] for a in range(k)] for i in range(t)}
    dims = {i: sum(rep.dims[v] for v in fib[i]) for i in range(t)}
    maps = {}
    for i in range(t):
        e_new = i  # edge i of the target joins vertices i and i + 1
        enew = target.edges[e_new]
        tail_new, head_new = enew.tail, enew.head
        mat = zeros(dims[head_new], dims[tail_new])
        # place each old edge E_{i + a t} (joining positions i+at and i+at+1)
        for a in range(k):
            pos = i + a * t
            old_idx = shape.edges[pos]
            old = rep.quiver.edges[old_idx]
            src_fib, dst_fib = fib[tail_new], fib[head_new]
            r0 = sum(rep.dims[v] for v in dst_fib[:dst_fib.index(old.head)])
            c0 = sum(rep.dims[v] for v in src_fib[:src_fib.index(old.tail)])
            for r, row in enumerate(rep.maps[old_idx]):
                for c, val in enumerate(row):
                    mat[r0 + r][c0 + c] = val
        maps[e_new] = mat
    out = Representation(target, dims, maps)
    # coordinate permutation: new blocks in vertex order 0..t-1, each the fibre blocks in order
    old_offs, off = {}, 0
    for v in rep.quiver.vertices:
        old_offs[v] = off
        off += rep.dims[v]
    perm = []
    for i in range(t):
        for v in fib[i]:
            perm += list(range(old_offs[v], old_offs[v] + rep.dims[v]))
    return out, perm


def random_invertible(ctx: FieldCtx, d: int, rng: random.Random) -> list[list]:
    while True:
        m = [[ctx.random_element(rng) for _ in range(d)] for _ in range(d)]
        if d == 0 or inverse(ctx, m) is not None:
            return m
