"""Dense exact linear algebra over a :class:`FieldCtx`.

Matrices are lists of rows.  A :class:`Subspace` is stored by its reduced
row-echelon basis, so two subspaces are equal exactly when their bases are.
Semilinear maps act as ``x -> A . sigma^t(x)`` with sigma applied entrywise.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .field import FieldCtx

__all__ = [
    "Subspace",
    "Quotient",
    "rref",
    "rank",
    "identity",
    "zeros",
    "mat_mul",
    "mat_vec",
    "mat_add",
    "mat_sub",
    "transpose",
    "inverse",
    "nullspace",
    "solve",
    "block_diag",
    "is_zero_matrix",
    "map_image",
    "map_preimage",
    "quotient_basis",
    "section",
    "zero_prefix_rows",
]

Row = list
Matrix = list


def rref(rows: Iterable[Sequence], ncols: int, ctx: FieldCtx,
         limit: int | None = None) -> tuple[list[list], list[int]]:
    """Reduced row-echelon form.  Pivots are only searched in columns < limit."""
    m = [list(r) for r in rows if any(r)]
    piv: list[int] = []
    lim = ncols if limit is None else limit
    r = 0
    nrows = len(m)
    for c in range(lim):
        if r == nrows:
            break
        pr = r
        while pr < nrows and not m[pr][c]:
            pr += 1
        if pr == nrows:
            continue
        if pr != r:
            m[r], m[pr] = m[pr], m[r]
        row = m[r]
        if row[c] != 1:
            row = ctx.row_scale(row, ctx.inv(row[c]))
            m[r] = row
        for i in range(nrows):
            if i != r:
                v = m[i][c]
                if v:
                    m[i] = ctx.row_sub_scaled(m[i], v, row)
        piv.append(c)
        r += 1
    out = m[:r]
    if limit is not None:
        # rows without a pivot in the searched range are kept (they are nonzero beyond it)
        out += [row for row in m[r:] if any(row)]
    return out, piv


def rank(ctx: FieldCtx, a: Matrix, ncols: int | None = None) -> int:
    if not a:
        return 0
    return len(rref(a, len(a[0]) if ncols is None else ncols, ctx)[1])


def zero_prefix_rows(ctx: FieldCtx, rows: Iterable[Sequence], ncols: int, a: int) -> list[list]:
    """Row-reduce and return the tails (columns >= a) of rows vanishing on the first a columns.

    These tails span {v[a:] : v in rowspace, v[:a] = 0}.
    """
    red, piv = rref(rows, ncols, ctx)
    return [r[a:] for r, p in zip(red, piv) if p >= a]


class Subspace:
    """Subspace of K^n held as an RREF basis."""

    __slots__ = ("ctx", "n", "basis", "pivots", "_hash")

    def __init__(self, ctx: FieldCtx, n: int, basis: Sequence[Sequence], pivots: Sequence[int]):
        self.ctx = ctx
        self.n = n
        self.basis = tuple(tuple(r) for r in basis)
        self.pivots = tuple(pivots)
        self._hash = None

    @classmethod
    def span(cls, ctx: FieldCtx, n: int, vectors: Iterable[Sequence]) -> "Subspace":
        vecs = [list(v) for v in vectors]
        for v in vecs:
            if len(v) != n:
                raise ValueError(f"vector of length {len(v)} in K^{n}")
        red, piv = rref(vecs, n, ctx)
        return cls(ctx, n, red, piv)

    @classmethod
    def zero(cls, ctx: FieldCtx, n: int) -> "Subspace":
        return cls(ctx, n, (), ())

    @classmethod
    def full(cls, ctx: FieldCtx, n: int) -> "Subspace":
        return cls(ctx, n, identity(n), range(n))

    @property
    def ambient_dim(self) -> int:
        return self.n

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return len(self.basis)

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, Subspace) and self.n == other.n
                and self.basis == other.basis)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.basis))
        return self._hash

    def __repr__(self) -> str:
        return f"Subspace(n={self.n}, basis={[list(r) for r in self.basis]})"

    def _check(self, other: "Subspace") -> None:
        if self.n != other.n:
            raise ValueError(f"ambient dimension mismatch: {self.n} vs {other.n}")

    def reduce(self, v: Sequence) -> list:
        """Remainder of v after clearing this subspace's pivot coordinates."""
        v = list(v)
        ctx = self.ctx
        for row, p in zip(self.basis, self.pivots):
            c = v[p]
            if c:
                v = ctx.row_sub_scaled(v, c, row)
        return v

    def contains_vector(self, v: Sequence) -> bool:
        return not any(self.reduce(v))

    def contains(self, other: "Subspace") -> bool:
        """other is a subspace of self."""
        self._check(other)
        if other.dim > self.dim:
            return False
        return all(self.contains_vector(v) for v in other.basis)

    def __le__(self, other: "Subspace") -> bool:
        return other.contains(self)

    def __lt__(self, other: "Subspace") -> bool:
        return self.dim < other.dim and other.contains(self)

    def __ge__(self, other: "Subspace") -> bool:
        return self.contains(other)

    def __gt__(self, other: "Subspace") -> bool:
        return other < self

    def __add__(self, other: "Subspace") -> "Subspace":
        return self.sum(other)

    def __and__(self, other: "Subspace") -> "Subspace":
        return self.intersect(other)

    def sum(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if not other.basis or other.basis == self.basis:
            return self
        if not self.basis:
            return other
        return Subspace.span(self.ctx, self.n, self.basis + other.basis)

    def intersect(self, other: "Subspace") -> "Subspace":
        """Zassenhaus: stack [a|a] over [b|0] and keep rows with zero left half."""
        self._check(other)
        if not self.basis or not other.basis:
            return Subspace.zero(self.ctx, self.n)
        if self.contains(other):
            return other
        if other.contains(self):
            return self
        n = self.n
        z = [0] * n
        rows = [list(v) + list(v) for v in self.basis] + [list(w) + z for w in other.basis]
        return Subspace.span(self.ctx, n, zero_prefix_rows(self.ctx, rows, 2 * n, n))

    def sigma(self, e: int) -> "Subspace":
        """Entrywise sigma^e; RREF shape is preserved since sigma fixes 0 and 1."""
        if self.ctx.sigma_identity(e):
            return self
        return Subspace(self.ctx, self.n, self.ctx.sigma_mat(self.basis, e), self.pivots)

    def is_zero(self) -> bool:
        return not self.basis

    def is_full(self) -> bool:
        return len(self.basis) == self.n

    def rows(self) -> list[list]:
        return [list(r) for r in self.basis]


def quotient_basis(big: Subspace, small: Subspace) -> list[list]:
    """Representatives of a basis of big/small.

    Reduce big's basis modulo small's pivots and row-reduce the remainders;
    the resulting rows vanish on small's pivots (non-pivot completion).
    """
    big._check(small)
    if not big.contains(small):
        raise ValueError("quotient needs small contained in big")
    rem = [small.reduce(v) for v in big.basis]
    red, _ = rref(rem, big.n, big.ctx)
    return red


def section(big: Subspace, small: Subspace) -> list[list]:
    """Right inverse of big -> big/small, given as representative vectors."""
    return quotient_basis(big, small)


class Quotient:
    """big/small with coordinates relative to :func:`quotient_basis`."""

    def __init__(self, big: Subspace, small: Subspace):
        self.big = big
        self.small = small
        self.reps = quotient_basis(big, small)
        _, self._piv = rref(self.reps, big.n, big.ctx)

    @property
    def dim(self) -> int:
        return len(self.reps)

    def coords(self, v: Sequence) -> list:
        r = self.small.reduce(v)
        return [r[p] for p in self._piv]

    def lift(self, c: Sequence) -> list:
        ctx = self.big.ctx
        out = [0] * self.big.n
        for ci, rep in zip(c, self.reps):
            if ci:
                out = ctx.row_sub_scaled(out, ctx.neg(ci), rep)
        return out


# ---- plain matrix helpers -------------------------------------------------

def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zeros(r: int, c: int) -> Matrix:
    return [[0] * c for _ in range(r)]


def transpose(a: Matrix, ncols: int | None = None) -> Matrix:
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*a)]


def mat_vec(ctx: FieldCtx, a: Matrix, v: Sequence) -> list:
    return [ctx.dot(row, v) for row in a]


def mat_mul(ctx: FieldCtx, a: Matrix, b: Matrix, inner: int | None = None) -> Matrix:
    if not a:
        return []
    if not b:
        return [[] for _ in a]
    bt = transpose(b)
    return [[ctx.dot(row, col) for col in bt] for row in a]


def mat_add(ctx: FieldCtx, a: Matrix, b: Matrix) -> Matrix:
    return [ctx.row_add(r, s) for r, s in zip(a, b)]


def mat_sub(ctx: FieldCtx, a: Matrix, b: Matrix) -> Matrix:
    return [ctx.row_sub_scaled(r, 1, s) for r, s in zip(a, b)]


def is_zero_matrix(a: Matrix) -> bool:
    return not any(any(r) for r in a)


def block_diag(blocks: Sequence[Matrix], dims: Sequence[int] | None = None) -> Matrix:
    sizes = list(dims) if dims is not None else [len(b) for b in blocks]
    n = sum(sizes)
    out = zeros(n, n)
    off = 0
    for b, d in zip(blocks, sizes):
        for i in range(d):
            out[off + i][off:off + d] = list(b[i])
        off += d
    return out


def inverse(ctx: FieldCtx, a: Matrix) -> Matrix | None:
    n = len(a)
    aug = [list(r) + e for r, e in zip(a, identity(n))]
    red, piv = rref(aug, 2 * n, ctx, limit=n)
    if piv != list(range(n)):
        return None
    return [r[n:] for r in red[:n]]


def nullspace(ctx: FieldCtx, a: Matrix, ncols: int) -> list[list]:
    """Basis of {x : a x = 0}."""
    red, piv = rref(a, ncols, ctx)
    free = [c for c in range(ncols) if c not in set(piv)]
    out = []
    for f in free:
        x = [0] * ncols
        x[f] = 1
        for row, p in zip(red, piv):
            if row[f]:
                x[p] = ctx.neg(row[f])
        out.append(x)
    return out


def solve(ctx: FieldCtx, a: Matrix, b: Sequence, ncols: int) -> list | None:
    """One solution x of a x = b, or None."""
    aug = [list(r) + [bi] for r, bi in zip(a, b)]
    red, piv = rref(aug, ncols + 1, ctx)
    if piv and piv[-1] == ncols:
        return None
    x = [0] * ncols
    for row, p in zip(red, piv):
        x[p] = row[ncols]
    return x


# ---- semilinear images and preimages -----------------------------------------

def map_image(a: Matrix, s: Subspace, twist: int, ctx: FieldCtx, n_out: int | None = None) -> Subspace:
    """{A . sigma^t(x) : x in s}."""
    rows_out = len(a) if n_out is None else n_out
    if a and len(a[0]) != s.n:
        raise ValueError("dimension mismatch in map_image")
    vecs = [mat_vec(ctx, a, ctx.sigma_vec(v, twist)) for v in s.basis]
    return Subspace.span(ctx, rows_out, vecs)


def map_preimage(a: Matrix, s: Subspace, twist: int, ctx: FieldCtx, n_in: int | None = None) -> Subspace:
    """{x : A . sigma^t(x) in s}."""
    m = len(a)
    n = len(a[0]) if a else (n_in if n_in is not None else s.n)
    if m != s.n:
        raise ValueError("dimension mismatch in map_preimage")
    if s.is_full():
        return Subspace.full(ctx, n)
    cols = transpose(a) if a else [[] for _ in range(n)]
    eye = identity(n)
    rows = [list(cols[j]) + eye[j] for j in range(n)]
    rows += [list(v) + [0] * n for v in s.basis]
    y = Subspace.span(ctx, n, zero_prefix_rows(ctx, rows, m + n, m))
    return y.sigma(-twist)
