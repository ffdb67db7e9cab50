"""Classification of twisted Gelfand-Ponomarev modules.

Words are tuples in display order (w_m, ..., w_1); the rightmost letter acts
first, so appending a letter L to w gives the word wL with D(wL) = D(w) D(L).
Both generators D(F) and D(V#) are sigma-linear, hence D(w) is
sigma^{l(w)}-linear.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .field import FieldCtx
from .linalg import (
    Quotient,
    Subspace,
    map_image,
    map_preimage,
    section,
    solve,
    transpose,
    zero_prefix_rows,
)
from .poly import elementary_divisors, invariant_factors
from .quiver import (
    F,
    VS,
    KraftQuiver,
    LabeledGraph,
    PeriodicWord,
    _key,
    canonical_rotation,
    disjoint_union,
    is_primitive,
    parse_word,
    primitive_necklaces,
    quiver_of_periodic,
    quiver_of_word,
    rotate,
    word_str,
)
from .repn import (
    GPError,
    GPModule,
    Monodromy,
    Representation,
    SearchConfig,
    Verdict,
    semilinear_conjugate,
)
from .semilinear import (
    SigmaRelation,
    compose,
    converse,
    graph_of,
    one,
    weak_decomposition,
)

__all__ = [
    "ClassificationError",
    "MonomialCache",
    "StabilizedSequence",
    "FirstKind",
    "GradedFirst",
    "CircularEntry",
    "ClassificationReport",
    "check_gp",
    "relation_of_word",
    "stabilized_sequence",
    "words_first_kind",
    "gr_first",
    "gamma_spaces",
    "linear_decomposition",
    "words_second_kind",
    "second_kind_sections",
    "classify",
    "split",
    "modules_isomorphic",
    "indecomposables",
]


class ClassificationError(AssertionError):
    """A structural property that must hold for every valid module failed."""


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ClassificationError(msg)


def check_gp(m: GPModule) -> GPError | None:
    """None when F V = V F = 0, else the first offending product entry."""
    return m.gp_violation()


def _ensure_gp(m: GPModule) -> None:
    bad = check_gp(m)
    if bad is not None:
        raise bad


# ---- monomials -------------------------------------------------------------------------

class MonomialCache:
    """D(w) for words w over {F, V#}, memoised per module."""

    def __init__(self, m: GPModule):
        self.module = m
        self.gen = {F: graph_of(m.F_map), VS: converse(graph_of(m.V_map))}
        self.memo: dict[tuple, SigmaRelation] = {(): one(m.ctx, m.dim)}

    def __call__(self, w: Sequence[str]) -> SigmaRelation:
        return relation_of_word(self, w)


def relation_of_word(cache: MonomialCache, w: Sequence[str]) -> SigmaRelation:
    w = parse_word(w)
    memo = cache.memo
    if w not in memo:
        # D(w_m ... w_1) = D(w_m) D(w_{m-1} ... w_1)
        memo[w] = compose(cache.gen[w[0]], relation_of_word(cache, w[1:]))
    return memo[w]


class _Pi:
    """pi_F = F^{-1}(.) and pi_V# = V(.), memoised on subspaces."""

    def __init__(self, m: GPModule):
        self.m = m
        self.memo: dict = {}

    def __call__(self, letter: str, x: Subspace) -> Subspace:
        key = (letter, x)
        out = self.memo.get(key)
        if out is None:
            m = self.m
            if letter == F:
                out = map_preimage(m.F, x, 1, m.ctx)
            else:
                out = map_image(m.V, x, -1, m.ctx)
            self.memo[key] = out
        return out

    def word(self, w: Sequence[str], x: Subspace) -> Subspace:
        """Subspace attached to D(v w) when x is the one attached to D(v)."""
        for a in w:
            x = self(a, x)
        return x

    def stable(self, p: Sequence[str]) -> tuple[Subspace, Subspace]:
        """(Ker D(p)_inf, Dom D(p)_inf)."""
        ctx, n = self.m.ctx, self.m.dim
        ker, dom = Subspace.zero(ctx, n), Subspace.full(ctx, n)
        for _ in range(n + 2):
            nk = self.word(p, ker)
            if nk == ker:
                break
            ker = nk
        for _ in range(n + 2):
            nd = self.word(p, dom)
            if nd == dom:
                break
            dom = nd
        return ker, dom


# ---- the stabilized sequence -----------------------------------------------------------------

@dataclass(frozen=True)
class StabilizedSequence:
    flag: tuple  # 0 = beta_0 < beta_1 < ... < beta_s = M
    witnesses: tuple  # (word, "Ker" | "Dom") per member

    @property
    def length(self) -> int:
        return len(self.flag) - 1

    def index(self, x: Subspace) -> int | None:
        for i, b in enumerate(self.flag):
            if b == x:
                return i
        return None

    def elementary_intervals(self) -> list[tuple[Subspace, Subspace]]:
        return [(self.flag[i], self.flag[i + 1]) for i in range(self.length)]


def stabilized_sequence(m: GPModule, pi: _Pi | None = None) -> StabilizedSequence:
    _ensure_gp(m)
    pi = pi or _Pi(m)
    ctx, n = m.ctx, m.dim
    zero, full = Subspace.zero(ctx, n), Subspace.full(ctx, n)
    members = {zero: ((), "Ker")}
    if full not in members:
        members[full] = ((), "Dom")
    queue = list(members)
    while queue:
        x = queue.pop(0)
        w, kind = members[x]
        for a in (F, VS):
            y = pi(a, x)
            if y not in members:
                for z in members:
                    _require(y.contains(z) or z.contains(y),
                             "stabilized sequence is not totally ordered")
                members[y] = (w + (a,), kind)
                queue.append(y)
    flag = sorted(members, key=lambda s: s.dim)
    for a, b in zip(flag, flag[1:]):
        _require(a.dim < b.dim and b.contains(a), "stabilized sequence is not a strict chain")
    return StabilizedSequence(tuple(flag), tuple(members[s] for s in flag))


# ---- first kind ------------------------------------------------------------------------

@dataclass(frozen=True)
class FirstKind:
    words: tuple  # W_1 in breadth-first order
    intervals: dict  # w -> (Dom D(V# w), Ker D(F w))


def words_first_kind(m: GPModule, pi: _Pi | None = None,
                     seq: StabilizedSequence | None = None) -> FirstKind:
    _ensure_gp(m)
    pi = pi or _Pi(m)
    ctx, n = m.ctx, m.dim
    full = Subspace.full(ctx, n)
    start = (pi(VS, full), pi(F, Subspace.zero(ctx, n)))
    words, intervals = [], {}
    queue = [((), start)]
    while queue:
        w, (a, b) = queue.pop(0)
        _require(b.contains(a), f"Dom D(V#w) not inside Ker D(Fw) for w = {word_str(w)}")
        if a == b:
            continue
        words.append(w)
        intervals[w] = (a, b)
        for letter in (F, VS):
            queue.append((w + (letter,), (pi(letter, a), pi(letter, b))))
    _require(len(words) <= n, "more first-kind words than dim M")
    if seq is not None:
        elem = seq.elementary_intervals()
        for w in words:
            _require(intervals[w] in elem, f"interval of {word_str(w)} is not elementary")
    _require(len(set(intervals.values())) == len(words), "first-kind interval map not injective")
    return FirstKind(tuple(words), intervals)


@dataclass
class GradedFirst:
    """Gamma(M, 1st) with U_w = Ker D(Fw) / Dom D(V# w); vertex i is words[i]."""

    rep: Representation | None
    words: tuple
    quotients: dict
    f_edges: dict = field(default_factory=dict)  # w -> edge index of wF -> w
    v_edges: dict = field(default_factory=dict)  # w -> edge index of w -> wV#


def gr_first(m: GPModule, first: FirstKind | None = None) -> GradedFirst:
    ctx = m.ctx
    first = first or words_first_kind(m)
    words = first.words
    idx = {w: i for i, w in enumerate(words)}
    quot = {w: Quotient(first.intervals[w][1], first.intervals[w][0]) for w in words}
    if not words:
        return GradedFirst(None, (), {})
    edges, maps, f_edges, v_edges = [], {}, {}, {}
    for w in words:
        qw = quot[w]
        child = w + (F,)
        if child in idx:
            # F: U_{wF} -> U_w, column i = coords of F(rep_i)
            cols = [qw.coords(m.apply_F(r)) for r in quot[child].reps]
            f_edges[w] = len(edges)
            maps[len(edges)] = transpose(cols, qw.dim) if cols else [[] for _ in range(qw.dim)]
            edges.append((idx[child], idx[w], "F"))
        child = w + (VS,)
        if child in idx:
            qc = quot[child]
            cols = [qc.coords(m.apply_V(r)) for r in qw.reps]
            v_edges[w] = len(edges)
            maps[len(edges)] = transpose(cols, qc.dim) if cols else [[] for _ in range(qc.dim)]
            edges.append((idx[w], idx[child], "V"))
    quiver = LabeledGraph(range(len(words)), edges)
    dims = {i: quot[w].dim for i, w in enumerate(words)}
    return GradedFirst(Representation(quiver, dims, maps), words, quot, f_edges, v_edges)


def _column_space(ctx: FieldCtx, mat, nrows: int) -> Subspace:
    cols = transpose(mat, len(mat[0]) if mat else 0) if mat else []
    return Subspace.span(ctx, nrows, cols)


def _twisted_kernel(ctx: FieldCtx, mat, ncols: int, twist: int) -> Subspace:
    """{x : mat . sigma^twist(x) = 0}."""
    from .linalg import nullspace
    return Subspace.span(ctx, ncols, nullspace(ctx, mat, ncols)).sigma(-twist)


def linear_decomposition(m: GPModule, graded: GradedFirst | None = None) -> list[tuple[tuple, int]]:
    """(w, dim X_w) for w in W_1 with X_w != 0."""
    g = graded or gr_first(m)
    ctx = m.ctx
    out = []
    total_u, total_x = 0, 0
    for w in sorted(g.words, key=lambda w: -len(w)):
        d = g.quotients[w].dim
        total_u += d
        if w in g.v_edges:
            rep = g.rep
            ker_v = _twisted_kernel(ctx, rep.maps[g.v_edges[w]], d, -1)
        else:
            ker_v = Subspace.full(ctx, d)
        if w in g.f_edges:
            xf = _column_space(ctx, g.rep.maps[g.f_edges[w]], d)
        else:
            xf = Subspace.zero(ctx, d)
        _require(ker_v.contains(xf), f"F-image not inside the V-kernel at {word_str(w)}")
        x_w = section(ker_v, xf)
        if x_w:
            out.append((w, len(x_w)))
            total_x += (len(w) + 1) * len(x_w)
    _require(total_u == total_x, "first-kind dimension identity fails")
    return sorted(out, key=lambda e: (len(e[0]), _key(e[0])))


def gamma_spaces(m: GPModule, first: FirstKind | None = None) -> dict:
    """w -> (gamma(w), gamma_circ(w)) realising M_1 inside M."""
    _ensure_gp(m)
    first = first or words_first_kind(m)
    ctx, n = m.ctx, m.dim
    ker_v = map_preimage(m.V, Subspace.zero(ctx, n), -1, m.ctx)
    out: dict = {}
    for w in sorted(first.words, key=lambda w: -len(w)):
        a, b = first.intervals[w]
        zero = Subspace.zero(ctx, n)
        g_f = out[w + (F,)][0] if w + (F,) in out else zero
        g_f = map_image(m.F, g_f, 1, ctx)
        g_next = out[w + (VS,)][0] if w + (VS,) in out else zero
        kv_b = ker_v.intersect(b)
        p = map_preimage(m.V, g_next, -1, ctx).intersect(b)
        g_v = Subspace.span(ctx, n, section(p, kv_b))
        g_c = Subspace.span(ctx, n, section(kv_b, a.sum(g_f).intersect(kv_b)))
        gamma = g_v.sum(g_c).sum(g_f)
        _require(gamma.dim == g_v.dim + g_c.dim + g_f.dim, f"gamma({word_str(w)}) parts not direct")
        _require(a.intersect(gamma).is_zero() and a.sum(gamma) == b,
                 f"Ker D(Fw) != Dom D(V#w) + gamma(w) at {word_str(w)}")
        if w + (F,) in out:
            _require(g_f.dim == out[w + (F,)][0].dim, f"F not injective on gamma({word_str(w + (F,))})")
        _require(map_image(m.V, gamma, -1, ctx) == g_next, f"V not onto gamma({word_str(w + (VS,))})")
        out[w] = (gamma, g_c)
    return out


# ---- second kind -------------------------------------------------------------------------

def _second_kind_intervals(seq: StabilizedSequence, first: FirstKind) -> list[tuple[Subspace, Subspace]]:
    used = set(first.intervals.values())
    return [j for j in seq.elementary_intervals() if j not in used]


def _fast_second_kind(pi: _Pi, q: list) -> list[PeriodicWord] | None:
    """Read periodic words off the permutation J -> pi_L(J) of second-kind intervals."""
    qset = set(q)
    step = {}
    for lo, hi in q:
        hits = []
        for a in (F, VS):
            nxt = (pi(a, lo), pi(a, hi))
            if nxt in qset:
                hits.append((a, nxt))
        if len(hits) != 1:
            return None
        step[(lo, hi)] = hits[0]
    if len({v[1] for v in step.values()}) != len(q):
        return None
    seen, out = set(), []
    for j0 in q:
        if j0 in seen:
            continue
        letters, j = [], j0
        while j not in seen:
            seen.add(j)
            a, j = step[j]
            letters.append(a)
        if j != j0 or not is_primitive(letters):
            return None
        p = tuple(letters)
        if pi.stable(p) != j0:
            return None
        out.append(PeriodicWord(canonical_rotation(p)[0]))
    return out


def _necklace_second_kind(pi: _Pi, max_len: int) -> list[PeriodicWord]:
    out = []
    for p in primitive_necklaces(max_len):
        ker, dom = pi.stable(p)
        if ker != dom:
            out.append(PeriodicWord(p))
    return out


def words_second_kind(m: GPModule, method: str = "auto", pi: _Pi | None = None,
                      seq: StabilizedSequence | None = None,
                      first: FirstKind | None = None) -> list[tuple[PeriodicWord, tuple]]:
    """Second-kind periodic words (canonical rotations) with their stable intervals.

    method is "fast" (shift permutation, verified), "necklace" (enumeration of
    primitive necklaces up to the number of second-kind intervals) or "auto".
    """
    _ensure_gp(m)
    pi = pi or _Pi(m)
    seq = seq or stabilized_sequence(m, pi)
    first = first or words_first_kind(m, pi, seq)
    q = _second_kind_intervals(seq, first)
    words = None
    if method in ("fast", "auto"):
        words = _fast_second_kind(pi, q)
        if words is None and method == "fast":
            raise ClassificationError("shift permutation does not determine the periodic words")
    if words is None:
        words = _necklace_second_kind(pi, len(q))
    words = sorted(words, key=lambda p: (len(p), _key(p.pattern)))
    # every rotation gives a distinct elementary interval, and these exhaust q
    covered = []
    elem = set(seq.elementary_intervals())
    for p in words:
        for j in range(len(p)):
            iv = pi.stable(rotate(p.pattern, j))
            _require(iv in elem, f"stable interval of {p} rotation {j} is not elementary")
            _require(iv[1].dim - iv[0].dim == pi.stable(p.pattern)[1].dim - pi.stable(p.pattern)[0].dim,
                     "rotations of a periodic word have different interval dimensions")
            covered.append(iv)
    _require(len(set(covered)) == len(covered) and set(covered) == set(q),
             "second-kind intervals do not account for the stabilized sequence")
    return [(p, pi.stable(p.pattern)) for p in words]


def _fibre(ctx: FieldCtx, rows, n: int, value, first: bool):
    """Affine set {u : (value, u) in span(rows)} (or (u, value) when first is False)."""
    if not first:
        rows = [list(r[n:]) + list(r[:n]) for r in rows]
    if not rows:
        return ([0] * n, []) if not any(value) else None
    c = solve(ctx, transpose([list(r[:n]) for r in rows], n), list(value), len(rows))
    if c is None:
        return None
    u = [0] * n
    for ci, r in zip(c, rows):
        if ci:
            u = ctx.row_sub_scaled(u, ctx.neg(ci), r[n:])
    return u, zero_prefix_rows(ctx, rows, 2 * n, n)


def _meet(ctx: FieldCtx, n: int, a, b):
    """A point of the intersection of affine sets a = (p, dirs) and b."""
    (pa, da), (pb, db) = a, b
    cols = list(da) + [[ctx.neg(x) for x in v] for v in db]
    rhs = ctx.row_sub_scaled(pb, 1, pa)
    if not cols:
        return pa if not any(rhs) else None
    c = solve(ctx, transpose(cols, n), rhs, len(cols))
    if c is None:
        return None
    x = list(pa)
    for ci, v in zip(c[:len(da)], da):
        if ci:
            x = ctx.row_sub_scaled(x, ctx.neg(ci), v)
    return x


@dataclass(frozen=True)
class SecondKindSections:
    pattern: PeriodicWord
    sections: tuple  # sections[j] = basis of S_{w(j)}
    monodromy: Monodromy


def second_kind_sections(m: GPModule, p: PeriodicWord, cache: MonomialCache | None = None,
                         pi: _Pi | None = None) -> SecondKindSections:
    _ensure_gp(m)
    ctx, n = m.ctx, m.dim
    cache = cache or MonomialCache(m)
    pi = pi or _Pi(m)
    w = p.pattern
    t = len(w)
    b = relation_of_word(cache, w)
    wd = weak_decomposition(b)
    ker, dom = pi.stable(w)
    d = dom.dim - ker.dim
    _require(wd.S.dim == d, f"section of {p} has the wrong dimension")
    _require(wd.S.intersect(wd.N).is_zero(), f"S meets Ker_inf + Indet_inf for {p}")
    t_cols = transpose(wd.T.mat(), d) if d else []
    paths = []
    for k, s in enumerate(wd.basis):
        f = wd.to_ambient(t_cols[k])
        path = [list(s)]
        for i in range(1, t + 1):
            rel = cache.gen[w[t - i]]
            rest = relation_of_word(cache, w[:t - i])
            fib1 = _fibre(ctx, rel.space.basis, n, path[-1], True)
            _require(fib1 is not None, "section vector leaves the domain")
            u0, du = fib1
            step = (ctx.sigma_vec(u0, rel.twist), [ctx.sigma_vec(v, rel.twist) for v in du])
            fib2 = _fibre(ctx, rest.space.basis, n, ctx.sigma_vec(f, -rest.twist), False)
            _require(fib2 is not None, "no path to the monodromy image")
            x = _meet(ctx, n, step, fib2)
            _require(x is not None, "no compatible successor along the periodic word")
            path.append(x)
        _require(path[-1] == list(f), "path around the periodic word does not close")
        paths.append(path)
    sections = []
    for j in range(t):
        basis = tuple(tuple(path[j]) for path in paths)
        sj = Subspace.span(ctx, n, basis)
        kj, dj = pi.stable(rotate(w, j))
        _require(sj.dim == d and sj.intersect(kj).is_zero() and sj.sum(kj) == dj,
                 f"S_w({j}) is not a complement of Ker_inf in Dom_inf for {p}")
        sections.append(basis)
    mono = Monodromy(0, tuple(tuple(r) for r in wd.T.mat()), t)
    return SecondKindSections(p, tuple(sections), mono)


# ---- reports --------------------------------------------------------------------------------

@dataclass(frozen=True)
class CircularEntry:
    pattern: PeriodicWord
    dim: int
    monodromy: Monodromy
    canonical_form: tuple | None  # invariant factors when sigma^t = id


@dataclass
class ClassificationReport:
    ctx: FieldCtx
    linear: list  # (word, multiplicity)
    circular: list  # CircularEntry
    dim: int

    def __post_init__(self):
        total = sum((len(w) + 1) * k for w, k in self.linear)
        total += sum(len(c.pattern) * c.dim for c in self.circular)
        _require(total == self.dim, f"dimension bookkeeping fails: {total} != {self.dim}")
        pats = [c.pattern.canonical() for c in self.circular]
        _require(len(set(pats)) == len(pats), "repeated circular pattern in report")

    @property
    def total_dim(self) -> int:
        return self.dim

    def to_json(self) -> dict:
        ctx = self.ctx
        circ = []
        for c in self.circular:
            cf = None
            if c.canonical_form is not None:
                cf = [[ctx.encode(a) for a in f] for f in c.canonical_form]
            circ.append({"pattern": list(c.pattern.pattern), "dim": c.dim,
                         "monodromy": [[ctx.encode(a) for a in r] for r in c.monodromy.matrix],
                         "twist": c.monodromy.twist, "canonical_form": cf})
        return {"linear": [{"word": list(w), "mult": k} for w, k in self.linear],
                "circular": circ, "dim": self.dim}

    def quiver(self) -> KraftQuiver:
        """Gamma recovered from the report: one component per word and per pattern."""
        parts = [quiver_of_word(w) for w, _ in self.linear]
        parts += [quiver_of_periodic(c.pattern, len(c.pattern)) for c in self.circular]
        return disjoint_union(parts)[0]


def _canonical_form(ctx: FieldCtx, mono: Monodromy):
    if not ctx.sigma_identity(mono.twist):
        return None
    return tuple(tuple(f) for f in invariant_factors(ctx, mono.mat()))


@dataclass
class _Analysis:
    module: GPModule
    pi: _Pi
    cache: MonomialCache
    seq: StabilizedSequence
    first: FirstKind
    second: list
    sections: list


def _analyse(m: GPModule, method: str = "auto") -> _Analysis:
    _ensure_gp(m)
    pi = _Pi(m)
    cache = MonomialCache(m)
    seq = stabilized_sequence(m, pi)
    first = words_first_kind(m, pi, seq)
    second = words_second_kind(m, method, pi, seq, first)
    sections = [second_kind_sections(m, p, cache, pi) for p, _ in second]
    return _Analysis(m, pi, cache, seq, first, second, sections)


def classify(m: GPModule, method: str = "auto") -> ClassificationReport:
    a = _analyse(m, method)
    graded = gr_first(m, a.first)
    linear = linear_decomposition(m, graded)
    if a.first.words:
        gam = gamma_spaces(m, a.first)
        by_gamma = sorted(((w, gc.dim) for w, (_, gc) in gam.items() if gc.dim),
                          key=lambda e: (len(e[0]), _key(e[0])))
        _require(by_gamma == linear, "graded and in-module first-kind multiplicities disagree")
    circular = [CircularEntry(s.pattern, s.monodromy.dim, s.monodromy, _canonical_form(m.ctx, s.monodromy))
                for s in a.sections]
    return ClassificationReport(m.ctx, linear, circular, m.dim)


def split(m: GPModule, method: str = "auto") -> tuple[list, list]:
    """Bases of M_1 (first kind) and M_2 (second kind) with M = M_1 + M_2 direct."""
    a = _analyse(m, method)
    ctx, n = m.ctx, m.dim
    m1 = []
    if a.first.words:
        for gamma, _ in gamma_spaces(m, a.first).values():
            m1 += [list(v) for v in gamma.basis]
    m2 = [list(v) for s in a.sections for basis in s.sections for v in basis]
    s1, s2 = Subspace.span(ctx, n, m1), Subspace.span(ctx, n, m2)
    _require(s1.dim == len(m1) and s2.dim == len(m2), "M_1 or M_2 basis is dependent")
    _require(s1.dim + s2.dim == n and s1.sum(s2).is_full(), "M != M_1 + M_2")
    for s in (s1, s2):
        _require(s.contains(map_image(m.F, s, 1, ctx)) and s.contains(map_image(m.V, s, -1, ctx)),
                 "summand is not F, V-stable")
    return m1, m2


# ---- isomorphism and indecomposables ---------------------------------------------------------

def modules_isomorphic(m1: GPModule, m2: GPModule, config: SearchConfig | None = None) -> Verdict:
    if m1.ctx != m2.ctx:
        raise ValueError("modules over different fields")
    if m1.dim != m2.dim:
        return Verdict("no", reason=f"dimensions differ ({m1.dim} vs {m2.dim})")
    r1, r2 = classify(m1), classify(m2)
    if r1.linear != r2.linear:
        return Verdict("no", reason="first-kind words or multiplicities differ")
    c1 = {c.pattern: c for c in r1.circular}
    c2 = {c.pattern: c for c in r2.circular}
    if set(c1) != set(c2):
        return Verdict("no", reason="periodic words differ")
    pending = []
    for p in sorted(c1, key=lambda p: (len(p), _key(p.pattern))):
        a, b = c1[p], c2[p]
        if a.dim != b.dim:
            return Verdict("no", reason=f"dimensions at {p} differ")
        v = semilinear_conjugate(m1.ctx, a.monodromy.mat(), b.monodromy.mat(), a.monodromy.twist, config)
        if v.status == "no":
            return Verdict("no", reason=f"monodromies at {p} are not conjugate: {v.reason}")
        if v.status == "undetermined":
            pending.append(str(p))
    if pending:
        return Verdict("undetermined", reason="conjugacy undecided at " + ", ".join(pending), exact=False)
    return Verdict("yes", reason="reports match")


def indecomposables(report: ClassificationReport) -> list[dict]:
    """Indecomposable summands; circular entries are split when the monodromy is linear."""
    ctx = report.ctx
    out = []
    for w, k in report.linear:
        out += [{"kind": "linear", "word": w, "dim": len(w) + 1, "indecomposable": True}] * k
    for c in report.circular:
        base = {"kind": "circular", "pattern": c.pattern}
        if c.dim == 1:
            out.append({**base, "dim": 1, "indecomposable": True})
            continue
        divs = elementary_divisors(ctx, c.monodromy.mat()) if c.canonical_form is not None else None
        if divs is None:
            out.append({**base, "dim": c.dim, "indecomposable": None})
        else:
            out += [{**base, "dim": len(f) - 1, "indecomposable": True, "elementary_divisor": tuple(f)}
                    for f in divs]
    return out
