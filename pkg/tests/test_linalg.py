from __future__ import annotations

from fractions import Fraction

from hypothesis import given, strategies as st

from kraftgp.field import gf, rationals
from kraftgp.linalg import (
    Quotient,
    Subspace,
    inverse,
    map_image,
    map_preimage,
    mat_mul,
    nullspace,
    rank,
    rref,
    section,
    solve,
)
from oracle import frob_vec, span_set, subspace_set, vectors

F2, F3, F4 = gf(2), gf(3), gf(4)


def rows_of(res):
    # rref may return (rows, pivots)
    return [list(r) for r in (res[0] if isinstance(res, tuple) else res)]


def test_rref_examples():
    assert rows_of(rref([[0, 1], [1, 0]], 2, F2)) == [[1, 0], [0, 1]]
    q = rationals()
    assert rows_of(rref([[1, 2], [2, 4]], 2, q)) == [[1, 2]]
    assert rows_of(rref([[1, 1], [1, 2]], 2, F3)) == [[1, 0], [0, 1]]


def test_sum_and_intersection_of_axes():
    a = Subspace.span(F3, 3, [[1, 0, 0]])
    b = Subspace.span(F3, 3, [[0, 1, 0]])
    assert a.sum(b) == Subspace.span(F3, 3, [[1, 0, 0], [0, 1, 0]])
    assert a.intersect(b).is_zero()
    assert a.intersect(a) == a and a.sum(a) == a


def test_intersection_over_f2_by_enumeration():
    a = Subspace.span(F2, 3, [[1, 1, 0], [0, 0, 1]])
    b = Subspace.span(F2, 3, [[1, 0, 1], [0, 1, 1]])
    both = [v for v in vectors(F2, 3) if a.contains_vector(v) and b.contains_vector(v)]
    assert set(both) == subspace_set(a.intersect(b))
    assert a.intersect(b) == Subspace.span(F2, 3, [[1, 1, 0]])


def test_image_and_preimage_trivial_cases():
    s = Subspace.span(F3, 2, [[1, 2]])
    z = [[0, 0], [0, 0]]
    eye = [[1, 0], [0, 1]]
    assert map_image(z, s, 0, F3).is_zero()
    assert map_preimage(z, s, 0, F3).is_full()
    assert map_image(eye, s, 0, F3) == s
    assert map_preimage(eye, s, 0, F3) == s


def test_twisted_image_over_f4():
    x = F4.from_coeffs([0, 1])
    s = Subspace.span(F4, 2, [[x, 1]])
    img = map_image([[1, 0], [0, 1]], s, 1, F4)
    assert img == Subspace.span(F4, 2, [[F4.add(x, 1), 1]])


def test_quotient_and_section():
    big = Subspace.full(F3, 3)
    small = Subspace.span(F3, 3, [[1, 1, 0]])
    q = Quotient(big, small)
    assert q.dim == 2
    sec = Subspace.span(F3, 3, section(big, small))
    assert sec.intersect(small).is_zero() and sec.sum(small) == big
    for v in vectors(F3, 3):
        diff = [F3.sub(a, b) for a, b in zip(v, q.lift(q.coords(v)))]
        assert small.contains_vector(diff)


def test_inverse_nullspace_solve():
    a = [[1, 2], [0, 1]]
    assert mat_mul(F3, a, inverse(F3, a)) == [[1, 0], [0, 1]]
    assert inverse(F3, [[1, 1], [1, 1]]) is None
    ns = nullspace(F3, [[1, 1], [1, 1]], 2)
    assert len(ns) == 1 and F3.add(ns[0][0], ns[0][1]) == 0
    x = solve(F3, a, [1, 1], 2)
    assert [F3.dot(r, x) for r in a] == [1, 1]
    assert solve(F3, [[1, 1], [1, 1]], [1, 0], 2) is None
    assert rank(F3, [[1, 1], [2, 2]], 2) == 1


# ---- laws -------------------------------------------------------------------------

FIELDS = [gf(2), gf(3), gf(4)]


@st.composite
def subspaces(draw, ctx, n):
    k = draw(st.integers(0, n + 1))
    rows = [[draw(st.integers(0, ctx.q - 1)) for _ in range(n)] for _ in range(k)]
    return Subspace.span(ctx, n, rows)


@st.composite
def triple(draw):
    ctx = draw(st.sampled_from(FIELDS))
    n = draw(st.integers(1, 3))
    return ctx, n, draw(subspaces(ctx, n)), draw(subspaces(ctx, n)), draw(subspaces(ctx, n))


@given(triple())
def test_lattice_laws(t):
    ctx, n, a, b, c = t
    assert a.sum(a) == a and a.intersect(a) == a
    assert a.sum(b) == b.sum(a) and a.intersect(b) == b.intersect(a)
    assert a.sum(b).dim + a.intersect(b).dim == a.dim + b.dim
    # modular law: a <= c implies a + (b & c) = (a + b) & c
    ac = a.intersect(c)
    assert ac.sum(b.intersect(c)) == ac.sum(b).intersect(c)


@given(triple())
def test_operations_match_enumeration(t):
    ctx, n, a, b, _ = t
    sa, sb = subspace_set(a), subspace_set(b)
    assert subspace_set(a.intersect(b)) == sa & sb
    assert subspace_set(a.sum(b)) == span_set(ctx, n, list(a.basis) + list(b.basis))
    assert sa | sb <= subspace_set(a.sum(b))
    assert len(sa) == ctx.q ** a.dim


@given(triple(), st.integers(-3, 3))
def test_sigma_commutes_with_lattice(t, e):
    ctx, n, a, b, _ = t
    assert a.sum(b).sigma(e) == a.sigma(e).sum(b.sigma(e))
    assert a.intersect(b).sigma(e) == a.intersect(b.sigma(-e).sigma(e)).sigma(e)
    assert subspace_set(a.sigma(e)) == frozenset(tuple(frob_vec(ctx, v, e)) for v in subspace_set(a))


@given(st.sampled_from(FIELDS), st.data(), st.integers(-2, 2))
def test_image_preimage_adjunction(ctx, data, e):
    n = data.draw(st.integers(1, 3))
    a = [[data.draw(st.integers(0, ctx.q - 1)) for _ in range(n)] for _ in range(n)]
    s = data.draw(subspaces(ctx, n))
    img = map_image(a, s, e, ctx)
    assert map_preimage(a, img, e, ctx).contains(s)
    pre = map_preimage(a, s, e, ctx)
    assert s.contains(map_image(a, pre, e, ctx))
    # preimage by enumeration
    want = {v for v in vectors(ctx, n)
            if s.contains_vector([ctx.dot(r, frob_vec(ctx, v, e)) for r in a])}
    assert subspace_set(pre) == want


def test_rationals_subspace():
    q = rationals()
    a = Subspace.span(q, 2, [[Fraction(1, 2), 1]])
    assert a.contains_vector([1, 2])
    assert not a.contains_vector([1, 1])
