from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, strategies as st

from kraftgp.field import gf
from kraftgp.linalg import inverse, mat_mul
from kraftgp.quiver import KraftError, LabeledGraph, PeriodicWord, classify_connected, parse_word, quiver_of_periodic, quiver_of_word
from kraftgp.repn import (
    GPError,
    GPModule,
    Representation,
    SearchConfig,
    module_of,
    monodromy,
    random_invertible,
    reps_isomorphic,
    semilinear_conjugate,
    trivial_rep,
    twisted_power,
    unreduce_transport,
)
from kraftgp.sample import assemble, random_sample
from kraftgp.semilinear import SemilinearMap
from graphs import LINEAR_EXAMPLE, NOT_KRAFT
from oracle import frob

F2, F3, F4, F9 = gf(2), gf(3), gf(4), gf(9)


def gl(ctx, d):
    for entries in itertools.product(ctx.elements(), repeat=d * d):
        h = [list(entries[i * d:(i + 1) * d]) for i in range(d)]
        if inverse(ctx, h) is not None:
            yield h


def conjugate_brute(ctx, a, b, t):
    """Some invertible h with B sigma^t(h) = h A."""
    for h in gl(ctx, len(a)):
        sh = [[frob(ctx, x, t) for x in r] for r in h]
        if mat_mul(ctx, b, sh) == mat_mul(ctx, h, a):
            return True
    return False


def witness_ok(ctx, a, b, t, h):
    h = [list(r) for r in h]
    return inverse(ctx, h) is not None and mat_mul(ctx, b, ctx.sigma_mat(h, t)) == mat_mul(ctx, h, a)


def circular_rep(ctx, pattern, m, d, rng):
    q = quiver_of_periodic(PeriodicWord(parse_word(pattern)), m)
    return Representation(q, {v: d for v in q.vertices},
                          {i: random_invertible(ctx, d, rng) for i in range(len(q.edges))})


# ---- modules of representations ---------------------------------------------------------

def test_trivial_rep_dims():
    r = trivial_rep(LINEAR_EXAMPLE)
    assert r.dims == {v: 1 for v in range(6)}
    assert trivial_rep(LabeledGraph([], [])).dims == {}


def test_module_of_single_arrow():
    m = module_of(trivial_rep(quiver_of_word(parse_word("F"))), F2)
    assert m.dim == 2 and m.F == [[0, 0], [1, 0]] and m.V == [[0, 0], [0, 0]]


def test_module_of_loop():
    m = module_of(trivial_rep(quiver_of_periodic(PeriodicWord(("F",)), 1)), F4)
    assert m.F == [[1]] and m.V == [[0]]
    x = F4.from_coeffs([0, 1])
    assert m.apply_F([x]) == [F4.sigma_pow(x, 1)]


def test_module_of_disjoint_union_is_direct_sum():
    rng = random.Random(5)
    s = random_sample(rng, F4, max_components=3)
    m = module_of(assemble(s), F4)
    parts = [module_of(c.rep, F4) for c in s.components]
    total = parts[0]
    for p in parts[1:]:
        total = total.direct_sum(p)
    assert m == total


def test_module_of_rejects_non_kraft():
    rep = Representation(NOT_KRAFT, {v: 1 for v in NOT_KRAFT.vertices}, {i: [[1]] for i in range(len(NOT_KRAFT.edges))})
    with pytest.raises(KraftError):
        module_of(rep, F2)


def test_gp_violations():
    assert GPModule(F2, 1, [[1]], [[1]]).gp_violation() is not None
    assert GPModule(F2, 2, [[0, 0], [1, 0]], [[0, 1], [0, 0]]).gp_violation() is not None
    assert module_of(trivial_rep(LINEAR_EXAMPLE), F2).gp_violation() is None
    assert isinstance(GPModule(F2, 1, [[1]], [[1]]).gp_violation(), GPError)


def test_representation_json_round_trip():
    rng = random.Random(2)
    rep = circular_rep(F9, "FV#V#", 3, 2, rng)
    assert Representation.from_json(rep.to_json(F9), F9) == rep
    assert rep.is_strict(F9)


def test_representation_shape_checked():
    q = quiver_of_word(parse_word("F"))
    with pytest.raises(ValueError):
        Representation(q, {0: 1, 1: 2}, {0: [[1]]})


# ---- monodromy ----------------------------------------------------------------------------

def test_trivial_monodromy():
    for pat, m in (("FV#FV#V#", 5), ("F", 3), ("V#", 2)):
        mono = monodromy(trivial_rep(quiver_of_periodic(PeriodicWord(parse_word(pat)), m)), F4)
        assert mono.mat() == [[1]] and mono.twist == m


def test_loop_monodromy_is_the_matrix():
    a = [[1, 2], [0, 1]]
    q = quiver_of_periodic(PeriodicWord(("F",)), 1)
    mono = monodromy(Representation(q, {0: 2}, {0: a}), F3)
    assert mono.mat() == a and mono.twist == 1


def test_monodromy_needs_circular_strict():
    with pytest.raises(ValueError):
        monodromy(trivial_rep(quiver_of_word(parse_word("F"))), F2)


@given(st.integers(0, 10 ** 6), st.sampled_from(["F", "FV#", "FFV#", "V#V#F"]), st.integers(1, 2))
def test_monodromy_moves_by_step_maps(seed, pat, d):
    # Phi at v_{i+1} is phi_i Phi phi_i^-1 for the sigma-linear step phi_i
    rng = random.Random(seed)
    ctx = rng.choice([F4, F9])
    rep = circular_rep(ctx, pat, len(parse_word(pat)), d, rng)
    shape = classify_connected(rep.quiver)
    n = len(shape.order)
    for i in range(n):
        e = rep.quiver.edges[shape.edges[i]]
        step = SemilinearMap(ctx, rep.maps[shape.edges[i]], 1 if e.label == "F" else -1)
        if e.label != "F":
            step = step.inverse()
        here = monodromy(rep, ctx, shape.order[i], shape)
        there = monodromy(rep, ctx, shape.order[(i + 1) % n], shape)
        phi = SemilinearMap(ctx, here.mat(), here.twist)
        moved = step.compose(phi).compose(step.inverse())
        assert moved.matrix == there.matrix and moved.twist == there.twist == n


def test_twisted_power():
    x = F4.from_coeffs([0, 1])
    # (x sigma)^2 = x sigma(x) = x (x + 1) = 1
    assert twisted_power(F4, [[x]], 1, 2) == [[1]]


# ---- semilinear conjugacy ------------------------------------------------------------------

def test_conjugate_examples():
    v = semilinear_conjugate(F3, [[1, 1], [0, 1]], [[1, 1], [0, 1]], 0)
    assert v.status == "yes"
    assert semilinear_conjugate(F3, [[1, 1], [0, 1]], [[1, 0], [0, 1]], 0).status == "no"
    x = F4.from_coeffs([0, 1])
    v = semilinear_conjugate(F4, [[x]], [[1]], 1)
    assert v.status == "yes" and witness_ok(F4, [[x]], [[1]], 1, v.witness)
    assert v.witness == ((x,),)


@pytest.mark.parametrize("q,d,t", [(4, 1, 1), (9, 1, 1), (8, 1, 1), (8, 1, 2), (4, 2, 1), (9, 1, 2), (27, 1, 1)])
def test_conjugacy_matches_brute_force(q, d, t):
    ctx = gf(q)
    rng = random.Random(q * 10 + d + t)
    pairs = []
    for _ in range(25 if d == 2 else 40):
        a = random_invertible(ctx, d, rng)
        b = random_invertible(ctx, d, rng)
        pairs.append((a, b))
    for a, b in pairs:
        v = semilinear_conjugate(ctx, a, b, t, SearchConfig(seed=1))
        assert v.status in ("yes", "no")
        assert (v.status == "yes") == conjugate_brute(ctx, a, b, t)
        if v.status == "yes":
            assert witness_ok(ctx, a, b, t, v.witness)


def test_conjugacy_dimension_mismatch():
    assert semilinear_conjugate(F2, [[1]], [[1, 0], [0, 1]], 0).status == "no"


# ---- isomorphism of representations ----------------------------------------------------------

def test_reps_isomorphic_self_and_rescaled():
    rng = random.Random(8)
    rep = circular_rep(F4, "FV#V#", 3, 2, rng)
    v, fam = reps_isomorphic(rep, rep, F4)
    assert v.status == "yes" and fam is not None
    # change basis at vertex 0 by h: arrows into 0 get h on the left, arrows out of 0 get h^-1
    h = random_invertible(F4, 2, rng)
    hi = inverse(F4, h)
    maps = {}
    for i, e in enumerate(rep.quiver.edges):
        m = rep.maps[i]
        if e.head == 0:
            m = mat_mul(F4, h, m)
        if e.tail == 0:
            tw = 1 if e.label == "F" else -1
            m = mat_mul(F4, m, F4.sigma_mat(hi, tw))
        maps[i] = m
    other = Representation(rep.quiver, rep.dims, maps)
    v, fam = reps_isomorphic(rep, other, F4)
    assert v.status == "yes"


@pytest.mark.parametrize("a", range(1, 9))
def test_norm_equation_on_loop_f9(a):
    # d = 1 loop: [a] ~ [1] iff a = sigma(h)/h for some h, decided by enumeration
    q = quiver_of_periodic(PeriodicWord(("F",)), 1)
    r1 = Representation(q, {0: 1}, {0: [[a]]})
    r2 = Representation(q, {0: 1}, {0: [[1]]})
    want = any(F9.mul(F9.inv(h), frob(F9, h, 1)) == a for h in range(1, 9))
    v, _ = reps_isomorphic(r1, r2, F9)
    assert (v.status == "yes") == want


def test_identity_twist_on_f9_two_cycle():
    # sigma^2 = id on F9: d = 1 monodromies are conjugate only when equal
    q = quiver_of_periodic(PeriodicWord(parse_word("FV#")), 2)
    base = Representation(q, {0: 1, 1: 1}, {0: [[1]], 1: [[1]]})
    for a in range(1, 9):
        other = Representation(q, {0: 1, 1: 1}, {0: [[a]], 1: [[1]]})
        v, _ = reps_isomorphic(base, other, F9)
        m1, m2 = monodromy(base, F9), monodromy(other, F9)
        assert (v.status == "yes") == (m1.mat() == m2.mat())


# ---- unreduce -----------------------------------------------------------------------------

def test_unreduce_loop_of_four():
    rep = trivial_rep(quiver_of_periodic(PeriodicWord(("F",)), 4))
    out, perm = unreduce_transport(rep, F2)
    assert out.quiver == quiver_of_periodic(PeriodicWord(("F",)), 1)
    assert out.dims == {0: 4}
    mat = out.maps[0]
    assert sorted(map(sum, mat)) == [1, 1, 1, 1] and sorted(map(sum, zip(*mat))) == [1, 1, 1, 1]
    # a single 4-cycle
    seen, j = set(), 0
    while j not in seen:
        seen.add(j)
        j = [r[j] for r in mat].index(1)
    assert len(seen) == 4


def test_unreduce_ffv_nine():
    rep = trivial_rep(quiver_of_periodic(PeriodicWord(parse_word("FFV#")), 9))
    out, perm = unreduce_transport(rep, F2)
    assert out.dims == {0: 3, 1: 3, 2: 3}
    m = module_of(rep, F2)
    p = [[1 if perm[j] == i else 0 for j in range(9)] for i in range(9)]
    assert m.change_basis(p) == module_of(out, F2)


@given(st.integers(0, 10 ** 6))
def test_unreduce_preserves_module(seed):
    rng = random.Random(seed)
    ctx = rng.choice([F2, F4, F9])
    pat = rng.choice(["F", "FV#", "FFV#", "V#"])
    k = rng.randint(1, 3)
    t = len(parse_word(pat))
    rep = circular_rep(ctx, pat, k * t, rng.randint(1, 2), rng)
    out, perm = unreduce_transport(rep, ctx)
    n = len(perm)
    p = [[1 if perm[j] == i else 0 for j in range(n)] for i in range(n)]
    assert module_of(rep, ctx).change_basis(p) == module_of(out, ctx)
    assert len(out.quiver.vertices) == t
