"""Built-in invariant checks behind ``kraftgp selftest``."""

from __future__ import annotations

import random
import time

from .classify import classify, split, words_first_kind, words_second_kind
from .field import gf
from .linalg import Subspace
from .quiver import LabeledGraph, PeriodicWord, parse_word, quiver_of_periodic, quiver_of_word, validate_kraft
from .repn import module_of, random_invertible, trivial_rep
from .sample import assemble, corpus, round_trip
from .semilinear import (
    SemilinearMap,
    SigmaRelation,
    canonical_relation,
    check_weak_decomposition,
    compose,
    converse,
    direct_sum,
    graph_of,
    one,
    parts,
    weak_decomposition,
)


def random_relation(ctx, n: int, twist: int, rng: random.Random) -> SigmaRelation:
    k = rng.randint(0, 2 * n)
    rows = [[ctx.random_element(rng) for _ in range(2 * n)] for _ in range(k)]
    return SigmaRelation(ctx, n, twist, Subspace.span(ctx, 2 * n, rows))


def relation_law_failures(ctx, n: int, rng: random.Random) -> list[str]:
    e1, e2 = rng.randint(-2, 2), rng.randint(-2, 2)
    b1, b2 = random_relation(ctx, n, e1, rng), random_relation(ctx, n, e2, rng)
    out = []
    if converse(converse(b1)) != b1:
        out.append("involution")
    if converse(compose(b2, b1)) != compose(converse(b1), converse(b2)):
        out.append("contravariance")
    u = one(ctx, n)
    if compose(u, b1) != b1 or compose(b1, u) != b1:
        out.append("unit")
    f = SemilinearMap(ctx, [[ctx.random_element(rng) for _ in range(n)] for _ in range(n)], e1)
    g = SemilinearMap(ctx, [[ctx.random_element(rng) for _ in range(n)] for _ in range(n)], e2)
    if compose(graph_of(g), graph_of(f)) != graph_of(g.compose(f)):
        out.append("graph functor")
    d, k, im, ind = parts(b1)
    cd, ck, cim, cind = parts(converse(b1))
    if cd != im or ck != ind:
        out.append("converse parts")
    if d.dim - k.dim != im.dim - ind.dim:
        out.append("rank identity")
    c = compose(b2, b1)
    cd2, ck2, cim2, cind2 = parts(c)
    if not (d.contains(cd2) and ck2.contains(k) and parts(b2)[2].contains(cim2)
            and cind2.contains(parts(b2)[3])):
        out.append("monotonicity")
    return out


def _timed(name, fn):
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # report, do not crash the table
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return name, ok, f"{detail} ({time.perf_counter() - t0:.1f}s)"


def run(level: str = "fast", seed: int = 0) -> list[tuple[str, bool, str]]:
    full = level == "full"
    fields = (2, 4, 9) if full else (2, 4)
    rng = random.Random(seed)
    results = []

    def laws():
        count, bad = (500 if full else 120), []
        for i in range(count):
            ctx = gf(fields[i % len(fields)])
            bad += relation_law_failures(ctx, rng.randint(1, 4), rng)
        return not bad, f"{count} relation pairs, {len(bad)} failures"

    def weak():
        bad, count = 0, 0
        ctx = gf(4)
        blocks = []
        for kind in ("T", "T_plus", "plus_T", "plus_T_plus"):
            for n in range(1, 6):
                b = canonical_relation(kind, n, ctx)
                bad += bool(check_weak_decomposition(b, weak_decomposition(b)))
                count += 1
                blocks.append(b)
        for _ in range(40 if full else 15):
            n = rng.randint(1, 3)
            g = graph_of(SemilinearMap(ctx, random_invertible(ctx, n, rng), 1))
            b = direct_sum(g, rng.choice(blocks))
            bad += bool(check_weak_decomposition(b, weak_decomposition(b)))
            count += 1
        return not bad, f"{count} relations, {bad} failures"

    def examples():
        k = gf(2)
        checks = []
        r = classify(module_of(trivial_rep(quiver_of_word(parse_word("V#FV#FF"))), k))
        checks.append(r.linear == [(parse_word("V#FV#FF"), 1)] and not r.circular)
        r = classify(module_of(trivial_rep(quiver_of_periodic(PeriodicWord(parse_word("FV#FV#V#")), 5)), k))
        checks.append([(c.pattern, c.dim) for c in r.circular] == [(PeriodicWord(parse_word("FV#FV#V#")), 1)])
        r = classify(module_of(trivial_rep(quiver_of_periodic(PeriodicWord(parse_word("FFV#")), 9)), k))
        checks.append([(c.pattern, c.dim) for c in r.circular] == [(PeriodicWord(parse_word("FFV#")), 3)])
        bad = LabeledGraph(range(4), [(0, 1, "F"), (2, 1, "V"), (3, 2, "V"), (3, 0, "F"), (3, 3, "F")])
        checks.append(any(v.condition == 1 for v in validate_kraft(bad)))
        return all(checks), f"{sum(checks)}/{len(checks)} fixtures"

    def trips():
        samples = corpus(200 if full else 40, seed, fields)
        bad, undet = 0, 0
        for s in samples:
            errs, st = round_trip(s)
            bad += bool(errs)
            undet += st["undetermined"]
        return not bad, f"{len(samples)} samples, {bad} failures, {undet} undetermined"

    def bookkeeping():
        bad = 0
        samples = corpus(60 if full else 20, seed + 1, fields)
        for s in samples:
            m = module_of(assemble(s), s.ctx)
            m1, m2 = split(m)
            rep = classify(m)
            bad += rep.dim != m.dim or len(m1) + len(m2) != m.dim
            bad += words_second_kind(m, "fast") != words_second_kind(m, "necklace")
            bad += len(words_first_kind(m).words) > m.dim
        return not bad, f"{len(samples)} modules, {bad} failures"

    for name, fn in (("relation laws", laws), ("weak decomposition", weak), ("worked examples", examples),
                     ("round trip", trips), ("bookkeeping", bookkeeping)):
        results.append(_timed(name, fn))
    return results
