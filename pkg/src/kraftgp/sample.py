"""Random Kraft quivers with strict representations, and the round-trip check."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .classify import ClassificationReport, classify
from .field import FieldCtx, gf
from .poly import invariant_factors
from .quiver import (
    F,
    VS,
    PeriodicWord,
    canonical_rotation,
    classify_connected,
    disjoint_union,
    graph_iso,
    is_primitive,
    quiver_of_periodic,
    quiver_of_word,
    word_of,
    word_str,
)
from .repn import (
    Representation,
    SearchConfig,
    module_of,
    monodromy,
    random_invertible,
    semilinear_conjugate,
    twisted_power,
)

__all__ = ["Component", "Sample", "random_sample", "assemble", "round_trip", "corpus"]


@dataclass(frozen=True)
class Component:
    """A linear word or a primitive periodic pattern carrying a strict rep of dim d."""

    kind: str  # "linear" | "circular"
    word: tuple
    d: int
    rep: Representation

    def key(self):
        if self.kind == "linear":
            return ("linear", self.word)
        return ("circular", canonical_rotation(self.word)[0])


@dataclass(frozen=True)
class Sample:
    ctx: FieldCtx
    components: tuple

    @property
    def dim(self) -> int:
        return sum(len(c.rep.quiver.vertices) * c.d for c in self.components)


def _strict_rep(ctx: FieldCtx, quiver, d: int, rng: random.Random) -> Representation:
    dims = {v: d for v in quiver.vertices}
    maps = {i: random_invertible(ctx, d, rng) for i in range(len(quiver.edges))}
    return Representation(quiver, dims, maps)


def random_sample(rng: random.Random, ctx: FieldCtx, max_components: int = 6, max_size: int = 6,
                  max_dim: int = 16, max_d: int = 3) -> Sample:
    """Pairwise non-isomorphic components, circular parts without repetitions."""
    target = rng.randint(1, max_components)
    comps, keys, used = [], set(), 0
    for _ in range(8 * target):
        if len(comps) == target:
            break
        kind = rng.choice(("linear", "circular"))
        d = rng.randint(1, max_d)
        if kind == "linear":
            size = rng.randint(1, max_size)
            word = tuple(rng.choice((F, VS)) for _ in range(size - 1))
            quiver = quiver_of_word(word)
        else:
            size = rng.randint(1, max_size)
            word = tuple(rng.choice((F, VS)) for _ in range(size))
            if not is_primitive(word):
                continue
            quiver = quiver_of_periodic(PeriodicWord(word), size)
        if used + size * d > max_dim:
            continue
        comp = Component(kind, word, d, _strict_rep(ctx, quiver, d, rng))
        if comp.key() in keys:
            continue
        keys.add(comp.key())
        comps.append(comp)
        used += size * d
    return Sample(ctx, tuple(comps))


def assemble(sample: Sample) -> Representation:
    """The disjoint union of the component representations."""
    quiver, vmaps = disjoint_union([c.rep.quiver for c in sample.components])
    dims, maps, off = {}, {}, 0
    for c, vm in zip(sample.components, vmaps):
        for v, d in c.rep.dims.items():
            dims[vm[v]] = d
        for i in range(len(c.rep.quiver.edges)):
            maps[off + i] = c.rep.maps[i]
        off += len(c.rep.quiver.edges)
    return Representation(quiver, dims, maps)


def round_trip(sample: Sample, report: ClassificationReport | None = None,
               config: SearchConfig | None = None) -> tuple[list[str], dict]:
    """Failures of classify(module_of(rep)) against the source, plus counters."""
    ctx = sample.ctx
    rep = assemble(sample)
    m = module_of(rep, ctx)
    report = report or classify(m)
    errors = []
    stats = {"exact": 0, "screened": 0, "undetermined": 0}
    want_lin = sorted(((c.word, c.d) for c in sample.components if c.kind == "linear"),
                      key=lambda e: (len(e[0]), [0 if a == F else 1 for a in e[0]]))
    if report.linear != want_lin:
        errors.append(f"linear part {report.linear} != {want_lin}")
    if graph_iso(report.quiver(), rep.quiver) is None:
        errors.append("recovered quiver is not isomorphic to the source")
    got = {c.pattern: c for c in report.circular}
    for comp in sample.components:
        if comp.kind != "circular":
            continue
        p, _, j = word_of(comp.rep.quiver)
        entry = got.get(p)
        if entry is None or entry.dim != comp.d:
            errors.append(f"circular {p} with dim {comp.d} not recovered")
            continue
        shape = classify_connected(comp.rep.quiver)
        phi = monodromy(comp.rep, ctx, shape.order[j], shape)
        t = phi.twist
        if ctx.sigma_identity(t):
            v = semilinear_conjugate(ctx, phi.mat(), entry.monodromy.mat(), t, config)
            if v.status != "yes":
                errors.append(f"monodromy at {p} not conjugate ({v.status}: {v.reason})")
            stats["exact"] += 1
            continue
        r = ctx.sigma_order
        from math import gcd
        r //= gcd(t % r, r)
        a = twisted_power(ctx, phi.mat(), t, r)
        b = twisted_power(ctx, entry.monodromy.mat(), t, r)
        if invariant_factors(ctx, a) != invariant_factors(ctx, b):
            errors.append(f"{r}-fold monodromy powers at {p} have different canonical forms")
        v = semilinear_conjugate(ctx, phi.mat(), entry.monodromy.mat(), t, config)
        if v.status == "no":
            errors.append(f"monodromy at {p} reported non-conjugate: {v.reason}")
        stats["screened"] += 1
        if v.status == "undetermined":
            stats["undetermined"] += 1
    return errors, stats


def corpus(count: int, seed: int, fields=(2, 4, 9), **kw) -> list[Sample]:
    rng = random.Random(seed)
    ctxs = [gf(q) for q in fields]
    return [random_sample(rng, ctxs[i % len(ctxs)], **kw) for i in range(count)]


def describe(sample: Sample) -> str:
    parts = []
    for c in sample.components:
        w = word_str(c.word)
        parts.append(f"{w}^{c.d}" if c.kind == "linear" else f"[{w}]^{c.d}")
    return " + ".join(parts)
