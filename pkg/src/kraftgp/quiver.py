"""Kraft quivers, their converse graphs and the word dictionary.

Words are tuples of letters ``"F"`` / ``"V#"`` written most-significant
first: the word w_m ... w_1 is ``(w_m, ..., w_1)`` and w_1 acts first.
Quiver edges carry the labels ``"F"`` and ``"V"``; converse graphs use
``"F"`` and ``"V#"``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

__all__ = [
    "F",
    "V",
    "VS",
    "Edge",
    "LabeledGraph",
    "KraftQuiver",
    "KraftError",
    "Violation",
    "PeriodicWord",
    "Shape",
    "validate_kraft",
    "converse_graph",
    "from_converse",
    "opposite_graph",
    "connected_components",
    "classify_connected",
    "word_of",
    "quiver_of_word",
    "quiver_of_periodic",
    "has_repetitions",
    "reduce",
    "rotate",
    "minimal_period",
    "canonical_rotation",
    "is_primitive",
    "graph_iso",
    "disjoint_union",
    "parse_word",
    "word_str",
    "primitive_necklaces",
]

F = "F"
V = "V"
VS = "V#"

_ORDER = {F: 0, VS: 1}


def parse_word(s: str | Sequence[str]) -> tuple[str, ...]:
    """'V#FV#FF' or a list of letters -> tuple of letters."""
    if not isinstance(s, str):
        out = tuple(s)
        for a in out:
            if a not in (F, VS):
                raise ValueError(f"bad letter {a!r}")
        return out
    out, i = [], 0
    s = s.replace(" ", "")
    while i < len(s):
        if s.startswith("V#", i):
            out.append(VS)
            i += 2
        elif s[i] == "F":
            out.append(F)
            i += 1
        else:
            raise ValueError(f"bad letter at {i} in {s!r}")
    return tuple(out)


def word_str(w: Sequence[str]) -> str:
    return "".join(w) if w else "∅"


def _key(w: Sequence[str]) -> tuple[int, ...]:
    return tuple(_ORDER[a] for a in w)


@dataclass(frozen=True)
class Edge:
    tail: int
    head: int
    label: str


class LabeledGraph:
    """Finite directed multigraph with labelled edges; edges are addressed by index."""

    def __init__(self, vertices: Iterable[int], edges: Iterable[Edge | tuple]):
        self.vertices = tuple(vertices)
        self.edges = tuple(e if isinstance(e, Edge) else Edge(*e) for e in edges)
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise ValueError("duplicate vertex ids")
        for e in self.edges:
            if e.tail not in vs or e.head not in vs:
                raise ValueError(f"edge {e} uses an unknown vertex")

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, LabeledGraph) and set(self.vertices) == set(other.vertices)
                and sorted(self.edges, key=_ekey) == sorted(other.edges, key=_ekey))

    def __hash__(self) -> int:
        return hash((frozenset(self.vertices), tuple(sorted(self.edges, key=_ekey))))

    def __repr__(self) -> str:
        es = ", ".join(f"{e.tail}-{e.label}->{e.head}" for e in self.edges)
        return f"{type(self).__name__}(vertices={list(self.vertices)}, edges=[{es}])"

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices),
                "edges": [{"tail": e.tail, "head": e.head, "label": e.label} for e in self.edges]}

    @classmethod
    def from_json(cls, d: dict) -> "LabeledGraph":
        return cls(d["vertices"], [Edge(int(e["tail"]), int(e["head"]), str(e["label"])) for e in d["edges"]])

    def to_dot(self, name: str = "G") -> str:
        lines = [f"digraph {name} {{"]
        for v in self.vertices:
            lines.append(f"  {v};")
        for e in self.edges:
            lines.append(f'  {e.tail} -> {e.head} [label="{e.label}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _ekey(e: Edge) -> tuple:
    return (e.tail, e.head, e.label)


@dataclass(frozen=True)
class Violation:
    condition: int
    vertex: int | None
    edges: tuple
    message: str


def validate_kraft(g: LabeledGraph) -> list[Violation]:
    """Empty list when g is a Kraft quiver; otherwise one entry per violation."""
    out: list[Violation] = []
    for i, e in enumerate(g.edges):
        if e.label not in (F, V):
            out.append(Violation(0, None, (i,), f"edge {i} has label {e.label!r}, expected F or V"))
    if out:
        return out
    for v in g.vertices:
        inc = [i for i, e in enumerate(g.edges) if e.tail == v] + \
              [i for i, e in enumerate(g.edges) if e.head == v]
        if len(inc) > 2:
            out.append(Violation(1, v, tuple(sorted(inc)),
                                 f"vertex {v} is the tail or head of {len(inc)} arrows (at most 2 allowed)"))
    for (i, a), (j, b) in _pairs(g.edges):
        if a.label == b.label:
            if a.head == b.head:
                out.append(Violation(2, a.head, (i, j),
                                     f"{a.label}-arrows {i} and {j} share head {a.head}"))
            if a.tail == b.tail:
                out.append(Violation(2, a.tail, (i, j),
                                     f"{a.label}-arrows {i} and {j} share tail {a.tail}"))
    for i, a in enumerate(g.edges):
        if a.label != F:
            continue
        for j, b in enumerate(g.edges):
            if b.label != V:
                continue
            if a.head == b.tail:
                out.append(Violation(3, a.head, (i, j),
                                     f"head of F-arrow {i} is the tail of V-arrow {j}"))
            if a.tail == b.head:
                out.append(Violation(3, a.tail, (i, j),
                                     f"tail of F-arrow {i} is the head of V-arrow {j}"))
    return out


def _pairs(seq):
    items = list(enumerate(seq))
    for x in range(len(items)):
        for y in range(x + 1, len(items)):
            yield items[x], items[y]


class KraftError(ValueError):
    def __init__(self, violations: list[Violation]):
        super().__init__("; ".join(v.message for v in violations))
        self.violations = violations


class KraftQuiver(LabeledGraph):
    """A labelled graph checked against the three Kraft conditions."""

    def __init__(self, vertices: Iterable[int], edges: Iterable[Edge | tuple]):
        super().__init__(vertices, edges)
        bad = validate_kraft(self)
        if bad:
            raise KraftError(bad)

    @classmethod
    def of(cls, g: LabeledGraph) -> "KraftQuiver":
        return g if isinstance(g, KraftQuiver) else cls(g.vertices, g.edges)


def converse_graph(g: LabeledGraph) -> LabeledGraph:
    """Reverse V-arrows and relabel them V#; edge indices are preserved."""
    return LabeledGraph(g.vertices, [e if e.label == F else Edge(e.head, e.tail, VS) for e in g.edges])


def from_converse(g: LabeledGraph) -> LabeledGraph:
    return LabeledGraph(g.vertices, [e if e.label == F else Edge(e.head, e.tail, V) for e in g.edges])


def opposite_graph(g: LabeledGraph) -> LabeledGraph:
    out = LabeledGraph(g.vertices, [Edge(e.head, e.tail, e.label) for e in g.edges])
    if isinstance(g, KraftQuiver):
        return KraftQuiver.of(out)
    return out


def disjoint_union(graphs: Sequence[LabeledGraph]) -> tuple[KraftQuiver, list[dict[int, int]]]:
    """Relabel vertices consecutively; returns the union and per-graph vertex maps."""
    verts, edges, maps = [], [], []
    off = 0
    for g in graphs:
        vm = {v: off + i for i, v in enumerate(g.vertices)}
        verts += [vm[v] for v in g.vertices]
        edges += [Edge(vm[e.tail], vm[e.head], e.label) for e in g.edges]
        maps.append(vm)
        off += len(g.vertices)
    return KraftQuiver(verts, edges), maps


def connected_components(g: LabeledGraph) -> list[KraftQuiver]:
    parent = {v: v for v in g.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in g.edges:
        a, b = find(e.tail), find(e.head)
        if a != b:
            parent[max(a, b)] = min(a, b)
    groups: dict[int, list[int]] = {}
    for v in g.vertices:
        groups.setdefault(find(v), []).append(v)
    out = []
    for root in sorted(groups, key=lambda r: g.vertices.index(r)):
        vs = groups[root]
        s = set(vs)
        out.append(KraftQuiver(vs, [e for e in g.edges if e.tail in s]))
    return out


@dataclass(frozen=True)
class Shape:
    """Ordering v_1..v_n with converse edges E_i = (v_i, v_{i+1}).

    ``edges[i]`` is the index in the original quiver of the edge joining
    ``order[i]`` and ``order[i+1]`` (cyclically for circular shapes) and
    ``letters[i]`` its converse label.
    """

    kind: str
    order: tuple
    edges: tuple
    letters: tuple


def classify_connected(g: LabeledGraph) -> Shape:
    """Linear or circular ordering of a connected nonempty Kraft quiver."""
    if not g.vertices:
        raise ValueError("empty quiver")
    conv = converse_graph(g)
    out: dict[int, tuple[int, int, str]] = {}
    indeg: dict[int, int] = {v: 0 for v in g.vertices}
    for i, e in enumerate(conv.edges):
        assert e.tail not in out, f"vertex {e.tail} has two outgoing converse edges"
        out[e.tail] = (e.head, i, e.label)
        indeg[e.head] += 1
    assert all(d <= 1 for d in indeg.values()), "vertex with two incoming converse edges"
    n = len(g.vertices)
    if len(conv.edges) == n - 1:
        starts = [v for v in g.vertices if indeg[v] == 0]
        assert len(starts) == 1, "not a path"
        order, edges, letters = [starts[0]], [], []
        while order[-1] in out:
            nxt, i, lab = out[order[-1]]
            order.append(nxt)
            edges.append(i)
            letters.append(lab)
        assert len(order) == n, "quiver is not connected"
        return Shape("linear", tuple(order), tuple(edges), tuple(letters))
    assert len(conv.edges) == n, "connected Kraft quiver must be linear or circular"
    start = g.vertices[0]
    order, edges, letters = [start], [], []
    cur = start
    while True:
        nxt, i, lab = out[cur]
        edges.append(i)
        letters.append(lab)
        if nxt == start:
            break
        order.append(nxt)
        cur = nxt
    assert len(order) == n, "quiver is not connected"
    return Shape("circular", tuple(order), tuple(edges), tuple(letters))


# ---- periodic words -----------------------------------------------------------------

def minimal_period(s: Sequence) -> int:
    """Smallest t dividing len(s) with s a power of a length-t block (border method)."""
    n = len(s)
    if n == 0:
        return 0
    fail = [0] * n
    k = 0
    for i in range(1, n):
        while k and s[i] != s[k]:
            k = fail[k - 1]
        if s[i] == s[k]:
            k += 1
        fail[i] = k
    t = n - fail[-1]
    return t if n % t == 0 else n


def is_primitive(w: Sequence) -> bool:
    return len(w) > 0 and minimal_period(w) == len(w)


def rotate(p: Sequence[str], j: int) -> tuple[str, ...]:
    """w(j) = w_j ... w_1 w_t ... w_{j+1} for w = w_t ... w_1."""
    t = len(p)
    j %= t
    return tuple(p[t - j:]) + tuple(p[:t - j])


def canonical_rotation(p: Sequence[str]) -> tuple[tuple[str, ...], int]:
    """Least rotation under F < V# and the j with w(j) equal to it."""
    t = len(p)
    best_j = min(range(t), key=lambda j: _key(rotate(p, j)))
    return rotate(p, best_j), best_j


@dataclass(frozen=True)
class PeriodicWord:
    """[w] for a primitive pattern w (display order)."""

    pattern: tuple

    def __post_init__(self):
        object.__setattr__(self, "pattern", parse_word(self.pattern))
        if not is_primitive(self.pattern):
            raise ValueError(f"pattern {word_str(self.pattern)} is not primitive")

    def __len__(self) -> int:
        return len(self.pattern)

    def rotate(self, j: int) -> "PeriodicWord":
        return PeriodicWord(rotate(self.pattern, j))

    def canonical(self) -> "PeriodicWord":
        return PeriodicWord(canonical_rotation(self.pattern)[0])

    def same_class(self, other: "PeriodicWord") -> bool:
        return self.canonical() == other.canonical()

    def letter(self, i: int) -> str:
        """w_i with indices taken mod t (1-based, w_1 rightmost)."""
        t = len(self.pattern)
        return self.pattern[t - 1 - ((i - 1) % t)]

    def __str__(self) -> str:
        return f"[{word_str(self.pattern)}]"


def primitive_necklaces(max_len: int) -> list[tuple[str, ...]]:
    """Canonical rotations of all primitive words of length 1..max_len."""
    out = []
    for n in range(1, max_len + 1):
        for w in product((F, VS), repeat=n):
            if is_primitive(w) and canonical_rotation(w)[0] == w:
                out.append(w)
    return out


# ---- word <-> quiver ------------------------------------------------------------------

def word_of(g: LabeledGraph):
    """Linear: the word w with g ~ Gamma(w).  Circular: (PeriodicWord, m, j0).

    For circular quivers j0 is the position in ``classify_connected(g).order``
    of a vertex attached to the canonical rotation.
    """
    shape = classify_connected(g)
    if shape.kind == "linear":
        return tuple(reversed(shape.letters))
    disp = tuple(reversed(shape.letters))  # w_m ... w_1 starting at order[0]
    m = len(disp)
    t = minimal_period(disp)
    base = disp[m - t:]  # w_t ... w_1
    canon, j = canonical_rotation(base)
    return PeriodicWord(canon), m, j


def quiver_of_word(w: Sequence[str]) -> KraftQuiver:
    w = parse_word(w)
    m = len(w)
    edges = []
    for i in range(1, m + 1):
        a = w[m - i]
        edges.append(Edge(i - 1, i, F) if a == F else Edge(i, i - 1, V))
    return KraftQuiver(range(m + 1), edges)


def quiver_of_periodic(p: PeriodicWord | Sequence[str], m: int) -> KraftQuiver:
    p = p if isinstance(p, PeriodicWord) else PeriodicWord(parse_word(p))
    t = len(p)
    if m <= 0 or m % t:
        raise ValueError(f"m = {m} is not a positive multiple of the period {t}")
    edges = []
    for i in range(1, m + 1):
        a, b = i - 1, i % m
        edges.append(Edge(a, b, F) if p.letter(i) == F else Edge(b, a, V))
    return KraftQuiver(range(m), edges)


def has_repetitions(g: LabeledGraph) -> bool:
    shape = classify_connected(g)
    if shape.kind != "circular":
        raise ValueError("repetitions are defined for circular quivers")
    return minimal_period(shape.letters) < len(shape.letters)


def reduce(g: LabeledGraph) -> KraftQuiver:
    """The primitive-period quiver Gamma([w], l(w)); identity without repetitions."""
    if not has_repetitions(g):
        return KraftQuiver.of(g)
    p, _, _ = word_of(g)
    return quiver_of_periodic(p, len(p))


def graph_iso(g1: LabeledGraph, g2: LabeledGraph) -> dict[int, int] | None:
    """A label-preserving vertex bijection g1 -> g2, or None."""
    c1, c2 = connected_components(g1), connected_components(g2)
    if len(c1) != len(c2) or len(g1.edges) != len(g2.edges):
        return None
    used = [False] * len(c2)
    out: dict[int, int] = {}
    for a in c1:
        for k, b in enumerate(c2):
            if used[k]:
                continue
            iso = _connected_iso(a, b)
            if iso is not None:
                used[k] = True
                out.update(iso)
                break
        else:
            return None
    return out


def _connected_iso(a: LabeledGraph, b: LabeledGraph) -> dict[int, int] | None:
    if len(a.vertices) != len(b.vertices):
        return None
    sa, sb = classify_connected(a), classify_connected(b)
    if sa.kind != sb.kind:
        return None
    n = len(sa.order)
    if sa.kind == "linear":
        return dict(zip(sa.order, sb.order)) if sa.letters == sb.letters else None
    for s in range(n):
        if all(sa.letters[i] == sb.letters[(i + s) % n] for i in range(n)):
            return {sa.order[i]: sb.order[(i + s) % n] for i in range(n)}
    return None
