"""Command line: classify, generate, isomorphic, random, selftest.

Exit codes: 0 ok (or "yes"), 1 "no", 2 unreadable input, 3 mathematically
invalid input (F V != 0, Kraft violations, field mismatch), 4 internal
failure, 5 undetermined.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Any

from .classify import ClassificationError, classify, modules_isomorphic
from .field import FieldCtx, FieldError, gf, rationals
from .quiver import (
    KraftError,
    LabeledGraph,
    PeriodicWord,
    parse_word,
    quiver_of_periodic,
    quiver_of_word,
    validate_kraft,
)
from .repn import GPError, GPModule, Representation, SearchConfig, module_of, trivial_rep
from .sample import assemble, random_sample

EXIT_OK, EXIT_NO, EXIT_PARSE, EXIT_INVALID, EXIT_INTERNAL, EXIT_UNDETERMINED = 0, 1, 2, 3, 4, 5


class InputError(ValueError):
    """Malformed input file."""


def _flat(obj: Any) -> bool:
    """Lists of scalars, and lists of such lists, stay on one line."""
    if isinstance(obj, list):
        return all(not isinstance(x, (list, dict)) or (isinstance(x, list) and _flat(x)) for x in obj)
    return not isinstance(obj, dict)


def _dumps(obj: Any, indent: int = 0) -> str:
    pad = "  " * (indent + 1)
    if isinstance(obj, dict) and obj:
        items = [f"{pad}{json.dumps(k)}: {_dumps(v, indent + 1).rstrip()}" for k, v in obj.items()]
        text = "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    elif isinstance(obj, list) and obj and not _flat(obj):
        items = [pad + _dumps(v, indent + 1).rstrip() for v in obj]
        text = "[\n" + ",\n".join(items) + "\n" + "  " * indent + "]"
    else:
        text = json.dumps(obj, ensure_ascii=False)
    return text + ("\n" if indent == 0 else "")


def _read_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def parse_field(s: str) -> FieldCtx:
    """'Q', 'F4', '9', or a JSON descriptor."""
    s = s.strip()
    if s.upper() == "Q":
        return rationals()
    if s.startswith("{"):
        return FieldCtx.from_descriptor(json.loads(s))
    try:
        return gf(int(s.lstrip("Ff")))
    except ValueError as exc:
        raise FieldError(f"cannot parse field {s!r}") from exc


# ---- file formats ------------------------------------------------------------------------

def module_to_json(m: GPModule) -> dict:
    ctx = m.ctx
    out = {"field": ctx.descriptor(), "dim": m.dim,
           "F": [[ctx.encode(a) for a in r] for r in m.F],
           "V": [[ctx.encode(a) for a in r] for r in m.V]}
    if m.blocks:
        out["blocks"] = {str(v): list(b) for v, b in m.blocks.items()}
    return out


def module_from_json(d: Any) -> GPModule:
    try:
        ctx = FieldCtx.from_descriptor(d["field"])
        n = int(d["dim"])
        f = [[ctx.decode(a) for a in r] for r in d["F"]]
        v = [[ctx.decode(a) for a in r] for r in d["V"]]
        return GPModule(ctx, n, f, v)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad module file: {exc}") from exc


def rep_from_spec(d: Any) -> tuple[Representation, FieldCtx]:
    """Quiver spec: field plus quiver / word / periodic, and "trivial" or dims and maps."""
    try:
        ctx = FieldCtx.from_descriptor(d.get("field", {"kind": "Fq", "p": 2}))
        if "word" in d:
            g: LabeledGraph = quiver_of_word(parse_word(d["word"]))
        elif "periodic" in d:
            p = PeriodicWord(parse_word(d["periodic"]))
            g = quiver_of_periodic(p, int(d.get("m", len(p))))
        else:
            g = LabeledGraph.from_json(d["quiver"])
    except (KeyError, TypeError, AttributeError) as exc:
        raise InputError(f"bad quiver spec: {exc}") from exc
    except ValueError as exc:
        if isinstance(exc, FieldError):
            raise
        raise InputError(f"bad quiver spec: {exc}") from exc
    bad = validate_kraft(g)
    if bad:
        raise KraftError(bad)
    rep = d.get("rep", "trivial")
    if rep == "trivial":
        return trivial_rep(g), ctx
    try:
        return Representation.from_json({"quiver": g.to_json(), **rep}, ctx), ctx
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad representation: {exc}") from exc


# ---- commands ---------------------------------------------------------------------------

def cmd_classify(args) -> int:
    m = module_from_json(_read_json(args.input))
    report = classify(m, method=args.method)
    _write(args.out, _dumps(report.to_json()))
    if args.emit_dot:
        _write(args.emit_dot, report.quiver().to_dot("recovered"))
    return EXIT_OK


def cmd_generate(args) -> int:
    rep, ctx = rep_from_spec(_read_json(args.input))
    _write(args.out, _dumps(module_to_json(module_of(rep, ctx))))
    return EXIT_OK


def cmd_isomorphic(args) -> int:
    m1 = module_from_json(_read_json(args.a))
    m2 = module_from_json(_read_json(args.b))
    if m1.ctx != m2.ctx:
        print("field mismatch", file=sys.stderr)
        return EXIT_INVALID
    v = modules_isomorphic(m1, m2, SearchConfig(seed=args.seed))
    print(v.status)
    if v.reason:
        print(v.reason, file=sys.stderr)
    return {"yes": EXIT_OK, "no": EXIT_NO}.get(v.status, EXIT_UNDETERMINED)


def cmd_random(args) -> int:
    ctx = parse_field(args.field)
    rng = random.Random(args.seed)
    lines = []
    for _ in range(args.count):
        s = random_sample(rng, ctx, max_dim=args.max_dim)
        rep = assemble(s)
        d = rep.to_json(ctx)
        lines.append(json.dumps({"field": ctx.descriptor(), "quiver": d["quiver"],
                                 "rep": {"dims": d["dims"], "maps": d["maps"]}}, ensure_ascii=False))
    _write(args.out, "".join(line + "\n" for line in lines))
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .selfcheck import run
    results = run(args.level, seed=args.seed)
    width = max(len(name) for name, _, _ in results)
    for name, ok, detail in results:
        print(f"{name:<{width}}  {'PASS' if ok else 'FAIL'}  {detail}")
    return EXIT_OK if all(ok for _, ok, _ in results) else EXIT_INTERNAL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kraftgp", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="classify a module file")
    c.add_argument("--in", dest="input", required=True)
    c.add_argument("--out", default=None)
    c.add_argument("--emit-dot", default=None)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--method", choices=("auto", "fast", "necklace"), default="auto")
    c.set_defaults(func=cmd_classify)

    g = sub.add_parser("generate", help="build the module of a quiver spec")
    g.add_argument("--in", dest="input", required=True)
    g.add_argument("--out", default=None)
    g.set_defaults(func=cmd_generate)

    i = sub.add_parser("isomorphic", help="decide whether two modules are isomorphic")
    i.add_argument("--a", required=True)
    i.add_argument("--b", required=True)
    i.add_argument("--seed", type=int, default=0)
    i.set_defaults(func=cmd_isomorphic)

    r = sub.add_parser("random", help="emit random quiver specs with strict reps (JSON lines)")
    r.add_argument("--field", default="F2")
    r.add_argument("--max-dim", type=int, default=16)
    r.add_argument("--count", type=int, default=10)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--out", default=None)
    r.set_defaults(func=cmd_random)

    s = sub.add_parser("selftest", help="run the built-in invariant checks")
    s.add_argument("--level", choices=("fast", "full"), default="fast")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (InputError, FieldError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except GPError as exc:
        print(f"not a Gelfand-Ponomarev module: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except KraftError as exc:
        for v in exc.violations:
            print(f"Kraft condition ({v.condition}) violated: {v.message}", file=sys.stderr)
        return EXIT_INVALID
    except (ClassificationError, AssertionError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
