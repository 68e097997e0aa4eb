"""Command-line front end: ``isoref iso | canon | coerce | eval | search | arena | extract``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .arena import InvalidArena, NatUnsupported, SizeLimit, from_json, lifted_interpretation, move_label, to_dot, \
    to_json, to_text, trim
from .evaluation import Converged, Diverged, evaluate
from .games import copycat_along, extract_path_iso, involution_example
from .pathiso import NotIsomorphic, PathMorphism, decide_iso_semantic, path_isomorphism, path_tree, \
    semantic_arena
from .syntax import IllTyped, ParseError, parse_term, parse_type, show_term, show_type, typecheck
from .syntax.types import Arrow, GVar, Nat, Prod, Sum, Type, Var
from .syntax.typing import EMPTY
from .theory import canonical_form, decide_iso_syntactic, show_trace, synthesize_coercion

EXIT_YES, EXIT_NO, EXIT_ERROR = 0, 1, 2


class CliError(Exception):
    pass


def _has_nat(a: Type) -> bool:
    if isinstance(a, Nat):
        return True
    if isinstance(a, (Sum, Prod)):
        return _has_nat(a.left) or _has_nat(a.right)
    if isinstance(a, Arrow):
        return _has_nat(a.dom) or _has_nat(a.cod)
    if isinstance(a, (Var, GVar)):
        return _has_nat(a.content)
    return False


def _finitary(text: str) -> Type:
    a = parse_type(text, nat_enabled=True)
    if _has_nat(a):
        raise CliError(
            f"{show_type(a)} mentions nat; the decision procedures only cover finitary types "
            "(with nat there are further non-trivial isomorphisms, so neither decider applies)")
    return a


def _decide(a: Type, b: Type, method: str) -> bool:
    if method == "semantic":
        return bool(decide_iso_semantic(a, b))
    if method == "syntactic":
        return decide_iso_syntactic(a, b)
    sem, syn = bool(decide_iso_semantic(a, b)), decide_iso_syntactic(a, b)
    if sem != syn:
        raise CliError(f"deciders disagree: semantic says {sem}, syntactic says {syn}")
    return sem


# ------------------------------------------------------------------ subcommands


def cmd_iso(args, out) -> int:
    a, b = _finitary(args.type1), _finitary(args.type2)
    verdict = _decide(a, b, args.method)
    print("ISOMORPHIC" if verdict else "NOT-ISOMORPHIC", file=out)
    if verdict and args.witness:
        print(synthesize_coercion(a, b).show(), file=out)
    return EXIT_YES if verdict else EXIT_NO


def cmd_canon(args, out) -> int:
    a = parse_type(args.type)
    c, steps = canonical_form(a)
    print(c, file=out)
    if args.trace:
        print(show_trace(steps), file=out)
    return EXIT_YES


def cmd_coerce(args, out) -> int:
    a, b = _finitary(args.type1), _finitary(args.type2)
    if not decide_iso_syntactic(a, b):
        print("NOT-ISOMORPHIC", file=out)
        return EXIT_NO
    print(synthesize_coercion(a, b).show(), file=out)
    return EXIT_YES


def cmd_eval(args, out) -> int:
    if args.expr is not None:
        source = args.expr
    elif args.file == "-":
        source = sys.stdin.read()
    elif args.file is not None:
        source = Path(args.file).read_text(encoding="utf-8")
    else:
        raise CliError("eval needs FILE or -e EXPR")
    m = parse_term(source, nat_enabled=args.nat)
    a = typecheck(EMPTY, m)
    r = evaluate(m, fuel=args.fuel)
    if isinstance(r, Converged):
        print(f"{show_term(r.value)} : {show_type(a)}", file=out)
        return EXIT_YES
    if isinstance(r, Diverged):
        print("DIVERGED", file=out)
        return EXIT_NO
    raise CliError(f"evaluation stuck: {r.reason}")


@dataclass(frozen=True)
class SigEntry:
    name: str
    type: Type
    line: int


def read_signature(text: str, nat: bool = False) -> list[SigEntry]:
    """Parse ``name : TYPE`` lines; ``#`` starts a comment, blank lines are skipped."""
    entries: list[SigEntry] = []
    seen: set[str] = set()
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, sep, ty = line.partition(":")
        name = name.strip()
        if not sep or not name.isidentifier():
            raise CliError(f"line {n}: expected 'name : TYPE'")
        if name in seen:
            raise CliError(f"line {n}: duplicate entry {name}")
        seen.add(name)
        try:
            entries.append(SigEntry(name, parse_type(ty.strip(), nat_enabled=nat), n))
        except ParseError as e:
            raise CliError(f"line {n}: {e}") from None
    return entries


def cmd_search(args, out) -> int:
    entries = read_signature(Path(args.sig).read_text(encoding="utf-8"), nat=args.nat)
    query = _finitary(args.type)
    key = canonical_form(query)[0]
    found = 0
    for e in entries:
        if _has_nat(e.type):
            continue  # never isomorphic-comparable
        if canonical_form(e.type)[0] == key:
            print(e.name, file=out)
            found += 1
    return EXIT_YES if found else EXIT_NO


def _tree_json(a, tree) -> list:
    def go(node):
        return {"move": move_label(node.move), "player": a.player(node.move), "kind": node.kind,
                "children": [go(c) for c in node.children]}

    return [go(r) for r in tree.roots]


def _tree_text(a, tree) -> str:
    lines = []
    for p, node in tree.nodes():
        lines.append(f"{'  ' * (len(p) - 1)}{move_label(node.move)} [{a.player(node.move)}{node.kind}]")
    return "\n".join(lines) if lines else "(empty forest)"


def _tree_dot(a, tree) -> str:
    lines = ["digraph paths {", "  rankdir=TB;"]
    ids = {}
    for p, node in tree.nodes():
        ids[p] = f"n{len(ids)}"
        shape = "box" if node.kind == "Q" else "ellipse"
        lines.append(f'  {ids[p]} [label="{move_label(node.move)}\\n{a.player(node.move)}{node.kind}", shape={shape}];')
        if len(p) > 1:
            lines.append(f"  {ids[p[:-1]]} -> {ids[p]};")
    lines.append("}")
    return "\n".join(lines)


def cmd_arena(args, out) -> int:
    a = lifted_interpretation(parse_type(args.type))
    if args.trim:
        a = trim(a)
    if args.paths:
        tree = path_tree(a)
        if args.format == "json":
            print(json.dumps({"roots": _tree_json(a, tree)}, indent=2), file=out)
        elif args.format == "dot":
            print(_tree_dot(a, tree), file=out)
        else:
            print(_tree_text(a, tree), file=out)
    elif args.format == "json":
        print(json.dumps(to_json(a), indent=2), file=out)
    elif args.format == "dot":
        print(to_dot(a), file=out)
    else:
        print(to_text(a), file=out)
    return EXIT_YES


def _load_arena(desc):
    if isinstance(desc, str):
        return from_json(to_json(semantic_arena(_finitary(desc))))
    return from_json(desc)


def load_phi(data: dict):
    """Source arena, target arena and path morphism described by a PHI_FILE."""
    src, dst = _load_arena(data["source"]), _load_arena(data["target"])
    if "morphism" in data:
        phi = PathMorphism({tuple(p): tuple(q) for p, q in data["morphism"]})
    else:
        phi = path_isomorphism(src, dst)
    problems = phi.check(path_tree(src), path_tree(dst))
    if problems:
        raise CliError("not a path isomorphism: " + "; ".join(problems))
    return src, dst, phi


def cmd_extract(args, out) -> int:
    if args.example == "involution":
        arena, i = involution_example()
        result = extract_path_iso(i, i)
        print(result.to_text(), file=out)
        return EXIT_YES
    data = json.loads(Path(args.along).read_text(encoding="utf-8"))
    src, dst, phi = load_phi(data)
    sigma, tau = copycat_along(phi, phi.inverse(), src, dst)
    result = extract_path_iso(sigma, tau)
    print(result.to_text(), file=out)
    same = result == phi
    print("round trip: " + ("equal" if same else "DIFFERENT"), file=out)
    return EXIT_YES if same else EXIT_NO


# ------------------------------------------------------------------ entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="isoref", description="Type isomorphisms with sums and references.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("iso", help="decide whether two types are isomorphic")
    p.add_argument("type1")
    p.add_argument("type2")
    p.add_argument("--method", choices=("semantic", "syntactic", "both"), default="both")
    p.add_argument("--witness", action="store_true", help="print the coercion pair")
    p.set_defaults(run=cmd_iso)

    p = sub.add_parser("canon", help="print the canonical form of a type")
    p.add_argument("type")
    p.add_argument("--trace", action="store_true")
    p.set_defaults(run=cmd_canon)

    p = sub.add_parser("coerce", help="print mutually inverse coercions")
    p.add_argument("type1")
    p.add_argument("type2")
    p.set_defaults(run=cmd_coerce)

    p = sub.add_parser("eval", help="evaluate a closed program")
    p.add_argument("file", nargs="?")
    p.add_argument("-e", dest="expr")
    p.add_argument("--fuel", type=int, default=100_000)
    p.add_argument("--nat", action="store_true")
    p.set_defaults(run=cmd_eval)

    p = sub.add_parser("search", help="find signature entries whose type is isomorphic to TYPE")
    p.add_argument("--sig", required=True)
    p.add_argument("--nat", action="store_true", help="allow nat in the signature file")
    p.add_argument("type")
    p.set_defaults(run=cmd_search)

    p = sub.add_parser("arena", help="dump the lifted arena of a type")
    p.add_argument("type")
    p.add_argument("--trim", action="store_true")
    p.add_argument("--paths", action="store_true", help="dump the path forest instead")
    p.add_argument("--format", choices=("json", "dot", "text"), default="text")
    p.set_defaults(run=cmd_arena)

    p = sub.add_parser("extract", help="extract a path isomorphism from a game isomorphism")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--example", choices=("involution",))
    g.add_argument("--along", metavar="PHI_FILE")
    p.set_defaults(run=cmd_extract)
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code else EXIT_YES
    try:
        return args.run(args, out)
    except (CliError, ParseError, IllTyped, NatUnsupported, SizeLimit, InvalidArena, NotIsomorphic,
            OSError, KeyError, ValueError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
