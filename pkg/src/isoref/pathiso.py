"""Path trees of arenas and path isomorphism.

A path is a play in which every move points to the move just before it, so
the paths of an arena form a forest: the roots are the initial moves and
the children of a path ending in ``m`` are the moves ``m`` enables.  The
subtree below a path depends only on its last move, which makes canonical
codes cheap to compute on arenas: one code per move, computed bottom-up.

Codes are hash-consed integers, so two forests have the same code exactly
when they are isomorphic as Q/A-labelled forests (children compared as
multisets).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

from .arena import DEFAULT_SIZE_LIMIT, Arena, SizeLimit, interpret_type, lift_T, move_label, trim
from .syntax.types import Type, show_type

Path = tuple  # a tuple of moves, from a root down


@dataclass(frozen=True, eq=False)
class PathNode:
    kind: str  # "Q" or "A"
    move: object
    children: tuple["PathNode", ...] = ()


@dataclass(frozen=True, eq=False)
class PathTree:
    """A rooted forest.  Roots are O-moves and polarity alternates with depth."""

    roots: tuple[PathNode, ...] = ()

    def nodes(self) -> Iterator[tuple[Path, PathNode]]:
        """Every node with its path, depth first, in child order."""
        stack = [((r.move,), r) for r in reversed(self.roots)]
        while stack:
            path, node = stack.pop()
            yield path, node
            for c in reversed(node.children):
                stack.append((path + (c.move,), c))

    def paths(self) -> list[Path]:
        return [p for p, _ in self.nodes()]

    def size(self) -> int:
        return _count(self.roots, {})

    def depth(self) -> int:
        memo: dict = {}

        def d(n: PathNode) -> int:
            if id(n) not in memo:
                memo[id(n)] = 1 + max((d(c) for c in n.children), default=0)
            return memo[id(n)]

        return max((d(r) for r in self.roots), default=0)

    def node_at(self, path: Path) -> PathNode:
        level = self.roots
        node = None
        for m in path:
            node = next((n for n in level if n.move == m), None)
            if node is None:
                raise KeyError(path)
            level = node.children
        if node is None:
            raise KeyError(path)
        return node

    @classmethod
    def from_nested(cls, forest) -> "PathTree":
        """Build from nested ``(kind, [children...])`` pairs; moves are numbered."""
        counter = iter(range(1 << 30))

        def build(item) -> PathNode:
            kind, kids = item
            return PathNode(kind, next(counter), tuple(build(k) for k in kids))

        return cls(tuple(build(r) for r in forest))

    def to_nested(self):
        def go(n: PathNode):
            return (n.kind, [go(c) for c in n.children])

        return [go(r) for r in self.roots]


def _count(nodes, memo) -> int:
    total = 0
    for n in nodes:
        if id(n) not in memo:
            memo[id(n)] = 1 + _count(n.children, memo)
        total += memo[id(n)]
    return total


def path_tree(a: Arena, limit: int = DEFAULT_SIZE_LIMIT) -> PathTree:
    """All paths of ``a``.  Subtrees below the same move are shared."""
    built: dict = {}
    sizes: dict = {}

    def node(m) -> PathNode:
        if m not in built:
            kids = tuple(node(n) for n in a.enables[m])
            sizes[m] = 1 + sum(sizes[n] for n in a.enables[m])
            if sizes[m] > limit:
                raise SizeLimit(f"path tree has more than {limit} nodes")
            built[m] = PathNode(a.kind(m), m, kids)
        return built[m]

    tree = PathTree(tuple(node(i) for i in a.initials))
    if sum(sizes[i] for i in a.initials) > limit:
        raise SizeLimit(f"path tree has more than {limit} nodes")
    return tree


# ------------------------------------------------------------ canonical codes

_lock = threading.Lock()
_table: dict[tuple, int] = {}
EMPTY_FOREST_CODE = 0
_table[("forest", ())] = EMPTY_FOREST_CODE


def _intern(key: tuple) -> int:
    with _lock:
        code = _table.get(key)
        if code is None:
            code = len(_table)
            _table[key] = code
        return code


def _node_code(n: PathNode, memo: dict) -> int:
    # iterative post-order, so deep trees do not hit the recursion limit
    stack = [(n, False)]
    while stack:
        node, ready = stack.pop()
        if id(node) in memo:
            continue
        if ready:
            kids = tuple(sorted(memo[id(c)] for c in node.children))
            memo[id(node)] = _intern((node.kind, kids))
        else:
            stack.append((node, True))
            stack.extend((c, False) for c in node.children if id(c) not in memo)
    return memo[id(n)]


def tree_canonical_code(t: PathTree) -> int:
    memo: dict = {}
    return _intern(("forest", tuple(sorted(_node_code(r, memo) for r in t.roots))))


def move_codes(a: Arena) -> dict:
    """Code of the subtree below each move of ``a``."""
    memo: dict = {}
    order: list = []
    seen: set = set()
    for root in a.moves:
        if root in seen:
            continue
        stack = [(root, False)]
        while stack:
            m, ready = stack.pop()
            if ready:
                order.append(m)
                continue
            if m in seen:
                continue
            seen.add(m)
            stack.append((m, True))
            stack.extend((n, False) for n in a.enables[m] if n not in seen)
    for m in order:
        memo[m] = _intern((a.kind(m), tuple(sorted(memo[n] for n in a.enables[m]))))
    return memo


def arena_code(a: Arena) -> int:
    """Equal to ``tree_canonical_code(path_tree(a))`` without building the tree."""
    codes = move_codes(a)
    return _intern(("forest", tuple(sorted(codes[i] for i in a.initials))))


# ------------------------------------------------------------ morphisms


class NotIsomorphic(Exception):
    pass


@dataclass(frozen=True, eq=False)
class PathMorphism:
    """A map from the paths of one forest to the paths of another."""

    mapping: dict = field(default_factory=dict)

    def __call__(self, path: Path) -> Path:
        return self.mapping[tuple(path)]

    def __eq__(self, other) -> bool:
        return isinstance(other, PathMorphism) and self.mapping == other.mapping

    def __hash__(self):
        return hash(frozenset(self.mapping.items()))

    def __len__(self) -> int:
        return len(self.mapping)

    def inverse(self) -> "PathMorphism":
        inv = {v: k for k, v in self.mapping.items()}
        if len(inv) != len(self.mapping):
            raise NotIsomorphic("path morphism is not injective")
        return PathMorphism(inv)

    def then(self, other: "PathMorphism") -> "PathMorphism":
        """``other`` after ``self``."""
        return PathMorphism({p: other.mapping[q] for p, q in self.mapping.items()})

    def is_identity(self) -> bool:
        return all(p == q for p, q in self.mapping.items())

    def check(self, source: PathTree, target: PathTree) -> list[str]:
        """Problems with this morphism as an isomorphism ``source -> target`` (empty if none)."""
        problems = []
        src = dict(source.nodes())
        tgt = dict(target.nodes())
        if set(self.mapping) != set(src):
            problems.append("not total on the source paths")
        if set(self.mapping.values()) != set(tgt) or len(set(self.mapping.values())) != len(self.mapping):
            problems.append("not a bijection onto the target paths")
        for p, q in self.mapping.items():
            if p not in src or q not in tgt:
                continue
            if len(p) != len(q):
                problems.append(f"{_show(p)} and its image have different lengths")
            elif len(p) > 1 and self.mapping.get(p[:-1]) != q[:-1]:
                problems.append(f"image of {_show(p)} does not extend the image of its prefix")
            if src[p].kind != tgt[q].kind:
                problems.append(f"{_show(p)} changes question/answer label")
        return problems

    def to_json(self) -> list:
        return [[[move_label(m) for m in p], [move_label(m) for m in q]] for p, q in sorted(
            self.mapping.items(), key=lambda kv: [move_label(m) for m in kv[0]])]

    def to_text(self) -> str:
        lines = []
        for p, q in sorted(self.mapping.items(), key=lambda kv: [move_label(m) for m in kv[0]]):
            lines.append(f"{_show(p)}  ->  {_show(q)}")
        return "\n".join(lines) if lines else "(empty morphism)"


def _show(p: Path) -> str:
    return " ".join(move_label(m) for m in p) or "ε"


def identity_morphism(t: PathTree) -> PathMorphism:
    return PathMorphism({p: p for p in t.paths()})


def _match(xs, ys, px: Path, py: Path, codes: dict, out: dict):
    key = lambda n: (codes[id(n)], move_label(n.move))  # noqa: E731
    xs, ys = sorted(xs, key=key), sorted(ys, key=key)
    if [codes[id(n)] for n in xs] != [codes[id(n)] for n in ys]:
        raise NotIsomorphic("children do not match")
    for x, y in zip(xs, ys):
        qx, qy = px + (x.move,), py + (y.move,)
        out[qx] = qy
        _match(x.children, y.children, qx, qy, codes, out)


def tree_isomorphism(s: PathTree, t: PathTree) -> PathMorphism:
    """An isomorphism of labelled forests, matching equal-code subtrees in serialized order."""
    memo: dict = {}
    for r in s.roots + t.roots:
        _node_code(r, memo)
    out: dict = {}
    _match(s.roots, t.roots, (), (), memo, out)
    return PathMorphism(out)


def path_isomorphism(a: Arena, b: Arena) -> PathMorphism:
    """A path isomorphism from ``a`` to ``b``; raises NotIsomorphic if there is none."""
    if arena_code(a) != arena_code(b):
        raise NotIsomorphic("path trees have different shapes")
    return tree_isomorphism(path_tree(a), path_tree(b))


# ------------------------------------------------------------ the decision


@dataclass(frozen=True)
class IsoVerdict:
    isomorphic: bool
    morphism: PathMorphism | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.isomorphic


@lru_cache(maxsize=4096)
def semantic_arena(a: Type, limit: int = DEFAULT_SIZE_LIMIT) -> Arena:
    """trim(T[[a]])."""
    return trim(lift_T(interpret_type(a, limit), limit))


@lru_cache(maxsize=4096)
def semantic_code(a: Type) -> int:
    return arena_code(semantic_arena(a))


def decide_iso_semantic(a: Type, b: Type, witness: bool = False) -> IsoVerdict:
    """Compare the path trees of trim(T[[a]]) and trim(T[[b]])."""
    if semantic_code(a) != semantic_code(b):
        return IsoVerdict(False, None, f"path trees of {show_type(a)} and {show_type(b)} differ")
    if not witness:
        return IsoVerdict(True)
    return IsoVerdict(True, path_isomorphism(semantic_arena(a), semantic_arena(b)))


__all__ = [
    "EMPTY_FOREST_CODE", "IsoVerdict", "NotIsomorphic", "PathMorphism", "PathNode", "PathTree",
    "arena_code", "decide_iso_semantic", "identity_morphism", "move_codes", "path_isomorphism",
    "path_tree", "semantic_arena", "tree_canonical_code", "tree_isomorphism",
]
