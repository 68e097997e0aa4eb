"""Random arenas, path isomorphisms and renamings for property tests."""

from __future__ import annotations

import random

from ..arena import A, O, P, Q, Arena, validate
from ..pathiso import PathMorphism, PathTree, _node_code, path_tree


def random_arena(rng: random.Random, depth: int = 4, width: int = 3, share: float = 0.3,
                 max_moves: int = 40) -> Arena:
    """A valid arena whose paths have at most ``depth`` moves.

    A move may be enabled by several moves of the previous level, so the
    enabling relation is a DAG and the path forest unfolds it.
    """
    label: dict = {}
    enables: dict = {}
    counter = iter(range(1 << 30))

    def fresh(lab):
        m = next(counter)
        label[m] = lab
        enables[m] = []
        return m

    level = [fresh((O, Q)) for _ in range(rng.randint(1, 2))]
    initials = list(level)
    for _ in range(depth - 1):
        nxt: list = []
        for m in level:
            player = P if label[m][0] == O else O
            for _ in range(rng.randint(0, width)):
                if len(label) >= max_moves:
                    break
                kind = Q if label[m][1] == A else rng.choice((Q, A))
                reuse = [n for n in nxt if label[n] == (player, kind) and n not in enables[m]]
                n = rng.choice(reuse) if reuse and rng.random() < share else fresh((player, kind))
                if n not in nxt:
                    nxt.append(n)
                enables[m].append(n)
        level = nxt
    arena = Arena(list(label), label, initials, enables)
    validate(arena)
    return arena


def unfold(a: Arena) -> Arena:
    """The arena whose moves are the paths of ``a``: the path forest as an arena."""
    label, enables, moves = {}, {}, []
    for p, node in path_tree(a).nodes():
        moves.append(p)
        label[p] = a.label[p[-1]]
        enables[p] = [p + (c.move,) for c in node.children]
    return Arena(moves, label, [(i,) for i in a.initials], enables)


def _random_match(xs, ys, px, py, codes, rng, out):
    groups: dict = {}
    for y in ys:
        groups.setdefault(codes[id(y)], []).append(y)
    for g in groups.values():
        rng.shuffle(g)
    for x in xs:
        y = groups[codes[id(x)]].pop()
        qx, qy = px + (x.move,), py + (y.move,)
        out[qx] = qy
        _random_match(x.children, y.children, qx, qy, codes, rng, out)


def random_tree_iso(rng: random.Random, s: PathTree, t: PathTree) -> PathMorphism:
    """A uniformly chosen matching of equal-code siblings, recursively; ``s`` and ``t`` must be isomorphic."""
    codes: dict = {}
    for r in s.roots + t.roots:
        _node_code(r, codes)
    out: dict = {}
    _random_match(s.roots, t.roots, (), (), codes, rng, out)
    return PathMorphism(out)


def random_renaming(rng: random.Random, a: Arena, tag: str = "r") -> dict:
    """A bijective renaming of the moves of ``a`` onto fresh names."""
    names = list(range(len(a.moves)))
    rng.shuffle(names)
    return {m: (tag, k) for m, k in zip(a.moves, names)}


def random_path_iso(rng: random.Random, a: Arena) -> tuple[Arena, PathMorphism]:
    """A target arena ``b`` and a random path isomorphism ``a -> b``.

    ``b`` is either a renamed copy of ``a`` or its unfolded path forest, so
    the morphism need not come from a map on moves.
    """
    if rng.random() < 0.5:
        b = a.rename(random_renaming(rng, a).__getitem__)
    else:
        b = unfold(a)
    return b, random_tree_iso(rng, path_tree(a), path_tree(b))


def rename_morphism(r: dict, t: PathTree) -> PathMorphism:
    """The path morphism induced by a renaming of moves."""
    return PathMorphism({p: tuple(r[m] for m in p) for p in t.paths()})


__all__ = [
    "random_arena", "random_path_iso", "random_renaming", "random_tree_iso", "rename_morphism", "unfold",
]
