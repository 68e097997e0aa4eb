"""Extracting a path isomorphism from a game isomorphism.

The construction works on the sequential morphism ``phi`` of the
isomorphism.  For a thread ``s`` let ``E_s`` be its one-move extensions
(a move plus a pointer into ``s``) and ``f_s : E_s -> F_s`` the bijection
induced by ``phi``.  Extensions of ``sa`` split as ``E_s + J_a``: those
pointing into ``s`` and those pointing to ``a``.  Slicing ``f_sa`` by
``f_s`` gives a bijection ``J_a -> J_b``, and composing the labels met
along each slicing path gives the deeper levels.

Extensions are all justified extensions: pointers are not restricted by
well-bracketing, so the decomposition ``E_sa = E_s + J_a`` holds exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable

from ..arena import Arena, Move, move_label
from ..pathiso import PathMorphism, path_tree
from .sequential import InverseViolation, SequentialMorphism, sequential_morphism
from .strategies import StrategyOracle


class NotBijective(ValueError):
    pass


class InconsistentPartition(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Bijection:
    """A finite bijection ``domain -> codomain``, verified on construction."""

    mapping: dict
    domain: frozenset = None
    codomain: frozenset = None
    paths: dict = field(default_factory=dict)  # slicing paths, when produced by slice_bijection

    def __post_init__(self):
        dom = frozenset(self.mapping) if self.domain is None else frozenset(self.domain)
        cod = frozenset(self.mapping.values()) if self.codomain is None else frozenset(self.codomain)
        object.__setattr__(self, "domain", dom)
        object.__setattr__(self, "codomain", cod)
        if set(self.mapping) != dom:
            raise NotBijective("not total on its domain")
        values = list(self.mapping.values())
        if len(set(values)) != len(values):
            raise NotBijective("not injective")
        if set(values) != cod:
            raise NotBijective("not onto its codomain")

    def __call__(self, x: Hashable):
        return self.mapping[x]

    def __len__(self) -> int:
        return len(self.mapping)

    def __eq__(self, other) -> bool:
        return isinstance(other, Bijection) and self.mapping == other.mapping

    def __hash__(self):
        return hash(frozenset(self.mapping.items()))

    def inverse(self) -> "Bijection":
        return Bijection({v: k for k, v in self.mapping.items()}, self.codomain, self.domain)

    def then(self, other: "Bijection") -> "Bijection":
        return Bijection({x: other.mapping[y] for x, y in self.mapping.items()}, self.domain, other.codomain)

    def restrict(self, keep: Iterable) -> "Bijection":
        keep = set(keep)
        sub = {x: y for x, y in self.mapping.items() if x in keep}
        return Bijection(sub)


def slice_bijection(f: Bijection, g: Bijection) -> Bijection:
    """``f \\ g : E2 -> F2`` for ``f : E1 + E2 -> F1 + F2`` and ``g : E1 -> F1``.

    From ``x`` in ``E2``, follow ``f`` and ``g^-1`` alternately until the
    walk leaves ``F1``.  The walk for each ``x`` is kept in ``paths``.
    """
    if not g.domain <= f.domain or not g.codomain <= f.codomain:
        raise InconsistentPartition("g must be a bijection between parts of f's domain and codomain")
    rest_e = f.domain - g.domain
    rest_f = f.codomain - g.codomain
    g_inv = g.inverse().mapping
    out, paths = {}, {}
    for x in rest_e:
        walk = [x]
        y = f.mapping[x]
        walk.append(y)
        while y not in rest_f:
            if len(walk) > 2 * len(f) + 2:
                raise NotBijective("slicing walk does not terminate")
            x2 = g_inv[y]
            y = f.mapping[x2]
            walk.extend((x2, y))
        out[x] = y
        paths[x] = tuple(walk)
    return Bijection(out, rest_e, rest_f, paths)


@dataclass(frozen=True)
class KIso:
    """A k-isomorphism from move ``source`` to move ``target``."""

    depth: int
    source: Move
    target: Move
    bijection: tuple = ()  # sorted pairs (m, n) between the enabled sets
    children: tuple = ()  # pairs (m, KIso from m to its image), in the same order

    @property
    def mapping(self) -> dict:
        return dict(self.bijection)

    def child(self, m: Move) -> "KIso":
        return dict(self.children)[m]

    def inverse(self) -> "KIso":
        if self.depth == 0:
            return KIso(0, self.target, self.source)
        pairs = _sorted((n, m) for m, n in self.bijection)
        kids = _sorted((self.mapping[m], h.inverse()) for m, h in self.children)
        return KIso(self.depth, self.target, self.source, pairs, kids)

    def then(self, other: "KIso") -> "KIso":
        """``other`` after ``self``."""
        if self.target != other.source:
            raise ValueError("k-isomorphisms do not compose: target and source differ")
        depth = min(self.depth, other.depth)
        if depth == 0:
            return KIso(0, self.source, other.target)
        om = other.mapping
        pairs = _sorted((m, om[n]) for m, n in self.bijection)
        okids = dict(other.children)
        mine = self.mapping
        kids = _sorted((m, h.then(okids[mine[m]])) for m, h in self.children)
        return KIso(depth, self.source, other.target, pairs, kids)

    def truncate(self, k: int) -> "KIso":
        if k >= self.depth:
            return self
        if k == 0:
            return KIso(0, self.source, self.target)
        return KIso(k, self.source, self.target, self.bijection,
                    tuple((m, h.truncate(k - 1)) for m, h in self.children))

    def is_prefix_of(self, other: "KIso") -> bool:
        return self.depth <= other.depth and other.truncate(self.depth) == self

    def is_identity(self) -> bool:
        return self.source == self.target and all(m == n for m, n in self.bijection) and all(
            h.is_identity() for _, h in self.children)

    def show(self, indent: int = 0) -> str:
        pad = "  " * indent
        lines = [f"{pad}{move_label(self.source)} ~{self.depth} {move_label(self.target)}"]
        for m, h in self.children:
            lines.append(h.show(indent + 1))
        return "\n".join(lines)


def _sorted(pairs) -> tuple:
    return tuple(sorted(pairs, key=lambda p: repr(p[0])))


def extensions(arena: Arena, s: tuple) -> list[tuple]:
    """One-move justified extensions ``(m, j)`` of a non-empty thread ``s``."""
    return [(m, j) for j, (mj, _) in enumerate(s) for m in arena.enables[mj]]


class _Extractor:
    def __init__(self, phi: SequentialMorphism):
        self.phi = phi
        self.a = phi.source
        self.b = phi.target
        self.memo: dict = {}
        self.graphs: dict = {}

    def induced(self, s: tuple) -> Bijection:
        """``f_s : E_s -> F_s``."""
        source = extensions(self.a, s)
        image = {x: self.phi(s + (x,))[-1] for x in source}
        target = extensions(self.b, self.phi(s))
        try:
            return Bijection(image, frozenset(source), frozenset(target))
        except NotBijective as e:
            raise NotBijective(f"phi does not induce a bijection on the extensions of a thread: {e}") from None

    def graph(self, sa: tuple) -> Bijection:
        """``g_{s,sa} : J_a -> J_b`` with its slicing paths."""
        if sa not in self.graphs:
            s = sa[:-1]
            f_sa = self.induced(sa)
            f_s = self.induced(s) if s else Bijection({})
            self.graphs[sa] = slice_bijection(f_sa, f_s)
        return self.graphs[sa]

    def kiso(self, sa: tuple, k: int) -> KIso:
        key = (sa, k)
        if key in self.memo:
            return self.memo[key]
        a = sa[-1][0]
        b = self.phi(sa)[-1][0]
        if k == 0:
            result = KIso(0, a, b)
        else:
            s = sa[:-1]
            g = self.graph(sa)
            pairs, kids = [], []
            for x, y_last in g.mapping.items():
                walk = g.paths[x]
                label = self.kiso(sa + (x,), k - 1)
                for i in range(2, len(walk), 2):
                    back = walk[i]  # f_s^-1 of the previous vertex, an extension of s
                    label = label.then(self.kiso(s + (back,), k - 1).inverse())
                    label = label.then(self.kiso(sa + (back,), k - 1))
                pairs.append((x[0], y_last[0]))
                kids.append((x[0], label))
            result = KIso(k, a, b, _sorted(pairs), _sorted(kids))
        self.memo[key] = result
        return result


def k_isomorphism(phi: SequentialMorphism, s: tuple, sa: tuple, k: int) -> KIso:
    """The k-isomorphism ``h^k_{s,sa}`` from the last move of ``sa`` to the last move of ``phi(sa)``."""
    if tuple(sa[:-1]) != tuple(s) or len(sa) != len(s) + 1:
        raise ValueError("sa must extend s by one move")
    return _Extractor(phi).kiso(tuple(sa), k)


def _depth(a: Arena) -> int:
    return path_tree(a).depth()


def extract_path_iso(sigma: StrategyOracle, tau: StrategyOracle, depth: int | None = None) -> PathMorphism:
    """The path isomorphism underlying the inverse strategies ``sigma``, ``tau``."""
    phi = sequential_morphism(sigma, tau)
    return extract_from_sequential(phi, depth)


def extract_from_sequential(phi: SequentialMorphism, depth: int | None = None) -> PathMorphism:
    a = phi.source
    k = max(_depth(a) - 1, 0) if depth is None else depth
    ex = _Extractor(phi)
    initial = {}
    for i in a.initials:
        image = phi(((i, None),))
        if len(image) != 1 or image[0][1] is not None:
            raise InverseViolation("an initial move is not sent to an initial move")
        initial[i] = image[0][0]
    try:
        Bijection(initial, frozenset(a.initials), frozenset(phi.target.initials))
    except NotBijective as e:
        raise InverseViolation(f"initial moves are not in bijection: {e}") from None
    mapping: dict = {}
    for i in a.initials:
        h = ex.kiso(((i, None),), k)
        _assemble(h, (i,), (initial[i],), mapping)
    return PathMorphism(mapping)


def _assemble(h: KIso, p: tuple, q: tuple, out: dict):
    out[p] = q
    for m, child in h.children:
        _assemble(child, p + (m,), q + (h.mapping[m],), out)


__all__ = [
    "Bijection", "InconsistentPartition", "KIso", "NotBijective", "extensions", "extract_from_sequential",
    "extract_path_iso", "k_isomorphism", "slice_bijection",
]
