"""Bounded observational testing of program equivalence.

Two closed terms of the same type are plugged into a family of program
contexts built in the language itself.  A context takes its argument apart
according to the type: ground data is written to an observation cell,
sums are split, functions are called on generated arguments, references are
read and written.  Arguments handed to functions are themselves generated
terms that record when and how they are used.  Both runs must agree on
convergence and on the full sequence of observations.

A ``Distinguished`` verdict is definite: the witness context separates the
terms.  ``Equivalent`` only means no context within the budget did.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .evaluation import Converged, Diverged, Store, Stuck, eval_big_step, enumerate_values, is_ground
from .syntax import terms as T
from .syntax.types import ONE, Arrow, Nat, Prod, Sum, Type, Var, Zero, show_type

# Observations go to two pre-allocated cells outside the program's reach:
# one for observed data, one for control-flow markers.
DATA = 0
MARK = 1
_OBSERVE = frozenset({DATA, MARK})
_STORE = Store.of({DATA: ONE, MARK: ONE})


@dataclass(frozen=True)
class ProbeBudget:
    depth: int = 2
    fuel: int = 50_000
    max_args: int = 6
    nat_range: int = 5  # numerals 0 .. nat_range-1 are used as probes
    retry_factor: int = 10


@dataclass(frozen=True)
class Equivalent:
    contexts: int
    budget_limited: bool = True


@dataclass(frozen=True)
class Distinguished:
    witness: T.Term  # the context, with the hole as free variable ``HOLE``
    left: object
    right: object

    def __str__(self) -> str:
        return f"Distinguished by {self.witness}: {_describe(self.left)} vs {_describe(self.right)}"


HOLE = "hole"


def _describe(outcome) -> str:
    if isinstance(outcome, Converged):
        return "converged with observations [" + ", ".join(f"{'mark' if c == MARK else 'data'} {v}" for c, v in outcome.log) + "]"
    if isinstance(outcome, Diverged):
        return "diverged"
    return f"stuck ({outcome.reason})"


def _mark(code: int) -> T.Term:
    return T.Assign(T.Loc(MARK), T.Num(code))


def _record(m: T.Term) -> T.Term:
    return T.Assign(T.Loc(DATA), m)


def _seq_all(parts: list[T.Term]) -> T.Term:
    if not parts:
        return T.UNIT
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = T.seq(p, out)
    return out


class _Builder:
    def __init__(self, budget: ProbeBudget):
        self.budget = budget
        self._markers = 2

    def marker(self) -> int:
        self._markers += 1
        return self._markers

    def use(self, x: T.Term, a: Type, d: int) -> T.Term:
        """A command of type 1 exercising the value of variable ``x : a``."""
        if isinstance(a, Zero):
            return T.UNIT
        if is_ground(a) or isinstance(a, Nat):
            return _record(x)
        if isinstance(a, Prod):
            return T.seq(self.use(T.Proj(1, x), a.left, d), self.use(T.Proj(2, x), a.right, d))
        if isinstance(a, Sum):
            y, z = T.fresh("l"), T.fresh("r")
            left = T.seq(_mark(1), self.use(T.FVar(y), a.left, d))
            right = T.seq(_mark(2), self.use(T.FVar(z), a.right, d))
            return T.case(x, (y, left), (z, right))
        if isinstance(a, Arrow):
            code = self.marker()
            if d <= 0:
                return _mark(code)
            steps = []
            for p in self.probes(a.dom, d - 1):
                r = T.fresh("res")
                steps.append(T.seq(_mark(code), T.let(r, T.App(x, p), self.use(T.FVar(r), a.cod, d - 1))))
            return _seq_all(steps) if steps else _mark(code)
        if isinstance(a, Var):
            code = self.marker()
            v = T.fresh("read")
            read = T.let(v, T.Deref(x), self.use(T.FVar(v), a.content, d - 1))
            steps = [T.seq(_mark(code), read)]
            for p in self.probes(a.content, d - 1)[:2]:
                steps.append(T.seq(T.Assign(x, p), read))
            return _seq_all(steps)
        raise TypeError(f"cannot observe values of type {show_type(a)}")

    def probes(self, a: Type, d: int) -> list[T.Term]:
        """Closed argument terms of type ``a`` supplied by the context."""
        cap = self.budget.max_args
        if isinstance(a, Nat):
            return [T.Num(i) for i in range(self.budget.nat_range)]
        if is_ground(a):
            return enumerate_values(a)
        if isinstance(a, Sum):
            out = [T.Inj(1, p, a.right) for p in self.probes(a.left, d)]
            out += [T.Inj(2, p, a.left) for p in self.probes(a.right, d)]
            return _spread(out, cap)
        if isinstance(a, Prod):
            lefts, rights = self.probes(a.left, d), self.probes(a.right, d)
            out = [T.Pair(p, q) for p in lefts for q in rights]
            return _spread(out, cap)
        if isinstance(a, Arrow):
            code = self.marker()
            c = T.fresh("arg")
            used = self.use(T.FVar(c), a.dom, d) if d > 0 else T.UNIT
            results = self.probes(a.cod, max(d - 1, 0))
            if not results:
                results = [T.bottom(a.cod)]
            return [T.lam(c, a.dom, T.seq(_mark(code), T.seq(used, r))) for r in results[:cap]]
        if isinstance(a, Var):
            out = []
            contents = self.probes(a.content, max(d - 1, 0))
            if contents:
                x = T.fresh("cell")
                out.append(T.new_init(x, a.content, contents[0], T.FVar(x)))
            code = self.marker()
            w = T.fresh("w")
            written = self.use(T.FVar(w), a.content, max(d - 1, 0))
            writer = T.lam(w, a.content, T.seq(_mark(code), written))
            reads = contents[:2] or [T.bottom(a.content)]
            for r in reads:
                u = T.fresh("u")
                out.append(T.MkVar(writer, T.lam(u, ONE, T.seq(_mark(code + 1000), r))))
            return out[:cap]
        if isinstance(a, Zero):
            return []
        raise TypeError(f"cannot generate arguments of type {show_type(a)}")

    def contexts(self, a: Type) -> list[T.Term]:
        """Contexts (with free variable HOLE) observing a value of type ``a``."""
        d = self.budget.depth
        h = T.FVar(HOLE)
        out = [self.use(h, a, d)]
        if isinstance(a, Arrow) and d > 0:
            # each argument on its own, from a fresh state
            for p in self.probes(a.dom, d - 1):
                r = T.fresh("res")
                out.append(T.let(r, T.App(h, p), self.use(T.FVar(r), a.cod, d - 1)))
            # and the whole sequence twice, to expose state carried between calls
            out.append(T.seq(out[0], out[0]))
        return out


def _spread(items: list, cap: int) -> list:
    """At most ``cap`` items, sampled evenly so both ends are represented."""
    if len(items) <= cap:
        return items
    step = len(items) / cap
    return [items[int(i * step)] for i in range(cap)]


def _run(ctx: T.Term, m: T.Term, fuel: int):
    prog = T.let(HOLE, m, ctx)
    return eval_big_step(_STORE, prog, fuel, observe=_OBSERVE)


def _observation(outcome):
    if isinstance(outcome, Converged):
        return ("converged", outcome.log)
    if isinstance(outcome, Diverged):
        return ("diverged",)
    raise ProbeError(f"evaluation got stuck: {outcome.reason}")


class ProbeError(RuntimeError):
    pass


@lru_cache(maxsize=1024)
def _contexts(a: Type, budget: ProbeBudget) -> tuple[T.Term, ...]:
    return tuple(_Builder(budget).contexts(a))


@lru_cache(maxsize=1024)
def _identity_runs(a: Type, budget: ProbeBudget) -> tuple:
    ident = T.lam("x", a, T.FVar("x"))
    return tuple(_run(ctx, ident, budget.fuel) for ctx in _contexts(a, budget))


def probe_equivalent(m: T.Term, n: T.Term, a: Type, budget: ProbeBudget | None = None, *, _right=None):
    """Compare closed ``m`` and ``n`` of type ``a`` in generated contexts."""
    budget = budget or ProbeBudget()
    contexts = _contexts(a, budget)
    for i, ctx in enumerate(contexts):
        left = _run(ctx, m, budget.fuel)
        right = _right[i] if _right is not None else _run(ctx, n, budget.fuel)
        if isinstance(left, Diverged) != isinstance(right, Diverged):
            # maybe one side is just slower: give both more fuel first
            more = budget.fuel * budget.retry_factor
            left, right = _run(ctx, m, more), _run(ctx, n, more)
        if isinstance(left, Stuck) or isinstance(right, Stuck):
            bad = left if isinstance(left, Stuck) else right
            raise ProbeError(f"evaluation got stuck: {bad.reason}")
        if _observation(left) != _observation(right):
            return Distinguished(ctx, left, right)
    return Equivalent(len(contexts))


def round_trip_identity(x: str, a: Type, body: T.Term, budget: ProbeBudget | None = None):
    """Check ``x : a |- body : a`` against the identity on ``a``.

    On ground types every value is fed through ``body`` and the result must
    be the same value.  Otherwise the two functions are probed.
    """
    budget = budget or ProbeBudget()
    if is_ground(a):
        return ground_round_trip(x, a, body, budget.fuel)
    ident = T.lam("x", a, T.FVar("x"))
    return probe_equivalent(T.lam(x, a, body), ident, Arrow(a, a), budget,
                            _right=_identity_runs(Arrow(a, a), budget))


def ground_round_trip(x: str, a: Type, body: T.Term, fuel: int = 50_000):
    """Exact check on a ground type: ``body[v/x]`` must evaluate to ``v`` for every value ``v``."""
    values = enumerate_values(a)
    for v in values:
        prog = T.subst_free(body, x, v)
        out = eval_big_step(_STORE, prog, fuel, observe=_OBSERVE)
        if isinstance(out, Stuck):
            raise ProbeError(f"evaluation got stuck: {out.reason}")
        if not (isinstance(out, Converged) and out.value == v and not out.log):
            return Distinguished(T.let(x, v, T.FVar(HOLE)), out, Converged(_STORE, v))
    return Equivalent(len(values), budget_limited=False)


__all__ = [
    "Distinguished", "Equivalent", "HOLE", "ProbeBudget", "ProbeError",
    "ground_round_trip", "probe_equivalent", "round_trip_identity",
]
