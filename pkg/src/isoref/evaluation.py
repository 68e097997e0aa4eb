"""Big-step call-by-value evaluation with a store.

The evaluator follows the big-step rules directly but runs them on an
explicit stack, so deep recursion in the object program does not hit the
Python recursion limit.  Every rule application costs one unit of fuel;
running out of fuel is reported as divergence.

Tail-recursive loops that return to exactly the same machine state (term,
pending frames and store) are detected early and also reported as
divergence; this is sound because evaluation is deterministic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .syntax import terms as T
from .syntax.types import One, Prod, Sum, Type, Zero, show_type


@dataclass(frozen=True)
class Store:
    """Location typing (id -> content type) and contents (id -> value)."""

    types: tuple[tuple[int, Type], ...] = ()
    contents: tuple[tuple[int, T.Term], ...] = ()

    @classmethod
    def of(cls, types: dict, contents: dict | None = None) -> "Store":
        return cls(tuple(sorted(types.items())), tuple(sorted((contents or {}).items())))

    def type_map(self) -> dict[int, Type]:
        return dict(self.types)

    def content_map(self) -> dict[int, T.Term]:
        return dict(self.contents)

    def __str__(self) -> str:
        vals = dict(self.contents)
        cells = []
        for ident, ty in self.types:
            shown = str(vals[ident]) if ident in vals else "unset"
            cells.append(f"@{ident} : {show_type(ty)} = {shown}")
        return "{" + ", ".join(cells) + "}"


EMPTY_STORE = Store()


@dataclass(frozen=True)
class Converged:
    store: Store
    value: T.Term
    log: tuple[tuple[int, T.Term], ...] = ()
    steps: int = 0


@dataclass(frozen=True)
class Diverged:
    fuel: int
    log: tuple[tuple[int, T.Term], ...] = ()
    looped: bool = False  # a repeated state was found before the fuel ran out


@dataclass(frozen=True)
class Stuck:
    reason: str
    log: tuple[tuple[int, T.Term], ...] = ()


EvalOutcome = Converged | Diverged | Stuck


class NotGround(ValueError):
    pass


def is_value(m: T.Term) -> bool:
    if isinstance(m, (T.Unit, T.Lam, T.Loc, T.Num)):
        return True
    if isinstance(m, T.Pair):
        return is_value(m.left) and is_value(m.right)
    if isinstance(m, T.Inj):
        return is_value(m.body)
    if isinstance(m, T.MkVar):
        return is_value(m.write) and is_value(m.read)
    if isinstance(m, T.Proj):
        # a projection of a value that is not a pair cannot reduce further
        return is_value(m.body) and not isinstance(m.body, T.Pair)
    return False


class _OutOfFuel(Exception):
    pass


class _Stuck(Exception):
    pass


class _Loop(Exception):
    pass


def eval_big_step(
    store: Store,
    m: T.Term,
    fuel: int,
    *,
    observe: frozenset[int] | set[int] = frozenset(),
    trace: list | None = None,
) -> EvalOutcome:
    """Evaluate ``m`` in ``store`` using at most ``fuel`` rule applications.

    Writes to locations in ``observe`` are recorded, in order, in the
    outcome's ``log``.  If ``trace`` is a list, the name of every rule
    applied is appended to it.
    """
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    machine = _Machine(store, fuel, observe, trace)
    try:
        value = machine.run(m)
    except _OutOfFuel:
        return Diverged(fuel, tuple(machine.log))
    except _Loop:
        return Diverged(fuel, tuple(machine.log), looped=True)
    except _Stuck as e:
        return Stuck(str(e), tuple(machine.log))
    new_store = Store(tuple(sorted(machine.types.items())), tuple(sorted(machine.contents.items())))
    return Converged(new_store, value, tuple(machine.log), fuel - machine.fuel)


class _Machine:
    def __init__(self, store: Store, fuel: int, observe, trace):
        self.types = store.type_map()
        self.contents = store.content_map()
        self.fuel = fuel
        self.observe = observe
        self.trace = trace
        self.log: list[tuple[int, T.Term]] = []
        self.next_loc = max(self.types, default=-1) + 1
        # cycle detection: a snapshot is taken after 1, 2, 4, 8, ... beta steps
        self.version = 0
        self.betas = 0
        self.snapshot = None

    def tick(self, rule: str):
        if self.fuel <= 0:
            raise _OutOfFuel
        self.fuel -= 1
        if self.trace is not None:
            self.trace.append(rule)

    def check_cycle(self, body: T.Term, stack: list):
        self.betas += 1
        snap = self.snapshot
        if snap is not None and snap[0] == self.version and snap[1] == len(stack):
            if snap[2] == body and list(snap[3]) == stack:
                raise _Loop
        if self.betas & (self.betas - 1) == 0:
            self.snapshot = (self.version, len(stack), body, tuple(stack))

    def run(self, m: T.Term) -> T.Term:
        # ("eval", term) asks for a term to be evaluated; ("value", v) hands
        # a finished value to the frame on top of the stack.
        stack: list[tuple] = []
        kind, x = "eval", m
        while True:
            if kind == "eval":
                kind, x = self.step(x, stack)
            elif not stack:
                return x
            else:
                kind, x = self.resume(stack.pop(), x, stack)

    def step(self, m: T.Term, stack: list) -> tuple[str, T.Term]:
        """Apply the rule for ``m``, pushing a frame for what remains after its first premise."""
        if is_value(m):
            self.tick("value")
            return "value", m
        if isinstance(m, T.App):
            self.tick("app")
            stack.append(("app-fn", m.arg))
            return "eval", m.fn
        if isinstance(m, T.Pair):
            self.tick("pair")
            stack.append(("pair-left", m.right))
            return "eval", m.left
        if isinstance(m, T.Proj):
            self.tick(f"proj{m.index}")
            stack.append(("proj", m.index))
            return "eval", m.body
        if isinstance(m, T.Inj):
            self.tick(f"inj{m.index}")
            stack.append(("inj", m.index, m.other))
            return "eval", m.body
        if isinstance(m, T.Case):
            self.tick("case")
            stack.append(("case", m.left, m.right))
            return "eval", m.scrutinee
        if isinstance(m, T.New):
            self.tick("new")
            loc = self.next_loc
            self.next_loc += 1
            self.types[loc] = m.ty
            self.version += 1
            return "value", T.Loc(loc, m.good)
        if isinstance(m, T.Assign):
            self.tick("assign")
            stack.append(("assign-ref", m.value))
            return "eval", m.ref
        if isinstance(m, T.Deref):
            self.tick("deref")
            stack.append(("deref",))
            return "eval", m.ref
        if isinstance(m, T.MkVar):
            self.tick("mkvar")
            stack.append(("mkvar-write", m.read))
            return "eval", m.write
        if isinstance(m, T.Prim):
            self.tick(f"prim{m.op}")
            stack.append(("prim-left", m.op, m.right))
            return "eval", m.left
        if isinstance(m, (T.FVar, T.BVar)):
            raise _Stuck(f"open term: free variable {m}")
        raise _Stuck(f"no rule for {m}")

    def resume(self, frame: tuple, v: T.Term, stack: list) -> tuple[str, T.Term]:
        """Feed value ``v`` to ``frame``."""
        tag = frame[0]
        if tag == "app-fn":
            stack.append(("app-arg", v))
            return "eval", frame[1]
        if tag == "app-arg":
            fn = frame[1]
            if not isinstance(fn, T.Lam):
                raise _Stuck(f"applying a non-function {fn}")
            body = T.instantiate(fn.body, v)
            self.check_cycle(body, stack)
            return "eval", body
        if tag == "pair-left":
            stack.append(("pair-right", v))
            return "eval", frame[1]
        if tag == "pair-right":
            return "value", T.Pair(frame[1], v)
        if tag == "proj":
            if not isinstance(v, T.Pair):
                raise _Stuck(f"projection of non-pair {v}")
            return "value", v.left if frame[1] == 1 else v.right
        if tag == "inj":
            return "value", T.Inj(frame[1], v, frame[2])
        if tag == "case":
            if not isinstance(v, T.Inj):
                raise _Stuck(f"case on non-injection {v}")
            return "eval", T.instantiate(frame[1] if v.index == 1 else frame[2], v.body)
        if tag == "assign-ref":
            stack.append(("assign-value", v))
            return "eval", frame[1]
        if tag == "assign-value":
            ref = frame[1]
            if isinstance(ref, T.Loc):
                self.contents[ref.id] = v
                self.version += 1
                if ref.id in self.observe:
                    self.log.append((ref.id, v))
                return "value", T.UNIT
            if isinstance(ref, T.MkVar):
                stack.append(("discard",))
                return "eval", T.App(ref.write, v)
            raise _Stuck(f"assignment to non-reference {ref}")
        if tag == "discard":
            return "value", T.UNIT
        if tag == "deref":
            if isinstance(v, T.Loc):
                if v.id not in self.contents:
                    raise _Stuck(f"read of unassigned location @{v.id}")
                return "value", self.contents[v.id]
            if isinstance(v, T.MkVar):
                return "eval", T.App(v.read, T.UNIT)
            raise _Stuck(f"dereference of non-reference {v}")
        if tag == "mkvar-write":
            stack.append(("mkvar-read", v))
            return "eval", frame[1]
        if tag == "mkvar-read":
            return "value", T.MkVar(frame[1], v)
        if tag == "prim-left":
            stack.append(("prim-right", frame[1], v))
            return "eval", frame[2]
        if tag == "prim-right":
            return "value", _prim(frame[1], frame[2], v)
        raise AssertionError(tag)


def _prim(op: str, a: T.Term, b: T.Term) -> T.Term:
    if not (isinstance(a, T.Num) and isinstance(b, T.Num)):
        raise _Stuck(f"arithmetic on non-numerals {a}, {b}")
    x, y = a.value, b.value
    if op == "+":
        return T.Num(x + y)
    if op == "-":
        return T.Num(max(0, x - y))
    if op == "*":
        return T.Num(x * y)
    if op in ("div", "mod"):
        if y == 0:
            raise _Stuck(f"{op} by zero")
        return T.Num(x // y if op == "div" else x % y)
    if op == "=":
        return T.TRUE if x == y else T.FALSE
    if op == "<":
        return T.TRUE if x < y else T.FALSE
    raise _Stuck(f"unknown primitive {op}")


def enumerate_values(a: Type) -> list[T.Term]:
    """All closed values of a type built from 0, 1, + and *."""
    if isinstance(a, Zero):
        return []
    if isinstance(a, One):
        return [T.UNIT]
    if isinstance(a, Sum):
        return [T.Inj(1, v, a.right) for v in enumerate_values(a.left)] + [
            T.Inj(2, v, a.left) for v in enumerate_values(a.right)
        ]
    if isinstance(a, Prod):
        return [T.Pair(x, y) for x, y in itertools.product(enumerate_values(a.left), enumerate_values(a.right))]
    raise NotGround(f"not a ground type: {show_type(a)}")


def is_ground(a: Type) -> bool:
    if isinstance(a, (Zero, One)):
        return True
    if isinstance(a, (Sum, Prod)):
        return is_ground(a.left) and is_ground(a.right)
    return False


def evaluate(m: T.Term, fuel: int = 100_000, **kw) -> EvalOutcome:
    """Evaluate a closed program from the empty store."""
    return eval_big_step(EMPTY_STORE, m, fuel, **kw)


__all__ = [
    "Converged", "Diverged", "EMPTY_STORE", "EvalOutcome", "NotGround", "Store", "Stuck",
    "enumerate_values", "eval_big_step", "evaluate", "is_ground", "is_value",
]
