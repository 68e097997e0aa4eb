"""The eleven acceptance criteria, each at its stated scale and tolerance.

Every test records a PASS/FAIL line (printed in the terminal summary) and
then asserts, so a failing criterion also fails the run.
"""

from __future__ import annotations

import io
import itertools
import random
import time

import pytest

from conftest import record
from isoref import cli
from isoref.evaluation import Converged, Diverged, Store, eval_big_step, evaluate
from isoref.games import (
    Bijection, compose, copycat, copycat_along, enumerate_plays, extract_path_iso, involution_example,
    random_arena, random_oracle, random_path_iso, random_renaming, rename_morphism, rename_oracle,
    slice_bijection,
)
from isoref.pathiso import PathTree, decide_iso_semantic, identity_morphism, path_tree, tree_canonical_code
from isoref.probe import Equivalent, ProbeBudget, probe_equivalent, round_trip_identity
from isoref.programs import (
    CURRIED, FLIP_LOOP, FORTH, INVOLUTION_TYPE, MKVAR_PROGRAMS, UNCURRIED, hotel_round_trips, hotel_terms, involution_term,
    involution_twice, random_programs,
)
from isoref.syntax import TypingContext, eliminate_mkvar, parse_term, parse_type, show_type, typecheck
from isoref.syntax import terms as T
from isoref.syntax.types import NAT, Arrow, enumerate_types
from isoref.syntax.typing import EMPTY
from isoref.theory import (
    DISTRIBUTIVITY_RULES, canonical_form, decide_iso_syntactic, embed, grammar_check, measure,
    synthesize_coercion,
)

# ------------------------------------------------------------------ shared fixtures

_TYPES = None


def small_types():
    """All var-free, nat-free types with at most five nodes."""
    global _TYPES
    if _TYPES is None:
        _TYPES = enumerate_types(5)
    return _TYPES


def isomorphic_pairs():
    ts = small_types()
    canon = {t: canonical_form(t)[0] for t in ts}
    return [(a, b) for a in ts for b in ts if canon[a] == canon[b]]


# ------------------------------------------------------------------ 1. the eleven equations

EQUATIONS = [
    ("A * B", "B * A"),
    ("A * (B * C)", "(A * B) * C"),
    ("1 * A", "A"),
    ("A + B", "B + A"),
    ("A + (B + C)", "(A + B) + C"),
    ("0 + A", "A"),
    ("A * (B + C)", "A * B + A * C"),
    ("(A + B) -> C", "(A -> C) * (B -> C)"),
    ("0 -> A", "1"),
    ("A -> 0", "1"),
    ("var[A]", "(A -> 1) * (1 -> A)"),
]
INSTANCES = ["1", "1 + 1", "1 -> 1"]


def instantiate(text: str, assignment: dict) -> str:
    return "".join(f"({assignment[c]})" if c in assignment else c for c in text)


def test_criterion_1_equations():
    start = time.time()
    failures, runs = [], 0
    for lhs, rhs in EQUATIONS:
        metas = sorted({c for c in lhs + rhs if c in "ABC"})
        for values in itertools.product(INSTANCES, repeat=len(metas)):
            env = dict(zip(metas, values))
            a, b = instantiate(lhs, env), instantiate(rhs, env)
            code = cli.main(["iso", "--method", "both", a, b], out=io.StringIO())
            runs += 1
            if code != 0:
                failures.append((a, b, code))
    elapsed = time.time() - start
    ok = not failures and elapsed < 10
    record(1, ok, f"{runs} instances, {len(failures)} rejected, {elapsed:.1f}s (limit 10s)")
    assert ok, failures[:5]


# ------------------------------------------------------------------ 2. decider agreement


def test_criterion_2_decider_agreement():
    start = time.time()
    ts = small_types()
    disagreements = []
    for a in ts:
        for b in ts:
            if decide_iso_syntactic(a, b) != bool(decide_iso_semantic(a, b)):
                disagreements.append((show_type(a), show_type(b)))
    elapsed = time.time() - start
    ok = not disagreements and elapsed < 300
    record(2, ok, f"{len(ts)} types, {len(ts) ** 2} ordered pairs, {len(disagreements)} disagreements, "
                  f"{elapsed:.1f}s (limit 300s)")
    assert ok, disagreements[:5]


# ------------------------------------------------------------------ 3. negative suite


def test_criterion_3_negative_suite():
    pairs = [("1", "1 + 1"), ("1 -> 1", "1"), ("(1 + 1) -> 1", "1 -> 1"), ("1 + 1", "1 + 1 + 1")]
    accepted = []
    for x, y in pairs:
        a, b = parse_type(x), parse_type(y)
        if decide_iso_syntactic(a, b) or decide_iso_semantic(a, b):
            accepted.append((x, y))
    ok = not accepted
    record(3, ok, f"{len(pairs)} non-isomorphic pairs, {len(accepted)} wrongly accepted")
    assert ok, accepted


# ------------------------------------------------------------------ 4. coercion soundness


def test_criterion_4_coercion_soundness():
    start = time.time()
    pairs = isomorphic_pairs()
    budget = ProbeBudget()
    failures = []
    for a, b in pairs:
        try:
            c = synthesize_coercion(a, b)
            for co in (c.forward, c.backward):
                if typecheck(TypingContext.of({co.var: co.src}, {}), co.body) != co.dst:
                    raise AssertionError("coercion has the wrong type")
            fg, gf = c.forward.then(c.backward), c.backward.then(c.forward)
            r1 = round_trip_identity(fg.var, a, fg.body, budget)
            r2 = round_trip_identity(gf.var, b, gf.body, budget)
            if not (isinstance(r1, Equivalent) and isinstance(r2, Equivalent)):
                failures.append((show_type(a), show_type(b)))
        except Exception as e:  # any failure of synthesis, typing or probing counts
            failures.append((show_type(a), show_type(b), repr(e)))
    elapsed = time.time() - start
    ok = not failures
    record(4, ok, f"{len(pairs)} isomorphic pairs, {len(failures)} failed round trips, {elapsed:.1f}s")
    assert ok, failures[:5]


# ------------------------------------------------------------------ 5. canonical-form health


def test_criterion_5_canonical_health():
    problems = []
    steps_seen = 0
    for a in small_types():
        c, steps = canonical_form(a)
        check = grammar_check(c)
        if not check:
            problems.append(f"{show_type(a)}: grammar {check.violation}")
        again = canonical_form(embed(c))[0]
        if again != c:
            problems.append(f"{show_type(a)}: not idempotent")
        for s in steps:
            steps_seen += 1
            before, after = measure(s.before), measure(s.after)
            if after > before:
                problems.append(f"{show_type(a)}: {s.rule} increases the measure")
            elif after == before and s.rule not in DISTRIBUTIVITY_RULES:
                problems.append(f"{show_type(a)}: {s.rule} does not decrease the measure")
    ok = not problems
    record(5, ok, f"{len(small_types())} types, {steps_seen} rewrite steps, {len(problems)} problems")
    assert ok, problems[:5]


# ------------------------------------------------------------------ 6. interpreter


def test_criterion_6_interpreter():
    problems = []
    programs = random_programs(1000, seed=6)
    converged = 0
    for m, a in programs:
        if typecheck(EMPTY, m) != a:
            problems.append("generated program has the wrong type")
            continue
        r1, r2 = evaluate(m, fuel=20_000), evaluate(m, fuel=20_000)
        if r1 != r2:
            problems.append("non-deterministic outcome")
        if isinstance(r1, Converged):
            converged += 1
            for fuel in (r1.steps, r1.steps + 1, 2 * r1.steps + 10, 100_000):
                r = evaluate(m, fuel=fuel)
                if not (isinstance(r, Converged) and r.value == r1.value and r.store == r1.store):
                    problems.append(f"fuel monotonicity fails at {fuel}")
            if r1.steps > 1 and not isinstance(evaluate(m, fuel=r1.steps - 1), Diverged):
                problems.append("converges with less fuel than it used")
    bot = parse_term("bot[1]")
    for fuel in (100, 1000, 10_000):
        if not isinstance(evaluate(bot, fuel=fuel), Diverged):
            problems.append(f"bot[1] converges at fuel {fuel}")
    loop = evaluate(parse_term(FLIP_LOOP), fuel=10_000)
    if not (isinstance(loop, Converged) and loop.value == T.Pair(T.FALSE, T.TRUE)):
        problems.append("flip loop does not terminate with the flag cleared")
    ok = not problems
    record(6, ok, f"1000 programs ({converged} converge), bot[1] at 1e2..1e4, flip loop: {len(problems)} problems")
    assert ok, problems[:5]


# ------------------------------------------------------------------ 7. the involution term


def test_criterion_7_involution_term():
    b = parse_type(INVOLUTION_TYPE)
    ident = T.lam("x", b, T.FVar("x"))
    budget = ProbeBudget(depth=3)
    twice = probe_equivalent(involution_twice(), ident, Arrow(b, b), budget)
    once = probe_equivalent(involution_term(), ident, Arrow(b, b), budget)
    ok = isinstance(twice, Equivalent) and not isinstance(once, Equivalent)
    record(7, ok, f"M;M vs id: {type(twice).__name__}, M vs id: {type(once).__name__} (depth 3)")
    assert ok


# ------------------------------------------------------------------ 8. Hilbert hotel terms


def _grid_log(fn: T.Term, curried: bool, order) -> object:
    """Apply ``fn`` to an argument that logs what it is called with, feed it ``order``; the write log."""
    m, n, h = T.fresh("m"), T.fresh("n"), T.fresh("h")
    log = lambda v: T.Assign(T.Loc(0), T.FVar(v))
    if curried:
        logger = T.lam(m, NAT, T.seq(log(m), T.lam(n, NAT, log(n))))
        calls = [T.App(T.App(T.FVar(h), T.Num(i)), T.Num(j)) for i, j in order]
    else:
        logger = T.lam(n, NAT, log(n))
        calls = [T.seq(T.App(T.FVar(h), T.Num(i)), T.App(T.FVar(h), T.Num(j))) for i, j in order]
    body = calls[0]
    for c in calls[1:]:
        body = T.seq(body, c)
    out = eval_big_step(Store.of({0: NAT}), T.let(h, T.App(fn, logger), body), 500_000, observe={0})
    return out.log if isinstance(out, Converged) else type(out).__name__


def _broken_forth() -> T.Term:
    """``forth`` with the pairing's residue test off by one."""
    return parse_term(FORTH.replace("if p = 0 then", "if p = 1 then"), nat_enabled=True)


def test_criterion_8_hotel():
    start = time.time()
    bf, fb = hotel_round_trips()
    c, u = parse_type(CURRIED, True), parse_type(UNCURRIED, True)
    problems = []
    budget = ProbeBudget(depth=3, nat_range=5)
    for name, term, a in (("back.forth", bf, c), ("forth.back", fb, u)):
        ident = T.lam("x", a, T.FVar("x"))
        verdict = probe_equivalent(term, ident, Arrow(a, a), budget)
        if not isinstance(verdict, Equivalent):
            problems.append(f"{name}: {verdict}")
        grid = [(m, n) for m in range(5) for n in range(5)]
        for order in (grid, list(reversed(grid)), random.Random(8).sample(grid, len(grid))):
            if _grid_log(term, a == c, order) != _grid_log(ident, a == c, order):
                problems.append(f"{name}: write log differs from the identity's")
    # negative control: a wrong pairing must be told apart from the identity
    _, back = hotel_terms()
    x = T.fresh("x")
    broken = T.lam(x, c, T.App(back, T.App(_broken_forth(), T.FVar(x))))
    control = probe_equivalent(broken, T.lam("x", c, T.FVar("x")), Arrow(c, c), budget)
    if isinstance(control, Equivalent):
        problems.append("broken pairing not distinguished")
    elapsed = time.time() - start
    ok = not problems and elapsed < 30
    record(8, ok, f"both round trips on (m,n) in [0,4]^2: {len(problems)} problems, {elapsed:.1f}s (limit 30s)")
    assert ok, problems


# ------------------------------------------------------------------ 9. games kernel


def _agree(s1, s2, max_len):
    for p in enumerate_plays(s1, max_len, limit=500):
        for k in range(1, len(p) + 1, 2):
            if s1.respond(p[:k]) != s2.respond(p[:k]):
                return False
    for p in enumerate_plays(s2, max_len, limit=500):
        for k in range(1, len(p) + 1, 2):
            if s1.respond(p[:k]) != s2.respond(p[:k]):
                return False
    return True


def _random_slice_instance(rng: random.Random):
    n = rng.randint(1, 64)
    n1 = rng.randint(0, n - 1)
    e = [("e", i) for i in range(n)]
    f = [("f", i) for i in range(n)]
    rng.shuffle(f)
    fmap = dict(zip(e, f))
    e1 = rng.sample(e, n1)
    f1 = rng.sample(f, n1)
    return Bijection(fmap), Bijection(dict(zip(e1, f1)))


def test_criterion_9_games_kernel():
    rng = random.Random(9)
    problems = []
    # composition laws
    for k in range(10):
        a, b, c, d = (random_arena(rng, depth=3) for _ in range(4))
        s, t, u = random_oracle(a, b, 3 * k), random_oracle(b, c, 3 * k + 1), random_oracle(c, d, 3 * k + 2)
        if not _agree(compose(copycat(a), s), s, 12) or not _agree(compose(s, copycat(b)), s, 12):
            problems.append("identity law")
        if not _agree(compose(compose(s, t), u), compose(s, compose(t, u)), 12):
            problems.append("associativity")
    # round trip through copycat_along
    round_trips = 0
    for _ in range(100):
        a = random_arena(rng, depth=4)
        b, phi = random_path_iso(rng, a)
        sigma, tau = copycat_along(phi, phi.inverse(), a, b)
        round_trips += extract_path_iso(sigma, tau) == phi
    if round_trips != 100:
        problems.append(f"copycat_along round trip: {round_trips}/100")
    # the involution
    arena, i = involution_example()
    if extract_path_iso(i, i) != identity_morphism(path_tree(arena)):
        problems.append("involution does not extract to the identity")
    # slicing
    sliced = 0
    for _ in range(1000):
        f, g = _random_slice_instance(rng)
        h = slice_bijection(f, g)
        if h.domain == f.domain - g.domain and h.codomain == f.codomain - g.codomain \
                and slice_bijection(f.inverse(), g.inverse()) == h.inverse():
            sliced += 1
    if sliced != 1000:
        problems.append(f"slicing: {sliced}/1000")
    # naturality
    natural = 0
    for _ in range(100):
        a = random_arena(rng, depth=4)
        b, phi = random_path_iso(rng, a)
        sigma, tau = copycat_along(phi, phi.inverse(), a, b)
        ra, rb = random_renaming(rng, a, "x"), random_renaming(rng, b, "y")
        got = extract_path_iso(rename_oracle(sigma, ra, rb), rename_oracle(tau, rb, ra))
        back = {v: k for k, v in ra.items()}
        expected = rename_morphism(back, path_tree(a.rename(ra.__getitem__))).then(phi).then(
            rename_morphism(rb, path_tree(b)))
        natural += got == expected
    if natural != 100:
        problems.append(f"naturality: {natural}/100")
    ok = not problems
    record(9, ok, f"laws, 100 round trips, involution, 1000 slices, 100 renamings: {problems or 'all hold'}")
    assert ok, problems


# ------------------------------------------------------------------ 10. path-iso oracle


def random_forest(rng: random.Random, nodes: int):
    """A random Q/A-labelled forest as nested ``(kind, children)`` pairs."""
    items = [(rng.choice("QA"), []) for _ in range(nodes)]
    roots = []
    for k, item in enumerate(items):
        if k == 0 or rng.random() < 0.2:
            roots.append(item)
        else:
            items[rng.randrange(k)][1].append(item)
    return roots


def shuffled(rng: random.Random, forest):
    out = [(kind, shuffled(rng, kids)) for kind, kids in forest]
    rng.shuffle(out)
    return out


def brute_iso(xs, ys) -> bool:
    """Forest isomorphism by trying every matching of children."""
    if len(xs) != len(ys):
        return False
    if not xs:
        return True
    x, rest = xs[0], xs[1:]
    for j, y in enumerate(ys):
        if x[0] == y[0] and brute_iso(x[1], y[1]) and brute_iso(rest, ys[:j] + ys[j + 1:]):
            return True
    return False


def test_criterion_10_tree_codes():
    rng = random.Random(10)
    mismatches = 0
    positives = 0
    for k in range(1000):
        f1 = random_forest(rng, rng.randint(1, 12))
        if k % 2 == 0:
            f2 = shuffled(rng, f1)
        else:
            f2 = random_forest(rng, sum(1 for _ in _walk(f1)))
        same_code = tree_canonical_code(PathTree.from_nested(f1)) == tree_canonical_code(PathTree.from_nested(f2))
        iso = brute_iso(f1, f2)
        positives += iso
        mismatches += same_code != iso
    ok = mismatches == 0
    record(10, ok, f"1000 random forests of <=12 nodes ({positives} isomorphic pairs), {mismatches} mismatches")
    assert ok


def _walk(forest):
    for kind, kids in forest:
        yield kind
        yield from _walk(kids)


# ------------------------------------------------------------------ 11. mkvar elimination


def test_criterion_11_mkvar_elimination():
    problems = []
    for src in MKVAR_PROGRAMS:
        m = parse_term(src)
        a = typecheck(EMPTY, m)
        e, _ = eliminate_mkvar(m)
        if T.contains_node(e, T.MkVar):
            problems.append(f"mkvar left in {src}")
        if typecheck(EMPTY, e) != a:
            problems.append(f"type changed for {src}")
        before, after = evaluate(m, fuel=50_000), evaluate(e, fuel=50_000)
        if isinstance(before, Converged) != isinstance(after, Converged):
            problems.append(f"convergence differs for {src}")
        elif isinstance(before, Converged) and before.value != after.value:
            problems.append(f"value differs for {src}")
    ok = not problems and len(MKVAR_PROGRAMS) >= 10
    record(11, ok, f"{len(MKVAR_PROGRAMS)} mkvar programs, {len(problems)} disagreements")
    assert ok, problems


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
