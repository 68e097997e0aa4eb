import io
import json

import pytest

from isoref.cli import EXIT_ERROR, EXIT_NO, EXIT_YES, CliError, main, read_signature


def run(*argv: str) -> tuple[int, str]:
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_iso():
    assert run("iso", "1 + 0", "1") == (EXIT_YES, "ISOMORPHIC\n")
    assert run("iso", "--method", "both", "1 -> 1", "1") == (EXIT_NO, "NOT-ISOMORPHIC\n")
    for method in ("semantic", "syntactic"):
        assert run("iso", "--method", method, "var[1]", "(1 + 1) -> 1")[0] == EXIT_YES


def test_iso_witness():
    code, text = run("iso", "--witness", "var[1]", "(1 -> 1) * (1 -> 1)")
    assert code == EXIT_YES and "mkvar" in text and "forward" in text


def test_nat_and_syntax_errors():
    assert run("iso", "nat", "nat")[0] == EXIT_ERROR
    assert run("iso", "1 +", "1")[0] == EXIT_ERROR
    assert run("frobnicate")[0] == EXIT_ERROR


def test_canon():
    assert run("canon", "var[1]") == (EXIT_YES, "(1 -> 1) * (1 -> 1)\n")
    code, text = run("canon", "--trace", "0 + 1")
    assert code == EXIT_YES and "sum-zero" in text


def test_coerce():
    code, text = run("coerce", "1 * (1 + 1)", "1 + 1")
    assert code == EXIT_YES and "backward" in text
    assert run("coerce", "1", "1 + 1")[0] == EXIT_NO


def test_eval(tmp_path):
    assert run("eval", "-e", "new x : bool := true in x := false; !x") == (EXIT_YES, "(inr[1] ()) : 1 + 1\n")
    assert run("eval", "-e", "bot[1]", "--fuel", "500") == (EXIT_NO, "DIVERGED\n")
    assert run("eval", "--nat", "-e", "3 * 4 + 1")[1] == "13 : nat\n"
    f = tmp_path / "prog.txt"
    f.write_text("(inl[1] (), ())")
    assert run("eval", str(f))[0] == EXIT_YES
    assert run("eval", "-e", "fst ()")[0] == EXIT_ERROR


def test_search(tmp_path):
    sig = tmp_path / "lib.sig"
    sig.write_text("# a small library\np : (1 -> 1) * (1 -> 1)\nq : 1 + 1\n\nr : var[1]  # a cell\n")
    assert run("search", "--sig", str(sig), "(1 + 1) -> 1") == (EXIT_YES, "p\nr\n")
    assert run("search", "--sig", str(sig), "0")[0] == EXIT_NO


def test_signature_errors():
    with pytest.raises(CliError):
        read_signature("p : 1\np : 1 + 1\n")
    with pytest.raises(CliError):
        read_signature("just a line\n")
    assert [e.name for e in read_signature("n : nat\n", nat=True)] == ["n"]


def test_arena_dumps():
    code, text = run("arena", "bool")
    assert code == EXIT_YES and text.splitlines()[0] == "q [OQ]"
    code, text = run("arena", "--format", "json", "1 -> 1")
    assert code == EXIT_YES and "moves" in json.loads(text)
    code, text = run("arena", "--paths", "--format", "json", "--trim", "var[1]")
    roots = json.loads(text)["roots"]
    assert len(roots) == 1 and roots[0]["kind"] == "Q" and len(roots[0]["children"][0]["children"]) == 2
    assert run("arena", "--format", "dot", "1")[1].startswith("digraph")


def test_extract(tmp_path):
    code, text = run("extract", "--example", "involution")
    assert code == EXIT_YES and text.strip()
    phi = tmp_path / "phi.json"
    phi.write_text(json.dumps({"source": "var[1]", "target": "(1 + 1) -> 1"}))
    code, text = run("extract", "--along", str(phi))
    assert code == EXIT_YES and text.rstrip().endswith("round trip: equal")


def test_extract_along_explicit_morphism(tmp_path):
    swap = [[["q"], ["q"]], [["q", "a0"], ["q", "a1"]], [["q", "a1"], ["q", "a0"]]]
    phi = tmp_path / "phi.json"
    phi.write_text(json.dumps({"source": "bool", "target": "bool", "morphism": swap}))
    code, text = run("extract", "--along", str(phi))
    assert code == EXIT_YES and "q a0  ->  q a1" in text
    phi.write_text(json.dumps({"source": "bool", "target": "bool", "morphism": swap[:2]}))
    assert run("extract", "--along", str(phi))[0] == EXIT_ERROR
