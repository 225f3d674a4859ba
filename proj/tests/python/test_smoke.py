"""Smoke tests for the symcol python module (run under ctest)."""

import sys

import symcol

INTRO = """
role A
role B
init ok, bad, e
msg B -> A : ok . ?x
msg A -> B : h(h(ok . ?x) . ka)
goal forge ?sig = h(h(bad . ?w) . ka)
"""


def test_terms():
    assert symcol.parse("a . (b . c)") == "a . b . c"
    assert symcol.parse("h(eps . a)") == "h(a)"
    assert symcol.normalize("(a . eps) . b") == "a . b"
    assert symcol.eq_au("a . (b . c)", "(a . b) . c")
    assert not symcol.eq_au("a . b", "b . a")
    assert symcol.eq_hash("h(a . f(a,b,c,d) . b)", "h(c . g(a,b,c,d) . d)")
    assert not symcol.eq_hash("h(a)", "h(b)")


def test_subterms():
    values = set(symcol.subterm_values("h(a . b)"))
    assert values == {"h(a . b)", "a", "b"}
    assert set(symcol.factors("h(a . b)")) == {"a", "b"}


def test_derivability():
    r = symcol.derivable(["a . b . c"], "b", system="au")
    assert r["derivable"]
    assert r["derivation"]["goal"] == "b"
    assert not symcol.derivable(["h(a)"], "a", system="h")["derivable"]
    collision = symcol.derivable(["a", "b", "c", "d"], "h(c . g(a,b,c,d) . d)", system="h")
    assert collision["derivable"]


def test_unification():
    sat = symcol.unify_words([("?x . ?y", "a . b")])
    assert sat["verdict"] == "sat"
    unsat = symcol.unify_words([("?x", "a")], restrictions=[("?x", "a")])
    assert unsat["verdict"] == "unsat"


def test_solve():
    sat = symcol.solve([(["a . b"], "?v")], equations=[("?v", "b . a")], theory="au")
    assert sat["verdict"] == "sat"
    assert sat["witness"]["?v"] == "b . a"

    blocked = symcol.solve([(["a"], "?v")], equations=[("?v", "c")], theory="au")
    assert blocked["verdict"] == "unsat"

    hashed = symcol.solve([(["a"], "?v")], equations=[("?v", "h(a)")], theory="h")
    assert hashed["verdict"] == "sat"

    ordered = symcol.solve([(["a . b"], "?v")], equations=[("?v", "b . a")],
                           order=[("?v", "a")], theory="au")
    assert ordered["verdict"] == "unsat"


def test_analyze():
    attack = symcol.analyze(INTRO)
    assert attack["verdict"] == "sat"
    assert attack["attack"] is True
    rules = [s["rule"] for d in attack["trace"] for s in d["steps"]]
    assert "hc" in rules

    safe = symcol.analyze(INTRO, collisions=False)
    assert safe["verdict"] == "unsat"
    assert safe["exhausted"] is True


def main():
    tests = [test_terms, test_subterms, test_derivability, test_unification, test_solve,
             test_analyze]
    for t in tests:
        t()
        print(f"ok {t.__name__}")
    print(f"{len(tests)} smoke tests passed")


if __name__ == "__main__":
    sys.exit(main())
