"""Term data structures, clause copies, and the term order."""

import pytest

from connsat.terms import (
    EQUAL,
    GREATER,
    INCOMPARABLE,
    LESS,
    App,
    ArityMismatch,
    Clause,
    Literal,
    Problem,
    Var,
    compare_terms,
    make_copy,
    term_vars,
)


def _clause():
    X = Var("X", "c1", 0, 0)
    Y = Var("Y", "c1", 0, 1)
    lits = [
        Literal("p", (X, App("f", (Y,))), False),
        Literal("q", (Y,), True),
    ]
    return Clause("c1", "axiom", lits, [X, Y])


def test_repr_forms():
    c = _clause()
    assert repr(c.literals[0]) == "p(X@c1.0,f(Y@c1.0))"
    assert repr(c.literals[1]) == "~q(Y@c1.0)"


def test_make_copy_renames_apart():
    c = _clause()
    c1 = make_copy(c, 1)
    c2 = make_copy(c, 2)
    assert c1.variables[0] != c2.variables[0]
    assert c1.variables[0].name == c2.variables[0].name == "X"
    # ground parts are shared, variables are not
    assert c1.literals[0].args[1].functor == "f"
    assert term_vars(c1.literals[0].args[1]) == [c1.variables[1]]
    # the original clause is untouched
    assert c.variables[0].copy == 0


def test_copies_of_same_index_are_equal():
    c = _clause()
    assert make_copy(c, 3).literals == make_copy(c, 3).literals


def test_is_ground():
    c = _clause()
    assert not c.is_ground()
    g = Clause("g", "axiom", [Literal("r", (App("a", ()),), False)], [])
    assert g.is_ground()


def test_problem_arity_checks():
    p = Problem()
    p.intern_function("f", 1)
    with pytest.raises(ArityMismatch):
        p.intern_function("f", 2)
    p.intern_predicate("p", 1)
    with pytest.raises(ArityMismatch):
        p.intern_predicate("p", 3)
    # a function and a predicate may share a name
    p.intern_function("p", 2)


def test_duplicate_clause_names_rejected():
    p = Problem()
    p.add_clause(_clause())
    with pytest.raises(ValueError):
        p.add_clause(_clause())


def test_start_clauses_fall_back_to_all():
    p = Problem()
    c = _clause()
    p.add_clause(c)
    assert p.start_clauses("conjecture") == [c]
    assert p.start_clauses("all") == [c]
    q = Problem()
    conj = Clause("c2", "conjecture", [Literal("r", (), False)], [])
    q.add_clause(conj)
    q.add_clause(Clause("c3", "axiom", [Literal("r", (), True)], []))
    assert q.start_clauses("conjecture") == [conj]
    assert len(q.start_clauses("all")) == 2


def test_compare_terms_by_first_appearance():
    order = {"a": 0, "b": 1, "f": 2}
    a, b = App("a", ()), App("b", ())
    assert compare_terms(a, b, order) == LESS
    assert compare_terms(b, a, order) == GREATER
    assert compare_terms(a, a, order) == EQUAL
    fa = App("f", (a,))
    fb = App("f", (b,))
    assert compare_terms(fa, fb, order) == LESS
    X = Var("X", "c", 1, 0)
    assert compare_terms(X, X, order) == EQUAL
    assert compare_terms(X, a, order) == INCOMPARABLE
    assert compare_terms(App("f", (X,)), App("f", (X,)), order) == EQUAL
    assert compare_terms(App("f", (X,)), App("f", (a,)), order) == INCOMPARABLE
