"""cnf-format reader."""

import pytest

from connsat.terms import ArityMismatch, Var
from connsat.tptp import ParseError, parse_file, parse_text


def test_basic_clause():
    p = parse_text("cnf(c1, axiom, p(X) | ~q(f(X), a)).")
    c = p.by_name["c1"]
    assert c.role == "axiom"
    assert [repr(l) for l in c.literals] == ["p(X@c1.0)", "~q(f(X@c1.0),a)"]
    assert p.functions == {"f": 1, "a": 0}
    assert p.predicates == {"p": 1, "q": 2}


def test_variables_scoped_per_clause():
    p = parse_text(
        """
        cnf(c1, axiom, p(X)).
        cnf(c2, axiom, ~p(X)).
        """
    )
    v1 = p.by_name["c1"].literals[0].args[0]
    v2 = p.by_name["c2"].literals[0].args[0]
    assert isinstance(v1, Var) and isinstance(v2, Var)
    assert v1 != v2
    assert v1.clause == "c1" and v2.clause == "c2"


def test_repeated_variable_is_shared():
    p = parse_text("cnf(c, axiom, q(X, X)).")
    args = p.by_name["c"].literals[0].args
    assert args[0] is args[1]
    assert len(p.by_name["c"].variables) == 1


def test_roles_map_to_axiom_or_conjecture():
    p = parse_text(
        """
        cnf(a1, hypothesis, p(a)).
        cnf(a2, negated_conjecture, ~p(a)).
        """
    )
    assert p.by_name["a1"].role == "axiom"
    assert p.by_name["a2"].role == "conjecture"


def test_comments_and_extra_parens():
    p = parse_text(
        """
        % line comment
        /* block
           comment */
        cnf(c, axiom, ( p(a) | q(b) )).
        """
    )
    assert len(p.by_name["c"].literals) == 2


def test_double_negation_cancels():
    p = parse_text("cnf(c, axiom, ~~p(a)).")
    assert not p.by_name["c"].literals[0].negated


def test_equality_infix():
    p = parse_text("cnf(c, axiom, X = a | f(X) != b).")
    lits = p.by_name["c"].literals
    assert lits[0].predicate == "=" and not lits[0].negated
    assert lits[1].predicate == "=" and lits[1].negated
    assert p.predicates["="] == 2


def test_quoted_atoms():
    p = parse_text("cnf(c, axiom, p('some atom')).")
    assert p.by_name["c"].literals[0].args[0].functor == "'some atom'"


def test_dollar_false_drops_out():
    p = parse_text("cnf(c, axiom, p(a) | $false).")
    assert len(p.by_name["c"].literals) == 1


def test_all_false_clause_records_empty_input():
    p = parse_text("cnf(c, axiom, $false).")
    assert p.empty_clause == "c"
    assert p.clauses == []


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as e:
        parse_text("cnf(c, axiom, p(a)]).")
    assert "line 1" in str(e.value)
    with pytest.raises(ParseError):
        parse_text("cnf(c, axiom, p(a))")  # missing dot
    with pytest.raises(ParseError):
        parse_text("cnf(c, bad_role, p(a)).")
    with pytest.raises(ParseError):
        parse_text("cnf(c, axiom, X).")  # variable as atom


def test_fof_is_rejected_with_hint():
    with pytest.raises(ParseError) as e:
        parse_text("fof(c, axiom, p(a)).")
    assert "clausify" in str(e.value)


def test_arity_mismatch_detected():
    with pytest.raises(ArityMismatch):
        parse_text("cnf(c, axiom, p(a) | p(a, b)).")


def test_symbol_reinterpreted_as_predicate():
    # p parses as a term application first, then gets reclassified when
    # it shows up in literal position
    p = parse_text("cnf(c, axiom, p(a)).")
    assert "p" in p.predicates and "p" not in p.functions


def test_include_resolution(tmp_path):
    (tmp_path / "ax.p").write_text("cnf(ax, axiom, p(a)).\n")
    main = tmp_path / "main.p"
    main.write_text("include('ax.p').\ncnf(goal, negated_conjecture, ~p(a)).\n")
    p = parse_file(str(main))
    assert set(p.by_name) == {"ax", "goal"}


def test_include_missing_file_errors(tmp_path):
    main = tmp_path / "main.p"
    main.write_text("include('nope.p').\n")
    with pytest.raises(ParseError):
        parse_file(str(main))


def test_tptp_root_fallback(tmp_path):
    root = tmp_path / "root"
    (root / "Axioms").mkdir(parents=True)
    (root / "Axioms" / "eq.ax").write_text("cnf(ax, axiom, p(a)).\n")
    main = tmp_path / "main.p"
    main.write_text("include('Axioms/eq.ax').\ncnf(goal, negated_conjecture, ~p(a)).\n")
    p = parse_file(str(main), tptp_root=str(root))
    assert "ax" in p.by_name
