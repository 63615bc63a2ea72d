"""Reader for clausal (cnf) problem files in TPTP syntax.

Supports cnf statements, include directives, %-comments and /* */
block comments, single-quoted atoms, and infix =/!=.  fof/tff inputs
are rejected; only the clausal fragment is handled.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass

from .terms import App, Clause, Literal, Problem, Var


class ParseError(Exception):
    def __init__(self, message, line=None, col=None):
        if line is not None:
            message = f"line {line}:{col}: {message}"
        super().__init__(message)
        self.line = line
        self.col = col


TOKEN_RE = re.compile(
    r"""
    (?P<comment>%[^\n]*|/\*.*?\*/)
  | (?P<lparen>\()
  | (?P<rparen>\))
  | (?P<lbrack>\[)
  | (?P<rbrack>\])
  | (?P<comma>,)
  | (?P<dot>\.)
  | (?P<pipe>\|)
  | (?P<neq>!=)
  | (?P<eq>=)
  | (?P<neg>~)
  | (?P<dollar>\$[a-z][a-zA-Z0-9_]*)
  | (?P<upper>[A-Z][a-zA-Z0-9_]*)
  | (?P<lower>[a-z][a-zA-Z0-9_]*)
  | (?P<number>\d+)
  | (?P<quoted>'(?:[^'\\]|\\.)*')
  | (?P<space>\s+)
    """,
    re.VERBOSE | re.DOTALL,
)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text):
    tokens = []
    pos = 0
    line = 1
    line_start = 0
    while pos < len(text):
        m = TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"bad character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        tok = m.group()
        if kind not in ("space", "comment"):
            tokens.append(Token(kind, tok, line, pos - line_start + 1))
        newlines = tok.count("\n")
        if newlines:
            line += newlines
            line_start = pos + tok.rindex("\n") + 1
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        if self.pos < len(self.tokens):
            return self.tokens[self.pos]
        return None

    def next(self):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input")
        self.pos += 1
        return tok

    def expect(self, kind):
        tok = self.next()
        if tok.kind != kind:
            raise ParseError(f"expected {kind}, got {tok.text!r}", tok.line, tok.col)
        return tok

    def at_end(self):
        return self.pos >= len(self.tokens)


ROLE_MAP = {
    "axiom": "axiom",
    "hypothesis": "axiom",
    "definition": "axiom",
    "lemma": "axiom",
    "negated_conjecture": "conjecture",
    "conjecture": "conjecture",
}


class _ClauseBuilder:
    """Tracks variables of the clause being parsed, in first use order."""

    def __init__(self, problem, clause_name):
        self.problem = problem
        self.clause_name = clause_name
        self.vars = {}

    def var(self, name):
        v = self.vars.get(name)
        if v is None:
            v = Var(name, self.clause_name, 0, len(self.vars))
            self.vars[name] = v
        return v


def _parse_term(p, builder):
    tok = p.next()
    if tok.kind == "upper":
        return builder.var(tok.text)
    if tok.kind in ("lower", "quoted", "number"):
        name = tok.text
        args = ()
        nxt = p.peek()
        if nxt is not None and nxt.kind == "lparen":
            p.next()
            arglist = [_parse_term(p, builder)]
            while p.peek() and p.peek().kind == "comma":
                p.next()
                arglist.append(_parse_term(p, builder))
            p.expect("rparen")
            args = tuple(arglist)
        builder.problem.intern_function(name, len(args))
        return App(name, args)
    raise ParseError(f"expected a term, got {tok.text!r}", tok.line, tok.col)


def _parse_literal(p, builder):
    negated = False
    while p.peek() and p.peek().kind == "neg":
        p.next()
        negated = not negated
    tok = p.peek()
    if tok is None:
        raise ParseError("unexpected end of input")
    if tok.kind == "dollar":
        p.next()
        if tok.text == "$false":
            # a $false disjunct contributes nothing
            return None if not negated else ("$true", tok)
        if tok.text == "$true":
            return ("$true", tok) if not negated else None
        raise ParseError(f"unsupported defined symbol {tok.text}", tok.line, tok.col)
    term = _parse_term(p, builder)
    nxt = p.peek()
    if nxt is not None and nxt.kind in ("eq", "neq"):
        p.next()
        rhs = _parse_term(p, builder)
        if nxt.kind == "neq":
            negated = not negated
        builder.problem.intern_predicate("=", 2)
        return Literal("=", (term, rhs), negated)
    if isinstance(term, Var):
        raise ParseError("a variable cannot be an atom", tok.line, tok.col)
    # reinterpret the parsed application as a predicate
    builder.problem.functions.pop(term.functor, None)
    builder.problem.intern_predicate(term.functor, len(term.args))
    return Literal(term.functor, term.args, negated)


def _parse_cnf(p, problem):
    p.expect("lparen")
    name_tok = p.next()
    if name_tok.kind not in ("lower", "quoted", "number", "upper"):
        raise ParseError(f"bad clause name {name_tok.text!r}", name_tok.line, name_tok.col)
    name = name_tok.text.strip("'")
    p.expect("comma")
    role_tok = p.next()
    role = ROLE_MAP.get(role_tok.text)
    if role is None:
        raise ParseError(f"unsupported role {role_tok.text!r}", role_tok.line, role_tok.col)
    p.expect("comma")
    parens = 0
    while p.peek() and p.peek().kind == "lparen":
        p.next()
        parens += 1
    builder = _ClauseBuilder(problem, name)
    literals = []
    while True:
        lit = _parse_literal(p, builder)
        if isinstance(lit, tuple):
            raise ParseError("$true literals are not supported", lit[1].line, lit[1].col)
        if lit is not None:
            literals.append(lit)
        nxt = p.peek()
        if nxt is not None and nxt.kind == "pipe":
            p.next()
            continue
        break
    for _ in range(parens):
        p.expect("rparen")
    p.expect("rparen")
    p.expect("dot")
    clause = Clause(name, role, literals, list(builder.vars.values()))
    if not literals:
        # an input clause that is already empty (all $false)
        if problem.empty_clause is None:
            problem.empty_clause = name
        return
    problem.add_clause(clause)


def _parse_include(p):
    p.expect("lparen")
    tok = p.expect("quoted")
    p.expect("rparen")
    p.expect("dot")
    return tok.text.strip("'")


def parse_text(text, problem=None, include_dirs=()):
    if problem is None:
        problem = Problem()
    p = _Parser(tokenize(text))
    while not p.at_end():
        tok = p.next()
        if tok.kind == "lower" and tok.text == "cnf":
            _parse_cnf(p, problem)
        elif tok.kind == "lower" and tok.text == "include":
            path = _parse_include(p)
            resolved = None
            for d in include_dirs:
                cand = os.path.join(d, path)
                if os.path.exists(cand):
                    resolved = cand
                    break
            if resolved is None:
                raise ParseError(f"cannot resolve include {path!r}", tok.line, tok.col)
            with open(resolved) as f:
                parse_text(f.read(), problem, include_dirs)
        elif tok.kind == "lower" and tok.text in ("fof", "tff", "thf", "tcf"):
            raise ParseError(
                f"{tok.text} inputs are not supported, clausify first", tok.line, tok.col
            )
        else:
            raise ParseError(f"expected cnf or include, got {tok.text!r}", tok.line, tok.col)
    return problem


def parse_file(path, tptp_root=None):
    dirs = [os.path.dirname(os.path.abspath(path))]
    if tptp_root:
        dirs.append(tptp_root)
    with open(path) as f:
        return parse_text(f.read(), include_dirs=dirs)
