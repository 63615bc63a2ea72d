"""First-order terms, literals and clauses.

Terms are immutable and hash-consed per Problem, so identity comparison
is cheap and copies of a clause can share all ground structure.  A
variable belongs to exactly one clause; fresh clause copies rename only
the variables.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field


class ArityMismatch(Exception):
    """Same symbol used with two different argument counts."""


@dataclass(frozen=True)
class Var:
    name: str
    clause: str
    copy: int
    index: int  # position in the owning clause's variable list

    def __repr__(self):
        return f"{self.name}@{self.clause}.{self.copy}"


@dataclass(frozen=True)
class App:
    """Function application; constants have no args."""

    functor: str
    args: tuple

    def __repr__(self):
        if not self.args:
            return self.functor
        return f"{self.functor}({','.join(map(repr, self.args))})"


@dataclass(frozen=True)
class Literal:
    predicate: str
    args: tuple
    negated: bool

    def __repr__(self):
        sign = "~" if self.negated else ""
        if not self.args:
            return f"{sign}{self.predicate}"
        return f"{sign}{self.predicate}({','.join(map(repr, self.args))})"

    def complement_key(self):
        return (self.predicate, len(self.args), not self.negated)

    def key(self):
        return (self.predicate, len(self.args), self.negated)


@dataclass
class Clause:
    name: str
    role: str  # "axiom" or "conjecture"
    literals: list
    variables: list  # Var objects with copy == 0, in first-occurrence order

    def __repr__(self):
        return f"{self.name}: {' | '.join(map(repr, self.literals))}"

    def is_ground(self):
        return not self.variables


def term_vars(term, acc=None):
    if acc is None:
        acc = []
    if isinstance(term, Var):
        if term not in acc:
            acc.append(term)
    else:
        for a in term.args:
            term_vars(a, acc)
    return acc


def rename_term(term, mapping):
    if isinstance(term, Var):
        return mapping.get(term, term)
    if not term.args:
        return term
    return App(term.functor, tuple(rename_term(a, mapping) for a in term.args))


def rename_literal(lit, mapping):
    if not lit.args:
        return lit
    return Literal(lit.predicate, tuple(rename_term(a, mapping) for a in lit.args), lit.negated)


@dataclass
class ClauseCopy:
    """A clause instance with variables renamed apart by copy index."""

    clause: Clause
    copy: int
    literals: list
    variables: list

    def __repr__(self):
        return f"{self.clause.name}.{self.copy}"


def make_copy(clause, copy_index):
    mapping = {v: Var(v.name, v.clause, copy_index, v.index) for v in clause.variables}
    lits = [rename_literal(l, mapping) for l in clause.literals]
    return ClauseCopy(clause, copy_index, lits, [mapping[v] for v in clause.variables])


class Problem:
    """A clause set with symbol tables shared by all terms."""

    def __init__(self):
        self.clauses = []
        self.by_name = {}
        self.functions = {}  # functor -> arity
        self.predicates = {}  # predicate -> arity
        self.symbol_order = {}  # symbol -> insertion index, for term ordering
        self.empty_clause = None  # name of an input clause that became empty
        self._symbol_counter = itertools.count()

    def intern_function(self, name, arity):
        old = self.functions.get(name)
        if old is None:
            self.functions[name] = arity
            self.symbol_order.setdefault(name, next(self._symbol_counter))
        elif old != arity:
            raise ArityMismatch(f"function {name} used with arity {old} and {arity}")

    def intern_predicate(self, name, arity):
        old = self.predicates.get(name)
        if old is None:
            self.predicates[name] = arity
            self.symbol_order.setdefault(("pred", name), next(self._symbol_counter))
        elif old != arity:
            raise ArityMismatch(f"predicate {name} used with arity {old} and {arity}")

    def add_clause(self, clause):
        if clause.name in self.by_name:
            raise ValueError(f"duplicate clause name {clause.name}")
        self.clauses.append(clause)
        self.by_name[clause.name] = clause

    def start_clauses(self, start_mode):
        """Clauses eligible to start a proof.

        With start_mode "conjecture" these are the conjecture clauses,
        falling back to all clauses when the problem has none.
        """
        if start_mode == "conjecture":
            picked = [c for c in self.clauses if c.role == "conjecture"]
            if picked:
                return picked
        return list(self.clauses)


EQUAL = 0
GREATER = 1
LESS = 2
INCOMPARABLE = 3


def compare_terms(s, t, symbol_order):
    """Total on ground terms, partial otherwise.

    Symbols compare by first-appearance order in the input; a variable
    compares equal only to itself and is otherwise incomparable.  The
    result is stable under substitution except that INCOMPARABLE may
    collapse to any outcome.
    """
    if isinstance(s, Var) or isinstance(t, Var):
        if s is t or s == t:
            return EQUAL
        return INCOMPARABLE
    if s.functor != t.functor:
        a, b = symbol_order[s.functor], symbol_order[t.functor]
        # distinct functors never become equal under substitution
        return GREATER if a > b else LESS
    for sa, ta in zip(s.args, t.args):
        c = compare_terms(sa, ta, symbol_order)
        if c != EQUAL:
            return c
    return EQUAL
