"""Backtrackable unification with tagged explanations.

The store keeps one global substitution built from unify calls that
each carry a caller-supplied tag.  On failure it reports which tags
the clash depends on, so the caller can turn the failure into a clause
over its own propositional variables.  retract_to(mark) undoes
bindings and disequality guards past the mark.
"""

from __future__ import annotations

from dataclasses import dataclass

from .terms import App, Var


class UnifyError(Exception):
    """Internal signal carrying the tags a failure depends on."""

    def __init__(self, tags):
        super().__init__("unification failed")
        self.tags = tags


@dataclass(frozen=True)
class Mark:
    trail: int
    diseq: int


class SubstitutionStore:
    def __init__(self):
        self.bindings = {}  # Var -> term
        self.reasons = {}  # Var -> tag
        self.trail = []  # bound Vars in order
        self.diseqs = []  # (args_a, args_b, tag) guards: args_a != args_b
        self._touched = {}  # insertion-ordered set of Vars walked over

    def mark(self):
        return Mark(len(self.trail), len(self.diseqs))

    def retract_to(self, mark):
        while len(self.trail) > mark.trail:
            v = self.trail.pop()
            del self.bindings[v]
            del self.reasons[v]
        del self.diseqs[mark.diseq:]

    def walk(self, term):
        """Follow bindings from a variable to its current representative."""
        while isinstance(term, Var):
            nxt = self.bindings.get(term)
            if nxt is None:
                return term
            self._touched[term] = None
            term = nxt
        return term

    def resolve(self, term):
        """Fully apply the current substitution to a term."""
        term = self.walk(term)
        if isinstance(term, Var) or not term.args:
            return term
        return App(term.functor, tuple(self.resolve(a) for a in term.args))

    def _occurs(self, var, term):
        term = self.walk(term)
        if isinstance(term, Var):
            return term is var or term == var
        return any(self._occurs(var, a) for a in term.args)

    def _bind(self, var, term, tag):
        self.bindings[var] = term
        self.reasons[var] = tag
        self.trail.append(var)
        self._check_diseqs()

    def _explain(self, tag):
        tags = []
        for v in self._touched:
            r = self.reasons.get(v)
            if r is not None and r not in tags:
                tags.append(r)
        if tag not in tags:
            tags.append(tag)
        return tags

    def _unify(self, s, t, tag):
        s = self.walk(s)
        t = self.walk(t)
        if s is t or s == t:
            return
        if isinstance(s, Var):
            if self._occurs(s, t):
                raise UnifyError(self._explain(tag))
            # bind to the unwalked term so chains record every influence
            self._bind(s, t, tag)
            return
        if isinstance(t, Var):
            if self._occurs(t, s):
                raise UnifyError(self._explain(tag))
            self._bind(t, s, tag)
            return
        if s.functor != t.functor or len(s.args) != len(t.args):
            raise UnifyError(self._explain(tag))
        for sa, ta in zip(s.args, t.args):
            self._unify(sa, ta, tag)

    def _check_diseqs(self):
        for args_a, args_b, tag in self.diseqs:
            if all(self.resolve(a) == self.resolve(b) for a, b in zip(args_a, args_b)):
                self._touched.clear()
                for a, b in zip(args_a, args_b):
                    self.walk_all(a)
                    self.walk_all(b)
                raise UnifyError(self._explain(tag))

    def walk_all(self, term):
        term = self.walk(term)
        if isinstance(term, App):
            for a in term.args:
                self.walk_all(a)

    def explain_terms(self, terms):
        """Tags of the bindings consulted when resolving these terms.

        Used to justify judgements made about fully resolved terms,
        e.g. two literals being equal under the current substitution.
        """
        self._touched.clear()
        for t in terms:
            self.walk_all(t)
        tags = []
        for v in self._touched:
            r = self.reasons.get(v)
            if r is not None and r not in tags:
                tags.append(r)
        return tags

    def unify(self, s, t, tag):
        """Unify two terms or raise UnifyError listing responsible tags."""
        self._touched.clear()
        self._unify(s, t, tag)

    def unify_tuples(self, args_a, args_b, tag):
        self._touched.clear()
        for a, b in zip(args_a, args_b):
            self._unify(a, b, tag)

    def assert_diseq(self, args_a, args_b, tag):
        """Require the two argument tuples to stay distinct under the
        substitution; fails immediately if they are already equal."""
        self.diseqs.append((args_a, args_b, tag))
        if all(self.resolve(a) == self.resolve(b) for a, b in zip(args_a, args_b)):
            self._touched.clear()
            for a, b in zip(args_a, args_b):
                self.walk_all(a)
                self.walk_all(b)
            raise UnifyError(self._explain(tag))

    def unifiable(self, s, t):
        """Check without keeping the bindings or raising."""
        m = self.mark()
        try:
            self.unify(s, t, None)
            return True
        except UnifyError:
            return False
        finally:
            self.retract_to(m)


def literals_dual(store, lit_a, lit_b):
    """Would connecting these two literals be consistent right now?"""
    if lit_a.negated == lit_b.negated or lit_a.predicate != lit_b.predicate:
        return False
    if len(lit_a.args) != len(lit_b.args):
        return False
    m = store.mark()
    try:
        store.unify_tuples(lit_a.args, lit_b.args, None)
        return True
    except UnifyError:
        return False
    finally:
        store.retract_to(m)
