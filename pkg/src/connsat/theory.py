"""Glue between the SAT core and the substitution store.

ConnectionSystem runs term-level side effects of Boolean assignments:
a positive connection atom unifies its two literals, a positive guard
atom asserts a disequality. Failures become clauses over the tags
(SAT literals) the store blames. All effects are undone in lockstep
with the solver trail.

DecisionSteer remembers propagated disjunctions and suggests decision
variables from the oldest one still undecided, keeping search close
to an orthodox proof enumeration. Suggested literals carry the
default false phase; conflict analysis flips whichever option is
actually forced.
"""

from __future__ import annotations

from .sat import FALSE, TRUE, UNDEF
from .unify import UnifyError


class ConnectionSystem:
    def __init__(self, store):
        self.store = store
        self.actions = {}  # sat var -> list of (kind, args_a, args_b)
        self.stack = []  # (trail index, store mark)

    def watch_connect(self, var, args_a, args_b):
        self.actions.setdefault(var, []).append(("connect", args_a, args_b))

    def watch_diseq(self, var, args_a, args_b):
        self.actions.setdefault(var, []).append(("diseq", args_a, args_b))

    def apply(self, solver, lit, index):
        """Run the store effects of a newly true literal, if any.

        Returns False after injecting a conflict clause; the caller
        must let the solver pick the clause up before continuing.
        """
        if lit & 1:
            return True
        acts = self.actions.get(lit >> 1)
        if not acts:
            return True
        mark = self.store.mark()
        try:
            for kind, args_a, args_b in acts:
                if kind == "connect":
                    self.store.unify_tuples(args_a, args_b, lit)
                else:
                    self.store.assert_diseq(args_a, args_b, lit)
        except UnifyError as e:
            self.store.retract_to(mark)
            solver.add_clause([tag ^ 1 for tag in e.tags])
            return False
        self.stack.append((index, mark))
        return True

    def on_backtrack(self, trail_len):
        mark = None
        while self.stack and self.stack[-1][0] >= trail_len:
            _, mark = self.stack.pop()
        if mark is not None:
            self.store.retract_to(mark)


class DecisionSteer:
    """Oldest-first decision suggestions from tracked disjunctions.

    Entries are never dropped on backtrack: an entry whose antecedents
    lost their assignment is simply inert until they hold again.
    """

    def __init__(self):
        self.entries = []  # (antecedent lits, disjunct conjunction lists)

    def track(self, antecedents, disjuncts):
        self.entries.append((list(antecedents), [list(d) for d in disjuncts]))

    def clear(self):
        self.entries = []

    def suggest(self, solver):
        for antecedents, disjuncts in self.entries:
            if any(solver.lit_value(a) != TRUE for a in antecedents):
                continue
            fallback = None
            satisfied = False
            for conj in disjuncts:
                values = [solver.lit_value(l) for l in conj]
                if all(v == TRUE for v in values):
                    satisfied = True
                    break
                if FALSE in values:
                    continue
                if fallback is None:
                    for l, v in zip(conj, values):
                        if v == UNDEF:
                            fallback = l
                            break
            if satisfied or fallback is None:
                continue
            v = fallback >> 1
            if solver.user_phase.get(v, False):
                return v << 1
            return v << 1 | 1
        return None
