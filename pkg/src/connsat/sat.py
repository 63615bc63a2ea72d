"""CDCL SAT solver with assumption cores and theory callbacks.

Literals are ints: var << 1 for positive, var << 1 | 1 for negated.
The embedding hooks a theory object into the search:

  on_assign(solver, lit)   called once per trail literal, in order
  on_backtrack(trail_len)  undo work tied to removed trail entries
  on_decide(solver)        may suggest the next decision literal
  on_final(solver)         full-model check; False must inject clauses

Theory code adds clauses mid-search through add_clause; they are
queued and integrated with watches chosen so that current-assignment
units and conflicts are handled immediately.
"""

from __future__ import annotations

import heapq


TRUE = 1
FALSE = 0
UNDEF = 2


def pos(v):
    return v << 1


def neg(v):
    return v << 1 | 1


def var_of(lit):
    return lit >> 1


class SolveTimeout(Exception):
    pass


def luby(i):
    """Restart multiplier sequence 1,1,2,1,1,2,4,... (0-indexed)."""
    size, seq = 1, 0
    while size < i + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != i:
        size = (size - 1) >> 1
        seq -= 1
        i = i % size
    return 1 << seq


class Solver:
    restart_base = 100
    var_decay = 0.95

    def __init__(self):
        self.values = []
        self.levels = []
        self.reasons = []
        self.activity = []
        self.trail = []
        self.trail_lim = []
        self.qhead = 0
        self.theory = None
        self.theory_head = 0
        self.watches = {}
        self.pending = []
        self.export_clauses = []
        self.learnts = 0
        self.user_phase = {}
        self.heap = []
        self.var_inc = 1.0
        self.def_cache = {}
        self.ok = True
        self.stop_check = None
        self.stats = {"conflicts": 0, "decisions": 0, "propagations": 0, "restarts": 0}

    # ----- variables and values -----

    def new_var(self):
        v = len(self.values)
        self.values.append(UNDEF)
        self.levels.append(0)
        self.reasons.append(None)
        self.activity.append(0.0)
        self.watches[pos(v)] = []
        self.watches[neg(v)] = []
        heapq.heappush(self.heap, (0.0, v))
        return v

    def lit_value(self, lit):
        vv = self.values[lit >> 1]
        return vv if vv == UNDEF else vv ^ (lit & 1)

    def set_phase(self, v, value):
        self.user_phase[v] = value

    def decision_level(self):
        return len(self.trail_lim)

    # ----- clause intake -----

    def add_clause(self, lits):
        """Queue a clause; it takes effect at the next propagation pass."""
        self.export_clauses.append(tuple(lits))
        self.pending.append(list(lits))

    def propagate_constraint(self, antecedents, disjuncts):
        """Add clause antecedents -> d1 | d2 | ..., each di a conjunction
        of literals, reified through cached definition variables."""
        clause = [a ^ 1 for a in antecedents]
        for conj in disjuncts:
            if len(conj) == 1:
                clause.append(conj[0])
            else:
                clause.append(self._defvar(conj))
        self.add_clause(clause)

    def _defvar(self, conj):
        key = frozenset(conj)
        d = self.def_cache.get(key)
        if d is not None:
            return d
        v = self.new_var()
        d = pos(v)
        for l in conj:
            self.add_clause([d ^ 1, l])
        self.add_clause([d] + [l ^ 1 for l in conj])
        self.def_cache[key] = d
        return d

    def add_exactly(self, lits, k):
        """Sequential counter forcing exactly k of lits to be true."""
        n = len(lits)
        if k > n:
            self.add_clause([])
            return
        if k == 0:
            for l in lits:
                self.add_clause([l ^ 1])
            return
        width = min(n, k + 1)
        # r[i][j] (1-based) means: at least j of the first i literals hold
        r = [[None] * (width + 1) for _ in range(n + 1)]
        for i in range(1, n + 1):
            x = lits[i - 1]
            for j in range(1, min(i, width) + 1):
                rij = pos(self.new_var())
                r[i][j] = rij
                prev_same = r[i - 1][j] if j <= i - 1 else None
                prev_less = r[i - 1][j - 1] if j - 1 >= 1 else None
                if prev_same is not None:
                    self.add_clause([prev_same ^ 1, rij])
                if j == 1:
                    self.add_clause([x ^ 1, rij])
                elif prev_less is not None:
                    self.add_clause([x ^ 1, prev_less ^ 1, rij])
                back = [rij ^ 1]
                if prev_same is not None:
                    back.append(prev_same)
                self.add_clause(back + [x])
                if j > 1:
                    alt = [rij ^ 1]
                    if prev_same is not None:
                        alt.append(prev_same)
                    if prev_less is not None:
                        alt.append(prev_less)
                    self.add_clause(alt)
        self.add_clause([r[n][k]])
        if k + 1 <= width and r[n][k + 1] is not None:
            self.add_clause([r[n][k + 1] ^ 1])

    # ----- assignment -----

    def enqueue(self, lit, reason):
        v = lit >> 1
        self.values[v] = (lit & 1) ^ 1
        self.levels[v] = self.decision_level()
        self.reasons[v] = reason
        self.trail.append(lit)

    def cancel_until(self, level):
        if self.decision_level() <= level:
            return
        bound = self.trail_lim[level]
        for i in range(len(self.trail) - 1, bound - 1, -1):
            v = self.trail[i] >> 1
            self.values[v] = UNDEF
            self.reasons[v] = None
            heapq.heappush(self.heap, (-self.activity[v], v))
        del self.trail[bound:]
        del self.trail_lim[level:]
        self.qhead = len(self.trail)
        if self.theory_head > len(self.trail):
            self.theory_head = len(self.trail)
            self.theory.on_backtrack(len(self.trail))

    # ----- propagation -----

    def propagate(self):
        while self.qhead < len(self.trail):
            p = self.trail[self.qhead]
            self.qhead += 1
            self.stats["propagations"] += 1
            falsified = p ^ 1
            ws = self.watches[falsified]
            kept = []
            i = 0
            while i < len(ws):
                clause = ws[i]
                i += 1
                if clause[0] == falsified:
                    clause[0], clause[1] = clause[1], clause[0]
                first = clause[0]
                if self.lit_value(first) == TRUE:
                    kept.append(clause)
                    continue
                for k in range(2, len(clause)):
                    if self.lit_value(clause[k]) != FALSE:
                        clause[1], clause[k] = clause[k], clause[1]
                        self.watches[clause[1]].append(clause)
                        break
                else:
                    kept.append(clause)
                    if self.lit_value(first) == FALSE:
                        kept.extend(ws[i:])
                        self.watches[falsified] = kept
                        self.qhead = len(self.trail)
                        return clause
                    self.enqueue(first, clause)
            self.watches[falsified] = kept
        return None

    def _attach(self, clause):
        self.watches[clause[0]].append(clause)
        self.watches[clause[1]].append(clause)

    def _integrate(self, lits):
        """Install a queued clause under the current assignment.

        Returns None, or a falsified clause to conflict-analyze, or the
        empty list when the clause is empty at root level.
        """
        out = []
        seen = set()
        for l in lits:
            if l in seen:
                continue
            if l ^ 1 in seen:
                return None  # tautology
            val = self.lit_value(l)
            lev = self.levels[l >> 1]
            if val == FALSE and lev == 0:
                continue
            if val == TRUE and lev == 0:
                return None  # satisfied for good
            seen.add(l)
            out.append(l)
        if not out:
            self.ok = False
            return []

        def rank(l):
            # satisfied first (lowest level preferred), then unassigned,
            # then falsified from the highest level down
            val = self.lit_value(l)
            if val == TRUE:
                return (2, -self.levels[l >> 1])
            if val == UNDEF:
                return (1, 0)
            return (0, self.levels[l >> 1])

        out.sort(key=rank, reverse=True)
        if len(out) == 1:
            # root-level units: any assignment above the root is undone
            # first, so a currently-false literal is not a contradiction
            self.cancel_until(0)
            self.enqueue(out[0], None)
            return None
        self._attach(out)
        v0, v1 = self.lit_value(out[0]), self.lit_value(out[1])
        if v1 != FALSE or v0 == TRUE:
            return None
        if v0 == UNDEF:
            self.enqueue(out[0], out)
            return None
        # fully falsified: back up to where it first became false
        lvl = self.levels[out[0] >> 1]
        if lvl == 0:
            self.cancel_until(0)
            self.ok = False
            return []
        self.cancel_until(lvl)
        return out

    def _propagate_all(self):
        while True:
            confl = self.propagate()
            if confl is not None:
                return confl
            if self.pending:
                lits = self.pending.pop(0)
                confl = self._integrate(lits)
                if confl is not None:
                    return confl
                continue
            if self.theory is not None and self.theory_head < len(self.trail):
                lit = self.trail[self.theory_head]
                self.theory_head += 1
                self.theory.on_assign(self, lit)
                continue
            return None

    # ----- conflict analysis -----

    def _bump(self, v):
        self.activity[v] += self.var_inc
        if self.activity[v] > 1e100:
            for i in range(len(self.activity)):
                self.activity[i] *= 1e-100
            self.var_inc *= 1e-100
            # every queued entry is stale now, rebuild
            self.heap = [
                (-self.activity[i], i) for i in range(len(self.values)) if self.values[i] == UNDEF
            ]
            heapq.heapify(self.heap)
        heapq.heappush(self.heap, (-self.activity[v], v))

    def analyze(self, confl):
        learnt = [None]
        seen = set()
        counter = 0
        p = None
        idx = len(self.trail) - 1
        while True:
            start = 0 if p is None else 1
            for q in confl[start:]:
                v = q >> 1
                if v not in seen and self.levels[v] > 0:
                    seen.add(v)
                    self._bump(v)
                    if self.levels[v] >= self.decision_level():
                        counter += 1
                    else:
                        learnt.append(q)
            while self.trail[idx] >> 1 not in seen:
                idx -= 1
            p = self.trail[idx]
            seen.discard(p >> 1)
            idx -= 1
            counter -= 1
            if counter == 0:
                break
            confl = self.reasons[p >> 1]
        learnt[0] = p ^ 1
        if len(learnt) == 1:
            return learnt, 0
        mi = max(range(1, len(learnt)), key=lambda i: self.levels[learnt[i] >> 1])
        learnt[1], learnt[mi] = learnt[mi], learnt[1]
        return learnt, self.levels[learnt[1] >> 1]

    def analyze_final(self, a):
        """Subset of the assumptions responsible for forcing ~a."""
        core = [a]
        if self.decision_level() == 0:
            return core
        seen = {a >> 1}
        for i in range(len(self.trail) - 1, self.trail_lim[0] - 1, -1):
            lit = self.trail[i]
            v = lit >> 1
            if v not in seen:
                continue
            reason = self.reasons[v]
            if reason is None:
                if lit not in core:
                    core.append(lit)
            else:
                for q in reason[1:]:
                    if self.levels[q >> 1] > 0:
                        seen.add(q >> 1)
            seen.discard(v)
        return core

    # ----- search -----

    def _pick_branch(self):
        if self.theory is not None:
            lit = self.theory.on_decide(self)
            if lit is not None and self.lit_value(lit) == UNDEF:
                return lit
        while self.heap:
            negact, v = heapq.heappop(self.heap)
            if self.values[v] == UNDEF and -negact == self.activity[v]:
                if self.user_phase.get(v, False):
                    return pos(v)
                return neg(v)
        return None

    def _search(self, budget, assumptions):
        conflicts = 0
        while True:
            confl = self._propagate_all()
            if confl is not None:
                if not self.ok:
                    return False, []
                self.stats["conflicts"] += 1
                conflicts += 1
                if self.stop_check is not None and self.stop_check():
                    raise SolveTimeout()
                if self.decision_level() == 0:
                    self.ok = False
                    return False, []
                learnt, bt = self.analyze(confl)
                self.cancel_until(bt)
                if len(learnt) == 1:
                    self.enqueue(learnt[0], None)
                else:
                    self._attach(learnt)
                    self.learnts += 1
                    self.enqueue(learnt[0], learnt)
                self.var_inc /= self.var_decay
                continue
            if conflicts >= budget:
                self.stats["restarts"] += 1
                self.cancel_until(0)
                return None
            next_lit = None
            while self.decision_level() < len(assumptions):
                a = assumptions[self.decision_level()]
                val = self.lit_value(a)
                if val == TRUE:
                    self.trail_lim.append(len(self.trail))
                elif val == FALSE:
                    return False, self.analyze_final(a)
                else:
                    next_lit = a
                    break
            if next_lit is None:
                next_lit = self._pick_branch()
            if next_lit is None:
                if len(self.trail) == len(self.values):
                    before = (len(self.pending), len(self.values))
                    if self.theory is None or self.theory.on_final(self):
                        return True, [v == TRUE for v in self.values]
                    if before == (len(self.pending), len(self.values)):
                        raise RuntimeError("model rejected without new constraints")
                    continue
                # heap went empty while vars remain unassigned; rare but
                # possible right after an activity rescale
                for v in range(len(self.values)):
                    if self.values[v] == UNDEF:
                        next_lit = pos(v) if self.user_phase.get(v, False) else neg(v)
                        break
            self.stats["decisions"] += 1
            if self.stop_check is not None and self.stop_check():
                raise SolveTimeout()
            self.trail_lim.append(len(self.trail))
            self.enqueue(next_lit, None)

    def solve(self, assumptions=()):
        """Returns (True, model) or (False, failed_assumption_core)."""
        assumptions = list(assumptions)
        restarts = 0
        try:
            while True:
                if not self.ok:
                    return False, []
                result = self._search(self.restart_base * luby(restarts), assumptions)
                restarts += 1
                if result is not None:
                    return result
        finally:
            if self.ok:
                self.cancel_until(0)

    # ----- inspection -----

    def to_dimacs(self):
        lines = [f"p cnf {len(self.values)} {len(self.export_clauses)}"]
        for clause in self.export_clauses:
            parts = []
            for l in clause:
                v = (l >> 1) + 1
                parts.append(str(-v if l & 1 else v))
            parts.append("0")
            lines.append(" ".join(parts))
        return "\n".join(lines) + "\n"
