"""Matrix-style encodings of connection proof search.

A selector variable S_C^k means copy k of clause C is part of the
matrix. When a selector turns true, every literal of that copy gets a
clause requiring a connection into some other selected copy, so
accepted models are fully connected. Spanningness is not encoded up
front: when the solver proposes a full model, we search the selected
copies for an open path and, if one exists, add a clause listing every
way to close it.

Three modes share the machinery:

- "em": exactly d copies of every clause, fresh solver per d, deepened
  until some d admits a spanning matrix.
- "eu": one incremental solver; per-clause copy budgets grow by unsat
  cores over assumptions that the budgets suffice. An empty core means
  no budget ever will, i.e. the problem has no proof.
- "eh": like "eu" but ground clauses stop at one copy, since duplicate
  ground copies never help.
"""

from __future__ import annotations

from collections import Counter

from .sat import Solver, SolveTimeout, neg, pos
from .terms import EQUAL, GREATER, Var, compare_terms, make_copy
from .theory import ConnectionSystem, DecisionSteer
from .unify import SubstitutionStore, literals_dual


def are_dual_under(store, lit_a, lit_b):
    """Complementary and argument-wise equal under the current store."""
    if lit_a.negated == lit_b.negated or lit_a.predicate != lit_b.predicate:
        return False
    if len(lit_a.args) != len(lit_b.args):
        return False
    return all(store.resolve(a) == store.resolve(b) for a, b in zip(lit_a.args, lit_b.args))


def find_open_path(literal_lists, store):
    """One literal per list such that no two picks are dual under the
    store's substitution. Returns [(list_pos, lit_idx)] or None."""
    path = []

    def rec(i):
        if i == len(literal_lists):
            return list(path)
        for idx, lit in enumerate(literal_lists[i]):
            if any(are_dual_under(store, lit, p) for _, p in path):
                continue
            path.append((idx, lit))
            found = rec(i + 1)
            if found is not None:
                return found
            path.pop()
        return None

    picks = rec(0)
    if picks is None:
        return None
    return [(i, idx) for i, (idx, _) in enumerate(picks)]


class MatrixEncoding:
    def __init__(self, problem, config, mode, trace=False):
        self.problem = problem
        self.config = config
        self.mode = mode  # "em", "eu", or "eh"
        self.trace_enabled = trace
        self.trace = []
        self.solver = Solver()
        self.store = SubstitutionStore()
        self.conn = ConnectionSystem(self.store)
        self.steer = DecisionSteer()
        self.copies = {}  # (clause name, k) -> ClauseCopy
        self.sel = {}  # (clause name, k) -> sat var
        self.sel_occ = {}  # sat var -> (clause name, k)
        self.conn_vars = {}  # normalized occ pair -> sat var
        self.conn_occ = {}  # sat var -> (occ, occ)
        self.propagated = set()  # (selector var, round)
        self.round = 0
        self.act = None  # guard literal for the current round's clauses
        self.d = 0  # em copy count
        self.mu = {}  # eu/eh per-clause copy budget
        self.capped = set()  # eh: ground clauses that stay at one copy
        self.starts = problem.start_clauses(config.start_mode)
        self.proof = None
        self._dual_cache = {}
        self.solver.theory = self

    # ----- variables -----

    def _selector(self, name, k):
        v = self.sel.get((name, k))
        if v is None:
            v = self.solver.new_var()
            self.sel[(name, k)] = v
            self.sel_occ[v] = (name, k)
            if k > 1 and self.config.copy_order:
                self.solver.add_clause([neg(v), pos(self._selector(name, k - 1))])
        return v

    def _ensure_copy(self, name, k):
        cc = self.copies.get((name, k))
        if cc is None:
            cc = make_copy(self.problem.by_name[name], k)
            self.copies[(name, k)] = cc
            self._selector(name, k)
        return cc

    def _literal(self, occ):
        name, k, idx = occ
        return self.copies[(name, k)].literals[idx]

    def _conn_var(self, occ_a, occ_b):
        key = (occ_a, occ_b) if occ_a <= occ_b else (occ_b, occ_a)
        v = self.conn_vars.get(key)
        if v is None:
            v = self.solver.new_var()
            self.conn_vars[key] = v
            self.conn_occ[v] = key
            self.conn.watch_connect(v, self._literal(key[0]).args, self._literal(key[1]).args)
        return v

    def _statically_dual(self, name_a, ia, name_b, ib, same_copy=False):
        key = (name_a, ia, name_b, ib, same_copy)
        hit = self._dual_cache.get(key)
        if hit is None:
            la = make_copy(self.problem.by_name[name_a], -1).literals[ia]
            lb = make_copy(self.problem.by_name[name_b], -1 if same_copy else -2).literals[ib]
            hit = literals_dual(SubstitutionStore(), la, lb)
            self._dual_cache[key] = hit
        return hit

    # ----- construction -----

    def build_em(self, d):
        self.d = d
        all_selectors = []
        for clause in self.problem.clauses:
            for k in range(1, d + 1):
                self._ensure_copy(clause.name, k)
                all_selectors.append(pos(self.sel[(clause.name, k)]))
        self.solver.add_exactly(all_selectors, d)
        self.solver.add_clause([pos(self.sel[(c.name, 1)]) for c in self.starts])

    def build_incremental(self):
        for clause in self.problem.clauses:
            self.mu[clause.name] = 0
        for clause in self.starts:
            self.mu[clause.name] = 1
            self._ensure_copy(clause.name, 1)
            if self.mode == "eh" and clause.is_ground():
                self.capped.add(clause.name)
        self.solver.add_clause([pos(self.sel[(c.name, 1)]) for c in self.starts])

    def grow(self, name):
        """Raise a clause's copy budget after it was blamed in a core."""
        clause = self.problem.by_name[name]
        if name in self.capped:
            return
        self.mu[name] += 1
        self._ensure_copy(name, self.mu[name])
        if self.mode == "eh" and clause.is_ground():
            self.capped.add(name)

    # ----- connection requirements -----

    def _partner_options(self, occ, lit):
        """All ways the literal could connect, under the current budgets."""
        name, k, idx = occ
        disjuncts = []
        recorded = []
        for target in self.problem.clauses:
            partner_idxs = [
                j
                for j in range(len(target.literals))
                if self._statically_dual(name, idx, target.name, j)
            ]
            if not partner_idxs:
                continue
            limit = self.d if self.mode == "em" else self.mu[target.name]
            for kk in range(1, limit + 1):
                for j in partner_idxs:
                    if target.name == name and kk == k:
                        if j == idx:
                            continue
                        if not self._statically_dual(name, idx, name, j, same_copy=True):
                            continue
                    sv = self.sel[(target.name, kk)]
                    cv = self._conn_var(occ, (target.name, kk, j))
                    disjuncts.append([pos(sv), pos(cv)])
                    if self.trace_enabled:
                        recorded.append(
                            ("sel", f"{target.name}.{kk}", repr(self._literal((target.name, kk, j))))
                        )
            if self.mode != "em" and target.name not in self.capped:
                # a copy past the budget could host the partner; kept as a
                # bare selector so this round's assumptions pin the blame
                disjuncts.append([pos(self._selector(target.name, limit + 1))])
                if self.trace_enabled:
                    recorded.append(("escape", f"{target.name}.{limit + 1}"))
        return disjuncts, recorded

    def _propagate_selector(self, var):
        name, k = self.sel_occ[var]
        copy = self.copies.get((name, k))
        if copy is None:
            return
        antecedents = [pos(var)] if self.act is None else [self.act, pos(var)]
        for idx, lit in enumerate(copy.literals):
            disjuncts, recorded = self._partner_options((name, k, idx), lit)
            self.solver.propagate_constraint(antecedents, disjuncts)
            self.steer.track(antecedents, disjuncts)
            if self.trace_enabled:
                self.trace.append(
                    {"copy": f"{name}.{k}", "literal": repr(lit), "options": recorded}
                )

    def repropagate_true_selectors(self):
        """Re-emit connection requirements for selectors that stayed true
        at level zero; their clauses from older rounds are retired."""
        for (name, k), v in list(self.sel.items()):
            if self.solver.values[v] == 1:
                key = (v, self.round)
                if key not in self.propagated:
                    self.propagated.add(key)
                    self._propagate_selector(v)

    # ----- theory callbacks -----

    def on_assign(self, solver, lit):
        if not self.conn.apply(solver, lit, solver.theory_head - 1):
            return
        if lit & 1:
            return
        v = lit >> 1
        if v in self.sel_occ:
            key = (v, self.round)
            if key not in self.propagated:
                self.propagated.add(key)
                self._propagate_selector(v)

    def on_backtrack(self, trail_len):
        self.conn.on_backtrack(trail_len)

    def on_decide(self, solver):
        return self.steer.suggest(solver)

    # ----- final model checks -----

    def _selected(self, solver):
        # true selectors need not be contiguous when copy ordering is off
        rank = {c.name: i for i, c in enumerate(self.problem.clauses)}
        out = []
        for (name, k), v in self.sel.items():
            if solver.values[v] == 1:
                copy = self.copies.get((name, k))
                if copy is not None:
                    out.append((name, k, copy))
        out.sort(key=lambda t: (rank[t[0]], t[1]))
        return out

    def on_final(self, solver):
        selected = self._selected(solver)
        if self._reject_tautology(solver, selected):
            return False
        if self.config.subsumption and self._reject_subsumed(solver, selected):
            return False
        if self.config.instance_symmetry and self._reject_instance(solver, selected):
            return False
        if self.config.subst_order and self._reject_unordered(solver, selected):
            return False
        path = find_open_path([c.literals for _, _, c in selected], self.store)
        if path is not None:
            self._block_path(solver, selected, path)
            return False
        self.proof = self._extract(solver, selected)
        return True

    def _reject_tautology(self, solver, selected):
        for name, k, copy in selected:
            for i in range(len(copy.literals)):
                for j in range(i + 1, len(copy.literals)):
                    if are_dual_under(self.store, copy.literals[i], copy.literals[j]):
                        tags = self.store.explain_terms(
                            list(copy.literals[i].args) + list(copy.literals[j].args)
                        )
                        clause = [neg(self.sel[(name, k)])] + [t ^ 1 for t in tags]
                        solver.add_clause(clause)
                        return True
        return False

    def _instance_key(self, copy):
        return Counter(
            (l.predicate, l.negated, tuple(self.store.resolve(a) for a in l.args))
            for l in copy.literals
        )

    def _reject_subsumed(self, solver, selected):
        keys = [self._instance_key(copy) for _, _, copy in selected]
        for a in range(len(selected)):
            for b in range(len(selected)):
                if a == b:
                    continue
                if all(keys[a][key] <= keys[b][key] for key in keys[a]):
                    tags = self.store.explain_terms(
                        [
                            arg
                            for _, _, copy in (selected[a], selected[b])
                            for l in copy.literals
                            for arg in l.args
                        ]
                    )
                    na, ka, _ = selected[a]
                    nb, kb, _ = selected[b]
                    clause = [neg(self.sel[(na, ka)]), neg(self.sel[(nb, kb)])]
                    solver.add_clause(clause + [t ^ 1 for t in tags])
                    return True
        return False

    def _clause_rank(self):
        rank = {}
        for clause in self.starts:
            rank.setdefault(clause.name, len(rank))
        for clause in self.problem.clauses:
            rank.setdefault(clause.name, len(rank))
        return rank

    def _reject_instance(self, solver, selected):
        rank = self._clause_rank()
        order = sorted(self.problem.clauses, key=lambda c: rank[c.name])
        for name, k, copy in selected:
            resolved = [
                (l.predicate, l.negated, tuple(self.store.resolve(a) for a in l.args))
                for l in copy.literals
            ]
            for small in order:
                if rank[small.name] >= rank[name]:
                    break
                if len(small.literals) != len(resolved):
                    continue
                if _matches_clause(small.literals, resolved):
                    tags = self.store.explain_terms(
                        [arg for l in copy.literals for arg in l.args]
                    )
                    solver.add_clause([neg(self.sel[(name, k)])] + [t ^ 1 for t in tags])
                    return True
        return False

    def _reject_unordered(self, solver, selected):
        by_clause = {}
        for name, k, copy in selected:
            by_clause.setdefault(name, []).append((k, copy))
        for name, entries in by_clause.items():
            for a in range(len(entries)):
                for b in range(a + 1, len(entries)):
                    ka, ca = entries[a]
                    kb, cb = entries[b]
                    if ka > kb:
                        ka, ca, kb, cb = kb, cb, ka, ca
                    va = [self.store.resolve(v) for v in ca.variables]
                    vb = [self.store.resolve(v) for v in cb.variables]
                    verdict = EQUAL
                    for ta, tb in zip(va, vb):
                        verdict = compare_terms(ta, tb, self.problem.symbol_order)
                        if verdict != EQUAL:
                            break
                    if verdict == GREATER:
                        tags = self.store.explain_terms(list(ca.variables) + list(cb.variables))
                        clause = [neg(self.sel[(name, ka)]), neg(self.sel[(name, kb)])]
                        solver.add_clause(clause + [t ^ 1 for t in tags])
                        return True
        return False

    # ----- open path blocking -----

    def blocking_options(self, path_occs, selected_keys):
        """Disjuncts that could close the path: connections inside it,
        and (incremental modes) connections into copies outside the
        current matrix. Returns (disjuncts, descriptors)."""
        disjuncts = []
        recorded = []
        for a in range(len(path_occs)):
            for b in range(a + 1, len(path_occs)):
                oa, ob = path_occs[a], path_occs[b]
                if self._statically_dual(oa[0], oa[2], ob[0], ob[2]):
                    disjuncts.append([pos(self._conn_var(oa, ob))])
                    recorded.append(("conn", f"{oa[0]}.{oa[1]}[{oa[2]}]", f"{ob[0]}.{ob[1]}[{ob[2]}]"))
        if self.mode == "em":
            return disjuncts, recorded
        seen_escape = set()
        for occ in path_occs:
            name, k, idx = occ
            for target in self.problem.clauses:
                partner_idxs = [
                    j
                    for j in range(len(target.literals))
                    if self._statically_dual(name, idx, target.name, j)
                ]
                if not partner_idxs:
                    continue
                limit = self.mu[target.name]
                for kk in range(1, limit + 1):
                    if (target.name, kk) in selected_keys:
                        continue
                    for j in partner_idxs:
                        sv = self.sel[(target.name, kk)]
                        cv = self._conn_var(occ, (target.name, kk, j))
                        disjuncts.append([pos(sv), pos(cv)])
                        recorded.append(
                            (
                                "sel",
                                f"{target.name}.{kk}",
                                repr(self._literal((target.name, kk, j))),
                                f"{name}.{k}[{idx}]",
                            )
                        )
                if target.name not in self.capped and target.name not in seen_escape:
                    seen_escape.add(target.name)
                    disjuncts.append([pos(self._selector(target.name, limit + 1))])
                    recorded.append(("escape", f"{target.name}.{limit + 1}"))
        return disjuncts, recorded

    def _block_path(self, solver, selected, path):
        path_occs = []
        for pos_i, idx in path:
            name, k, _ = selected[pos_i]
            path_occs.append((name, k, idx))
        selected_keys = {(name, k) for name, k, _ in selected}
        disjuncts, _ = self.blocking_options(path_occs, selected_keys)
        antecedents = [pos(self.sel[(name, k)]) for name, k, _ in selected]
        if self.act is not None:
            antecedents = [self.act] + antecedents
        self.solver.propagate_constraint(antecedents, disjuncts)
        self.steer.track(antecedents, disjuncts)

    # ----- extraction -----

    def _extract(self, solver, selected):
        from .proof import Proof, ProofCopy

        sel_keys = {(name, k) for name, k, _ in selected}
        connections = []
        for v, (occ_a, occ_b) in self.conn_occ.items():
            if solver.values[v] == 1 and occ_a[:2] in sel_keys and occ_b[:2] in sel_keys:
                connections.append((occ_a, occ_b))
        connections.sort()
        touched = {occ for pair in connections for occ in pair}
        copies = []
        bindings = []
        for name, k, copy in selected:
            copies.append(ProofCopy(name, k, list(copy.literals), None))
            for idx in range(len(copy.literals)):
                if (name, k, idx) not in touched:
                    raise RuntimeError(
                        f"accepted matrix leaves {name}.{k}[{idx}] unconnected"
                    )
            for v in copy.variables:
                t = self.store.resolve(v)
                if t != v:
                    bindings.append((v, t))
        return Proof(kind="matrix", copies=copies, connections=connections, bindings=bindings)


def _matches_clause(patterns, resolved):
    """Positional instance match of template literals against resolved
    (pred, negated, args) triples."""
    mapping = {}

    def match_term(p, t):
        if isinstance(p, Var):
            bound = mapping.get(p)
            if bound is None:
                mapping[p] = t
                return True
            return bound == t
        if isinstance(t, Var) or p.functor != t.functor or len(p.args) != len(t.args):
            return False
        return all(match_term(pa, ta) for pa, ta in zip(p.args, t.args))

    for lit, (pred, negated, args) in zip(patterns, resolved):
        if lit.predicate != pred or lit.negated != negated or len(lit.args) != len(args):
            return False
        for pa, ta in zip(lit.args, args):
            if not match_term(pa, ta):
                return False
    return True


# ----- deepening drivers -----


def _new_stats():
    return {"steps": 0, "conflicts": 0, "decisions": 0, "propagations": 0, "restarts": 0}


def _merge(stats, solver):
    for k in ("conflicts", "decisions", "propagations", "restarts"):
        stats[k] += solver.stats[k]


def prove_matrix(problem, config, mode, stop_check=None, trace=False):
    """Returns (status, proof, stats); status Theorem, GaveUp, Timeout."""
    if mode == "em":
        return _prove_em(problem, config, stop_check, trace)
    return _prove_incremental(problem, config, mode, stop_check, trace)


def _prove_em(problem, config, stop_check, trace):
    stats = _new_stats()
    trace_log = []
    for d in range(1, config.max_size + 1):
        enc = MatrixEncoding(problem, config, "em", trace=trace)
        enc.solver.stop_check = stop_check
        enc.build_em(d)
        try:
            ok, _ = enc.solver.solve()
        except SolveTimeout:
            _merge(stats, enc.solver)
            stats["steps"] += 1
            stats["trace"] = trace_log + enc.trace
            return "Timeout", None, stats
        _merge(stats, enc.solver)
        stats["steps"] += 1
        trace_log.extend(enc.trace)
        if ok:
            stats["trace"] = trace_log
            stats["size"] = d
            return "Theorem", enc.proof, stats
    stats["trace"] = trace_log
    stats["exhausted_at"] = config.max_size
    stats["reason"] = f"no spanning matrix within {config.max_size} copies"
    return "GaveUp", None, stats


def _prove_incremental(problem, config, mode, stop_check, trace):
    stats = _new_stats()
    stats["cores"] = []
    enc = MatrixEncoding(problem, config, mode, trace=trace)
    enc.solver.stop_check = stop_check
    enc.build_incremental()
    while True:
        enc.round += 1
        stats["steps"] += 1
        act_var = enc.solver.new_var()
        enc.act = pos(act_var)
        enc.steer.clear()
        enc.repropagate_true_selectors()
        assumptions = [enc.act]
        kappa = {}
        for clause in problem.clauses:
            if clause.name in enc.capped:
                continue
            a = neg(enc._selector(clause.name, enc.mu[clause.name] + 1))
            kappa[a] = clause.name
            assumptions.append(a)
        try:
            ok, payload = enc.solver.solve(assumptions)
        except SolveTimeout:
            _merge(stats, enc.solver)
            stats["trace"] = enc.trace
            stats["mu"] = dict(enc.mu)
            return "Timeout", None, stats
        if ok:
            _merge(stats, enc.solver)
            stats["trace"] = enc.trace
            stats["mu"] = dict(enc.mu)
            return "Theorem", enc.proof, stats
        named = []
        for lit in payload:
            name = kappa.get(lit)
            if name is not None and name not in named:
                named.append(name)
        stats["cores"].append(named)
        # retire this round's budget-limited clauses before growing
        enc.solver.add_clause([neg(act_var)])
        if not named:
            _merge(stats, enc.solver)
            stats["trace"] = enc.trace
            stats["mu"] = dict(enc.mu)
            stats["reason"] = "NoProofExists"
            return "GaveUp", None, stats
        for name in named:
            enc.grow(name)
