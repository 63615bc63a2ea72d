"""Clausal tableau search phrased as satisfiability.

Every literal occurrence that enters the tableau gets a node variable
meaning "this branch is closed below". When a node variable first
becomes true, the encoding emits a clause listing its closure options:
extend into a fresh copy of some input clause through a connection, or
connect back to an ancestor on the current path. Extensions stop at
the path length cap, so each cap gives a finite formula and the prover
deepens the cap until one is satisfiable.

Clause copies are shared per (clause, extended node): options that
enter the same clause at the same spot reuse one copy, which keeps the
formula small and mirrors how a tableau procedure would branch.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .sat import Solver, SolveTimeout, pos
from .terms import make_copy
from .theory import ConnectionSystem, DecisionSteer
from .unify import SubstitutionStore, literals_dual


@dataclass
class TabCopy:
    copy: object  # ClauseCopy
    parent: object  # NodeRec the copy was created under, None at the root
    nodes: list = field(default_factory=list)

    @property
    def name(self):
        return self.copy.clause.name

    @property
    def k(self):
        return self.copy.copy


@dataclass
class NodeRec:
    tab_copy: TabCopy
    index: int
    var: int

    @property
    def literal(self):
        return self.tab_copy.copy.literals[self.index]

    @property
    def occ(self):
        return (self.tab_copy.name, self.tab_copy.k, self.index)


class TableauEncoding:
    """One solver instance for a fixed path length cap."""

    def __init__(self, problem, limit, config, trace=False):
        self.problem = problem
        self.limit = limit
        self.config = config
        self.trace_enabled = trace
        self.trace = []
        self.solver = Solver()
        self.store = SubstitutionStore()
        self.conn = ConnectionSystem(self.store)
        self.steer = DecisionSteer()
        self.copies = {}  # (clause name, parent node var or None) -> TabCopy
        self.copy_counts = {}
        self.node_of_var = {}
        self.conn_vars = {}  # normalized occ pair -> sat var
        self.conn_occs = {}  # sat var -> (NodeRec, NodeRec)
        self.propagated = set()
        self.start_copies = []
        self.proof = None
        self._dual_cache = {}
        self.solver.theory = self

    # ----- construction -----

    def build(self):
        starts = self.problem.start_clauses(self.config.start_mode)
        disjuncts = []
        for clause in starts:
            tc = self._intern_copy(clause, None)
            self.start_copies.append(tc)
            disjuncts.append([pos(n.var) for n in tc.nodes])
        self.solver.propagate_constraint([], disjuncts)
        self.steer.track([], disjuncts)

    def _intern_copy(self, clause, parent):
        key = (clause.name, parent.var if parent is not None else None)
        tc = self.copies.get(key)
        if tc is not None:
            return tc
        k = self.copy_counts.get(clause.name, 0) + 1
        self.copy_counts[clause.name] = k
        tc = TabCopy(make_copy(clause, k), parent)
        for i in range(len(tc.copy.literals)):
            node = NodeRec(tc, i, self.solver.new_var())
            tc.nodes.append(node)
            self.node_of_var[node.var] = node
            if self.config.regularity and parent is not None:
                lit = node.literal
                for anc in self._path(node):
                    al = anc.literal
                    if (
                        al.predicate == lit.predicate
                        and al.negated == lit.negated
                        and len(al.args) == len(lit.args)
                    ):
                        self.conn.watch_diseq(node.var, lit.args, al.args)
        self.copies[key] = tc
        return tc

    def _path(self, node):
        """Ancestor nodes from the root down to the parent of node."""
        out = []
        p = node.tab_copy.parent
        while p is not None:
            out.append(p)
            p = p.tab_copy.parent
        out.reverse()
        return out

    def _conn_var(self, node_a, node_b):
        key = tuple(sorted((node_a.occ, node_b.occ)))
        v = self.conn_vars.get(key)
        if v is None:
            v = self.solver.new_var()
            self.conn_vars[key] = v
            self.conn_occs[v] = (node_a, node_b)
            self.conn.watch_connect(v, node_a.literal.args, node_b.literal.args)
        return v

    def _statically_dual(self, clause_a, ia, clause_b, ib):
        key = (clause_a.name, ia, clause_b.name, ib)
        hit = self._dual_cache.get(key)
        if hit is None:
            la = make_copy(clause_a, -1).literals[ia]
            lb = make_copy(clause_b, -2).literals[ib]
            hit = literals_dual(SubstitutionStore(), la, lb)
            self._dual_cache[key] = hit
        return hit

    # ----- theory callbacks -----

    def on_assign(self, solver, lit):
        if not self.conn.apply(solver, lit, solver.theory_head - 1):
            return
        if lit & 1:
            return
        node = self.node_of_var.get(lit >> 1)
        if node is not None and node.var not in self.propagated:
            self.propagated.add(node.var)
            self._propagate_node(node)

    def on_backtrack(self, trail_len):
        self.conn.on_backtrack(trail_len)

    def on_decide(self, solver):
        return self.steer.suggest(solver)

    def _propagate_node(self, node):
        lit = node.literal
        path = self._path(node)
        disjuncts = []
        recorded = []
        if len(path) < self.limit:
            for clause in self.problem.clauses:
                idxs = [
                    i
                    for i in range(len(clause.literals))
                    if self._statically_dual(node.tab_copy.copy.clause, node.index, clause, i)
                ]
                if not idxs:
                    continue
                child = self._intern_copy(clause, node)
                for i in idxs:
                    entry = child.nodes[i]
                    conj = [pos(self._conn_var(node, entry))]
                    conj.extend(pos(s.var) for j, s in enumerate(child.nodes) if j != i)
                    disjuncts.append(conj)
                    if self.trace_enabled:
                        recorded.append(("ext", f"{child.name}.{child.k}", repr(entry.literal)))
        for anc in path:
            if self._statically_dual(
                node.tab_copy.copy.clause, node.index, anc.tab_copy.copy.clause, anc.index
            ):
                disjuncts.append([pos(self._conn_var(node, anc))])
                if self.trace_enabled:
                    recorded.append(("red", repr(anc.literal)))
        self.solver.propagate_constraint([pos(node.var)], disjuncts)
        self.steer.track([pos(node.var)], disjuncts)
        if self.trace_enabled:
            self.trace.append(
                {
                    "literal": repr(lit),
                    "path": [repr(a.literal) for a in path],
                    "options": recorded,
                }
            )

    # ----- model acceptance -----

    def on_final(self, solver):
        self.proof = self._extract(solver)
        return True

    def _true(self, solver, var):
        return solver.values[var] == 1

    def _extract(self, solver):
        from .proof import Proof, ProofCopy

        root = None
        for tc in self.start_copies:
            if all(self._true(solver, n.var) for n in tc.nodes):
                root = tc
                break
        if root is None:
            raise RuntimeError("accepted model places no start clause")
        copies = []
        connections = []
        seen_vars = []

        def visit(tc, entry_idx, parent):
            copies.append(
                ProofCopy(
                    tc.name,
                    tc.k,
                    list(tc.copy.literals),
                    parent.occ if parent is not None else None,
                )
            )
            seen_vars.extend(tc.copy.variables)
            for i, n in enumerate(tc.nodes):
                if i == entry_idx:
                    continue
                self._close(solver, n, connections, visit)

        visit(root, None, None)
        bindings = []
        for v in seen_vars:
            t = self.store.resolve(v)
            if t != v:
                bindings.append((v, t))
        return Proof(
            kind="tableau",
            copies=copies,
            connections=connections,
            bindings=bindings,
        )

    def _close(self, solver, node, connections, visit):
        """Find the satisfied closure option of a true node, in the same
        order the options were emitted."""
        if not self._true(solver, node.var):
            raise RuntimeError("tableau node left open in accepted model")
        for clause in self.problem.clauses:
            child = self.copies.get((clause.name, node.var))
            if child is None:
                continue
            for i, entry in enumerate(child.nodes):
                cv = self.conn_vars.get(tuple(sorted((node.occ, entry.occ))))
                if cv is None or not self._true(solver, cv):
                    continue
                if all(self._true(solver, s.var) for j, s in enumerate(child.nodes) if j != i):
                    connections.append((node.occ, entry.occ))
                    visit(child, i, node)
                    return
        for anc in self._path(node):
            cv = self.conn_vars.get(tuple(sorted((node.occ, anc.occ))))
            if cv is not None and self._true(solver, cv):
                connections.append((node.occ, anc.occ))
                return
        raise RuntimeError(f"no closure recorded for {node.literal!r}")


def prove_tableau(problem, config, stop_check=None, trace=False):
    """Deepen the path cap until some cap admits a closed tableau.

    Returns (status, proof, stats) with status Theorem, GaveUp, or
    Timeout.
    """
    stats = {"steps": 0, "conflicts": 0, "decisions": 0, "propagations": 0, "restarts": 0}
    trace_log = []
    for limit in range(1, config.max_path + 1):
        enc = TableauEncoding(problem, limit, config, trace=trace)
        enc.solver.stop_check = stop_check
        enc.build()
        try:
            ok, _ = enc.solver.solve()
        except SolveTimeout:
            _merge(stats, enc)
            stats["trace"] = trace_log + enc.trace
            return "Timeout", None, stats
        _merge(stats, enc)
        trace_log.extend(enc.trace)
        if ok:
            stats["trace"] = trace_log
            stats["limit"] = limit
            return "Theorem", enc.proof, stats
    stats["trace"] = trace_log
    stats["reason"] = f"no closed tableau within path length {config.max_path}"
    return "GaveUp", None, stats


def _merge(stats, enc):
    stats["steps"] += 1
    for k in ("conflicts", "decisions", "propagations", "restarts"):
        stats[k] += enc.solver.stats[k]
