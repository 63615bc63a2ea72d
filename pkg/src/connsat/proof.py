"""Proof objects, their text form, and an independent checker.

The text form is line-oriented and deterministic: copies, then
bindings, then connections, each section sorted. Comment lines start
with % and are regenerated on rendering, so render(parse(render(p)))
is byte-identical to render(p).

The checker re-derives everything from the problem and the proof text
alone: it re-renames the clause copies, applies the recorded bindings
once (they are fully resolved), checks every connection is a dual
pair, re-unifies all connected pairs from scratch with its own
routine, and enumerates paths (matrix) or branch closures (tableau).
It shares no state with the prover.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

from .terms import App, Literal, Var, make_copy


@dataclass
class ProofCopy:
    name: str
    k: int
    literals: list
    parent: tuple = None  # (name, k, idx) extended occurrence; tableau only


@dataclass
class Proof:
    kind: str  # "matrix", "tableau", or "degenerate"
    copies: list = field(default_factory=list)
    connections: list = field(default_factory=list)  # ((name,k,idx), (name,k,idx))
    bindings: list = field(default_factory=list)  # (Var, fully resolved term)

    @property
    def size(self):
        return len(self.copies)


# ----- rendering -----


def _occ_str(occ):
    name, k, idx = occ
    return f"{name}.{k}[{idx}]"


def render_proof(proof):
    lines = ["% connsat proof", f"encoding: {proof.kind}"]
    for c in proof.copies:
        body = " | ".join(repr(l) for l in c.literals)
        if proof.kind == "tableau":
            at = "root" if c.parent is None else _occ_str(c.parent)
            lines.append(f"copy {c.name}.{c.k} @ {at}: {body}")
        else:
            lines.append(f"copy {c.name}.{c.k}: {body}")
    for v, t in sorted(proof.bindings, key=lambda b: (b[0].clause, b[0].copy, b[0].index)):
        lines.append(f"bind {v!r} := {t!r}")
    for occ_a, occ_b in sorted(proof.connections):
        lines.append(f"conn {_occ_str(occ_a)} ~ {_occ_str(occ_b)}")
    if proof.kind == "tableau":
        lines.extend(_tree_comment(proof))
    return "\n".join(lines) + "\n"


def _tree_comment(proof):
    """Commented branch-by-branch view of the tableau."""
    children = {}
    root = None
    for c in proof.copies:
        if c.parent is None:
            root = c
        else:
            children.setdefault(c.parent, []).append(c)
    if root is None:
        return []
    conns_at = {}
    for occ_a, occ_b in sorted(proof.connections):
        conns_at.setdefault(occ_a, []).append(occ_b)
        conns_at.setdefault(occ_b, []).append(occ_a)
    out = ["% tree:"]

    def visit(copy, depth):
        pad = "  " * depth
        for idx, lit in enumerate(copy.literals):
            occ = (copy.name, copy.k, idx)
            partners = ", ".join(_occ_str(p) for p in conns_at.get(occ, []))
            out.append(f"% {pad}{_occ_str(occ)} {lit!r} ~ {partners}")
            for child in children.get(occ, []):
                visit(child, depth + 1)

    visit(root, 0)
    return out


# ----- parsing -----


class ProofSyntaxError(Exception):
    pass


_OCC_RE = re.compile(r"^(\w+)\.(\d+)\[(\d+)\]$")
_COPY_RE = re.compile(r"^copy (\w+)\.(\d+)(?: @ (root|\w+\.\d+\[\d+\]))?: (.*)$")
_TERM_TOKEN = re.compile(r"([A-Za-z0-9_']+@\w+\.\d+|'[^']*'|[A-Za-z0-9_$]+|[=(),|~])")


def _parse_occ(text):
    m = _OCC_RE.match(text)
    if m is None:
        raise ProofSyntaxError(f"bad occurrence {text!r}")
    return (m.group(1), int(m.group(2)), int(m.group(3)))


class _TermReader:
    def __init__(self, text, problem):
        self.tokens = _TERM_TOKEN.findall(text)
        self.pos = 0
        self.problem = problem

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self):
        t = self.peek()
        if t is None:
            raise ProofSyntaxError("unexpected end of term")
        self.pos += 1
        return t

    def expect(self, tok):
        t = self.next()
        if t != tok:
            raise ProofSyntaxError(f"expected {tok!r}, got {t!r}")

    def var(self, token):
        head, tail = token.split("@", 1)
        clause_name, copy_s = tail.rsplit(".", 1)
        clause = self.problem.by_name.get(clause_name)
        if clause is None:
            raise ProofSyntaxError(f"variable {token!r} names unknown clause")
        for v in clause.variables:
            if v.name == head:
                return Var(head, clause_name, int(copy_s), v.index)
        raise ProofSyntaxError(f"variable {token!r} not in clause {clause_name}")

    def term(self):
        t = self.next()
        if "@" in t:
            return self.var(t)
        args = []
        if self.peek() == "(":
            self.next()
            args.append(self.term())
            while self.peek() == ",":
                self.next()
                args.append(self.term())
            self.expect(")")
        return App(t, tuple(args))

    def literal(self):
        negated = False
        while self.peek() == "~":
            self.next()
            negated = not negated
        pred = self.next()
        args = []
        if self.peek() == "(":
            self.next()
            args.append(self.term())
            while self.peek() == ",":
                self.next()
                args.append(self.term())
            self.expect(")")
        return Literal(pred, tuple(args), negated)

    def literals(self):
        out = [self.literal()]
        while self.peek() == "|":
            self.next()
            out.append(self.literal())
        if self.peek() is not None:
            raise ProofSyntaxError(f"trailing tokens from {self.peek()!r}")
        return out


def parse_proof(text, problem):
    kind = None
    copies = []
    bindings = []
    connections = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        if line.startswith("encoding:"):
            kind = line.split(":", 1)[1].strip()
            continue
        if line.startswith("copy "):
            m = _COPY_RE.match(line)
            if m is None:
                raise ProofSyntaxError(f"bad copy line {line!r}")
            name, k, at, body = m.groups()
            parent = None if at in (None, "root") else _parse_occ(at)
            lits = _TermReader(body, problem).literals()
            copies.append(ProofCopy(name, int(k), lits, parent))
            continue
        if line.startswith("bind "):
            rest = line[len("bind ") :]
            left, _, right = rest.partition(" := ")
            reader = _TermReader(left, problem)
            token = reader.next()
            if "@" not in token:
                raise ProofSyntaxError(f"bad binding target {left!r}")
            var = reader.var(token)
            bindings.append((var, _TermReader(right, problem).term()))
            continue
        if line.startswith("conn "):
            rest = line[len("conn ") :]
            left, _, right = rest.partition(" ~ ")
            connections.append((_parse_occ(left.strip()), _parse_occ(right.strip())))
            continue
        raise ProofSyntaxError(f"unrecognized line {line!r}")
    if kind is None:
        raise ProofSyntaxError("missing encoding line")
    return Proof(kind=kind, copies=copies, connections=connections, bindings=bindings)


# ----- independent checking -----


def _apply_once(term, bmap):
    if isinstance(term, Var):
        return bmap.get(term, term)
    if not term.args:
        return term
    return App(term.functor, tuple(_apply_once(a, bmap) for a in term.args))


def _lit_instance(lit, bmap):
    return Literal(lit.predicate, tuple(_apply_once(a, bmap) for a in lit.args), lit.negated)


def _dual_instances(a, b):
    return a.predicate == b.predicate and a.negated != b.negated and a.args == b.args


def _walk(term, subst):
    while isinstance(term, Var) and term in subst:
        term = subst[term]
    return term


def _occurs(var, term, subst):
    term = _walk(term, subst)
    if isinstance(term, Var):
        return term == var
    return any(_occurs(var, a, subst) for a in term.args)


def _unify(s, t, subst):
    s = _walk(s, subst)
    t = _walk(t, subst)
    if s == t:
        return True
    if isinstance(s, Var):
        if _occurs(s, t, subst):
            return False
        subst[s] = t
        return True
    if isinstance(t, Var):
        return _unify(t, s, subst)
    if s.functor != t.functor or len(s.args) != len(t.args):
        return False
    return all(_unify(a, b, subst) for a, b in zip(s.args, t.args))


def check_proof(problem, proof, start_names):
    """Validate a decoded or parsed proof against the input problem.

    Returns (True, None) or (False, reason). Uses only the problem,
    the proof, and its own unification.
    """
    if proof.kind == "degenerate":
        if problem.empty_clause is not None:
            return True, None
        return False, "degenerate proof but the input has no empty clause"
    if proof.kind not in ("matrix", "tableau"):
        return False, f"unknown proof kind {proof.kind!r}"
    if not proof.copies:
        return False, "proof lists no clause copies"

    by_key = {}
    for c in proof.copies:
        clause = problem.by_name.get(c.name)
        if clause is None:
            return False, f"copy of unknown clause {c.name}"
        if c.k < 1:
            return False, f"copy index {c.k} of {c.name} out of range"
        if (c.name, c.k) in by_key:
            return False, f"duplicate copy {c.name}.{c.k}"
        expected = make_copy(clause, c.k).literals
        if list(c.literals) != expected:
            return False, f"copy {c.name}.{c.k} literals do not match the input clause"
        by_key[(c.name, c.k)] = c

    own_vars = set()
    for c in proof.copies:
        own_vars.update(make_copy(problem.by_name[c.name], c.k).variables)
    bmap = {}
    for v, t in proof.bindings:
        if v not in own_vars:
            return False, f"binding for {v!r} outside the proof's copies"
        if v in bmap:
            return False, f"duplicate binding for {v!r}"
        bmap[v] = t

    def occ_literal(occ):
        c = by_key.get(occ[:2])
        if c is None or not 0 <= occ[2] < len(c.literals):
            return None
        return c.literals[occ[2]]

    for occ_a, occ_b in proof.connections:
        la, lb = occ_literal(occ_a), occ_literal(occ_b)
        if la is None or lb is None:
            return False, f"connection names missing occurrence {_occ_str(occ_a)} ~ {_occ_str(occ_b)}"
        if occ_a[:2] == occ_b[:2] and occ_a[2] == occ_b[2]:
            return False, f"connection of {_occ_str(occ_a)} with itself"
        if not _dual_instances(_lit_instance(la, bmap), _lit_instance(lb, bmap)):
            return False, f"connection {_occ_str(occ_a)} ~ {_occ_str(occ_b)} is not dual under the bindings"

    subst = {}
    for occ_a, occ_b in proof.connections:
        la, lb = occ_literal(occ_a), occ_literal(occ_b)
        for s, t in zip(la.args, lb.args):
            if not _unify(s, t, subst):
                return False, "connections admit no common unifier"

    if proof.kind == "matrix":
        return _check_matrix(proof, bmap, start_names)
    return _check_tableau(proof, bmap, start_names)


def _check_matrix(proof, bmap, start_names):
    if not any(c.name in start_names for c in proof.copies):
        return False, "matrix contains no start clause copy"
    instance_rows = [[_lit_instance(l, bmap) for l in c.literals] for c in proof.copies]
    for picks in itertools.product(*[range(len(row)) for row in instance_rows]):
        lits = [row[i] for row, i in zip(instance_rows, picks)]
        closed = False
        for a in range(len(lits)):
            for b in range(a + 1, len(lits)):
                if _dual_instances(lits[a], lits[b]):
                    closed = True
                    break
            if closed:
                break
        if not closed:
            witness = ", ".join(
                f"{_occ_str((c.name, c.k, i))} {row[i]!r}"
                for c, row, i in zip(proof.copies, instance_rows, picks)
            )
            return False, f"open path: {witness}"
    return True, None


def _check_tableau(proof, bmap, start_names):
    roots = [c for c in proof.copies if c.parent is None]
    if len(roots) != 1:
        return False, f"tableau must have exactly one root copy, found {len(roots)}"
    root = roots[0]
    if root.name not in start_names:
        return False, f"root copy {root.name}.{root.k} is not a start clause"

    by_key = {(c.name, c.k): c for c in proof.copies}
    children = {}
    for c in proof.copies:
        if c.parent is None:
            continue
        if c.parent[:2] not in by_key:
            return False, f"copy {c.name}.{c.k} extends a missing occurrence"
        parent_copy = by_key[c.parent[:2]]
        if not 0 <= c.parent[2] < len(parent_copy.literals):
            return False, f"copy {c.name}.{c.k} extends an invalid literal position"
        children.setdefault(c.parent, []).append(c)

    def path_occs(copy):
        out = []
        seen = set()
        occ = copy.parent
        while occ is not None:
            if occ[:2] in seen:
                return None
            seen.add(occ[:2])
            out.append(occ)
            occ = by_key[occ[:2]].parent
        return out

    conn_set = set()
    for occ_a, occ_b in proof.connections:
        conn_set.add((occ_a, occ_b))
        conn_set.add((occ_b, occ_a))

    reached = set()
    for c in proof.copies:
        path = path_occs(c)
        if path is None:
            return False, f"copy {c.name}.{c.k} has a cyclic ancestry"
        if c is not root and path[-1][:2] != (root.name, root.k):
            return False, f"copy {c.name}.{c.k} does not descend from the root"
        reached.add((c.name, c.k))
        if c is not root and not any(
            (c.parent, (c.name, c.k, i)) in conn_set for i in range(len(c.literals))
        ):
            return False, f"extension into {c.name}.{c.k} has no entry connection"
        for idx in range(len(c.literals)):
            occ = (c.name, c.k, idx)
            closed = any((occ, anc) in conn_set for anc in path)
            if not closed:
                for child in children.get(occ, []):
                    if any(
                        (occ, (child.name, child.k, i)) in conn_set
                        for i in range(len(child.literals))
                    ):
                        closed = True
                        break
            if not closed:
                return False, f"branch literal {_occ_str(occ)} is not closed"
    if len(reached) != len(proof.copies):
        return False, "unreachable copies in the tableau"
    return True, None
