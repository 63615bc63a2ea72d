"""Proving pipeline: load a problem, run one encoding, verify the proof.

Every Theorem verdict passes through the independent checker before it
is reported; a decoded proof the checker rejects is an internal error,
never a Theorem.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field

from .matrix import prove_matrix
from .proof import Proof, check_proof
from .tableau import prove_tableau
from .terms import App, ArityMismatch, Clause, Literal, Var
from .tptp import ParseError, parse_file


@dataclass
class ProverConfig:
    encoding: str = "core"  # tableau | matrix | core | hybrid
    max_size: int = 8  # copies per clause bound for the eager matrix encoding
    max_path: int = 8  # path length bound for the tableau encoding
    timeout: float = 30.0
    start_mode: str = "conjecture"  # conjecture | all
    equality: str = "axioms"  # axioms | ignore
    copy_order: bool = True
    subsumption: bool = True
    instance_symmetry: bool = True
    subst_order: bool = True
    regularity: bool = False
    proof_out: str = None
    show_stats: bool = False

    def __post_init__(self):
        if self.encoding not in ("tableau", "matrix", "core", "hybrid"):
            raise ValueError(f"unknown encoding {self.encoding!r}")
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")


@dataclass
class Result:
    status: str  # Theorem | NoProof | GaveUp | Timeout
    proof: Proof = None
    stats: dict = field(default_factory=dict)
    reason: str = None


def _is_tautology(clause):
    for i, a in enumerate(clause.literals):
        for b in clause.literals[i + 1 :]:
            if a.predicate == b.predicate and a.negated != b.negated and a.args == b.args:
                return True
    return False


def _fresh_name(problem, base):
    name = base
    while name in problem.by_name:
        name = name + "_0"
    return name


def _add_axiom(problem, base, build):
    """build(name) -> (literals, variables); registers the clause."""
    name = _fresh_name(problem, base)
    literals, variables = build(name)
    problem.add_clause(Clause(name, "axiom", literals, variables))


def add_equality_axioms(problem):
    """Reflexivity, symmetry, transitivity, and congruence for every
    function and predicate of the input."""
    eq = lambda s, t: Literal("=", (s, t), False)
    neq = lambda s, t: Literal("=", (s, t), True)

    def refl(name):
        x = Var("X", name, 0, 0)
        return [eq(x, x)], [x]

    def sym(name):
        x, y = Var("X", name, 0, 0), Var("Y", name, 0, 1)
        return [neq(x, y), eq(y, x)], [x, y]

    def trans(name):
        x, y, z = (Var(n, name, 0, i) for i, n in enumerate("XYZ"))
        return [neq(x, y), neq(y, z), eq(x, z)], [x, y, z]

    _add_axiom(problem, "eq_reflexive", refl)
    _add_axiom(problem, "eq_symmetric", sym)
    _add_axiom(problem, "eq_transitive", trans)

    for f, arity in sorted(problem.functions.items()):
        if arity == 0:
            continue

        def fun_cong(name, f=f, arity=arity):
            xs = [Var(f"X{i}", name, 0, i) for i in range(arity)]
            ys = [Var(f"Y{i}", name, 0, arity + i) for i in range(arity)]
            lits = [neq(x, y) for x, y in zip(xs, ys)]
            lits.append(eq(App(f, tuple(xs)), App(f, tuple(ys))))
            return lits, xs + ys

        _add_axiom(problem, f"eq_fun_{f}", fun_cong)

    for p, arity in sorted(problem.predicates.items()):
        if p == "=" or arity == 0:
            continue

        def pred_subst(name, p=p, arity=arity):
            xs = [Var(f"X{i}", name, 0, i) for i in range(arity)]
            ys = [Var(f"Y{i}", name, 0, arity + i) for i in range(arity)]
            lits = [neq(x, y) for x, y in zip(xs, ys)]
            lits.append(Literal(p, tuple(xs), True))
            lits.append(Literal(p, tuple(ys), False))
            return lits, xs + ys

        _add_axiom(problem, f"eq_pred_{p}", pred_subst)


def load_problem(path, config, tptp_root=None):
    problem = parse_file(path, tptp_root=tptp_root)
    kept = []
    for c in problem.clauses:
        if _is_tautology(c):
            del problem.by_name[c.name]
        else:
            kept.append(c)
    problem.clauses = kept
    if config.equality == "axioms" and "=" in problem.predicates:
        add_equality_axioms(problem)
    return problem


def prove(problem, config, trace=False):
    t0 = time.monotonic()
    deadline = t0 + config.timeout

    def stop_check():
        return time.monotonic() > deadline

    if problem.empty_clause is not None:
        proof = Proof(kind="degenerate")
        stats = {"steps": 0, "wall_ms": _ms_since(t0)}
        return Result("Theorem", proof, stats)

    if not problem.clauses:
        stats = {"steps": 0, "wall_ms": _ms_since(t0)}
        return Result("GaveUp", None, stats, reason="no clauses to refute")

    if config.encoding == "tableau":
        status, proof, stats = prove_tableau(problem, config, stop_check, trace=trace)
    else:
        mode = {"matrix": "em", "core": "eu", "hybrid": "eh"}[config.encoding]
        status, proof, stats = prove_matrix(problem, config, mode, stop_check, trace=trace)

    reason = stats.pop("reason", None)
    if status == "GaveUp" and reason == "NoProofExists":
        status = "NoProof"
    if status == "Theorem":
        start_names = {c.name for c in problem.start_clauses(config.start_mode)}
        ok, why = check_proof(problem, proof, start_names)
        if not ok:
            raise RuntimeError(f"internal error: decoded proof failed checking: {why}")
        stats["proof_size"] = proof.size
    stats["wall_ms"] = _ms_since(t0)
    return Result(status, proof, stats, reason)


def _ms_since(t0):
    return int((time.monotonic() - t0) * 1000)


BENCH_COLUMNS = ["file", "status", "wall_ms", "steps", "proof_size"]


def run_benchmark(paths, config, tptp_root=None):
    """One row per problem file; errors become rows, never aborts."""
    rows = []
    if not paths:
        return rows
    solved = 0
    total_ms = 0
    total_steps = 0
    for path in paths:
        name = os.path.basename(path)
        t0 = time.monotonic()
        try:
            problem = load_problem(path, config, tptp_root=tptp_root)
            result = prove(problem, config)
        except (ParseError, ArityMismatch, OSError):
            rows.append(
                {"file": name, "status": "ParseError", "wall_ms": _ms_since(t0), "steps": 0, "proof_size": ""}
            )
            continue
        status = result.status
        if status == "NoProof":
            status = "GaveUp (NoProofExists)"
        size = result.proof.size if result.proof is not None else ""
        wall = result.stats.get("wall_ms", _ms_since(t0))
        steps = result.stats.get("steps", 0)
        rows.append(
            {"file": name, "status": status, "wall_ms": wall, "steps": steps, "proof_size": size}
        )
        total_ms += wall
        total_steps += steps
        if result.status == "Theorem":
            solved += 1
    rows.append(
        {
            "file": "TOTAL",
            "status": f"{solved}/{len(paths)} Theorem ({config.encoding})",
            "wall_ms": total_ms,
            "steps": total_steps,
            "proof_size": "",
        }
    )
    return rows
