"""connsat: a connection prover for clausal problems built on a SAT core.

Proof search is phrased as Boolean satisfiability over selector and
connection variables; a user propagator grows the encoding lazily and
keeps the candidate substitution consistent. Accepted models decode to
matrix or tableau proofs that an independent checker verifies.
"""

from .driver import ProverConfig, Result, load_problem, prove, run_benchmark
from .matrix import find_open_path, prove_matrix
from .proof import Proof, ProofCopy, check_proof, parse_proof, render_proof
from .tableau import prove_tableau
from .terms import App, Clause, Literal, Problem, Var, make_copy
from .tptp import ParseError, parse_file, parse_text
from .unify import SubstitutionStore, UnifyError

__version__ = "0.1.0"

__all__ = [
    "App",
    "Clause",
    "Literal",
    "ParseError",
    "Problem",
    "Proof",
    "ProofCopy",
    "ProverConfig",
    "Result",
    "SubstitutionStore",
    "UnifyError",
    "Var",
    "check_proof",
    "find_open_path",
    "load_problem",
    "make_copy",
    "parse_file",
    "parse_proof",
    "parse_text",
    "prove",
    "prove_matrix",
    "prove_tableau",
    "render_proof",
    "run_benchmark",
    "__version__",
]
