"""Command line front end.

Prints an SZS-style status line for a single problem, or runs a batch
over a directory with --bench and writes a CSV report plus figures.
Exit codes: 0 proof found, 1 no proof, 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import glob
import os
import sys

from .driver import ProverConfig, load_problem, prove, run_benchmark
from .proof import render_proof
from .terms import ArityMismatch
from .tptp import ParseError


def build_parser():
    ap = argparse.ArgumentParser(
        prog="connsat",
        description="Connection prover for clausal TPTP problems, driven by a SAT core.",
    )
    ap.add_argument("file", nargs="?", help="TPTP cnf problem file")
    ap.add_argument(
        "--encoding",
        choices=["tableau", "matrix", "core", "hybrid"],
        default="core",
        help="search encoding (default: core)",
    )
    ap.add_argument("--max-size", type=int, default=8, metavar="N",
                    help="matrix mode: largest copy count per clause tried")
    ap.add_argument("--max-path", type=int, default=8, metavar="N",
                    help="tableau mode: largest path length tried")
    ap.add_argument("--timeout", type=float, default=30.0, metavar="SECS")
    ap.add_argument("--start", choices=["conjecture", "all"], default="conjecture",
                    help="which clauses may start a proof")
    ap.add_argument("--equality", choices=["axioms", "ignore"], default="axioms",
                    help="add equality axioms when = occurs (default: axioms)")
    ap.add_argument("--no-copy-order", action="store_true",
                    help="drop the copy-order symmetry clauses")
    ap.add_argument("--no-subsumption", action="store_true",
                    help="keep subsumed copies in candidate matrices")
    ap.add_argument("--no-instance-symmetry", action="store_true",
                    help="keep copies that instantiate an earlier clause")
    ap.add_argument("--no-subst-order", action="store_true",
                    help="drop the substitution-order tie break between copies")
    ap.add_argument("--regularity", action="store_true",
                    help="tableau mode: forbid repeated literals along a branch")
    ap.add_argument("--proof-out", metavar="FILE", help="write the proof listing here")
    ap.add_argument("--stats", action="store_true", help="print search statistics")
    ap.add_argument("--tptp-root", metavar="DIR", help="base directory for includes")
    ap.add_argument("--bench", metavar="DIR", help="prove every .p file in DIR")
    ap.add_argument("--report-dir", metavar="DIR",
                    help="with --bench: write report.csv and figures here (default: DIR)")
    return ap


def _config_from(args):
    return ProverConfig(
        encoding=args.encoding,
        max_size=args.max_size,
        max_path=args.max_path,
        timeout=args.timeout,
        start_mode=args.start,
        equality=args.equality,
        copy_order=not args.no_copy_order,
        subsumption=not args.no_subsumption,
        instance_symmetry=not args.no_instance_symmetry,
        subst_order=not args.no_subst_order,
        regularity=args.regularity,
        proof_out=args.proof_out,
        show_stats=args.stats,
    )


def _status_line(result):
    if result.status == "NoProof":
        return "% SZS status GaveUp (NoProofExists)"
    return f"% SZS status {result.status}"


def _print_stats(result):
    stats = dict(result.stats)
    stats.pop("trace", None)
    cores = stats.pop("cores", None)
    if cores is not None:
        stats["refinements"] = len(cores)
    mu = stats.pop("mu", None)
    if mu is not None:
        stats["copies"] = " ".join(f"{n}:{k}" for n, k in sorted(mu.items()))
    for key in sorted(stats):
        print(f"% {key} = {stats[key]}")


def _run_single(args, config):
    try:
        problem = load_problem(args.file, config, tptp_root=args.tptp_root)
    except (OSError, ParseError, ArityMismatch) as e:
        print(f"connsat: {e}", file=sys.stderr)
        return 2
    result = prove(problem, config)
    print(_status_line(result))
    if config.show_stats:
        _print_stats(result)
    if result.proof is not None and config.proof_out:
        with open(config.proof_out, "w") as f:
            f.write(render_proof(result.proof))
    return 0 if result.status == "Theorem" else 1


def _run_bench(args, config):
    paths = sorted(glob.glob(os.path.join(args.bench, "*.p")))
    rows = run_benchmark(paths, config, tptp_root=args.tptp_root)
    from .report import write_report

    out_dir = args.report_dir or args.bench
    for path in write_report(rows, out_dir):
        print(f"wrote {path}")
    return 0


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    if (args.file is None) == (args.bench is None):
        ap.error("give exactly one of FILE or --bench DIR")
    if args.report_dir and not args.bench:
        ap.error("--report-dir needs --bench")
    try:
        config = _config_from(args)
    except ValueError as e:
        ap.error(str(e))
    if args.bench:
        return _run_bench(args, config)
    return _run_single(args, config)


if __name__ == "__main__":
    sys.exit(main())
