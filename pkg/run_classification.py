#!/usr/bin/env python3
"""
CHIROTOPE CLASSIFICATION RUNNER
===============================
Command-line front end: enumerate reorientation classes, check and reduce
chirotopes, search realizations, classify batches into a resumable store,
run the polytope census and re-verify witness files.

Exit codes: 0 success, 1 input or I/O error, 2 soundness error.
"""

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Iterator, List, Optional

import pandas as pd
from dotenv import load_dotenv

from chirotopes.core import Chirotope, ChirotopeError, check_axioms
from chirotopes.enumeration import EnumerationBudgetExceeded, EnumerationConfig, enumerate_classes
from chirotopes.geometry import census, compare_with_known, load_known_counts
from chirotopes.reduction import format_reduction, reduce_chirotope
from chirotopes.solver import Budget, SoundnessError, class_budget, realize
from chirotopes.store import (
    TIMINGS_FILE, ClassifyConfig, ResultStore, StoreCorruptError,
    format_chirotope_line, parse_chirotope_line, run_classify, verify_witness, write_witness,
)

# Configure logging
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

KNOWN_COUNTS = Path(__file__).resolve().parent / "data" / "known_counts.json"
SEED_VARIABLE = "CHIROTOPE_SEED"


def resolve_seed(flag: Optional[int]) -> int:
    """--seed wins; otherwise CHIROTOPE_SEED (from the environment or .env); otherwise 0."""
    if flag is not None:
        return flag
    value = os.getenv(SEED_VARIABLE)
    if value is None:
        return 0
    try:
        return int(value)
    except ValueError:
        raise ChirotopeError(f"{SEED_VARIABLE} must be an integer, got {value!r}") from None


def budget_from_args(args: argparse.Namespace) -> Budget:
    return Budget(
        max_cost_limit=args.budget_cost,
        random_trials=args.budget_trials,
        full_branching=args.full_branching,
    )


def read_lines(source: str) -> Iterator[str]:
    """Non-blank, non-comment lines of a file, or of stdin for '-'."""
    handle = sys.stdin if source == "-" else open(source, "r", encoding="utf-8")
    try:
        for line in handle:
            line = line.strip()
            if line and not line.startswith("#"):
                yield line
    finally:
        if handle is not sys.stdin:
            handle.close()


def read_chirotopes(source: str, validate: bool) -> List[Chirotope]:
    return [parse_chirotope_line(line, validate) for line in read_lines(source)]


def load_known() -> dict:
    try:
        return load_known_counts(KNOWN_COUNTS)
    except (FileNotFoundError, json.JSONDecodeError):
        logger.warning("⚠️ Published counts unavailable; skipping comparison")
        return {}


# ============================================================================
# COMMANDS
# ============================================================================

def cmd_enumerate(args: argparse.Namespace) -> int:
    config = EnumerationConfig(node_limit=args.node_limit, jobs=args.jobs)
    report = enumerate_classes(args.n, args.r, uniform_only=args.uniform_only, config=config)
    for line in report.lines():
        print(line)
    entry = load_known().get("oriented_matroids", {}).get(f"{args.n},{args.r}")
    if entry is not None and not args.uniform_only:
        if (report.class_count, report.uniform_class_count) == (entry["classes"], entry["uniform"]):
            logger.info(f"✅ Matches published count {entry['classes']} ({entry['uniform']})")
        else:
            logger.warning(f"⚠️ Published count is {entry['classes']} ({entry['uniform']})")
    return 0


def cmd_check(args: argparse.Namespace) -> int:
    invalid = 0
    for line in read_lines(args.input):
        chi = parse_chirotope_line(line)
        report = check_axioms(chi)
        if report.valid:
            print(f"{format_chirotope_line(chi)}\tvalid")
        else:
            invalid += 1
            print(f"{format_chirotope_line(chi)}\tinvalid\t{report.witness}")
    logger.info(f"📊 {invalid} invalid line(s)")
    return 0


def cmd_reduce(args: argparse.Namespace) -> int:
    for chi in read_chirotopes(args.input, args.validate_input):
        frame, system, grid = reduce_chirotope(chi)
        print(format_reduction(chi, frame, system, grid))
        print()
    return 0


def cmd_realize(args: argparse.Namespace) -> int:
    seed = resolve_seed(args.seed)
    budget = budget_from_args(args)
    for chi in read_chirotopes(args.input, args.validate_input):
        outcome = realize(chi, class_budget(budget, chi.sign_string, seed), try_dual=args.try_dual)
        detail = outcome.reason.value if outcome.reason is not None else ("dual" if outcome.via_dual else "direct")
        print(f"{format_chirotope_line(chi)}\t{outcome.status}\t{detail}")
        if outcome.feasible and args.witness_dir:
            path = Path(args.witness_dir) / f"{chi.n}_{chi.r}_{chi.sign_string}.txt"
            write_witness(outcome.realization, path)
            logger.info(f"💾 Witness written to {path}")
    return 0


def print_stats(store_dir: Path) -> None:
    """Distributions of reduced system sizes and timings of a store."""
    store = ResultStore(store_dir)
    records = pd.DataFrame(list(store.records.values()))
    if records.empty:
        print("No records.")
        return
    print("\n" + "=" * 80)
    print("📊 CLASSIFICATION STATISTICS")
    print("=" * 80)
    print(records["status"].value_counts().to_string())
    for column in ("variables", "constraints"):
        if column in records:
            print(f"\nNumber of {column}:")
            print(records[column].value_counts().sort_index().to_string())
    timings_path = store_dir / TIMINGS_FILE
    if timings_path.exists():
        timings = pd.read_csv(timings_path, sep="\t")
        bins = [0, 0.01, 0.1, 1, 10, 100, 1000, float("inf")]
        labels = ["<10ms", "10-100ms", "0.1-1s", "1-10s", "10-100s", "100-1000s", ">1000s"]
        print("\nComputation time:")
        print(pd.cut(timings["seconds"], bins=bins, labels=labels).value_counts().sort_index().to_string())


def cmd_classify(args: argparse.Namespace) -> int:
    config = ClassifyConfig(
        store_dir=Path(args.store),
        jobs=args.jobs,
        seed=resolve_seed(args.seed),
        budget=budget_from_args(args),
        validate_input=args.validate_input,
        try_dual=args.try_dual,
    )
    if args.input:
        chirotopes = read_chirotopes(args.input, config.validate_input)
    elif args.n and args.r:
        report = enumerate_classes(args.n, args.r, config=EnumerationConfig(jobs=args.jobs))
        chirotopes = list(report.chirotopes())
    else:
        raise ChirotopeError("classify needs --input or both --n and --r")
    run_classify(chirotopes, config)
    if args.stats:
        print_stats(config.store_dir)
    return 0


def cmd_census(args: argparse.Namespace) -> int:
    if args.input:
        chirotopes = read_chirotopes(args.input, args.validate_input)
        representatives = [chi.sign_string for chi in chirotopes]
        n, r = (chirotopes[0].n, chirotopes[0].r) if chirotopes else (args.n, args.r)
    elif args.n and args.r:
        report = enumerate_classes(args.n, args.r, config=EnumerationConfig(jobs=args.jobs))
        representatives, n, r = report.representatives, args.n, args.r
    else:
        raise ChirotopeError("census needs --input or both --n and --r")
    if n is None or r is None:
        raise ChirotopeError("census of an empty input needs --n and --r")
    result = census(n, r, representatives, budget_from_args(args), resolve_seed(args.seed), args.jobs)
    compare_with_known(result.summary, load_known())
    if args.output:
        Path(args.output).write_text(result.to_tsv(), encoding="utf-8")
        logger.info(f"💾 Census summary written to {args.output}")
    else:
        print(result.to_tsv(), end="")
    return 0


def cmd_verify_witness(args: argparse.Namespace) -> int:
    chi = parse_chirotope_line(args.chirotope, args.validate_input)
    mismatch = verify_witness(Path(args.witness), chi)
    if mismatch is None:
        print(f"✅ {args.witness} realizes {format_chirotope_line(chi)}")
        return 0
    t, expected, actual = mismatch
    print(f"❌ {args.witness}: tuple {t} has sign {actual.char}, expected {expected.char}")
    return 1


# ============================================================================
# ARGUMENTS
# ============================================================================

def add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--budget-cost", type=float, default=Budget.max_cost_limit,
                        help="maximal total-cost limit of the lengthening search")
    parser.add_argument("--budget-trials", type=int, default=Budget.random_trials,
                        help="random assignments per leaf")
    parser.add_argument("--seed", type=int, default=None,
                        help=f"global seed (default: ${SEED_VARIABLE} or 0)")
    parser.add_argument("--jobs", type=int, default=1, help="worker processes")
    parser.add_argument("--full-branching", action="store_true",
                        help="also branch on zero coefficient signs")
    parser.add_argument("--validate-input", action="store_true",
                        help="run the axiom check on every input line")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Chirotope realizability workbench")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="list reorientation classes of simple chirotopes")
    p.add_argument("n", type=int)
    p.add_argument("r", type=int)
    p.add_argument("--uniform-only", action="store_true")
    p.add_argument("--node-limit", type=int, default=EnumerationConfig.node_limit)
    add_common(p)
    p.set_defaults(handler=cmd_enumerate)

    p = sub.add_parser("check", help="run the axiom check on chirotope lines")
    p.add_argument("input", nargs="?", default="-")
    add_common(p)
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("reduce", help="dump the reduced polynomial systems")
    p.add_argument("input", nargs="?", default="-")
    add_common(p)
    p.set_defaults(handler=cmd_reduce)

    p = sub.add_parser("realize", help="search realizations of chirotope lines")
    p.add_argument("input", nargs="?", default="-")
    p.add_argument("--witness-dir", default=None)
    p.add_argument("--try-dual", action="store_true")
    add_common(p)
    p.set_defaults(handler=cmd_realize)

    p = sub.add_parser("classify", help="classify a batch into a resumable store")
    p.add_argument("--input", default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--store", default=str(ClassifyConfig.store_dir))
    p.add_argument("--stats", action="store_true")
    p.add_argument("--try-dual", action="store_true")
    add_common(p)
    p.set_defaults(handler=cmd_classify)

    p = sub.add_parser("census", help="count polytope types of realizable classes")
    p.add_argument("--input", default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--output", default=None)
    add_common(p)
    p.set_defaults(handler=cmd_census)

    p = sub.add_parser("verify-witness", help="re-verify a witness file")
    p.add_argument("chirotope", help="chirotope line 'n r signs'")
    p.add_argument("witness")
    add_common(p)
    p.set_defaults(handler=cmd_verify_witness)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    load_dotenv()
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except SoundnessError as e:
        logger.error(f"❌ Soundness error: {e}")
        return 2
    except (ChirotopeError, StoreCorruptError, EnumerationBudgetExceeded, OSError, ValueError) as e:
        logger.error(f"❌ {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
