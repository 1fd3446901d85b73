#!/usr/bin/env python3
"""
Classification Store
====================
Chirotope line format, witness files and the append-only result store used
by batch classification. Stores are byte-identical across runs with the same
inputs, flags and seed; wall-clock timings go to a separate file.
"""

import hashlib
import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Tuple

from tqdm import tqdm

from chirotopes.core import (
    Chirotope, ChirotopeError, SymmetryGroup, canonical_form, check_axioms, lambda_tuples,
)
from chirotopes.solver import Budget, Realization, class_budget, first_mismatch, realize

# Configure logging
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

RESULTS_FILE = "results.jsonl"
TIMINGS_FILE = "timings.tsv"
WITNESS_DIR = "witnesses"


class StoreCorruptError(RuntimeError):
    """The result store holds a record that cannot be parsed."""


# ============================================================================
# LINE AND WITNESS FORMATS
# ============================================================================

def parse_chirotope_line(text: str, validate: bool = False) -> Chirotope:
    """
    Parse `n r signstring`.

    Args:
        text: The line
        validate: Also run the chirotope axiom check

    Returns:
        The Chirotope
    """
    fields = text.split()
    if len(fields) != 3:
        raise ChirotopeError(f"expected 'n r signs', got {text.strip()!r}")
    try:
        n, r = int(fields[0]), int(fields[1])
    except ValueError:
        raise ChirotopeError(f"n and r must be integers in {text.strip()!r}") from None
    if not 1 <= r <= n:
        raise ChirotopeError(f"need 1 <= r <= n, got n={n}, r={r}")
    expected = len(lambda_tuples(n, r))
    if len(fields[2]) != expected:
        raise ChirotopeError(f"expected {expected} signs, got {len(fields[2])}")
    chi = Chirotope.from_string(n, r, fields[2])
    if validate:
        report = check_axioms(chi)
        if not report.valid:
            raise ChirotopeError(f"not a chirotope: {report.witness}")
    return chi


def format_chirotope_line(chi: Chirotope) -> str:
    return str(chi)


def write_witness(matrix: Realization, path: Path) -> Path:
    """r lines of n rationals `p/q` separated by spaces."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = []
    for row in matrix:
        values = [Fraction(x) for x in row]
        lines.append(" ".join(f"{v.numerator}/{v.denominator}" for v in values))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def read_witness(path: Path) -> Realization:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except FileNotFoundError:
        logger.error(f"❌ Witness file not found: {path}")
        raise
    try:
        return [[Fraction(token) for token in line.split()] for line in text.splitlines() if line.strip()]
    except (ValueError, ZeroDivisionError) as e:
        raise ChirotopeError(f"malformed witness file {path}: {e}") from None


def verify_witness(path: Path, chi: Chirotope):
    """None when the witness realizes chi, else (tuple, expected, actual) of the first mismatch."""
    return first_mismatch(read_witness(path), chi)


def witness_name(n: int, r: int, canonical: str) -> str:
    digest = hashlib.sha256(canonical.encode()).hexdigest()[:16]
    return f"{n}_{r}_{digest}.txt"


# ============================================================================
# RESULT STORE
# ============================================================================

class ResultStore:
    """Append-only JSON-lines records keyed by canonical sign string."""

    def __init__(self, directory: Path):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        (self.directory / WITNESS_DIR).mkdir(exist_ok=True)
        self.path = self.directory / RESULTS_FILE
        self.records: Dict[str, Dict[str, Any]] = {}
        self._load()

    def _load(self) -> None:
        if not self.path.exists():
            self.path.touch()
            return
        data = self.path.read_bytes()
        if data and not data.endswith(b"\n"):
            cut = data.rfind(b"\n") + 1
            logger.warning(f"⚠️ Truncating partial last record in {self.path}")
            with open(self.path, "r+b") as f:
                f.truncate(cut)
            data = data[:cut]
        for number, line in enumerate(data.decode("utf-8").splitlines(), start=1):
            try:
                record = json.loads(line)
                key = record["canonical"]
            except (json.JSONDecodeError, KeyError, TypeError) as e:
                raise StoreCorruptError(f"{self.path}:{number}: unreadable record ({e})") from None
            self.records[key] = record

    def __contains__(self, canonical: str) -> bool:
        return canonical in self.records

    def __len__(self) -> int:
        return len(self.records)

    def append(self, record: Dict[str, Any]) -> None:
        if record["canonical"] in self.records:
            raise ValueError(f"record for {record['canonical']} already final")
        with open(self.path, "a", encoding="utf-8") as f:
            f.write(json.dumps(record, sort_keys=True) + "\n")
            f.flush()
            os.fsync(f.fileno())
        self.records[record["canonical"]] = record

    def witness_path(self, n: int, r: int, canonical: str) -> Path:
        return self.directory / WITNESS_DIR / witness_name(n, r, canonical)

    def log_timing(self, canonical: str, seconds: float) -> None:
        path = self.directory / TIMINGS_FILE
        new = not path.exists()
        with open(path, "a", encoding="utf-8") as f:
            if new:
                f.write("canonical\tseconds\n")
            f.write(f"{canonical}\t{seconds:.3f}\n")


# ============================================================================
# CLASSIFICATION
# ============================================================================

@dataclass
class ClassifyConfig:
    """Settings for a classification run"""
    # Directory of results.jsonl, witnesses/ and timings.tsv
    store_dir: Path = Path("classification_store")

    # Worker processes
    jobs: int = 1

    # Global seed (overridable by CHIROTOPE_SEED)
    seed: int = 0

    # Solver budget for each class
    budget: Budget = field(default_factory=Budget)

    # Run the axiom check on every input line
    validate_input: bool = False

    # Realize the dual when the direct search is inconclusive
    try_dual: bool = False


def _classify_one(task: Tuple[int, int, str, Budget, int, bool]) -> Tuple[str, Dict[str, Any], Optional[Realization], float]:
    n, r, canonical, budget, seed, try_dual = task
    started = time.monotonic()
    chi = Chirotope.from_string(n, r, canonical)
    outcome = realize(chi, class_budget(budget, canonical, seed), try_dual=try_dual)
    record = {
        "canonical": canonical,
        "n": n,
        "r": r,
        "status": outcome.status,
        "reason": outcome.reason.value if outcome.reason is not None else None,
        "via_dual": outcome.via_dual,
        "cost_limit": outcome.stats.final_cost_limit,
        "nodes": outcome.stats.nodes,
        "variables": outcome.stats.variables,
        "constraints": outcome.stats.constraints,
    }
    return canonical, record, outcome.realization, time.monotonic() - started


def canonical_inputs(chirotopes: Iterable[Chirotope]) -> List[Chirotope]:
    """Distinct reorientation-class representatives in canonical-string order."""
    seen: Dict[Tuple[int, int, str], Chirotope] = {}
    for chi in chirotopes:
        key = canonical_form(chi, SymmetryGroup.FULL)
        seen.setdefault((chi.n, chi.r, key), Chirotope.from_string(chi.n, chi.r, key))
    return [seen[k] for k in sorted(seen)]


def run_classify(chirotopes: Iterable[Chirotope], config: Optional[ClassifyConfig] = None) -> List[Dict[str, Any]]:
    """
    Realize every class not yet final in the store and append its record.

    Args:
        chirotopes: Input chirotopes (canonicalized and deduplicated here)
        config: Store location, jobs, seed, budget

    Returns:
        The records appended by this run, in canonical order
    """
    config = config or ClassifyConfig()
    store = ResultStore(config.store_dir)
    pending = [chi for chi in canonical_inputs(chirotopes) if chi.sign_string not in store]
    logger.info(f"🔍 Classifying {len(pending)} class(es); {len(store)} already in {config.store_dir}")
    tasks = [(chi.n, chi.r, chi.sign_string, config.budget, config.seed, config.try_dual) for chi in pending]

    appended = []
    solver_logger = logging.getLogger('chirotopes.solver')
    original_level = solver_logger.level
    solver_logger.setLevel(logging.WARNING)
    try:
        with tqdm(total=len(tasks), desc="classify", unit="class", ncols=100) as pbar:
            if config.jobs > 1 and len(tasks) > 1:
                pool = ProcessPoolExecutor(max_workers=config.jobs)
                results = pool.map(_classify_one, tasks)
            else:
                pool = None
                results = map(_classify_one, tasks)
            try:
                for canonical, record, matrix, seconds in results:
                    if matrix is not None:
                        path = store.witness_path(record["n"], record["r"], canonical)
                        write_witness(matrix, path)
                        record["witness"] = str(path.relative_to(store.directory))
                    else:
                        record["witness"] = None
                    store.append(record)
                    store.log_timing(canonical, seconds)
                    appended.append(record)
                    pbar.update(1)
            finally:
                if pool is not None:
                    pool.shutdown()
    finally:
        solver_logger.setLevel(original_level)

    realizable = sum(1 for rec in appended if rec["status"] == "realizable")
    logger.info(f"✅ {len(appended)} new record(s): {realizable} realizable, {len(appended) - realizable} unknown")
    return appended
