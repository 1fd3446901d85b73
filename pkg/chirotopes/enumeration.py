#!/usr/bin/env python3
"""
Chirotope Enumeration
=====================
Depth-first sign assignment over Λ(n, r) in lexicographic order with
Grassmann-Plücker pruning. Prefixes that some relabeling, reorientation or
negation already maps to a smaller string are cut, and completed chirotopes are
kept when they are simple, so exactly one representative of every
reorientation class is emitted.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from chirotopes.core import (
    Chirotope, ChirotopeError, PrefixCanonicity, grassmann_plucker_table, is_simple, lambda_tuples,
)

# Configure logging
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

# Largest element count the enumeration is meant for
GUARDRAIL_N = 7


class EnumerationBudgetExceeded(RuntimeError):
    """The depth-first search visited more nodes than allowed."""


@dataclass
class EnumerationConfig:
    """Search limits and parallelism for enumerate_classes"""
    # DFS nodes allowed per partition
    node_limit: int = 50_000_000

    # Prefix length used to split the search tree (0 picks one automatically)
    split_depth: int = 0

    # Worker processes (1 runs in-process)
    jobs: int = 1


@dataclass
class EnumerationStats:
    nodes: int = 0
    leaves: int = 0
    non_simple: int = 0
    non_canonical: int = 0

    def merge(self, other: 'EnumerationStats') -> None:
        self.nodes += other.nodes
        self.leaves += other.leaves
        self.non_simple += other.non_simple
        self.non_canonical += other.non_canonical


@dataclass
class EnumerationReport:
    """Reorientation-class representatives of simple rank-r chirotopes on n elements"""
    n: int
    r: int
    class_count: int
    uniform_class_count: int
    representatives: List[str] = field(default_factory=list)
    stats: EnumerationStats = field(default_factory=EnumerationStats)

    def chirotopes(self) -> Iterator[Chirotope]:
        for text in self.representatives:
            yield Chirotope.from_string(self.n, self.r, text)

    def lines(self) -> Iterator[str]:
        """Representatives in the `n r signs` line format."""
        for text in self.representatives:
            yield f"{self.n} {self.r} {text}"


class _SignSearch:
    """Incremental DFS over one subtree; positions before the prefix are fixed."""

    def __init__(self, n: int, r: int, uniform_only: bool, node_limit: int):
        self.n, self.r = n, r
        self.table = grassmann_plucker_table(n, r)
        self.m = len(lambda_tuples(n, r))
        self.alphabet = (1, -1) if uniform_only else (1, -1, 0)
        self.node_limit = node_limit
        self.stats = EnumerationStats()
        self.found: List[str] = []
        self.closing = [np.flatnonzero(self.table.last_position == k) for k in range(self.m)]
        # positions of the tuples (1..r-1, j), j = r+1..n
        self.block_end = 1 + n - r
        self.minimality = PrefixCanonicity(n, r)

    def allowed(self, k: int, prefix: np.ndarray) -> Sequence[int]:
        if k == 0:
            return (1,)
        if k < self.block_end:
            # the block reads +...+0...0
            if k > 1 and prefix[k - 1] == 0:
                return (0,)
            return tuple(v for v in self.alphabet if v != -1)
        return self.alphabet

    def consistent(self, signs: np.ndarray, k: int) -> bool:
        rows = self.closing[k]
        return rows.size == 0 or not self.table.violations(signs, rows).any()

    def viable(self, signs: np.ndarray, k: int) -> bool:
        """Axioms hold on signs[:k+1] and no orbit element beats that prefix."""
        if not self.consistent(signs, k):
            return False
        if self.minimality.rejects(signs, k + 1):
            self.stats.non_canonical += 1
            return False
        return True

    def prefixes(self, depth: int) -> List[Tuple[int, ...]]:
        """All consistent sign prefixes of the given length."""
        signs = np.zeros(self.m + 1, dtype=np.int8)
        result: List[Tuple[int, ...]] = []

        def walk(k: int) -> None:
            if k == depth:
                result.append(tuple(int(s) for s in signs[:depth]))
                return
            for value in self.allowed(k, signs):
                signs[k] = value
                if self.viable(signs, k):
                    walk(k + 1)
            signs[k] = 0

        walk(0)
        return result

    def run(self, prefix: Tuple[int, ...]) -> List[str]:
        signs = np.zeros(self.m + 1, dtype=np.int8)
        signs[:len(prefix)] = prefix
        self._walk(len(prefix), signs)
        return self.found

    def _walk(self, k: int, signs: np.ndarray) -> None:
        self.stats.nodes += 1
        if self.stats.nodes > self.node_limit:
            raise EnumerationBudgetExceeded(
                f"node limit {self.node_limit:,} exceeded for n={self.n}, r={self.r}")
        if k == self.m:
            self._leaf(signs)
            return
        for value in self.allowed(k, signs):
            signs[k] = value
            if self.viable(signs, k):
                self._walk(k + 1, signs)
        signs[k] = 0

    def _leaf(self, signs: np.ndarray) -> None:
        self.stats.leaves += 1
        chi = Chirotope(self.n, self.r, tuple(int(s) for s in signs[:self.m]))
        if not is_simple(chi):
            self.stats.non_simple += 1
            return
        self.found.append(chi.sign_string)


def _explore(task: Tuple[int, int, bool, int, Tuple[int, ...]]) -> Tuple[List[str], EnumerationStats]:
    n, r, uniform_only, node_limit, prefix = task
    search = _SignSearch(n, r, uniform_only, node_limit)
    found = search.run(prefix)
    return found, search.stats


def _auto_split(m: int, jobs: int) -> int:
    if jobs <= 1:
        return 0
    return min(m, 6)


def enumerate_classes(n: int, r: int, uniform_only: bool = False,
                      config: Optional[EnumerationConfig] = None) -> EnumerationReport:
    """
    One canonical representative per reorientation class of simple chirotopes.

    Args:
        n: Number of elements
        r: Rank (1 <= r <= n)
        uniform_only: Restrict the alphabet to {+, -}
        config: Node limit, split depth and worker count

    Returns:
        EnumerationReport with sorted canonical sign strings
    """
    config = config or EnumerationConfig()
    if not 1 <= r <= n:
        raise ChirotopeError(f"need 1 <= r <= n, got n={n}, r={r}")
    if n > GUARDRAIL_N:
        logger.warning(f"⚠️ Enumerating n={n} exceeds the intended range n <= {GUARDRAIL_N}")

    search = _SignSearch(n, r, uniform_only, config.node_limit)
    depth = config.split_depth or _auto_split(search.m, config.jobs)
    prefixes = search.prefixes(depth) if depth else [()]
    tasks = [(n, r, uniform_only, config.node_limit, prefix) for prefix in prefixes]
    logger.info(f"🔍 Enumerating OM({r},{n}){' uniform' if uniform_only else ''}: "
                f"{len(tasks)} partition(s), {config.jobs} job(s)")

    found: List[str] = []
    stats = EnumerationStats()
    if config.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            with tqdm(total=len(tasks), desc=f"OM({r},{n})", unit="part", ncols=100) as pbar:
                for part, part_stats in pool.map(_explore, tasks):
                    found.extend(part)
                    stats.merge(part_stats)
                    pbar.update(1)
    else:
        for task in tasks:
            part, part_stats = _explore(task)
            found.extend(part)
            stats.merge(part_stats)

    representatives = sorted(set(found))
    uniform = sum(1 for text in representatives if '0' not in text)
    logger.info(f"📊 OM({r},{n}): {len(representatives)} classes ({uniform} uniform); "
                f"nodes={stats.nodes:,} leaves={stats.leaves:,} "
                f"non-simple={stats.non_simple:,} non-canonical={stats.non_canonical:,}")
    return EnumerationReport(n, r, len(representatives), uniform, representatives, stats)

