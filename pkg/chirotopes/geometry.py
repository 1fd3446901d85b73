#!/usr/bin/env python3
"""
Polytope Census
===============
Face lattices of matroid polytopes from their non-negative cocircuits,
canonical lattice codes, simplicial/neighborly tests and the census that
turns reorientation classes into counts of combinatorial polytope types.
"""

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, permutations, product
from pathlib import Path
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Tuple

import networkx as nx
import pandas as pd
from tqdm import tqdm

from chirotopes.core import (
    Chirotope, ChirotopeError, SymmetryGroup, canonical_form, cocircuits, is_acyclic,
    is_matroid_polytope, is_uniform, transform,
)
from chirotopes.solver import Budget, Realization, class_budget, realize, transform_realization

# Configure logging
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

SUMMARY_COLUMNS = [
    "n", "r", "classes", "realizable", "acyclic_relabeling_classes",
    "matroid_polytopes", "polytope_types", "simplicial", "neighborly",
]


@dataclass(frozen=True)
class FaceLattice:
    """Vertex-facet incidences of a matroid polytope; other faces on demand."""
    vertex_count: int
    facets: Tuple[FrozenSet[int], ...]

    @cached_property
    def canonical_code(self) -> bytes:
        return canonical_lattice(self)

    def faces(self) -> List[FrozenSet[int]]:
        """Intersection closure of the facets with bottom and top added."""
        top = frozenset(range(1, self.vertex_count + 1))
        found = {top, frozenset()}
        frontier = set(self.facets)
        while frontier:
            found |= frontier
            fresh = set()
            for face in frontier:
                for facet in self.facets:
                    meet = face & facet
                    if meet not in found:
                        fresh.add(meet)
            frontier = fresh
        return sorted(found, key=lambda f: (len(f), sorted(f)))

    def hasse_diagram(self) -> nx.DiGraph:
        """Edges from each face to the faces covering it."""
        faces = self.faces()
        graph = nx.DiGraph()
        graph.add_nodes_from(faces)
        for lower in faces:
            above = [upper for upper in faces if lower < upper]
            for upper in above:
                if not any(lower < middle < upper for middle in above):
                    graph.add_edge(lower, upper)
        return graph

    def is_face(self, vertices: Iterable[int]) -> bool:
        subset = frozenset(vertices)
        closure = frozenset(range(1, self.vertex_count + 1))
        for facet in self.facets:
            if subset <= facet:
                closure &= facet
        return closure == subset


def face_lattice(chi: Chirotope) -> FaceLattice:
    """Facets are the zero sets of the non-negative cocircuits."""
    if not is_matroid_polytope(chi):
        raise ChirotopeError(f"{chi.sign_string} is not a matroid polytope")
    facets = set()
    for vector in cocircuits(chi):
        for candidate in (vector, -vector):
            if not candidate.negative:
                facets.add(frozenset(candidate.zeros))
    ordered = tuple(sorted(facets, key=lambda f: (len(f), sorted(f))))
    return FaceLattice(chi.n, ordered)


def f_vector(fl: FaceLattice) -> List[int]:
    """Number of faces of each dimension 0 .. d-1 (from Hasse diagram heights)."""
    graph = fl.hasse_diagram()
    heights = nx.single_source_shortest_path_length(graph, frozenset())
    top = frozenset(range(1, fl.vertex_count + 1))
    dimension = heights[top] - 1
    counts = [0] * dimension
    for face, height in heights.items():
        if 1 <= height <= dimension:
            counts[height - 1] += 1
    return counts


def _refined_colors(fl: FaceLattice) -> Dict[int, int]:
    """Stable vertex colors by iterated refinement over facet incidences."""
    vertices = range(1, fl.vertex_count + 1)
    colors = {v: sum(1 for f in fl.facets if v in f) for v in vertices}
    while True:
        signature = {
            v: (colors[v], tuple(sorted(tuple(sorted(colors[u] for u in f)) for f in fl.facets if v in f)))
            for v in vertices
        }
        ranks = {s: k for k, s in enumerate(sorted(set(signature.values())))}
        refined = {v: ranks[signature[v]] for v in vertices}
        if len(set(refined.values())) == len(set(colors.values())):
            return refined
        colors = refined


def _facet_code(fl: FaceLattice, label: Dict[int, int]) -> Tuple[int, ...]:
    return tuple(sorted(sum(1 << label[v] for v in f) for f in fl.facets))


def _encode(fl: FaceLattice, masks: Tuple[int, ...]) -> bytes:
    return f"{fl.vertex_count}:{','.join(format(m, 'x') for m in masks)}".encode()


def canonical_lattice(fl: FaceLattice) -> bytes:
    """
    Code equal for two lattices iff their vertex-facet incidences are
    isomorphic: refine vertex colors, then minimize the sorted facet bitmasks
    over all orderings that respect the color cells.
    """
    colors = _refined_colors(fl)
    cells: List[List[int]] = []
    for color in sorted(set(colors.values())):
        cells.append([v for v in sorted(colors) if colors[v] == color])
    best: Optional[Tuple[int, ...]] = None
    for arrangement in product(*(permutations(cell) for cell in cells)):
        order = [v for cell in arrangement for v in cell]
        label = {v: k for k, v in enumerate(order)}
        masks = _facet_code(fl, label)
        if best is None or masks < best:
            best = masks
    return _encode(fl, best or ())


def brute_force_lattice_code(fl: FaceLattice) -> bytes:
    """Minimum over every vertex permutation, without refinement."""
    best = None
    for order in permutations(range(1, fl.vertex_count + 1)):
        masks = _facet_code(fl, {v: k for k, v in enumerate(order)})
        if best is None or masks < best:
            best = masks
    return _encode(fl, best or ())


def is_simplicial(fl: FaceLattice, r: int) -> bool:
    return all(len(f) == r - 1 for f in fl.facets)


def is_neighborly(fl: FaceLattice, r: int) -> bool:
    """Every vertex subset of size ⌊(r-1)/2⌋ is a face."""
    k = (r - 1) // 2
    return all(fl.is_face(subset) for subset in combinations(range(1, fl.vertex_count + 1), k))


# ============================================================================
# CENSUS
# ============================================================================

@dataclass
class CensusRecord:
    """One relabeling class (up to global negation) of an acyclic reorientation"""
    canonical: str
    n: int
    r: int
    status: str
    source: str
    reorientation: Tuple[int, ...] = ()
    witness: Optional[str] = None
    realization: Optional[Realization] = None
    acyclic: bool = True
    matroid_polytope: bool = False
    uniform: bool = False
    simplicial: bool = False
    neighborly: bool = False
    lattice_code: Optional[str] = None

    def as_dict(self) -> Dict[str, Any]:
        return {
            "canonical": self.canonical,
            "n": self.n,
            "r": self.r,
            "status": self.status,
            "source": self.source,
            "reorientation": list(self.reorientation),
            "witness": self.witness,
            "acyclic": self.acyclic,
            "matroid_polytope": self.matroid_polytope,
            "uniform": self.uniform,
            "simplicial": self.simplicial,
            "neighborly": self.neighborly,
            "lattice_code": self.lattice_code,
        }


@dataclass
class CensusReport:
    records: List[CensusRecord] = field(default_factory=list)
    summary: pd.DataFrame = field(default_factory=lambda: pd.DataFrame(columns=SUMMARY_COLUMNS))

    def to_tsv(self) -> str:
        return self.summary.to_csv(sep="\t", index=False)


def _class_records(task: Tuple[int, int, str, Budget, int]) -> Tuple[bool, List[CensusRecord]]:
    """Realize one reorientation class and expand it into relabeling-class records."""
    n, r, text, budget, seed = task
    chi = Chirotope.from_string(n, r, text)
    outcome = realize(chi, class_budget(budget, text, seed))
    status = outcome.status
    records: Dict[str, CensusRecord] = {}
    for mask in range(1 << n):
        flipped = tuple(e for e in range(1, n + 1) if mask >> (e - 1) & 1)
        reoriented = transform(chi, reorientation=set(flipped))
        if not is_acyclic(reoriented):
            continue
        key = canonical_form(reoriented, SymmetryGroup.RELABEL_NEGATE)
        if key in records:
            continue
        record = CensusRecord(key, n, r, status, text, flipped, uniform=is_uniform(reoriented))
        if outcome.feasible:
            record.realization = transform_realization(outcome.realization, reorientation=set(flipped))
        if is_matroid_polytope(reoriented):
            fl = face_lattice(reoriented)
            record.matroid_polytope = True
            record.simplicial = is_simplicial(fl, r)
            record.neighborly = is_neighborly(fl, r)
            record.lattice_code = fl.canonical_code.decode()
        records[key] = record
    return outcome.feasible, [records[k] for k in sorted(records)]


def summarize(n: int, r: int, classes: int, realizable: int, records: List[CensusRecord]) -> pd.DataFrame:
    """One summary row; polytope types count lattices met by a realized matroid polytope."""
    polytopes = [rec for rec in records if rec.matroid_polytope]
    realized: Dict[str, CensusRecord] = {}
    for rec in polytopes:
        if rec.status == "realizable":
            realized.setdefault(rec.lattice_code, rec)
    row = {
        "n": n,
        "r": r,
        "classes": classes,
        "realizable": realizable,
        "acyclic_relabeling_classes": len(records),
        "matroid_polytopes": len(polytopes),
        "polytope_types": len(realized),
        "simplicial": sum(1 for rec in realized.values() if rec.simplicial),
        "neighborly": sum(1 for rec in realized.values() if rec.neighborly),
    }
    return pd.DataFrame([row], columns=SUMMARY_COLUMNS)


def census(n: int, r: int, representatives: List[str], budget: Optional[Budget] = None,
           seed: int = 0, jobs: int = 1) -> CensusReport:
    """
    Realize every reorientation class, expand to acyclic relabeling classes,
    extract matroid polytopes and count their face lattices.

    Args:
        n, r: Shape of the chirotopes
        representatives: Canonical sign strings of the reorientation classes
        budget: Solver budget (seeded per class)
        seed: Global seed
        jobs: Worker processes

    Returns:
        CensusReport with one record per relabeling class and a summary row
    """
    budget = budget or Budget()
    tasks = [(n, r, text, budget, seed) for text in representatives]
    results: List[Tuple[bool, List[CensusRecord]]] = []
    with tqdm(total=len(tasks), desc=f"census OM({r},{n})", unit="class", ncols=100) as pbar:
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                for result in pool.map(_class_records, tasks):
                    results.append(result)
                    pbar.update(1)
        else:
            for task in tasks:
                results.append(_class_records(task))
                pbar.update(1)

    merged: Dict[str, CensusRecord] = {}
    for _, records in results:
        for rec in records:
            merged.setdefault(rec.canonical, rec)
    records = [merged[k] for k in sorted(merged)]
    realizable = sum(1 for feasible, _ in results if feasible)
    unknown = len(results) - realizable
    if unknown:
        logger.warning(f"⚠️ {unknown} class(es) of OM({r},{n}) stayed unknown; their records are kept")
    summary = summarize(n, r, len(representatives), realizable, records)
    logger.info(f"📊 Census OM({r},{n}): {summary.iloc[0].to_dict()}")
    return CensusReport(records, summary)


def load_known_counts(path: Path) -> Dict[str, Any]:
    """Published counts keyed by 'n,r'."""
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except FileNotFoundError:
        logger.error(f"❌ Known counts file not found: {path}")
        raise
    except json.JSONDecodeError as e:
        logger.error(f"❌ Invalid JSON in {path}: {e}")
        raise


def compare_with_known(summary: pd.DataFrame, known: Dict[str, Any]) -> bool:
    """Log whether polytope-type and simplicial counts match the published ones."""
    all_match = True
    for row in summary.itertuples(index=False):
        entry = known.get("polytopes", {}).get(f"{row.n},{row.r}")
        if entry is None:
            logger.info(f"🔍 No published polytope counts for n={row.n}, r={row.r}")
            continue
        if (row.polytope_types, row.simplicial) == (entry["types"], entry["simplicial"]):
            logger.info(f"✅ n={row.n}, r={row.r} matches: {row.polytope_types} ({row.simplicial})")
        else:
            all_match = False
            logger.warning(f"⚠️ n={row.n}, r={row.r} differs: {row.polytope_types} ({row.simplicial}) "
                           f"vs published {entry['types']} ({entry['simplicial']})")
    return all_match
