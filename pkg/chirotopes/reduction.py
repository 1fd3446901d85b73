#!/usr/bin/env python3
"""
System Reduction
================
Turns a chirotope into the smallest practical sign-constrained polynomial
system whose solutions are its realizations:

1. generalized mutations (tuples whose sign no exchange relation determines)
2. Grassmann-Plücker forcing closure and the greedy minimal reduced system
3. frame selection: basis, normalized row and column
4. the determinant system over the reduced tuples, with trivial equalities
   eliminated by merging variables
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

import numpy as np

from chirotopes.core import (
    Chirotope, ChirotopeError, RTuple, Sign, eval_sign, extended_signs,
    grassmann_plucker_table, lambda_tuples, tuple_index,
)
from chirotopes.polysys import (
    Constraint, PolySystem, Polynomial, Relation, Witness, constant, format_system,
    make_ring, simplify_constraint, strip_content, substitute_linear, to_fraction,
)

# Configure logging
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

# Bases examined by select_frame
FRAME_BASIS_LIMIT = 500


# ============================================================================
# GENERALIZED MUTATIONS AND CLOSURE
# ============================================================================

def generalized_mutations(chi: Chirotope) -> Set[RTuple]:
    """
    Tuples whose sign can be changed with the result still a chirotope.

    A value v != chi(λ) is admissible when it violates no exchange relation in
    which λ takes part (all other signs as in chi); v = 0 is excluded when it
    would leave the map identically zero.
    """
    table = grassmann_plucker_table(chi.n, chi.r)
    signs = extended_signs(chi)
    tuples = lambda_tuples(chi.n, chi.r)
    nonzero = int(np.count_nonzero(chi.array))
    result = set()
    for position, t in enumerate(tuples):
        current = int(signs[position])
        for value in table.consistent_values(signs, position, table.by_position[position]):
            if value == current:
                continue
            if value == 0 and nonzero == 1 and current != 0:
                continue
            result.add(t)
            break
    return result


class ForcingClosure:
    """
    Incremental Grassmann-Plücker forcing closure of a set of known tuples.

    An unknown tuple becomes known when, over all exchange relations whose
    other tuples are known, exactly one of +, -, 0 violates none of them.
    """

    def __init__(self, chi: Chirotope, known: Iterable[RTuple] = ()):
        self.chi = chi
        self.table = grassmann_plucker_table(chi.n, chi.r)
        self.signs = extended_signs(chi)
        self.m = len(lambda_tuples(chi.n, chi.r))
        self.index = tuple_index(chi.n, chi.r)
        self.known = np.zeros(self.m, dtype=bool)
        involved = self.table.involved
        self._members = [row[row < self.m] for row in involved]
        self._unknown = np.array([len(row) for row in self._members], dtype=np.int64)
        self.add_all(known)

    @property
    def size(self) -> int:
        return int(self.known.sum())

    @property
    def complete(self) -> bool:
        return bool(self.known.all())

    def tuples(self) -> Set[RTuple]:
        tuples = lambda_tuples(self.chi.n, self.chi.r)
        return {tuples[k] for k in np.flatnonzero(self.known)}

    def add_all(self, tuples: Iterable[RTuple]) -> None:
        queue: List[int] = []
        for t in tuples:
            self._mark(self.index[t], queue)
        self._propagate(queue)

    def add(self, t: RTuple) -> None:
        self.add_all([t])

    def _mark(self, position: int, queue: List[int]) -> None:
        if self.known[position]:
            return
        self.known[position] = True
        for row in self.table.by_position[position]:
            self._unknown[row] -= 1
            if self._unknown[row] == 1:
                for other in self._members[row]:
                    if not self.known[other]:
                        queue.append(int(other))

    def _forced(self, position: int) -> bool:
        rows = self.table.by_position[position]
        ready = rows[self._unknown[rows] == 1]
        if ready.size == 0:
            return False
        return len(self.table.consistent_values(self.signs, position, ready)) == 1

    def _propagate(self, queue: List[int]) -> None:
        while queue:
            position = queue.pop()
            if not self.known[position] and self._forced(position):
                self._mark(position, queue)


def gp_closure(chi: Chirotope, known: Iterable[RTuple]) -> Set[RTuple]:
    return ForcingClosure(chi, known).tuples()


# ============================================================================
# MINIMAL REDUCED SYSTEM
# ============================================================================

@dataclass(frozen=True)
class ReducedSystem:
    """Tuples R whose signs force all of Λ(n, r), built for one basis"""
    tuples: FrozenSet[RTuple]
    basis: RTuple
    mutations: FrozenSet[RTuple] = frozenset()
    added: Tuple[RTuple, ...] = ()

    def degree_of(self, t: RTuple) -> int:
        """Degree of the determinant constraint of t once the basis is the identity."""
        return len(set(self.basis) - set(t))

    @property
    def degree_score(self) -> int:
        return sum(self.degree_of(t) for t in self.tuples)


def minimal_reduced_system(chi: Chirotope, basis: RTuple,
                           mutations: Optional[Set[RTuple]] = None) -> ReducedSystem:
    """
    Greedy reduced system: start from the generalized mutations and add the
    unforced tuple with the fewest elements outside the basis (lexicographic
    tie-break) until the closure is all of Λ(n, r).
    """
    basis = tuple(sorted(basis))
    if eval_sign(chi, basis) == Sign.ZERO:
        raise ChirotopeError(f"{basis} is not a basis")
    if mutations is None:
        mutations = generalized_mutations(chi)
    closure = ForcingClosure(chi, mutations)
    chosen = set(mutations)
    added: List[RTuple] = []
    if not closure.complete:
        order = sorted(lambda_tuples(chi.n, chi.r), key=lambda t: (len(set(t) - set(basis)), t))
        for t in order:
            if closure.complete:
                break
            if closure.known[closure.index[t]]:
                continue
            chosen.add(t)
            added.append(t)
            closure.add(t)
    return ReducedSystem(frozenset(chosen), basis, frozenset(mutations), tuple(added))


def removable_tuples(chi: Chirotope, reduced: ReducedSystem) -> List[RTuple]:
    """Members outside the mutation set whose removal keeps the closure full."""
    removable = []
    for t in sorted(reduced.tuples - reduced.mutations):
        if ForcingClosure(chi, reduced.tuples - {t}).complete:
            removable.append(t)
    return removable


# ============================================================================
# FRAMES
# ============================================================================

@dataclass(frozen=True)
class Frame:
    """Basis with χ' = ±χ positive on it, plus the normalized row and column."""
    basis: RTuple
    negated: bool
    row: int
    column: Optional[int]
    reduced: ReducedSystem
    residual_equalities: int = 0

    @property
    def degree_score(self) -> int:
        return self.reduced.degree_score

    def oriented(self, chi: Chirotope) -> Chirotope:
        return -chi if self.negated else chi


def _spread(items: List[RTuple], limit: int) -> List[RTuple]:
    if len(items) <= limit:
        return items
    picks = np.linspace(0, len(items) - 1, limit).round().astype(int)
    return [items[k] for k in sorted(set(picks.tolist()))]


def _residual_equalities(chi: Chirotope, reduced: ReducedSystem, row: int, column: Optional[int]) -> int:
    """Zero-sign constraints that normalization at (row, column) cannot make linear."""
    basis = reduced.basis
    count = 0
    for t in reduced.tuples:
        degree = reduced.degree_of(t)
        if degree < 2 or chi.sign_of(t) != Sign.ZERO:
            continue
        if degree > 2:
            count += 1
            continue
        rows = [k for k, b in enumerate(basis) if b not in t]
        columns = [e for e in t if e not in basis]
        if row not in rows and column not in columns:
            count += 1
    return count


def select_frame(chi: Chirotope) -> Frame:
    """
    Frame minimizing (residual equalities, degree score, basis, row, column).

    Args:
        chi: A valid chirotope

    Returns:
        The chosen Frame with its reduced system
    """
    bases = [t for t, s in zip(lambda_tuples(chi.n, chi.r), chi.signs) if s]
    if not bases:
        raise ChirotopeError("chirotope has no nonzero sign")
    bases = _spread(bases, FRAME_BASIS_LIMIT)
    mutations = generalized_mutations(chi)
    best_key, best = None, None
    for basis in bases:
        negated = chi.sign_of(basis) == Sign.MINUS
        reduced = minimal_reduced_system(chi, basis, mutations)
        columns = [e for e in range(1, chi.n + 1) if e not in basis] or [None]
        for row in range(chi.r):
            for column in columns:
                residual = _residual_equalities(chi, reduced, row, column)
                key = (residual, reduced.degree_score, basis, row, column or 0)
                if best_key is None or key < best_key:
                    best_key = key
                    best = Frame(basis, negated, row, column, reduced, residual)
    logger.debug(f"🔍 Frame for {chi.sign_string}: basis={best.basis} row={best.row} "
                 f"column={best.column} residual={best.residual_equalities} score={best.degree_score}")
    return best


# ============================================================================
# VARIABLE GRID AND SYSTEM CONSTRUCTION
# ============================================================================

@dataclass
class VariableGrid:
    """
    r × n slot matrix of the normalized configuration.

    Basis column b_k is the k-th unit vector. Every other slot is
    sign · magnitude, where the magnitude is fixed to 0 or 1 (variable None)
    or is a positive variable. Trivial equalities either merge a variable into
    a smaller one or fix it to a positive constant.
    """
    n: int
    r: int
    basis: RTuple
    negated: bool
    signs: List[List[int]]
    variables: List[List[Optional[int]]]
    merges: Dict[int, int] = field(default_factory=dict)
    fixed_values: Dict[int, Fraction] = field(default_factory=dict)

    @property
    def free_count(self) -> int:
        return sum(1 for row in self.variables for v in row if v is not None)

    @property
    def live_variables(self) -> Set[int]:
        ids = {v for row in self.variables for v in row if v is not None}
        return ids - set(self.merges) - set(self.fixed_values)

    def resolve(self, v: int, witness: Witness) -> Fraction:
        while v in self.merges:
            v = self.merges[v]
        if v in self.fixed_values:
            return self.fixed_values[v]
        if v not in witness:
            raise ValueError(f"witness does not assign x{v}")
        return Fraction(witness[v])

    def entry(self, k: int, l: int, witness: Witness) -> Fraction:
        if l in self.basis:
            return Fraction(1 if self.basis.index(l) == k else 0)
        sign = self.signs[k][l - 1]
        v = self.variables[k][l - 1]
        if v is None:
            return Fraction(sign)
        return sign * self.resolve(v, witness)

    def realization(self, witness: Witness) -> List[List[Fraction]]:
        """Full r × n rational matrix for a witness of the reduced system."""
        matrix = [[self.entry(k, l, witness) for l in range(1, self.n + 1)] for k in range(self.r)]
        if self.negated:
            matrix[0] = [-x for x in matrix[0]]
        return matrix


def build_grid(chi: Chirotope, basis: RTuple, row: Optional[int] = None,
               column: Optional[int] = None) -> VariableGrid:
    """Slot signs from χ'(b with b_k -> l); row/column None skips normalization."""
    basis = tuple(sorted(basis))
    first = eval_sign(chi, basis)
    if first == Sign.ZERO:
        raise ChirotopeError(f"{basis} is not a basis")
    negated = first == Sign.MINUS
    oriented = -chi if negated else chi
    signs = [[0] * chi.n for _ in range(chi.r)]
    variables: List[List[Optional[int]]] = [[None] * chi.n for _ in range(chi.r)]
    next_id = 0
    for k in range(chi.r):
        for l in range(1, chi.n + 1):
            if l in basis:
                continue
            sign = int(eval_sign(oriented, basis[:k] + (l,) + basis[k + 1:]))
            signs[k][l - 1] = sign
            if sign and k != row and l != column:
                variables[k][l - 1] = next_id
                next_id += 1
    return VariableGrid(chi.n, chi.r, basis, negated, signs, variables)


def _grid_polynomial(grid: VariableGrid, ring, k: int, l: int) -> Polynomial:
    if l in grid.basis:
        return constant(ring, 1 if grid.basis.index(l) == k else 0)
    sign = grid.signs[k][l - 1]
    v = grid.variables[k][l - 1]
    if v is None:
        return constant(ring, sign)
    return ring.gens[v] * sign


def _determinant(matrix: List[List[Polynomial]]) -> Polynomial:
    """Laplace expansion along the first column, skipping zero entries."""
    size = len(matrix)
    if size == 1:
        return matrix[0][0]
    total = None
    for k in range(size):
        entry = matrix[k][0]
        if not entry:
            continue
        minor = [row[1:] for j, row in enumerate(matrix) if j != k]
        term = entry * _determinant(minor)
        term = term if k % 2 == 0 else -term
        total = term if total is None else total + term
    return total if total is not None else matrix[0][0] * 0


def determinant_polynomial(grid: VariableGrid, ring, t: RTuple) -> Polynomial:
    """det of the grid columns t as a polynomial in the slot variables."""
    matrix = [[_grid_polynomial(grid, ring, k, l) for l in t] for k in range(grid.r)]
    return _determinant(matrix)


def _trivial_equality(c: Constraint) -> Optional[Tuple[int, Optional[int], Fraction]]:
    """(variable, survivor, 0) for u_a - u_b = 0, or (variable, None, value) for c1·u + c0 = 0."""
    if not c.is_equality or len(c.poly) != 2:
        return None
    if any(sum(monom) > 1 for monom in c.poly.keys()):
        return None
    linear = {}
    offset = Fraction(0)
    for monom, coeff in c.poly.items():
        if sum(monom):
            linear[monom.index(1)] = to_fraction(coeff)
        else:
            offset = to_fraction(coeff)
    if len(linear) == 2:
        (a, ca), (b, cb) = sorted(linear.items())
        if ca == -cb:
            return b, a, Fraction(0)
        return None
    (v, cv), = linear.items()
    value = -offset / cv
    return (v, None, value) if value > 0 else None


def build_system(chi: Chirotope, frame: Frame) -> Tuple[PolySystem, VariableGrid]:
    """
    Determinant constraints over the reduced tuples in the frame's coordinates.

    Args:
        chi: The chirotope being realized
        frame: Basis and normalization from select_frame

    Returns:
        (PolySystem over positive variables, VariableGrid to rebuild matrices)
    """
    if eval_sign(frame.oriented(chi), frame.basis) != Sign.PLUS:
        raise ChirotopeError(f"frame basis {frame.basis} is not positive for this chirotope")
    oriented = frame.oriented(chi)
    grid = build_grid(chi, frame.basis, frame.row, frame.column)
    ring = make_ring(grid.free_count)

    constraints: List[Constraint] = []
    for t in sorted(frame.reduced.tuples):
        if frame.reduced.degree_of(t) < 2:
            continue
        poly = determinant_polynomial(grid, ring, t)
        constraints.append(Constraint.from_sign(poly, oriented.sign_of(t), t))

    contradiction = False
    while True:
        simplified: List[Constraint] = []
        for c in constraints:
            decided = simplify_constraint(c)
            if decided is False:
                contradiction = True
                simplified.append(Constraint(ring.zero, Relation.GT, c.provenance))
            elif decided is not True:
                simplified.append(decided)
        constraints = simplified
        if contradiction:
            break
        step = next((s for s in map(_trivial_equality, constraints) if s is not None), None)
        if step is None:
            break
        v, survivor, value = step
        if survivor is not None:
            grid.merges[v] = survivor
            replacement = ring.gens[survivor]
        else:
            grid.fixed_values[v] = value
            replacement = constant(ring, value)
        constraints = [Constraint(substitute_linear(c.poly, v, replacement), c.relation, c.provenance)
                       for c in constraints]

    seen, unique = set(), []
    for c in constraints:
        key = (c.relation, c.poly)
        if key not in seen:
            seen.add(key)
            unique.append(c)
    system = PolySystem(ring, frozenset(grid.live_variables), tuple(unique))
    if contradiction:
        logger.warning(f"⚠️ Reduced system for {chi.sign_string} contains a constant contradiction")
    logger.debug(f"📊 Built system: {len(system.variables)} variables, {len(system.constraints)} constraints, "
                 f"{len(system.equalities)} equalities")
    return system, grid


def reduce_chirotope(chi: Chirotope) -> Tuple[Frame, PolySystem, VariableGrid]:
    """select_frame followed by build_system, logging removable reduced tuples."""
    frame = select_frame(chi)
    removable = removable_tuples(chi, frame.reduced)
    if removable:
        logger.debug(f"🔍 Reduced system for {chi.sign_string} has removable tuples {removable}")
    system, grid = build_system(chi, frame)
    return frame, system, grid


def format_reduction(chi: Chirotope, frame: Frame, system: PolySystem, grid: VariableGrid) -> str:
    """Debug dump: frame, slot grid and constraints with provenance."""
    lines = [
        f"chirotope: {chi}",
        f"basis: {frame.basis}  negated: {frame.negated}  row: {frame.row}  column: {frame.column}",
        f"reduced tuples: {len(frame.reduced.tuples)}  mutations: {len(frame.reduced.mutations)}  "
        f"degree score: {frame.degree_score}  residual equalities: {frame.residual_equalities}",
        "grid:",
    ]
    for k in range(grid.r):
        cells = []
        for l in range(1, grid.n + 1):
            if l in grid.basis:
                cells.append("1" if grid.basis.index(l) == k else "0")
                continue
            sign = grid.signs[k][l - 1]
            v = grid.variables[k][l - 1]
            if v is None:
                cells.append({1: "1", -1: "-1", 0: "0"}[sign])
                continue
            while v in grid.merges:
                v = grid.merges[v]
            label = str(grid.fixed_values[v]) if v in grid.fixed_values else f"x{v}"
            cells.append(label if sign > 0 else f"-{label}")
        lines.append("  " + "\t".join(cells))
    lines.append(format_system(system))
    return "\n".join(lines)
