#!/usr/bin/env python3
"""
Realization Search
==================
Tree search for a positive solution of a sign-constrained polynomial system.

Each node either passes the goal test (random assignments, then a rational
grid sweep when at most three variables remain) or eliminates one variable:

- E1: y occurs only in strict inequalities, linearly. Branch on the signs of
  its coefficients, turn every constraint into a bound on y and replace y by
  all upper × lower cross products.
- E2: some equality A·y + B = 0. Branch on sign(A); in the A > 0 and A < 0
  children substitute y := -B/A, in the A = 0 child keep y and add A = B = 0.

Search is depth-first with iterative lengthening on the total cost
Σ log2(children). Witnesses are back-substituted through the recorded
elimination steps, mapped through the variable grid and verified with exact
determinants before anything is reported as realizable.
"""

import hashlib
import logging
import math
import time
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np
from sympy import Matrix, Rational

from chirotopes.core import (
    Chirotope, ChirotopeError, RTuple, Sign, chirotope_from_matrix, dual,
    exact_determinant, lambda_tuples,
)
from chirotopes.polysys import (
    Constraint, PolySystem, Polynomial, Relation, Witness, coefficients_in, degree_in,
    evaluate, format_system, sign_definite, simplify_system, strip_content, substitute_ratio,
    to_fraction, variables_of,
)
from chirotopes.reduction import VariableGrid, reduce_chirotope

# Configure logging
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

Realization = List[List[Fraction]]


class SoundnessError(RuntimeError):
    """A witness failed exact verification or a reconstruction denominator vanished."""


class UnknownReason(str, Enum):
    BUDGET = "budget"
    NO_ELIMINABLE = "no-eliminable-variable"
    EQUALITY_RESIDUE = "equality-residue"
    EXHAUSTED = "exhausted"


@dataclass
class Budget:
    """Search limits for one realization attempt"""
    # Initial total-cost limit of the first lengthening round
    cost_limit: float = 0.0

    # Rounds stop after this limit
    max_cost_limit: float = 10.0

    # Random assignments tried at nodes without an eliminable variable
    random_trials: int = 300

    # Random assignments tried at interior equality-free nodes
    node_trials: int = 30

    # Seed for the random goal tests
    rng_seed: int = 0

    # Wall-clock cap in seconds (None for no cap)
    wall_clock: Optional[float] = None

    # Tree nodes per attempt across all rounds
    max_nodes: int = 200_000

    # Also branch on zero coefficient signs in E1 eliminations
    full_branching: bool = False

    # Grid sweep at equality-free nodes with at most this many variables (0 disables)
    sweep_variables: int = 3

    def __post_init__(self):
        if self.random_trials < 0 or self.node_trials < 0:
            raise ValueError("trial counts must be non-negative")
        if self.cost_limit > self.max_cost_limit:
            raise ValueError(f"cost_limit {self.cost_limit} exceeds max_cost_limit {self.max_cost_limit}")


@dataclass
class SearchStats:
    nodes: int = 0
    rounds: int = 0
    final_cost_limit: float = 0.0
    eliminations: Dict[str, int] = field(default_factory=lambda: {"E1": 0, "E2": 0})
    goal_tests: int = 0
    random_trials: int = 0
    grid_sweeps: int = 0
    variables: int = 0
    constraints: int = 0

    def as_dict(self) -> Dict[str, object]:
        return {
            "nodes": self.nodes,
            "rounds": self.rounds,
            "final_cost_limit": self.final_cost_limit,
            "e1": self.eliminations["E1"],
            "e2": self.eliminations["E2"],
            "goal_tests": self.goal_tests,
            "random_trials": self.random_trials,
            "grid_sweeps": self.grid_sweeps,
            "variables": self.variables,
            "constraints": self.constraints,
        }


@dataclass(frozen=True)
class EliminationStep:
    """How to recompute an eliminated variable from the remaining ones."""
    kind: str
    variable: int
    uppers: Tuple[Tuple[Polynomial, Polynomial], ...] = ()
    lowers: Tuple[Tuple[Polynomial, Polynomial], ...] = ()
    num: Optional[Polynomial] = None
    den: Optional[Polynomial] = None
    den_sign: Optional[Sign] = None


@dataclass
class SolveOutcome:
    """Feasible (witness, and for chirotopes a verified realization) or Unknown(reason)"""
    feasible: bool
    witness: Optional[Witness] = None
    realization: Optional[Realization] = None
    reason: Optional[UnknownReason] = None
    stats: SearchStats = field(default_factory=SearchStats)
    via_dual: bool = False

    @property
    def status(self) -> str:
        return "realizable" if self.feasible else "unknown"


Child = Tuple[PolySystem, Optional[EliminationStep]]


# ============================================================================
# ELIMINABILITY
# ============================================================================

def eliminable_vars(system: PolySystem) -> List[Tuple[int, str]]:
    """(variable, 'E1' | 'E2') pairs; a variable may appear with both tags."""
    found = []
    for v in sorted(system.variables):
        occurring = [c for c in system.constraints if v in c.variables]
        if not occurring:
            continue
        if all(not c.is_equality and degree_in(c.poly, v) <= 1 for c in occurring):
            found.append((v, "E1"))
        if any(c.is_equality and degree_in(c.poly, v) == 1 for c in occurring):
            found.append((v, "E2"))
    return found


def _coefficient_groups(system: PolySystem, y: int):
    """Rows (A, B, provenance) of the y-constraints and the undecided coefficient classes."""
    rows = []
    groups: List[Polynomial] = []
    for c in system.constraints:
        if y not in c.variables:
            continue
        parts = coefficients_in(c.poly, y)
        a = parts.get(1, system.ring.zero)
        b = parts.get(0, system.ring.zero)
        sign = sign_definite(a)
        flip, key = 1, None
        if sign is None:
            key = strip_content(a)
            if key.LC < 0:
                key, flip = -key, -1
            if key not in groups:
                groups.append(key)
        rows.append((a, b, c.provenance, sign, key, flip))
    return rows, groups


def is_bipartite(system: PolySystem, y: int, r: int) -> bool:
    """
    Every upper-bound tuple meets every lower-bound tuple in r - 1 elements.

    Only constraints whose y-coefficient has a definite sign and a provenance
    tuple take part; an undecided coefficient makes the answer False.
    """
    uppers, lowers = [], []
    for a, _, provenance, sign, _, _ in _coefficient_groups(system, y)[0]:
        if sign is None:
            return False
        if provenance is None:
            continue
        (lowers if sign == Sign.PLUS else uppers).append(set(provenance))
    return all(len(i & j) == r - 1 for i in uppers for j in lowers)


# ============================================================================
# BRANCHING RULES
# ============================================================================

def branch_eliminate_E1(system: PolySystem, y: int, full: bool = False) -> List[Child]:
    """
    Children of an E1 elimination of y; infeasible children are dropped.

    Args:
        system: System in which y is E1-eliminable
        y: Variable to eliminate
        full: Also emit the zero-coefficient patterns

    Returns:
        List of (child system, EliminationStep) pairs
    """
    occurring = [c for c in system.constraints if y in c.variables]
    if not occurring or any(c.is_equality or degree_in(c.poly, y) > 1 for c in occurring):
        raise ValueError(f"x{y} is not E1-eliminable")
    ring = system.ring
    rows, groups = _coefficient_groups(system, y)
    others = [c for c in system.constraints if y not in c.variables]
    if groups and system.has_equalities():
        shared = set().union(*(c.variables for c in system.equalities))
        if shared & set().union(*(variables_of(g) for g in groups)):
            logger.debug(f"🔍 E1 on x{y}: branch coefficients share variables with equalities")

    values = (1, -1, 0) if full else (1, -1)
    children: List[Child] = []
    for pattern in product(values, repeat=len(groups)):
        extra = [Constraint.from_sign(g, Sign(v)) for g, v in zip(groups, pattern)]
        assigned = dict(zip(range(len(groups)), pattern))
        uppers: List[Tuple[Polynomial, Polynomial]] = []
        lowers: List[Tuple[Polynomial, Polynomial]] = [(ring.zero, ring.one)]
        for a, b, provenance, sign, key, flip in rows:
            s = int(sign) if sign is not None else flip * assigned[groups.index(key)]
            if s == 0:
                extra.append(Constraint(b, Relation.GT, provenance))
            elif s > 0:
                lowers.append((-b, a))
            else:
                uppers.append((b, -a))
        cross = [Constraint(nu * dl - nl * du, Relation.GT)
                 for nu, du in uppers for nl, dl in lowers]
        child = simplify_system(ring, system.variables - {y}, others + extra + cross)
        if child is not None:
            step = EliminationStep("E1", y, uppers=tuple(uppers), lowers=tuple(lowers))
            children.append((child, step))
    return children


def branch_eliminate_E2(system: PolySystem, y: int, equality: Constraint) -> List[Child]:
    """Children A > 0, A < 0 (substituting y := -B/A) and A = 0 (adding A = B = 0)."""
    if not equality.is_equality or degree_in(equality.poly, y) != 1:
        raise ValueError(f"equality is not linear in x{y}")
    ring = system.ring
    parts = coefficients_in(equality.poly, y)
    a = parts[1]
    b = parts.get(0, ring.zero)
    num, den = -b, a
    others = [c for c in system.constraints if c is not equality]
    definite = sign_definite(a)
    signs = [definite] if definite in (Sign.PLUS, Sign.MINUS) else [Sign.PLUS, Sign.MINUS, Sign.ZERO]

    children: List[Child] = []
    for s in signs:
        if s == Sign.ZERO:
            extra = [Constraint(a, Relation.EQ, equality.provenance),
                     Constraint(b, Relation.EQ, equality.provenance)]
            child = simplify_system(ring, system.variables, others + extra)
            step = None
        else:
            extra = [Constraint.from_sign(a, s), Constraint.from_sign(num, s)]
            rewritten = [substitute_ratio(c, y, num, den, s) if y in c.variables else c for c in others]
            child = simplify_system(ring, system.variables - {y}, rewritten + extra)
            step = EliminationStep("E2", y, num=num, den=den, den_sign=s)
        if child is not None:
            children.append((child, step))
    return children


@dataclass
class _Plan:
    kind: str
    variable: int
    equality: Optional[Constraint]
    branches: int
    cross: int

    @property
    def key(self):
        return (0 if self.kind == "E2" else 1, self.branches, self.cross, self.variable)


def _plan(system: PolySystem, full: bool) -> Optional[_Plan]:
    """Variable choice: E2 first, then fewer branches, fewer cross products, smaller id."""
    plans = []
    for v, tag in eliminable_vars(system):
        if tag == "E2":
            for c in system.equalities:
                if degree_in(c.poly, v) != 1:
                    continue
                a = coefficients_in(c.poly, v)[1]
                branches = 1 if sign_definite(a) in (Sign.PLUS, Sign.MINUS) else 3
                plans.append((_Plan("E2", v, c, branches, 0), len(c.poly)))
        else:
            rows, groups = _coefficient_groups(system, v)
            branches = (3 if full else 2) ** len(groups)
            maybe_upper = sum(1 for row in rows if row[3] is None or row[3] == Sign.MINUS)
            maybe_lower = sum(1 for row in rows if row[3] is None or row[3] == Sign.PLUS) + 1
            plans.append((_Plan("E1", v, None, branches, maybe_upper * maybe_lower), 0))
    if not plans:
        return None
    return min(plans, key=lambda item: (item[0].key, item[1]))[0]


# ============================================================================
# RANDOM GOAL TEST
# ============================================================================

def _node_rng(system: PolySystem, seed: int) -> np.random.Generator:
    digest = hashlib.sha256(f"{seed}:{format_system(system)}".encode()).digest()
    return np.random.default_rng(int.from_bytes(digest[:8], "big"))


def random_realize(system: PolySystem, trials: int, rng: np.random.Generator) -> Optional[Witness]:
    """
    Positive rational assignments p/q with p, q uniform on 1..2^k, k = 4, 8, 16
    over successive thirds of the trials; the first exact solution or None.
    """
    if system.has_equalities():
        return None
    variables = sorted(system.variables)
    if not variables:
        return {} if system.is_satisfied_by({}) else None
    for trial in range(trials):
        bits = 4 if 3 * trial < trials else (8 if 3 * trial < 2 * trials else 16)
        draws = rng.integers(1, 2 ** bits, size=(len(variables), 2), endpoint=True)
        witness = {v: Fraction(int(p), int(q)) for v, (p, q) in zip(variables, draws)}
        if system.is_satisfied_by(witness):
            return witness
    return None


# Sweep grid per variable count: numerators 1..P over the listed denominators
SWEEP_GRIDS: Dict[int, Tuple[int, Tuple[int, ...]]] = {
    1: (1024, (1, 2, 3, 4, 8, 16)),
    2: (64, (1, 2, 3, 4, 8, 16)),
    3: (12, (1, 2, 3, 4)),
}
# Grid points confirmed exactly after the float screen
SWEEP_CANDIDATES = 64


@lru_cache(maxsize=None)
def sweep_values(count: int) -> Tuple[Fraction, ...]:
    numerators, denominators = SWEEP_GRIDS[count]
    return tuple(sorted({Fraction(p, q) for q in denominators for p in range(1, numerators + 1)}))


def grid_realize(system: PolySystem) -> Optional[Witness]:
    """
    Deterministic sweep of the rational grid for a system in at most three
    variables. Points are screened in float64 and the survivors, in grid order,
    are confirmed with exact arithmetic.
    """
    if system.has_equalities():
        return None
    variables = sorted(system.variables)
    if not variables:
        return {} if system.is_satisfied_by({}) else None
    if len(variables) not in SWEEP_GRIDS:
        return None
    values = sweep_values(len(variables))
    axis = np.array([float(v) for v in values])
    mesh = np.meshgrid(*([axis] * len(variables)), indexing="ij")
    points = {v: grid.ravel() for v, grid in zip(variables, mesh)}
    alive = np.ones(mesh[0].size, dtype=bool)
    for c in system.constraints:
        value = np.zeros(alive.size)
        scale = np.zeros(alive.size)
        for monom, coeff in c.poly.items():
            term = np.full(alive.size, float(to_fraction(coeff)))
            for k, e in enumerate(monom):
                if e:
                    term = term * points[k] ** e
            value += term
            scale += np.abs(term)
        # exact zeros round to within 1e-12 of the term scale
        alive &= value > 1e-12 * scale
        if not alive.any():
            return None
    index = np.indices((len(values),) * len(variables)).reshape(len(variables), -1)
    for flat in np.flatnonzero(alive)[:SWEEP_CANDIDATES]:
        witness = {v: values[index[i, flat]] for i, v in enumerate(variables)}
        if system.is_satisfied_by(witness):
            return witness
    return None


# ============================================================================
# TREE SEARCH
# ============================================================================

class _Search:
    def __init__(self, budget: Budget, rank: Optional[int] = None):
        self.budget = budget
        self.rank = rank
        self.stats = SearchStats()
        self.memo: Dict[Tuple[PolySystem, int], Optional[Witness]] = {}
        self.swept: Dict[PolySystem, Optional[Witness]] = {}
        self.deferred = False
        self.reasons: Set[UnknownReason] = set()
        self.started = time.monotonic()
        self.out_of_budget = False

    def goal(self, system: PolySystem, trials: int) -> Optional[Witness]:
        key = (system, trials)
        if key not in self.memo:
            self.stats.goal_tests += 1
            self.stats.random_trials += trials
            self.memo[key] = random_realize(system, trials, _node_rng(system, self.budget.rng_seed))
        return self.memo[key]

    def sweep(self, system: PolySystem) -> Optional[Witness]:
        if len(system.variables) > self.budget.sweep_variables:
            return None
        if system not in self.swept:
            self.stats.grid_sweeps += 1
            self.swept[system] = grid_realize(system)
        return self.swept[system]

    def exhausted_budget(self) -> bool:
        if self.stats.nodes >= self.budget.max_nodes:
            return True
        cap = self.budget.wall_clock
        return cap is not None and time.monotonic() - self.started > cap

    def dfs(self, system: PolySystem, steps: List[EliminationStep], spent: float,
            limit: float) -> Optional[Tuple[Witness, List[EliminationStep]]]:
        if self.exhausted_budget():
            self.out_of_budget = True
            return None
        self.stats.nodes += 1
        plan = _plan(system, self.budget.full_branching)

        if not system.has_equalities():
            trials = self.budget.node_trials if plan is not None else self.budget.random_trials
            witness = self.goal(system, trials)
            if witness is None:
                witness = self.sweep(system)
            if witness is not None:
                return witness, steps
        if plan is None:
            self.reasons.add(UnknownReason.EQUALITY_RESIDUE if system.has_equalities()
                             else UnknownReason.NO_ELIMINABLE)
            return None

        if plan.kind == "E1":
            children = branch_eliminate_E1(system, plan.variable, self.budget.full_branching)
        else:
            children = branch_eliminate_E2(system, plan.variable, plan.equality)
        if not children:
            return None
        cost = math.log2(len(children))
        if spent + cost > limit + 1e-9:
            self.deferred = True
            return None
        self.stats.eliminations[plan.kind] += 1
        if plan.kind == "E1" and not steps and self.rank is not None:
            bipartite = is_bipartite(system, plan.variable, self.rank)
            logger.debug(f"🔍 Root elimination of x{plan.variable}: bipartite={bipartite}")
        for child, step in children:
            found = self.dfs(child, steps + [step] if step is not None else steps, spent + cost, limit)
            if found is not None or self.out_of_budget:
                return found
        return None


def back_substitute(witness: Witness, steps: Sequence[EliminationStep]) -> Witness:
    """Recompute eliminated variables innermost-out; a vanishing denominator is fatal."""
    full = dict(witness)
    for step in reversed(steps):
        if step.kind == "E1":
            def bound(pair):
                num, den = pair
                d = evaluate(den, full)
                if d == 0:
                    raise SoundnessError(f"zero bound denominator while rebuilding x{step.variable}")
                return evaluate(num, full) / d
            low = max(bound(pair) for pair in step.lowers)
            if step.uppers:
                y = (low + min(bound(pair) for pair in step.uppers)) / 2
            else:
                y = low + 1
        else:
            d = evaluate(step.den, full)
            if d == 0:
                raise SoundnessError(f"zero denominator while rebuilding x{step.variable}")
            y = evaluate(step.num, full) / d
        full[step.variable] = y
    return full


def sol(system: Optional[PolySystem], budget: Optional[Budget] = None,
        rank: Optional[int] = None) -> SolveOutcome:
    """
    Iterative-lengthening search for a positive solution.

    Args:
        system: Root system (None for a system already known to be contradictory)
        budget: Cost limits, trials and seed
        rank: Chirotope rank, for logging the bipartite shape of root eliminations

    Returns:
        SolveOutcome with the witness of the root system or an Unknown reason
    """
    budget = budget or Budget()
    search = _Search(budget, rank)
    if system is None:
        return SolveOutcome(False, reason=UnknownReason.EXHAUSTED, stats=search.stats)
    root = simplify_system(system.ring, system.variables, system.constraints)
    if root is None:
        return SolveOutcome(False, reason=UnknownReason.EXHAUSTED, stats=search.stats)

    limit = budget.cost_limit
    while True:
        search.deferred = False
        search.stats.rounds += 1
        search.stats.final_cost_limit = limit
        found = search.dfs(root, [], 0.0, limit)
        if found is not None:
            witness = back_substitute(*found)
            for v in system.variables:
                witness.setdefault(v, Fraction(1))
            if not system.is_satisfied_by(witness):
                raise SoundnessError("back-substituted witness violates the root system")
            return SolveOutcome(True, witness=witness, stats=search.stats)
        if search.out_of_budget:
            return SolveOutcome(False, reason=UnknownReason.BUDGET, stats=search.stats)
        if not search.deferred:
            break
        if limit + 1 > budget.max_cost_limit:
            return SolveOutcome(False, reason=UnknownReason.BUDGET, stats=search.stats)
        limit += 1

    for reason in (UnknownReason.EQUALITY_RESIDUE, UnknownReason.NO_ELIMINABLE):
        if reason in search.reasons:
            return SolveOutcome(False, reason=reason, stats=search.stats)
    return SolveOutcome(False, reason=UnknownReason.EXHAUSTED, stats=search.stats)


# ============================================================================
# REALIZATIONS
# ============================================================================

def reconstruct(witness: Witness, steps: Sequence[EliminationStep], grid: VariableGrid) -> Realization:
    return grid.realization(back_substitute(witness, steps))


def first_mismatch(matrix: Realization, chi: Chirotope) -> Optional[Tuple[RTuple, Sign, Sign]]:
    """(tuple, expected, actual) of the first tuple whose determinant sign differs."""
    if len(matrix) != chi.r or any(len(row) != chi.n for row in matrix):
        raise ChirotopeError(f"expected a {chi.r} x {chi.n} matrix")
    rows = [[Fraction(x) for x in row] for row in matrix]
    for t, s in zip(lambda_tuples(chi.n, chi.r), chi.signs):
        actual = Sign.of(exact_determinant([[row[e - 1] for e in t] for row in rows]))
        if actual != s:
            return t, Sign(s), actual
    return None


def verify_realization(matrix: Realization, chi: Chirotope) -> bool:
    return first_mismatch(matrix, chi) is None


def transform_realization(matrix: Realization, relabeling: Optional[Sequence[int]] = None,
                          reorientation: Optional[Set[int]] = None, negate: bool = False) -> Realization:
    """Realization of transform(chi_V, relabeling, reorientation, negate)."""
    n = len(matrix[0])
    perm = list(relabeling) if relabeling is not None else list(range(1, n + 1))
    flipped = set(reorientation or ())
    result = [[(-1 if e in flipped else 1) * Fraction(row[perm[e - 1] - 1]) for e in range(1, n + 1)]
              for row in matrix]
    if negate:
        result[0] = [-x for x in result[0]]
    return result


def dual_realization(matrix: Realization, target: Optional[Chirotope] = None) -> Realization:
    """
    Gale transform: rows spanning the exact nullspace of the matrix.

    With a target chirotope, the first row is negated when that fixes the
    global sign.
    """
    m = Matrix([[Rational(Fraction(x).numerator, Fraction(x).denominator) for x in row] for row in matrix])
    basis = m.nullspace()
    if not basis:
        raise ChirotopeError("matrix has full column rank; the dual is empty")
    rows = [[Fraction(int(Rational(x).p), int(Rational(x).q)) for x in vector] for vector in basis]
    if target is not None:
        chi = chirotope_from_matrix(rows)
        if chi == -target:
            rows[0] = [-x for x in rows[0]]
    return rows


def realize(chi: Chirotope, budget: Optional[Budget] = None, try_dual: bool = False) -> SolveOutcome:
    """
    select_frame -> build_system -> sol -> reconstruct -> verify_realization.

    A Feasible outcome always carries a realization verified on every tuple;
    a failed verification raises SoundnessError.
    """
    budget = budget or Budget()
    frame, system, grid = reduce_chirotope(chi)
    outcome = sol(system, budget, chi.r)
    outcome.stats.variables = len(system.variables)
    outcome.stats.constraints = len(system.constraints)
    if outcome.feasible:
        matrix = grid.realization(outcome.witness)
        mismatch = first_mismatch(matrix, chi)
        if mismatch is not None:
            raise SoundnessError(f"realization of {chi.sign_string} fails at {mismatch[0]}")
        outcome.realization = matrix
        return outcome

    if try_dual and chi.r < chi.n:
        logger.info(f"🔍 Trying the dual of {chi.sign_string} ({outcome.reason.value})")
        dual_outcome = realize(dual(chi), budget, try_dual=False)
        if dual_outcome.feasible:
            matrix = dual_realization(dual_outcome.realization, chi)
            mismatch = first_mismatch(matrix, chi)
            if mismatch is not None:
                raise SoundnessError(f"dual realization of {chi.sign_string} fails at {mismatch[0]}")
            dual_outcome.realization = matrix
            dual_outcome.witness = None
            dual_outcome.via_dual = True
            return dual_outcome
    return outcome


def class_seed(canonical: str, global_seed: int) -> int:
    """Stable per-class seed: sha256 of the canonical string XOR the global seed."""
    digest = hashlib.sha256(canonical.encode()).digest()
    return int.from_bytes(digest[:8], "big") ^ global_seed


def class_budget(budget: Budget, canonical: str, global_seed: int) -> Budget:
    return replace(budget, rng_seed=class_seed(canonical, global_seed))
