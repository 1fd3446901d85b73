#!/usr/bin/env python3
"""
Tests for variable elimination, the realization search and exact verification
"""

import sys
import os
from fractions import Fraction
from itertools import product

# Add parent directory to path to import our modules
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import pytest
import numpy as np

from chirotopes.core import (
    Chirotope, ChirotopeError, Sign, check_axioms, chirotope_from_matrix, dual, lambda_tuples, transform,
)
from chirotopes.enumeration import enumerate_classes
from chirotopes.polysys import Constraint, PolySystem, Relation, make_ring
from chirotopes.solver import (
    Budget, EliminationStep, SoundnessError, UnknownReason, back_substitute, branch_eliminate_E1,
    branch_eliminate_E2, class_budget, class_seed, dual_realization, eliminable_vars, first_mismatch,
    grid_realize, is_bipartite, random_realize, realize, sol, transform_realization, verify_realization,
)

FIVE_POINTS = [[0, 1, 1, 0, -1], [0, 0, 1, 1, -2], [1, 1, 1, 1, 1]]
MOMENT_CURVE = [[1, 1, 1, 1, 1], [0, 1, 2, 3, 4], [0, 1, 4, 9, 16]]
CYCLIC_SIX = [[1] * 6, list(range(6)), [t ** 2 for t in range(6)], [t ** 3 for t in range(6)]]

# A1 A2 A3 on one line, B1 B2 B3 on another, C1 C2 C3 the cross intersections
PAPPUS = [
    [0, 1, 3, 0, 2, 5, 2, 15, 13],
    [0, 0, 0, 2, 2, 2, 2, 6, 4],
    [1, 1, 1, 1, 1, 1, 3, 8, 5],
]


def non_pappus() -> Chirotope:
    """The Pappus configuration with its conclusion triple made non-collinear."""
    chi = chirotope_from_matrix(PAPPUS)
    k = lambda_tuples(9, 3).index((7, 8, 9))
    assert chi.signs[k] == 0
    for value in (1, -1):
        signs = list(chi.signs)
        signs[k] = value
        candidate = Chirotope(9, 3, tuple(signs))
        if check_axioms(candidate).valid:
            return candidate
    raise AssertionError("no orientation of the bent conclusion line")


@pytest.fixture
def ring():
    return make_ring(3)


class TestElimination:
    """Test eliminability and the branching rules"""

    def test_eliminable_vars(self, ring):
        """Test E1 and E2 tags"""
        x0, x1, _ = ring.gens
        system = PolySystem(ring, frozenset({0, 1}), (Constraint(x0 ** 2 - x1, Relation.GT),))
        assert eliminable_vars(system) == [(1, "E1")]
        system = PolySystem(ring, frozenset({0, 1}), (Constraint(x0 * x1 - 1, Relation.EQ),))
        assert eliminable_vars(system) == [(0, "E2"), (1, "E2")]

    def test_e1_cross_products(self, ring):
        """Test bounds x1 < x0 < 2 leave 2 - x1 > 0"""
        x0, x1, _ = ring.gens
        system = PolySystem(ring, frozenset({0, 1}), (
            Constraint(x0 - x1, Relation.GT),
            Constraint(2 - x0, Relation.GT),
        ))
        children = branch_eliminate_E1(system, 0)
        assert len(children) == 1
        child, step = children[0]
        assert child.variables == frozenset({1})
        assert [c.poly for c in child.constraints] == [2 - x1]
        assert step.kind == "E1" and step.variable == 0

    def test_e1_rejects_equalities(self, ring):
        """Test E1 needs strict linear occurrences"""
        x0, x1, _ = ring.gens
        system = PolySystem(ring, frozenset({0, 1}), (Constraint(x0 - x1, Relation.EQ),))
        with pytest.raises(ValueError):
            branch_eliminate_E1(system, 0)

    def test_e1_branches_on_coefficient_signs(self, ring):
        """Test an undecided coefficient doubles the children, tripled with full branching"""
        x0, x1, x2 = ring.gens
        system = PolySystem(ring, frozenset({0, 1, 2}), (
            Constraint(x0 * (x1 - x2) + 1, Relation.GT),
            Constraint(x0 + x1, Relation.GT),
        ))
        assert len(branch_eliminate_E1(system, 0)) == 2
        assert len(branch_eliminate_E1(system, 0, full=True)) == 3

    def test_e2_definite_coefficient(self, ring):
        """Test substitution x0 := 1/x1 in x0 - x1 > 0"""
        x0, x1, _ = ring.gens
        equality = Constraint(x0 * x1 - 1, Relation.EQ)
        system = PolySystem(ring, frozenset({0, 1}), (equality, Constraint(x0 - x1, Relation.GT)))
        children = branch_eliminate_E2(system, 0, equality)
        assert len(children) == 1
        child, step = children[0]
        assert [c.poly for c in child.constraints] == [1 - x1 ** 2]
        assert step.den_sign == Sign.PLUS

    def test_e2_child_order(self, ring):
        """Test the A > 0, A < 0, A = 0 children of (x0 - 1)(x1 - x2) = 0"""
        x0, x1, x2 = ring.gens
        equality = Constraint(x0 * (x1 - x2) + x2 - x1, Relation.EQ)
        system = PolySystem(ring, frozenset({0, 1, 2}), (equality,))
        children = branch_eliminate_E2(system, 0, equality)
        assert [step.den_sign if step else None for _, step in children] == [Sign.PLUS, Sign.MINUS, None]
        assert 0 in children[2][0].variables
        assert children[2][0].has_equalities()

    def test_e2_drops_contradictory_children(self, ring):
        """Test children whose added signs are impossible are dropped"""
        x0, x1, x2 = ring.gens
        equality = Constraint(x0 * (x1 - x2) - 1, Relation.EQ)
        system = PolySystem(ring, frozenset({0, 1, 2}), (equality,))
        children = branch_eliminate_E2(system, 0, equality)
        assert len(children) == 1
        assert children[0][1].den_sign == Sign.PLUS

    def test_is_bipartite(self, ring):
        """Test upper and lower bound tuples meeting in r - 1 elements"""
        x0, x1, _ = ring.gens
        lower = Constraint(x0 - x1, Relation.GT, (1, 2, 4))
        system = PolySystem(ring, frozenset({0, 1}), (lower, Constraint(1 - x0, Relation.GT, (1, 3, 4))))
        assert is_bipartite(system, 0, 3)
        system = PolySystem(ring, frozenset({0, 1}), (lower, Constraint(1 - x0, Relation.GT, (3, 5, 6))))
        assert not is_bipartite(system, 0, 3)


class TestSearch:
    """Test sol and its goal tests"""

    def test_feasible_system(self, ring):
        """Test a witness is returned and satisfies the root system"""
        x0, x1, _ = ring.gens
        system = PolySystem(ring, frozenset({0, 1}), (
            Constraint(x0 - x1, Relation.GT),
            Constraint(3 - x0, Relation.GT),
        ))
        outcome = sol(system)
        assert outcome.feasible
        assert outcome.status == "realizable"
        assert system.is_satisfied_by(outcome.witness)

    def test_infeasible_system_is_exhausted(self, ring):
        """Test contradictory bounds end with no children left"""
        x0, x1, _ = ring.gens
        system = PolySystem(ring, frozenset({0, 1}), (
            Constraint(x0 - x1, Relation.GT),
            Constraint(x1 - x0, Relation.GT),
        ))
        outcome = sol(system)
        assert not outcome.feasible
        assert outcome.status == "unknown"
        assert outcome.reason == UnknownReason.EXHAUSTED

    def test_contradictory_root(self):
        """Test a missing system is reported as exhausted"""
        assert sol(None).reason == UnknownReason.EXHAUSTED

    def test_deterministic(self, ring):
        """Test the same budget gives the same witness"""
        x0, x1, x2 = ring.gens
        system = PolySystem(ring, frozenset({0, 1, 2}), (
            Constraint(x0 * x1 - x2, Relation.GT),
            Constraint(x2 - x0, Relation.GT),
        ))
        budget = Budget(rng_seed=7)
        assert sol(system, budget).witness == sol(system, budget).witness

    def test_random_realize_skips_equalities(self, ring):
        """Test the goal test needs an equality-free system"""
        x0, _, _ = ring.gens
        system = PolySystem(ring, frozenset({0}), (Constraint(x0 - 1, Relation.EQ),))
        assert random_realize(system, 10, np.random.default_rng(0)) is None

    def test_budget_validation(self):
        """Test the starting limit may not exceed the maximum"""
        with pytest.raises(ValueError):
            Budget(cost_limit=5.0, max_cost_limit=1.0)

    def test_zero_denominator_is_fatal(self, ring):
        """Test back-substitution through a vanishing denominator"""
        _, x1, _ = ring.gens
        step = EliminationStep("E2", 0, num=ring.one, den=x1, den_sign=Sign.PLUS)
        with pytest.raises(SoundnessError):
            back_substitute({1: Fraction(0)}, [step])

    def test_class_seeds(self):
        """Test per-class seeds depend on both the class and the global seed"""
        assert class_seed("+++", 0) == class_seed("+++", 0)
        assert class_seed("+++", 0) != class_seed("+++", 1)
        assert class_seed("+++", 0) != class_seed("++-", 0)
        assert class_budget(Budget(), "+++", 3).rng_seed == class_seed("+++", 3)


class TestRealize:
    """Test end-to-end realization with exact verification"""

    @pytest.mark.parametrize("matrix", [FIVE_POINTS, MOMENT_CURVE, CYCLIC_SIX])
    def test_realizable_configurations(self, matrix):
        """Test realizable chirotopes and their negations are realized"""
        for chi in (chirotope_from_matrix(matrix), -chirotope_from_matrix(matrix)):
            outcome = realize(chi)
            assert outcome.feasible
            assert not outcome.via_dual
            assert verify_realization(outcome.realization, chi)

    def test_full_rank_chirotope(self):
        """Test n = r is realized by a signed identity"""
        outcome = realize(Chirotope(3, 3, (-1,)))
        assert outcome.feasible
        assert chirotope_from_matrix(outcome.realization) == Chirotope(3, 3, (-1,))

    def test_non_pappus_is_never_realized(self):
        """Test the bent Pappus configuration stays unknown without a witness"""
        budget = Budget(max_cost_limit=3.0, random_trials=20, node_trials=5, max_nodes=300)
        outcome = realize(non_pappus(), budget)
        assert not outcome.feasible
        assert outcome.realization is None
        assert outcome.reason in set(UnknownReason)

    def test_stats_record_system_size(self):
        """Test the outcome carries the reduced system size"""
        outcome = realize(chirotope_from_matrix(FIVE_POINTS))
        assert outcome.stats.variables >= 0
        assert outcome.stats.nodes >= 1


class TestVerification:
    """Test exact determinant checks and realization transforms"""

    def test_first_mismatch(self):
        """Test the first wrong tuple is reported"""
        chi = chirotope_from_matrix(FIVE_POINTS)
        assert first_mismatch(FIVE_POINTS, chi) is None
        assert first_mismatch(FIVE_POINTS, -chi) == ((1, 2, 3), Sign.MINUS, Sign.PLUS)
        with pytest.raises(ChirotopeError):
            first_mismatch([[1, 0], [0, 1]], chi)

    def test_transform_realization(self):
        """Test transformed matrices realize transformed chirotopes"""
        chi = chirotope_from_matrix(FIVE_POINTS)
        perm, flipped = (2, 5, 1, 3, 4), {1, 3}
        matrix = transform_realization(FIVE_POINTS, perm, flipped, negate=True)
        assert verify_realization(matrix, transform(chi, perm, flipped, negate=True))

    def test_dual_realization(self):
        """Test the nullspace realizes the dual chirotope"""
        chi = chirotope_from_matrix(MOMENT_CURVE)
        matrix = dual_realization(MOMENT_CURVE, dual(chi))
        assert len(matrix) == 2
        assert verify_realization(matrix, dual(chi))


class TestSmallClasses:
    """Test every class of the small cells is realized"""

    @pytest.mark.parametrize("n, r", [(4, 3), (5, 3), (5, 4), (6, 3), (6, 4), (6, 5)])
    def test_all_classes_realized(self, n, r):
        """Test zero unknowns among the classes of small cells"""
        for chi in enumerate_classes(n, r).chirotopes():
            outcome = realize(chi, class_budget(Budget(), chi.sign_string, 0))
            assert outcome.feasible, chi.sign_string
            assert verify_realization(outcome.realization, chi)

    @pytest.mark.slow
    def test_rank_three_on_seven(self):
        """Test all 143 classes of OM(3,7) are realized"""
        report = enumerate_classes(7, 3)
        assert report.class_count == 143
        for chi in report.chirotopes():
            outcome = realize(chi, class_budget(Budget(), chi.sign_string, 0))
            assert outcome.feasible, chi.sign_string
            assert verify_realization(outcome.realization, chi)


def random_system(rng: np.random.Generator, linear: bool) -> PolySystem:
    """Up to 3 variables and 5 strict constraints with coefficients in [-3, 3]."""
    count = int(rng.integers(1, 4))
    ring = make_ring(count)
    gens = list(ring.gens[:count])
    monomials = [ring.one] + gens
    if not linear:
        monomials += [a * b for k, a in enumerate(gens) for b in gens[k:]]
    constraints = []
    for _ in range(int(rng.integers(1, 6))):
        poly = ring.zero
        for monomial in monomials:
            poly += int(rng.integers(-3, 4)) * monomial
        constraints.append(Constraint(poly, Relation.GT))
    return PolySystem(ring, frozenset(range(count)), tuple(constraints))


GRID = [Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(1), Fraction(3, 2),
        Fraction(2), Fraction(3), Fraction(5), Fraction(8)]


def grid_solves(system: PolySystem) -> bool:
    variables = sorted(system.variables)
    return any(system.is_satisfied_by(dict(zip(variables, point)))
               for point in product(GRID, repeat=len(variables)))


class TestSoundnessSampling:
    """Test sol on random small systems"""

    @pytest.mark.parametrize("linear, seed", [(True, 2024), (False, 7), (False, 8)])
    def test_random_systems(self, linear, seed):
        """Test no invalid witness and no miss against the grid"""
        rng = np.random.default_rng(seed)
        budget = Budget(random_trials=20, node_trials=5)
        for _ in range(500):
            system = random_system(rng, linear=linear)
            outcome = sol(system, budget)
            if outcome.feasible:
                assert system.is_satisfied_by(outcome.witness)
            elif grid_solves(system):
                pytest.fail(f"missed a solvable system:\n{system}")


class TestGridSweep:
    """Test the deterministic grid goal test"""

    def test_far_solution(self):
        """Test a quadratic system whose solutions lie far from 1 is solved"""
        ring = make_ring(2)
        x0, x1 = ring.gens
        system = PolySystem(ring, frozenset({0, 1}), tuple(Constraint(p, Relation.GT) for p in (
            x0 ** 2 + 2 * x0 * x1 - x0 + 2,
            -x0 ** 2 + x0 * x1 + 3 * x1 ** 2 - 2 * x0 - x1 - 3,
            x0 ** 2 + 2 * x0 * x1 + 3 * x1 ** 2 - x0 - 2 * x1 - 2,
            2 * x0 ** 2 - 3 * x0 * x1 - 3 * x1 ** 2 - x0 - 2 * x1,
            2 * x0 ** 2 - 2 * x0 * x1 + 2 * x1 ** 2 + 2 * x0 + 2 * x1 - 3,
        )))
        assert system.is_satisfied_by({0: Fraction(49), 1: Fraction(22)})
        assert grid_realize(system) is not None
        outcome = sol(system, Budget(random_trials=20, node_trials=5))
        assert outcome.feasible
        assert system.is_satisfied_by(outcome.witness)
        assert outcome.stats.grid_sweeps >= 1

    def test_sweep_limits(self, ring):
        """Test the sweep skips equalities and larger systems, and can be disabled"""
        x0, x1, x2 = ring.gens
        system = PolySystem(ring, frozenset({0}), (Constraint(x0 - 1, Relation.EQ),))
        assert grid_realize(system) is None
        system = PolySystem(make_ring(4), frozenset(range(4)), ())
        assert grid_realize(system) is None
        system = PolySystem(ring, frozenset({0, 1}), (Constraint(x0 - 100 * x1, Relation.GT),))
        outcome = sol(system, Budget(random_trials=0, node_trials=0, sweep_variables=0))
        assert outcome.stats.grid_sweeps == 0

    def test_zero_trials(self, ring):
        """Test a zero trial budget draws nothing"""
        x0, _, _ = ring.gens
        system = PolySystem(ring, frozenset({0}), (Constraint(x0 - 1, Relation.GT),))
        assert random_realize(system, 0, np.random.default_rng(0)) is None
        assert random_realize(PolySystem(ring, frozenset(), ()), 0, np.random.default_rng(0)) == {}
        with pytest.raises(ValueError):
            Budget(random_trials=-1)
