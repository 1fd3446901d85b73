#!/usr/bin/env python3
"""
Tests for mutations, forcing closure, frames and system construction
"""

import sys
import os
from fractions import Fraction

# Add parent directory to path to import our modules
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import pytest

from chirotopes.core import Chirotope, ChirotopeError, Sign, check_axioms, chirotope_from_matrix, lambda_tuples
from chirotopes.enumeration import enumerate_classes
from chirotopes.polysys import Constraint, Relation, make_ring
from chirotopes.reduction import (
    ForcingClosure, _trivial_equality, build_grid, build_system, determinant_polynomial,
    format_reduction, generalized_mutations, gp_closure, minimal_reduced_system, reduce_chirotope,
    removable_tuples, select_frame,
)

# (0,0), (1,0), (1,1), (0,1), (-1,-2) with homogenizing coordinate 1
FIVE_POINTS = [[0, 1, 1, 0, -1], [0, 0, 1, 1, -2], [1, 1, 1, 1, 1]]
UNIT_SQUARE = [[0, 1, 1, 0], [0, 0, 1, 1], [1, 1, 1, 1]]


@pytest.fixture
def five_points():
    return chirotope_from_matrix(FIVE_POINTS)


class TestClosure:
    """Test generalized mutations and the forcing closure"""

    def test_five_point_signs(self, five_points):
        """Test the sign string of the five-point configuration"""
        assert five_points.sign_string == "++-+-+++++"

    def test_three_term_relation_forces_sign(self, five_points):
        """Test the closure of five known tuples reaches (1,3,4)"""
        known = {(1, 2, 3), (1, 2, 4), (1, 2, 5), (1, 3, 5), (1, 4, 5)}
        closure = gp_closure(five_points, known)
        assert known <= closure
        assert (1, 3, 4) in closure

    def test_closure_of_nothing(self, five_points):
        """Test an empty start forces nothing"""
        closure = ForcingClosure(five_points)
        assert closure.size == 0
        assert not closure.complete

    def test_closure_is_incremental(self, five_points):
        """Test adding every tuple completes the closure"""
        closure = ForcingClosure(five_points)
        for t in lambda_tuples(5, 3):
            closure.add(t)
        assert closure.complete
        assert closure.tuples() == set(lambda_tuples(5, 3))

    def test_every_tuple_mutates_on_four_elements(self):
        """Test a uniform rank-3 chirotope on four elements has no exchange constraints"""
        chi = chirotope_from_matrix(UNIT_SQUARE)
        assert generalized_mutations(chi) == set(lambda_tuples(4, 3))

    def test_mutations_are_sign_changes(self, five_points):
        """Test flipping a mutation tuple keeps the map a chirotope"""
        tuples = lambda_tuples(5, 3)
        for t in generalized_mutations(five_points):
            k = tuples.index(t)
            signs = list(five_points.signs)
            flipped = [value for value in (1, -1, 0) if value != signs[k]]
            assert any(check_axioms(Chirotope(5, 3, tuple(signs[:k] + [v] + signs[k + 1:]))).valid
                       for v in flipped)


class TestReducedSystem:
    """Test the greedy minimal reduced system"""

    def test_reduced_system_forces_everything(self, five_points):
        """Test the closure of the reduced tuples is all of the tuple set"""
        reduced = minimal_reduced_system(five_points, (1, 2, 3))
        assert reduced.mutations <= reduced.tuples
        assert ForcingClosure(five_points, reduced.tuples).complete
        assert set(reduced.added) == set(reduced.tuples - reduced.mutations)

    def test_degree_of(self, five_points):
        """Test the degree counts basis elements missing from a tuple"""
        reduced = minimal_reduced_system(five_points, (1, 2, 3))
        assert reduced.degree_of((1, 2, 3)) == 0
        assert reduced.degree_of((1, 4, 5)) == 2
        assert reduced.degree_of((3, 4, 5)) == 2

    def test_non_basis_rejected(self):
        """Test a zero tuple cannot serve as basis"""
        chi = chirotope_from_matrix([[0, 1, 2, 0], [0, 0, 0, 1], [1, 1, 1, 1]])
        with pytest.raises(ChirotopeError):
            minimal_reduced_system(chi, (1, 2, 3))

    def test_removable_tuples_keep_closure(self, five_points):
        """Test each reported removable tuple really is removable"""
        reduced = minimal_reduced_system(five_points, (1, 2, 3))
        for t in removable_tuples(five_points, reduced):
            assert ForcingClosure(five_points, reduced.tuples - {t}).complete


class TestFrames:
    """Test frame selection and the variable grid"""

    def test_frame_basis_is_positive(self, five_points):
        """Test the chosen basis is positive after orientation"""
        for chi in (five_points, -five_points):
            frame = select_frame(chi)
            assert frame.oriented(chi).sign_of(frame.basis) == Sign.PLUS
            assert frame.residual_equalities == 0

    def test_grid_signs(self):
        """Test slot signs are the signs of basis exchanges"""
        grid = build_grid(chirotope_from_matrix(UNIT_SQUARE), (1, 2, 3))
        assert [grid.signs[k][3] for k in range(3)] == [1, -1, 1]
        assert grid.free_count == 3
        assert not grid.negated

    def test_negated_grid_realization(self):
        """Test the first row is negated for a negative basis"""
        chi = -chirotope_from_matrix(UNIT_SQUARE)
        grid = build_grid(chi, (1, 2, 3))
        assert grid.negated
        matrix = grid.realization({0: Fraction(1), 1: Fraction(1), 2: Fraction(1)})
        assert matrix[0] == [-1, 0, 0, -1]
        assert matrix[1] == [0, 1, 0, -1]
        assert chirotope_from_matrix(matrix) == chi

    def test_normalized_slots_are_constants(self, five_points):
        """Test the normalized row and column carry no variables"""
        grid = build_grid(five_points, (1, 2, 3), row=0, column=4)
        assert all(grid.variables[0][l - 1] is None for l in (4, 5))
        assert all(grid.variables[k][3] is None for k in range(3))
        assert grid.free_count == 2

    def test_determinant_of_basis(self, five_points):
        """Test the basis columns form the identity"""
        grid = build_grid(five_points, (1, 2, 3))
        ring = make_ring(grid.free_count)
        assert determinant_polynomial(grid, ring, (1, 2, 3)) == ring.one


class TestBuildSystem:
    """Test the determinant system"""

    def test_trivial_equalities(self):
        """Test merge and fix detection"""
        ring = make_ring(2)
        x0, x1 = ring.gens
        assert _trivial_equality(Constraint(x0 - x1, Relation.EQ)) == (1, 0, Fraction(0))
        assert _trivial_equality(Constraint(2 * x0 - 1, Relation.EQ)) == (0, None, Fraction(1, 2))
        assert _trivial_equality(Constraint(x0 + 1, Relation.EQ)) is None
        assert _trivial_equality(Constraint(x0 - x1, Relation.GT)) is None

    def test_constraints_come_from_high_degree_tuples(self, five_points):
        """Test provenance and declared variables of the built system"""
        frame, system, grid = reduce_chirotope(five_points)
        for c in system.constraints:
            assert c.provenance in frame.reduced.tuples
            assert frame.reduced.degree_of(c.provenance) >= 2
        assert system.variables <= set(range(grid.free_count))

    def test_four_elements_need_no_constraints(self):
        """Test rank 3 on four elements reduces to an empty system"""
        frame, system, grid = reduce_chirotope(chirotope_from_matrix(UNIT_SQUARE))
        assert system.constraints == ()

    def test_format_reduction(self, five_points):
        """Test the debug dump names the frame and the grid"""
        frame, system, grid = reduce_chirotope(five_points)
        text = format_reduction(five_points, frame, system, grid)
        assert text.startswith("chirotope: 5 3 ++-+-+++++")
        assert "basis:" in text
        assert "variables:" in text

    def test_wrong_frame_rejected(self, five_points):
        """Test a frame chosen for another orientation raises"""
        frame = select_frame(five_points)
        with pytest.raises(ChirotopeError):
            build_system(-five_points, frame)


class TestSmallClasses:
    """Test mutations and reduced systems on every class of OM(3,6) and OM(4,6)"""

    @staticmethod
    def single_flip_mutations(chi):
        """Tuples for which some other sign still gives a chirotope."""
        found = set()
        for k, t in enumerate(lambda_tuples(chi.n, chi.r)):
            for value in (1, -1, 0):
                if value == chi.signs[k]:
                    continue
                signs = list(chi.signs)
                signs[k] = value
                if check_axioms(Chirotope(chi.n, chi.r, tuple(signs))).valid:
                    found.add(t)
                    break
        return found

    @pytest.mark.parametrize("n, r", [(6, 3), (6, 4)])
    def test_mutations_match_flip_oracle(self, n, r):
        """Test generalized mutations equal the brute-force single-flip set"""
        for chi in enumerate_classes(n, r).chirotopes():
            assert generalized_mutations(chi) == self.single_flip_mutations(chi)

    @pytest.mark.parametrize("n, r", [(6, 3), (6, 4)])
    def test_reduced_systems_close(self, n, r):
        """Test the selected frame's reduced system forces every tuple"""
        for chi in enumerate_classes(n, r).chirotopes():
            frame = select_frame(chi)
            assert frame.reduced.mutations <= frame.reduced.tuples
            assert ForcingClosure(chi, frame.reduced.tuples).complete
