#!/usr/bin/env python3
"""
Tests for polynomials over QQ, sign constraints and the system text format
"""

import sys
import os
from fractions import Fraction

# Add parent directory to path to import our modules
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import pytest

from chirotopes.core import Sign
from chirotopes.polysys import (
    Constraint, PolySystem, Relation, coefficients_in, constant, degree_in, evaluate, format_constraint,
    format_polynomial, format_system, make_ring, parse_constraint, parse_polynomial, sign_definite,
    simplify_constraint, simplify_system, strip_content, substitute_linear, substitute_ratio, variables_of,
)


@pytest.fixture
def ring():
    return make_ring(3)


class TestPolynomials:
    """Test the polynomial helpers"""

    def test_variables_and_degree(self, ring):
        """Test variable sets and degrees"""
        x0, x1, x2 = ring.gens
        p = x0 ** 2 * x1 + 3 * x0 + 1
        assert variables_of(p) == frozenset({0, 1})
        assert degree_in(p, 0) == 2
        assert degree_in(p, 2) == 0
        assert degree_in(ring.zero, 0) == 0

    def test_coefficients_in(self, ring):
        """Test splitting by powers of one variable"""
        x0, x1, _ = ring.gens
        parts = coefficients_in(x0 ** 2 * x1 + 3 * x0 + x1, 0)
        assert parts[2] == x1
        assert parts[1] == 3 * ring.one
        assert parts[0] == x1

    def test_evaluate(self, ring):
        """Test exact evaluation at rational points"""
        x0, x1, _ = ring.gens
        assert evaluate(x0 * x1 - 1, {0: Fraction(1, 2), 1: Fraction(4)}) == 1
        with pytest.raises(ValueError):
            evaluate(x0 + x1, {0: Fraction(1)})

    def test_substitute_linear(self, ring):
        """Test substituting an expression for a variable"""
        x0, x1, _ = ring.gens
        assert substitute_linear(x0 ** 2 + x1, 0, x1 + 1) == x1 ** 2 + 3 * x1 + 1
        with pytest.raises(ValueError):
            substitute_linear(x0, 0, x0 + 1)

    def test_sign_definite(self, ring):
        """Test coefficient signs decide the sign on the positive orthant"""
        x0, x1, _ = ring.gens
        assert sign_definite(x0 * x1 + 2) == Sign.PLUS
        assert sign_definite(-x0 - 1) == Sign.MINUS
        assert sign_definite(x0 - x1) is None
        assert sign_definite(ring.zero) == Sign.ZERO

    def test_strip_content(self, ring):
        """Test removing monomial factors and scaling the leading coefficient"""
        x0, x1, _ = ring.gens
        assert strip_content(2 * x0 ** 2 * x1 + 4 * x0 * x1 ** 2) == x0 + 2 * x1
        assert strip_content(-2 * x0 * x1 - 4 * x1) == -x0 - 2


class TestConstraints:
    """Test constraint construction and simplification"""

    def test_from_sign(self, ring):
        """Test a negative sign is stored as a positive negation"""
        x0, x1, _ = ring.gens
        c = Constraint.from_sign(x0 - x1, Sign.MINUS, (1, 2, 3))
        assert c.relation is Relation.GT
        assert c.poly == x1 - x0
        assert c.provenance == (1, 2, 3)
        assert Constraint.from_sign(x0 - x1, Sign.ZERO).is_equality

    def test_decided_constraints(self, ring):
        """Test constraints decided by their coefficient signs"""
        x0, _, _ = ring.gens
        assert simplify_constraint(Constraint(x0 + 1, Relation.GT)) is True
        assert simplify_constraint(Constraint(-x0, Relation.GT)) is False
        assert simplify_constraint(Constraint(x0, Relation.EQ)) is False
        assert simplify_constraint(Constraint(ring.zero, Relation.EQ)) is True

    def test_undecided_constraint_is_normalized(self, ring):
        """Test content stripping of an open constraint"""
        x0, x1, _ = ring.gens
        simplified = simplify_constraint(Constraint(2 * x0 * x1 - 4 * x1, Relation.GT))
        assert simplified.poly == x0 - 2
        assert simplified.relation is Relation.GT

    def test_substitute_ratio(self, ring):
        """Test clearing a denominator of known sign"""
        x0, x1, x2 = ring.gens
        square = substitute_ratio(Constraint(x0 ** 2 - x1, Relation.GT), 0, x1, x2, Sign.MINUS)
        assert square.poly == x1 ** 2 - x1 * x2 ** 2
        linear = substitute_ratio(Constraint(x0 - 1, Relation.GT), 0, x1, x2, Sign.MINUS)
        assert linear.poly == x2 - x1
        untouched = Constraint(x1 - 1, Relation.GT)
        assert substitute_ratio(untouched, 0, x1, x2, Sign.PLUS) is untouched
        with pytest.raises(ValueError):
            substitute_ratio(untouched, 0, x1, x2, Sign.ZERO)


class TestSystems:
    """Test PolySystem and simplify_system"""

    def test_undeclared_variable(self, ring):
        """Test constraints may only use declared variables"""
        x0, x1, _ = ring.gens
        with pytest.raises(ValueError):
            PolySystem(ring, frozenset({0}), (Constraint(x0 - x1, Relation.GT),))

    def test_is_satisfied_by(self, ring):
        """Test witness checking including positivity of every variable"""
        x0, x1, _ = ring.gens
        system = PolySystem(ring, frozenset({0, 1}), (
            Constraint(x0 - x1, Relation.GT),
            Constraint(x0 * x1 - 2, Relation.EQ),
        ))
        assert system.is_satisfied_by({0: Fraction(2), 1: Fraction(1)})
        assert not system.is_satisfied_by({0: Fraction(1), 1: Fraction(2)})
        assert not system.is_satisfied_by({0: Fraction(2)})
        assert system.has_equalities()
        assert len(system.inequalities) == 1

    def test_simplify_system(self, ring):
        """Test deduplication and contradiction detection"""
        x0, _, _ = ring.gens
        system = simplify_system(ring, {0}, [
            Constraint(2 * x0 - 2, Relation.GT),
            Constraint(x0 - 1, Relation.GT),
            Constraint(x0 + 5, Relation.GT),
        ])
        assert len(system.constraints) == 1
        assert simplify_system(ring, {0}, [Constraint(-x0, Relation.GT)]) is None


class TestTextFormat:
    """Test the human-readable system format"""

    def test_format_polynomial(self, ring):
        """Test term order, signs and rational coefficients"""
        x0, x1, x2 = ring.gens
        p = -3 * x0 ** 2 * x1 + constant(ring, Fraction(1, 2)) * x2 - 5
        assert format_polynomial(p) == "-3 * x0^2 * x1 + 1/2 * x2 - 5"
        assert format_polynomial(ring.zero) == "0"

    def test_parse_polynomial(self, ring):
        """Test the parser reads what the formatter writes"""
        x0, x1, x2 = ring.gens
        p = -3 * x0 ** 2 * x1 + constant(ring, Fraction(1, 2)) * x2 - 5
        assert parse_polynomial("-3 * x0^2 * x1 + 1/2 * x2 - 5", ring) == p
        with pytest.raises(ValueError):
            parse_polynomial("2 * y0", ring)
        with pytest.raises(ValueError):
            parse_polynomial("1 * x7", ring)

    def test_constraints(self, ring):
        """Test constraint lines"""
        x0, _, _ = ring.gens
        c = Constraint(x0 - 1, Relation.EQ)
        assert format_constraint(c) == "1 * x0 - 1 = 0"
        assert parse_constraint("1 * x0 - 1 = 0", ring) == c
        with pytest.raises(ValueError):
            parse_constraint("1 * x0 < 0", ring)

    def test_format_system(self, ring):
        """Test the variable header and provenance comments"""
        x0, x1, _ = ring.gens
        system = PolySystem(ring, frozenset({1, 0}), (Constraint(x0 - x1, Relation.GT, (1, 2, 4)),))
        assert format_system(system) == "variables: x0 x1\n1 * x0 - 1 * x1 > 0    # (1, 2, 4)"
