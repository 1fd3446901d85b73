#!/usr/bin/env python3
"""
Polynomial Systems
==================
Sparse multivariate polynomials over QQ (sympy PolyRing, graded lex order)
and the sign-constrained system container consumed by the solver.
Every variable of a system is implicitly positive.
"""

import logging
import re
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from sympy.polys.domains import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement, PolyRing

from chirotopes.core import Sign

# Configure logging
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

Polynomial = PolyElement
Witness = Dict[int, Fraction]


class Relation(str, Enum):
    GT = ">"
    EQ = "="


@lru_cache(maxsize=None)
def make_ring(count: int) -> PolyRing:
    """Ring QQ[x0, ..., x{count-1}]; variable id k is generator k."""
    names = ",".join(f"x{k}" for k in range(max(count, 1)))
    return PolyRing(names, QQ, grlex)


def to_fraction(coefficient) -> Fraction:
    return Fraction(int(QQ.numer(coefficient)), int(QQ.denom(coefficient)))


def from_fraction(value) -> object:
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def constant(ring: PolyRing, value) -> Polynomial:
    return ring.ground_new(from_fraction(value))


def variables_of(p: Polynomial) -> FrozenSet[int]:
    return frozenset(k for monom in p.keys() for k, e in enumerate(monom) if e)


def degree_in(p: Polynomial, v: int) -> int:
    """Maximal exponent of variable v; 0 when v is absent or p is zero."""
    return max((monom[v] for monom in p.keys()), default=0)


def coefficients_in(p: Polynomial, v: int) -> Dict[int, Polynomial]:
    """Split p = Σ_k c_k · v^k into {k: c_k} with every c_k free of v."""
    parts: Dict[int, Dict[tuple, object]] = {}
    for monom, coeff in p.items():
        k = monom[v]
        reduced = monom[:v] + (0,) + monom[v + 1:]
        parts.setdefault(k, {})[reduced] = coeff
    return {k: p.ring.from_dict(terms) for k, terms in parts.items()}


def evaluate(p: Polynomial, witness: Witness) -> Fraction:
    """Exact value of p; raises ValueError on an unassigned variable."""
    total = Fraction(0)
    for monom, coeff in p.items():
        term = to_fraction(coeff)
        for k, e in enumerate(monom):
            if e:
                if k not in witness:
                    raise ValueError(f"variable x{k} is not assigned")
                term *= Fraction(witness[k]) ** e
        total += term
    return total


def substitute_linear(p: Polynomial, v: int, e: Polynomial) -> Polynomial:
    """Replace every occurrence of v in p by e (exact expansion)."""
    if degree_in(e, v):
        raise ValueError(f"substituted expression contains x{v}")
    result = p.ring.zero
    for k, coeff in coefficients_in(p, v).items():
        result += coeff * e ** k
    return result


def sign_definite(p: Polynomial) -> Optional[Sign]:
    """Sign of p on the positive orthant when its coefficients decide it."""
    if not p:
        return Sign.ZERO
    signs = {Sign.of(to_fraction(c)) for c in p.values()}
    if len(signs) == 1:
        return signs.pop()
    return None


def strip_content(p: Polynomial) -> Polynomial:
    """Divide out the largest monomial factor and scale to |LC| = 1."""
    if not p:
        return p
    monoms = list(p.keys())
    low = tuple(min(m[k] for m in monoms) for k in range(len(monoms[0])))
    if any(low):
        p = p.ring.from_dict({tuple(a - b for a, b in zip(m, low)): c for m, c in p.items()})
    lead = p.LC
    if lead < 0:
        lead = -lead
    return p.quo_ground(lead)


# ============================================================================
# CONSTRAINTS AND SYSTEMS
# ============================================================================

@dataclass(frozen=True)
class Constraint:
    """poly > 0 or poly = 0; provenance is the r-tuple the constraint came from."""
    poly: Polynomial
    relation: Relation
    provenance: Optional[Tuple[int, ...]] = None

    @classmethod
    def from_sign(cls, poly: Polynomial, sign: Sign, provenance: Optional[Tuple[int, ...]] = None) -> 'Constraint':
        """sign(poly) = sign, with '< 0' stored as '-poly > 0'."""
        if sign == Sign.ZERO:
            return cls(poly, Relation.EQ, provenance)
        return cls(poly if sign == Sign.PLUS else -poly, Relation.GT, provenance)

    @property
    def is_equality(self) -> bool:
        return self.relation is Relation.EQ

    @property
    def variables(self) -> FrozenSet[int]:
        return variables_of(self.poly)

    def holds_for(self, value: Fraction) -> bool:
        return value > 0 if self.relation is Relation.GT else value == 0

    def __str__(self) -> str:
        return format_constraint(self)


Decision = Union[Constraint, bool]


def evaluate_constraint(c: Constraint, witness: Witness) -> bool:
    return c.holds_for(evaluate(c.poly, witness))


def simplify_constraint(c: Constraint) -> Decision:
    """
    Normalize a constraint over positive variables.

    Returns:
        True when it always holds, False when it never does, otherwise the
        constraint with monomial content stripped and |leading coefficient| 1
    """
    sign = sign_definite(c.poly)
    if sign is not None:
        if c.is_equality:
            return sign == Sign.ZERO
        return sign == Sign.PLUS
    return replace(c, poly=strip_content(c.poly))


def substitute_ratio(c: Constraint, v: int, num: Polynomial, den: Polynomial, den_sign: Sign) -> Constraint:
    """
    Clear denominators after v := num / den.

    Returns den^d · c.poly[v := num/den] with d = degree_in(c.poly, v); an
    inequality is negated when den_sign is MINUS and d is odd.
    """
    if den_sign == Sign.ZERO:
        raise ValueError("denominator sign must be + or -")
    if degree_in(num, v) or degree_in(den, v):
        raise ValueError(f"substituted ratio contains x{v}")
    d = degree_in(c.poly, v)
    if d == 0:
        return c
    poly = c.poly.ring.zero
    for k, coeff in coefficients_in(c.poly, v).items():
        poly += coeff * num ** k * den ** (d - k)
    if c.relation is Relation.GT and den_sign == Sign.MINUS and d % 2:
        poly = -poly
    return Constraint(poly, c.relation, c.provenance)


@dataclass(frozen=True)
class PolySystem:
    """Constraints over free-positive variables; ids index the ring generators."""
    ring: PolyRing
    variables: FrozenSet[int]
    constraints: Tuple[Constraint, ...] = field(default_factory=tuple)

    def __post_init__(self):
        undeclared = set().union(*(c.variables for c in self.constraints)) - set(self.variables)
        if undeclared:
            raise ValueError(f"undeclared variables {sorted(undeclared)}")

    @property
    def equalities(self) -> List[Constraint]:
        return [c for c in self.constraints if c.is_equality]

    @property
    def inequalities(self) -> List[Constraint]:
        return [c for c in self.constraints if not c.is_equality]

    def has_equalities(self) -> bool:
        return any(c.is_equality for c in self.constraints)

    def is_satisfied_by(self, witness: Witness) -> bool:
        if any(witness.get(v, 0) <= 0 for v in self.variables):
            return False
        return all(evaluate_constraint(c, witness) for c in self.constraints)

    def __str__(self) -> str:
        return format_system(self)


def simplify_system(ring: PolyRing, variables: Iterable[int],
                    constraints: Iterable[Constraint]) -> Optional[PolySystem]:
    """Simplify and deduplicate; None when some constraint is decided false."""
    kept: List[Constraint] = []
    seen = set()
    for c in constraints:
        decided = simplify_constraint(c)
        if decided is False:
            return None
        if decided is True:
            continue
        key = (decided.relation, decided.poly)
        if key not in seen:
            seen.add(key)
            kept.append(decided)
    return PolySystem(ring, frozenset(variables), tuple(kept))


# ============================================================================
# TEXT FORMAT
# ============================================================================

def _format_fraction(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def format_polynomial(p: Polynomial) -> str:
    """Terms `coef * x<id>^e * ...` in graded lex order joined by ' + ' / ' - '."""
    if not p:
        return "0"
    pieces = []
    for monom, coeff in p.terms():
        value = to_fraction(coeff)
        factors = [_format_fraction(abs(value))]
        for k, e in enumerate(monom):
            if e:
                factors.append(f"x{k}" if e == 1 else f"x{k}^{e}")
        body = " * ".join(factors)
        if not pieces:
            pieces.append(body if value > 0 else f"-{body}")
        else:
            pieces.append(f"{'+' if value > 0 else '-'} {body}")
    return " ".join(pieces)


_FACTOR = re.compile(r"^x(\d+)(?:\^(\d+))?$")


def parse_polynomial(text: str, ring: PolyRing) -> Polynomial:
    text = text.strip()
    if text == "0":
        return ring.zero
    tokens = re.split(r" ([+-]) ", text)
    signs = [1] + [1 if t == "+" else -1 for t in tokens[1::2]]
    terms: Dict[tuple, object] = {}
    for sign, body in zip(signs, tokens[0::2]):
        if body.startswith("-"):
            sign, body = -sign, body[1:]
        factors = body.split(" * ")
        value = sign * Fraction(factors[0])
        monom = [0] * ring.ngens
        for factor in factors[1:]:
            match = _FACTOR.match(factor)
            if match is None:
                raise ValueError(f"cannot parse factor {factor!r}")
            k = int(match.group(1))
            if k >= ring.ngens:
                raise ValueError(f"variable x{k} outside the ring")
            monom[k] += int(match.group(2) or 1)
        key = tuple(monom)
        terms[key] = terms.get(key, QQ(0)) + from_fraction(value)
    return ring.from_dict({m: c for m, c in terms.items() if c})


def format_constraint(c: Constraint) -> str:
    return f"{format_polynomial(c.poly)} {c.relation.value} 0"


def parse_constraint(text: str, ring: PolyRing) -> Constraint:
    text = text.strip()
    for relation in Relation:
        suffix = f" {relation.value} 0"
        if text.endswith(suffix):
            return Constraint(parse_polynomial(text[:-len(suffix)], ring), relation)
    raise ValueError(f"constraint must end in '> 0' or '= 0': {text!r}")


def format_system(system: PolySystem) -> str:
    lines = [f"variables: {' '.join(f'x{v}' for v in sorted(system.variables))}"]
    for c in system.constraints:
        tag = f"    # {c.provenance}" if c.provenance is not None else ""
        lines.append(f"{format_constraint(c)}{tag}")
    return "\n".join(lines)
