#!/usr/bin/env python3
"""
Chirotope Core
==============
Chirotopes on the lexicographically ordered r-subsets of {1..n}, the
Grassmann-Plücker axiom check, symmetry actions (relabeling, reorientation,
global negation), canonical forms, and the derived combinatorial data:
circuits, cocircuits, acyclicity, extreme elements, matroid polytopes.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations, islice, permutations
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

import numpy as np
from sympy import Matrix, Rational

# Configure logging
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

RTuple = Tuple[int, ...]

# Permutations are streamed in blocks of this size when orbits are minimized
RELABEL_CHUNK = 5040
# Relabeling tables are kept in memory up to this element count
CACHED_RELABEL_LIMIT = 8


class ChirotopeError(ValueError):
    """Malformed sign data or an operation outside its domain."""


class Sign(IntEnum):
    """Value of a chirotope, a covector entry or a polynomial."""
    MINUS = -1
    ZERO = 0
    PLUS = 1

    def __neg__(self) -> 'Sign':
        return Sign(-int(self))

    def __mul__(self, other) -> 'Sign':
        return Sign(int(self) * int(other))

    __rmul__ = __mul__

    @property
    def char(self) -> str:
        return SIGN_CHARS[int(self)]

    @classmethod
    def of(cls, value) -> 'Sign':
        """Sign of any ordered number (int, Fraction, sympy Rational)."""
        return cls((value > 0) - (value < 0))

    @classmethod
    def from_char(cls, char: str) -> 'Sign':
        try:
            return cls(CHAR_SIGNS[char])
        except KeyError:
            raise ChirotopeError(f"invalid sign character {char!r}") from None


SIGN_CHARS = {1: '+', -1: '-', 0: '0'}
CHAR_SIGNS = {'+': 1, '-': -1, '0': 0, '−': -1}

# Lexicographic rank of each sign character: '+' < '-' < '0', indexed by value + 1
_ORDER_CODE = np.array([1, 2, 0], dtype=np.int8)
_CODE_CHARS = '+-0'


class SymmetryGroup(str, Enum):
    """Groups whose orbits define the equivalence classes in use."""
    RELABEL = "relabel-only"
    RELABEL_NEGATE = "relabel+negate"
    FULL = "relabel+reorient+negate"


# ============================================================================
# TUPLE BOOKKEEPING
# ============================================================================

@lru_cache(maxsize=None)
def lambda_tuples(n: int, r: int) -> Tuple[RTuple, ...]:
    """All strictly increasing r-tuples of 1..n in lexicographic order."""
    return tuple(combinations(range(1, n + 1), r))


@lru_cache(maxsize=None)
def tuple_index(n: int, r: int) -> Dict[RTuple, int]:
    return {t: k for k, t in enumerate(lambda_tuples(n, r))}


def permutation_parity(seq: Sequence[int]) -> int:
    """+1 for an even arrangement of distinct values, -1 for an odd one."""
    inversions = sum(1 for a in range(len(seq)) for b in range(a + 1, len(seq)) if seq[a] > seq[b])
    return -1 if inversions % 2 else 1


def signed_position(n: int, r: int, seq: Sequence[int]) -> Optional[Tuple[int, int]]:
    """(position of sorted seq, parity) or None when seq repeats an index."""
    if len(set(seq)) < len(seq):
        return None
    return tuple_index(n, r)[tuple(sorted(seq))], permutation_parity(seq)


# ============================================================================
# CHIROTOPE AND SIGN VECTORS
# ============================================================================

@dataclass(frozen=True)
class Chirotope:
    """Sign map on Λ(n, r); signs are -1/0/+1 in lexicographic tuple order."""
    n: int
    r: int
    signs: Tuple[int, ...]

    def __post_init__(self):
        if not 1 <= self.r <= self.n:
            raise ChirotopeError(f"rank {self.r} is not within 1..{self.n}")
        expected = len(lambda_tuples(self.n, self.r))
        if len(self.signs) != expected:
            raise ChirotopeError(f"expected {expected} signs for n={self.n}, r={self.r}, got {len(self.signs)}")
        if any(s not in (-1, 0, 1) for s in self.signs):
            raise ChirotopeError("signs must be -1, 0 or +1")
        object.__setattr__(self, 'signs', tuple(int(s) for s in self.signs))

    @classmethod
    def from_string(cls, n: int, r: int, text: str) -> 'Chirotope':
        return cls(n, r, tuple(int(Sign.from_char(ch)) for ch in text))

    @property
    def sign_string(self) -> str:
        return ''.join(SIGN_CHARS[s] for s in self.signs)

    @cached_property
    def array(self) -> np.ndarray:
        arr = np.array(self.signs, dtype=np.int8)
        arr.setflags(write=False)
        return arr

    def sign_of(self, t: RTuple) -> Sign:
        """Stored sign of a sorted tuple."""
        return Sign(self.signs[tuple_index(self.n, self.r)[t]])

    def __neg__(self) -> 'Chirotope':
        return Chirotope(self.n, self.r, tuple(-s for s in self.signs))

    def __str__(self) -> str:
        return f"{self.n} {self.r} {self.sign_string}"


@dataclass(frozen=True)
class SignVector:
    """Circuit, cocircuit or covector over {+,-,0}."""
    entries: Tuple[int, ...]

    @property
    def support(self) -> Set[int]:
        return {e + 1 for e, s in enumerate(self.entries) if s}

    @property
    def positive(self) -> Set[int]:
        return {e + 1 for e, s in enumerate(self.entries) if s > 0}

    @property
    def negative(self) -> Set[int]:
        return {e + 1 for e, s in enumerate(self.entries) if s < 0}

    @property
    def zeros(self) -> Set[int]:
        return {e + 1 for e, s in enumerate(self.entries) if not s}

    def __neg__(self) -> 'SignVector':
        return SignVector(tuple(-s for s in self.entries))

    def normalized(self) -> 'SignVector':
        """Representative of the ± pair whose first nonzero entry is +."""
        for s in self.entries:
            if s:
                return self if s > 0 else -self
        return self

    def compose(self, other: 'SignVector') -> 'SignVector':
        return SignVector(tuple(a if a else b for a, b in zip(self.entries, other.entries)))

    def __str__(self) -> str:
        return ''.join(SIGN_CHARS[s] for s in self.entries)


@dataclass(frozen=True)
class AxiomReport:
    """Outcome of check_axioms; witness is a tuple pair or 'identically zero'."""
    valid: bool
    witness: Optional[object] = None


# ============================================================================
# GRASSMANN-PLÜCKER TABLES
# ============================================================================

@dataclass
class GrassmannPluckerTable:
    """
    Vectorized instances of the exchange axiom for a fixed (n, r).

    Instance k reads: if every product T_s = χ(j_s, i_2..i_r)·χ(j_1..i_1..j_r)
    is >= 0 then χ(i)·χ(j) >= 0. Instances that hold for every alternating map
    (i_1 in j, or |i ∩ j| >= r-1) are omitted. Index m addresses a constant 0.
    """
    n: int
    r: int
    pairs: List[Tuple[RTuple, RTuple]]
    lhs_a: np.ndarray
    lhs_b: np.ndarray
    lhs_sign: np.ndarray
    term_a: np.ndarray
    term_b: np.ndarray
    term_sign: np.ndarray
    involved: np.ndarray
    last_position: np.ndarray
    by_position: List[np.ndarray] = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.pairs)

    def violations(self, extended: np.ndarray, rows: Optional[np.ndarray] = None) -> np.ndarray:
        """Boolean mask of violated instances for a sign array with trailing 0."""
        if rows is None:
            la, lb, ls = self.lhs_a, self.lhs_b, self.lhs_sign
            ta, tb, ts = self.term_a, self.term_b, self.term_sign
        else:
            la, lb, ls = self.lhs_a[rows], self.lhs_b[rows], self.lhs_sign[rows]
            ta, tb, ts = self.term_a[rows], self.term_b[rows], self.term_sign[rows]
        lhs = extended[la] * extended[lb] * ls
        terms = extended[ta] * extended[tb] * ts
        return (lhs < 0) & (terms >= 0).all(axis=1)

    def consistent_values(self, extended: np.ndarray, position: int, rows: np.ndarray) -> List[int]:
        """Values for one position that violate none of the given instances."""
        saved = extended[position]
        allowed = []
        for value in (1, -1, 0):
            extended[position] = value
            if rows.size == 0 or not self.violations(extended, rows).any():
                allowed.append(value)
        extended[position] = saved
        return allowed


@lru_cache(maxsize=None)
def grassmann_plucker_table(n: int, r: int) -> GrassmannPluckerTable:
    tuples = lambda_tuples(n, r)
    index = tuple_index(n, r)
    m = len(tuples)
    width = max(r, 1)

    pairs, lhs_rows, term_rows, involved_rows = [], [], [], []
    for i1 in range(1, n + 1):
        for rest in combinations(range(1, n + 1), r - 1):
            if i1 in rest:
                continue
            first = signed_position(n, r, (i1,) + rest)
            for j in tuples:
                if i1 in j or len(set(rest) & set(j)) >= r - 1:
                    continue
                terms = []
                for s in range(r):
                    a = signed_position(n, r, (j[s],) + rest)
                    b = signed_position(n, r, j[:s] + (i1,) + j[s + 1:])
                    if a is not None and b is not None:
                        terms.append((a[0], b[0], a[1] * b[1]))
                pairs.append(((i1,) + rest, j))
                lhs_rows.append((first[0], index[j], first[1]))
                term_rows.append(terms + [(m, m, 1)] * (width - len(terms)))
                involved_rows.append(sorted({first[0], index[j]} | {t[0] for t in terms} | {t[1] for t in terms}))

    count = len(pairs)
    lhs = np.array(lhs_rows, dtype=np.int64).reshape(count, 3)
    terms = np.array(term_rows, dtype=np.int64).reshape(count, width, 3)
    span = max((len(row) for row in involved_rows), default=1)
    involved = np.full((count, span), m, dtype=np.int64)
    for k, row in enumerate(involved_rows):
        involved[k, :len(row)] = row
    last = np.array([row[-1] for row in involved_rows], dtype=np.int64)

    table = GrassmannPluckerTable(
        n=n, r=r, pairs=pairs,
        lhs_a=lhs[:, 0], lhs_b=lhs[:, 1], lhs_sign=lhs[:, 2].astype(np.int8),
        term_a=terms[:, :, 0], term_b=terms[:, :, 1], term_sign=terms[:, :, 2].astype(np.int8),
        involved=involved, last_position=last,
    )
    members: List[List[int]] = [[] for _ in range(m)]
    for k, row in enumerate(involved_rows):
        for position in row:
            members[position].append(k)
    table.by_position = [np.array(rows, dtype=np.int64) for rows in members]
    logger.debug(f"🔍 Grassmann-Plücker table for n={n}, r={r}: {count} instances")
    return table


def extended_signs(chi: Chirotope) -> np.ndarray:
    """Writable int8 copy of the signs with the constant-zero slot appended."""
    return np.append(chi.array, np.int8(0)).astype(np.int8)


# ============================================================================
# AXIOMS AND BASIC PREDICATES
# ============================================================================

def eval_sign(chi: Chirotope, seq: Sequence[int]) -> Sign:
    """Alternating extension of chi to arbitrary index sequences of length r."""
    if len(seq) != chi.r:
        raise ChirotopeError(f"expected {chi.r} indices, got {len(seq)}")
    if any(not 1 <= e <= chi.n for e in seq):
        raise ChirotopeError(f"index out of range 1..{chi.n} in {tuple(seq)}")
    located = signed_position(chi.n, chi.r, seq)
    if located is None:
        return Sign.ZERO
    position, parity = located
    return Sign(parity * chi.signs[position])


def check_axioms(chi: Chirotope) -> AxiomReport:
    """Axioms (a) and (c); the alternating axiom holds by representation."""
    if not any(chi.signs):
        return AxiomReport(False, "identically zero")
    table = grassmann_plucker_table(chi.n, chi.r)
    if table.size:
        bad = np.flatnonzero(table.violations(extended_signs(chi)))
        if bad.size:
            return AxiomReport(False, table.pairs[int(bad[0])])
    return AxiomReport(True)


def is_uniform(chi: Chirotope) -> bool:
    return all(chi.signs)


def is_simple(chi: Chirotope) -> bool:
    """No loops and no pair of elements spanning rank one."""
    tuples = lambda_tuples(chi.n, chi.r)
    for e in range(1, chi.n + 1):
        if not any(s for t, s in zip(tuples, chi.signs) if e in t):
            return False
    if chi.r == 1:
        return chi.n == 1
    for e, f in combinations(range(1, chi.n + 1), 2):
        if not any(s for t, s in zip(tuples, chi.signs) if e in t and f in t):
            return False
    return True


def exact_determinant(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    value = Matrix([[Rational(x.numerator, x.denominator) for x in row] for row in rows]).det(method="bareiss")
    value = Rational(value)
    return Fraction(int(value.p), int(value.q))


def as_fraction_matrix(matrix: Sequence[Sequence]) -> List[List[Fraction]]:
    return [[Fraction(x) for x in row] for row in matrix]


def chirotope_from_matrix(matrix: Sequence[Sequence]) -> Chirotope:
    """Determinant-sign chirotope of the columns of an r × n rational matrix."""
    rows = as_fraction_matrix(matrix)
    r, n = len(rows), len(rows[0])
    signs = []
    for t in lambda_tuples(n, r):
        minor = [[row[e - 1] for e in t] for row in rows]
        signs.append(int(Sign.of(exact_determinant(minor))))
    if not any(signs):
        raise ChirotopeError("matrix does not have full rank")
    return Chirotope(n, r, tuple(signs))


# ============================================================================
# SYMMETRY ACTIONS
# ============================================================================

def transform(chi: Chirotope, relabeling: Optional[Sequence[int]] = None,
              reorientation: Optional[Set[int]] = None, negate: bool = False) -> Chirotope:
    """
    Apply a relabeling, a reorientation and optionally a global negation.

    The result is χ'(t) = ε · (-1)^{|A ∩ t|} · χ(π(t_1), ..., π(t_r)), where
    relabeling[e-1] = π(e).

    Args:
        chi: Input chirotope
        relabeling: Permutation of 1..n (identity when None)
        reorientation: Subset A of 1..n (empty when None)
        negate: Whether to multiply every sign by -1

    Returns:
        The transformed chirotope
    """
    n, r = chi.n, chi.r
    perm = tuple(relabeling) if relabeling is not None else tuple(range(1, n + 1))
    if sorted(perm) != list(range(1, n + 1)):
        raise ChirotopeError(f"relabeling {perm} is not a permutation of 1..{n}")
    flipped = set(reorientation or ())
    global_sign = -1 if negate else 1
    signs = []
    for t in lambda_tuples(n, r):
        value = int(eval_sign(chi, [perm[e - 1] for e in t]))
        if len(flipped.intersection(t)) % 2:
            value = -value
        signs.append(global_sign * value)
    return Chirotope(n, r, tuple(signs))


def dual(chi: Chirotope) -> Chirotope:
    """χ*(s) = χ(complement of s) · sgn(s, complement of s), rank n - r."""
    n, r = chi.n, chi.r
    if r >= n:
        raise ChirotopeError("the dual of a rank-n chirotope has rank 0")
    signs = []
    for s in lambda_tuples(n, n - r):
        rest = tuple(e for e in range(1, n + 1) if e not in s)
        signs.append(permutation_parity(s + rest) * chi.sign_of(rest))
    return Chirotope(n, n - r, tuple(signs))


@lru_cache(maxsize=None)
def _mask_lookup(n: int, r: int) -> Tuple[np.ndarray, np.ndarray]:
    tuples0 = np.array(lambda_tuples(n, r), dtype=np.int64).reshape(-1, r) - 1
    lookup = np.full(1 << n, -1, dtype=np.int64)
    masks = (np.int64(1) << tuples0).sum(axis=1)
    lookup[masks] = np.arange(len(masks))
    return tuples0, lookup


def _relabel_block(n: int, r: int, perms: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Positions and parities so that χ∘π = parity · signs[position], per permutation row."""
    tuples0, lookup = _mask_lookup(n, r)
    images = perms[:, tuples0]
    positions = lookup[(np.int64(1) << images).sum(axis=2)]
    inversions = np.zeros(positions.shape, dtype=np.int64)
    for a in range(r):
        for b in range(a + 1, r):
            inversions += images[:, :, a] > images[:, :, b]
    parity = (1 - 2 * (inversions & 1)).astype(np.int8)
    return positions, parity


def _relabel_blocks_stream(n: int, r: int) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
    source = permutations(range(n))
    while True:
        block = list(islice(source, RELABEL_CHUNK))
        if not block:
            return
        yield _relabel_block(n, r, np.array(block, dtype=np.int64))


@lru_cache(maxsize=None)
def _relabel_blocks_cached(n: int, r: int) -> Tuple[Tuple[np.ndarray, np.ndarray], ...]:
    return tuple(_relabel_blocks_stream(n, r))


def _relabel_blocks(n: int, r: int):
    if n <= CACHED_RELABEL_LIMIT:
        return _relabel_blocks_cached(n, r)
    return _relabel_blocks_stream(n, r)


@lru_cache(maxsize=None)
def reorientation_table(n: int, r: int) -> np.ndarray:
    """Row A (bitmask) holds (-1)^{|A ∩ t|} for every tuple t."""
    tuples0, _ = _mask_lookup(n, r)
    tuple_masks = (np.int64(1) << tuples0).sum(axis=1)
    subsets = np.arange(1 << n, dtype=np.int64)
    common = subsets[:, None] & tuple_masks[None, :]
    bits = np.zeros(common.shape, dtype=np.int64)
    for e in range(n):
        bits += (common >> e) & 1
    return (1 - 2 * (bits & 1)).astype(np.int8)


@lru_cache(maxsize=None)
def _group_rows(n: int, r: int, group: SymmetryGroup) -> np.ndarray:
    m = len(lambda_tuples(n, r))
    identity = np.ones((1, m), dtype=np.int8)
    if group is SymmetryGroup.RELABEL:
        return identity
    if group is SymmetryGroup.RELABEL_NEGATE:
        return np.vstack([identity, -identity])
    table = reorientation_table(n, r)
    return np.vstack([table, -table])


def _orbit_minimum(chi: Chirotope, group: SymmetryGroup,
                   target: Optional[np.ndarray] = None) -> Optional[np.ndarray]:
    """
    Column-by-column minimization of the orbit's order codes.

    With a target, returns None as soon as some orbit image is smaller than it;
    otherwise returns the minimal code row.
    """
    signs = chi.array
    m = len(signs)
    rows = _group_rows(chi.n, chi.r, group)
    best = target
    for positions, parity in _relabel_blocks(chi.n, chi.r):
        images = parity * signs[positions]
        count = images.shape[0] * rows.shape[0]
        cand_p = np.repeat(np.arange(images.shape[0]), rows.shape[0])
        cand_g = np.tile(np.arange(rows.shape[0]), images.shape[0])
        tied = best is not None
        found = []
        for col in range(m):
            codes = _ORDER_CODE[images[cand_p, col] * rows[cand_g, col] + 1]
            low = codes.min()
            if tied:
                if low > best[col]:
                    break
                if low < best[col]:
                    if target is not None:
                        return None
                    tied = False
            keep = codes == low
            if keep.sum() < count:
                cand_p, cand_g = cand_p[keep], cand_g[keep]
                count = cand_p.size
            found.append(low)
        else:
            if not tied:
                best = np.array(found, dtype=np.int8)
    return best


def canonical_form(chi: Chirotope, group: SymmetryGroup = SymmetryGroup.FULL) -> str:
    """Lexicographically minimal sign string ('+' < '-' < '0') over the orbit."""
    codes = _orbit_minimum(chi, group)
    if codes is None:
        codes = _ORDER_CODE[chi.array + 1]
    return ''.join(_CODE_CHARS[c] for c in codes)


def is_canonical(chi: Chirotope, group: SymmetryGroup = SymmetryGroup.FULL) -> bool:
    """True iff chi's own sign string is its orbit minimum (early exit otherwise)."""
    return _orbit_minimum(chi, group, target=_ORDER_CODE[chi.array + 1]) is not None


def canonical_chirotope(chi: Chirotope, group: SymmetryGroup = SymmetryGroup.FULL) -> Chirotope:
    return Chirotope.from_string(chi.n, chi.r, canonical_form(chi, group))


class PrefixCanonicity:
    """
    Orbit-minimality test for partial sign strings under relabeling,
    reorientation and negation.

    For a fixed relabeling the lexicographically smallest image over all
    reorientations and negations is found greedily: column by column, the
    image sign is either forced by earlier choices (the column's reorientation
    mask lies in the GF(2) span of the masks already fixed) or free, in which
    case '+' is taken. A relabeling is followed only while its image columns
    draw on known positions, so a rejection is valid for every completion.
    """

    def __init__(self, n: int, r: int):
        blocks = list(_relabel_blocks(n, r))
        self.positions = np.concatenate([positions for positions, _ in blocks])
        self.parity = np.concatenate([parity for _, parity in blocks])
        tuples0, _ = _mask_lookup(n, r)
        # bit n stands for the global negation
        self.masks = (np.int64(1) << tuples0).sum(axis=1) | (np.int64(1) << n)
        self.bits = n + 1
        self.lead = np.zeros(1 << self.bits, dtype=np.int64)
        for value in range(1, 1 << self.bits):
            self.lead[value] = value.bit_length() - 1

    def rejects(self, signs: np.ndarray, known: int) -> bool:
        """True when some orbit element beats signs[:known] on positions it already fixes."""
        target = _ORDER_CODE[signs[:known].astype(np.int64) + 1]
        perms = np.arange(self.positions.shape[0])
        basis = np.zeros((perms.size, self.bits), dtype=np.int64)
        rhs = np.zeros((perms.size, self.bits), dtype=np.int64)
        for col in range(known):
            source = self.positions[perms, col]
            ready = source < known
            if not ready.all():
                perms, source, basis, rhs = perms[ready], source[ready], basis[ready], rhs[ready]
            if perms.size == 0:
                return False
            s = self.parity[perms, col].astype(np.int64) * signs[source]
            v = np.full(perms.size, self.masks[col], dtype=np.int64)
            c = np.zeros(perms.size, dtype=np.int64)
            for bit in reversed(range(self.bits)):
                hit = (((v >> bit) & 1) == 1) & (basis[:, bit] != 0)
                v = np.where(hit, v ^ basis[:, bit], v)
                c = np.where(hit, c ^ rhs[:, bit], c)
            free = (v != 0) & (s != 0)
            image = np.where(free, 1, s * (1 - 2 * c))
            if free.any():
                rows = np.flatnonzero(free)
                lead = self.lead[v[rows]]
                basis[rows, lead] = v[rows]
                rhs[rows, lead] = (s[rows] < 0).astype(np.int64) ^ c[rows]
            codes = _ORDER_CODE[image + 1]
            if (codes < target[col]).any():
                return True
            keep = codes == target[col]
            if not keep.all():
                perms, basis, rhs = perms[keep], basis[keep], rhs[keep]
        return False


# ============================================================================
# CIRCUITS, COCIRCUITS, ACYCLICITY
# ============================================================================

def circuits(chi: Chirotope) -> List[SignVector]:
    """One representative (first nonzero entry +) per ± pair of circuits."""
    found: Dict[Tuple[int, ...], SignVector] = {}
    for subset in combinations(range(1, chi.n + 1), chi.r + 1):
        entries = [0] * chi.n
        for k, x in enumerate(subset):
            entries[x - 1] = (-1) ** k * chi.sign_of(subset[:k] + subset[k + 1:])
        vector = SignVector(tuple(int(s) for s in entries))
        if vector.support:
            vector = vector.normalized()
            found.setdefault(vector.entries, vector)
    return list(found.values())


def cocircuit(chi: Chirotope, hyperplane: Sequence[int]) -> SignVector:
    """The vector j ↦ χ(x_1, ..., x_{r-1}, j) for an (r-1)-tuple X."""
    return SignVector(tuple(int(eval_sign(chi, tuple(hyperplane) + (j,))) for j in range(1, chi.n + 1)))


def cocircuits(chi: Chirotope) -> List[SignVector]:
    found: Dict[Tuple[int, ...], SignVector] = {}
    for hyperplane in combinations(range(1, chi.n + 1), chi.r - 1):
        vector = cocircuit(chi, hyperplane)
        if vector.support:
            vector = vector.normalized()
            found.setdefault(vector.entries, vector)
    return list(found.values())


def is_acyclic(chi: Chirotope) -> bool:
    return not any(not c.negative or not c.positive for c in circuits(chi))


def covector_search_acyclic(chi: Chirotope) -> bool:
    """Brute force: compose cocircuits until the all-plus covector appears or closure is reached."""
    generators = set()
    for c in cocircuits(chi):
        generators.add(c.entries)
        generators.add((-c).entries)
    target = (1,) * chi.n
    seen = set(generators)
    frontier = list(generators)
    while frontier:
        fresh = []
        for x in frontier:
            for g in generators:
                y = tuple(a if a else b for a, b in zip(x, g))
                if y not in seen:
                    seen.add(y)
                    fresh.append(y)
        if target in seen:
            return True
        frontier = fresh
    return target in seen


def extreme_elements(chi: Chirotope) -> Set[int]:
    """Elements i such that no circuit has positive part exactly {i}."""
    if not is_acyclic(chi):
        raise ChirotopeError("extreme elements are defined for acyclic chirotopes only")
    interior = set()
    for c in circuits(chi):
        for vector in (c, -c):
            if len(vector.positive) == 1:
                interior |= vector.positive
    return set(range(1, chi.n + 1)) - interior


def is_matroid_polytope(chi: Chirotope) -> bool:
    return is_acyclic(chi) and len(extreme_elements(chi)) == chi.n
