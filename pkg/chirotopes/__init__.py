"""
Chirotope Realizability Workbench
=================================
Exact-arithmetic enumeration, realization search and polytope census for
small oriented matroids.
"""

from .core import (
    Chirotope,
    ChirotopeError,
    Sign,
    SignVector,
    SymmetryGroup,
    canonical_form,
    check_axioms,
    chirotope_from_matrix,
    circuits,
    cocircuits,
    dual,
    eval_sign,
    extreme_elements,
    is_acyclic,
    is_matroid_polytope,
    is_simple,
    is_uniform,
    transform,
)
from .enumeration import EnumerationBudgetExceeded, EnumerationConfig, EnumerationReport, enumerate_classes
from .reduction import (
    Frame,
    ReducedSystem,
    VariableGrid,
    build_system,
    generalized_mutations,
    gp_closure,
    minimal_reduced_system,
    select_frame,
)
from .polysys import Constraint, PolySystem, Relation
from .solver import Budget, SolveOutcome, SoundnessError, UnknownReason, realize, sol, verify_realization
from .geometry import CensusRecord, FaceLattice, canonical_lattice, census, face_lattice
from .store import ClassifyConfig, ResultStore, StoreCorruptError, parse_chirotope_line, run_classify

__all__ = [
    'Chirotope',
    'ChirotopeError',
    'Sign',
    'SignVector',
    'SymmetryGroup',
    'canonical_form',
    'check_axioms',
    'chirotope_from_matrix',
    'circuits',
    'cocircuits',
    'dual',
    'eval_sign',
    'extreme_elements',
    'is_acyclic',
    'is_matroid_polytope',
    'is_simple',
    'is_uniform',
    'transform',
    'EnumerationBudgetExceeded',
    'EnumerationConfig',
    'EnumerationReport',
    'enumerate_classes',
    'Frame',
    'ReducedSystem',
    'VariableGrid',
    'build_system',
    'generalized_mutations',
    'gp_closure',
    'minimal_reduced_system',
    'select_frame',
    'Constraint',
    'PolySystem',
    'Relation',
    'Budget',
    'SolveOutcome',
    'SoundnessError',
    'UnknownReason',
    'realize',
    'sol',
    'verify_realization',
    'CensusRecord',
    'FaceLattice',
    'canonical_lattice',
    'census',
    'face_lattice',
    'ClassifyConfig',
    'ResultStore',
    'StoreCorruptError',
    'parse_chirotope_line',
    'run_classify',
]

__version__ = '1.0.0'
