"""Exact verification of a conductor-one test vector for triple products on GL2(Q_p).

The explicit group-algebra element F is checked against the indicator
function it is supposed to produce, cell by cell, over finite models
GL2(Z/p^m) of the maximal compact subgroup.
"""

from .field import FieldElement, Poly, QuadraticNumber, SpecializationPole, gens, specialize
from .linsolve import InconsistentSystemError, SolutionSet, solve_linear
from .padic import Mat2, PadicScalar, in_gamma0, in_K, iwasawa, valuation
from .principal_series import (
    MU1,
    MU2,
    EvalContext,
    GroupAlgebraElement,
    UnramifiedCharacter,
    eval_new_vector,
    eval_pair,
    eval_tensor,
    eval_v2star,
    restrict_to_little_f,
)
from .verifier import (
    CellReport,
    CheckResult,
    FormulaVariant,
    build_F1,
    build_F2,
    build_formula,
    solve_coefficients,
    verify_lemma3,
)

__version__ = "0.1.0"

__all__ = [
    "FieldElement", "Poly", "QuadraticNumber", "SpecializationPole", "gens", "specialize",
    "InconsistentSystemError", "SolutionSet", "solve_linear",
    "Mat2", "PadicScalar", "in_gamma0", "in_K", "iwasawa", "valuation",
    "MU1", "MU2", "EvalContext", "GroupAlgebraElement", "UnramifiedCharacter",
    "eval_new_vector", "eval_pair", "eval_tensor", "eval_v2star", "restrict_to_little_f",
    "CellReport", "CheckResult", "FormulaVariant", "build_F1", "build_F2", "build_formula",
    "solve_coefficients", "verify_lemma3",
]
