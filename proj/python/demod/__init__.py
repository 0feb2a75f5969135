"""Proof kernel and cut-elimination workbench for deduction modulo."""

from demod._core import (
    KernelInputError,
    Theory,
    agree,
    context_check,
    derive_rules,
    find_model,
    load_theory,
    normalize_prop,
    normalize_proof,
    run,
    search,
    strongly_normalizing,
    super_consistency,
    tva_laws,
    typecheck,
)

__all__ = [
    "KernelInputError",
    "Theory",
    "agree",
    "context_check",
    "derive_rules",
    "find_model",
    "load_theory",
    "normalize_prop",
    "normalize_proof",
    "run",
    "search",
    "strongly_normalizing",
    "super_consistency",
    "tva_laws",
    "typecheck",
]
