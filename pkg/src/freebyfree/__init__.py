"""Excessive homology, algebraic fibering and incoherence for groups H x| F_k."""

from .certificate import Certificate
from .criterion import (
    Bounds,
    Character,
    direct_certificate,
    excessive_characters,
    fibration_plan,
    incoherence_certificate,
    is_excessive,
    outer_kernel_probe,
    rank_one_descent,
)
from .endos import Automorphism, Endomorphism, certify_automorphism, is_inner
from .fpgroups import ExtensionSpec, Presentation, extension_h1, low_index, semidirect_presentation
from .replay import replay
from .search import low_index_search, orbit_stabilizer, preserved_subgroup_search, virtual_verdict
from .stallings import SubgroupGraph, fold
from .words import Word
from .zmat import AbelianGroupShape, IntMatrix, cokernel, snf

__all__ = [
    "AbelianGroupShape",
    "Automorphism",
    "Bounds",
    "Certificate",
    "Character",
    "Endomorphism",
    "ExtensionSpec",
    "IntMatrix",
    "Presentation",
    "SubgroupGraph",
    "Word",
    "certify_automorphism",
    "cokernel",
    "direct_certificate",
    "excessive_characters",
    "extension_h1",
    "fibration_plan",
    "fold",
    "incoherence_certificate",
    "is_excessive",
    "is_inner",
    "low_index",
    "low_index_search",
    "orbit_stabilizer",
    "outer_kernel_probe",
    "preserved_subgroup_search",
    "rank_one_descent",
    "replay",
    "semidirect_presentation",
    "snf",
    "virtual_verdict",
]
