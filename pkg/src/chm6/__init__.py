"""Construction, verification and classification of 6x6 complex Hadamard matrices."""

from .catalog import (
    HFamilyParams,
    KarlssonParams,
    h_family,
    karlsson,
    karlsson_completion,
    m1,
    m2,
    tao,
)
from .core import (
    CMatrix,
    MonomialUnitary,
    ToleranceConfig,
    UnitScalar,
    dephase,
    distinct_elements,
    gram_defect,
    haagerup_multiset,
    imaginary_array,
    is_chm,
)
from .equivalence import EquivalenceWitness, are_equivalent, canonical_form, match_h_family
from .search import classify_h3, find_chm_cliques, karlsson_grid_scan, scan_three_element, scan_two_element
from .substructure import find_h2_blocks, find_h3_blocks, find_rank1_2x3, is_h2_reducible

__all__ = [
    "CMatrix",
    "EquivalenceWitness",
    "HFamilyParams",
    "KarlssonParams",
    "MonomialUnitary",
    "ToleranceConfig",
    "UnitScalar",
    "are_equivalent",
    "canonical_form",
    "classify_h3",
    "dephase",
    "distinct_elements",
    "find_chm_cliques",
    "find_h2_blocks",
    "find_h3_blocks",
    "find_rank1_2x3",
    "gram_defect",
    "h_family",
    "haagerup_multiset",
    "imaginary_array",
    "is_chm",
    "is_h2_reducible",
    "karlsson",
    "karlsson_completion",
    "karlsson_grid_scan",
    "m1",
    "m2",
    "match_h_family",
    "scan_three_element",
    "scan_two_element",
    "tao",
]
