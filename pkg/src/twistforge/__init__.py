"""Exact construction and verification of twisting cocycles in tensor bialgebras."""
from .bialgebra import GradedElement, QTStructure, box_degrees, lift_primitive, membership_S
from .frt import (
    DualGenerators,
    RelationSet,
    coaction_beta,
    compare_relations,
    eta_change_of_basis,
    extract_rtt,
    verify_bicrossproduct,
    verify_frt,
)
from .inhom import (
    InhomModel,
    build_model,
    canonical_cocycle,
    generator_lifts,
    verify_group_cocycle,
    verify_hopf_structure,
    verify_quasitriangularity,
    verify_exponential_form,
    verify_cocycle_twist,
)
from .report import Report
from .series import LieRingSpec, MatrixSeries, TruncatedPoly, bch, series_inverse
from .tensor_ring import (
    NotInvertibleError,
    RingError,
    RingSpec,
    TensorElement,
    UnsupportedError,
    invert,
    validate_ring,
)
from .twist import (
    GradedTwist,
    SeedError,
    build_from_seeds,
    check_split1,
    check_split2,
    fusion_twist,
    rmatrix,
    verify_te,
    ybe_check,
)
from .data import bundled_lie, bundled_names

__version__ = "0.1.0"

__all__ = [
    "DualGenerators", "GradedElement", "GradedTwist", "InhomModel", "LieRingSpec", "MatrixSeries",
    "NotInvertibleError", "QTStructure", "RelationSet", "Report", "RingError", "RingSpec", "SeedError",
    "TensorElement", "TruncatedPoly", "UnsupportedError", "bch", "box_degrees", "build_from_seeds",
    "build_model", "bundled_lie", "bundled_names", "canonical_cocycle", "check_split1", "check_split2",
    "coaction_beta", "compare_relations", "eta_change_of_basis", "extract_rtt", "fusion_twist",
    "generator_lifts", "invert", "lift_primitive", "membership_S", "rmatrix", "series_inverse",
    "validate_ring", "verify_bicrossproduct", "verify_frt", "verify_group_cocycle",
    "verify_hopf_structure", "verify_quasitriangularity", "verify_te", "verify_exponential_form",
    "verify_cocycle_twist", "ybe_check",
]
