"""Exact-arithmetic analysis of four-monomial projective surfaces and the
elliptic or superelliptic fibrations they carry."""

from .elliptic import (
    fastenberg_check,
    gamma,
    genus_one_weierstrass,
    kodaira_type,
    weierstrass_invariants,
)
from .errors import (
    DelsarteError,
    NotConvertibleError,
    UnsupportedShapeError,
    ValidationError,
)
from .model import surface_from_json, surface_to_json, validate_surface
from .reduction import classify_degenerate, plane_model, reduce_to_minimal
from .shioda import FamilyParams, lefschetz_number, picard_family
from .singular import (
    classify_trichotomy,
    discriminant_oracle,
    singular_locus,
    structure_decomposition,
)

__version__ = "0.1.0"

__all__ = [
    "DelsarteError",
    "FamilyParams",
    "NotConvertibleError",
    "UnsupportedShapeError",
    "ValidationError",
    "classify_degenerate",
    "classify_trichotomy",
    "discriminant_oracle",
    "fastenberg_check",
    "gamma",
    "genus_one_weierstrass",
    "kodaira_type",
    "lefschetz_number",
    "picard_family",
    "plane_model",
    "reduce_to_minimal",
    "singular_locus",
    "structure_decomposition",
    "surface_from_json",
    "surface_to_json",
    "validate_surface",
    "weierstrass_invariants",
    "__version__",
]
