"""Exact nonpathological hulls and degrees of pathology for submeasures."""

from .core import (
    Block, Covering, FiniteSubmeasure, MinConst, OplusMax, OplusSum, PatternPoint,
    PatternSubmeasure, PointwiseMax, Scale, Table, WeightedMeasure, direct_sum_pattern,
    validate_pattern, validate_submeasure,
)
from .hull import (
    HullWitness, covering_hull_fast, hull, hull_all, pattern_hull, pattern_sigma_hull,
    sigma_hull, verify_witness,
)
from .pathology import (
    Composite, PathologyReport, combine_degrees, degree_P, degree_P_fin, degree_P_sigma,
    pathology_report, pattern_degrees,
)

__all__ = [
    "Block", "Covering", "FiniteSubmeasure", "MinConst", "OplusMax", "OplusSum", "PatternPoint",
    "PatternSubmeasure", "PointwiseMax", "Scale", "Table", "WeightedMeasure", "direct_sum_pattern",
    "validate_pattern", "validate_submeasure", "HullWitness", "covering_hull_fast", "hull",
    "hull_all", "pattern_hull", "pattern_sigma_hull", "sigma_hull", "verify_witness", "Composite",
    "PathologyReport", "combine_degrees", "degree_P", "degree_P_fin", "degree_P_sigma",
    "pathology_report", "pattern_degrees",
]

__version__ = "0.1.0"
