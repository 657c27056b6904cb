"""Exact p-adic dynamics of rational maps on compact open domains."""

from .config import DEFAULT_CONFIG, AnalysisConfig
from .digraph import (
    ComponentSelection,
    CycleDecomposition,
    ErgodicVerdict,
    LevelDigraph,
    MPVerdict,
    SubsidiaryEdgeData,
    build_digraph,
    build_subsidiary,
    cycle_decomposition,
    ergodic_check,
    intrinsic_level,
    mp_check,
    mp_components,
    union_verdict,
    verify_bijection,
)
from .domains import (
    Ball,
    CompactDomain,
    RepresentativeSystem,
    decompose,
    locate,
    representatives,
)
from .global_qp import (
    GlobalGateReport,
    GlobalVerdict,
    ObstructionWitness,
    SphereRegion,
    certify_no_roots_qp,
    compute_N,
    degree_gate,
    global_inv_iso_check,
    global_mp_check,
    global_obstruction,
)
from .hensel import HenselResult, hensel_lift
from .maps import RationalMap, map_from_coefficients, normalize_map
from .padics import INF, NEG_INF, PAdicRational, canonical_key
from .parsing import QP_GLOBAL, parse_domain, parse_map
from .polynomials import (
    Polynomial,
    norm_constant_exponent,
    poly_derivative,
    poly_eval,
    taylor_shift,
)
from .scaling import ScalingReport, classify, lower_bound_bF, scaling_radius

__version__ = "0.1.0"

__all__ = [
    "AnalysisConfig",
    "DEFAULT_CONFIG",
    "Ball",
    "CompactDomain",
    "ComponentSelection",
    "CycleDecomposition",
    "ErgodicVerdict",
    "GlobalGateReport",
    "GlobalVerdict",
    "HenselResult",
    "INF",
    "LevelDigraph",
    "MPVerdict",
    "NEG_INF",
    "ObstructionWitness",
    "PAdicRational",
    "Polynomial",
    "QP_GLOBAL",
    "RationalMap",
    "RepresentativeSystem",
    "ScalingReport",
    "SphereRegion",
    "SubsidiaryEdgeData",
    "build_digraph",
    "build_subsidiary",
    "canonical_key",
    "certify_no_roots_qp",
    "classify",
    "compute_N",
    "cycle_decomposition",
    "decompose",
    "degree_gate",
    "ergodic_check",
    "global_inv_iso_check",
    "global_mp_check",
    "global_obstruction",
    "hensel_lift",
    "intrinsic_level",
    "locate",
    "lower_bound_bF",
    "map_from_coefficients",
    "mp_check",
    "mp_components",
    "norm_constant_exponent",
    "normalize_map",
    "parse_domain",
    "parse_map",
    "poly_derivative",
    "poly_eval",
    "representatives",
    "scaling_radius",
    "taylor_shift",
    "union_verdict",
    "verify_bijection",
]
