"""Toric vector bundles as Klyachko data, and Frobenius splitting of P(E) in characteristic p."""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .criteria import (
    Decision,
    KaneyamaCocycle,
    SplitReport,
    criterion_A_check,
    fs_detect_rank2,
    kaneyama_from_klyachko,
    pi_pushforward,
    theorem1_check,
    theorem2_check,
    twisted_bundle,
    verify_fs_certificate,
)
from .fan import Cone, Fan, FanError, builtin_fan, dual_basis, is_complete, is_smooth, max_cones, pairing
from .field import GF, FieldElem, FieldError
from .frobenius import OmegaSection, SplittingCandidate, iota_eval, lemma_le_condition, local_V_splitting, phi_standard, trace
from .klyachko import (
    ConeDecomposition,
    IncompatibilityCertificate,
    RayFiltration,
    ToricBundle,
    ToricLineData,
    check_compatibility,
    cotangent_bundle,
    det_bundle,
    direct_sum,
    dual,
    line_bundle,
    line_power,
    sum_of_lines,
    sym_power,
    tangent_bundle,
    twist,
)
from .poly import Laurent, Poly, poly_gcd
from .sections import ChartSection, WeightSpace, chart_restriction, weight_space, weight_support
from .subspace import Subspace
from .symalg import SymTensor

__all__ = [
    "BACKEND",
    "builtin_fan",
    "chart_restriction",
    "ChartSection",
    "check_compatibility",
    "Cone",
    "ConeDecomposition",
    "cotangent_bundle",
    "criterion_A_check",
    "Decision",
    "det_bundle",
    "direct_sum",
    "dual",
    "dual_basis",
    "Fan",
    "FanError",
    "FieldElem",
    "FieldError",
    "fs_detect_rank2",
    "GF",
    "IncompatibilityCertificate",
    "iota_eval",
    "is_complete",
    "is_smooth",
    "kaneyama_from_klyachko",
    "KaneyamaCocycle",
    "Laurent",
    "lemma_le_condition",
    "line_bundle",
    "line_power",
    "local_V_splitting",
    "max_cones",
    "OmegaSection",
    "pairing",
    "phi_standard",
    "pi_pushforward",
    "Poly",
    "poly_gcd",
    "RayFiltration",
    "SplitReport",
    "SplittingCandidate",
    "Subspace",
    "sum_of_lines",
    "sym_power",
    "SymTensor",
    "tangent_bundle",
    "theorem1_check",
    "theorem2_check",
    "ToricBundle",
    "ToricLineData",
    "trace",
    "twist",
    "twisted_bundle",
    "verify_fs_certificate",
    "weight_space",
    "weight_support",
    "WeightSpace",
]
