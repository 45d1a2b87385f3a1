"""Lüders operations on finite-dimensional complex Hilbert spaces.

Build the operation Φ(B) = Σᵢ EᵢBEᵢ from a finite set of effects, compute its
fixed-point subspace and the commutant of the set, verify that the two agree
in the forms they provably take, and construct quantitative witnesses of
non-commutation with explicit norm-contraction bounds.
"""

from .tolerances import DEFAULT, Tolerances
from .errors import (
    CommutesNoWitness,
    DimensionMismatch,
    IndexOutOfRange,
    InvalidArgument,
    InvalidInterval,
    IsResolution,
    LuedersError,
    NoConvergence,
    NotCommuting,
    NotDensityMatrix,
    NotHermitian,
    NotPositive,
    NotResolution,
    NotSquare,
    NotSubnormalized,
    ParseError,
    RefinementVanished,
    ResolutionExhausted,
    SingularSystem,
    SpectrumAboveOne,
    SpectrumBelowZero,
)
from .matkernel import (
    HermitianEigensystem,
    OperatorSubspace,
    SubspaceComparison,
    hermitian_eigendecompose,
    nullspace,
    operator_norm,
    orthonormalize,
    sqrt_psd,
    subspace_projector,
    subspaces_equal,
)
from .effects import (
    Effect,
    EffectSet,
    Normalization,
    SpectralWindow,
    build_effect_set,
    generate_commuting_resolution,
    generate_commuting_subnormalized,
    generate_noncommuting_resolution,
    spectral_window,
    validate_effect,
)
from .operation import (
    ChannelNormCertificate,
    JointBlock,
    JointEigenstructure,
    LuedersOperation,
    NagySolution,
    TheoremReport,
    channel_norm,
    commutant,
    fixed_point_space,
    is_undisturbed_state,
    joint_eigenspaces,
    nagy_solve,
    unit_spectral_projector,
    verify_resolution_fixed_points,
    verify_subnormalized_fixed_points,
)
from .witness import (
    ContractionReport,
    OffDiagonalBlock,
    WitnessCertificate,
    bin_commutation_check,
    bin_projection,
    build_contractive_block,
    contraction_bound,
    contraction_threshold,
    minimal_spectral_gap,
    occupied_bins,
    offdiagonal_block_search,
    witness_search,
)
from .serialize import (
    dump_effect_set,
    dump_operator,
    effect_set_to_json,
    load_effect_set,
    load_operator,
    operator_to_json,
    parse_effect_set,
    parse_operator,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT",
    "Tolerances",
    "LuedersError",
    "NotSquare",
    "NotHermitian",
    "NoConvergence",
    "NotPositive",
    "DimensionMismatch",
    "SpectrumBelowZero",
    "SpectrumAboveOne",
    "NotSubnormalized",
    "InvalidInterval",
    "NotCommuting",
    "NotResolution",
    "IsResolution",
    "SingularSystem",
    "NotDensityMatrix",
    "IndexOutOfRange",
    "CommutesNoWitness",
    "ResolutionExhausted",
    "RefinementVanished",
    "ParseError",
    "InvalidArgument",
    "HermitianEigensystem",
    "OperatorSubspace",
    "SubspaceComparison",
    "hermitian_eigendecompose",
    "operator_norm",
    "nullspace",
    "sqrt_psd",
    "orthonormalize",
    "subspace_projector",
    "subspaces_equal",
    "Effect",
    "EffectSet",
    "Normalization",
    "SpectralWindow",
    "validate_effect",
    "build_effect_set",
    "spectral_window",
    "generate_commuting_resolution",
    "generate_commuting_subnormalized",
    "generate_noncommuting_resolution",
    "LuedersOperation",
    "TheoremReport",
    "JointBlock",
    "JointEigenstructure",
    "ChannelNormCertificate",
    "NagySolution",
    "fixed_point_space",
    "commutant",
    "joint_eigenspaces",
    "unit_spectral_projector",
    "verify_resolution_fixed_points",
    "verify_subnormalized_fixed_points",
    "channel_norm",
    "nagy_solve",
    "is_undisturbed_state",
    "WitnessCertificate",
    "OffDiagonalBlock",
    "ContractionReport",
    "bin_projection",
    "occupied_bins",
    "bin_commutation_check",
    "offdiagonal_block_search",
    "witness_search",
    "minimal_spectral_gap",
    "contraction_bound",
    "contraction_threshold",
    "build_contractive_block",
    "effect_set_to_json",
    "parse_effect_set",
    "load_effect_set",
    "dump_effect_set",
    "operator_to_json",
    "parse_operator",
    "load_operator",
    "dump_operator",
]
