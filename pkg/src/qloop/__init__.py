"""Exact-arithmetic checker for root-of-unity loop-algebra identities."""

__version__ = "0.1.0"

from .divpow import (
    NORM_OMEGA,
    NORM_Q,
    DividedPowerStore,
    check_cross_normalization,
    check_mulo,
    divided_power,
)
from .identity import IdentityCheck, REGISTRY
from .qcomb import gauss_binomial, omega_factorial, phi_valuation, q_factorial, q_int
from .repchain import (
    ChainContext,
    GradedOperator,
    InvalidParams,
    NotGraded,
    SiteRep,
    UnsupportedKind,
    WrapInconsistency,
    build_barred_ops,
    build_chain_generators,
    build_site_rep,
    charge_of,
    rep_self_check,
    rescaled_rep,
    sector_project,
    specialize_operator,
)
from .rings import (
    CycloElem,
    CycloRing,
    FloatRing,
    InternalInconsistency,
    LaurentPoly,
    LaurentRing,
    NotDivisible,
    PhiAdicElem,
    PhiAdicRing,
    TruncationOverflow,
    cyclo_ring,
    cyclotomic_poly,
)
from .serre import (
    InvalidRegime,
    LoopGenerators,
    build_loop_generators,
    check_BCN,
    check_CBN,
    check_g_forms,
    check_higher_serre,
    check_id1,
    check_id2,
    check_lemma_chain,
    check_serre_nested,
    check_site_suite,
    dispatch_root_serre,
    lusztig_f,
    make_store,
    nested_commutator_words,
)
from .report import (
    ConfigError,
    ReportDocument,
    ResourceError,
    RunConfig,
    UnknownId,
    explain,
    list_families,
    run,
    strip_timing,
)

__all__ = [
    "ChainContext",
    "ConfigError",
    "CycloElem",
    "CycloRing",
    "DividedPowerStore",
    "FloatRing",
    "GradedOperator",
    "IdentityCheck",
    "InternalInconsistency",
    "InvalidParams",
    "InvalidRegime",
    "LaurentPoly",
    "LaurentRing",
    "LoopGenerators",
    "NORM_OMEGA",
    "NORM_Q",
    "NotDivisible",
    "NotGraded",
    "PhiAdicElem",
    "PhiAdicRing",
    "REGISTRY",
    "ReportDocument",
    "ResourceError",
    "RunConfig",
    "SiteRep",
    "TruncationOverflow",
    "UnknownId",
    "UnsupportedKind",
    "WrapInconsistency",
    "build_barred_ops",
    "build_chain_generators",
    "build_loop_generators",
    "build_site_rep",
    "charge_of",
    "check_BCN",
    "check_CBN",
    "check_cross_normalization",
    "check_g_forms",
    "check_higher_serre",
    "check_id1",
    "check_id2",
    "check_lemma_chain",
    "check_mulo",
    "check_serre_nested",
    "check_site_suite",
    "cyclo_ring",
    "cyclotomic_poly",
    "dispatch_root_serre",
    "divided_power",
    "explain",
    "gauss_binomial",
    "list_families",
    "lusztig_f",
    "make_store",
    "nested_commutator_words",
    "omega_factorial",
    "phi_valuation",
    "q_factorial",
    "q_int",
    "rep_self_check",
    "rescaled_rep",
    "run",
    "sector_project",
    "specialize_operator",
    "strip_timing",
    "__version__",
]
