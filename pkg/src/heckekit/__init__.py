"""heckekit: symbolic computation with Hecke pairs and their finite shadows.

The package works with pairs (G, U) presented as permutation actions on
a coset space: Schreier balls and orbits, commensuration indices, axiom
checking, finite-depth completion chains, scale readings, wreath and
shift-extension constructions, and a proof calculus for decomposition
rank bounds.  A small pair-description language drives all of it from
the command line.
"""

from .actions import CosetBall, CosetTable, act, enumerate_ball, export_schreier_dot, orbit
from .catalog import (
    CATALOG,
    bs_pair,
    dihedral_pair,
    free_pair,
    lamplighter_pair,
    translation_pair,
    trivial_u_pair,
)
from .completion import (
    BallApproximant,
    CosetChain,
    approximate,
    approximant_coherent,
    chain_invert,
    chain_multiply,
    chain_of,
    exists_discrete_kernel_factorization,
    exists_factorization,
    exists_injective_factorization,
    left_right_exchange,
    load_filter_spec,
    local_quotients,
    schlichting_level_subgroup,
    subset_factorization,
)
from .construct import (
    ContractionData,
    IdentityPsi,
    PsiMap,
    WreathTower,
    check_hnn_compatible,
    contraction,
    hnn_extension,
    iterated_wreath,
    lamp_shift_view,
    perfectize,
    wreath,
)
from .errors import (
    CapExceeded,
    DepthInsufficient,
    HeckekitError,
    MissingWitness,
    UndecidableInclusion,
)
from .ordinal import OMEGA, ONE, ZERO, Ordinal, ord_add, ord_cmp, ord_mul_nat
from .pairs import (
    AxiomReport,
    CommReport,
    PairMetadata,
    PermutationHeckePair,
    check_hecke_axioms,
    commensuration_index,
    is_compactly_generated,
    is_sigma_compact,
)
from .rank import (
    RankCertificate,
    RankFact,
    apply_rule,
    apply_rule_all,
    assume,
    best_known_bound,
    build_gn_tower,
)
from .scale import index_growth, scale_estimate, uniscalar_sample
from .words import Generator, GroupWord, all_words
from .zfilters import ZFilterBase, all_filter, fin_filter, geo_filter

__version__ = "0.1.0"

__all__ = [
    "CosetBall",
    "CosetTable",
    "act",
    "enumerate_ball",
    "export_schreier_dot",
    "orbit",
    "CATALOG",
    "bs_pair",
    "dihedral_pair",
    "free_pair",
    "lamplighter_pair",
    "translation_pair",
    "trivial_u_pair",
    "BallApproximant",
    "CosetChain",
    "approximate",
    "approximant_coherent",
    "chain_invert",
    "chain_multiply",
    "chain_of",
    "exists_discrete_kernel_factorization",
    "exists_factorization",
    "exists_injective_factorization",
    "left_right_exchange",
    "load_filter_spec",
    "local_quotients",
    "schlichting_level_subgroup",
    "subset_factorization",
    "ContractionData",
    "IdentityPsi",
    "PsiMap",
    "WreathTower",
    "check_hnn_compatible",
    "contraction",
    "hnn_extension",
    "iterated_wreath",
    "lamp_shift_view",
    "perfectize",
    "wreath",
    "CapExceeded",
    "DepthInsufficient",
    "HeckekitError",
    "MissingWitness",
    "UndecidableInclusion",
    "OMEGA",
    "ONE",
    "ZERO",
    "Ordinal",
    "ord_add",
    "ord_cmp",
    "ord_mul_nat",
    "AxiomReport",
    "CommReport",
    "PairMetadata",
    "PermutationHeckePair",
    "check_hecke_axioms",
    "commensuration_index",
    "is_compactly_generated",
    "is_sigma_compact",
    "RankCertificate",
    "RankFact",
    "apply_rule",
    "apply_rule_all",
    "assume",
    "best_known_bound",
    "build_gn_tower",
    "index_growth",
    "scale_estimate",
    "uniscalar_sample",
    "Generator",
    "GroupWord",
    "all_words",
    "ZFilterBase",
    "all_filter",
    "fin_filter",
    "geo_filter",
    "__version__",
]
