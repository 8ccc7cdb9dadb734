"""Conjugacy class counts of pattern groups over finite fields.

The package computes k(U_P(q)), the number of conjugacy classes of the
unitriangular pattern group attached to a finite poset P, either as a
closed-form polynomial in t = q - 1 (reduction calculus) or as an exact
integer for a fixed prime power (orbit-counting oracle).  It also
builds and checks certificates embedding posets into chains.
"""

from .cache import ResultCache, kresult_from_json, kresult_to_json
from .embed import (
    EmbeddingCertificate,
    EmbeddingStep,
    VerifyResult,
    antichain_to_chain_cert,
    cert_from_json,
    cert_to_json,
    chain_univ_cert,
    max_el_cert,
    p_diamond,
    p_diamond_c59_cert,
    two_chains_cert,
)
from .embed import verify as verify_cert
from .engine import (
    ENGINE_VERSION,
    Engine,
    KResult,
    apply_D,
    compute_k,
    prune_antichain,
    reducibility_guarantees,
    trace_has_fallback,
)
from .fixtures import chain_poly, figure_poset, p_diamond_count
from .oracle import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    PosetSystem,
    count_k,
    count_k_system,
)
from .polyt import InterpolationError, PolyT, from_q_basis, interpolate
from .poset import (
    Poset,
    antichain,
    antichains_in,
    canonical_key,
    chain,
    components,
    covers,
    disjoint_union,
    dual,
    format_poset,
    induced,
    is_interval,
    is_isomorphic,
    is_y_free_below,
    lb,
    lex_sum,
    maximal,
    minimal,
    parse_poset,
    remove,
    transitive_closure,
    ub,
)
from .posetgen import all_posets, nonisomorphic_posets, sweep_posets

__all__ = [
    "BudgetExceeded",
    "DEFAULT_BUDGET",
    "ENGINE_VERSION",
    "EmbeddingCertificate",
    "EmbeddingStep",
    "Engine",
    "InterpolationError",
    "KResult",
    "PolyT",
    "Poset",
    "PosetSystem",
    "ResultCache",
    "VerifyResult",
    "all_posets",
    "antichain",
    "antichain_to_chain_cert",
    "antichains_in",
    "apply_D",
    "canonical_key",
    "cert_from_json",
    "cert_to_json",
    "chain",
    "chain_poly",
    "chain_univ_cert",
    "components",
    "compute_k",
    "count_k",
    "count_k_system",
    "covers",
    "disjoint_union",
    "dual",
    "figure_poset",
    "format_poset",
    "from_q_basis",
    "induced",
    "interpolate",
    "is_interval",
    "is_isomorphic",
    "is_y_free_below",
    "kresult_from_json",
    "kresult_to_json",
    "lb",
    "lex_sum",
    "max_el_cert",
    "maximal",
    "minimal",
    "nonisomorphic_posets",
    "p_diamond",
    "p_diamond_c59_cert",
    "p_diamond_count",
    "parse_poset",
    "prune_antichain",
    "reducibility_guarantees",
    "remove",
    "sweep_posets",
    "trace_has_fallback",
    "transitive_closure",
    "two_chains_cert",
    "ub",
    "verify_cert",
]
__version__ = "0.1.0"
