"""Exact tools for families of k-sets with bounded matching number.

Bitset families and matchings, shifting, the extremal constructions, traces
on the core with their weights, the 3-uniform structure predicates, an exact
branch-and-bound over stable families, and an exact audit of the closed-form
estimates.
"""

from .core import (
    Family,
    MatchingWitness,
    VertexSet,
    bits_of,
    dominates,
    down_closure,
    elements_of,
    has_matching,
    is_stable,
    matching_number,
    matching_size,
    vset,
)
from .hyp import format_hyp, load_hyp, parse_hyp, save_hyp
from .shifting import ShiftLog, potential, shift, stabilize
from .constructions import (
    ExtremalSpec,
    build_A,
    clique_size,
    conjectured_max,
    cover_size,
    erdos_gallai_max,
    general_upper_bound,
    pivotal,
    size_A,
)
from .traces import (
    BasePartition,
    CountingReport,
    PreconditionError,
    Restriction,
    TraceFamily,
    WeightBoundReport,
    base_partition,
    counting_lemma_check,
    expand,
    f_bound,
    f_value,
    restriction,
    size_formula,
    trace,
    weight,
    weight_bound_check,
)
from .structure import (
    PairCase,
    PairProfile,
    TripleProfile,
    classify_pair,
    diagonals,
    is_normal,
    missing_counts,
    structure_violations,
    transversals,
    triple_profile,
)
from .search import SearchResult, is_maximal, max_stable, naive_max, saturate
from .audit import (
    InequalityRecord,
    audit_catalog,
    check_dominance,
    check_fort,
    check_pivotal_bounds,
)

__version__ = "0.1.0"
