"""Position hashing of lambda terms up to context-sensitive alpha-equivalence.

Two positions of a closed de Bruijn term get the same hash exactly when
their subterms are interchangeable in context: same shape, and every
variable occurrence bound by a binder playing the same role.  The
package provides the hashing pipeline (decorated terms, two hash
back-ends, two globalization algorithms), hash-free equivalence oracles
(bisimulation over term-node graphs, fork closure), term generators
and samplers, concrete syntax, array kernels for benchmarking, and a
command line front end (`alphahash`).
"""

from .bisim import (
    LABEL_APP,
    LABEL_LAM,
    LABEL_VAR,
    Partition,
    TermNodeGraph,
    are_equivalent,
    bisim_partition,
    bisim_partition_naive,
    bisim_partition_refine,
    build_graph,
    canonical_partition,
    enumerate_single_forks,
    fork_closure,
)
from .crosscheck import check_modes_agree, check_term, hash_partition, run_check
from .errors import (
    AlphaHashError,
    IndexOutOfRange,
    IndexOverflow,
    ModeMismatch,
    NoTermOfSize,
    NotClosed,
    NotLocallyClosed,
    PositionInvalid,
    TermSyntaxError,
    TermTooLarge,
    TrailingInput,
)
from .generators import (
    DEFAULT_SEED,
    SplitMix64,
    count_terms,
    enumerate_closed_terms,
    enumerate_terms,
    gen_balanced,
    gen_linear,
    gen_random_closed,
    gen_random_shaped,
    unrank_term,
)
from .globalize import (
    HashEnv,
    calc_duplicates,
    globalize,
    globalize_naive,
    hash_at,
    max_visit,
    reset_visits,
    set_hash,
    set_hashes,
)
from .hashing import ExactHasher, FastHasher, GVar, gterm_of_exact, mix64
from .syntax import (
    MAX_INDEX,
    parse_position,
    parse_term,
    print_position,
    print_term,
)
from .terms import (
    DOWN,
    LEFT,
    RIGHT,
    ROOT,
    App,
    Lam,
    Term,
    Var,
    bound_positions,
    free_positions,
    from_pure,
    gvar,
    index,
    iter_positions,
    iter_subterms,
    lam_count,
    lift_node,
    lift_out,
    locally_closed,
    scc_positions,
    subst,
    subst_list,
    term_size,
    to_pure,
    valid_positions,
    var_positions,
)

__version__ = "0.1.0"
