"""Agreement checks between the hash pipeline and the hash-free oracles.

The equivalence classes a hashing run induces on positions (equal hash
= same class) must coincide with bisimilarity of the corresponding
term-graph nodes, for both globalization algorithms and both hash
back-ends.  These helpers compare the partitions in canonical form and
report counterexamples as concrete syntax, so a broken hash or a broken
globalizer shows up as a term one can rerun by hand.
"""

from __future__ import annotations

from .bisim import (
    bisim_partition_naive,
    bisim_partition_refine,
    build_graph,
    canonical_partition,
    fork_closure,
)
from .generators import DEFAULT_SEED, SplitMix64, gen_random_closed
from .globalize import globalize, globalize_naive
from .hashing import ExactHasher, FastHasher
from .syntax import print_term
from .terms import from_pure, iter_subterms


def hash_partition(pure, hasher=None, algo="efficient"):
    """Position classes induced by hashing, in canonical form."""
    if hasher is None:
        hasher = FastHasher()
    t = from_pure(pure, hasher)
    g = globalize(t) if algo == "efficient" else globalize_naive(t)
    return canonical_partition([sub.hash for sub in iter_subterms(g)])


def check_term(pure, hasher=None, fork_limit=16):
    """Mismatch descriptions for one closed pure term (empty = all agree)."""
    graph = build_graph(pure)
    reference = bisim_partition_refine(graph)
    failures = []
    for algo in ("efficient", "naive"):
        got = hash_partition(pure, hasher, algo)
        if got != reference:
            failures.append(
                "%s globalization disagrees with bisimilarity on %s"
                % (algo, print_term(pure))
            )
    if graph.n <= fork_limit:
        if bisim_partition_naive(graph) != reference:
            failures.append(
                "the two partition refiners disagree on %s" % print_term(pure)
            )
        if fork_closure(pure, fork_limit) != reference:
            failures.append(
                "fork closure disagrees with bisimilarity on %s" % print_term(pure)
            )
    return failures


def check_modes_agree(pure):
    """Fast and exact back-ends must induce identical partitions."""
    fast = hash_partition(pure, FastHasher(), "efficient")
    exact = hash_partition(pure, ExactHasher(), "efficient")
    if fast != exact:
        return ["fast and exact back-ends disagree on %s" % print_term(pure)]
    return []


def run_check(max_size=10, trials=200, seed=DEFAULT_SEED, note=None):
    """Randomized agreement sweep; returns (checked, failures).

    Draws `trials` closed terms with sizes uniform in [2, max_size] and
    compares the hash partition (both algorithms, both back-ends)
    against partition refinement; small terms also get the quadratic
    refiner and the fork-closure oracle.
    """
    rng = SplitMix64(seed)
    failures = []
    checked = 0
    for _ in range(trials):
        size = 2 + rng.draw_below(max(1, max_size - 1))
        pure = gen_random_closed(size, rng.next64())
        found = check_term(pure)
        found.extend(check_modes_agree(pure))
        checked += 1
        for message in found:
            failures.append(message)
            if note is not None:
                note(message)
    return checked, failures
