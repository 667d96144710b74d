"""Position graphs, bisimilarity partitions, fork evidence."""

import pytest

from alphahash.bisim import (
    LABEL_APP,
    LABEL_LAM,
    LABEL_VAR,
    Partition,
    are_equivalent,
    bisim_partition,
    bisim_partition_naive,
    bisim_partition_refine,
    build_graph,
    canonical_partition,
    enumerate_single_forks,
    fork_closure,
)
from alphahash.errors import NotClosed, TermTooLarge
from alphahash.generators import (
    enumerate_closed_terms,
    gen_linear,
    gen_random_closed,
)
from alphahash.terms import App, Lam, Var, term_size, valid_positions

EX = Lam(
    App(
        App(Lam(Var(0)), Lam(Lam(App(Var(0), Var(2))))),
        Lam(App(Var(0), Var(1))),
    )
)


def test_graph_of_the_identity():
    g = build_graph(Lam(Var(0)))
    assert g.n == 2
    assert g.label == [LABEL_LAM, LABEL_VAR]
    assert g.down == [1, -1]
    assert g.left == [-1, -1]
    assert g.right == [-1, -1]
    assert g.up == [-1, 0]
    assert g.position_of(0) == ()
    assert g.position_of(1) == ("D",)


def test_graph_node_order_matches_preorder_positions():
    g = build_graph(EX)
    pos = list(valid_positions(EX))
    assert g.n == len(pos)
    assert [g.position_of(k) for k in range(g.n)] == pos


def test_up_edges_point_at_the_binding_lam():
    for seed in range(25):
        t = gen_random_closed(2 + seed * 7 % 120, seed)
        g = build_graph(t)
        for k in range(g.n):
            if g.label[k] != LABEL_VAR:
                assert g.up[k] == -1
                continue
            pos = g.position_of(k)
            sub = t
            for st in pos:
                sub = sub.body if st == "D" else (sub.fn if st == "L" else sub.arg)
            want = pos[: _binder_depth(pos, sub.index)]
            assert g.position_of(g.up[k]) == want
            assert g.label[g.up[k]] == LABEL_LAM


def _binder_depth(pos, idx):
    """Length of the prefix ending just above the idx-th enclosing D."""
    remaining = idx
    for i in range(len(pos) - 1, -1, -1):
        if pos[i] == "D":
            if remaining == 0:
                return i
            remaining -= 1
    raise AssertionError("variable not closed")


def test_open_terms_are_rejected():
    with pytest.raises(NotClosed):
        build_graph(Var(0))
    with pytest.raises(NotClosed):
        build_graph(Lam(App(Var(0), Var(1))))


def test_canonical_partition_forgets_label_identity():
    a = canonical_partition([5, 5, 2, 7, 2])
    b = canonical_partition(["x", "x", "y", "z", "y"])
    assert a.blocks == b.blocks == [0, 0, 1, 2, 1]
    assert a.nblocks == 3
    assert a.same_block(0, 1)
    assert not a.same_block(0, 2)


def test_partition_algorithms_agree_exhaustively_to_size_7():
    for n in range(2, 8):
        for t in enumerate_closed_terms(n):
            g = build_graph(t)
            assert bisim_partition_naive(g).blocks == bisim_partition_refine(g).blocks, t


def test_partition_algorithms_agree_on_random_terms():
    for seed in range(40):
        t = gen_random_closed(2 + seed * 13 % 200, seed)
        g = build_graph(t)
        assert bisim_partition_naive(g).blocks == bisim_partition_refine(g).blocks, seed


def test_worked_example_equivalences():
    part = bisim_partition(EX)
    pos = list(valid_positions(EX))
    at = {p: part.blocks[i] for i, p in enumerate(pos)}
    # the two copies of \(0 1) modulo renaming share a class
    assert at[("D", "L", "R", "D")] == at[("D", "R")]
    # and so do their bodies and variables, pointwise
    assert at[("D", "L", "R", "D", "D")] == at[("D", "R", "D")]
    assert at[("D", "L", "R", "D", "D", "L")] == at[("D", "R", "D", "L")]
    assert at[("D", "L", "R", "D", "D", "R")] == at[("D", "R", "D", "R")]
    # the identity lambda matches nothing else here
    assert [at[p] for p in pos].count(at[("D", "L", "L")]) == 1


def test_distinct_binder_targets_split_classes():
    # same shape, different up edge for the inner variable
    t1 = Lam(Lam(App(Var(0), Var(1))))
    t2 = Lam(Lam(App(Var(0), Var(0))))
    poss = list(valid_positions(t1))
    k_arg = poss.index(("D", "D", "R"))
    p1 = bisim_partition(t1)
    p2 = bisim_partition(t2)
    k_fn = poss.index(("D", "D", "L"))
    assert not p1.same_block(k_fn, k_arg)
    assert p2.same_block(k_fn, k_arg)


def test_the_lambda_ladder_nodes_are_pairwise_distinct():
    t = Lam(Lam(Lam(Var(0))))
    part = bisim_partition(t)
    assert part.nblocks == 4


def test_are_equivalent_across_terms():
    i1 = Lam(Var(0))
    i2 = Lam(Var(0))
    assert are_equivalent(i1, (), i2, ())
    assert are_equivalent(i1, ("D",), i2, ("D",))
    assert not are_equivalent(i1, (), Lam(Lam(Var(0))), ())
    # within one term, matching the hash example
    assert are_equivalent(EX, ("D", "L", "R", "D"), EX, ("D", "R"))
    assert not are_equivalent(EX, ("D", "L", "L"), EX, ("D", "R"))


def test_fork_evidence_is_sound():
    for seed in range(60):
        t = gen_random_closed(2 + seed % 14, seed)
        part = bisim_partition(t)
        for a, b in enumerate_single_forks(t):
            assert part.same_block(a, b), (t, a, b)


def test_fork_closure_recovers_bisimilarity_exhaustively():
    for n in range(2, 8):
        for t in enumerate_closed_terms(n):
            assert fork_closure(t).blocks == bisim_partition(t).blocks, t


def test_fork_enumeration_refuses_large_terms():
    with pytest.raises(TermTooLarge):
        list(enumerate_single_forks(gen_linear(6)))
    # raising the limit lifts the refusal
    big = gen_linear(6)
    assert term_size(big) == 17
    list(enumerate_single_forks(big, limit=17))


def test_bisim_partition_rejects_unknown_algorithms():
    with pytest.raises(ValueError):
        bisim_partition(Lam(Var(0)), algo="fancy")
