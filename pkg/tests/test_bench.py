"""Benchmark harness: size grammar, cell structure, budget handling."""

import gc
import statistics

import pytest

from alphahash.bench import (
    ALGORITHMS,
    FAMILIES,
    RANDOM_SIZE_CAP,
    parse_sizes,
    rows_to_tsv,
    run_bench,
    summary_to_tsv,
)


def test_size_grammar_accepts_three_forms():
    assert parse_sizes("16,32,64") == [16, 32, 64]
    assert parse_sizes("2^5") == [32]
    assert parse_sizes("2^4..2^6") == [16, 32, 64]
    assert parse_sizes("2^3..2^5,100") == [8, 16, 32, 100]


def test_size_grammar_rejects_junk():
    for bad in ("", "2^", "abc", "2^4..2^2"):
        with pytest.raises(ValueError):
            parse_sizes(bad)


def test_cells_cover_every_family_size_algorithm_combination():
    rows, summary = run_bench(("linear",), [16, 32], trials=2)
    # requested sizes snap to the family grid
    cells = {(s.family, s.algorithm, s.size) for s in summary}
    assert cells == {
        ("linear", a, n) for a in ALGORITHMS for n in (14, 32)
    }
    for s in summary:
        assert 1 <= s.trials <= 2
    got = {}
    for r in rows:
        got.setdefault((r.family, r.algorithm, r.size), []).append(r.seconds)
    for s in summary:
        key = (s.family, s.algorithm, s.size)
        assert s.median_seconds == statistics.median(got[key])
        assert len(got[key]) == s.trials


def test_random_family_is_capped_with_a_note():
    notes = []
    rows, summary = run_bench(
        ("random",),
        [RANDOM_SIZE_CAP * 4],
        trials=1,
        algorithms=("efficient",),
        note=notes.append,
    )
    assert all(s.size == RANDOM_SIZE_CAP for s in summary)
    assert any("capped" in m for m in notes)


def test_unknown_names_are_rejected():
    with pytest.raises(ValueError):
        run_bench(("spiral",), [16], trials=1)
    with pytest.raises(ValueError):
        run_bench(("linear",), [16], trials=1, algorithms=("quantum",))
    assert set(FAMILIES) == {"linear", "balanced", "random"}


def test_blown_budget_skips_larger_sizes():
    notes = []
    rows, summary = run_bench(
        ("linear",),
        [64, 128],
        trials=3,
        algorithms=("efficient",),
        cell_budget=1e-9,
        note=notes.append,
    )
    # the first cell still reports its mandatory trial, the second is skipped
    assert len(summary) == 1
    assert summary[0].trials == 1
    assert any("exceeded" in m for m in notes)
    assert any("skipping" in m for m in notes)


def test_gc_is_restored_after_a_run():
    assert gc.isenabled()
    run_bench(("linear",), [16], trials=1, algorithms=("refine",))
    assert gc.isenabled()


def test_tsv_writers_produce_one_line_per_entry():
    rows, summary = run_bench(("linear",), [16], trials=2, algorithms=("refine",))
    rt = rows_to_tsv(rows).splitlines()
    st = summary_to_tsv(summary).splitlines()
    assert rt[0] == "family\talgorithm\tsize\ttrial\tseconds"
    assert st[0] == "family\talgorithm\tsize\ttrials\tmedian_seconds"
    assert len(rt) == 1 + len(rows)
    assert len(st) == 1 + len(summary)
    for line in rt[1:]:
        family, algorithm, size, trial, seconds = line.split("\t")
        assert family == "linear"
        assert algorithm == "refine"
        assert int(size) == 14
        float(seconds)
