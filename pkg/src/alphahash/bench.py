"""Benchmark harness: scaling runs over term families and algorithms.

A cell is one (family, algorithm, size) combination.  Cells run the
array kernels (for the two globalizers) or the pure-Python partition
refiner, after one untimed warmup, with garbage collection off during
timing.  Sub-10ms cells are timed in batches so the clock resolution
does not drown the signal.  Each cell has a wall-clock budget; a cell
that blows it keeps whatever trials it finished and larger sizes for
that family/algorithm pair are skipped.

Input preparation (term construction, decoration, array encoding,
graph building, copying) is never inside the timed region.
"""

from __future__ import annotations

import gc
import math
import re
import statistics
import time
from dataclasses import dataclass

from .bisim import bisim_partition_refine, build_graph
from .generators import DEFAULT_SEED, gen_balanced, gen_linear, gen_random_closed
from .hashing import FastHasher
from .kernels import (
    copy_arrays,
    globalize_arrays,
    globalize_arrays_naive,
    term_to_arrays,
    warmup,
)
from .terms import from_pure, term_size

FAMILIES = ("linear", "balanced", "random")
ALGORITHMS = ("naive", "efficient", "refine")

RANDOM_SIZE_CAP = 512
_BATCH_FLOOR = 0.01


@dataclass
class BenchRow:
    family: str
    algorithm: str
    size: int
    trial: int
    seconds: float


@dataclass
class BenchSummary:
    family: str
    algorithm: str
    size: int
    trials: int
    median_seconds: float


def parse_sizes(text):
    """Comma list of items: INT, 2^K, or a doubling range 2^A..2^B."""
    out = []
    for item in text.split(","):
        item = item.strip()
        m = re.fullmatch(r"2\^(\d+)\.\.2\^(\d+)", item)
        if m:
            lo, hi = int(m.group(1)), int(m.group(2))
            if hi < lo:
                raise ValueError("descending size range %r" % item)
            out.extend(2**e for e in range(lo, hi + 1))
            continue
        m = re.fullmatch(r"2\^(\d+)", item)
        if m:
            out.append(2 ** int(m.group(1)))
            continue
        if re.fullmatch(r"\d+", item):
            out.append(int(item))
            continue
        raise ValueError("bad size %r (want INT, 2^K, or 2^A..2^B)" % item)
    return out


def _prepare(family, requested, seed, note):
    """Pure term for the family at (approximately) the requested size."""
    if family == "linear":
        n = max(1, (requested + 1) // 3)
        return gen_linear(n)
    if family == "balanced":
        d = 1
        while 3 * 2 ** (d + 1) - 2 <= requested:
            d += 1
        return gen_balanced(d)
    if family == "random":
        m = requested
        if m > RANDOM_SIZE_CAP:
            m = RANDOM_SIZE_CAP
            note(
                "random family capped at size %d (exact sampling cost); "
                "requested %d" % (RANDOM_SIZE_CAP, requested)
            )
        if m < 2:
            m = 2
        return gen_random_closed(m, seed ^ requested)
    raise ValueError("unknown family %r" % family)


def _make_runner(algorithm, pure):
    """() -> seconds for one run; all setup happens here, untimed."""
    if algorithm in ("naive", "efficient"):
        arrays = term_to_arrays(from_pure(pure, FastHasher()))
        kernel = globalize_arrays_naive if algorithm == "naive" else globalize_arrays

        def run_once():
            fresh = copy_arrays(arrays)
            t0 = time.perf_counter()
            kernel(fresh)
            return time.perf_counter() - t0

        def run_batch(count):
            copies = [copy_arrays(arrays) for _ in range(count)]
            t0 = time.perf_counter()
            for fresh in copies:
                kernel(fresh)
            return (time.perf_counter() - t0) / count

        return run_once, run_batch
    if algorithm == "refine":
        graph = build_graph(pure)

        def run_once():
            t0 = time.perf_counter()
            bisim_partition_refine(graph)
            return time.perf_counter() - t0

        def run_batch(count):
            t0 = time.perf_counter()
            for _ in range(count):
                bisim_partition_refine(graph)
            return (time.perf_counter() - t0) / count

        return run_once, run_batch
    raise ValueError("unknown algorithm %r" % algorithm)


def _run_cell(run_once, run_batch, trials, budget):
    """Timings for one cell: warmup, then up to `trials` measurements."""
    started = time.monotonic()
    warm = run_once()
    batch = 1
    if warm < _BATCH_FLOOR:
        batch = int(math.ceil(_BATCH_FLOOR / max(warm, 1e-7)))
    timings = []
    worst = warm * batch
    while len(timings) < trials:
        elapsed = time.monotonic() - started
        if timings and elapsed + worst > budget:
            break
        if batch == 1:
            dt = run_once()
        else:
            dt = run_batch(batch)
        timings.append(dt)
        if dt * batch > worst:
            worst = dt * batch
    exceeded = (time.monotonic() - started) > budget
    return timings, exceeded


def run_bench(
    families,
    sizes,
    trials=5,
    algorithms=ALGORITHMS,
    seed=DEFAULT_SEED,
    cell_budget=60.0,
    note=None,
):
    """Rows and per-cell medians for every family/size/algorithm cell."""
    if note is None:
        def note(message):
            return None
    for family in families:
        if family not in FAMILIES:
            raise ValueError("unknown family %r" % family)
    for algorithm in algorithms:
        if algorithm not in ALGORITHMS:
            raise ValueError("unknown algorithm %r" % algorithm)
    if any(a in ("naive", "efficient") for a in algorithms):
        warmup()
    rows = []
    summary = []
    gc_was_on = gc.isenabled()
    gc.disable()
    try:
        for family in families:
            blown = set()
            for requested in sorted(sizes):
                pure = _prepare(family, requested, seed, note)
                actual = term_size(pure)
                for algorithm in algorithms:
                    if algorithm in blown:
                        note(
                            "skipping %s/%s at %d: budget blown at a smaller size"
                            % (family, algorithm, requested)
                        )
                        continue
                    run_once, run_batch = _make_runner(algorithm, pure)
                    timings, exceeded = _run_cell(
                        run_once, run_batch, trials, cell_budget
                    )
                    for i, dt in enumerate(timings):
                        rows.append(BenchRow(family, algorithm, actual, i, dt))
                    med = statistics.median(timings)
                    summary.append(
                        BenchSummary(family, algorithm, actual, len(timings), med)
                    )
                    if exceeded:
                        blown.add(algorithm)
                        note(
                            "%s/%s at %d exceeded the %.0fs cell budget; "
                            "larger sizes skipped"
                            % (family, algorithm, actual, cell_budget)
                        )
    finally:
        if gc_was_on:
            gc.enable()
    return rows, summary


def rows_to_tsv(rows):
    lines = ["family\talgorithm\tsize\ttrial\tseconds"]
    for r in rows:
        lines.append(
            "%s\t%s\t%d\t%d\t%.9f" % (r.family, r.algorithm, r.size, r.trial, r.seconds)
        )
    return "\n".join(lines) + "\n"


def summary_to_tsv(summary):
    lines = ["family\talgorithm\tsize\ttrials\tmedian_seconds"]
    for s in summary:
        lines.append(
            "%s\t%s\t%d\t%d\t%.9f"
            % (s.family, s.algorithm, s.size, s.trials, s.median_seconds)
        )
    return "\n".join(lines) + "\n"
