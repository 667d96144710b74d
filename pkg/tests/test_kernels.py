"""Array kernels must reproduce the object algorithms bit for bit."""

import numpy as np
import pytest

from alphahash.errors import NotClosed
from alphahash.generators import (
    gen_balanced,
    gen_linear,
    gen_random_closed,
    gen_random_shaped,
)
from alphahash.globalize import globalize, globalize_naive
from alphahash.hashing import FastHasher, mix64
from alphahash.kernels import (
    KIND_APP,
    KIND_GVAR,
    KIND_LAM,
    KIND_VAR,
    copy_arrays,
    globalize_arrays,
    globalize_arrays_naive,
    term_to_arrays,
    warmup,
)
from alphahash.terms import App, Lam, Var, from_pure, iter_positions

H = FastHasher()


@pytest.fixture(scope="module", autouse=True)
def compiled_kernels():
    warmup()


def hashes_in_preorder(t):
    return [sub.hash for _, sub in iter_positions(t)]


def object_reference(pt, algo):
    t = from_pure(pt, H)
    g = globalize_naive(t) if algo == "naive" else globalize(t)
    return hashes_in_preorder(g)


def kernel_result(pt, algo):
    arrays = term_to_arrays(from_pure(pt, H))
    run = globalize_arrays_naive if algo == "naive" else globalize_arrays
    run(arrays)
    return list(arrays[5])


def test_kernel_mixer_matches_reference():
    from alphahash.kernels import _mix

    for x in (0, 1, 2**63, 2**64 - 1, 0xDEADBEEF, 0x9E3779B97F4A7C15):
        assert int(_mix(np.uint64(x))) == mix64(x)


def test_array_encoding_round_trips_decorations():
    pt = Lam(App(Lam(Var(0)), Lam(App(Var(0), Var(1)))))
    t = from_pure(pt, H)
    kind, rc, vi, size, fb, h = term_to_arrays(t)
    subs = [sub for _, sub in iter_positions(t)]
    assert len(subs) == t.size
    for k, sub in enumerate(subs):
        assert size[k] == sub.size
        assert fb[k] == sub.free_bound
        assert int(h[k]) == sub.hash
        tp = type(sub.node)
        want = {Lam: KIND_LAM, App: KIND_APP}.get(tp, KIND_VAR)
        assert kind[k] == want
        if tp is Var:
            assert vi[k] == sub.node.index


def test_array_encoding_marks_gvars():
    t = from_pure(Lam(Lam(App(Var(0), Var(1)))), H)
    g = globalize(t)
    kind, rc, vi, size, fb, h = term_to_arrays(g)
    assert list(kind).count(KIND_GVAR) == 2
    assert KIND_VAR not in list(kind)


def golden_terms():
    yield Lam(Var(0))
    yield Lam(Lam(App(Var(0), Var(1))))
    a = App(Var(0), Var(0))
    yield Lam(App(a, a))
    yield gen_linear(40)
    yield gen_balanced(6)


def test_naive_kernel_matches_object_algorithm_on_goldens():
    for pt in golden_terms():
        assert kernel_result(pt, "naive") == object_reference(pt, "naive")


def test_efficient_kernel_matches_object_algorithm_on_goldens():
    for pt in golden_terms():
        assert kernel_result(pt, "efficient") == object_reference(pt, "efficient")


def test_kernels_match_objects_on_random_terms():
    for seed in range(25):
        pt = gen_random_closed(2 + (seed * 41) % 250, seed)
        assert kernel_result(pt, "naive") == object_reference(pt, "naive")
        assert kernel_result(pt, "efficient") == object_reference(pt, "efficient")


def test_kernels_match_objects_on_shaped_terms():
    for seed in range(6):
        pt = gen_random_shaped(400, seed)
        assert kernel_result(pt, "naive") == object_reference(pt, "naive")
        assert kernel_result(pt, "efficient") == object_reference(pt, "efficient")


def test_kernels_mutate_in_place_and_copy_isolates():
    t = from_pure(gen_linear(10), H)
    arrays = term_to_arrays(t)
    before = copy_arrays(arrays)
    out = globalize_arrays(arrays)
    assert out is arrays
    assert not np.array_equal(before[5], arrays[5])
    # replaced variables flip kind in place; sizes never move
    assert np.array_equal(before[3], arrays[3])
    assert (arrays[0] == 3).sum() > 0
    # the copy still holds the pre-run state
    assert np.array_equal(before[0], term_to_arrays(t)[0])
    assert list(before[5]) == hashes_in_preorder(t)


def test_kernels_reject_open_terms():
    open_arrays = term_to_arrays(from_pure(App(Var(0), Lam(Var(0))), H))
    with pytest.raises(NotClosed):
        globalize_arrays_naive(copy_arrays(open_arrays))
    with pytest.raises(NotClosed):
        globalize_arrays(copy_arrays(open_arrays))


def test_term_to_arrays_requires_decoration():
    with pytest.raises(TypeError):
        term_to_arrays(Lam(Var(0)))
