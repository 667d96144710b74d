"""Hash back-ends: the 64-bit mixer, the interning table, g-term readback."""

import pytest

from alphahash.errors import ModeMismatch
from alphahash.hashing import (
    ExactHasher,
    FastHasher,
    GVar,
    gterm_of_exact,
    mix64,
)
from alphahash.terms import App, Lam, Var, from_pure, gvar, lift_node


def test_mixer_frozen_vectors():
    assert mix64(0) == 0
    assert mix64(1) == 0x5692161D100B05E5
    assert mix64(0xDEADBEEF) == 0x4E062702EC929EEA
    assert mix64(2**64 - 1) == 0xB4D055FCF2CBBD7B


def test_mixer_stays_in_64_bits():
    for x in (0, 1, 2**63, 2**64 - 1, 0x123456789ABCDEF0):
        assert 0 <= mix64(x) < 2**64


def test_fast_hashes_frozen():
    h = FastHasher()
    v0 = h.lift_hash(Var(0))
    assert h.format(v0) == "f0226a7ff3a6564f"
    assert h.format(h.lift_hash(Var(1))) == "085e07f644c789df"
    assert h.format(h.lift_hash(Lam(v0))) == "7792e02baf23df48"
    assert h.format(h.lift_hash(App(v0, v0))) == "e6783dca70a94cb4"
    assert h.format(h.hash_gvar(v0)) == "8a8505a4842d8085"


def test_fast_hasher_is_stateless_and_stable():
    a = FastHasher()
    b = FastHasher()
    t = Lam(Lam(App(Var(0), Var(1))))
    assert from_pure(t, a).hash == from_pure(t, b).hash


def test_gvar_hash_differs_from_wrapped_payload():
    h = FastHasher()
    v0 = h.lift_hash(Var(0))
    assert h.hash_gvar(v0) != v0


def test_fast_format_is_16_hex_digits():
    h = FastHasher()
    for i in range(50):
        s = h.format(h.lift_hash(Var(i)))
        assert len(s) == 16 and s == s.lower()
        int(s, 16)


def test_fast_no_collisions_across_a_million_distinct_gterms():
    # four structurally disjoint families, each injective by construction
    h = FastHasher()
    seen = set()
    count = 0
    v0 = h.lift_hash(Var(0))

    for i in range(300_000):
        seen.add(h.lift_hash(Var(i)))
        count += 1
    cur = v0
    for _ in range(250_000):
        cur = h.lift_hash(Lam(cur))
        seen.add(cur)
        count += 1
    cur = v0
    for _ in range(250_000):
        cur = h.lift_hash(App(cur, v0))
        seen.add(cur)
        count += 1
    cur = v0
    for _ in range(250_000):
        cur = h.hash_gvar(cur)
        seen.add(cur)
        count += 1

    assert count == 1_050_000
    assert len(seen) == count


def _walk(t):
    stack = [t]
    while stack:
        x = stack.pop()
        yield x
        node = x.node
        if type(node) is Lam:
            stack.append(node.body)
        elif type(node) is App:
            stack.append(node.arg)
            stack.append(node.fn)


def test_exact_ids_are_dense_and_child_precedes_parent():
    h = ExactHasher()
    t = from_pure(Lam(App(Var(0), Lam(Var(1)))), h)
    for x in _walk(t):
        assert isinstance(x.hash, int)
        assert 0 <= x.hash < len(h)
        node = x.node
        if type(node) is Lam:
            assert node.body.hash < x.hash
        elif type(node) is App:
            assert node.fn.hash < x.hash
            assert node.arg.hash < x.hash


def test_exact_interning_is_injective_and_idempotent():
    h = ExactHasher()
    a = from_pure(Lam(Var(0)), h)
    b = from_pure(Lam(Var(0)), h)
    assert a.hash == b.hash
    c = from_pure(Lam(Lam(Var(0))), h)
    assert c.hash != a.hash
    n = len(h)
    from_pure(Lam(Var(0)), h)
    assert len(h) == n


def test_exact_gterm_readback():
    h = ExactHasher()
    t = from_pure(Lam(App(Var(0), Lam(Var(1)))), h)
    assert h.gterm_of(t.hash) == Lam(App(Var(0), Lam(Var(1))))
    g = gvar(from_pure(Lam(Var(0)), h).hash, 3, h)
    wrapped = lift_node(Lam(g), h)
    assert h.gterm_of(wrapped.hash) == Lam(GVar(Lam(Var(0))))


def test_exact_gterm_readback_of_shared_structure():
    h = ExactHasher()
    leaf = from_pure(Lam(Var(0)), h)
    t = lift_node(App(leaf, leaf), h)
    got = h.gterm_of(t.hash)
    assert got == App(Lam(Var(0)), Lam(Var(0)))


def test_exact_rejects_foreign_ids():
    h = ExactHasher()
    from_pure(Lam(Var(0)), h)
    with pytest.raises(ModeMismatch):
        h.gterm_of(len(h) + 5)


def test_gterm_of_exact_requires_exact_mode():
    with pytest.raises(ModeMismatch):
        gterm_of_exact(FastHasher(), 0)
    h = ExactHasher()
    t = from_pure(Var(2), h)
    assert gterm_of_exact(h, t.hash) == Var(2)


def test_mode_formats_differ():
    fast = FastHasher()
    exact = ExactHasher()
    tf = from_pure(Lam(Var(0)), fast)
    te = from_pure(Lam(Var(0)), exact)
    assert fast.format(tf.hash) == "7792e02baf23df48"
    assert exact.format(te.hash) == str(te.hash)
