"""Term families for tests and benchmarks, plus exact uniform sampling.

Counting follows sizes where Var, Lam and App each cost one node.  With
`k` free variables available there are T(1, k) = k terms of size one,
and a term of size n is either a binder over a size n-1 term with k+1
variables or an application splitting n-1 nodes between the sides:

    T(n, k) = T(n-1, k+1) + sum_{i=1..n-2} T(i, k) * T(n-1-i, k)

Enumeration, ranking and unranking all follow the same fixed order:
binder terms first, then applications by ascending function size, with
variables ordered by index.  `gen_random_closed` draws a rank uniformly
(rejection sampling on 64-bit words, so exact for bignum counts) and
unranks it; the table cost makes this practical into the hundreds of
nodes.  `gen_random_shaped` trades uniformity for speed and covers the
10**4 node range.
"""

from __future__ import annotations

from .errors import NoTermOfSize
from .hashing import mix64
from .terms import App, Lam, Var

_M64 = (1 << 64) - 1


def gen_linear(n):
    """n binders over a left-nested spine (... (0 1) 2 ...) of n variables.

    Size 3n - 1, depth about 2n; every application node on the spine is
    in its own equivalence class, which keeps fast globalization honest
    and makes the quadratic one quadratic in practice.
    """
    if n < 1:
        raise NoTermOfSize("linear family needs n >= 1")
    t = Var(0)
    for i in range(1, n):
        t = App(t, Var(i))
    for _ in range(n):
        t = Lam(t)
    return t


def gen_balanced(depth):
    """Perfect doubling tower: B(0) = 0, B(k+1) = \\ (B(k) B(k)).

    Size 3 * 2**depth - 2.  The two copies under every binder are the
    same object, so the pure tree is small in memory even when the
    unfolded term is huge; closed for depth >= 1.
    """
    if depth < 0:
        raise NoTermOfSize("balanced family needs depth >= 0")
    t = Var(0)
    for _ in range(depth):
        t = Lam(App(t, t))
    return t


_COUNT_CACHE = {}


def count_terms(n, k):
    """Number of terms of size n over k free variables (bignum exact)."""
    if n < 1 or k < 0:
        return 0
    cache = _COUNT_CACHE
    got = cache.get((n, k))
    if got is not None:
        return got
    for m in range(1, n + 1):
        jmax = k + (n - m)
        for j in range(0, jmax + 1):
            key = (m, j)
            if key in cache:
                continue
            if m == 1:
                cache[key] = j
                continue
            total = cache[(m - 1, j + 1)]
            for i in range(1, m - 1):
                total += cache[(i, j)] * cache[(m - 1 - i, j)]
            cache[key] = total
    return cache[(n, k)]


def enumerate_terms(n, k):
    """All terms of size n over k free variables, in ranking order."""
    if n == 1:
        for i in range(k):
            yield Var(i)
        return
    if n < 1:
        return
    for b in enumerate_terms(n - 1, k + 1):
        yield Lam(b)
    for i in range(1, n - 1):
        for f in enumerate_terms(i, k):
            for a in enumerate_terms(n - 1 - i, k):
                yield App(f, a)


def enumerate_closed_terms(n):
    return enumerate_terms(n, 0)


def unrank_term(n, k, rank):
    """rank-th term of size n over k free variables (0-based)."""
    if not 0 <= rank < count_terms(n, k):
        raise NoTermOfSize(
            "no term of size %d over %d variables at rank %d" % (n, k, rank)
        )
    ops = []
    work = [(n, k, rank)]
    while work:
        m, j, r = work.pop()
        if m == 1:
            ops.append(r)
            continue
        lam_count = count_terms(m - 1, j + 1)
        if r < lam_count:
            ops.append(-1)
            work.append((m - 1, j + 1, r))
            continue
        r -= lam_count
        for i in range(1, m - 1):
            right = count_terms(m - 1 - i, j)
            block = count_terms(i, j) * right
            if r < block:
                ops.append(-2)
                work.append((m - 1 - i, j, r % right))
                work.append((i, j, r // right))
                break
            r -= block
    stack = []
    for op in reversed(ops):
        if op >= 0:
            stack.append(Var(op))
        elif op == -1:
            stack.append(Lam(stack.pop()))
        else:
            f = stack.pop()
            a = stack.pop()
            stack.append(App(f, a))
    return stack[0]


class SplitMix64:
    """Tiny deterministic 64-bit generator; reproducible across runs."""

    __slots__ = ("state",)

    def __init__(self, seed):
        self.state = seed & _M64

    def next64(self):
        self.state = (self.state + 0x9E3779B97F4A7C15) & _M64
        return mix64(self.state)

    def draw_below(self, bound):
        """Uniform integer in [0, bound); exact for bignum bounds."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        words = (bound.bit_length() + 63) // 64
        span = 1 << (64 * words)
        limit = span - span % bound
        while True:
            r = 0
            for _ in range(words):
                r = (r << 64) | self.next64()
            if r < limit:
                return r % bound


DEFAULT_SEED = 1


def gen_random_closed(n, seed=DEFAULT_SEED):
    """Exactly uniform closed term of size n.

    Draws a uniform rank below count_terms(n, 0) and unranks it; the
    counting table makes this affordable up to a few hundred nodes.
    NoTermOfSize when no closed term of that size exists (n < 2).
    """
    total = count_terms(n, 0)
    if total == 0:
        raise NoTermOfSize("no closed term of size %d" % n)
    rng = SplitMix64(seed)
    return unrank_term(n, 0, rng.draw_below(total))


def gen_random_shaped(n, seed=DEFAULT_SEED):
    """Random closed term of size n with no counting table.

    Node kinds and application splits are drawn from simple local
    rules, so the distribution is not uniform over terms; use it where
    only size and closedness matter (it reaches 10**4 nodes cheaply).
    """
    if n < 2:
        raise NoTermOfSize("no closed term of size %d" % n)
    rng = SplitMix64(seed)
    ops = []
    work = [(n, 0)]
    while work:
        m, k = work.pop()
        if m == 1:
            ops.append(rng.draw_below(k))
            continue
        # an application needs both sides buildable: size 1 needs a
        # variable in scope, anything larger can always start a binder
        if k >= 1:
            can_app = m >= 3
            lo = 1
        else:
            can_app = m >= 5
            lo = 2
        if can_app and rng.draw_below(3) != 0:
            i = lo + rng.draw_below((m - 1 - lo) - lo + 1)
            ops.append(-2)
            work.append((m - 1 - i, k))
            work.append((i, k))
        else:
            ops.append(-1)
            work.append((m - 1, k + 1))
    stack = []
    for op in reversed(ops):
        if op >= 0:
            stack.append(Var(op))
        elif op == -1:
            stack.append(Lam(stack.pop()))
        else:
            f = stack.pop()
            a = stack.pop()
            stack.append(App(f, a))
    return stack[0]
