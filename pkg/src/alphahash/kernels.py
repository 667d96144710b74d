"""Array kernels for globalization, matching the object implementations.

The object code in `globalize` is the reference; these kernels exist so
benchmarks can time the two algorithms at 10**4 .. 10**5 nodes, where a
quadratic pass in interpreted Python would dominate the clock with
interpreter overhead rather than algorithmic cost.  Per-position output
hashes are bit-identical to the object implementations (tests enforce
this), so timing the kernels times the same computation.

Term encoding: preorder arrays over nodes 0..n-1.

    kind  uint8   0 Lam, 1 App, 2 Var, 3 g-var
    rc    int64   App's argument child (function child is k+1); else -1
    vi    int64   variable index for kinds 2 and 3; else -1
    size  int64   subtree node count
    fb    int64   1 + largest free variable index (0 = g-closed)
    h     uint64  structural hash (64-bit back-end)

Kernels mutate the arrays in place and return 0, or a nonzero code when
an input was not closed / an internal invariant failed.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .errors import AlphaHashError, NotClosed
from .terms import App, Lam, Term, Var

KIND_LAM = 0
KIND_APP = 1
KIND_VAR = 2
KIND_GVAR = 3

_U = np.uint64
_MISS = _U(0x9E3779B97F4A7C15)
_TAG_LAM = _U(0xA1)
_TAG_APP = _U(0xA2)
_TAG_VAR = _U(0xA3)
_TAG_GVAR = _U(0xA4)
_MUL1 = _U(0xBF58476D1CE4E5B9)
_MUL2 = _U(0x94D049BB133111EB)
_S30 = _U(30)
_S27 = _U(27)
_S31 = _U(31)


@njit(cache=True)
def _mix(x):
    x ^= x >> _S30
    x *= _MUL1
    x ^= x >> _S27
    x *= _MUL2
    x ^= x >> _S31
    return x


@njit(cache=True)
def _hv(tag, left, right):
    return _mix(tag ^ _mix(left ^ _mix(right)))


@njit(cache=True)
def _recompute(j, kind, rc, h, fb):
    """Refresh an interior node's hash and free bound from its children."""
    if kind[j] == 0:
        h[j] = _hv(_TAG_LAM, h[j + 1], _MISS)
        b = fb[j + 1] - 1
        fb[j] = b if b > 0 else 0
    elif kind[j] == 1:
        h[j] = _hv(_TAG_APP, h[j + 1], h[rc[j]])
        a, b = fb[j + 1], fb[rc[j]]
        fb[j] = a if a >= b else b


@njit(cache=True)
def _naive_kernel(kind, rc, vi, size, fb, h):
    """In-place equivalent of the quadratic object globalization.

    Preorder over binders; each binder rewrites the variables it binds
    (payload: its own current hash) and refreshes the hashes on the
    non-closed region below it, which is the same work profile as the
    object version's copy-and-rehash.  A final bottom-up pass clears
    the remaining staleness above each rewritten region.
    """
    n = kind.shape[0]
    if n == 0:
        return 0
    if fb[0] != 0:
        return 1
    dstack = np.empty(n + 2, np.int64)
    touched = np.empty(n, np.int64)
    for k in range(n):
        if kind[k] != 0:
            continue
        body = k + 1
        if fb[body] == 0:
            continue
        gh = _hv(_TAG_GVAR, h[k], _MISS)
        end = k + size[k]
        dsp = 0
        tsp = 0
        j = body
        while j < end:
            while dsp > 0 and dstack[dsp - 1] <= j:
                dsp -= 1
            if fb[j] == 0:
                j += size[j]
                continue
            touched[tsp] = j
            tsp += 1
            kd = kind[j]
            if kd == 2:
                if vi[j] == dsp:
                    kind[j] = 3
                    h[j] = gh
                    fb[j] = 0
            elif kd == 0:
                dstack[dsp] = j + size[j]
                dsp += 1
            j += 1
        for q in range(tsp - 1, -1, -1):
            _recompute(touched[q], kind, rc, h, fb)
    for j in range(n - 1, -1, -1):
        _recompute(j, kind, rc, h, fb)
    return 0


@njit(cache=True)
def _heap_push(heap_sz, heap_nd, hlen, s, node):
    i = hlen
    heap_sz[i] = s
    heap_nd[i] = node
    while i > 0:
        p = (i - 1) >> 1
        if heap_sz[p] >= heap_sz[i]:
            break
        heap_sz[p], heap_sz[i] = heap_sz[i], heap_sz[p]
        heap_nd[p], heap_nd[i] = heap_nd[i], heap_nd[p]
        i = p
    return hlen + 1


@njit(cache=True)
def _heap_pop(heap_sz, heap_nd, hlen):
    node = heap_nd[0]
    hlen -= 1
    heap_sz[0] = heap_sz[hlen]
    heap_nd[0] = heap_nd[hlen]
    i = 0
    while True:
        l = 2 * i + 1
        if l >= hlen:
            break
        big = l
        r = l + 1
        if r < hlen and heap_sz[r] > heap_sz[l]:
            big = r
        if heap_sz[i] >= heap_sz[big]:
            break
        heap_sz[i], heap_sz[big] = heap_sz[big], heap_sz[i]
        heap_nd[i], heap_nd[big] = heap_nd[big], heap_nd[i]
        i = big
    return node, hlen


@njit(cache=True)
def _push_open_children(x, kind, rc, size, fb, heap_sz, heap_nd, hlen):
    kd = kind[x]
    if kd == 0:
        b = x + 1
        if fb[b] != 0:
            hlen = _heap_push(heap_sz, heap_nd, hlen, size[b], b)
    elif kd == 1:
        f = x + 1
        a = rc[x]
        if fb[f] != 0:
            hlen = _heap_push(heap_sz, heap_nd, hlen, size[f], f)
        if fb[a] != 0:
            hlen = _heap_push(heap_sz, heap_nd, hlen, size[a], a)
    return hlen


@njit(cache=True)
def _calc_dups(x, kind, rc, size, fb, heap_sz, heap_nd, arena, arena_top):
    """Duplicated subtree sizes in x's open region, appended descending."""
    hlen = _heap_push(heap_sz, heap_nd, 0, size[x], x)
    while hlen > 0:
        top = heap_sz[0]
        node, hlen = _heap_pop(heap_sz, heap_nd, hlen)
        if hlen > 0 and heap_sz[0] == top:
            while hlen > 0 and heap_sz[0] == top:
                _, hlen = _heap_pop(heap_sz, heap_nd, hlen)
            if arena_top == arena.shape[0]:
                grown = np.empty(arena.shape[0] * 2, np.int64)
                grown[:arena_top] = arena[:arena_top]
                arena = grown
            arena[arena_top] = top
            arena_top += 1
        else:
            hlen = _push_open_children(
                node, kind, rc, size, fb, heap_sz, heap_nd, hlen
            )
    return arena, arena_top


@njit(cache=True)
def _dup_member(arena, start, length, s):
    lo = 0
    hi = length
    while lo < hi:
        mid = (lo + hi) >> 1
        v = arena[start + mid]
        if v == s:
            return True
        if v > s:
            lo = mid + 1
        else:
            hi = mid
    return False


@njit(cache=True)
def _materialize(c, kind, rc, vi, size, fb, h, env, env_base, env_sp, dstack, touched):
    """Rewrite every pending variable below c from the environment.

    Free Var(i) at local depth d takes payload env[env_sp - 1 - (i - d)];
    afterwards c's region is refreshed bottom-up and must be g-closed.
    """
    end = c + size[c]
    dsp = 0
    tsp = 0
    j = c
    while j < end:
        while dsp > 0 and dstack[dsp - 1] <= j:
            dsp -= 1
        if fb[j] == 0:
            j += size[j]
            continue
        touched[tsp] = j
        tsp += 1
        kd = kind[j]
        if kd == 2:
            if vi[j] >= dsp:
                slot = env_sp - 1 - (vi[j] - dsp)
                if slot < env_base:
                    return 1
                h[j] = _hv(_TAG_GVAR, env[slot], _MISS)
                kind[j] = 3
                fb[j] = 0
        elif kd == 0:
            dstack[dsp] = j + size[j]
            dsp += 1
        j += 1
    for q in range(tsp - 1, -1, -1):
        _recompute(touched[q], kind, rc, h, fb)
    if fb[c] != 0:
        return 2
    return 0


_A_GLOB = 0
_A_VISIT = 1
_A_POSTLAM = 2
_A_POSTAPP = 3
_A_EXIT = 4


@njit(cache=True)
def _efficient_kernel(kind, rc, vi, size, fb, h):
    """In-place equivalent of the near-linear object globalization."""
    n = kind.shape[0]
    if n == 0:
        return 0
    if fb[0] != 0:
        return 1
    act_code = np.empty(5 * n + 64, np.int64)
    act_node = np.empty(5 * n + 64, np.int64)
    scc_root = np.empty(n + 2, np.int64)
    scc_dstart = np.empty(n + 2, np.int64)
    scc_dlen = np.empty(n + 2, np.int64)
    scc_envbase = np.empty(n + 2, np.int64)
    env = np.empty(n + 2, np.uint64)
    heap_sz = np.empty(n + 2, np.int64)
    heap_nd = np.empty(n + 2, np.int64)
    arena = np.empty(64, np.int64)
    dstack = np.empty(n + 2, np.int64)
    touched = np.empty(n + 2, np.int64)
    arena_top = 0
    asp = 0
    ssp = 0
    env_sp = 0

    act_code[asp] = _A_GLOB
    act_node[asp] = 0
    asp += 1
    while asp > 0:
        asp -= 1
        code = act_code[asp]
        x = act_node[asp]
        if code == _A_GLOB:
            astart = arena_top
            arena, arena_top = _calc_dups(
                x, kind, rc, size, fb, heap_sz, heap_nd, arena, arena_top
            )
            scc_root[ssp] = x
            scc_dstart[ssp] = astart
            scc_dlen[ssp] = arena_top - astart
            scc_envbase[ssp] = env_sp
            ssp += 1
            act_code[asp] = _A_EXIT
            act_node[asp] = x
            asp += 1
            act_code[asp] = _A_VISIT
            act_node[asp] = x
            asp += 1
        elif code == _A_VISIT:
            kd = kind[x]
            if kd == 2:
                slot = env_sp - 1 - vi[x]
                if slot < scc_envbase[ssp - 1]:
                    return 3
                h[x] = _hv(_TAG_GVAR, env[slot], _MISS)
                kind[x] = 3
                fb[x] = 0
            elif kd == 0:
                root = scc_root[ssp - 1]
                env[env_sp] = _hv(_TAG_APP, h[root], h[x])
                env_sp += 1
                act_code[asp] = _A_POSTLAM
                act_node[asp] = x
                asp += 1
                c = x + 1
                if scc_dlen[ssp - 1] > 0 and _dup_member(
                    arena, scc_dstart[ssp - 1], scc_dlen[ssp - 1], size[c]
                ):
                    st = _materialize(
                        c, kind, rc, vi, size, fb, h,
                        env, scc_envbase[ssp - 1], env_sp, dstack, touched,
                    )
                    if st != 0:
                        return 4
                    act_code[asp] = _A_GLOB
                elif fb[c] == 0:
                    act_code[asp] = _A_GLOB
                else:
                    act_code[asp] = _A_VISIT
                act_node[asp] = c
                asp += 1
            elif kd == 1:
                act_code[asp] = _A_POSTAPP
                act_node[asp] = x
                asp += 1
                a = rc[x]
                f = x + 1
                if scc_dlen[ssp - 1] > 0 and _dup_member(
                    arena, scc_dstart[ssp - 1], scc_dlen[ssp - 1], size[a]
                ):
                    st = _materialize(
                        a, kind, rc, vi, size, fb, h,
                        env, scc_envbase[ssp - 1], env_sp, dstack, touched,
                    )
                    if st != 0:
                        return 4
                    act_code[asp] = _A_GLOB
                elif fb[a] == 0:
                    act_code[asp] = _A_GLOB
                else:
                    act_code[asp] = _A_VISIT
                act_node[asp] = a
                asp += 1
                if scc_dlen[ssp - 1] > 0 and _dup_member(
                    arena, scc_dstart[ssp - 1], scc_dlen[ssp - 1], size[f]
                ):
                    st = _materialize(
                        f, kind, rc, vi, size, fb, h,
                        env, scc_envbase[ssp - 1], env_sp, dstack, touched,
                    )
                    if st != 0:
                        return 4
                    act_code[asp] = _A_GLOB
                elif fb[f] == 0:
                    act_code[asp] = _A_GLOB
                else:
                    act_code[asp] = _A_VISIT
                act_node[asp] = f
                asp += 1
        elif code == _A_POSTLAM:
            env_sp -= 1
            _recompute(x, kind, rc, h, fb)
        elif code == _A_POSTAPP:
            _recompute(x, kind, rc, h, fb)
        else:
            ssp -= 1
            arena_top = scc_dstart[ssp]
            if env_sp != scc_envbase[ssp]:
                return 5
    return 0


def term_to_arrays(t):
    """Preorder array encoding of a 64-bit-hashed decorated term."""
    if type(t) is not Term:
        raise TypeError("term_to_arrays needs a decorated term")
    n = t.size
    kind = np.empty(n, np.uint8)
    rc = np.full(n, -1, np.int64)
    vi = np.full(n, -1, np.int64)
    size = np.empty(n, np.int64)
    fb = np.empty(n, np.int64)
    h = np.empty(n, np.uint64)
    work = [t]
    k = 0
    while work:
        x = work.pop()
        size[k] = x.size
        fb[k] = x.free_bound
        h[k] = x.hash
        node = x.node
        tp = type(node)
        if tp is Var:
            kind[k] = KIND_GVAR if x.gvar_payload is not None else KIND_VAR
            vi[k] = node.index
        elif tp is Lam:
            kind[k] = KIND_LAM
            work.append(node.body)
        else:
            kind[k] = KIND_APP
            rc[k] = k + 1 + node.fn.size
            work.append(node.arg)
            work.append(node.fn)
        k += 1
    return kind, rc, vi, size, fb, h


def globalize_arrays_naive(arrays):
    """Run the quadratic kernel in place; raises if the term is open."""
    kind, rc, vi, size, fb, h = arrays
    status = _naive_kernel(kind, rc, vi, size, fb, h)
    _check_status(status)
    return arrays


def globalize_arrays(arrays):
    """Run the near-linear kernel in place; raises if the term is open."""
    kind, rc, vi, size, fb, h = arrays
    status = _efficient_kernel(kind, rc, vi, size, fb, h)
    _check_status(status)
    return arrays


def _check_status(status):
    if status == 0:
        return
    if status == 1:
        raise NotClosed("globalization needs a closed term")
    raise AlphaHashError("kernel invariant violated (status %d)" % status)


def copy_arrays(arrays):
    """Fresh mutable copy, for repeated kernel runs over one input."""
    return tuple(a.copy() for a in arrays)


def warmup():
    """Compile both kernels on a two-node input."""
    from .hashing import FastHasher
    from .terms import from_pure

    t = from_pure(Lam(Var(0)), FastHasher())
    globalize_arrays_naive(term_to_arrays(t))
    globalize_arrays(term_to_arrays(t))
