"""Rewriting bound variables into global variables, two ways.

`globalize_naive` re-hashes under every binder independently: walking
into a Lam replaces the variables it binds with global variables whose
payload is the binder's current hash, then continues below.  Quadratic
in the worst case because deep spines are rebuilt once per binder.

`globalize` produces the same hashes per position in O(n log n) node
work.  It partitions the term into regions rooted at g-closed subterms
("components"), delays variable replacement with an environment of
payload hashes (one per binder passed), and only pays for an eager
replacement when a subterm's size repeats inside the component, which
can happen at most log(n) times along any path.

Payloads differ between the two algorithms on purpose: the naive one
uses the binder's own evolving hash, the efficient one pairs the
component root with the binder.  Both choices separate binders exactly
as far as the equivalence requires, so per-position hash equality
agrees (the cross-check module tests this).

Visit accounting: every node a replacement walk enters (g-closed
subtrees are never entered) gets `visits` bumped by one; the rebuilt
copy carries the bumped count.  The structural rebuilds the globalizers
do on their own way out do not count as visits.
"""

from __future__ import annotations

import heapq

from .errors import IndexOutOfRange, NotClosed
from .terms import App, Lam, Term, Var, gvar, lift_node


class HashEnv:
    """Immutable stack of payload hashes with O(log n) random access.

    Skew-binary random-access list: a front-biased spine of complete
    trees whose weights follow the skew binary number system, giving
    O(1) push and O(log n) lookup without mutation, so every branch of
    a traversal can keep its own environment for free.
    """

    __slots__ = ("_spine", "_len")

    def __init__(self, spine=None, length=0):
        self._spine = spine
        self._len = length

    def push(self, value):
        sp = self._spine
        if sp is not None:
            w1, t1, rest1 = sp
            if rest1 is not None:
                w2, t2, rest2 = rest1
                if w1 == w2:
                    return HashEnv((1 + w1 + w2, (value, t1, t2), rest2), self._len + 1)
        return HashEnv((1, (value, None, None), sp), self._len + 1)

    def lookup(self, i):
        """i-th most recent push; lookup(0) is the top."""
        if i < 0 or i >= self._len:
            raise IndexOutOfRange(
                "environment lookup %d out of range (length %d)" % (i, self._len)
            )
        sp = self._spine
        while True:
            w, tree, rest = sp
            if i < w:
                break
            i -= w
            sp = rest
        while True:
            value, left, right = tree
            if i == 0:
                return value
            i -= 1
            w //= 2
            if i < w:
                tree = left
            else:
                i -= w
                tree = right

    def __len__(self):
        return self._len


_EMPTY_ENV = HashEnv()


def _rewrite_vars(t, pick):
    """Copy of t with some variables turned into global variables.

    pick(index, depth) returns the payload hash for the variable or None
    to leave it alone.  g-closed subtrees are shared, not copied; every
    entered node's visit counter goes up by one.
    """
    if t.gclosed:
        return t
    hasher = t.hasher
    work = [(0, t, 0)]
    out = []
    while work:
        done, x, d = work.pop()
        if done == 1:
            b = out.pop()
            if b is x.node.body:
                x.visits += 1
                out.append(x)
            else:
                nt = lift_node(Lam(b), hasher)
                nt.visits = x.visits + 1
                out.append(nt)
            continue
        if done == 2:
            a = out.pop()
            f = out.pop()
            if f is x.node.fn and a is x.node.arg:
                x.visits += 1
                out.append(x)
            else:
                nt = lift_node(App(f, a), hasher)
                nt.visits = x.visits + 1
                out.append(nt)
            continue
        if x.gclosed:
            out.append(x)
            continue
        node = x.node
        tp = type(node)
        if tp is Var:
            payload = pick(node.index, d)
            if payload is None:
                x.visits += 1
                out.append(x)
            else:
                g = gvar(payload, node.index, hasher)
                g.visits = x.visits + 1
                out.append(g)
        elif tp is Lam:
            work.append((1, x, d))
            work.append((0, node.body, d + 1))
        else:
            work.append((2, x, d))
            work.append((0, node.arg, d))
            work.append((0, node.fn, d))
    return out[0]


def set_hash(target, payload_hash, t):
    """Turn free occurrences of Var(target) in t into g-vars.

    The g-var keeps the variable's index (the case view is unchanged)
    but is g-closed and hashes through the payload.
    """

    def pick(i, d):
        return payload_hash if i == target + d else None

    return _rewrite_vars(t, pick)


def set_hashes(env, t):
    """Turn every free variable of t into a g-var via the environment.

    Free Var(i) at depth d takes payload env.lookup(i - d); the
    environment must cover all of them.  Result is g-closed.
    """

    def pick(i, d):
        if i >= d:
            return env.lookup(i - d)
        return None

    return _rewrite_vars(t, pick)


def calc_duplicates(root):
    """Sizes occurring more than once among comparable component subterms.

    Max-size-first sweep over the component rooted at `root` (g-closed
    children cut).  All current frontier entries of maximal size are
    popped together: a lone entry opens its children, several entries
    mark that size as duplicated and close.  Frontier entries are
    pairwise disjoint subtrees, so two entries of size s force the
    component to have size at least 2s; that halving is what bounds
    repeat visits logarithmically.
    """
    dups = set()
    heap = [(-root.size, 0, root)]
    tick = 1
    while heap:
        top = -heap[0][0]
        batch = []
        while heap and -heap[0][0] == top:
            batch.append(heapq.heappop(heap)[2])
        if len(batch) > 1:
            dups.add(top)
            continue
        node = batch[0].node
        tp = type(node)
        if tp is Lam:
            b = node.body
            if not b.gclosed:
                heapq.heappush(heap, (-b.size, tick, b))
                tick += 1
        elif tp is App:
            for c in (node.fn, node.arg):
                if not c.gclosed:
                    heapq.heappush(heap, (-c.size, tick, c))
                    tick += 1
    return dups


def globalize_naive(t):
    """Quadratic reference globalization.

    Entering a binder immediately rewrites the variables it binds into
    g-vars carrying the binder's hash, so each node below k binders is
    rebuilt up to k times.  Requires a g-closed decorated term.
    """
    if type(t) is not Term:
        raise TypeError("globalize_naive needs a decorated term")
    if not t.gclosed:
        raise NotClosed("globalization needs a closed term")
    work = [(0, t)]
    out = []
    while work:
        done, x = work.pop()
        if done == 1:
            nt = lift_node(Lam(out.pop()), x.hasher)
            nt.visits = x.visits
            out.append(nt)
            continue
        if done == 2:
            a = out.pop()
            f = out.pop()
            nt = lift_node(App(f, a), x.hasher)
            nt.visits = x.visits
            out.append(nt)
            continue
        node = x.node
        tp = type(node)
        if tp is Var:
            out.append(x)
        elif tp is Lam:
            work.append((1, x))
            work.append((0, set_hash(0, x.hash, node.body)))
        else:
            work.append((2, x))
            work.append((0, node.arg))
            work.append((0, node.fn))
    return out[0]


_GLOB = 0
_VISIT = 1
_BUILD_LAM = 2
_BUILD_APP = 3


def globalize(t):
    """O(n log n) globalization; induces the same hash partition as naive.

    Raw hash values differ from globalize_naive (the binder payload
    convention differs); only equality of hashes between positions is
    shared, and that is the contract callers may rely on.

    Work inside one component carries an environment of payload hashes
    instead of rewriting eagerly; a binder's payload pairs the component
    root's hash with the binder's own.  A child starts a fresh component
    when it is g-closed already or when its size is duplicated within
    the current component, in which case its pending variables are
    materialized first (making it g-closed).
    """
    if type(t) is not Term:
        raise TypeError("globalize needs a decorated term")
    if not t.gclosed:
        raise NotClosed("globalization needs a closed term")
    hasher = t.hasher
    work = [(_GLOB, t, None, None)]
    out = []
    while work:
        tag, x, ctx, env = work.pop()
        if tag == _GLOB:
            ctx = (x, calc_duplicates(x))
            work.append((_VISIT, x, ctx, _EMPTY_ENV))
        elif tag == _VISIT:
            node = x.node
            tp = type(node)
            if tp is Var:
                out.append(set_hashes(env, x))
            elif tp is Lam:
                root = ctx[0]
                env2 = env.push(hasher.lift_hash(App(root.hash, x.hash)))
                work.append((_BUILD_LAM, x, None, None))
                work.append(_step(node.body, ctx, env2))
            else:
                work.append((_BUILD_APP, x, None, None))
                work.append(_step(node.arg, ctx, env))
                work.append(_step(node.fn, ctx, env))
        elif tag == _BUILD_LAM:
            nt = lift_node(Lam(out.pop()), hasher)
            nt.visits = x.visits
            out.append(nt)
        else:
            a = out.pop()
            f = out.pop()
            nt = lift_node(App(f, a), hasher)
            nt.visits = x.visits
            out.append(nt)
    return out[0]


def _step(child, ctx, env):
    """Frame for a child: stay in the component or open a fresh one."""
    if child.size in ctx[1]:
        y = set_hashes(env, child)
        assert y.gclosed, "materialized duplicate must be closed"
        return (_GLOB, y, None, None)
    if child.gclosed:
        return (_GLOB, child, None, None)
    return (_VISIT, child, ctx, env)


def hash_at(t, position):
    """Hash of the globalized term at one position of t."""
    from .terms import index

    return index(globalize(t), position).hash


def reset_visits(t):
    """Zero every visit counter reachable from t."""
    stack = [t]
    while stack:
        x = stack.pop()
        x.visits = 0
        node = x.node
        tp = type(node)
        if tp is Lam:
            stack.append(node.body)
        elif tp is App:
            stack.append(node.fn)
            stack.append(node.arg)
    return t


def max_visit(t):
    """Largest visit counter reachable from t."""
    best = 0
    stack = [t]
    while stack:
        x = stack.pop()
        if x.visits > best:
            best = x.visits
        node = x.node
        tp = type(node)
        if tp is Lam:
            stack.append(node.body)
        elif tp is App:
            stack.append(node.fn)
            stack.append(node.arg)
    return best
