"""de Bruijn lambda-term core: node shapes, positions, decorated terms.

Terms come in two layers sharing the same three node dataclasses:

* plain syntax trees ("pure terms"): Lam/App/Var nested directly, as
  produced by the parser and the generators;
* decorated terms: `Term` wrappers that cache size, a free-variable
  bound, a hash from a hash back-end, and an optional global-variable
  payload.  All decorated-term constructors go through `lift_node`,
  `gvar` or `from_pure`.

A position is a tuple of step characters 'D' (down, under a Lam),
'L' (left, into an App function) and 'R' (right, into an App argument).
The empty tuple is the root.  Position streams are generators; nothing
here materializes a position set.

Everything that may run on deep terms (the linear family reaches depth
around 10**6) is written with explicit stacks, not recursion.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    IndexOutOfRange,
    ModeMismatch,
    NotClosed,
    NotLocallyClosed,
    PositionInvalid,
)

DOWN = "D"
LEFT = "L"
RIGHT = "R"
ROOT = ()


@dataclass(frozen=True, slots=True)
class Lam:
    """Binder node; `body` is a term, a decorated term, or a hash."""

    body: object


@dataclass(frozen=True, slots=True)
class App:
    """Application node; payload type as for Lam."""

    fn: object
    arg: object


@dataclass(frozen=True, slots=True)
class Var:
    """Variable occurrence, index counts binders up to its Lam."""

    index: int

    def __post_init__(self):
        if self.index < 0:
            raise ValueError("variable index must be nonnegative")


def lam_count(position):
    """Number of D steps in `position` (binders crossed)."""
    return position.count(DOWN)


def node_children(node):
    tp = type(node)
    if tp is Lam:
        return (node.body,)
    if tp is App:
        return (node.fn, node.arg)
    return ()


class Term:
    """Decorated term node.

    Fields: `node` (Lam/App/Var over Term children), `size` (node
    count), `free_bound` (1 + largest free non-g variable index, 0 when
    g-closed), `hash` (back-end handle), `gvar_payload` (payload hash
    when this node was built by `gvar`, else None), `hasher` (the
    back-end the hash came from), `visits` (mutable instrumentation
    counter, excluded from any notion of equality).

    Instances are immutable apart from `visits`; equality is identity.
    """

    __slots__ = ("node", "size", "free_bound", "hash", "gvar_payload", "hasher", "visits")

    def __init__(self, node, size, free_bound, hash_, gvar_payload, hasher):
        self.node = node
        self.size = size
        self.free_bound = free_bound
        self.hash = hash_
        self.gvar_payload = gvar_payload
        self.hasher = hasher
        self.visits = 0

    @property
    def gclosed(self):
        return self.free_bound == 0

    @property
    def is_gvar(self):
        return self.gvar_payload is not None

    def __repr__(self):
        kind = type(self.node).__name__
        if self.is_gvar:
            kind = "GVar/%d" % self.node.index
        return "<Term %s size=%d fb=%d h=%s>" % (
            kind,
            self.size,
            self.free_bound,
            self.hasher.format(self.hash),
        )


def case_node(t):
    """Inverse of lift_node: the node with this term's direct children."""
    return t.node


def lift_node(node, hasher):
    """Wrap one node layer (children already decorated) into a Term."""
    tp = type(node)
    if tp is Var:
        return Term(node, 1, node.index + 1, hasher.lift_hash(node), None, hasher)
    if tp is Lam:
        b = node.body
        if b.hasher is not hasher:
            raise ModeMismatch("child decorated by a different hash back-end")
        fb = b.free_bound - 1
        if fb < 0:
            fb = 0
        return Term(node, 1 + b.size, fb, hasher.lift_hash(Lam(b.hash)), None, hasher)
    f, a = node.fn, node.arg
    if f.hasher is not hasher or a.hasher is not hasher:
        raise ModeMismatch("child decorated by a different hash back-end")
    fb = f.free_bound if f.free_bound >= a.free_bound else a.free_bound
    return Term(
        node,
        1 + f.size + a.size,
        fb,
        hasher.lift_hash(App(f.hash, a.hash)),
        None,
        hasher,
    )


def gvar(payload_hash, index, hasher):
    """Global variable: cases to Var(index) but is closed, hash from payload."""
    if index < 0:
        raise ValueError("variable index must be nonnegative")
    return Term(Var(index), 1, 0, hasher.hash_gvar(payload_hash), payload_hash, hasher)


def from_pure(pt, hasher):
    """Decorate a pure term bottom-up with Merkle-style structural hashes."""
    work = [(0, pt)]
    out = []
    while work:
        done, x = work.pop()
        if done:
            if type(x) is Lam:
                b = out.pop()
                out.append(lift_node(Lam(b), hasher))
            else:
                a = out.pop()
                f = out.pop()
                out.append(lift_node(App(f, a), hasher))
            continue
        tp = type(x)
        if tp is Var:
            out.append(lift_node(x, hasher))
        elif tp is Lam:
            work.append((1, x))
            work.append((0, x.body))
        else:
            work.append((1, x))
            work.append((0, x.arg))
            work.append((0, x.fn))
    return out[0]


def to_pure(t):
    """Strip decorations; g-vars come back as their underlying Var."""
    work = [(0, t)]
    out = []
    while work:
        done, x = work.pop()
        if done:
            if type(x) is Lam:
                out.append(Lam(out.pop()))
            else:
                a = out.pop()
                f = out.pop()
                out.append(App(f, a))
            continue
        node = x.node if type(x) is Term else x
        tp = type(node)
        if tp is Var:
            out.append(node)
        elif tp is Lam:
            work.append((1, node))
            work.append((0, node.body))
        else:
            work.append((1, node))
            work.append((0, node.arg))
            work.append((0, node.fn))
    return out[0]


def _node_of(t):
    return t.node if type(t) is Term else t


def index(t, position):
    """Subterm of t at `position`; PositionInvalid when the path leaves t.

    g-vars are leaves: any step from one is invalid.  Works on both
    pure and decorated terms and returns the same flavor it was given.
    """
    cur = t
    for depth, step in enumerate(position):
        node = _node_of(cur)
        tp = type(node)
        if step == DOWN and tp is Lam:
            cur = node.body
        elif step == LEFT and tp is App:
            cur = node.fn
        elif step == RIGHT and tp is App:
            cur = node.arg
        else:
            raise PositionInvalid(
                position, "step %r does not apply at depth %d" % (step, depth)
            )
    return cur


def iter_positions(t):
    """Preorder stream of (position, subterm) pairs; function before argument."""
    # Pending entries hold linked step chains, not tuples: siblings share
    # their prefix, so retained memory stays O(size) on left-deep terms.
    stack = [(None, t)]
    while stack:
        chain, cur = stack.pop()
        steps = []
        link = chain
        while link is not None:
            steps.append(link[0])
            link = link[1]
        steps.reverse()
        yield tuple(steps), cur
        node = _node_of(cur)
        tp = type(node)
        if tp is Lam:
            stack.append(((DOWN, chain), node.body))
        elif tp is App:
            stack.append(((RIGHT, chain), node.arg))
            stack.append(((LEFT, chain), node.fn))


def iter_subterms(t):
    """Preorder stream of subterms alone; cheaper than iter_positions.

    Runs in O(size) total even on very deep terms, since no position
    tuples are materialized.
    """
    stack = [t]
    while stack:
        cur = stack.pop()
        yield cur
        node = _node_of(cur)
        tp = type(node)
        if tp is Lam:
            stack.append(node.body)
        elif tp is App:
            stack.append(node.arg)
            stack.append(node.fn)


def valid_positions(t):
    """Preorder stream of every position of t."""
    for pos, _ in iter_positions(t):
        yield pos


def var_positions(t):
    """Positions holding a variable occurrence; g-vars do not count."""
    for pos, cur in iter_positions(t):
        if type(cur) is Term:
            if type(cur.node) is Var and cur.gvar_payload is None:
                yield pos
        elif type(cur) is Var:
            yield pos


def free_positions(t):
    """Variable positions whose index escapes every binder above them."""
    for pos, cur in iter_positions(t):
        node = _node_of(cur)
        if type(node) is Var:
            if type(cur) is Term and cur.gvar_payload is not None:
                continue
            if node.index >= lam_count(pos):
                yield pos


def bound_positions(t):
    """Variable positions bound by some Lam of t itself."""
    for pos, cur in iter_positions(t):
        node = _node_of(cur)
        if type(node) is Var:
            if type(cur) is Term and cur.gvar_payload is not None:
                continue
            if node.index < lam_count(pos):
                yield pos


def locally_closed(t, position):
    """True when no free variable of t[position] is captured inside t.

    Every variable free in the subterm must also be free in t; i.e. no
    index points at a binder strictly between the root and `position`.
    """
    sub = index(t, position)
    outer = lam_count(position)
    if outer == 0:
        return True
    for qpos, cur in iter_positions(sub):
        node = _node_of(cur)
        if type(node) is Var:
            if type(cur) is Term and cur.gvar_payload is not None:
                continue
            d = lam_count(qpos)
            if d <= node.index < d + outer:
                return False
    return True


def _rebuild(sub, var_fn, hasher):
    """Post-order rebuild of `sub` with Var leaves mapped through var_fn.

    var_fn(index, depth) returns a replacement index (pure realm) and is
    never called on g-vars.  Shared helper for lift_out and shifting.
    """
    decorated = type(sub) is Term
    work = [(0, sub, 0)]
    out = []
    while work:
        done, x, d = work.pop()
        if done:
            if done == 1:
                b = out.pop()
                node = Lam(b)
            else:
                a = out.pop()
                f = out.pop()
                node = App(f, a)
            out.append(lift_node(node, hasher) if decorated else node)
            continue
        if decorated and x.gclosed:
            out.append(x)
            continue
        node = _node_of(x)
        tp = type(node)
        if tp is Var:
            ni = var_fn(node.index, d)
            if ni == node.index:
                out.append(x)
            elif decorated:
                out.append(lift_node(Var(ni), hasher))
            else:
                out.append(Var(ni))
        elif tp is Lam:
            work.append((1, x, d))
            work.append((0, node.body, d + 1))
        else:
            work.append((2, x, d))
            work.append((0, node.arg, d))
            work.append((0, node.fn, d))
    return out[0]


def lift_out(t, position):
    """t[position] with free indices re-based to the subterm's own root.

    Inverse of pasting the subterm back under lam_count(position)
    binders; raises NotLocallyClosed when a variable would dangle.
    """
    sub = index(t, position)
    k = lam_count(position)
    if k == 0:
        return sub
    if type(sub) is Term:
        if sub.gclosed:
            return sub
        hasher = sub.hasher
    else:
        hasher = None

    def drop(i, d):
        if i < d:
            return i
        ni = i - k
        if ni < d:
            raise NotLocallyClosed(
                "variable %d at depth %d is bound between the root and the subterm"
                % (i, d)
            )
        return ni

    return _rebuild(sub, drop, hasher)


def _shift(u, by, hasher):
    """Free indices of u raised by `by` (capture adjustment for subst)."""
    if by == 0 or (type(u) is Term and u.gclosed):
        return u

    def raise_free(i, d):
        return i + by if i >= d else i

    return _rebuild(u, raise_free, hasher)


def subst(t, target, u):
    """Capture-avoiding substitution t[target := u] on decorated terms.

    Free occurrences of `target` become u (shifted per crossing depth);
    free indices above `target` are decremented, filling the hole the
    substituted variable leaves behind.  g-vars are never traversed.
    """
    hasher = t.hasher
    if u.hasher is not hasher:
        raise ModeMismatch("substituting across hash back-ends")
    work = [(0, t, 0)]
    out = []
    while work:
        done, x, d = work.pop()
        if done:
            if done == 1:
                node = Lam(out.pop())
            else:
                a = out.pop()
                f = out.pop()
                node = App(f, a)
            nt = lift_node(node, hasher)
            nt.visits = x.visits
            out.append(nt)
            continue
        if x.gclosed:
            out.append(x)
            continue
        node = x.node
        tp = type(node)
        if tp is Var:
            i = node.index
            if i == target + d:
                out.append(_shift(u, d, hasher))
            elif i > target + d:
                out.append(lift_node(Var(i - 1), hasher))
            else:
                out.append(x)
        elif tp is Lam:
            work.append((1, x, d))
            work.append((0, node.body, d + 1))
        else:
            work.append((2, x, d))
            work.append((0, node.arg, d))
            work.append((0, node.fn, d))
    return out[0]


def subst_list(t, sigma):
    """Simultaneous total substitution: free Var(i) becomes sigma[i].

    Every free variable must be covered (IndexOutOfRange otherwise);
    bound variables and g-vars are untouched.
    """
    hasher = t.hasher
    for u in sigma:
        if u.hasher is not hasher:
            raise ModeMismatch("substituting across hash back-ends")
    work = [(0, t, 0)]
    out = []
    while work:
        done, x, d = work.pop()
        if done:
            if done == 1:
                node = Lam(out.pop())
            else:
                a = out.pop()
                f = out.pop()
                node = App(f, a)
            nt = lift_node(node, hasher)
            nt.visits = x.visits
            out.append(nt)
            continue
        if x.gclosed:
            out.append(x)
            continue
        node = x.node
        tp = type(node)
        if tp is Var:
            i = node.index
            if i >= d:
                k = i - d
                if k >= len(sigma):
                    raise IndexOutOfRange(
                        "free variable %d has no entry in a %d-long substitution"
                        % (k, len(sigma))
                    )
                out.append(_shift(sigma[k], d, hasher))
            else:
                out.append(x)
        elif tp is Lam:
            work.append((1, x, d))
            work.append((0, node.body, d + 1))
        else:
            work.append((2, x, d))
            work.append((0, node.arg, d))
            work.append((0, node.fn, d))
    return out[0]


def scc_positions(t):
    """Positions reachable from the root through open subterms only.

    The root always belongs; a nonempty position belongs exactly when
    every nonempty prefix (itself included) denotes a non-g-closed
    subterm.  `t` must be a g-closed decorated term.
    """
    if type(t) is not Term:
        raise TypeError("scc_positions needs a decorated term")
    if not t.gclosed:
        raise NotClosed("scc root must be g-closed")
    yield ROOT
    stack = []
    node = t.node
    tp = type(node)
    if tp is Lam:
        stack.append(((DOWN,), node.body))
    elif tp is App:
        stack.append(((RIGHT,), node.arg))
        stack.append(((LEFT,), node.fn))
    while stack:
        pos, cur = stack.pop()
        if cur.gclosed:
            continue
        yield pos
        node = cur.node
        tp = type(node)
        if tp is Lam:
            stack.append((pos + (DOWN,), node.body))
        elif tp is App:
            stack.append((pos + (RIGHT,), node.arg))
            stack.append((pos + (LEFT,), node.fn))


def pure_equal(a, b):
    """Structural equality of pure terms without recursion."""
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        if x is y:
            continue
        tx = type(x)
        if tx is not type(y):
            return False
        if tx is Var:
            if x.index != y.index:
                return False
        elif tx is Lam:
            stack.append((x.body, y.body))
        else:
            stack.append((x.arg, y.arg))
            stack.append((x.fn, y.fn))
    return True


def term_size(t):
    """Node count of a pure term (decorated terms cache it in .size)."""
    if type(t) is Term:
        return t.size
    n = 0
    stack = [t]
    while stack:
        x = stack.pop()
        n += 1
        tp = type(x)
        if tp is Lam:
            stack.append(x.body)
        elif tp is App:
            stack.append(x.fn)
            stack.append(x.arg)
    return n
