"""Hash back-ends for decorated terms.

Two interchangeable back-ends sit behind the same small interface:

* `FastHasher`: 64-bit mixing, constant size hashes, collision
  probability around n^2 / 2**64 for n distinct inputs.  Default.
* `ExactHasher`: an interning table handing out consecutive ids, so
  equal hash really means equal g-term.  Hash values are only
  meaningful relative to the table that produced them; mixing tables
  raises ModeMismatch downstream via the hasher identity check.

The interface consumed by the term layer:

* lift_hash(node): node is Lam/App over child hashes or a plain Var;
* hash_gvar(payload_hash): hash of a global variable with the given
  payload; lives in a key space disjoint from lift_hash's;
* format(h): printable form (16 lowercase hex digits / decimal id).

`gterm_of` recovers the full g-term behind an exact hash, giving the
explicit-tree view of what a hash value denotes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ModeMismatch
from .terms import App, Lam, Var

_M64 = (1 << 64) - 1
_MISSING = 0x9E3779B97F4A7C15
_TAG_LAM = 0xA1
_TAG_APP = 0xA2
_TAG_VAR = 0xA3
_TAG_GVAR = 0xA4


def mix64(x):
    """splitmix64 finalizer; bijective on 64-bit words."""
    x &= _M64
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & _M64
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & _M64
    x ^= x >> 31
    return x


def _combine(tag, left, right):
    return mix64(tag ^ mix64(left ^ mix64(right)))


class FastHasher:
    """Stateless 64-bit structural hashing."""

    exact = False

    def lift_hash(self, node):
        tp = type(node)
        if tp is Var:
            return _combine(_TAG_VAR, mix64(node.index ^ _TAG_VAR), _MISSING)
        if tp is Lam:
            return _combine(_TAG_LAM, node.body, _MISSING)
        return _combine(_TAG_APP, node.fn, node.arg)

    def hash_gvar(self, payload_hash):
        return _combine(_TAG_GVAR, payload_hash, _MISSING)

    def format(self, h):
        return "%016x" % h


@dataclass(frozen=True, slots=True)
class GVar:
    """Leaf of a recovered g-term: a global variable's payload g-term."""

    payload: object


class ExactHasher:
    """Interning back-end: hashes are ids into a private table.

    Children are always interned before parents, so every id's entry
    refers only to smaller ids and `gterm_of` can rebuild iteratively.
    """

    exact = True

    def __init__(self):
        self._ids = {}
        self._entries = []
        self._gterms = []

    def _intern(self, key):
        h = self._ids.get(key)
        if h is None:
            h = len(self._entries)
            self._ids[key] = h
            self._entries.append(key)
            self._gterms.append(None)
        return h

    def lift_hash(self, node):
        tp = type(node)
        if tp is Var:
            return self._intern(("V", node.index))
        if tp is Lam:
            return self._intern(("L", node.body))
        return self._intern(("A", node.fn, node.arg))

    def hash_gvar(self, payload_hash):
        return self._intern(("G", payload_hash))

    def format(self, h):
        return str(h)

    def __len__(self):
        return len(self._entries)

    def gterm_of(self, h):
        """The g-term an id denotes, as Lam/App/Var trees over GVar leaves."""
        if not (0 <= h < len(self._entries)):
            raise ModeMismatch("hash %r was not issued by this back-end" % (h,))
        pending = [h]
        while pending:
            k = pending[-1]
            if self._gterms[k] is not None:
                pending.pop()
                continue
            entry = self._entries[k]
            tag = entry[0]
            if tag == "V":
                self._gterms[k] = Var(entry[1])
                pending.pop()
                continue
            deps = entry[1:]
            ready = True
            for d in deps:
                if self._gterms[d] is None:
                    pending.append(d)
                    ready = False
            if not ready:
                continue
            pending.pop()
            if tag == "L":
                self._gterms[k] = Lam(self._gterms[deps[0]])
            elif tag == "A":
                self._gterms[k] = App(self._gterms[deps[0]], self._gterms[deps[1]])
            else:
                self._gterms[k] = GVar(self._gterms[deps[0]])
        return self._gterms[h]


def gterm_of_exact(hasher, h):
    """gterm_of with a mode check usable on an unknown back-end."""
    if not getattr(hasher, "exact", False):
        raise ModeMismatch("recovering g-terms needs the exact back-end")
    return hasher.gterm_of(h)
