"""Finite strings of naturals, their order-monotone numeric coding, trees,
the Kleene-Brouwer order, and generic linear-order / stream handles.

Strings are plain tuples of non-negative ints.  The coding is a bijection
between strings and naturals under which proper extension strictly increases
the code, so codes of the prefixes of an infinite sequence form a strictly
increasing chain.  Codes stay compact: the code of a string costs a small
constant factor over the binary sizes of its entries, which keeps iterated
constructions (strings whose entries are codes of other strings, several
levels deep) representable.
"""

from __future__ import annotations

import itertools
import json
from typing import Callable, Iterable, Iterator, Optional

LT, EQ, GT = -1, 0, 1

_CMP_NAMES = {LT: "LT", EQ: "EQ", GT: "GT"}


def cmp_name(c: int) -> str:
    return _CMP_NAMES[c]


class DomainError(ValueError):
    """A precondition on an operation's arguments was violated."""


class ContractViolation(RuntimeError):
    """An input promised by contract (descending stream, sound oracle, sorted
    element) turned out to misbehave."""


FiniteString = tuple


def as_string(value: Iterable[int]) -> FiniteString:
    sigma = tuple(value)
    for x in sigma:
        if not isinstance(x, int) or x < 0:
            raise DomainError(f"string entries must be naturals, got {x!r}")
    return sigma


def prefix_of(sigma: FiniteString, tau: FiniteString) -> bool:
    """sigma is an initial segment of tau (allowing equality)."""
    return len(sigma) <= len(tau) and tau[: len(sigma)] == sigma


def last_singleton(sigma: FiniteString) -> FiniteString:
    """The length-one string holding sigma's last entry."""
    if not sigma:
        raise DomainError("last_singleton of the empty string")
    return (sigma[-1],)


def all_strings(alphabet: Iterable[int], max_len: int) -> Iterator[FiniteString]:
    letters = tuple(alphabet)
    for n in range(max_len + 1):
        yield from itertools.product(letters, repeat=n)


# ---------------------------------------------------------------------------
# String <-> natural coding.
#
# A string is flattened to a digit word over {0,1,2}: each entry in bijective
# binary (digits 0/1, empty word for 0), entries joined by the digit 2.  The
# word is then read as a bijective base-3 numeral, shifted by one so the empty
# string gets code 0.  Every natural decodes (split the word on 2s), extension
# appends digits and longer words denote larger numerals, so the map is a
# bijection with code(sigma) < code(tau) whenever sigma is a proper prefix of
# tau.
# ---------------------------------------------------------------------------

_POW3: dict[int, int] = {0: 1, 1: 3}


def _pow3(e: int) -> int:
    v = _POW3.get(e)
    if v is None:
        half = _pow3(e >> 1)
        v = half * half
        if e & 1:
            v *= 3
        _POW3[e] = v
    return v


def _min3(m: int) -> int:
    # least value whose bijective base-3 numeral has m digits
    return (_pow3(m) - 1) // 2


def _word_value(word: bytes, lo: int, hi: int) -> int:
    n = hi - lo
    if n <= 48:
        v = 0
        for i in range(lo, hi):
            v = 3 * v + word[i] + 1
        return v
    mid = lo + n // 2
    return _word_value(word, lo, mid) * _pow3(hi - mid) + _word_value(word, mid, hi)


def _word_of_value(v: int) -> bytes:
    if v == 0:
        return b""
    lo, hi = 1, 2
    while _min3(hi) <= v:
        hi *= 2
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if _min3(mid) <= v:
            lo = mid
        else:
            hi = mid
    m = lo
    out = bytearray(m)
    def fill(value: int, a: int, b: int) -> None:
        n = b - a
        if n <= 48:
            for i in range(b - 1, a - 1, -1):
                value, r = divmod(value, 3)
                out[i] = r
            return
        mid = a + n // 2
        q, r = divmod(value, _pow3(b - mid))
        fill(q, a, mid)
        fill(r, mid, b)
    fill(v - _min3(m), 0, m)
    return bytes(out)


_BYTE_BITS = [bytes((b >> (7 - i)) & 1 for i in range(8)) for b in range(256)]


def _entry_word(x: int) -> bytes:
    """Bijective binary digit word of a natural (empty for 0)."""
    j = (x + 1).bit_length() - 1
    if j == 0:
        return b""
    rem = x - ((1 << j) - 1)
    raw = rem.to_bytes((j + 7) // 8, "big")
    bits = b"".join(_BYTE_BITS[b] for b in raw)
    return bits[len(bits) - j:]


def _entry_value(word: bytes) -> int:
    j = len(word)
    if j == 0:
        return 0
    pad = (-j) % 8
    buf = bytearray((j + pad) // 8)
    acc = 0
    k = pad
    for d in word:
        acc = (acc << 1) | d
        k += 1
        if k % 8 == 0:
            buf[k // 8 - 1] = acc
            acc = 0
    return int.from_bytes(bytes(buf), "big") + ((1 << j) - 1)


def encode_string(sigma: Iterable[int]) -> int:
    """Numeric code of a finite string; bijective and prefix-monotone."""
    sigma = as_string(sigma)
    if not sigma:
        return 0
    word = b"\x02".join(_entry_word(x) for x in sigma)
    return _word_value(word, 0, len(word)) + 1


def decode_string(code: int) -> FiniteString:
    """Inverse of encode_string; total on the naturals."""
    if not isinstance(code, int) or code < 0:
        raise DomainError(f"codes are naturals, got {code!r}")
    if code == 0:
        return ()
    word = _word_of_value(code - 1)
    return tuple(_entry_value(part) for part in word.split(b"\x02"))


# ---------------------------------------------------------------------------
# Kleene-Brouwer order: extensions sit below their prefixes, siblings compare
# by their first differing entry.  The empty string is the maximum.
# ---------------------------------------------------------------------------


def kb_compare(sigma: FiniteString, tau: FiniteString) -> int:
    for a, b in zip(sigma, tau):
        if a != b:
            return LT if a < b else GT
    if len(sigma) == len(tau):
        return EQ
    return LT if len(sigma) > len(tau) else GT


# ---------------------------------------------------------------------------
# Trees: decidable membership plus an optional node enumerator so tests and
# dumps can walk an initial portion.  Jump trees are infinite but have
# decidable membership, hence the intensional representation.
# ---------------------------------------------------------------------------


class Tree:
    def __init__(
        self,
        contains: Callable[[FiniteString], bool],
        nodes: Optional[Callable[[int], Iterable[FiniteString]]] = None,
        name: str = "",
    ):
        self._contains = contains
        self._nodes = nodes
        self.name = name

    def __contains__(self, sigma: Iterable[int]) -> bool:
        return bool(self._contains(tuple(sigma)))

    def nodes(self, bound: int) -> list[FiniteString]:
        """Distinct member nodes reachable within the enumeration bound."""
        if self._nodes is None:
            raise DomainError(f"tree {self.name or '?'} has no enumerator")
        seen = []
        have = set()
        for node in self._nodes(bound):
            node = tuple(node)
            if node not in have and node in self:
                have.add(node)
                seen.append(node)
        return seen

    @staticmethod
    def from_nodes(nodes: Iterable[Iterable[int]], check: bool = True) -> "Tree":
        node_set = {tuple(n) for n in nodes}
        node_set.add(())
        if check:
            for n in node_set:
                for t in range(len(n)):
                    if n[:t] not in node_set:
                        raise DomainError(f"node set not prefix-closed at {n!r}")
        return Tree(lambda s: s in node_set, lambda bound: sorted(node_set, key=lambda n: (len(n), n)))


def full_tree(arity: int) -> Tree:
    return Tree(
        lambda s: all(0 <= e < arity for e in s),
        lambda bound: all_strings(range(arity), bound),
        name=f"full({arity})",
    )


def prefix_tree(stream: "StreamHandle") -> Tree:
    """The tree whose only path is the given stream."""
    return Tree(
        lambda s: s == stream.prefix(len(s)),
        lambda bound: (stream.prefix(n) for n in range(bound + 1)),
        name="prefixes",
    )


def empty_tree() -> Tree:
    return Tree(lambda s: False, lambda bound: (), name="empty")


def tree_restrict(tree: Tree, sigma: Iterable[int]) -> Tree:
    """Nodes comparable with sigma: its prefixes and its extensions."""
    sigma = tuple(sigma)
    def member(rho: FiniteString) -> bool:
        return rho in tree and (prefix_of(rho, sigma) or prefix_of(sigma, rho))
    nodes = None
    if tree._nodes is not None:
        nodes = lambda bound: (n for n in tree.nodes(bound) if member(n))
    return Tree(member, nodes, name=f"{tree.name}|{sigma}")


def tree_to_json(tree: Tree, bound: int) -> str:
    nodes = sorted(tree.nodes(bound), key=lambda n: (len(n), n))
    return json.dumps({"nodes": [list(n) for n in nodes]})


def tree_from_json(text: str) -> Tree:
    data = json.loads(text)
    return Tree.from_nodes(tuple(n) for n in data["nodes"])


# ---------------------------------------------------------------------------
# Streams: deterministic infinite sequences queried by index.
# ---------------------------------------------------------------------------


class StreamHandle:
    """A total function from indices to values; queries are memoized so
    repeated reads agree even for expensively computed streams."""

    def __init__(self, fn: Callable[[int], int], name: str = ""):
        self._fn = fn
        self._memo: dict[int, int] = {}
        self.name = name

    def at(self, n: int) -> int:
        v = self._memo.get(n)
        if v is None and n not in self._memo:
            v = self._fn(n)
            self._memo[n] = v
        return v

    def prefix(self, n: int) -> FiniteString:
        return tuple(self.at(i) for i in range(n))

    @staticmethod
    def constant(value: int) -> "StreamHandle":
        return StreamHandle(lambda n: value, name=f"const:{value}")

    @staticmethod
    def cyclic(values: Iterable[int]) -> "StreamHandle":
        vals = tuple(values)
        if not vals:
            raise DomainError("cyclic stream needs at least one value")
        return StreamHandle(lambda n: vals[n % len(vals)], name="cyclic:" + ",".join(map(str, vals)))


# ---------------------------------------------------------------------------
# Linear-order handles: a decidable carrier plus a total comparison.  The
# carrier elements may be naturals, tree nodes, or ordinal terms; everything
# downstream only ever calls contains/compare/elements.
# ---------------------------------------------------------------------------


class OrderHandle:
    def __init__(
        self,
        kind: str,
        contains: Callable[[object], bool],
        compare: Callable[[object, object], int],
        elements: Optional[Callable[[int], Iterable[object]]] = None,
    ):
        self.kind = kind
        self._contains = contains
        self._compare = compare
        self._elements = elements

    def contains(self, x: object) -> bool:
        return bool(self._contains(x))

    def compare(self, a: object, b: object) -> int:
        return self._compare(a, b)

    def elements(self, bound: int) -> list[object]:
        if self._elements is None:
            raise DomainError(f"order {self.kind} has no enumerator")
        return list(self._elements(bound))


def _int_cmp(a: int, b: int) -> int:
    return LT if a < b else GT if a > b else EQ


EMPTY_ORDER = OrderHandle("empty", lambda x: False,
                          lambda a, b: (_ for _ in ()).throw(DomainError("empty order")),
                          lambda bound: ())


def nat_order() -> OrderHandle:
    return OrderHandle("nat", lambda x: isinstance(x, int) and x >= 0, _int_cmp,
                       lambda bound: range(bound))


def fin_order(k: int) -> OrderHandle:
    return OrderHandle(f"fin:{k}", lambda x: isinstance(x, int) and 0 <= x < k, _int_cmp,
                       lambda bound: range(min(k, bound)))


def kb_tree_order(tree: Tree) -> OrderHandle:
    return OrderHandle(
        "kb-tree",
        lambda x: isinstance(x, tuple) and x in tree,
        kb_compare,
        (lambda bound: tree.nodes(bound)) if tree._nodes is not None else None,
    )


def order_restrict(order: OrderHandle, top: object) -> OrderHandle:
    """The suborder of elements strictly below a pivot element."""
    if not order.contains(top):
        raise DomainError("restriction pivot lies outside the carrier")
    return OrderHandle(
        order.kind + "|cut",
        lambda x: order.contains(x) and order.compare(x, top) == LT,
        order.compare,
        None if order._elements is None
        else (lambda bound: (x for x in order.elements(bound) if order.compare(x, top) == LT)),
    )


# ---------------------------------------------------------------------------
# Fueled extraction of a branch from a KB-descending stream of tree nodes.
# The full extraction needs the jump of the stream, so within finite fuel we
# return the longest prefix on which the scanned tail has settled; larger
# fuel can only extend the answer for an honestly descending stream.
# ---------------------------------------------------------------------------


def kb_descending_to_path(tree: Tree, stream: StreamHandle, fuel: int) -> FiniteString:
    if fuel <= 0:
        return ()
    values: list[FiniteString] = []
    for k in range(fuel):
        v = tuple(stream.at(k))
        if v not in tree:
            raise ContractViolation(f"stream value {v!r} is not a node of the tree")
        if values and kb_compare(v, values[-1]) != LT:
            raise ContractViolation("stream is not strictly KB-descending")
        values.append(v)
    last = values[-1]
    for m in range(min(fuel, len(last)), -1, -1):
        sigma = last[:m]
        first = next(k for k, v in enumerate(values) if prefix_of(sigma, v))
        if all(prefix_of(sigma, values[k]) for k in range(first, fuel)):
            return sigma
    return ()
