"""Ordinal term systems over arbitrary base orders.

Three systems share one vocabulary of immutable nodes:

* omega-exponential elements: nonincreasing tuples of base elements, read as
  a sum of omega-powers and compared lexicographically (prefixes first);
* epsilon terms over a base order X: 0, constants eps[x], omega-powers
  w^(t), and sums;
* binary-Veblen terms over index order Y and base order X: 0, constants
  c[x], applications phi(d, t) for d in Y, and sums.

Term nodes are interned: constructing the same shape twice yields the same
object, so equality is identity and terms hash in constant time.  Do not
mutate or copy term objects.

Comparison is defined on normal forms only, so the compare functions
normalize first and report EQ exactly on identical normal forms.
Normalization flattens sums, drops zero summands, absorbs any summand
strictly below its right neighbour, erases an omega-power or phi application
whose body is a constant, and erases an application wrapped around a
higher-indexed application.
"""

from __future__ import annotations

import itertools
import weakref
from typing import Callable, Iterable, Iterator, Optional

from .core import (EQ, GT, LT, ContractViolation, DomainError, EMPTY_ORDER,
                   OrderHandle)
from .notation import ORD_ZERO, OrdNotation, ord_compare, ordinal_order, parse_ordinal


def _index_repr(x) -> str:
    if isinstance(x, tuple):
        return "[" + ",".join(str(e) for e in x) + "]"
    return str(x)


class Zero:
    __slots__ = ("__weakref__",)
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = object.__new__(cls)
        return cls._instance

    def __repr__(self):
        return "0"


ZERO = Zero()


class EpsConst:
    __slots__ = ("index", "__weakref__")
    _pool: "weakref.WeakValueDictionary" = weakref.WeakValueDictionary()

    def __new__(cls, index):
        obj = cls._pool.get(index)
        if obj is None:
            obj = object.__new__(cls)
            obj.index = index
            obj = cls._pool.setdefault(index, obj)
        return obj

    def __repr__(self):
        return f"eps[{_index_repr(self.index)}]"


class OmegaPow:
    __slots__ = ("exponent", "__weakref__")
    _pool: "weakref.WeakValueDictionary" = weakref.WeakValueDictionary()

    def __new__(cls, exponent):
        key = id(exponent)
        obj = cls._pool.get(key)
        if obj is None or obj.exponent is not exponent:
            obj = object.__new__(cls)
            obj.exponent = exponent
            obj = cls._pool.setdefault(key, obj)
        return obj

    def __repr__(self):
        return f"w^({self.exponent!r})"


class PhiConst:
    __slots__ = ("index", "__weakref__")
    _pool: "weakref.WeakValueDictionary" = weakref.WeakValueDictionary()

    def __new__(cls, index):
        obj = cls._pool.get(index)
        if obj is None:
            obj = object.__new__(cls)
            obj.index = index
            obj = cls._pool.setdefault(index, obj)
        return obj

    def __repr__(self):
        return f"c[{_index_repr(self.index)}]"


class PhiApp:
    __slots__ = ("level", "body", "__weakref__")
    _pool: "weakref.WeakValueDictionary" = weakref.WeakValueDictionary()

    def __new__(cls, level, body):
        key = (level, id(body))
        obj = cls._pool.get(key)
        if obj is None or obj.body is not body:
            obj = object.__new__(cls)
            obj.level = level
            obj.body = body
            obj = cls._pool.setdefault(key, obj)
        return obj

    def __repr__(self):
        return f"phi({self.level}, {self.body!r})"


class Sum:
    __slots__ = ("parts", "__weakref__")
    _pool: "weakref.WeakValueDictionary" = weakref.WeakValueDictionary()

    def __new__(cls, parts):
        parts = tuple(parts)
        key = tuple(id(p) for p in parts)
        obj = cls._pool.get(key)
        if obj is None or any(a is not b for a, b in zip(obj.parts, parts)):
            obj = object.__new__(cls)
            obj.parts = parts
            obj = cls._pool.setdefault(key, obj)
        return obj

    def __repr__(self):
        return " + ".join(repr(p) for p in self.parts)


def summands(t) -> tuple:
    return t.parts if isinstance(t, Sum) else (t,)


def make_sum(parts: Iterable) -> object:
    parts = tuple(parts)
    if not parts:
        return ZERO
    if len(parts) == 1:
        return parts[0]
    return Sum(parts)


def subterms(t) -> Iterator:
    yield t
    if isinstance(t, Sum):
        for p in t.parts:
            yield from subterms(p)
    elif isinstance(t, OmegaPow):
        yield from subterms(t.exponent)
    elif isinstance(t, PhiApp):
        yield from subterms(t.body)


# ---------------------------------------------------------------------------
# omega-exponential elements.
# ---------------------------------------------------------------------------


def _check_nonincreasing(e: tuple, base: OrderHandle) -> None:
    for x, y in zip(e, e[1:]):
        if base.compare(x, y) == LT:
            raise ContractViolation(f"omega-exponential element not nonincreasing: {e!r}")


def omega_exp_compare(a: tuple, b: tuple, base: OrderHandle) -> int:
    """Lexicographic order on nonincreasing tuples; a proper prefix is the
    smaller element."""
    _check_nonincreasing(a, base)
    _check_nonincreasing(b, base)
    for x, y in zip(a, b):
        c = base.compare(x, y)
        if c != EQ:
            return c
    if len(a) == len(b):
        return EQ
    return LT if len(a) < len(b) else GT


def omega_exp_order(base: OrderHandle) -> OrderHandle:
    def contains(x):
        if not isinstance(x, tuple):
            return False
        if not all(base.contains(e) for e in x):
            return False
        return all(base.compare(a, b) != LT for a, b in zip(x, x[1:]))

    def elements(bound):
        pool = base.elements(bound)
        for n in range(bound + 1):
            for combo in itertools.product(pool, repeat=n):
                if all(base.compare(a, b) != LT for a, b in zip(combo, combo[1:])):
                    yield combo

    return OrderHandle("omega-exp", contains, lambda a, b: omega_exp_compare(a, b, base), elements)


def iexp_op(n: int, base: OrderHandle) -> OrderHandle:
    """n-fold omega-exponential of a base order (n = 0 is the base itself)."""
    if n < 0:
        raise DomainError("iteration count must be a natural")
    order = base
    for _ in range(n):
        order = omega_exp_order(order)
    return order


def cnf_decomposition(element: tuple, base: OrderHandle) -> tuple:
    """Run-length view: pairs (x, multiplicity) with x strictly decreasing."""
    _check_nonincreasing(element, base)
    out = []
    for x in element:
        if out and base.compare(out[-1][0], x) == EQ:
            out[-1] = (x, out[-1][1] + 1)
        else:
            out.append((x, 1))
    return tuple(out)


# ---------------------------------------------------------------------------
# epsilon terms.  A context bundles the base order with normalization and
# comparison memos; since terms are interned, both memos key on identity.
# ---------------------------------------------------------------------------


class EpsContext:
    def __init__(self, x_order: OrderHandle):
        self.X = x_order
        self._norm: dict[int, object] = {}
        self._cmp: dict[tuple, int] = {}
        self._keep: list = []  # pins memo keys' referents

    def normalize(self, t):
        key = id(t)
        out = self._norm.get(key)
        if out is None:
            out = self._normalize(t)
            self._norm[key] = out
            self._keep.append(t)
        return out

    def _normalize(self, t):
        if isinstance(t, (Zero, EpsConst)):
            return t
        if isinstance(t, OmegaPow):
            e = self.normalize(t.exponent)
            return e if isinstance(e, EpsConst) else OmegaPow(e)
        if isinstance(t, Sum):
            flat = []
            for p in t.parts:
                flat.extend(summands(self.normalize(p)))
            return self._normal_sum(flat)
        raise DomainError(f"not an epsilon-system term: {t!r}")

    def _normal_sum(self, parts):
        parts = [p for p in parts if not isinstance(p, Zero)]
        out = []
        for p in parts:
            while out and self.cmp(out[-1], p) == LT:
                out.pop()
            out.append(p)
        return make_sum(out)

    def cmp(self, t, s) -> int:
        # both normal
        if t is s:
            return EQ
        key = (id(t), id(s))
        out = self._cmp.get(key)
        if out is None:
            out = LT if self._le(t, s) else GT
            self._cmp[key] = out
            self._cmp[(key[1], key[0])] = -out
            self._keep.append((t, s))
        return out

    def _le(self, t, s) -> bool:
        # both normal, t is not s
        if isinstance(t, Zero):
            return True
        if isinstance(s, Zero):
            return False
        if isinstance(t, EpsConst):
            return any(self.X.compare(sub.index, t.index) != LT
                       for sub in subterms(s) if isinstance(sub, EpsConst))
        if isinstance(t, OmegaPow):
            s0 = summands(s)[0]
            if isinstance(s0, EpsConst):
                return self.cmp(t.exponent, s0) != GT
            if isinstance(s0, OmegaPow):
                return self.cmp(t.exponent, s0.exponent) != GT
            return False
        if isinstance(t, Sum):
            sp = summands(s)
            c = self.cmp(t.parts[0], sp[0])
            if c == LT:
                return True
            if c == EQ and len(sp) >= 2:
                return self.cmp(make_sum(t.parts[1:]), make_sum(sp[1:])) != GT
            return False
        raise DomainError(f"not an epsilon-system term: {t!r}")


def eps_normalize(t, x_order: OrderHandle):
    return EpsContext(x_order).normalize(t)


def eps_compare(t, s, x_order: OrderHandle) -> int:
    ctx = EpsContext(x_order)
    return ctx.cmp(ctx.normalize(t), ctx.normalize(s))


def eps_is_normal(t, x_order: OrderHandle) -> bool:
    try:
        return eps_normalize(t, x_order) is t
    except DomainError:
        return False


def eps_term_order(x_order: OrderHandle) -> OrderHandle:
    ctx = EpsContext(x_order)
    return OrderHandle(
        "eps-term",
        lambda t: _is_normal_in(ctx, t),
        lambda a, b: ctx.cmp(ctx.normalize(a), ctx.normalize(b)),
    )


def _is_normal_in(ctx, t) -> bool:
    try:
        return ctx.normalize(t) is t
    except DomainError:
        return False


# ---------------------------------------------------------------------------
# Veblen terms.
# ---------------------------------------------------------------------------


class PhiContext:
    def __init__(self, x_order: OrderHandle, y_order: Optional[OrderHandle] = None):
        self.X = x_order
        self.Y = y_order or ordinal_order()
        self._norm: dict[int, object] = {}
        self._cmp: dict[tuple, int] = {}
        self._keep: list = []

    def normalize(self, t):
        key = id(t)
        out = self._norm.get(key)
        if out is None:
            out = self._normalize(t)
            self._norm[key] = out
            self._keep.append(t)
        return out

    def _normalize(self, t):
        if isinstance(t, (Zero, PhiConst)):
            return t
        if isinstance(t, PhiApp):
            body = self.normalize(t.body)
            if isinstance(body, PhiConst):
                return body
            if isinstance(body, PhiApp) and self.Y.compare(body.level, t.level) == GT:
                return body
            return PhiApp(t.level, body)
        if isinstance(t, Sum):
            flat = []
            for p in t.parts:
                flat.extend(summands(self.normalize(p)))
            return self._normal_sum(flat)
        raise DomainError(f"not a phi-system term: {t!r}")

    def _normal_sum(self, parts):
        parts = [p for p in parts if not isinstance(p, Zero)]
        out = []
        for p in parts:
            while out and self.cmp(out[-1], p) == LT:
                out.pop()
            out.append(p)
        return make_sum(out)

    def cmp(self, t, s) -> int:
        if t is s:
            return EQ
        key = (id(t), id(s))
        out = self._cmp.get(key)
        if out is None:
            out = LT if self._le(t, s) else GT
            self._cmp[key] = out
            self._cmp[(key[1], key[0])] = -out
            self._keep.append((t, s))
        return out

    def _le(self, t, s) -> bool:
        if isinstance(t, Zero):
            return True
        if isinstance(s, Zero):
            return False
        if isinstance(t, PhiConst):
            return any(self.X.compare(sub.index, t.index) != LT
                       for sub in subterms(s) if isinstance(sub, PhiConst))
        if isinstance(t, PhiApp):
            s0 = summands(s)[0]
            if isinstance(s0, PhiConst):
                # constants are fixed points of every application level
                return self.cmp(t.body, s0) != GT
            if isinstance(s0, PhiApp):
                d = self.Y.compare(t.level, s0.level)
                if d == LT:
                    return self.cmp(t.body, s0) != GT
                if d == EQ:
                    return self.cmp(t.body, s0.body) != GT
                return self.cmp(t, s0.body) != GT
            return False
        if isinstance(t, Sum):
            sp = summands(s)
            c = self.cmp(t.parts[0], sp[0])
            if c == LT:
                return True
            if c == EQ and len(sp) >= 2:
                return self.cmp(make_sum(t.parts[1:]), make_sum(sp[1:])) != GT
            return False
        raise DomainError(f"not a phi-system term: {t!r}")


def phi_normalize(t, x_order: OrderHandle, y_order: Optional[OrderHandle] = None):
    return PhiContext(x_order, y_order).normalize(t)


def phi_compare(t, s, x_order: OrderHandle, y_order: Optional[OrderHandle] = None) -> int:
    ctx = PhiContext(x_order, y_order)
    return ctx.cmp(ctx.normalize(t), ctx.normalize(s))


def phi_is_normal(t, x_order: OrderHandle, y_order: Optional[OrderHandle] = None) -> bool:
    try:
        return phi_normalize(t, x_order, y_order) is t
    except DomainError:
        return False


def phi_term_order(x_order: OrderHandle, y_order: Optional[OrderHandle] = None) -> OrderHandle:
    ctx = PhiContext(x_order, y_order)
    return OrderHandle(
        "phi-term",
        lambda t: _is_normal_in(ctx, t),
        lambda a, b: ctx.cmp(ctx.normalize(a), ctx.normalize(b)),
    )


# ---------------------------------------------------------------------------
# Translations between the systems.
# ---------------------------------------------------------------------------


def omega_exp_to_phi(element: tuple):
    """An omega-exponential element as a sum of phi constants (the level-0
    system has no application symbols, so its order is exactly the
    lexicographic one)."""
    return make_sum(tuple(PhiConst(x) for x in element))


def eps_to_phi(t, level=None):
    """eps constants become phi constants, omega-powers become applications
    at the given (least) level."""
    lvl = ORD_ZERO if level is None else level
    if isinstance(t, Zero):
        return t
    if isinstance(t, EpsConst):
        return PhiConst(t.index)
    if isinstance(t, OmegaPow):
        return PhiApp(lvl, eps_to_phi(t.exponent, lvl))
    if isinstance(t, Sum):
        return Sum(tuple(eps_to_phi(p, lvl) for p in t.parts))
    raise DomainError(f"not an epsilon-system term: {t!r}")


def iso_omega_eps(entries: tuple, pivot, x_order: OrderHandle):
    """Order isomorphism from omega-exponential elements over the epsilon
    terms below pivot onto the epsilon terms below w^(pivot): the empty
    element goes to 0, and an element to the sum of omega-powers of its
    entries."""
    ctx = EpsContext(x_order)
    pn = ctx.normalize(pivot)
    prev = None
    norm_entries = []
    for s in entries:
        sn = ctx.normalize(s)
        if ctx.cmp(sn, pn) != LT:
            raise DomainError(f"entry {s!r} is not below the pivot")
        if prev is not None and ctx.cmp(prev, sn) == LT:
            raise DomainError("entries must be nonincreasing")
        prev = sn
        norm_entries.append(sn)
    if not norm_entries:
        return ZERO
    return ctx.normalize(Sum(tuple(OmegaPow(s) for s in norm_entries)))


# ---------------------------------------------------------------------------
# The index embedding: phi terms over (alpha, X) into phi terms over the sum
# order alpha + X with empty base.  Constants c[x] become applications at the
# shifted index: phi(alpha + x, 0).
# ---------------------------------------------------------------------------


def sum_order(alpha: OrdNotation, x_order: OrderHandle) -> OrderHandle:
    """Ordinals below alpha followed by a copy of X.  Elements are tagged
    pairs ('o', notation) and ('x', base element)."""

    def contains(v):
        if not isinstance(v, tuple) or len(v) != 2:
            return False
        tag, val = v
        if tag == "o":
            return isinstance(val, OrdNotation) and ord_compare(val, alpha) == LT
        if tag == "x":
            return x_order.contains(val)
        return False

    def compare(a, b):
        (ta, va), (tb, vb) = a, b
        if ta == tb == "o":
            return ord_compare(va, vb)
        if ta == tb == "x":
            return x_order.compare(va, vb)
        return LT if ta == "o" else GT

    return OrderHandle(f"sum({alpha})", contains, compare)


def embed_phi(t, alpha: OrdNotation, x_order: OrderHandle):
    tn = phi_normalize(t, x_order)

    def go(u):
        if isinstance(u, Zero):
            return u
        if isinstance(u, PhiConst):
            return PhiApp(("x", u.index), ZERO)
        if isinstance(u, PhiApp):
            return PhiApp(("o", u.level), go(u.body))
        if isinstance(u, Sum):
            return Sum(tuple(go(p) for p in u.parts))
        raise DomainError(f"not a phi-system term: {u!r}")

    return phi_normalize(go(tn), EMPTY_ORDER, sum_order(alpha, x_order))


# ---------------------------------------------------------------------------
# Text form shared by the CLI and the dumps.
# ---------------------------------------------------------------------------


class TermParseError(DomainError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


def format_term(t) -> str:
    if isinstance(t, Zero):
        return "0"
    if isinstance(t, EpsConst):
        return f"eps[{_index_repr(t.index)}]"
    if isinstance(t, PhiConst):
        return f"c[{_index_repr(t.index)}]"
    if isinstance(t, OmegaPow):
        return f"w^({format_term(t.exponent)})"
    if isinstance(t, PhiApp):
        level = t.level
        if isinstance(level, tuple) and len(level) == 2 and level[0] in ("o", "x"):
            level = f"{level[0]}:{level[1]}"
        return f"phi({level}, {format_term(t.body)})"
    if isinstance(t, Sum):
        return " + ".join(format_term(p) for p in t.parts)
    raise DomainError(f"not a term: {t!r}")


def parse_term(text: str):
    """Parse the term grammar; returns (term, system) with system one of
    'eps', 'phi', or None when only 0 and + appear."""
    s = text
    pos = 0
    system = [None]

    def fail(msg):
        raise TermParseError(msg, pos)

    def skip_ws():
        nonlocal pos
        while pos < len(s) and s[pos].isspace():
            pos += 1

    def see(tok: str) -> bool:
        return s.startswith(tok, pos)

    def eat(tok: str):
        nonlocal pos
        if not see(tok):
            fail(f"expected {tok!r}")
        pos += len(tok)

    def mark(kind):
        if system[0] is None:
            system[0] = kind
        elif system[0] != kind:
            fail("mixed epsilon- and phi-system syntax")

    def parse_nat() -> int:
        nonlocal pos
        skip_ws()
        start = pos
        while pos < len(s) and s[pos].isdigit():
            pos += 1
        if start == pos:
            fail("expected a number")
        return int(s[start:pos])

    def parse_index():
        nonlocal pos
        skip_ws()
        if see("["):
            eat("[")
            entries = []
            skip_ws()
            while not see("]"):
                entries.append(parse_nat())
                skip_ws()
                if see(","):
                    eat(",")
                    skip_ws()
            eat("]")
            return tuple(entries)
        return parse_nat()

    def parse_atom():
        nonlocal pos
        skip_ws()
        if see("eps["):
            mark("eps")
            eat("eps[")
            idx = parse_index()
            skip_ws()
            eat("]")
            return EpsConst(idx)
        if see("c["):
            mark("phi")
            eat("c[")
            idx = parse_index()
            skip_ws()
            eat("]")
            return PhiConst(idx)
        if see("w^("):
            mark("eps")
            eat("w^(")
            body = parse_expr()
            skip_ws()
            eat(")")
            return OmegaPow(body)
        if see("phi("):
            mark("phi")
            eat("phi(")
            depth = 0
            start = pos
            while pos < len(s):
                ch = s[pos]
                if ch == "(":
                    depth += 1
                elif ch == ")":
                    if depth == 0:
                        fail("expected ',' in phi(...)")
                    depth -= 1
                elif ch == "," and depth == 0:
                    break
                pos += 1
            if pos >= len(s):
                fail("expected ',' in phi(...)")
            level = parse_ordinal(s[start:pos])
            eat(",")
            body = parse_expr()
            skip_ws()
            eat(")")
            return PhiApp(level, body)
        if see("0") and not (pos + 1 < len(s) and s[pos + 1].isdigit()):
            eat("0")
            return ZERO
        fail("expected a term")

    def parse_expr():
        nonlocal pos
        acc = [parse_atom()]
        while True:
            skip_ws()
            if not see("+"):
                break
            eat("+")
            acc.append(parse_atom())
        return make_sum(acc) if len(acc) > 1 else acc[0]

    value = parse_expr()
    skip_ws()
    if pos != len(s):
        fail("trailing input")
    return value, system[0]
