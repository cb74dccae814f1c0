"""Monotone maps from tree nodes into ordinal term systems, and the
extraction of base-order descent from exponential descent.

The base map sends a node sigma (with jump J and convergence predicate conv)
to the omega-exponential element

    sum over i < |J(sigma)|, conv(i, sigma) false, of  w^(J(sigma)[:i])
    plus  w^(J(sigma)) twice,

with w^(empty node) three times at the root.  Relabeling the exponents
through a map g gives the iterable form; threading that construction along
omega-jump strings produces epsilon terms, and along w^alpha-jump strings
produces Veblen terms.  Each version is strictly order-reversing from the
extension order on nodes, which is what makes the witness sequences strictly
descending.

The extraction runs the two-counter recursion on the run-length
decompositions of a descending stream of omega-exponential elements: advance
to a later element whose current column drops lexicographically, otherwise
move one column right, and record the base-order coordinate whenever it
strictly drops.  The one existential question the recursion asks is
delegated to an oracle object.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .core import (EQ, GT, LT, ContractViolation, DomainError, FiniteString,
                   OrderHandle, StreamHandle, Tree, as_string, prefix_tree)
from .jump import jump_order, jump_string
from .machine import DiagonalSemantics
from .notation import ORD_ZERO, OrdNotation, fundamental_seq, ordinal_order
from .terms import (EpsConst, OmegaPow, PhiApp, PhiConst, Sum,
                    cnf_decomposition, eps_normalize, make_sum,
                    omega_exp_to_phi, phi_normalize)


@dataclass
class MonotoneMap:
    """A total relabeling of tree nodes into an ordered codomain; expected to
    be strictly order-reversing for node extension."""

    eval: Callable[[FiniteString], object]
    domain: Optional[Tree] = None
    codomain: Optional[OrderHandle] = None

    def __call__(self, node: FiniteString):
        if self.domain is not None and node not in self.domain:
            raise DomainError(f"node {node!r} outside the map's domain")
        return self.eval(node)


def identity_map(codomain: OrderHandle) -> MonotoneMap:
    return MonotoneMap(lambda node: node, codomain=codomain)


def _as_map(g) -> MonotoneMap:
    if isinstance(g, MonotoneMap):
        return g
    return MonotoneMap(g)


def h_base(semantics: DiagonalSemantics, tree: Optional[Tree], sigma) -> tuple:
    """The node-to-exponential map with identity relabeling; exponents are
    jump-tree nodes in KB-decreasing order."""
    sigma = as_string(sigma)
    if tree is not None and sigma not in tree:
        raise DomainError(f"{sigma!r} is not a node of the tree")
    if not sigma:
        return ((), (), ())
    j = jump_string(semantics, sigma)
    entries = [j[:i] for i in range(len(j)) if not semantics.conv(i, sigma)]
    entries += [j, j]
    return tuple(entries)


def h_relabel(semantics: DiagonalSemantics, g, sigma) -> tuple:
    """h with exponents pushed through g; equals h_base when g is the
    identity."""
    gm = _as_map(g)
    sigma = as_string(sigma)
    if not sigma:
        x = gm(())
        return (x, x, x)
    j = jump_string(semantics, sigma)
    entries = [gm(j[:i]) for i in range(len(j)) if not semantics.conv(i, sigma)]
    entries += [gm(j), gm(j)]
    return tuple(entries)


def h_omega(semantics: DiagonalSemantics, g, sigma):
    """Epsilon-term form, threaded along omega-jump strings: the relabeling
    attached to a node tau bottoms out at the constant eps[g(tau)], and a
    nonempty argument is handled by the plain construction one jump down.
    Recursion is on the argument's length, which each jump strictly
    decreases."""
    gm = _as_map(g)
    x_order = gm.codomain
    if x_order is None:
        raise DomainError("h_omega needs the relabeling's codomain order")
    fmemo: dict = {}

    def f(tau: FiniteString, rho: FiniteString):
        key = (tau, rho)
        val = fmemo.get(key)
        if val is None:
            if rho == ():
                val = EpsConst(gm(tau))
            else:
                val = flat(tau + (rho[0],), rho)
            fmemo[key] = val
        return val

    def flat(tau: FiniteString, rho: FiniteString):
        fn = lambda r: f(tau, r)
        if rho == ():
            w = OmegaPow(fn(()))
            return eps_normalize(Sum((w, w, w)), x_order)
        j = jump_string(semantics, rho)
        parts = [OmegaPow(fn(j[:i])) for i in range(len(j)) if not semantics.conv(i, rho)]
        parts += [OmegaPow(fn(j)), OmegaPow(fn(j))]
        return eps_normalize(make_sum(parts), x_order)

    sigma = as_string(sigma)
    if sigma == ():
        w = OmegaPow(f((), ()))
        return eps_normalize(Sum((w, w, w)), x_order)
    j = jump_string(semantics, sigma)
    parts = [OmegaPow(f((), j[:i])) for i in range(len(j)) if not semantics.conv(i, sigma)]
    parts += [OmegaPow(f((), j)), OmegaPow(f((), j))]
    return eps_normalize(make_sum(parts), x_order)


def h_alpha(semantics: DiagonalSemantics, alpha: OrdNotation, g, sigma):
    """Veblen-term form at a transfinite level.

    Level 0 is the plain construction (returned as the equivalent sum of phi
    constants).  At a positive level the relabelings f_tau bottom out at the
    level's image of the previous value, and nonempty arguments recurse into
    the level given by the canonical sequence at the argument chain's length.
    """
    gm = _as_map(g)
    x_order = gm.codomain
    if x_order is None:
        raise DomainError("h_alpha needs the relabeling's codomain order")
    if alpha.is_zero:
        return omega_exp_to_phi(h_relabel(semantics, gm, sigma))
    y_order = ordinal_order()

    def norm(t):
        return phi_normalize(t, x_order, y_order)

    def mk(level: OrdNotation, w):
        # the level's fixed points absorb the application
        if isinstance(w, PhiConst):
            return w
        if isinstance(w, PhiApp) and y_order.compare(w.level, level) == GT:
            return w
        return PhiApp(level, w)

    def engine(level: OrdNotation, gfun, rho: FiniteString):
        if level.is_zero:
            zero = ORD_ZERO
            if rho == ():
                w = PhiApp(zero, gfun(()))
                return norm(Sum((w, w, w)))
            j = jump_string(semantics, rho)
            parts = [PhiApp(zero, gfun(j[:i]))
                     for i in range(len(j)) if not semantics.conv(i, rho)]
            last = PhiApp(zero, gfun(j))
            parts += [last, last]
            return norm(make_sum(parts))
        fmemo: dict = {}

        def f(tau: FiniteString, arg: FiniteString):
            key = (tau, arg)
            val = fmemo.get(key)
            if val is None:
                if arg == ():
                    val = norm(mk(level, gfun(tau)))
                else:
                    tau2 = tau + (arg[0],)
                    val = engine(fundamental_seq(level, len(tau2)),
                                 lambda r: f(tau2, r), arg)
                fmemo[key] = val
            return val

        return engine(fundamental_seq(level, 0), lambda r: f((), r), rho)

    return engine(alpha, lambda tau: PhiConst(gm(tau)), as_string(sigma))


def build_xz(alpha: OrdNotation, semantics: DiagonalSemantics, stream: StreamHandle,
             depth: int = 64) -> OrderHandle:
    """The hardness order: the level-alpha jump tree of the stream's prefix
    tree, linearly ordered by KB.  The depth only bounds enumeration."""
    tz = prefix_tree(stream)
    return jump_order(semantics, alpha, tz)


def descending_witness(alpha: OrdNotation, semantics: DiagonalSemantics,
                       stream: StreamHandle, count: int, depth: int = 64) -> list:
    """The strictly descending Veblen-term sequence attached to the stream's
    prefixes, over the hardness order with the identity relabeling."""
    x_order = build_xz(alpha, semantics, stream, depth)
    g = identity_map(x_order)
    return [h_alpha(semantics, alpha, g, stream.prefix(n)) for n in range(count)]


def hirst_stream(semantics: DiagonalSemantics, stream: StreamHandle) -> StreamHandle:
    """The level-0 witness sequence in its native omega-exponential form."""
    return StreamHandle(lambda k: h_base(semantics, None, stream.prefix(k)),
                        name="hirst")


# ---------------------------------------------------------------------------
# Extraction.
# ---------------------------------------------------------------------------


class ExistentialOracle:
    """Answers: is there an index h > k whose decomposition has, at the given
    column, a pair lexicographically below the threshold.  Returns such an h
    or None."""

    def answer(self, k: int, column: int, threshold: tuple) -> Optional[int]:
        raise NotImplementedError


class ScanOracle(ExistentialOracle):
    """Scans a bounded window of the stream.  Exact whenever the stream's
    column entries stabilize within the window (true of the shipped
    fixtures); otherwise sound when it finds a witness and silent about the
    rest."""

    def __init__(self, decomp: Callable[[int], tuple], x_order: OrderHandle, horizon: int):
        self.decomp = decomp
        self.x_order = x_order
        self.horizon = horizon

    def answer(self, k, column, threshold):
        for h in range(k + 1, k + 1 + self.horizon):
            row = self.decomp(h)
            if column >= len(row):
                continue
            if _pair_lt(row[column], threshold, self.x_order):
                return h
        return None


def _pair_lt(a: tuple, b: tuple, x_order: OrderHandle) -> bool:
    c = x_order.compare(a[0], b[0])
    return c == LT or (c == EQ and a[1] < b[1])


def exact_oracle(seq: StreamHandle, x_order: OrderHandle, horizon: int = 64) -> ScanOracle:
    memo: dict[int, tuple] = {}

    def decomp(k: int) -> tuple:
        row = memo.get(k)
        if row is None:
            row = cnf_decomposition(tuple(seq.at(k)), x_order)
            memo[k] = row
        return row

    return ScanOracle(decomp, x_order, horizon)


def extract_descending(seq: StreamHandle, x_order: OrderHandle,
                       oracle: ExistentialOracle, count: int,
                       max_steps: int = 100_000) -> list:
    """Base-order elements recovered from a descending exponential stream;
    strictly descending in the base order, `count` many."""
    if count <= 0:
        return []
    rows: dict[int, tuple] = {}

    def row(k: int) -> tuple:
        r = rows.get(k)
        if r is None:
            r = cnf_decomposition(tuple(seq.at(k)), x_order)
            rows[k] = r
        return r

    if not row(0):
        raise ContractViolation("stream starts at the zero element")
    k, col = 0, 0
    pair = row(0)[0]
    out = [pair[0]]
    steps = 0
    while len(out) < count:
        steps += 1
        if steps > max_steps:
            raise ContractViolation("extraction exceeded its step budget")
        h = oracle.answer(k, col, pair)
        if h is not None:
            if h <= k or col >= len(row(h)) or not _pair_lt(row(h)[col], pair, x_order):
                raise ContractViolation("oracle produced an invalid witness")
            k = h
            pair = row(k)[col]
        else:
            if col + 1 >= len(row(k)):
                raise ContractViolation("column exhausted: input stream is not descending")
            col += 1
            pair = row(k)[col]
        if x_order.compare(pair[0], out[-1]) == LT:
            out.append(pair[0])
    return out
