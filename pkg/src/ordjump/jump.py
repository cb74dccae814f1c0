"""The true-stage jump calculus.

``jump_string`` sends a finite string sigma to the string of codes of its
prefixes at the true stages t_0 < t_1 < ... (t_{-1} = 1, each stage the
least settling point of the next diagonal computation, clamped to increase),
cut off at the first stage exceeding len(sigma).  ``k_string`` decodes the
last entry and inverts the jump on its image.  Iterating along first entries
gives the omega-jump; indexing the iteration by the canonical sequence of an
ordinal notation gives the w^alpha-jump.  Each jump function induces a jump
tree operation with decidable membership, and a fueled stream approximation
that evaluates the corresponding operator on an infinite sequence.

Inverses and tree membership never need the semantics; passing one enables
the image check (re-applying the jump) and turns garbage input into a
DomainError instead of garbage output.

Stream values are honest partial answers: a returned value equals the
operator's value whenever the semantics' convergences are all witnessed
within the fuel horizon, which is exact for the decidable fixtures used in
verification.  Insufficient fuel yields None.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .core import (DomainError, FiniteString, StreamHandle, Tree, as_string,
                   decode_string, empty_tree, encode_string, kb_tree_order,
                   prefix_of, OrderHandle)
from .machine import DiagonalSemantics, mu_stage
from .notation import ORD_ONE, OrdNotation, fundamental_seq


@dataclass(frozen=True)
class TrueStageTrace:
    """The stages within a string's horizon, each tagged with whether the
    diagonal computation was seen to converge (found) or the fallback
    increment fired."""

    stages: tuple
    found: tuple

    def __post_init__(self):
        prev = 1
        for i, t in enumerate(self.stages):
            if t < max(prev + 1, i + 2):
                raise DomainError("true stages must satisfy t_n >= max(t_{n-1}+1, n+2)")
            prev = t


def _cache(semantics: DiagonalSemantics) -> dict:
    cache = getattr(semantics, "_jump_cache", None)
    if cache is None:
        cache = {}
        semantics._jump_cache = cache
    return cache


def true_stages(semantics: DiagonalSemantics, sigma) -> TrueStageTrace:
    sigma = as_string(sigma)
    stages, found = [], []
    t_prev = 1
    n = 0
    while True:
        t = mu_stage(semantics, n, sigma, t_prev)
        if t > len(sigma):
            break
        hit = any(semantics.conv(n, sigma[:u]) for u in range(1, len(sigma) + 1))
        stages.append(t)
        found.append(hit)
        t_prev = t
        n += 1
    return TrueStageTrace(tuple(stages), tuple(found))


def jump_string(semantics: DiagonalSemantics, sigma) -> FiniteString:
    sigma = as_string(sigma)
    cache = _cache(semantics)
    key = ("J", sigma)
    out = cache.get(key)
    if out is None:
        entries = []
        t_prev = 1
        while True:
            t = mu_stage(semantics, len(entries), sigma, t_prev)
            if t > len(sigma):
                break
            entries.append(encode_string(sigma[:t]))
            t_prev = t
        out = tuple(entries)
        cache[key] = out
    return out


def k_string(tau) -> FiniteString:
    tau = as_string(tau)
    if not tau:
        return ()
    return decode_string(tau[-1])


def in_jump_image(semantics: DiagonalSemantics, tau) -> bool:
    tau = as_string(tau)
    return jump_string(semantics, k_string(tau)) == tau


def jump_tree(semantics: DiagonalSemantics, tree: Tree) -> Tree:
    def member(tau):
        return in_jump_image(semantics, tau) and k_string(tau) in tree
    nodes = None
    if tree._nodes is not None:
        nodes = lambda bound: (jump_string(semantics, s) for s in tree.nodes(bound))
    return Tree(member, nodes, name=f"JT({tree.name})")


def jump_tree_member(semantics: DiagonalSemantics, tree: Tree, tau) -> bool:
    return as_string(tau) in jump_tree(semantics, tree)


# ---------------------------------------------------------------------------
# Omega-level jump: iterate, keeping only first entries.
# ---------------------------------------------------------------------------


def omega_jump_string(semantics: DiagonalSemantics, sigma) -> FiniteString:
    out = []
    cur = jump_string(semantics, as_string(sigma))
    while cur:
        out.append(cur[0])
        cur = jump_string(semantics, cur)
    return tuple(out)


def omega_k_string(tau, semantics: Optional[DiagonalSemantics] = None) -> FiniteString:
    tau = as_string(tau)
    if not tau:
        return ()
    x = (tau[-1],)
    for _ in range(len(tau)):
        x = k_string(x)
    if semantics is not None and omega_jump_string(semantics, x) != tau:
        raise DomainError("input is not an omega-jump image")
    return x


# ---------------------------------------------------------------------------
# Transfinite levels.  Level 0 is the plain jump; at level a > 0 the n-fold
# composite chains the levels given by a's canonical sequence, and the jump
# keeps the first entry of each nonempty composite.
# ---------------------------------------------------------------------------


def alpha_jump_string(semantics: DiagonalSemantics, alpha: OrdNotation, sigma) -> FiniteString:
    sigma = as_string(sigma)
    if alpha.is_zero:
        return jump_string(semantics, sigma)
    cache = _cache(semantics)
    key = ("Ja", alpha, sigma)
    out = cache.get(key)
    if out is None:
        entries = []
        cur = alpha_jump_string(semantics, fundamental_seq(alpha, 0), sigma)
        while cur:
            entries.append(cur[0])
            cur = alpha_jump_string(semantics, fundamental_seq(alpha, len(entries)), cur)
        out = tuple(entries)
        cache[key] = out
    return out


def alpha_jump_composite(semantics: DiagonalSemantics, alpha: OrdNotation, sigma, m: int) -> FiniteString:
    """The m-fold composite at level alpha > 0 (identity when m = 0)."""
    if alpha.is_zero and m > 0:
        raise DomainError("composites are indexed by positive levels")
    cur = as_string(sigma)
    for i in range(m):
        cur = alpha_jump_string(semantics, fundamental_seq(alpha, i), cur)
    return cur


def alpha_k_string(alpha: OrdNotation, tau, semantics: Optional[DiagonalSemantics] = None) -> FiniteString:
    tau = as_string(tau)
    if alpha.is_zero:
        out = k_string(tau)
        if semantics is not None and jump_string(semantics, out) != tau:
            raise DomainError("input is not a jump image")
        return out
    if not tau:
        return ()
    x = (tau[-1],)
    for i in range(len(tau) - 1, -1, -1):
        x = alpha_k_string(fundamental_seq(alpha, i), x)
    if semantics is not None and alpha_jump_string(semantics, alpha, x) != tau:
        raise DomainError("input is not a jump image at this level")
    return x


def alpha_jump_tree(semantics: DiagonalSemantics, alpha: OrdNotation, tree: Tree) -> Tree:
    def member(tau):
        tau = tuple(tau)
        sig = alpha_k_string(alpha, tau)
        return alpha_jump_string(semantics, alpha, sig) == tau and sig in tree
    nodes = None
    if tree._nodes is not None:
        nodes = lambda bound: (alpha_jump_string(semantics, alpha, s) for s in tree.nodes(bound))
    return Tree(member, nodes, name=f"JT^(w^{alpha})({tree.name})")


def alpha_jump_tree_member(semantics: DiagonalSemantics, alpha: OrdNotation, tree: Tree, tau) -> bool:
    return as_string(tau) in alpha_jump_tree(semantics, alpha, tree)


def alpha_jump_tree_local(semantics: DiagonalSemantics, alpha: OrdNotation, tree: Tree, tau) -> Tree:
    """Images under the (len(tau)+1)-fold composite of the tree nodes whose
    full jump extends tau.  Empty when tau is not itself a jump-tree node."""
    if alpha.is_zero:
        raise DomainError("local jump trees live at positive levels")
    tau = as_string(tau)
    if not alpha_jump_tree_member(semantics, alpha, tree, tau):
        return empty_tree()
    k = len(tau) + 1

    def invert(rho):
        x = rho
        for i in range(k - 1, -1, -1):
            x = alpha_k_string(fundamental_seq(alpha, i), x)
        return x

    def member(rho):
        rho = tuple(rho)
        if rho == ():
            return True
        sig = invert(rho)
        return (alpha_jump_composite(semantics, alpha, sig, k) == rho
                and sig in tree
                and prefix_of(tau, alpha_jump_string(semantics, alpha, sig)))

    nodes = None
    if tree._nodes is not None:
        def enum(bound):
            for s in tree.nodes(bound):
                if prefix_of(tau, alpha_jump_string(semantics, alpha, s)):
                    yield alpha_jump_composite(semantics, alpha, s, k)
        nodes = enum
    return Tree(member, nodes, name=f"JT_local({tau})")


# ---------------------------------------------------------------------------
# Fueled stream evaluation.  A level is evaluated lazily against the prefix
# of the input the fuel admits; entry n of a level exists exactly when it
# exists for the jump of that finite prefix, and equals it.  Laziness matters:
# only the spine of the iterated jumps is materialized, never whole iterates.
# ---------------------------------------------------------------------------


class StreamExhausted(Exception):
    pass


class _FueledBase:
    def __init__(self, stream: StreamHandle, fuel: int):
        self.stream = stream
        self.fuel = fuel

    def available(self) -> int:
        return self.fuel

    def at(self, n: int) -> int:
        if n >= self.fuel:
            raise StreamExhausted
        return self.stream.at(n)

    def prefix(self, t: int) -> FiniteString:
        return tuple(self.at(i) for i in range(t))


class _JumpLevel:
    def __init__(self, semantics: DiagonalSemantics, base):
        self.semantics = semantics
        self.base = base
        self._stages: list[int] = []
        self._done = False
        self._avail: Optional[int] = None

    def _extend(self) -> bool:
        if self._done:
            return False
        horizon = self.base.available()
        t_prev = self._stages[-1] if self._stages else 1
        n = len(self._stages)
        found = None
        for t in range(1, horizon + 1):
            if self.semantics.conv(n, self.base.prefix(t)):
                found = t
                break
        t = t_prev + 1 if found is None else max(t_prev + 1, found)
        if t > horizon:
            self._done = True
            return False
        self._stages.append(t)
        return True

    def available(self) -> int:
        if self._avail is None:
            while self._extend():
                pass
            self._avail = len(self._stages)
        return self._avail

    def at(self, n: int) -> int:
        while len(self._stages) <= n and self._extend():
            pass
        if len(self._stages) <= n:
            raise StreamExhausted
        return encode_string(self.base.prefix(self._stages[n]))

    def prefix(self, t: int) -> FiniteString:
        return tuple(self.at(i) for i in range(t))


class _AlphaLevel:
    def __init__(self, semantics: DiagonalSemantics, alpha: OrdNotation, base):
        self.semantics = semantics
        self.alpha = alpha
        self._chain = [base]

    def _level(self, i: int):
        while len(self._chain) <= i:
            beta = fundamental_seq(self.alpha, len(self._chain) - 1)
            self._chain.append(_make_level(self.semantics, beta, self._chain[-1]))
        return self._chain[i]

    def available(self) -> int:
        i = 0
        while self._level(i).available() > 0:
            i += 1
        return max(i - 1, 0)

    def at(self, n: int) -> int:
        return self._level(n + 1).at(0)

    def prefix(self, t: int) -> FiniteString:
        return tuple(self.at(i) for i in range(t))


def _make_level(semantics: DiagonalSemantics, beta: OrdNotation, base):
    if beta.is_zero:
        return _JumpLevel(semantics, base)
    return _AlphaLevel(semantics, beta, base)


def jump_stream(semantics: DiagonalSemantics, stream: StreamHandle, n: int, fuel: int) -> Optional[int]:
    """Entry n of the jump of the stream, or None within this fuel."""
    level = _JumpLevel(semantics, _FueledBase(stream, fuel))
    try:
        return level.at(n)
    except StreamExhausted:
        return None


def omega_jump_stream(semantics: DiagonalSemantics, stream: StreamHandle, n: int, fuel: int) -> Optional[int]:
    return alpha_jump_stream(semantics, ORD_ONE, stream, n, fuel)


def alpha_jump_stream(semantics: DiagonalSemantics, alpha: OrdNotation, stream: StreamHandle,
                      n: int, fuel: int) -> Optional[int]:
    level = _make_level(semantics, alpha, _FueledBase(stream, fuel))
    try:
        return level.at(n)
    except StreamExhausted:
        return None


def jump_order(semantics: DiagonalSemantics, alpha: OrdNotation, tree: Tree) -> OrderHandle:
    """The jump tree of a tree, viewed as a linear order under KB."""
    if alpha.is_zero:
        return kb_tree_order(jump_tree(semantics, tree))
    return kb_tree_order(alpha_jump_tree(semantics, alpha, tree))
