"""Cantor-normal-form notations for ordinals below epsilon_0.

A notation is a sum  w^{b_1}*c_1 + ... + w^{b_m}*c_m  with strictly
decreasing exponents (themselves notations) and positive integer
coefficients.  Comparison is the usual lexicographic order on that form.
The module also assigns the canonical sequence used to index transfinite
jump levels: a nondecreasing sequence (a_i) with sup(a_i + 1) = a.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import total_ordering

from .core import EQ, GT, LT, DomainError, OrderHandle


@total_ordering
@dataclass(frozen=True)
class OrdNotation:
    terms: tuple  # tuple[(OrdNotation, int), ...], exponents strictly decreasing

    def __post_init__(self):
        prev = None
        for exp, coeff in self.terms:
            if not isinstance(exp, OrdNotation) or not isinstance(coeff, int) or coeff < 1:
                raise DomainError(f"bad CNF term ({exp!r}, {coeff!r})")
            if prev is not None and ord_compare(prev, exp) != GT:
                raise DomainError("CNF exponents must strictly decrease")
            prev = exp

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_successor(self) -> bool:
        return bool(self.terms) and self.terms[-1][0].is_zero

    @property
    def is_limit(self) -> bool:
        return bool(self.terms) and not self.terms[-1][0].is_zero

    def predecessor(self) -> "OrdNotation":
        if not self.is_successor:
            raise DomainError(f"{self} is not a successor")
        exp, coeff = self.terms[-1]
        head = self.terms[:-1]
        if coeff > 1:
            head = head + ((exp, coeff - 1),)
        return OrdNotation(head)

    def as_int(self):
        """The natural this notation denotes, or None if infinite."""
        if self.is_zero:
            return 0
        if len(self.terms) == 1 and self.terms[0][0].is_zero:
            return self.terms[0][1]
        return None

    def __eq__(self, other):
        return isinstance(other, OrdNotation) and self.terms == other.terms

    def __lt__(self, other):
        return ord_compare(self, other) == LT

    def __hash__(self):
        return hash(("ord", self.terms))

    def __str__(self):
        return format_ordinal(self)

    def __repr__(self):
        return f"OrdNotation({format_ordinal(self)!r})"


ORD_ZERO = OrdNotation(())
ORD_ONE = OrdNotation(((ORD_ZERO, 1),))
ORD_OMEGA = OrdNotation(((ORD_ONE, 1),))


def ord_of_int(n: int) -> OrdNotation:
    if n < 0:
        raise DomainError("ordinal notations denote non-negative values")
    return ORD_ZERO if n == 0 else OrdNotation(((ORD_ZERO, n),))


def omega_power(exp: OrdNotation, coeff: int = 1) -> OrdNotation:
    return OrdNotation(((exp, coeff),))


def ord_compare(a: OrdNotation, b: OrdNotation) -> int:
    for (ea, ca), (eb, cb) in zip(a.terms, b.terms):
        c = ord_compare(ea, eb)
        if c != EQ:
            return c
        if ca != cb:
            return LT if ca < cb else GT
    if len(a.terms) == len(b.terms):
        return EQ
    return LT if len(a.terms) < len(b.terms) else GT


def ord_add(a: OrdNotation, b: OrdNotation) -> OrdNotation:
    if b.is_zero:
        return a
    lead = b.terms[0][0]
    kept = [t for t in a.terms if ord_compare(t[0], lead) == GT]
    merged = list(b.terms)
    for exp, coeff in a.terms:
        if ord_compare(exp, lead) == EQ:
            merged[0] = (lead, coeff + merged[0][1])
    return OrdNotation(tuple(kept) + tuple(merged))


def fundamental_seq(alpha: OrdNotation, i: int) -> OrdNotation:
    """The i-th member of the canonical sequence below alpha.

    Successors use the constant sequence at the predecessor; limits step the
    last CNF term (w^{g+1} at i is w^g*i, w^lam at i is w^{lam at i}).  The
    result is nondecreasing in i with sup(result + 1) = alpha.
    """
    if alpha.is_zero:
        raise DomainError("0 has no fundamental sequence")
    if i < 0:
        raise DomainError("sequence index must be a natural")
    if alpha.is_successor:
        return alpha.predecessor()
    exp, coeff = alpha.terms[-1]
    head = alpha.terms[:-1]
    if coeff > 1:
        head = head + ((exp, coeff - 1),)
    if exp.is_successor:
        if i == 0:
            return OrdNotation(head)
        return OrdNotation(head + ((exp.predecessor(), i),))
    return OrdNotation(head + ((fundamental_seq(exp, i), 1),))


def ordinal_order() -> OrderHandle:
    return OrderHandle(
        "ordinal",
        lambda x: isinstance(x, OrdNotation),
        lambda a, b: ord_compare(a, b),
        lambda bound: (ord_of_int(n) for n in range(bound)),
    )


# --- text form -------------------------------------------------------------


def format_ordinal(a: OrdNotation) -> str:
    if a.is_zero:
        return "0"
    parts = []
    for exp, coeff in a.terms:
        if exp.is_zero:
            parts.append(str(coeff))
            continue
        if exp == ORD_ONE:
            base = "w"
        else:
            inner = format_ordinal(exp)
            base = f"w^({inner})" if ("+" in inner or "*" in inner) else f"w^{inner}"
        parts.append(base if coeff == 1 else f"{base}*{coeff}")
    return "+".join(parts)


class OrdinalParseError(DomainError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


def parse_ordinal(text: str) -> OrdNotation:
    s = text.strip()
    pos = 0

    def peek():
        return s[pos] if pos < len(s) else ""

    def skip_ws():
        nonlocal pos
        while pos < len(s) and s[pos].isspace():
            pos += 1

    def parse_int() -> int:
        nonlocal pos
        start = pos
        while pos < len(s) and s[pos].isdigit():
            pos += 1
        if start == pos:
            raise OrdinalParseError("expected a number", pos)
        return int(s[start:pos])

    def parse_factor() -> OrdNotation:
        nonlocal pos
        skip_ws()
        if peek() == "(":
            pos += 1
            v = parse_expr()
            skip_ws()
            if peek() != ")":
                raise OrdinalParseError("expected ')'", pos)
            pos += 1
            return v
        if peek() == "w":
            pos += 1
            exp = ORD_ONE
            if peek() == "^":
                pos += 1
                exp = parse_factor()
            coeff = 1
            skip_ws()
            if peek() == "*":
                pos += 1
                skip_ws()
                coeff = parse_int()
            return omega_power(exp, coeff)
        if peek().isdigit():
            return ord_of_int(parse_int())
        raise OrdinalParseError("expected 'w', a number, or '('", pos)

    def parse_expr() -> OrdNotation:
        nonlocal pos
        acc = parse_factor()
        while True:
            skip_ws()
            if peek() != "+":
                return acc
            pos += 1
            acc = ord_add(acc, parse_factor())

    value = parse_expr()
    skip_ws()
    if pos != len(s):
        raise OrdinalParseError("trailing input", pos)
    return value
