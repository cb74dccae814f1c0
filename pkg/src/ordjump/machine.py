"""A small oracle register machine and the diagonal convergence predicate.

The machine has eight registers of unbounded naturals.  Register 7 holds the
input; the rest start at zero.  One instruction costs one step, and a run
against a finite oracle sigma converges when a HALT executes in strictly
fewer than min(bound, len(sigma)) steps with every queried position inside
sigma.  Under that accounting, convergence against sigma is inherited by
every extension of sigma, which is the law the jump calculus relies on.

Everything above the machine talks to a DiagonalSemantics: a decidable
predicate "machine n, on input n, converges against oracle sigma".  The
universal machine is one instance; table-driven fixtures give decidable
ground truth for tests.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Optional

from .core import DomainError, FiniteString, as_string, decode_string, encode_string

NREG = 8
OPS = ("loadi", "mov", "add", "monus", "jz", "query", "halt")


@dataclass(frozen=True)
class Instr:
    op: str
    a: int
    b: int


@dataclass(frozen=True)
class Program:
    instructions: tuple


def decode_instruction(v: int) -> Instr:
    op = OPS[v % 7]
    rest = v // 7
    a = rest % NREG
    x = rest // NREG
    if op in ("loadi", "jz"):
        b = x  # immediate / jump target, target clamped at program decode
    elif op == "halt":
        b = 0
    else:
        b = x % NREG
    return Instr(op, a, b)


def encode_instruction(ins: Instr) -> int:
    idx = OPS.index(ins.op)
    x = 0 if ins.op == "halt" else ins.b
    return idx + 7 * (ins.a + NREG * x)


@lru_cache(maxsize=4096)
def decode_program(e: int) -> Program:
    """Total decoding of indices to programs.

    The index is read as a coded string; zero entries are padding (skipped),
    entry v+1 denotes instruction v.  Inserting padding therefore inflates an
    index without changing the program, and every program has indices
    cofinally in the naturals.
    """
    raw = [decode_instruction(v - 1) for v in decode_string(e) if v != 0]
    n = len(raw)
    fixed = tuple(
        Instr(i.op, i.a, min(i.b, n - 1) if i.op == "jz" and n else i.b) for i in raw
    )
    return Program(fixed)


def program_index(p: Program) -> int:
    return encode_string(tuple(encode_instruction(i) + 1 for i in p.instructions))


@dataclass(frozen=True)
class RunOutcome:
    kind: str  # "halted" | "still-running" | "oracle-exhausted"
    steps: int = 0
    value: int = 0

    @property
    def halted(self) -> bool:
        return self.kind == "halted"


STILL_RUNNING = RunOutcome("still-running")
ORACLE_EXHAUSTED = RunOutcome("oracle-exhausted")


def run(e: int, input_value: int, sigma: Iterable[int], bound: int) -> RunOutcome:
    """Deterministic bounded run of machine e on the given input and oracle."""
    sigma = as_string(sigma)
    prog = decode_program(e).instructions
    budget = min(bound, len(sigma))
    regs = [0] * NREG
    regs[7] = input_value
    pc = 0
    steps = 0
    while steps < budget:
        if pc < 0 or pc >= len(prog):
            return STILL_RUNNING
        ins = prog[pc]
        steps += 1
        op = ins.op
        if op == "halt":
            if steps < budget:
                return RunOutcome("halted", steps, regs[ins.a])
            return STILL_RUNNING
        if op == "loadi":
            regs[ins.a] = ins.b
        elif op == "mov":
            regs[ins.a] = regs[ins.b]
        elif op == "add":
            regs[ins.a] = regs[ins.a] + regs[ins.b]
        elif op == "monus":
            regs[ins.a] = max(0, regs[ins.a] - regs[ins.b])
        elif op == "jz":
            if regs[ins.a] == 0:
                pc = ins.b
                continue
        elif op == "query":
            p = regs[ins.b]
            if p >= len(sigma):
                return ORACLE_EXHAUSTED
            regs[ins.a] = sigma[p]
        pc += 1
    return STILL_RUNNING


# ---------------------------------------------------------------------------
# Diagonal semantics.
# ---------------------------------------------------------------------------


class DiagonalSemantics:
    """Decidable predicate: does machine n on input n converge against the
    finite oracle sigma.  Implementations must satisfy prefix monotonicity:
    conv(n, sigma) and sigma <= rho imply conv(n, rho)."""

    name = "?"

    def conv(self, n: int, sigma: FiniteString) -> bool:
        raise NotImplementedError


class UniversalSemantics(DiagonalSemantics):
    name = "universal"

    def conv(self, n, sigma):
        sigma = tuple(sigma)
        return run(n, n, sigma, len(sigma)).halted


class DivergeSemantics(DiagonalSemantics):
    name = "diverge"

    def conv(self, n, sigma):
        return False


class ThresholdSemantics(DiagonalSemantics):
    """conv(n, sigma) iff len(sigma) >= b(n); b(n) = None means never."""

    def __init__(self, bound_fn: Callable[[int], Optional[int]], name: str = "threshold"):
        self.bound_fn = bound_fn
        self.name = name

    @staticmethod
    def from_table(table: dict, default: Optional[int]) -> "ThresholdSemantics":
        tbl = {int(k): v for k, v in table.items()}
        return ThresholdSemantics(lambda n: tbl.get(n, default), name="threshold")

    def conv(self, n, sigma):
        b = self.bound_fn(n)
        return b is not None and len(sigma) >= b


class TableSemantics(DiagonalSemantics):
    """conv holds exactly on an explicit finite set of (n, sigma) pairs.
    Deliberately unchecked: tables can violate prefix monotonicity, which is
    what the fixture-law verification suite exists to catch."""

    name = "table"

    def __init__(self, pairs: Iterable[tuple]):
        self.pairs = frozenset((n, tuple(s)) for n, s in pairs)

    def conv(self, n, sigma):
        return (n, tuple(sigma)) in self.pairs


def geometric_semantics(ratio: int = 2, name: Optional[str] = None) -> ThresholdSemantics:
    """Thresholds ratio^(n+1): stages race ahead, so iterated jumps of a
    string collapse after logarithmically many levels.  The cheap way to
    exercise deep descent constructions."""
    return ThresholdSemantics(lambda n: ratio ** (n + 1), name=name or f"geometric:{ratio}")


def diag_converges(semantics: DiagonalSemantics, n: int, sigma: Iterable[int]) -> bool:
    return semantics.conv(n, tuple(sigma))


def mu_stage(semantics: DiagonalSemantics, n: int, sigma: Iterable[int], t_prev: int) -> int:
    """Next true stage after t_prev: the least t with conv(n, sigma[:t]),
    clamped above t_prev, falling back to t_prev + 1 when no t <= len(sigma)
    works.  Searching past len(sigma) is pointless since sigma[:t] = sigma."""
    if t_prev < 1:
        raise DomainError("stage recursion starts at t_prev >= 1")
    sigma = tuple(sigma)
    found = None
    for t in range(1, len(sigma) + 1):
        if semantics.conv(n, sigma[:t]):
            found = t
            break
    if found is None:
        return t_prev + 1
    return max(t_prev + 1, found)


# --- fixture files and CLI selectors ---------------------------------------


def semantics_from_json(data: dict) -> DiagonalSemantics:
    kind = data.get("kind")
    if kind == "diverge":
        return DivergeSemantics()
    if kind == "threshold":
        table = dict(data.get("b", {}))
        default = table.pop("default", "never")
        default = None if default == "never" else int(default)
        return ThresholdSemantics.from_table(table, default)
    if kind == "table":
        return TableSemantics((int(n), tuple(s)) for n, s in data.get("true", []))
    raise DomainError(f"unknown semantics kind {kind!r}")


def semantics_from_selector(selector: str) -> DiagonalSemantics:
    if selector == "universal":
        return UniversalSemantics()
    if selector == "diverge":
        return DivergeSemantics()
    if selector.startswith("table:"):
        with open(selector[len("table:"):], "r", encoding="utf-8") as fh:
            return semantics_from_json(json.load(fh))
    raise DomainError(f"unknown semantics selector {selector!r}")
