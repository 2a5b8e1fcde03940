"""Any Boolean network as a conjunctive one.

Route: truth tables -> OR-of-monomials form -> a disjunctive network whose
variables are monomials (every monomial's next value is an OR of monomials)
-> bit-complement gives a CBN, since NOT(OR) is AND of NOTs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

from .dynamics import BitState
from .graph import Digraph

__all__ = [
    "Monomial",
    "DnfNetwork",
    "MonomialDbn",
    "ClosureCapExceeded",
    "DualCbn",
    "DEFAULT_CLOSURE_CAP",
    "dnf_from_truth_table",
    "monomial_eval",
    "build_monomial_dbn",
    "dbn_to_cbn",
    "project",
]

DEFAULT_CLOSURE_CAP = 10_000
MAX_TABLE_VARS = 16


@dataclass(frozen=True, init=False)
class Monomial:
    """AND of literals: ``pos`` un-negated, ``neg`` negated variable ids."""

    pos: frozenset[int] = field(default_factory=frozenset)
    neg: frozenset[int] = field(default_factory=frozenset)

    def __init__(self, pos: Iterable[int] = (), neg: Iterable[int] = ()):
        pos, neg = frozenset(pos), frozenset(neg)
        if pos & neg:
            raise ValueError(f"trivial monomial: x and not-x for {sorted(pos & neg)}")
        if any(i < 0 for i in pos | neg):
            raise ValueError("variable ids must be non-negative")
        object.__setattr__(self, "pos", pos)
        object.__setattr__(self, "neg", neg)

    @property
    def key(self) -> tuple:
        return (len(self.pos) + len(self.neg), tuple(sorted(self.pos)), tuple(sorted(self.neg)))

    def __lt__(self, other: "Monomial") -> bool:
        return self.key < other.key

    def variables(self) -> frozenset[int]:
        return self.pos | self.neg

    def implies(self, other: "Monomial") -> bool:
        """True when every literal of ``other`` is in ``self``."""
        return other.pos <= self.pos and other.neg <= self.neg

    def __str__(self) -> str:
        if not self.pos and not self.neg:
            return "1"
        lits = [(i, f"x{i}") for i in self.pos] + [(i, f"~x{i}") for i in self.neg]
        return "".join(s for _, s in sorted(lits))


ONE = Monomial()


def _mul(a: Monomial, b: Monomial) -> Monomial | None:
    pos, neg = a.pos | b.pos, a.neg | b.neg
    if pos & neg:
        return None
    return Monomial(pos, neg)


def _absorb(terms: Iterable[Monomial]) -> frozenset[Monomial]:
    """Drop every monomial implied by a shorter one (x | xy = x)."""
    kept: list[Monomial] = []
    for t in sorted(set(terms)):
        if not any(t.implies(k) for k in kept):
            kept.append(t)
    return frozenset(kept)


def _product(a: frozenset[Monomial], b: frozenset[Monomial]) -> frozenset[Monomial]:
    out = []
    for s in a:
        for t in b:
            st = _mul(s, t)
            if st is not None:
                out.append(st)
    return _absorb(out)


def _negate(form: frozenset[Monomial]) -> frozenset[Monomial]:
    """NOT(OR of monomials) as an OR of monomials."""
    acc = frozenset({ONE})
    for z in form:
        lits = [Monomial((), {i}) for i in z.pos] + [Monomial({i}, ()) for i in z.neg]
        acc = _product(acc, frozenset(lits))
        if not acc:
            break
    return acc


def monomial_eval(z: Monomial, x: BitState) -> int:
    for i in z.pos:
        if i >= x.n:
            raise IndexError(f"variable {i} out of range for width {x.n}")
    for i in z.neg:
        if i >= x.n:
            raise IndexError(f"variable {i} out of range for width {x.n}")
    return int(all(x[i] for i in z.pos) and not any(x[i] for i in z.neg))


def _eval_form(form: Iterable[Monomial], x: BitState) -> int:
    return int(any(monomial_eval(z, x) for z in form))


@dataclass(frozen=True)
class DnfNetwork:
    """``functions[i]`` is the set of monomials whose OR is f_i."""

    n: int
    functions: tuple[frozenset[Monomial], ...]

    def __post_init__(self):
        if len(self.functions) != self.n:
            raise ValueError(f"expected {self.n} functions, got {len(self.functions)}")
        for form in self.functions:
            for z in form:
                if z.variables() and max(z.variables()) >= self.n:
                    raise ValueError(f"monomial {z} uses a variable outside 0..{self.n - 1}")

    def step(self, x: BitState) -> BitState:
        if x.n != self.n:
            raise ValueError(f"state width {x.n} does not match network ({self.n})")
        return BitState.from_bits(_eval_form(f, x) for f in self.functions)


def _prime_implicants(n: int, ones: list[int]) -> frozenset[Monomial]:
    # implicants as (value, mask of fixed positions); bit n-1-i is variable i
    full = (1 << n) - 1
    current = {(v, full) for v in ones}
    primes = set()
    while current:
        merged = set()
        used = set()
        by_mask: dict[int, set[int]] = {}
        for v, m in current:
            by_mask.setdefault(m, set()).add(v)
        for m, vals in by_mask.items():
            for v in vals:
                bits = m
                while bits:
                    b = bits & -bits
                    bits ^= b
                    if not v & b and (v | b) in vals:
                        merged.add((v, m & ~b))
                        used.add((v, m))
                        used.add((v | b, m))
        primes |= current - used
        current = merged
    out = []
    for v, m in primes:
        pos, neg = set(), set()
        for i in range(n):
            b = 1 << (n - 1 - i)
            if m & b:
                (pos if v & b else neg).add(i)
        out.append(Monomial(pos, neg))
    return frozenset(out)


def _table_bits(table: str | Sequence[int], size: int) -> list[int]:
    if isinstance(table, str):
        table = table.strip()
        if set(table) - {"0", "1"}:
            raise ValueError(f"truth table must be a binary string: {table!r}")
        bits = [int(c) for c in table]
    else:
        bits = [int(b) for b in table]
        if set(bits) - {0, 1}:
            raise ValueError("truth table entries must be 0 or 1")
    if len(bits) != size:
        raise ValueError(f"truth table has {len(bits)} entries, expected {size}")
    return bits


def dnf_from_truth_table(tables: Sequence[str | Sequence[int]]) -> DnfNetwork:
    """OR-of-prime-implicants form of each table.

    Entry k of a table is f_i at the input whose bit string (x_0 leftmost)
    is k written in binary.
    """
    n = len(tables)
    if n > MAX_TABLE_VARS:
        raise ValueError(f"{n} variables exceeds the truth-table limit of {MAX_TABLE_VARS}")
    funcs = []
    for table in tables:
        bits = _table_bits(table, 2**n)
        funcs.append(_prime_implicants(n, [k for k, b in enumerate(bits) if b]))
    return DnfNetwork(n, tuple(funcs))


class ClosureCapExceeded(RuntimeError):
    def __init__(self, cap: int, found: int, pending: int):
        super().__init__(
            f"monomial closure exceeded the cap of {cap}: {found} monomials found, {pending} still unexpanded"
        )
        self.cap = cap
        self.found = found
        self.pending = pending


@dataclass(frozen=True)
class MonomialDbn:
    """Disjunctive network over monomials.

    ``update[z]`` lists the monomials whose OR is z's next value;
    ``provenance[i]`` the seed monomials whose OR is f_i.
    """

    states: tuple[Monomial, ...]
    update: dict[Monomial, frozenset[Monomial]]
    provenance: tuple[frozenset[Monomial], ...]

    @cached_property
    def index(self) -> dict[Monomial, int]:
        return {z: k for k, z in enumerate(self.states)}

    @property
    def size(self) -> int:
        return len(self.states)

    def lift(self, x: BitState) -> BitState:
        """Consistent monomial state: bit k is states[k] evaluated at x."""
        return BitState.from_bits(monomial_eval(z, x) for z in self.states)

    def step(self, zs: BitState) -> BitState:
        if zs.n != self.size:
            raise ValueError(f"state width {zs.n} does not match closure ({self.size})")
        idx = self.index
        return BitState.from_bits(any(zs[idx[w]] for w in self.update[z]) for z in self.states)


def build_monomial_dbn(net: DnfNetwork, cap: int = DEFAULT_CLOSURE_CAP) -> MonomialDbn:
    found: dict[Monomial, None] = {}
    for form in net.functions:
        for z in sorted(form):
            found.setdefault(z)
    if len(found) > cap:
        raise ClosureCapExceeded(cap, len(found), len(found))
    negated: dict[int, frozenset[Monomial]] = {}
    update: dict[Monomial, frozenset[Monomial]] = {}
    work = list(found)
    while work:
        z = work.pop(0)
        g = frozenset({ONE})
        for i in sorted(z.pos):
            g = _product(g, net.functions[i])
        for i in sorted(z.neg):
            if i not in negated:
                negated[i] = _negate(net.functions[i])
            g = _product(g, negated[i])
        update[z] = g
        for w in sorted(g):
            if w not in found:
                found[w] = None
                work.append(w)
                if len(found) > cap:
                    raise ClosureCapExceeded(cap, len(found), len(work))
    states = tuple(found)
    return MonomialDbn(states, update, tuple(net.functions))


class DualCbn(NamedTuple):
    """The CBN on complemented monomial states, vertex k = ``dbn.states[k]``."""

    graph: Digraph
    width: int

    def negate(self, s: BitState) -> BitState:
        if s.n != self.width:
            raise ValueError(f"state width {s.n} does not match {self.width}")
        return BitState(s.n, s.value ^ ((1 << s.n) - 1))


def dbn_to_cbn(dbn: MonomialDbn) -> DualCbn:
    idx = dbn.index
    edges = [(idx[w], idx[z]) for z in dbn.states for w in dbn.update[z]]
    return DualCbn(Digraph(dbn.size, edges), dbn.size)


def project(dbn: MonomialDbn, net: DnfNetwork, z_state: BitState) -> BitState:
    """x(t+1) from the monomial state at time t."""
    if z_state.n != dbn.size:
        raise ValueError(f"state width {z_state.n} does not match closure ({dbn.size})")
    idx = dbn.index
    return BitState.from_bits(any(z_state[idx[z]] for z in f) for f in net.functions)
