"""Conjunctive update rule, trajectories and periodic-orbit detection.

States are packed into Python ints with vertex 0 in the most significant of
the ``n`` bits, so integer comparison coincides with lexicographic order of
the bit string ``x_0 x_1 ... x_{n-1}``.  :class:`BitState` wraps such an int
with its width; the hot loops below work on the bare ints.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .graph import ClassPartition, Digraph

__all__ = [
    "BitState",
    "PeriodicOrbit",
    "OrbitHit",
    "TrimResult",
    "trim",
    "step",
    "simulate",
    "find_orbit",
    "class_saturate",
    "least_rotation",
]


@dataclass(frozen=True, slots=True)
class BitState:
    """One bit per vertex.  ``a <= b`` is the entry-wise partial order."""

    n: int
    value: int

    def __post_init__(self):
        if self.n < 0 or self.value < 0 or self.value >> self.n:
            raise ValueError(f"value does not fit in {self.n} bits")

    @classmethod
    def from_string(cls, s: str) -> "BitState":
        s = s.strip()
        if any(c not in "01" for c in s):
            raise ValueError(f"not a binary string: {s!r}")
        return cls(len(s), int(s, 2) if s else 0)

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "BitState":
        bits = list(bits)
        value = 0
        for b in bits:
            value = (value << 1) | (1 if b else 0)
        return cls(len(bits), value)

    @classmethod
    def ones(cls, n: int) -> "BitState":
        return cls(n, (1 << n) - 1)

    @classmethod
    def zeros(cls, n: int) -> "BitState":
        return cls(n, 0)

    def __str__(self) -> str:
        return format(self.value, f"0{self.n}b") if self.n else ""

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, v: int) -> int:
        if not 0 <= v < self.n:
            raise IndexError(v)
        return (self.value >> (self.n - 1 - v)) & 1

    def __iter__(self):
        return (self[v] for v in range(self.n))

    def __le__(self, other: "BitState") -> bool:
        self._check(other)
        return self.value & ~other.value == 0

    def __ge__(self, other: "BitState") -> bool:
        return other <= self

    def __and__(self, other: "BitState") -> "BitState":
        self._check(other)
        return BitState(self.n, self.value & other.value)

    def _check(self, other: "BitState") -> None:
        if self.n != other.n:
            raise ValueError(f"width mismatch: {self.n} vs {other.n}")

    def restrict(self, vertices: Sequence[int]) -> "BitState":
        """The sub-state ``x_{V'}`` listed in the order of ``vertices``."""
        return BitState.from_bits(self[v] for v in vertices)

    def bits(self) -> tuple[int, ...]:
        return tuple(self)


class TrimResult(NamedTuple):
    graph: Digraph
    removed: frozenset[int]
    kept: list[int]


def trim(g: Digraph) -> TrimResult:
    """Delete in-degree-0 vertices, cascading, until none remain.

    Removed vertices hold 1 after finitely many steps; from then on they no
    longer influence the rest.  ``kept[i]`` is the original id of vertex ``i`` of the result.
    """
    indeg = [len(nb) for nb in g.in_nbrs]
    removed = set()
    queue = deque(v for v in range(g.n) if indeg[v] == 0)
    while queue:
        v = queue.popleft()
        removed.add(v)
        for w in g.out_nbrs[v]:
            if w in removed or w == v:
                continue
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    sub, kept = g.subgraph(v for v in range(g.n) if v not in removed)
    return TrimResult(sub, frozenset(removed), kept)


def _step_table(g: Digraph) -> tuple[tuple[int, int], ...]:
    tab = g.__dict__.get("_step_table")
    if tab is None:
        tab = tuple((g.bit(v), m) for v, m in enumerate(g.in_masks))
        g.__dict__["_step_table"] = tab
    return tab


def step_int(g: Digraph, x: int) -> int:
    out = 0
    for bit, m in _step_table(g):
        if x & m == m:
            out |= bit
    return out


def step(g: Digraph, x: BitState) -> BitState:
    """One synchronous update: every vertex takes the AND of its in-neighbours."""
    if x.n != g.n:
        raise ValueError(f"state width {x.n} does not match graph size {g.n}")
    return BitState(g.n, step_int(g, x.value))


def simulate(g: Digraph, x0: BitState, t: int) -> BitState:
    if x0.n != g.n:
        raise ValueError(f"state width {x0.n} does not match graph size {g.n}")
    if t < 0:
        raise ValueError("t must be non-negative")
    x = x0.value
    for _ in range(t):
        x = step_int(g, x)
    return BitState(g.n, x)


def least_rotation(seq: Sequence) -> int:
    """Start index of the lexicographically least rotation (Booth)."""
    n = len(seq)
    if n == 0:
        return 0
    s = list(seq) * 2
    fail = [-1] * (2 * n)
    k = 0
    for j in range(1, 2 * n):
        sj = s[j]
        i = fail[j - k - 1]
        while i != -1 and sj != s[k + i + 1]:
            if sj < s[k + i + 1]:
                k = j - i - 1
            i = fail[i]
        if sj != s[k + i + 1]:
            # i == -1 here
            if sj < s[k]:
                k = j
            fail[j - k] = -1
        else:
            fail[j - k] = i + 1
    return k


@dataclass(frozen=True)
class PeriodicOrbit:
    """A periodic orbit in least-rotation form."""

    states: tuple[BitState, ...]

    @classmethod
    def from_cycle(cls, states: Sequence[BitState]) -> "PeriodicOrbit":
        if not states:
            raise ValueError("an orbit needs at least one state")
        k = least_rotation([s.value for s in states])
        return cls(tuple(states[k:]) + tuple(states[:k]))

    @property
    def period(self) -> int:
        return len(self.states)

    def __contains__(self, x: BitState) -> bool:
        return x in self.states

    def index(self, x: BitState) -> int:
        return self.states.index(x)


@dataclass(frozen=True)
class OrbitHit:
    transient: int
    orbit: PeriodicOrbit
    entry_index: int

    @property
    def period(self) -> int:
        return self.orbit.period

    @property
    def entry(self) -> BitState:
        return self.orbit.states[self.entry_index]


def _brent(g: Digraph, x0: int) -> tuple[int, int]:
    power = lam = 1
    tortoise = x0
    hare = step_int(g, x0)
    while tortoise != hare:
        if power == lam:
            tortoise = hare
            power *= 2
            lam = 0
        hare = step_int(g, hare)
        lam += 1
    tortoise = hare = x0
    for _ in range(lam):
        hare = step_int(g, hare)
    mu = 0
    while tortoise != hare:
        tortoise = step_int(g, tortoise)
        hare = step_int(g, hare)
        mu += 1
    return mu, lam


def find_orbit(g: Digraph, x0: BitState) -> OrbitHit:
    """Minimal transient and exact period via Brent's cycle detection."""
    if x0.n != g.n:
        raise ValueError(f"state width {x0.n} does not match graph size {g.n}")
    mu, lam = _brent(g, x0.value)
    x = x0.value
    for _ in range(mu):
        x = step_int(g, x)
    seq = []
    for _ in range(lam):
        seq.append(BitState(g.n, x))
        x = step_int(g, x)
    k = least_rotation([s.value for s in seq])
    orbit = PeriodicOrbit(tuple(seq[k:]) + tuple(seq[:k]))
    return OrbitHit(mu, orbit, (-k) % lam)


def class_masks(g: Digraph, cp: ClassPartition) -> list[int]:
    return [sum(g.bit(v) for v in c) for comp in cp.classes for c in comp]


def class_saturate(x: BitState, cp: ClassPartition) -> BitState:
    """The map rho: each class is set to the AND of its bits."""
    n = x.n
    out = x.value
    for comp in cp.classes:
        for c in comp:
            m = sum(1 << (n - 1 - v) for v in c)
            if out & m != m:
                out &= ~m
    return BitState(n, out)
