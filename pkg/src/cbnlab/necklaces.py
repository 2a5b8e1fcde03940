"""Binary necklaces and their correspondence with orbits of strongly
connected CBNs."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .dynamics import BitState, PeriodicOrbit, least_rotation, step_int
from .graph import ClassPartition, Digraph

__all__ = [
    "Necklace",
    "canonicalize",
    "enumerate_necklaces",
    "necklace_count",
    "order",
    "orbit_from_necklace",
    "necklace_from_orbit",
    "DEFAULT_MAX_LENGTH",
]

DEFAULT_MAX_LENGTH = 24


@dataclass(frozen=True, order=True)
class Necklace:
    word: str

    def __post_init__(self):
        if not self.word or set(self.word) - {"0", "1"}:
            raise ValueError(f"bad necklace word {self.word!r}")
        k = least_rotation(self.word)
        if k and self.word[k:] + self.word[:k] != self.word:
            raise ValueError(f"{self.word!r} is not its own least rotation; use canonicalize()")

    @property
    def p(self) -> int:
        return len(self.word)

    def __str__(self) -> str:
        return self.word

    def bits(self) -> tuple[int, ...]:
        return tuple(int(c) for c in self.word)


def canonicalize(bits: str | Iterable[int]) -> Necklace:
    word = bits if isinstance(bits, str) else "".join("1" if b else "0" for b in bits)
    if not word:
        raise ValueError("a necklace needs at least one bead")
    k = least_rotation(word)
    return Necklace(word[k:] + word[:k])


def necklace_count(p: int) -> int:
    """Burnside count (1/p) sum_{d | p} phi(d) 2^(p/d)."""
    if p < 1:
        raise ValueError("length must be positive")
    total = 0
    for d in range(1, p + 1):
        if p % d == 0:
            phi = sum(1 for k in range(1, d + 1) if math.gcd(k, d) == 1)
            total += phi * 2 ** (p // d)
    return total // p


def enumerate_necklaces(p: int, max_length: int = DEFAULT_MAX_LENGTH) -> list[Necklace]:
    """All necklaces of length p, sorted by word."""
    if p < 1:
        raise ValueError("length must be positive")
    if p > max_length:
        raise ValueError(f"length {p} exceeds the cap of {max_length}")
    seen = {canonicalize(format(v, f"0{p}b")).word for v in range(2**p)}
    return [Necklace(w) for w in sorted(seen)]


def order(s: Necklace) -> int:
    """Number of distinct rotations (a divisor of p)."""
    w = s.word
    for d in range(1, s.p + 1):
        if s.p % d == 0 and w[d:] + w[:d] == w:
            return d
    return s.p  # pragma: no cover


def _single_component(cp: ClassPartition) -> tuple[int, tuple[frozenset[int], ...]]:
    if len(cp.classes) != 1:
        raise ValueError("graph must be strongly connected")
    return cp.loop_numbers[0], cp.classes[0]


def orbit_from_necklace(g: Digraph, cp: ClassPartition, s: Necklace) -> PeriodicOrbit:
    """Orbit through the state that is constant ``alpha_j`` on class j."""
    p, classes = _single_component(cp)
    if p == 0 or s.p != p:
        raise ValueError(f"necklace length {s.p} does not match loop number {p}")
    x = 0
    for alpha, cls in zip(s.bits(), classes):
        if alpha:
            for v in cls:
                x |= g.bit(v)
    states = []
    for _ in range(order(s)):
        states.append(BitState(g.n, x))
        x = step_int(g, x)
    return PeriodicOrbit.from_cycle(states)


def necklace_from_orbit(g: Digraph, cp: ClassPartition, o: PeriodicOrbit) -> Necklace:
    p, classes = _single_component(cp)
    if p == 0:
        raise ValueError("loop number is zero")
    x = o.states[0]
    word = []
    for cls in classes:
        vals = {x[v] for v in cls}
        if len(vals) != 1:
            raise ValueError("state is not constant on an equivalence class; not an orbit state")
        word.append(vals.pop())
    return canonicalize(word)
