"""The reduced system: one vertex per equivalence class, each strong
component collapsed onto a cycle of length equal to its loop number."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, reduce

from .dynamics import BitState, find_orbit, step_int
from .graph import ClassPartition, Digraph, SccDecomposition, class_partition, scc_decompose

__all__ = [
    "HCycle",
    "ReducedSystem",
    "AgreementReport",
    "build_reduced",
    "induce_state",
    "lift_state",
    "verify_theorem1",
    "lcm_all",
]


def lcm_all(values) -> int:
    return reduce(math.lcm, values, 1)


@dataclass(frozen=True)
class HCycle:
    """Strong component of H: ``vertices[j]`` is u_{i_j}; length 0 means a
    lone vertex without self-arc."""

    component: int
    vertices: tuple[int, ...]
    length: int

    @property
    def positive(self) -> bool:
        return self.length > 0


@dataclass(frozen=True)
class ReducedSystem:
    g: Digraph
    h: Digraph
    scd: SccDecomposition
    cp: ClassPartition
    cycles: tuple[HCycle, ...]
    class_of: tuple[frozenset[int], ...]
    h_of: tuple[int, ...]  # G vertex -> H vertex

    @cached_property
    def class_masks(self) -> tuple[int, ...]:
        """Packed G-mask of each H-vertex's class."""
        return tuple(sum(self.g.bit(v) for v in c) for c in self.class_of)

    @cached_property
    def cycle_of(self) -> tuple[tuple[int, int], ...]:
        """H vertex -> (component index, position j)."""
        out = [(0, 0)] * self.h.n
        for c in self.cycles:
            for j, u in enumerate(c.vertices):
                out[u] = (c.component, j)
        return tuple(out)

    @property
    def loop_numbers(self) -> tuple[int, ...]:
        return self.cp.loop_numbers

    @cached_property
    def n_g(self) -> int:
        """lcm of the positive loop numbers."""
        return lcm_all(p for p in self.cp.loop_numbers if p > 0)

    @cached_property
    def zero_loop_vertices(self) -> tuple[int, ...]:
        return tuple(c.vertices[0] for c in self.cycles if not c.positive)

    def describe(self) -> dict:
        return {
            "n": self.h.n,
            "edges": sorted([u, v] for u, v in self.h.edges),
            "cycles": [
                {"component": c.component, "length": c.length, "vertices": list(c.vertices)}
                for c in self.cycles
            ],
            "class_of": [sorted(c) for c in self.class_of],
        }


def build_reduced(g: Digraph) -> ReducedSystem:
    """Construct H: SCD, loop numbers, class partition, then class-wise edges."""
    untrimmed = [v for v in range(g.n) if not g.in_nbrs[v]]
    if untrimmed:
        raise ValueError(
            f"vertices {untrimmed[:10]} have no in-neighbour; trim the graph first"
        )
    scd = scc_decompose(g)
    cp = class_partition(g, scd)
    cycles = []
    class_of: list[frozenset[int]] = []
    h_of = [0] * g.n
    for i, classes in enumerate(cp.classes):
        start = len(class_of)
        for c in classes:
            for v in c:
                h_of[v] = len(class_of)
            class_of.append(c)
        cycles.append(HCycle(i, tuple(range(start, len(class_of))), cp.loop_numbers[i]))
    # every G-edge maps onto an H-edge; internal edges land on the cycle edges
    h_edges = {(h_of[u], h_of[v]) for u, v in g.edges}
    h = Digraph(len(class_of), h_edges)
    return ReducedSystem(g, h, scd, cp, tuple(cycles), tuple(class_of), tuple(h_of))


def induce_state(rs: ReducedSystem, x: BitState) -> BitState:
    """y_{i_j} = AND of x over the class [v_{i_j}]."""
    if x.n != rs.g.n:
        raise ValueError(f"state width {x.n} does not match G ({rs.g.n})")
    return BitState(rs.h.n, _induce_int(rs, x.value))


def _induce_int(rs: ReducedSystem, x: int) -> int:
    y = 0
    nh = rs.h.n
    for u, m in enumerate(rs.class_masks):
        if x & m == m:
            y |= 1 << (nh - 1 - u)
    return y


def lift_state(rs: ReducedSystem, y: BitState) -> BitState:
    """Every G-vertex of class [v_{i_j}] takes y_{i_j}."""
    if y.n != rs.h.n:
        raise ValueError(f"state width {y.n} does not match H ({rs.h.n})")
    return BitState(rs.g.n, _lift_int(rs, y.value))


def _lift_int(rs: ReducedSystem, y: int) -> int:
    x = 0
    nh = rs.h.n
    for u, m in enumerate(rs.class_masks):
        if (y >> (nh - 1 - u)) & 1:
            x |= m
    return x


@dataclass
class AgreementReport:
    x0: str
    N: int
    transient_g: int
    transient_h: int
    period_g: int
    period_h: int
    window: int
    class_constancy: bool = True
    rotation: bool = True
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.class_constancy and self.rotation and self.period_g == self.period_h

    def as_dict(self) -> dict:
        return {
            "x0": self.x0,
            "N": self.N,
            "transient_g": self.transient_g,
            "transient_h": self.transient_h,
            "period_g": self.period_g,
            "period_h": self.period_h,
            "window": self.window,
            "class_constancy": self.class_constancy,
            "rotation": self.rotation,
            "passed": self.passed,
            "failures": list(self.failures),
        }


def verify_theorem1(g: Digraph, x0: BitState, rs: ReducedSystem | None = None) -> AgreementReport:
    """Simulate G and H side by side and check class constancy and rotation
    over ``[N, N + 2 lcm]`` where N is the later of the two transients."""
    if rs is None:
        rs = build_reduced(g)
    y0 = induce_state(rs, x0)
    hit_g = find_orbit(g, x0)
    hit_h = find_orbit(rs.h, y0)
    N = max(hit_g.transient, hit_h.transient)
    window = 2 * rs.n_g
    rep = AgreementReport(str(x0), N, hit_g.transient, hit_h.transient, hit_g.period, hit_h.period, window)
    x, y = x0.value, y0.value
    for _ in range(N):
        x = step_int(g, x)
        y = step_int(rs.h, y)
    nh = rs.h.n
    positive = [c for c in rs.cycles if c.positive]
    for t in range(N, N + window + 1):
        if x != _lift_int(rs, y) and rep.class_constancy:
            rep.class_constancy = False
            rep.failures.append(f"class constancy fails at t={t}")
        y_next = step_int(rs.h, y)
        if rep.rotation:
            for c in positive:
                p = c.length
                for j, u in enumerate(c.vertices):
                    prev = c.vertices[(j - 1) % p]
                    if (y_next >> (nh - 1 - u)) & 1 != (y >> (nh - 1 - prev)) & 1:
                        rep.rotation = False
                        rep.failures.append(f"rotation fails at t={t} on component {c.component}")
                        break
                if not rep.rotation:
                    break
        x = step_int(g, x)
        y = y_next
    if hit_g.period != hit_h.period:
        rep.failures.append(f"periods differ: G {hit_g.period} vs H {hit_h.period}")
    return rep
