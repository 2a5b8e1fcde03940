"""Closed-form orbit prediction on reduced systems.

``omega`` handles an elementary digraph (two cycles and one connector),
``hadamard`` merges contributions that land on the same cycle, and
``omega_global`` composes both level by level over the whole reduced system.
:class:`Predictor` turns the result into the periodic orbit of the original
network without simulating the transient.

The formulas only ever combine bits with ``&``, so they run unchanged on
plain 0/1 ints and on :class:`Conj`, a symbolic conjunction used to compile
the whole map into one AND-mask per output bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, reduce
from typing import Sequence

import numpy as np

from .dynamics import BitState, PeriodicOrbit
from .graph import Digraph
from .reduction import HCycle, ReducedSystem, _induce_int, build_reduced, lcm_all

__all__ = [
    "ElementaryPart",
    "OmegaResult",
    "Conj",
    "Predictor",
    "elementary_parts",
    "omega",
    "omega_path",
    "hadamard",
    "omega_global",
    "positive_levels",
    "zero_loop_depth",
    "transition_bound",
    "predict_orbit",
]


class Conj:
    """A symbolic AND of input bits, stored as a mask of their positions."""

    __slots__ = ("mask",)

    def __init__(self, mask: int = 0):
        self.mask = mask

    def __and__(self, other: "Conj") -> "Conj":
        return Conj(self.mask | other.mask)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Conj) and other.mask == self.mask

    def __hash__(self) -> int:
        return hash(self.mask)

    def __repr__(self) -> str:
        return f"Conj({self.mask:#x})"


@dataclass(frozen=True)
class ElementaryPart:
    """Connector from an upper cycle into a lower one.

    ``source`` lies on cycle ``minus``, ``target`` on cycle ``plus`` and
    ``path`` lists the zero-loop vertices c_0..c_{m-1} in between (empty for a
    single edge).  The cycles are relabelled so that the connector leaves
    a_{p_- - 1} and enters b_0.
    """

    minus: HCycle
    plus: HCycle
    source: int
    target: int
    path: tuple[int, ...] = ()

    @property
    def p_minus(self) -> int:
        return self.minus.length

    @property
    def p_plus(self) -> int:
        return self.plus.length

    @property
    def m(self) -> int:
        return len(self.path)

    @cached_property
    def a(self) -> tuple[int, ...]:
        """H vertices a_0..a_{p_- - 1} of the upper cycle."""
        p = self.p_minus
        s = self.minus.vertices.index(self.source)
        return tuple(self.minus.vertices[(s - (p - 1) + k) % p] for k in range(p))

    @cached_property
    def b(self) -> tuple[int, ...]:
        """H vertices b_0..b_{p_+ - 1} of the lower cycle."""
        p = self.p_plus
        t = self.plus.vertices.index(self.target)
        return tuple(self.plus.vertices[(t + k) % p] for k in range(p))

    @property
    def n_j(self) -> int:
        return math.lcm(self.p_minus, self.p_plus)

    def to_cycle_order(self, values_b: Sequence) -> list:
        """Re-index values given on b_0.. into the lower cycle's own order."""
        out = [None] * self.p_plus
        pos = {u: j for j, u in enumerate(self.plus.vertices)}
        for k, u in enumerate(self.b):
            out[pos[u]] = values_b[k]
        return out

    def from_cycle_order(self, values: Sequence, upper: bool) -> list:
        cyc = self.minus if upper else self.plus
        pos = {u: j for j, u in enumerate(cyc.vertices)}
        return [values[pos[u]] for u in (self.a if upper else self.b)]


def _and_all(values):
    return reduce(lambda a, b: a & b, values)


def _omega_plus(xm: Sequence, x0: Sequence, xp: Sequence) -> list:
    pm, pp, m = len(xm), len(xp), len(x0)
    nj = math.lcm(pm, pp)
    out = []
    for i in range(pp):
        terms = [xp[i]]
        head = (i + m) // pp
        # zero-loop path vertices whose value reaches b_i at multiples of p_+
        for j in range(1, head + 1):
            terms.append(x0[(i - j * pp) % m])
        # a full coset of upper-cycle vertices; a_k sits m steps behind c_0
        for j in range(head + 1, head + nj // pp + 1):
            terms.append(xm[(i - j * pp + m) % pm])
        out.append(_and_all(terms))
    return out


def _check_widths(part: ElementaryPart, xm: Sequence, xp: Sequence, x0: Sequence = ()) -> None:
    if len(xm) != part.p_minus or len(xp) != part.p_plus or len(x0) != part.m:
        raise ValueError(
            f"widths ({len(xm)}, {len(x0)}, {len(xp)}) do not match part "
            f"({part.p_minus}, {part.m}, {part.p_plus})"
        )


def omega(part: ElementaryPart, x_minus: Sequence, x_plus: Sequence) -> tuple:
    """omega_+ of a single-edge elementary digraph (relabelled indexing).

    omega_- is the identity and is not returned.
    """
    if part.m:
        raise ValueError("connector is a path; use omega_path")
    _check_widths(part, x_minus, x_plus)
    return tuple(_omega_plus(x_minus, (), x_plus))


def omega_path(part: ElementaryPart, x_minus: Sequence, x_path: Sequence, x_plus: Sequence) -> tuple[tuple, tuple]:
    """(omega_0, omega_+) for a connector through m >= 1 zero-loop vertices."""
    if not part.m:
        raise ValueError("connector is a single edge; use omega")
    _check_widths(part, x_minus, x_plus, x_path)
    pm = part.p_minus
    w0 = tuple(x_minus[i % pm] for i in range(part.m))
    return w0, tuple(_omega_plus(x_minus, x_path, x_plus))


def hadamard(a: Sequence, b: Sequence) -> tuple:
    if len(a) != len(b):
        raise ValueError(f"width mismatch: {len(a)} vs {len(b)}")
    return tuple(x & y for x, y in zip(a, b))


def positive_levels(rs: ReducedSystem) -> dict[int, int]:
    """Level of each positive-length cycle in the order restricted to them."""
    scd = rs.scd
    best = [-1] * scd.q  # deepest positive level at or above each component
    levels = {}
    for c in scd.topological_order:
        above = max((best[d] for d in scd.predecessors[c]), default=-1)
        if rs.cycles[c].positive:
            levels[c] = above + 1
            best[c] = above + 1
        else:
            best[c] = above
    return levels


def zero_loop_depth(rs: ReducedSystem) -> int:
    """Largest number of zero-loop vertices on any path of H."""
    scd = rs.scd
    depth = [0] * scd.q
    for c in scd.topological_order:
        depth[c] = max((depth[d] for d in scd.predecessors[c]), default=0) + (
            0 if rs.cycles[c].positive else 1
        )
    return max(depth, default=0)


def transition_bound(rs: ReducedSystem) -> int:
    """2^(L-1) N_H plus the zero-loop depth; N_H alone when L = 0."""
    levels = positive_levels(rs)
    L = max(levels.values(), default=0)
    factor = 2 ** (L - 1) if L >= 1 else 1
    return factor * rs.n_g + zero_loop_depth(rs)


def elementary_parts(rs: ReducedSystem, i: int) -> list[ElementaryPart]:
    """Elem(H_i): every edge or zero-loop path from a positive cycle into H_i."""
    plus = rs.cycles[i]
    if not plus.positive:
        raise ValueError(f"component {i} has loop number 0")
    h = rs.h
    comp = [rs.cycle_of[u][0] for u in range(h.n)]
    parts = []

    def walk_up(w: int, suffix: tuple[int, ...], target: int):
        # w is a zero-loop vertex; suffix holds the path below it
        for z in h.in_nbrs[w]:
            cz = rs.cycles[comp[z]]
            if cz.positive:
                parts.append(ElementaryPart(cz, plus, z, target, (w,) + suffix))
            else:
                walk_up(z, (w,) + suffix, target)

    for b in plus.vertices:
        for w in h.in_nbrs[b]:
            if comp[w] == i:
                continue
            cw = rs.cycles[comp[w]]
            if cw.positive:
                parts.append(ElementaryPart(cw, plus, w, b))
            else:
                walk_up(w, (), b)
    if not parts:
        raise ValueError(f"component {i} has no positive predecessor (it lies in S^0)")
    return parts


@dataclass(frozen=True)
class OmegaResult:
    """Values of Omega on each positive cycle, in the cycle's own order."""

    values: dict[int, tuple[int, ...]]

    def __getitem__(self, i: int) -> tuple[int, ...]:
        return self.values[i]

    def as_dict(self) -> dict:
        return {str(i): "".join(map(str, v)) for i, v in sorted(self.values.items())}


class Predictor:
    """Precomputed reduction and Elem sets for repeated orbit prediction."""

    def __init__(self, g: Digraph, rs: ReducedSystem | None = None):
        self.g = g
        self.rs = rs if rs is not None else build_reduced(g)
        levels = positive_levels(self.rs)
        self.levels = levels
        self.order = sorted(levels, key=lambda c: (levels[c], c))
        self.parts = {c: elementary_parts(self.rs, c) for c in self.order if levels[c] > 0}
        self.zero_order = [c for c in self.rs.scd.topological_order if not self.rs.cycles[c].positive]

    # Omega over arbitrary bit algebras

    def _omega_values(self, vals: Sequence) -> dict[int, list]:
        rs = self.rs
        out: dict[int, list] = {}
        for c in self.order:
            cyc = rs.cycles[c]
            own = [vals[u] for u in cyc.vertices]
            if self.levels[c] == 0:
                out[c] = own
                continue
            acc = None
            for part in self.parts[c]:
                xm = part.from_cycle_order(out[part.minus.component], upper=True)
                xp = part.from_cycle_order(own, upper=False)
                x0 = [vals[u] for u in part.path]
                wp = part.to_cycle_order(_omega_plus(xm, x0, xp))
                acc = wp if acc is None else list(hadamard(acc, wp))
            out[c] = acc
        return out

    def omega(self, y: BitState) -> OmegaResult:
        if y.n != self.rs.h.n:
            raise ValueError(f"state width {y.n} does not match H ({self.rs.h.n})")
        vals = y.bits()
        return OmegaResult({c: tuple(v) for c, v in self._omega_values(vals).items()})

    @cached_property
    def omega_masks(self) -> dict[int, list[int]]:
        """AND-masks over H-state bits for every Omega output bit."""
        nh = self.rs.h.n
        sym = [Conj(1 << (nh - 1 - u)) for u in range(nh)]
        return {c: [s.mask for s in v] for c, v in self._omega_values(sym).items()}

    # orbit on H

    def _phase_matrix(self, om: dict[int, Sequence[int]]) -> np.ndarray:
        """One row per orbit state of H, starting at the Omega phase."""
        rs = self.rs
        period = 1
        for c, v in om.items():
            p = len(v)
            d = next(d for d in range(1, p + 1) if p % d == 0 and list(v[d:]) + list(v[:d]) == list(v))
            period = math.lcm(period, d)
        mat = np.zeros((period, rs.h.n), dtype=bool)
        s = np.arange(period)
        for c, v in om.items():
            cyc = rs.cycles[c]
            arr = np.asarray(v, dtype=bool)
            p = cyc.length
            for k, u in enumerate(cyc.vertices):
                mat[:, u] = arr[(k - s) % p]
        h = rs.h
        for c in self.zero_order:
            u = rs.cycles[c].vertices[0]
            col = np.ones(period, dtype=bool)
            for w in h.in_nbrs[u]:
                col &= mat[:, w]
            mat[:, u] = np.roll(col, 1)
        return mat

    def predict(self, x0: BitState) -> tuple[PeriodicOrbit, BitState]:
        """Periodic orbit entered from x0 and its state at the Omega phase."""
        rs = self.rs
        if x0.n != rs.g.n:
            raise ValueError(f"state width {x0.n} does not match G ({rs.g.n})")
        y0 = BitState(rs.h.n, _induce_int(rs, x0.value))
        om = self._omega_values(y0.bits())
        mat_h = self._phase_matrix(om)
        mat_g = mat_h[:, list(rs.h_of)]
        states = _pack_rows(mat_g)
        entry = BitState(rs.g.n, states[0])
        orbit = PeriodicOrbit.from_cycle([BitState(rs.g.n, v) for v in states])
        return orbit, entry

    @cached_property
    def entry_masks_h(self) -> list[int]:
        """AND-masks over H-state bits giving the orbit state at phase 0."""
        rs = self.rs
        h = rs.h
        om = self.omega_masks
        memo: dict[tuple[int, int], int] = {}

        def value(u: int, s: int) -> int:
            c, k = rs.cycle_of[u]
            cyc = rs.cycles[c]
            if cyc.positive:
                return om[c][(k - s) % cyc.length]
            key = (u, s)
            if key not in memo:
                mask = 0
                for w in h.in_nbrs[u]:
                    mask |= value(w, s - 1)
                memo[key] = mask
            return memo[key]

        return [value(u, 0) for u in range(h.n)]

    def predict_entries(self, xs: np.ndarray) -> np.ndarray:
        """Vectorised phase-0 entry states for an array of packed G-states."""
        rs = self.rs
        if rs.g.n > 63:
            raise ValueError("vectorised prediction supports at most 63 vertices")
        xs = np.asarray(xs, dtype=np.uint64)
        nh = rs.h.n
        ys = np.zeros_like(xs)
        for u, m in enumerate(rs.class_masks):
            m = np.uint64(m)
            ys |= ((xs & m) == m).astype(np.uint64) << np.uint64(nh - 1 - u)
        out = np.zeros_like(xs)
        for u, m in enumerate(self.entry_masks_h):
            m = np.uint64(m)
            hit = (ys & m) == m
            out |= np.where(hit, np.uint64(rs.class_masks[u]), np.uint64(0))
        return out


def _pack_rows(mat: np.ndarray) -> list[int]:
    period, n = mat.shape
    pad = (-n) % 8
    if pad:
        mat = np.concatenate([mat, np.zeros((period, pad), dtype=bool)], axis=1)
    packed = np.packbits(mat, axis=1, bitorder="big")
    return [int.from_bytes(row.tobytes(), "big") >> pad for row in packed]


def omega_global(rs: ReducedSystem, y: BitState) -> OmegaResult:
    return Predictor(rs.g, rs).omega(y)


def predict_orbit(g: Digraph, x0: BitState) -> tuple[PeriodicOrbit, BitState]:
    return Predictor(g).predict(x0)
