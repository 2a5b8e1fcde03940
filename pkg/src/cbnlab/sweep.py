"""Vectorised exhaustive sweeps over all 2^n states.

The state-transition map of a CBN is a functional graph on 2^n nodes; with
numpy we can build it as an index array and read off transients, periods and
orbit identities for every initial state at once.  This is the batch oracle
behind ``verify --exhaustive``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .graph import Digraph
from .reduction import ReducedSystem

__all__ = [
    "DEFAULT_MAX_N",
    "transition_table",
    "table_power",
    "Sweep",
    "sweep",
    "induce_array",
    "lift_array",
    "agreement_all",
]

DEFAULT_MAX_N = 24


def _dtype(n: int):
    return np.uint32 if n <= 32 else np.uint64


def apply_step(g: Digraph, xs: np.ndarray) -> np.ndarray:
    dt = xs.dtype.type
    out = np.zeros_like(xs)
    for v, m in enumerate(g.in_masks):
        m = dt(m)
        out |= ((xs & m) == m).astype(xs.dtype) << dt(g.n - 1 - v)
    return out


def transition_table(g: Digraph, max_n: int = DEFAULT_MAX_N) -> np.ndarray:
    """``succ[x]`` is the packed successor of packed state ``x``."""
    if g.n > max_n:
        raise ValueError(f"exhaustive sweep over 2^{g.n} states exceeds the cap 2^{max_n}")
    xs = np.arange(2**g.n, dtype=_dtype(g.n))
    return apply_step(g, xs)


def table_power(succ: np.ndarray, k: int) -> np.ndarray:
    """The k-fold composition of a transition table."""
    result = np.arange(len(succ), dtype=succ.dtype)
    base = succ
    while k:
        if k & 1:
            result = base[result]
        k >>= 1
        if k:
            base = base[base]
    return result


@dataclass
class Sweep:
    """Per-state transient, period and orbit id (its least state)."""

    succ: np.ndarray
    on_cycle: np.ndarray
    transient: np.ndarray
    orbit_id: np.ndarray
    period: np.ndarray

    @cached_property
    def orbit_ids(self) -> np.ndarray:
        return np.unique(self.orbit_id)

    @property
    def n_orbits(self) -> int:
        return len(self.orbit_ids)

    def periods(self) -> set[int]:
        return set(int(p) for p in np.unique(self.period))

    def orbit_states(self, oid: int) -> list[int]:
        """States of an orbit in trajectory order, starting at its least state."""
        out = [int(oid)]
        x = int(self.succ[oid])
        while x != oid:
            out.append(x)
            x = int(self.succ[x])
        return out


def sweep(succ: np.ndarray) -> Sweep:
    size = len(succ)
    alive = np.ones(size, dtype=bool)
    while True:
        img = np.zeros(size, dtype=bool)
        img[succ[alive]] = True
        if np.array_equal(img, alive):
            break
        alive = img
    dist = np.where(alive, 0, -1).astype(np.int64)
    while True:
        todo = dist < 0
        if not todo.any():
            break
        ready = todo & (dist[succ] >= 0)
        dist[ready] = dist[succ[ready]] + 1
    label = np.arange(size, dtype=succ.dtype)
    jump = succ.copy()
    span = 1
    while span < size:
        label = np.minimum(label, label[jump])
        jump = jump[jump]
        span *= 2
    landed = table_power(succ, int(dist.max()))
    orbit_id = label[landed]
    counts = np.bincount(orbit_id[alive].astype(np.int64), minlength=size)
    period = counts[orbit_id]
    return Sweep(succ, alive, dist, orbit_id, period)


def induce_array(rs: ReducedSystem, xs: np.ndarray) -> np.ndarray:
    dt = xs.dtype.type
    nh = rs.h.n
    ys = np.zeros_like(xs)
    for u, m in enumerate(rs.class_masks):
        m = dt(m)
        ys |= ((xs & m) == m).astype(xs.dtype) << dt(nh - 1 - u)
    return ys


def lift_array(rs: ReducedSystem, ys: np.ndarray) -> np.ndarray:
    dt = ys.dtype.type
    nh = rs.h.n
    xs = np.zeros_like(ys)
    for u, m in enumerate(rs.class_masks):
        bit = (ys >> dt(nh - 1 - u)) & dt(1)
        xs |= np.where(bit.astype(bool), dt(m), dt(0))
    return xs


def _rotate_array(rs: ReducedSystem, ys: np.ndarray) -> tuple[np.ndarray, int]:
    """Cyclic shift of every positive cycle by one position; also the mask of
    positive-cycle bits."""
    dt = ys.dtype.type
    nh = rs.h.n
    out = np.zeros_like(ys)
    mask = 0
    for c in rs.cycles:
        if not c.positive:
            continue
        p = c.length
        for j, u in enumerate(c.vertices):
            prev = c.vertices[(j - 1) % p]
            out |= ((ys >> dt(nh - 1 - prev)) & dt(1)) << dt(nh - 1 - u)
            mask |= 1 << (nh - 1 - u)
    return out, mask


@dataclass
class AgreementSweep:
    states: np.ndarray
    N: np.ndarray
    class_constancy: np.ndarray
    rotation: np.ndarray
    same_period: np.ndarray
    sweep_g: Sweep
    sweep_h: Sweep

    @property
    def passed(self) -> np.ndarray:
        return self.class_constancy & self.rotation & self.same_period


def agreement_all(rs: ReducedSystem, max_n: int = DEFAULT_MAX_N) -> AgreementSweep:
    """Class constancy and rotation over ``[N, N + 2 lcm]`` for every state."""
    sg = sweep(transition_table(rs.g, max_n))
    sh = sweep(transition_table(rs.h, max_n))
    xs = np.arange(2**rs.g.n, dtype=sg.succ.dtype)
    ys = induce_array(rs, xs).astype(sh.succ.dtype)
    N = np.maximum(sg.transient, sh.transient[ys])
    window = 2 * rs.n_g
    ok4 = np.ones(len(xs), dtype=bool)
    ok5 = np.ones(len(xs), dtype=bool)
    x, y = xs.copy(), ys.copy()
    for t in range(int(N.max()) + window + 1):
        active = (N <= t) & (t <= N + window)
        y_next = sh.succ[y]
        if active.any():
            ok4 &= ~active | (x == lift_array(rs, y).astype(x.dtype))
            rot, mask = _rotate_array(rs, y)
            m = y.dtype.type(mask)
            ok5 &= ~active | ((y_next & m) == (rot & m))
        x = sg.succ[x]
        y = y_next
    same = sg.period == sh.period[ys]
    return AgreementSweep(xs, N, ok4, ok5, same, sg, sh)
