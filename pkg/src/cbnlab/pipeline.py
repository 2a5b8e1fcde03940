"""Orbit prediction for graphs that still carry in-degree-0 vertices.

Trimmed vertices are 1 from step ``depth`` on, after which the kept part
runs the trimmed CBN.  So: simulate ``depth`` steps, drop the trimmed bits,
predict there, and put the ones back.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .dynamics import BitState, PeriodicOrbit, TrimResult, step_int, trim
from .graph import Digraph
from .necklaces import canonicalize
from .omega import Predictor, transition_bound
from .reduction import ReducedSystem, build_reduced

__all__ = ["Prepared", "prepare", "trim_depth"]


def trim_depth(g: Digraph, removed: frozenset[int]) -> int:
    """Steps after which every trimmed vertex is 1 for good."""
    if not removed:
        return 0
    level: dict[int, int] = {}
    pending = sorted(removed)
    while pending:
        later = []
        for v in pending:
            preds = [w for w in g.in_nbrs[v] if w != v]
            if all(w in level for w in preds):
                level[v] = 1 + max((level[w] for w in preds), default=-1)
            else:
                later.append(v)
        if len(later) == len(pending):  # pragma: no cover - trim guarantees a DAG
            raise RuntimeError("trimmed vertices are not acyclic")
        pending = later
    return max(level.values()) + 1


@dataclass
class Prepared:
    g: Digraph
    trimmed: TrimResult
    depth: int

    @property
    def core(self) -> Digraph:
        return self.trimmed.graph

    @property
    def kept(self) -> list[int]:
        return self.trimmed.kept

    @cached_property
    def rs(self) -> ReducedSystem | None:
        return build_reduced(self.core) if self.core.n else None

    @cached_property
    def predictor(self) -> Predictor | None:
        return Predictor(self.core, self.rs) if self.rs is not None else None

    @cached_property
    def removed_mask(self) -> int:
        return sum(self.g.bit(v) for v in self.trimmed.removed)

    def transition_bound(self) -> int:
        return self.depth + (transition_bound(self.rs) if self.rs is not None else 0)

    def to_core(self, x0: BitState) -> BitState:
        x = x0.value
        for _ in range(self.depth):
            x = step_int(self.g, x)
        return BitState(self.g.n, x).restrict(self.kept)

    def to_full(self, xc: int) -> int:
        nc = self.core.n
        out = self.removed_mask
        for i, v in enumerate(self.kept):
            if (xc >> (nc - 1 - i)) & 1:
                out |= self.g.bit(v)
        return out

    def predict(self, x0: BitState) -> tuple[PeriodicOrbit, BitState]:
        if x0.n != self.g.n:
            raise ValueError(f"state width {x0.n} does not match graph size {self.g.n}")
        if self.predictor is None:
            ones = BitState.ones(self.g.n)
            return PeriodicOrbit((ones,)), ones
        orbit, entry = self.predictor.predict(self.to_core(x0))
        full = [BitState(self.g.n, self.to_full(s.value)) for s in orbit.states]
        return PeriodicOrbit.from_cycle(full), BitState(self.g.n, self.to_full(entry.value))

    def necklaces(self, x: BitState) -> list[dict]:
        """Necklace of each positive strong component for an orbit state ``x``."""
        if self.rs is None:
            return []
        xc = x.restrict(self.kept)
        out = []
        for i, classes in enumerate(self.rs.cp.classes):
            if self.rs.cp.loop_numbers[i] == 0:
                continue
            word = canonicalize([xc[min(c)] for c in classes]).word
            verts = sorted(self.kept[v] for v in self.rs.scd.components[i])
            out.append({"vertices": verts, "necklace": word})
        return out

    # vectorised helpers for exhaustive sweeps

    def restrict_array(self, xs: np.ndarray) -> np.ndarray:
        dt = xs.dtype.type
        n, nc = self.g.n, self.core.n
        out = np.zeros_like(xs)
        for i, v in enumerate(self.kept):
            out |= ((xs >> dt(n - 1 - v)) & dt(1)) << dt(nc - 1 - i)
        return out

    def expand_array(self, xc: np.ndarray) -> np.ndarray:
        dt = xc.dtype.type
        n, nc = self.g.n, self.core.n
        out = np.full_like(xc, dt(self.removed_mask))
        for i, v in enumerate(self.kept):
            out |= ((xc >> dt(nc - 1 - i)) & dt(1)) << dt(n - 1 - v)
        return out


def prepare(g: Digraph) -> Prepared:
    tr = trim(g)
    return Prepared(g, tr, trim_depth(g, tr.removed))
