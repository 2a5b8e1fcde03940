"""Digraphs and the structural pieces the reduction needs.

Vertices are the integers ``0..n-1``.  Everything here is immutable once
built, so a :class:`Digraph` (and the decompositions derived from it) can be
shared freely between threads.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

__all__ = [
    "Digraph",
    "SccDecomposition",
    "ClassPartition",
    "CycleListing",
    "weakly_connected_components",
    "scc_decompose",
    "loop_number",
    "enumerate_cycles",
    "class_partition",
    "DEFAULT_MAX_CYCLES",
]

DEFAULT_MAX_CYCLES = 10**6


class Digraph:
    """A directed graph on vertices ``0..n-1`` (self-arcs allowed)."""

    __slots__ = ("n", "edges", "in_nbrs", "out_nbrs", "__dict__")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        es = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
            es.add((u, v))
        self.n = n
        self.edges: frozenset[tuple[int, int]] = frozenset(es)
        ins: list[list[int]] = [[] for _ in range(n)]
        outs: list[list[int]] = [[] for _ in range(n)]
        for u, v in sorted(es):
            outs[u].append(v)
            ins[v].append(u)
        self.in_nbrs: tuple[tuple[int, ...], ...] = tuple(map(tuple, ins))
        self.out_nbrs: tuple[tuple[int, ...], ...] = tuple(map(tuple, outs))

    def __repr__(self) -> str:
        return f"Digraph(n={self.n}, edges={sorted(self.edges)})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Digraph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __len__(self) -> int:
        return self.n

    @property
    def m(self) -> int:
        return len(self.edges)

    def bit(self, v: int) -> int:
        """Bit of vertex ``v`` in the packed state encoding (vertex 0 is the MSB)."""
        return 1 << (self.n - 1 - v)

    @cached_property
    def in_masks(self) -> tuple[int, ...]:
        """Packed in-neighbourhood of every vertex."""
        return tuple(sum(self.bit(u) for u in nb) for nb in self.in_nbrs)

    def has_self_arc(self, v: int) -> bool:
        return (v, v) in self.edges

    def in_neighborhood(self, vertices: Iterable[int], k: int = 1) -> set[int]:
        """The k-step in-neighbourhood of a vertex set (k = 0 returns the set)."""
        cur = set(vertices)
        for _ in range(k):
            cur = {u for v in cur for u in self.in_nbrs[v]}
        return cur

    def out_neighborhood(self, vertices: Iterable[int], k: int = 1) -> set[int]:
        cur = set(vertices)
        for _ in range(k):
            cur = {w for v in cur for w in self.out_nbrs[v]}
        return cur

    def subgraph(self, vertices: Iterable[int]) -> tuple["Digraph", list[int]]:
        """Induced subgraph with dense ids; also returns new id -> old id."""
        keep = sorted(set(vertices))
        index = {v: i for i, v in enumerate(keep)}
        sub_edges = [(index[u], index[v]) for u, v in self.edges if u in index and v in index]
        return Digraph(len(keep), sub_edges), keep

    def reversed(self) -> "Digraph":
        return Digraph(self.n, ((v, u) for u, v in self.edges))


def weakly_connected_components(g: Digraph) -> list[tuple[Digraph, list[int]]]:
    """Split ``g`` into weakly connected pieces, ordered by smallest vertex id."""
    seen = [False] * g.n
    pieces = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        queue = deque([s])
        comp = []
        while queue:
            v = queue.popleft()
            comp.append(v)
            for w in g.out_nbrs[v] + g.in_nbrs[v]:
                if not seen[w]:
                    seen[w] = True
                    queue.append(w)
        pieces.append(g.subgraph(comp))
    return pieces


def _tarjan(g: Digraph) -> list[list[int]]:
    # Iterative Tarjan; recursion depth would otherwise be bounded by n.
    index = [-1] * g.n
    low = [0] * g.n
    on_stack = [False] * g.n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(g.n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            nbrs = g.out_nbrs[v]
            recursed = False
            while i < len(nbrs):
                w = nbrs[i]
                i += 1
                if index[w] == -1:
                    work.append((v, i))
                    work.append((w, 0))
                    recursed = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if recursed:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return comps


@dataclass(frozen=True)
class SccDecomposition:
    """Strong components, their condensation, and the level partition.

    Components are numbered by their smallest vertex id. ``level[i]`` is 0 for
    components without predecessors and ``1 + max(level of predecessors)``
    otherwise, which realises the chain S^0, S^1, ... of immediate successors.
    """

    components: tuple[frozenset[int], ...]
    comp_of: tuple[int, ...]
    condensation: frozenset[tuple[int, int]]
    level: tuple[int, ...]

    @property
    def q(self) -> int:
        return len(self.components)

    @property
    def L(self) -> int:
        return max(self.level, default=0)

    @cached_property
    def predecessors(self) -> tuple[tuple[int, ...], ...]:
        preds: list[list[int]] = [[] for _ in self.components]
        for a, b in sorted(self.condensation):
            preds[b].append(a)
        return tuple(map(tuple, preds))

    @cached_property
    def successors(self) -> tuple[tuple[int, ...], ...]:
        succs: list[list[int]] = [[] for _ in self.components]
        for a, b in sorted(self.condensation):
            succs[a].append(b)
        return tuple(map(tuple, succs))

    @cached_property
    def topological_order(self) -> tuple[int, ...]:
        return tuple(sorted(range(self.q), key=lambda i: (self.level[i], i)))

    def levels(self) -> list[list[int]]:
        """Component indices grouped by level: ``[S^0, S^1, ..., S^L]``."""
        out: list[list[int]] = [[] for _ in range(self.L + 1)] if self.q else []
        for i, lv in enumerate(self.level):
            out[lv].append(i)
        return out


def scc_decompose(g: Digraph) -> SccDecomposition:
    raw = _tarjan(g)
    comps = sorted((frozenset(c) for c in raw), key=min)
    comp_of = [0] * g.n
    for i, c in enumerate(comps):
        for v in c:
            comp_of[v] = i
    cond = frozenset(
        (comp_of[u], comp_of[v]) for u, v in g.edges if comp_of[u] != comp_of[v]
    )
    preds: list[list[int]] = [[] for _ in comps]
    indeg = [0] * len(comps)
    succs: list[list[int]] = [[] for _ in comps]
    for a, b in cond:
        preds[b].append(a)
        succs[a].append(b)
        indeg[b] += 1
    level = [0] * len(comps)
    queue = deque(i for i in range(len(comps)) if indeg[i] == 0)
    while queue:
        a = queue.popleft()
        for b in succs[a]:
            level[b] = max(level[b], level[a] + 1)
            indeg[b] -= 1
            if indeg[b] == 0:
                queue.append(b)
    return SccDecomposition(tuple(comps), tuple(comp_of), cond, tuple(level))


def _bfs_dist(g: Digraph, anchor: int, inside: frozenset[int] | set[int], reverse: bool = False) -> dict[int, int]:
    nbrs = g.in_nbrs if reverse else g.out_nbrs
    dist = {anchor: 0}
    queue = deque([anchor])
    while queue:
        v = queue.popleft()
        for w in nbrs[v]:
            if w in inside and w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def _strong_labels(g: Digraph, comp: frozenset[int]) -> tuple[int, dict[int, int]]:
    if not comp:
        raise ValueError("component must be non-empty")
    anchor = min(comp)
    dist = _bfs_dist(g, anchor, comp)
    if len(dist) != len(comp) or len(_bfs_dist(g, anchor, comp, reverse=True)) != len(comp):
        raise ValueError(f"vertex set {sorted(comp)} is not strongly connected")
    return anchor, dist


def loop_number(g: Digraph, comp: Iterable[int]) -> int:
    """Gcd of the cycle lengths inside a strongly connected vertex set.

    Uses BFS labels d from the smallest vertex: the gcd of d(u) + 1 - d(v)
    over internal edges equals the gcd of all cycle lengths. A lone vertex
    without a self-arc gives 0.
    """
    comp = frozenset(comp)
    _, dist = _strong_labels(g, comp)
    p = 0
    for u in comp:
        du = dist[u]
        for v in g.out_nbrs[u]:
            if v in comp:
                p = math.gcd(p, abs(du + 1 - dist[v]))
    return p


@dataclass(frozen=True)
class CycleListing:
    cycles: tuple[tuple[int, ...], ...]
    truncated: bool

    def lengths(self) -> list[int]:
        return [len(c) for c in self.cycles]


def enumerate_cycles(g: Digraph, comp: Iterable[int] | None = None, cap: int = DEFAULT_MAX_CYCLES) -> CycleListing:
    """Johnson's elementary-circuit enumeration restricted to ``comp``.

    Each cycle is reported starting from its smallest vertex. Stops after
    ``cap`` cycles and sets ``truncated``.
    """
    verts = frozenset(range(g.n) if comp is None else comp)
    found: list[tuple[int, ...]] = []
    order = sorted(verts)
    for s in order:
        # strong component of s in the subgraph induced by vertices >= s
        allowed = frozenset(v for v in verts if v >= s)
        fwd = _bfs_dist(g, s, allowed)
        bwd = _bfs_dist(g, s, allowed, reverse=True)
        scc = frozenset(fwd) & frozenset(bwd)
        if not any(w in scc for w in g.out_nbrs[s]):
            continue
        blocked = {v: False for v in scc}
        block_map: dict[int, set[int]] = {v: set() for v in scc}
        path = [s]
        blocked[s] = True
        stack = [(s, iter([w for w in g.out_nbrs[s] if w in scc]))]
        closed = [False]
        while stack:
            v, it = stack[-1]
            w = next(it, None)
            if w is not None:
                if w == s:
                    if len(found) >= cap:
                        return CycleListing(tuple(found), True)
                    found.append(tuple(path))
                    closed[-1] = True
                elif not blocked[w]:
                    path.append(w)
                    blocked[w] = True
                    closed.append(False)
                    stack.append((w, iter([x for x in g.out_nbrs[w] if x in scc])))
                continue
            stack.pop()
            was_closed = closed.pop()
            if was_closed:
                # unblock cascade
                pending = [v]
                while pending:
                    u = pending.pop()
                    if blocked[u]:
                        blocked[u] = False
                        pending.extend(block_map[u])
                        block_map[u].clear()
            else:
                for x in g.out_nbrs[v]:
                    if x in scc:
                        block_map[x].add(v)
            path.pop()
            if closed:
                closed[-1] = closed[-1] or was_closed
    return CycleListing(tuple(found), False)


@dataclass(frozen=True)
class ClassPartition:
    """Equivalence classes of every strong component.

    ``classes[i][j]`` is the class ``[v_{i_j}]``; class 0 holds the component's
    smallest vertex and edges inside a component go from class j to class
    ``(j + 1) % p_i``. Lone vertices without a self-arc have ``p_i = 0`` and a
    single singleton class.
    """

    loop_numbers: tuple[int, ...]
    classes: tuple[tuple[frozenset[int], ...], ...]
    class_of: tuple[tuple[int, int], ...]

    def n_classes(self) -> int:
        return sum(len(c) for c in self.classes)


def class_partition(g: Digraph, scd: SccDecomposition | None = None) -> ClassPartition:
    if scd is None:
        scd = scc_decompose(g)
    loops = []
    classes = []
    class_of: list[tuple[int, int]] = [(0, 0)] * g.n
    for i, comp in enumerate(scd.components):
        anchor, dist = _strong_labels(g, comp)
        p = 0
        for u in comp:
            for v in g.out_nbrs[u]:
                if v in comp:
                    p = math.gcd(p, abs(dist[u] + 1 - dist[v]))
        loops.append(p)
        if p == 0:
            cls: Sequence[set[int]] = [set(comp)]
        else:
            cls = [set() for _ in range(p)]
            for v in comp:
                cls[dist[v] % p].add(v)
        frozen = tuple(frozenset(c) for c in cls)
        classes.append(frozen)
        for j, c in enumerate(frozen):
            for v in c:
                class_of[v] = (i, j)
    return ClassPartition(tuple(loops), tuple(classes), tuple(class_of))
