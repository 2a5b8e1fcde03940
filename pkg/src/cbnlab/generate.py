"""Random instances for testing and benchmarks."""

from __future__ import annotations

import random

from .dynamics import trim
from .graph import Digraph, weakly_connected_components

__all__ = [
    "random_strongly_connected",
    "random_weakly_connected",
    "random_reduced",
    "elementary_graph",
    "cycle_graph",
]


def cycle_graph(n: int) -> Digraph:
    return Digraph(n, [(i, (i + 1) % n) for i in range(n)])


def _strong_block(rng: random.Random, p: int, size: int, extra: float) -> list[tuple[int, int]]:
    """Edges of a strongly connected graph on ``size`` vertices whose cycle
    lengths are all multiples of ``p``."""
    if size == 1 and p == 0:
        return []
    if p == 0:
        p = 1
    size = max(size, p)
    classes: list[list[int]] = [[] for _ in range(p)]
    verts = list(range(size))
    rng.shuffle(verts)
    for j in range(p):
        classes[j].append(verts[j])
    for v in verts[p:]:
        classes[rng.randrange(p)].append(v)
    r = max(len(c) for c in classes)
    edges = set()
    walk = [classes[t % p][(t // p) % len(classes[t % p])] for t in range(p * r)]
    for a, b in zip(walk, walk[1:] + walk[:1]):
        edges.add((a, b))
    for j in range(p):
        for a in classes[j]:
            for b in classes[(j + 1) % p]:
                if rng.random() < extra:
                    edges.add((a, b))
    return sorted(edges)


def random_strongly_connected(
    rng: random.Random, n: int, p: int | None = None, extra: float = 0.25
) -> Digraph:
    """Strongly connected digraph on n vertices; loop number is a multiple of p.

    With ``p=None`` a length is drawn from the divisors-friendly range 1..n.
    """
    if p is None:
        p = rng.randint(1, n)
    edges = _strong_block(rng, p, n, extra)
    if n == 1 and not edges and p != 0:
        edges = [(0, 0)]
    return Digraph(n, edges)


def random_weakly_connected(
    rng: random.Random,
    n: int,
    max_loop: int = 6,
    zero_prob: float = 0.2,
    extra: float = 0.25,
    cross: float = 0.15,
) -> Digraph:
    """A trimmed, weakly connected digraph with several strong components.

    Components get target loop numbers in 1..max_loop (or 0 for a lone
    vertex), are stacked in a random DAG and relabelled at random.
    """
    while True:
        sizes = []
        left = n
        while left > 0:
            if sizes and rng.random() < zero_prob:
                s, p = 1, 0
            else:
                p = rng.randint(1, max_loop)
                s = rng.randint(p, min(left, max(p, 2 * p + 1))) if p <= left else left
                p = min(p, s)
            s = min(s, left)
            sizes.append((s, p))
            left -= s
        if sizes[0][1] == 0:
            continue
        edges = set()
        blocks = []
        base = 0
        for s, p in sizes:
            for a, b in _strong_block(rng, p, s, extra):
                edges.add((base + a, base + b))
            verts = list(range(base, base + s))
            blocks.append((verts, p))
            base += s
        for k in range(1, len(blocks)):
            verts, p = blocks[k]
            # at least one edge from an earlier block keeps things weakly
            # connected and gives zero-loop vertices an in-neighbour
            prev = rng.randrange(k)
            edges.add((rng.choice(blocks[prev][0]), rng.choice(verts)))
            for j in range(k):
                for a in blocks[j][0]:
                    for b in verts:
                        if rng.random() < cross / max(1, len(verts)):
                            edges.add((a, b))
        perm = list(range(n))
        rng.shuffle(perm)
        g = Digraph(n, [(perm[a], perm[b]) for a, b in edges])
        if trim(g).removed or len(weakly_connected_components(g)) != 1:
            continue
        return g


def elementary_graph(p_minus: int, p_plus: int, path: int = 0) -> Digraph:
    """Two cycles joined by an edge (path=0) or a path through zero-loop
    vertices.  Vertex ids: a_0..a_{p_- -1}, then b_0..b_{p_+ -1}, then c_0..

    The connector runs a_{p_- -1} -> c_0 -> ... -> c_{m-1} -> b_0.
    """
    a = list(range(p_minus))
    b = list(range(p_minus, p_minus + p_plus))
    c = list(range(p_minus + p_plus, p_minus + p_plus + path))
    edges = [(a[i], a[(i + 1) % p_minus]) for i in range(p_minus)]
    edges += [(b[i], b[(i + 1) % p_plus]) for i in range(p_plus)]
    chain = [a[-1]] + c + [b[0]]
    edges += list(zip(chain, chain[1:]))
    return Digraph(p_minus + p_plus + path, edges)


def random_reduced(rng: random.Random, n_max: int = 16, max_loop: int = 5, zero_prob: float = 0.2) -> Digraph:
    """A digraph that is already reduced: every strong component is a cycle
    (or a lone zero-loop vertex)."""
    while True:
        blocks = []
        total = 0
        while True:
            if blocks and rng.random() < zero_prob:
                p = 0
            else:
                p = rng.randint(1, max_loop)
            size = max(p, 1)
            if total + size > n_max:
                break
            blocks.append((list(range(total, total + size)), p))
            total += size
            if rng.random() < 0.2 and len(blocks) >= 2:
                break
        if not blocks or blocks[0][1] == 0:
            continue
        edges = set()
        for verts, p in blocks:
            if p:
                edges.update((verts[i], verts[(i + 1) % p]) for i in range(p))
        for k in range(1, len(blocks)):
            verts, _ = blocks[k]
            prev = rng.randrange(k)
            edges.add((rng.choice(blocks[prev][0]), rng.choice(verts)))
            for j in range(k):
                for a in blocks[j][0]:
                    for b in verts:
                        if rng.random() < 0.06:
                            edges.add((a, b))
        g = Digraph(total, edges)
        if trim(g).removed or len(weakly_connected_components(g)) != 1:
            continue
        return g
