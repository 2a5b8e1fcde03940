import math
import random

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from cbnlab.generate import cycle_graph, random_strongly_connected, random_weakly_connected
from cbnlab.graph import (
    Digraph,
    class_partition,
    enumerate_cycles,
    loop_number,
    scc_decompose,
    weakly_connected_components,
)
from cbnlab.reduction import build_reduced

import oracles


@st.composite
def digraphs(draw, max_n=9):
    n = draw(st.integers(1, max_n))
    edges = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=3 * n))
    return Digraph(n, edges)


strong_graphs = st.builds(
    lambda seed, n: random_strongly_connected(random.Random(seed), n),
    st.integers(0, 10**9),
    st.integers(1, 10),
)


# Digraph basics


def test_digraph_rejects_out_of_range_ids():
    with pytest.raises(ValueError):
        Digraph(2, [(0, 2)])


def test_digraph_dedupes_and_keeps_self_arcs():
    g = Digraph(2, [(0, 1), (0, 1), (1, 1)])
    assert g.m == 2
    assert g.has_self_arc(1) and not g.has_self_arc(0)
    assert g.in_nbrs[1] == (0, 1)


def test_k_step_neighbourhoods_match_layered_oracle(rng):
    g = random_weakly_connected(rng, 9)
    ins = oracles.in_lists(g.n, g.edges)
    for v in range(g.n):
        for k in range(4):
            assert g.in_neighborhood([v], k) == oracles.k_step_in_neighbourhood(ins, v, k)


# weak components


def test_two_disjoint_triangles_split():
    g = Digraph(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])
    parts = weakly_connected_components(g)
    assert [remap for _, remap in parts] == [[0, 1, 2], [3, 4, 5]]
    assert all(sub.n == 3 and sub.m == 3 for sub, _ in parts)


def test_three_component_graph_is_weakly_connected(three_comp):
    assert len(weakly_connected_components(three_comp)) == 1


def test_weak_components_of_empty_graph():
    assert weakly_connected_components(Digraph(0)) == []


@given(digraphs(max_n=20))
def test_weak_components_match_union_find(g):
    got = [remap for _, remap in weakly_connected_components(g)]
    assert got == oracles.weak_components(g.n, g.edges)
    for sub, remap in weakly_connected_components(g):
        assert {(remap[u], remap[v]) for u, v in sub.edges} == {
            (u, v) for u, v in g.edges if u in remap and v in remap
        }


# strong components and levels


def test_three_component_decomposition(three_comp):
    scd = scc_decompose(three_comp)
    assert [sorted(c) for c in scd.components] == [[0, 1, 2], [3, 4, 5, 6], list(range(7, 14))]
    assert scd.levels() == [[0, 1], [2]]
    assert scd.L == 1


def test_single_cycle_is_one_component():
    scd = scc_decompose(cycle_graph(5))
    assert scd.q == 1 and scd.level == (0,) and not scd.condensation


def test_dag_gives_singletons_and_matches_reachability(rng):
    n = 9
    edges = {(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < 0.3}
    g = Digraph(n, edges)
    scd = scc_decompose(g)
    assert sorted(map(sorted, scd.components)) == [[v] for v in range(n)]
    assert {(min(scd.components[a]), min(scd.components[b])) for a, b in scd.condensation} == edges


@given(digraphs())
def test_scc_matches_reachability_oracle(g):
    scd = scc_decompose(g)
    assert [sorted(c) for c in scd.components] == oracles.strong_components(g.n, g.edges)
    for v in range(g.n):
        assert v in scd.components[scd.comp_of[v]]


@given(digraphs())
def test_condensation_acyclic_and_levels_are_longest_path(g):
    scd = scc_decompose(g)
    cond = nx.DiGraph(list(scd.condensation))
    cond.add_nodes_from(range(scd.q))
    assert nx.is_directed_acyclic_graph(cond)
    for j in range(scd.q):
        preds = [i for i, k in scd.condensation if k == j]
        assert scd.level[j] == (1 + max(scd.level[i] for i in preds) if preds else 0)


def test_components_sorted_by_smallest_vertex(rng):
    g = random_weakly_connected(rng, 14)
    mins = [min(c) for c in scc_decompose(g).components]
    assert mins == sorted(mins)


# loop numbers and cycles


def test_loop_numbers_of_three_components(three_comp):
    scd = scc_decompose(three_comp)
    assert [loop_number(three_comp, c) for c in scd.components] == [2, 3, 6]


def test_self_arc_has_loop_number_one():
    assert loop_number(Digraph(1, [(0, 0)]), [0]) == 1


def test_lone_vertex_has_loop_number_zero():
    assert loop_number(Digraph(2, [(0, 1)]), [0]) == 0


def test_loop_number_rejects_non_strong_set():
    with pytest.raises(ValueError):
        loop_number(Digraph(2, [(0, 1)]), [0, 1])


@given(strong_graphs)
def test_loop_number_equals_gcd_of_cycle_lengths(g):
    verts = range(g.n)
    expected = oracles.gcd_of_cycles(g.n, g.edges, verts)
    assert loop_number(g, verts) == expected
    lens = enumerate_cycles(g).lengths()
    assert (math.gcd(*lens) if lens else 0) == expected


def test_five_cycle_has_one_cycle():
    listing = enumerate_cycles(cycle_graph(5))
    assert listing.cycles == ((0, 1, 2, 3, 4),) and not listing.truncated


def test_complete_digraph_on_three_has_five_cycles():
    g = Digraph(3, [(a, b) for a in range(3) for b in range(3) if a != b])
    lens = sorted(enumerate_cycles(g).lengths())
    assert lens == [2, 2, 2, 3, 3]
    assert len(oracles.all_simple_cycles(3, g.edges)) == 5


def test_reduced_top_and_bottom_cycles_have_single_lengths(three_comp):
    rs = build_reduced(three_comp)
    first, last = rs.cycles[0], rs.cycles[2]
    assert enumerate_cycles(rs.h, first.vertices).lengths() == [2]
    assert enumerate_cycles(rs.h, last.vertices).lengths() == [6]


def test_cycle_cap_sets_truncated_flag():
    g = Digraph(3, [(a, b) for a in range(3) for b in range(3) if a != b])
    assert enumerate_cycles(g, cap=5).truncated is False
    capped = enumerate_cycles(g, cap=2)
    assert capped.truncated and len(capped.cycles) == 2


@given(digraphs(max_n=7))
def test_johnson_matches_dfs_cycle_oracle(g):
    got = sorted(enumerate_cycles(g).cycles)
    want = sorted(oracles.all_simple_cycles(g.n, g.edges))
    assert got == want


# class partition


def test_four_cycle_gives_singleton_classes_in_order():
    cp = class_partition(cycle_graph(4))
    assert cp.loop_numbers == (4,)
    assert cp.classes[0] == tuple(frozenset({k}) for k in range(4))


def test_six_class_component(three_comp):
    cp = class_partition(three_comp)
    assert cp.loop_numbers == (2, 3, 6)
    assert [sorted(c) for c in cp.classes[2]] == [[7, 13], [8], [9], [10], [11], [12]]
    assert [sorted(c) for c in cp.classes[1]] == [[3], [4, 6], [5]]


@given(strong_graphs)
def test_classes_are_walk_length_residues(g):
    cp = class_partition(g)
    p = cp.loop_numbers[0]
    if p == 0:
        assert cp.classes[0] == (frozenset({0}),)
        return
    res = oracles.walk_residues(g.n, g.edges, set(range(g.n)), 0, p)
    for j, cls in enumerate(cp.classes[0]):
        assert cls
        for v in cls:
            assert res[v] == {j}
    assert sorted(v for c in cp.classes[0] for v in c) == list(range(g.n))


@given(st.integers(0, 10**9), st.integers(4, 14))
def test_class_neighbours_rotate(seed, n):
    g = random_weakly_connected(random.Random(seed), n)
    scd = scc_decompose(g)
    cp = class_partition(g, scd)
    for i, comp in enumerate(scd.components):
        p = cp.loop_numbers[i]
        if p == 0:
            continue
        for j, cls in enumerate(cp.classes[i]):
            outs = {w for v in cls for w in g.out_nbrs[v] if w in comp}
            ins = {w for v in cls for w in g.in_nbrs[v] if w in comp}
            assert outs <= cp.classes[i][(j + 1) % p]
            assert ins <= cp.classes[i][(j - 1) % p]
        assert min(comp) in cp.classes[i][0]
