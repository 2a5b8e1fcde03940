import math
import random

import pytest
from hypothesis import assume, given, strategies as st

from cbnlab.dynamics import BitState, PeriodicOrbit, find_orbit
from cbnlab.generate import cycle_graph, random_strongly_connected
from cbnlab.graph import Digraph, class_partition
from cbnlab.necklaces import (
    Necklace,
    canonicalize,
    enumerate_necklaces,
    necklace_count,
    necklace_from_orbit,
    orbit_from_necklace,
    order,
)
from cbnlab.sweep import sweep, transition_table

import oracles


def test_canonicalize_rotates_to_minimum():
    assert canonicalize("1100").word == "0011"
    assert canonicalize("0000").word == "0000"
    assert canonicalize([1, 0, 1]).word == "011"


def test_canonicalize_rejects_empty():
    with pytest.raises(ValueError):
        canonicalize("")


def test_necklace_rejects_non_minimal_word():
    with pytest.raises(ValueError):
        Necklace("10")


@given(st.text("01", min_size=1, max_size=16))
def test_canonicalize_equals_min_over_rotations(word):
    assert canonicalize(word).word == "".join(oracles.min_rotation(word))


def test_length_four_has_six_necklaces():
    words = [s.word for s in enumerate_necklaces(4)]
    assert words == ["0000", "0001", "0011", "0101", "0111", "1111"]


def test_length_one():
    assert [s.word for s in enumerate_necklaces(1)] == ["0", "1"]


def test_length_six_count_matches_brute_force():
    assert len(enumerate_necklaces(6)) == len(oracles.brute_necklaces(6)) == 14


def test_enumerate_rejects_bad_lengths():
    with pytest.raises(ValueError):
        enumerate_necklaces(0)
    with pytest.raises(ValueError):
        enumerate_necklaces(25)


@pytest.mark.parametrize("p", range(1, 13))
def test_burnside_count_matches_enumeration(p):
    assert necklace_count(p) == len(enumerate_necklaces(p)) == len(oracles.brute_necklaces(p))


def test_order_examples():
    assert order(Necklace("0101")) == 2
    assert order(Necklace("0000")) == 1
    assert order(Necklace("0011")) == 4


@given(st.text("01", min_size=1, max_size=14))
def test_order_counts_distinct_rotations(word):
    s = canonicalize(word)
    assert order(s) == len({word[k:] + word[:k] for k in range(len(word))})
    assert s.p % order(s) == 0


def test_constant_necklaces_give_fixed_points():
    g = cycle_graph(4)
    cp = class_partition(g)
    ones = orbit_from_necklace(g, cp, Necklace("1111"))
    zeros = orbit_from_necklace(g, cp, Necklace("0000"))
    assert ones.states == (BitState.ones(4),) and zeros.states == (BitState.zeros(4),)
    assert necklace_from_orbit(g, cp, ones).word == "1111"


def test_p_one_graph_has_two_orbits():
    g = Digraph(3, [(0, 0), (0, 1), (1, 2), (2, 0)])
    sw = sweep(transition_table(g))
    assert class_partition(g).loop_numbers == (1,)
    assert sw.n_orbits == 2


def test_length_mismatch_is_rejected():
    g = cycle_graph(4)
    with pytest.raises(ValueError):
        orbit_from_necklace(g, class_partition(g), Necklace("001"))


def test_non_constant_class_is_rejected():
    g = Digraph(3, [(0, 1), (0, 2), (1, 0), (2, 0)])
    cp = class_partition(g)
    with pytest.raises(ValueError):
        necklace_from_orbit(g, cp, PeriodicOrbit((BitState.from_string("010"),)))


@given(st.integers(0, 10**9), st.integers(1, 10))
def test_necklaces_biject_with_orbits(seed, n):
    g = random_strongly_connected(random.Random(seed), n)
    cp = class_partition(g)
    p = cp.loop_numbers[0]
    assume(p > 0)
    sw = sweep(transition_table(g))
    simulated = {tuple(sw.orbit_states(int(o))) for o in sw.orbit_ids}
    built = set()
    for s in enumerate_necklaces(p):
        o = orbit_from_necklace(g, cp, s)
        assert o.period == order(s)
        assert find_orbit(g, o.states[0]).transient == 0
        assert necklace_from_orbit(g, cp, o) == s
        built.add(tuple(x.value for x in o.states))
    assert built == simulated
    assert len(simulated) == necklace_count(p)
    divisors = {d for d in range(1, p + 1) if p % d == 0}
    assert sw.periods() == divisors
    assert all(math.lcm(d, p) == p for d in sw.periods())
