import random
from itertools import product

import pytest
from hypothesis import given, strategies as st

from cbnlab.dynamics import BitState, step
from cbnlab.graph import Digraph
from cbnlab.universality import (
    ClosureCapExceeded,
    DnfNetwork,
    Monomial,
    build_monomial_dbn,
    dbn_to_cbn,
    dnf_from_truth_table,
    monomial_eval,
    project,
)

import oracles


def random_tables(r, n):
    return ["".join(r.choice("01") for _ in range(2**n)) for _ in range(n)]


tables = st.integers(1, 4).flatmap(
    lambda n: st.lists(st.text("01", min_size=2**n, max_size=2**n), min_size=n, max_size=n)
)


# monomials and DNF


def test_trivial_monomial_is_rejected():
    with pytest.raises(ValueError):
        Monomial({0}, {0})


def test_empty_monomial_is_one():
    assert monomial_eval(Monomial(), BitState.from_string("000")) == 1


def test_monomial_index_out_of_range():
    with pytest.raises(IndexError):
        monomial_eval(Monomial({3}), BitState.from_string("000"))


@given(st.integers(1, 8).flatmap(lambda n: st.tuples(
    st.just(n), st.sets(st.integers(0, n - 1)), st.sets(st.integers(0, n - 1)), st.integers(0, 2**n - 1))))
def test_monomial_eval_is_a_product_of_literals(args):
    n, pos, neg = args[:3]
    neg = neg - pos
    x = BitState(n, args[3])
    assert monomial_eval(Monomial(pos, neg), x) == oracles.eval_monomial(pos, neg, x.bits())


def test_xor_gives_two_minterms():
    net = dnf_from_truth_table(["0110", "0110"])
    assert net.functions[0] == {Monomial({1}, {0}), Monomial({0}, {1})}


def test_constants():
    net = dnf_from_truth_table(["1111", "0000"])
    assert net.functions == (frozenset({Monomial()}), frozenset())


def test_table_length_checked():
    with pytest.raises(ValueError):
        dnf_from_truth_table(["011", "0110"])


@given(tables)
def test_dnf_is_pointwise_equal_to_table(tabs):
    n = len(tabs)
    net = dnf_from_truth_table(tabs)
    for k, x in enumerate(product((0, 1), repeat=n)):
        state = BitState.from_bits(x)
        assert net.step(state).bits() == tuple(int(t[k]) for t in tabs)


# monomial network


def test_identity_network_closes_on_singletons():
    n = 3
    net = DnfNetwork(n, tuple(frozenset({Monomial({i})}) for i in range(n)))
    dbn = build_monomial_dbn(net)
    assert set(dbn.states) == {Monomial({i}) for i in range(n)}
    assert all(dbn.update[Monomial({i})] == {Monomial({i})} for i in range(n))
    z = BitState.from_string("101")
    assert project(dbn, net, dbn.lift(z)) == z


def test_conjunctive_network_stays_conjunctive():
    # every f_i is an AND, so every closure monomial is positive and each
    # update is a single monomial
    net = DnfNetwork(3, (frozenset({Monomial({1, 2})}), frozenset({Monomial({0})}), frozenset({Monomial({0, 1})})))
    dbn = build_monomial_dbn(net)
    assert all(not z.neg for z in dbn.states)
    assert all(len(dbn.update[z]) == 1 for z in dbn.states)


def test_single_variable_self_map_is_a_self_arc():
    net = DnfNetwork(1, (frozenset({Monomial({0})}),))
    dual = dbn_to_cbn(build_monomial_dbn(net))
    assert dual.graph == Digraph(1, [(0, 0)])


def test_self_updating_monomials_give_self_loops():
    net = DnfNetwork(2, (frozenset({Monomial({0})}), frozenset({Monomial({1})})))
    dual = dbn_to_cbn(build_monomial_dbn(net))
    assert dual.graph == Digraph(2, [(0, 0), (1, 1)])


def test_closure_cap_is_enforced():
    r = random.Random(9)
    net = dnf_from_truth_table(random_tables(r, 5))
    with pytest.raises(ClosureCapExceeded) as err:
        build_monomial_dbn(net, cap=3)
    assert err.value.found > 3


def test_all_zero_monomial_state_projects_constant_functions():
    net = dnf_from_truth_table(["1111", "0000"])
    dbn = build_monomial_dbn(net)
    assert str(project(dbn, net, BitState.zeros(dbn.size))) == "00"


@given(tables)
def test_update_expansion_is_pointwise_correct(tabs):
    n = len(tabs)
    net = dnf_from_truth_table(tabs)
    dbn = build_monomial_dbn(net)
    for k, x in enumerate(product((0, 1), repeat=n)):
        fx = tuple(int(t[k]) for t in tabs)
        for z in dbn.states:
            lhs = oracles.eval_monomial(z.pos, z.neg, fx)
            rhs = int(any(oracles.eval_monomial(w.pos, w.neg, x) for w in dbn.update[z]))
            assert lhs == rhs


@given(tables)
def test_projection_and_dual_reproduce_the_network(tabs):
    n = len(tabs)
    net = dnf_from_truth_table(tabs)
    dbn = build_monomial_dbn(net)
    dual = dbn_to_cbn(dbn)
    for x0 in product((0, 1), repeat=n):
        x = x0
        z = dbn.lift(BitState.from_bits(x0))
        for _ in range(20):
            nxt = oracles.table_step(tabs, x)
            assert project(dbn, net, z).bits() == nxt
            z_next = dbn.step(z)
            assert dual.negate(step(dual.graph, dual.negate(z))) == z_next
            x, z = nxt, z_next
