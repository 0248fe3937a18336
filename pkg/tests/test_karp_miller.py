import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brute import W, below_some, explore, random_vas
from conftest import encoded, load
from soundness import check_cover
from vaszero.budget import Budget
from vaszero.errors import BudgetExhausted
from vaszero.karp_miller import accelerate, km_cover, km_tree
from vaszero.model import Vas, strip_zero_test


def test_one_counter_pair_cover():
    vz, lay = encoded("odd_at_test.net")
    B = km_cover(strip_zero_test(vz))
    assert set(B.elems) == {(W, 1, 0, 0), (W, 0, 1, 0)}
    vz, _ = encoded("even_at_test.net")
    assert set(km_cover(strip_zero_test(vz)).elems) == {(W, 1, 0, 0), (W, 0, 1, 0)}


def test_one_counter_pair_tree_path():
    tree = km_tree(load("odd_at_test.net").system)
    lay = tree.layout
    show = {i: (lay.state_of(n.label), n.label[0]) for i, n in enumerate(tree.nodes)}
    root = 0
    assert show[root] == ("p", 0)
    kids = [c for c in tree.nodes[root].children if show[c] == ("p", W)]
    assert kids
    grand = [g for g in tree.nodes[kids[0]].children if show[g] == ("q", W)]
    assert grand
    assert "(p,0)" in tree.dump().splitlines()[0]


def test_one_dimensional_examples():
    assert km_cover(Vas.make(1, {"a": (-1,)}, (2,))).elems == ((2,),)
    assert km_cover(Vas.make(1, {"a": (1,)}, (0,))).elems == ((W,),)
    tree = km_tree(Vas.make(1, {"a": (-1,)}, (0,)))
    assert len(tree.nodes) == 1


def test_omega_start_stays_frozen():
    v = Vas.make(2, {"a": (-3, 1), "b": (0, -1)}, (W, 1))
    B = km_cover(v)
    assert all(b[0] == W for b in B.elems)
    assert set(B.elems) == {(W, W)}


def test_accelerate_repeats_until_stable():
    assert accelerate((1, 1, 0), [(0, 1, 0), (1, 1, 0)]) == (W, 1, 0)
    assert accelerate((2, 3), [(0, 0), (2, 2)]) == (W, W)
    assert accelerate((0, 1), [(1, 0)]) == (0, 1)


def test_budget_is_enforced():
    v = Vas.make(3, {"a": (1, -1, 0), "b": (-1, 1, 1), "c": (0, 0, -1)}, (1, 0, 0))
    with pytest.raises(BudgetExhausted):
        km_tree(v, Budget(3))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 100_000))
def test_labels_match_reachable_states_on_finite_entries(seed):
    v = random_vas(random.Random(seed), max_dim=2, max_actions=3, mag=2, init_max=2)
    words, _ = explore(v, 10_000)
    for n in km_tree(v).nodes:
        assert any(all(lab == W or lab == xi for lab, xi in zip(n.label, x)) for x in words), n.label


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 100_000))
def test_cover_contains_explored_states(seed):
    v = random_vas(random.Random(seed), max_dim=3, max_actions=4, mag=2, init_max=2)
    assert check_cover(v, km_cover(v).elems, max_states=3000)


def test_omega_entries_are_approached():
    rng = random.Random(31)
    K = 5
    for _ in range(15):
        v = random_vas(rng, max_dim=2, max_actions=3, mag=2, init_max=2)
        words, _ = explore(v, 10_000)
        for b in km_cover(v).elems:
            assert any(all((bi == W and xi >= K) or bi == xi for bi, xi in zip(b, x)) for x in words), (v, b)


@pytest.mark.parametrize("delta,init", [
    ({"a": (1, -1, 0), "b": (-1, 1, 1), "c": (0, 0, -1)}, (1, 0, 0)),
    ({"a": (-1, 2, 0, 0), "b": (0, -1, 2, 0), "c": (0, 0, -1, 2), "d": (1, 0, 0, -1)}, (1, 0, 0, 0)),
    ({"a": (2, -1), "b": (-1, 2), "c": (-1, -1)}, (1, 1)),
])
def test_terminates_on_adversarial_nets(delta, init):
    v = Vas.make(len(init), delta, init)
    B = km_cover(v)
    words, _ = explore(v, 5000)
    assert all(below_some(x, B.elems) for x in words)
