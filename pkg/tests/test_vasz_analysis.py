import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brute import W, below_some, explore, leq
from conftest import encoded
from soundness import check_cover
from vaszero.closed_sets import down_compare
from vaszero.errors import BadPosition, NotNormalized, UnnormalizableZeroTest
from vaszero.filtered_cover import filtered_cover_basis
from vaszero.karp_miller import km_cover
from vaszero.model import Vas, Vasz, strip_zero_test
from vaszero.oracles import NO, UNKNOWN, YES
from vaszero.vasz_analysis import algorithm1, algorithm1_tree, coverable, place_bounded, vasz_cover, zero_filter


def random_vasz(rng, normalized=True):
    dim = rng.randint(2, 3)
    acts = {f"a{i}": tuple(rng.randint(-1, 1) for _ in range(dim)) for i in range(rng.randint(1, 3))}
    init = tuple(rng.randint(0, 2) for _ in range(dim))
    zd = tuple(rng.randint(-1, 1) for _ in range(dim))
    if normalized:
        init = (0,) + init[1:]
        zd = (0,) + zd[1:]
    elif zd[0] < 0:
        zd = (1,) + zd[1:]
    return Vasz(Vas.make(dim, acts, init), "z", zd)


def test_filtered_basis_examples():
    right, _ = encoded("even_at_test.net")
    assert set(algorithm1(right).elems) == {(0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)}
    left, lay = encoded("odd_at_test.net")
    R = algorithm1(left)
    assert R.elems == ((0, 1, 0, 0),)
    assert not any(b[lay.component("r") - 1] for b in R.elems)


def test_never_enabled_test_gives_plain_filtered_cover():
    vz = Vasz(Vas.make(2, {"a": (0, 1)}, (0, 0)), "z", (0, -1), (0, 5))
    assert algorithm1(vz) == filtered_cover_basis(strip_zero_test(vz), zero_filter(2), 10_000)
    vz = Vasz(Vas.make(2, {"a": (1, 1)}, (0, 0)), "z", (0, -3))
    # the test needs counter 2 >= 3 while counter 1 is 0: never
    assert algorithm1(vz) == filtered_cover_basis(strip_zero_test(vz), zero_filter(2), 10_000)


def test_tree_labels_start_with_zero():
    right, _ = encoded("even_at_test.net")
    tree = algorithm1_tree(right)
    assert tree.nodes[0].label == right.init
    assert all(n.label[0] == 0 for n in tree.nodes)


def test_needs_normalized_input():
    vz = Vasz(Vas.make(1, {"a": (1,)}, (1,)), "z", (0,))
    with pytest.raises(NotNormalized):
        algorithm1(vz)
    # the cover itself goes through the gadgets
    assert vasz_cover(vz).elems == ((W,),)
    with pytest.raises(UnnormalizableZeroTest):
        vasz_cover(Vasz(Vas.make(2, {"a": (1, 0)}, (1, 0)), "z", (-1, 0)))


def test_cover_examples():
    right, lay = encoded("even_at_test.net")
    assert set(vasz_cover(right).elems) == {(W, 1, 0, 0), (W, 0, 1, 0), (0, 0, 0, 1)}
    assert coverable(right, (0, 0, 0, 1)).answer == YES
    left, _ = encoded("odd_at_test.net")
    assert coverable(left, (0, 0, 0, 1)).answer == NO
    assert coverable(left, (0, 0, 0, 0)).answer == YES
    assert coverable(right, (0, 0, 0, 0), 1).answer == UNKNOWN


def test_bounded_examples():
    right, _ = encoded("even_at_test.net")
    assert place_bounded(right, 1).answer == NO
    assert place_bounded(right, 4).answer == YES
    dec = Vasz(Vas.make(1, {"a": (-1,)}, (3,)), "z", (0,))
    assert place_bounded(dec, 1).answer == YES
    with pytest.raises(BadPosition):
        place_bounded(dec, 2)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_filtered_basis_against_exploration(seed):
    vz = random_vasz(random.Random(seed))
    R = algorithm1(vz, 200_000)
    words, _ = explore(vz, 4000)
    zeroed = [x for x in words if x[0] == 0]
    # every reachable state with first component 0 is below R
    for x in zeroed:
        assert below_some(x, R.elems), (vz, x, R)
    # every element of R is approached by such states
    K = 4
    for r in R.elems:
        assert r[0] == 0
        want = tuple(K if a == W else a for a in r)
        assert any(leq(want, x) for x in zeroed), (vz, r)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.booleans())
def test_cover_against_exploration(seed, normalized):
    vz = random_vasz(random.Random(seed), normalized)
    B = vasz_cover(vz, 200_000)
    assert check_cover(vz, B.elems, 4000)
    words, _ = explore(vz, 4000)
    K = 4
    for b in B.elems:
        want = tuple(K if a == W else a for a in b)
        assert any(leq(want, x) for x in words), (vz, b)
    assert down_compare(km_cover_without_test(vz), B) in ("subset", "equal")


def km_cover_without_test(vz):
    return km_cover(strip_zero_test(vz))
