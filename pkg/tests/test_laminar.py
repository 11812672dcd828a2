import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import ball_lists, laminar_families
from vcminimal.errors import MalformedInputError, NotDirectedError
from vcminimal.laminar import (
    DirectedFamily,
    ElementSet,
    build_forest,
    check_directed,
    restrict_family,
)
from vcminimal.oracle import naive_check_directed


def S(n, *members):
    return ElementSet.of(n, members)


def test_element_set_is_extensional():
    assert S(5, 3, 1, 1) == S(5, 1, 3)
    assert S(5, 3, 1).members == (1, 3)
    assert len(S(5, 0, 4)) == 2
    assert (S(5, 0, 1) & S(5, 1, 2)) == S(5, 1)
    assert (S(5, 0, 1) - S(5, 1)) == S(5, 0)
    assert S(5, 1).issubset(S(5, 0, 1))


@pytest.mark.parametrize("bad", [[5], [-1], [1.0]])
def test_element_out_of_range(bad):
    with pytest.raises(MalformedInputError):
        ElementSet.of(5, bad)


def test_mixed_ground_sizes_rejected():
    with pytest.raises(MalformedInputError):
        check_directed([S(3, 0), S(4, 0)])


def test_check_directed_examples():
    assert check_directed([])
    assert check_directed([S(3, 0, 1), S(3, 0), S(3, 2)])
    verdict = check_directed([S(3, 0, 1), S(3, 1, 2)])
    assert not verdict
    assert verdict.witness == (S(3, 0, 1), S(3, 1, 2))


def test_family_rejects_overlap_with_witness():
    with pytest.raises(NotDirectedError) as info:
        DirectedFamily.from_lists(3, [[0, 1], [1, 2]])
    assert set(info.value.witness) == {S(3, 0, 1), S(3, 1, 2)}


def test_build_forest_example():
    fam = DirectedFamily.from_lists(4, [[0], [1], [0, 1, 2]])
    forest = build_forest(fam)
    assert forest.sets == (S(4, 0, 1, 2, 3), S(4, 0, 1, 2), S(4, 0), S(4, 1))
    assert forest.parent == (0, 0, 1, 1)
    assert forest.children == ((1,), (2, 3), (), ())
    assert forest.gap == (S(4, 3), S(4, 2), S(4, 0), S(4, 1))


def test_empty_family_forest():
    forest = build_forest(DirectedFamily(3, ()))
    assert len(forest) == 1
    assert forest.gap == (S(3, 0, 1, 2),)


def test_duplicates_collapse():
    fam = DirectedFamily.from_lists(2, [[0], [0]])
    assert fam.balls == (S(2, 0),)
    assert len(build_forest(fam)) == 2


def test_full_ground_ball_sits_under_virtual_root():
    forest = build_forest(DirectedFamily.from_lists(2, [[0, 1]]))
    assert forest.parent == (0, 0)
    assert forest.gap[0] == S(2)


def test_restrict_family_examples():
    fam = DirectedFamily.from_lists(3, [[0, 1], [2]])
    assert restrict_family(fam, S(3, 0, 2)).balls == (S(3, 0), S(3, 2))
    fam = DirectedFamily.from_lists(3, [[0, 1], [0]])
    assert restrict_family(fam, S(3, 0)).balls == (S(3, 0),)
    fam = DirectedFamily.from_lists(4, [[0, 1, 2], [0], [3]])
    assert restrict_family(fam, ElementSet.full(4)) == fam


@given(ball_lists())
def test_check_directed_matches_pairwise_oracle(data):
    _, balls = data
    assert bool(check_directed(balls)) == bool(naive_check_directed(balls))
    verdict = check_directed(balls)
    if not verdict:
        a, b = verdict.witness
        assert a & b and not a.issubset(b) and not b.issubset(a)


@given(laminar_families())
def test_gaps_partition_ground(fam):
    forest = build_forest(fam)
    assert sum(len(g) for g in forest.gap) == fam.ground_size
    union = 0
    for g in forest.gap:
        assert union & g.bits == 0
        union |= g.bits
    assert union == (1 << fam.ground_size) - 1


@given(laminar_families())
def test_parent_is_smallest_strict_superset(fam):
    forest = build_forest(fam)
    for v in range(1, len(forest)):
        supersets = [u for u in range(len(forest)) if u != v and forest.sets[v].issubset(forest.sets[u])]
        assert forest.parent[v] == min(supersets, key=lambda u: (len(forest.sets[u]), u == 0))
        kids = forest.children[v]
        for i, a in enumerate(kids):
            assert forest.sets[a].issubset(forest.sets[v])
            for b in kids[i + 1:]:
                assert forest.sets[a].isdisjoint(forest.sets[b])


@given(laminar_families(), st.data())
def test_restrict_stays_directed(fam, data):
    keep = ElementSet(fam.ground_size, data.draw(st.integers(0, (1 << fam.ground_size) - 1)))
    out = restrict_family(fam, keep)
    assert check_directed(out.balls)
    assert all(b.issubset(keep) for b in out.balls)


@given(laminar_families(), st.randoms(use_true_random=False))
def test_forest_is_order_insensitive(fam, rnd):
    balls = list(fam.balls)
    rnd.shuffle(balls)
    other = build_forest(DirectedFamily(fam.ground_size, tuple(balls)))
    forest = build_forest(fam)
    assert other.sets == forest.sets and other.parent == forest.parent
