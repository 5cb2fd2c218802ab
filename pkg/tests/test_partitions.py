import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from abelcover.partitions import (
    GroupType,
    complement,
    conjugate,
    contains,
    group_type_of,
    group_types_of_order,
    multiplicity_form,
    normalize,
    partition,
    partitions_of,
    rectangle,
    reduce_ambient,
    sub_partitions,
    weight,
)

from strategies import partitions


@pytest.mark.parametrize(
    "alpha, beta, expected",
    [((3, 2), (2, 2), True), ((3, 2), (3, 3), False), ((1,), (), True), ((), (1,), False)],
)
def test_contains(alpha, beta, expected):
    assert contains(alpha, beta) is expected


@pytest.mark.parametrize("alpha, expected", [((2, 1), (2, 1)), ((3, 1), (2, 1, 1)), ((), ())])
def test_conjugate(alpha, expected):
    assert conjugate(alpha) == expected


@pytest.mark.parametrize(
    "k, n, beta, expected",
    [(2, 3, (1,), (2, 2, 1)), (2, 2, (2, 2), ()), (3, 2, (2, 1), (2, 1)), (3, 2, (), (3, 3))],
)
def test_complement(k, n, beta, expected):
    assert complement(k, n, beta) == expected


def test_complement_rejects_oversized():
    with pytest.raises(ValueError):
        complement(2, 1, (3,))
    with pytest.raises(ValueError):
        complement(2, 1, (1, 1))


@pytest.mark.parametrize(
    "beta, expected", [((3, 3, 1), [(3, 2), (1, 1)]), ((2,), [(2, 1)]), ((), [])]
)
def test_multiplicity_form(beta, expected):
    assert multiplicity_form(beta) == expected


@pytest.mark.parametrize("beta, expected", [((3, 2, 1), 6), ((), 0), ((5,), 5)])
def test_weight(beta, expected):
    assert weight(beta) == expected


@pytest.mark.parametrize(
    "orders, expected",
    [([4, 2], {2: (2, 1)}), ([12], {2: (2,), 3: (1,)}), ([6, 6], {2: (1, 1), 3: (1, 1)})],
)
def test_group_type_of(orders, expected):
    assert group_type_of(orders) == GroupType(expected)


def test_partition_validation():
    assert partition([2, 1]) == (2, 1)
    for bad in ([1, 2], [2, 0], [-1]):
        with pytest.raises(ValueError):
            partition(bad)
    assert normalize([1, 0, 3, 2]) == (3, 2, 1)


def test_rectangle_and_reduction():
    assert rectangle(3, 2) == (3, 3)
    assert rectangle(2, 0) == ()
    assert reduce_ambient((3, 2), (1, 1)) == (1, 1)
    assert reduce_ambient((2, 2), (2,)) == (2, 2)
    assert reduce_ambient((4, 3, 2), (2, 1)) == (2, 2, 2)


def test_partitions_of_counts():
    # partition numbers
    assert [sum(1 for _ in partitions_of(n)) for n in range(8)] == [1, 1, 2, 3, 5, 7, 11, 15]
    assert list(partitions_of(4, largest=2)) == [(2, 2), (2, 1, 1), (1, 1, 1, 1)]


def test_sub_partitions_are_exactly_the_contained_ones():
    alpha = (3, 1, 1)
    subs = set(sub_partitions(alpha))
    brute = {b for n in range(6) for b in partitions_of(n) if contains(alpha, b)}
    assert subs == brute
    assert set(sub_partitions(alpha, 2)) == {b for b in brute if weight(b) == 2}


def test_group_type_parse_and_serialise():
    t = GroupType.parse("2:[2,1];3:[1]")
    assert t == GroupType({2: (2, 1), 3: (1,)})
    assert str(t) == "2:[2,1];3:[1]"
    assert t.order == 24 and t.exponent == 12 and not t.is_cyclic()
    assert t.invariant_factors() == [2, 12]
    assert GroupType.from_json(json.dumps(t.to_json())) == t
    for text in ("", "1", "trivial"):
        assert GroupType.parse(text) == GroupType() and GroupType().order == 1
    assert str(GroupType()) == "trivial"
    for bad in ("4:[1]", "2:1", "2:[1];2:[1]", "2:[1,2]"):
        with pytest.raises(ValueError):
            GroupType.parse(bad)


def test_group_type_drops_empty_components():
    assert GroupType({2: (), 3: (1,)}).primes == (3,)


def test_group_types_of_order():
    types = list(group_types_of_order(72))
    assert len(types) == 3 * 2 and len(set(types)) == 6
    assert all(t.order == 72 for t in types)
    assert list(group_types_of_order(1)) == [GroupType()]


@given(partitions(max_part=6, max_len=6))
def test_conjugate_is_an_involution(alpha):
    assert conjugate(conjugate(alpha)) == alpha
    assert weight(conjugate(alpha)) == weight(alpha)


@given(partitions(), partitions())
def test_containment_is_preserved_by_conjugation(alpha, beta):
    assert contains(alpha, beta) == contains(conjugate(alpha), conjugate(beta))


@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_complement_is_an_involution(k, n, data):
    beta = data.draw(st.sampled_from(list(sub_partitions(rectangle(k, n)))))
    assert complement(k, n, complement(k, n, beta)) == beta
    assert weight(beta) + weight(complement(k, n, beta)) == k * n


@given(st.lists(st.integers(2, 60), min_size=1, max_size=4), st.randoms())
def test_group_type_ignores_factor_order(orders, rnd):
    shuffled = orders[:]
    rnd.shuffle(shuffled)
    t = group_type_of(orders)
    assert group_type_of(shuffled) == t
    from math import prod

    assert t.order == prod(orders)


@given(partitions(max_part=5, max_len=5))
def test_multiplicity_form_round_trips(beta):
    runs = multiplicity_form(beta)
    assert tuple(v for v, m in runs for _ in range(m)) == beta
    values = [v for v, _ in runs]
    assert values == sorted(set(values), reverse=True)
