import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from abelcover.modring import (
    IntLattice,
    PModMatrix,
    canonical_form,
    determinant_mod,
    hermite_rows,
    integer_kernel,
    invertible_check,
    p_degree,
    quotient_type_mod,
    rank_gf2,
    subgroup_type_mod,
)
from abelcover.oracle import ConcreteGroup, classify_type, quotient_group_type
from abelcover.partitions import weight


def M(rows, p, k):
    return PModMatrix.from_rows(rows, p, k)


@pytest.mark.parametrize("lam, p, k, expected", [(12, 2, 4, 2), (1, 5, 3, 0), (0, 3, 2, math.inf), (9, 3, 2, math.inf)])
def test_p_degree(lam, p, k, expected):
    assert p_degree(lam, p, k) == expected


@pytest.mark.parametrize("p, k", [(2, 1), (2, 3), (3, 2), (5, 2)])
def test_canonical_form_of_an_already_canonical_matrix(p, k):
    form = canonical_form(M([[p ** (k - 1), 0], [0, p ** (k - 1)]], p, k))
    assert form.beta == (1, 1)
    assert form.q == PModMatrix.identity(2, p, k)


def test_canonical_form_orders_pivots_by_degree():
    form = canonical_form(M([[2, 0], [0, 1]], 2, 2))
    assert form.beta == (2, 1)
    assert invertible_check(form.q)


def test_canonical_form_of_zero_matrix():
    form = canonical_form(M([[0, 0], [0, 0]], 3, 2))
    assert form.beta == () and form.p_matrix is None and form.generators() is None


@pytest.mark.parametrize(
    "rows, p, k, expected", [([[1, 0], [0, 1]], 3, 2, (2, 2)), ([[3, 0], [0, 3]], 3, 2, (1, 1)), ([[2, 2]], 2, 2, (1,))]
)
def test_subgroup_type_mod(rows, p, k, expected):
    assert subgroup_type_mod(M(rows, p, k)) == expected


@pytest.mark.parametrize("beta, k, n, expected", [((2,), 2, 2, (2,)), ((), 3, 2, (3, 3)), ((1, 1), 2, 2, (1, 1))])
def test_quotient_type_mod(beta, k, n, expected):
    assert quotient_type_mod(beta, k, n) == expected


def test_quotient_type_mod_matches_the_oracle():
    g = ConcreteGroup([4, 4])
    k = g.generated([(2, 0), (0, 2)])
    assert quotient_group_type(g, k)[2] == quotient_type_mod((1, 1), 2, 2)
    with pytest.raises(ValueError):
        quotient_type_mod((3,), 2, 2)


@pytest.mark.parametrize(
    "rows, k, expected", [([[1, 0], [0, 1]], 2, True), ([[2, 0], [0, 1]], 2, False), ([[1, 1], [0, 1]], 3, True)]
)
def test_invertible_check(rows, k, expected):
    assert invertible_check(M(rows, 2, k)) is expected


def test_determinant_needs_square_matrix():
    with pytest.raises(ValueError):
        determinant_mod(M([[1, 2]], 3, 1))
    assert determinant_mod(M([[0, 1], [1, 0]], 3, 2)) == 8


def test_matrix_validation():
    with pytest.raises(ValueError):
        PModMatrix.from_rows([[1]], 4, 1)
    with pytest.raises(ValueError):
        PModMatrix.from_rows([[1, 2], [1]], 2, 1)
    with pytest.raises(ValueError):
        PModMatrix.from_rows([], 2, 1)
    assert M([[5, -1]], 2, 2).rows == ((1, 3),)


def test_kernel_of_reduction_mod_n():
    lat = integer_kernel([[1]], [7])
    assert lat.basis == ((7,),) and lat.index() == 7


def test_kernel_parity_lattice():
    lat = integer_kernel([[1], [1]], [2])
    assert lat.index() == 2
    assert (1, 1) in lat and (2, 0) in lat and (1, 0) not in lat


def test_kernel_example_with_index_four():
    lat = integer_kernel([[1], [2]], [4])
    assert (4, 0) in lat and (2, 1) in lat and lat.index() == 4
    assert lat == IntLattice.from_generators(2, [[4, 0], [2, 1]])


def test_lattice_without_full_rank():
    lat = IntLattice.from_generators(2, [[2, 4]])
    assert not lat.is_full_rank and lat.index() == math.inf
    assert lat.to_json() == {"rank": 2, "basis": [[2, 4]]}


def test_hermite_rows_is_triangular_and_reduced():
    h = hermite_rows([[4, 6], [6, 9], [2, 3]])
    assert h == [[2, 3]]
    h = hermite_rows([[3, 1], [0, 5], [6, 7]])
    assert all(row[i] > 0 for i, row in enumerate(h))
    assert 0 <= h[0][1] < h[1][1]


def test_rank_gf2():
    assert rank_gf2([[1, 0], [0, 1], [1, 1]]) == 2
    assert rank_gf2([[0, 0]]) == 0
    assert rank_gf2([]) == 0


matrices = st.tuples(
    st.sampled_from([2, 3]), st.integers(1, 3), st.integers(1, 3), st.integers(1, 4), st.integers(0, 2**32)
)


def _random_matrix(p, k, n, m, seed):
    rng = np.random.default_rng(seed)
    rows = rng.integers(0, p**k, size=(m, n)) * p ** rng.integers(0, k + 1, size=(m, 1))
    return M(rows.tolist(), p, k)


@given(matrices)
def test_canonical_form_preserves_row_space(params):
    p, k, n, m, seed = params
    mat = _random_matrix(p, k, n, m, seed)
    form = canonical_form(mat)
    g = ConcreteGroup([p**k] * n)
    span = g.generated(mat.rows)
    rebuilt = g.generated(form.generators().rows) if form.p_matrix is not None else g.trivial()
    assert rebuilt == span
    assert invertible_check(form.q)
    assert p ** weight(form.beta) == span.order
    assert all(k >= b >= 1 for b in form.beta)
    assert classify_type(span).get(p, ()) == form.beta


@given(matrices, st.permutations(range(4)))
def test_type_does_not_depend_on_row_order(params, perm):
    p, k, n, m, seed = params
    mat = _random_matrix(p, k, n, m, seed)
    order = [i for i in perm if i < m]
    shuffled = M([mat.rows[i] for i in order], p, k)
    assert subgroup_type_mod(shuffled) == subgroup_type_mod(mat)


@given(st.lists(st.lists(st.integers(-9, 9), min_size=2, max_size=2), min_size=1, max_size=3),
       st.lists(st.integers(2, 12), min_size=2, max_size=2))
def test_integer_kernel_is_the_relation_lattice(rows, orders):
    # rows: images of the basis vectors of Z^r in Z_{n1} x Z_{n2}
    lat = integer_kernel(rows, orders)
    r = len(rows)
    assert lat.is_full_rank
    for i in range(r):
        e = [0] * r
        e[i] = math.prod(orders)
        assert tuple(e) in lat
    for v in lat.basis:
        image = [sum(c * row[j] for c, row in zip(v, rows)) % orders[j] for j in range(2)]
        assert image == [0, 0]
    image_order = ConcreteGroup(orders).generated(rows).order
    assert lat.index() == image_order
