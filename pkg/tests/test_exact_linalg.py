from fractions import Fraction
from itertools import permutations

import pytest
import sympy as sp
from hypothesis import given, strategies as st

from ncdiff.exact_linalg import (
    DimensionError,
    RationalMatrix,
    canonicalize,
    contains,
    full_space,
    hnf_span,
    intersect,
    kernel,
    lattice_contains,
    lattice_preimage,
    preimage_under,
    product_span,
    subspace_sum,
    zero_subspace,
)

small = st.integers(-4, 4)


def vectors(n, max_count=4):
    return st.lists(st.lists(small, min_size=n, max_size=n), max_size=max_count)


# -- canonicalize / contains / sum --------------------------------------------


def test_canonicalize_examples():
    assert canonicalize([], 3).dim == 0
    assert canonicalize([(1, 0), (0, 1)], 2) == full_space(2)
    S = canonicalize([(2, 4), (1, 2)], 2)
    assert S.dim == 1
    assert S.basis == ((Fraction(1), Fraction(2)),)


def test_canonicalize_rejects_bad_length():
    with pytest.raises(DimensionError):
        canonicalize([(1, 2, 3)], 2)


def test_contains_examples():
    assert contains(zero_subspace(2), (0, 0))
    S = canonicalize([(1, 2)], 2)
    assert contains(S, (2, 4))
    assert not contains(S, (1, 0))


def test_sum_examples():
    S = canonicalize([(1, 2)], 2)
    assert subspace_sum(S, zero_subspace(2)) == S
    assert subspace_sum(canonicalize([(1, 0)], 2), canonicalize([(0, 1)], 2)) == full_space(2)
    assert subspace_sum(S, S) == S


def test_preimage_examples():
    L = RationalMatrix.from_rows([[1, 2], [3, 4]])
    T = canonicalize([(1, 1)], 2)
    assert preimage_under(L, full_space(2)) == full_space(2)
    assert preimage_under(RationalMatrix.zero(2, 2), T) == full_space(2)
    assert preimage_under(RationalMatrix.identity(2), T) == T


def test_preimage_is_exact():
    L = RationalMatrix.from_rows([[1, 2], [3, 4]])
    T = canonicalize([(1, 1)], 2)
    P = preimage_under(L, T)
    for b in P.basis:
        assert contains(T, L.apply(b))
    # L invertible so the preimage has the same dimension as T
    assert P.dim == 1


def test_product_span_examples():
    I2 = RationalMatrix.identity(2).entries
    S2 = canonicalize([(0, 1, 0, 0), (1, 0, 0, 1)], 4)
    assert product_span(canonicalize([I2], 4), S2) == S2
    assert product_span(zero_subspace(4), S2).dim == 0


def test_hnf_examples():
    lat = hnf_span([(2, 0), (0, 2)], 2)
    assert not lattice_contains(lat, (1, 1))
    unit = hnf_span([(1, 0), (0, 1)], 2)
    assert all(lattice_contains(unit, (a, b)) for a in range(-3, 4) for b in range(-3, 4))
    line = hnf_span([(2, 4)], 2)
    assert lattice_contains(line, (4, 8))
    assert not lattice_contains(line, (1, 2))


def test_hnf_rejects_fractions():
    with pytest.raises(ValueError):
        hnf_span([(Fraction(1, 2), 0)], 2)
    assert not lattice_contains(hnf_span([(1, 0)], 2), (Fraction(1, 2), 0))


def test_lattice_preimage_is_integral():
    # {v : 2 v in 4Z}: v in 2Z
    target = hnf_span([(4,)], 1)
    pre = lattice_preimage([RationalMatrix.from_rows([[2]]).flint], target)
    assert pre.basis == ((2,),)


# -- properties -----------------------------------------------------------------


@given(vectors(3), st.randoms(use_true_random=False))
def test_canonicalize_order_and_scaling_independent(vs, rnd):
    S = canonicalize(vs, 3)
    shuffled = list(vs)
    rnd.shuffle(shuffled)
    scaled = [[x * (k + 2) for x in v] for k, v in enumerate(shuffled)]
    assert canonicalize(scaled, 3) == S
    assert canonicalize(S.basis, 3) == S
    assert canonicalize(S.basis, 3).basis == S.basis


@given(vectors(3), st.lists(small, min_size=3, max_size=3))
def test_contains_agrees_with_dense_solve(vs, v):
    S = canonicalize(vs, 3)
    if S.dim == 0:
        expected = not any(v)
    else:
        B = sp.Matrix([list(b) for b in S.basis]).T
        expected = B.rank() == B.row_join(sp.Matrix(v)).rank()
    assert contains(S, v) == expected


def _mat_subspace(vs):
    return canonicalize(vs, 4)


@given(vectors(4, 2), vectors(4, 2), vectors(4, 2))
def test_product_span_distributes(a, b, c):
    S1, S2, S3 = map(_mat_subspace, (a, b, c))
    lhs = product_span(S1, subspace_sum(S2, S3))
    rhs = subspace_sum(product_span(S1, S2), product_span(S1, S3))
    assert lhs == rhs


@given(vectors(4, 3), vectors(4, 3))
def test_product_span_matches_basis_products(a, b):
    S1, S2 = _mat_subspace(a), _mat_subspace(b)
    prods = []
    for u in S1.basis:
        for v in S2.basis:
            prods.append((RationalMatrix.from_flat(2, u) @ RationalMatrix.from_flat(2, v)).entries)
    assert product_span(S1, S2) == canonicalize(prods, 4)


@given(vectors(4, 5))
def test_rational_rank_equals_hnf_rank(vs):
    assert canonicalize(vs, 4).dim == hnf_span(vs, 4).rank


@given(vectors(3), vectors(3))
def test_intersection_is_largest_common_subspace(a, b):
    S, T = canonicalize(a, 3), canonicalize(b, 3)
    I = intersect(S, T)
    assert I <= S and I <= T
    assert I.dim == S.dim + T.dim - subspace_sum(S, T).dim


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=1, max_size=3))
def test_kernel_dimension(rows):
    M = RationalMatrix.from_rows(rows)
    K = kernel(M)
    assert K.dim == 3 - sp.Matrix(rows).rank()
    for v in K.basis:
        assert not any(M.apply(v))


def test_subspace_equality_is_basis_equality():
    vs = [(1, 2, 3), (0, 1, 1), (1, 3, 4)]
    results = {canonicalize(p, 3).basis for p in permutations(vs)}
    assert len(results) == 1
