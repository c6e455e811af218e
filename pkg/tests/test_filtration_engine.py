import pytest
import sympy as sp

import oracles
from corpus import ALL, COMMUTATIVE, NONCOMMUTATIVE, build, ident
from ncdiff.algebra_core import derivations, mult_op_spans, preset
from ncdiff.exact_linalg import RationalMatrix, canonicalize, lattice_contains
from ncdiff.filtration_engine import (
    FiltrationError,
    check_left_stability,
    check_multiplicative,
    commutative_filtration,
    iterated_ad_space,
    iterated_ad_test,
    noncommutative_filtration,
    operator_order,
)

# frozen from tests/oracles.py (sympy elimination, independent of the engine)
ORACLE_DIMS = {
    ("dual_numbers", ()): [2, 3, 4, 4],
    ("truncated_poly", (1, 2)): [3, 5, 7, 8, 9],
    ("truncated_poly", (1, 3)): [4, 7, 10, 12, 14, 15],
}

D_DUAL = RationalMatrix.from_rows([[0, 1], [0, 0]])  # 1 -> 0, X -> 1


def _oracle_rref(level):
    return tuple(tuple(r) for r in level.tolist())


def _engine_rref(S):
    return tuple(tuple(sp.Rational(x.numerator, x.denominator) for x in b) for b in S.basis)


@pytest.mark.parametrize("key", sorted(ORACLE_DIMS), ids=str)
def test_commutative_levels_match_frozen_oracle(key):
    F = commutative_filtration(preset(key[0], list(key[1])))
    assert F.dims() == ORACLE_DIMS[key]


def test_oracle_regenerates_frozen_values():
    L = oracles.struct_matrices(oracles.dual_numbers_table(), 2)
    levels = oracles.commutative_levels(L, 3)
    assert oracles.level_dims(levels) == ORACLE_DIMS[("dual_numbers", ())]
    F = commutative_filtration(preset("dual_numbers"), 3)
    # both sides are reduced row echelon forms, so the bases agree entry by entry
    assert [_oracle_rref(lv) for lv in levels] == [_engine_rref(S) for S in F.levels]
    L3 = oracles.struct_matrices(oracles.poly1_table(2), 3)
    assert oracles.level_dims(oracles.commutative_levels(L3, 4)) == ORACLE_DIMS[("truncated_poly", (1, 2))]


def test_field_is_everything():
    F = commutative_filtration(preset("field"))
    assert F.dims() == [1, 1, 1]
    assert F.stabilized_at == 0


def test_dual_numbers_fingerprint():
    F = commutative_filtration(preset("dual_numbers"))
    assert F.dims()[:3] == [2, 3, 4]
    assert F.stabilized_at == 2


def test_truncated_poly_1_2_bounded_by_end():
    F = commutative_filtration(preset("truncated_poly", [1, 2]))
    assert F.levels[-1].dim <= 9


def test_commutative_rejects_noncommutative():
    with pytest.raises(FiltrationError):
        commutative_filtration(preset("matrix_algebra", [2]))


@pytest.mark.parametrize("case", ALL, ids=ident)
def test_chain_is_nondecreasing(case):
    A = build(*case)
    F = noncommutative_filtration(A, 3)
    for a, b in zip(F.levels, F.levels[1:]):
        assert a <= b
    for a, b in zip(F.primed_levels, F.primed_levels[1:]):
        assert a <= b


@pytest.mark.parametrize("case", ALL, ids=ident)
def test_primed_zero_is_right_multiplication(case):
    A = build(*case)
    F = noncommutative_filtration(A, 1)
    assert F.primed_levels[0] == mult_op_spans(A)[1]


@pytest.mark.parametrize("case", COMMUTATIVE, ids=ident)
def test_commutative_level_zero_is_multiplications(case):
    A = build(*case)
    L, R = mult_op_spans(A)
    assert commutative_filtration(A, 1).levels[0] == L == R


def test_matrix_algebra_constant_from_level_zero():
    F = noncommutative_filtration(preset("matrix_algebra", [2]))
    assert F.dims()[0] == 16
    assert F.stabilized_at == 0


@pytest.mark.parametrize("case", COMMUTATIVE, ids=ident)
def test_noncommutative_reduces_to_commutative(case):
    A = build(*case)
    assert noncommutative_filtration(A).levels == commutative_filtration(A).levels


@pytest.mark.parametrize("case", COMMUTATIVE, ids=ident)
def test_iterated_ad_space_matches_recursion(case):
    A = build(*case)
    F = commutative_filtration(A)
    for n, level in enumerate(F.levels):
        assert iterated_ad_space(A, n) == level


def test_order_examples():
    A = preset("dual_numbers")
    F = commutative_filtration(A)
    assert operator_order(F, D_DUAL) == 2
    assert operator_order(F, RationalMatrix.zero(2, 2)) == 0
    for M in A.left_matrices:
        assert operator_order(F, M) == 0
    G = noncommutative_filtration(preset("truncated_free", [2, 2]), 2)
    for M in G.algebra.left_matrices:
        assert operator_order(G, M) == 0


def test_order_beyond_nmax():
    # on Q[X]/(X^4): X^3 -> 1 has order 6 and d/dX has order 4 (oracle values);
    # d/dX is not a derivation of the truncation, so order 1 would be wrong
    A = preset("truncated_poly", [1, 3])
    E03 = RationalMatrix.from_rows([[0, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]])
    dX = RationalMatrix.from_rows([[0, 1, 0, 0], [0, 0, 2, 0], [0, 0, 0, 3], [0, 0, 0, 0]])
    assert operator_order(commutative_filtration(A), E03) is None
    F = commutative_filtration(A, 7)
    assert F.dims() == [4, 7, 10, 12, 14, 15, 16, 16]
    assert operator_order(F, E03) == 6
    assert operator_order(F, dX) == 4


def test_ad_test_examples():
    A = preset("dual_numbers")
    L = oracles.struct_matrices(oracles.dual_numbers_table(), 2)
    Dsym = sp.Matrix([[0, 1], [0, 0]])
    for n in range(3):
        assert iterated_ad_test(A, D_DUAL, n) == oracles.iterated_ad_zero(L, Dsym, n)
    assert not iterated_ad_test(A, D_DUAL, 1)
    assert iterated_ad_test(A, D_DUAL, 2)
    assert iterated_ad_test(A, A.left_matrices[1], 0)
    with pytest.raises(FiltrationError):
        iterated_ad_test(preset("matrix_algebra", [2]), RationalMatrix.identity(4), 0)


def test_ad_test_sweep_matches_oracle_on_truncated_poly():
    m = 2
    A = preset("truncated_poly", [1, m])
    L = oracles.struct_matrices(oracles.poly1_table(m), m + 1)
    d = m + 1
    for idx in range(d * d):
        flat = [int(k == idx) for k in range(d * d)]
        D = RationalMatrix.from_flat(d, flat)
        Dsym = sp.Matrix(d, d, flat)
        for n in range(3):
            assert iterated_ad_test(A, D, n) == oracles.iterated_ad_zero(L, Dsym, n)


@pytest.mark.parametrize("case", ALL, ids=ident)
def test_multiplicative_small(case):
    A = build(*case)
    F = noncommutative_filtration(A, 3)
    for total in range(4):
        for r in range(total + 1):
            assert check_multiplicative(F, r, total - r)


def test_multiplicative_range_error():
    F = commutative_filtration(preset("dual_numbers"), 2)
    with pytest.raises(FiltrationError):
        check_multiplicative(F, 2, 1)


def test_multiplicative_reports_witness_for_a_bad_chain():
    from ncdiff.filtration_engine import Filtration
    from ncdiff.exact_linalg import zero_subspace

    A = preset("dual_numbers")
    # span{E01, E10} is not closed under products: E01 E10 = E00
    D1 = canonicalize([(0, 1, 0, 0), (0, 0, 1, 0)], 4)
    bad = Filtration(A, "commutative", (D1, D1, zero_subspace(4)))
    res = check_multiplicative(bad, 1, 1)
    assert not res.passed
    assert res.witness is not None and not res.witness.is_zero()


@pytest.mark.parametrize("case", NONCOMMUTATIVE, ids=ident)
def test_left_stability(case):
    F = noncommutative_filtration(build(*case), 2)
    assert all(check_left_stability(F))


@pytest.mark.parametrize("case", ALL, ids=ident)
def test_derivations_in_level_one(case):
    A = build(*case)
    Der = derivations(A)
    assert Der <= noncommutative_filtration(A, 1).levels[1]
    if A.commutative:
        assert Der <= commutative_filtration(A, 1).levels[1]


def test_stabilization_is_least_level():
    F = commutative_filtration(preset("truncated_poly", [1, 2]), 6)
    n = F.stabilized_at
    assert n == 4
    assert all(lv == F.levels[n] for lv in F.levels[n:])
    assert F.levels[n - 1] != F.levels[n]


def test_no_stabilization_when_still_growing():
    F = commutative_filtration(preset("truncated_poly", [1, 4]), 2)
    assert F.stabilized_at is None


# -- integer mode -----------------------------------------------------------------


def test_z_mode_dual_numbers_matches_rational_span():
    A = preset("dual_numbers", scalars="Z")
    F = commutative_filtration(A)
    G = commutative_filtration(preset("dual_numbers"))
    assert F.integral
    assert [lv.rational_span() for lv in F.levels] == list(G.levels)


def test_z_mode_contains_divided_square():
    # on Z[X]/(X^3) the divided square X^2 -> 1 is integral; on the truncation it has order 4
    A = preset("truncated_poly", [1, 2], scalars="Z")
    F = commutative_filtration(A)
    theta2 = RationalMatrix.from_rows([[0, 0, 1], [0, 0, 0], [0, 0, 0]])
    assert operator_order(F, theta2) == 4
    assert operator_order(commutative_filtration(preset("truncated_poly", [1, 2])), theta2) == 4
    half = [x / 2 for x in theta2.entries]
    assert not lattice_contains(F.levels[4], half)


def test_z_mode_levels_are_saturated_here():
    F = commutative_filtration(preset("truncated_poly", [1, 2], scalars="Z"))
    assert all(lv.index_in_saturation() == 1 for lv in F.levels)


def test_z_mode_noncommutative():
    A = preset("upper_triangular", [2], scalars="Z")
    F = noncommutative_filtration(A, 2)
    Q = noncommutative_filtration(preset("upper_triangular", [2]), 2)
    assert [lv.rank for lv in F.levels] == Q.dims()
