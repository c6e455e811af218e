import random
from fractions import Fraction

import pytest

from corpus import ALL, build, ident
from ncdiff.algebra_core import (
    Algebra,
    AlgebraError,
    derivations,
    left_mult,
    mult_op_spans,
    preset,
    right_mult,
    tensor_square,
    validate,
)
from ncdiff.exact_linalg import RationalMatrix, kernel, product_span


def rand_elem(rng, d):
    return tuple(Fraction(rng.randint(-3, 3)) for _ in range(d))


@pytest.mark.parametrize("case", ALL, ids=ident)
def test_presets_are_valid(case):
    assert validate(build(*case)) == []


def test_preset_dimensions():
    assert preset("truncated_free", [2, 2]).dim == 7
    assert preset("truncated_poly", [2, 2]).dim == 6
    assert preset("truncated_poly", [2, 2]).basis_labels == ("1", "X", "Y", "X^2", "X*Y", "Y^2")
    M = preset("matrix_algebra", [2])
    assert M.dim == 4 and not M.commutative


def test_preset_errors():
    with pytest.raises(AlgebraError):
        preset("truncated_poly", [3, 2])
    with pytest.raises(AlgebraError):
        preset("no_such_thing")
    with pytest.raises(AlgebraError):
        preset("matrix_algebra", [8])  # dimension 64 is over the cap


def test_broken_unit_is_reported():
    # e1*e1 = e2 with e2 claimed as the unit: the unit laws fail
    A = Algebra.from_sparse(2, ["a", "b"], [0, 1], [(0, 0, 1, 1), (1, 1, 1, 1)])
    kinds = {v.kind for v in validate(A)}
    assert "left_unit" in kinds


def test_nonassociative_table_is_reported():
    # a*a = b, a*b = 0, b*a = a: (aa)a = ba = a but a(aa) = ab = 0
    A = Algebra.from_sparse(3, ["1", "a", "b"], [1, 0, 0],
                            [(0, j, j, 1) for j in range(3)] + [(j, 0, j, 1) for j in range(1, 3)]
                            + [(1, 1, 2, 1), (2, 1, 1, 1)])
    assoc = [v for v in validate(A) if v.kind == "associativity"]
    assert (1, 1, 1) in [v.indices for v in assoc]


def test_z_mode_requires_integers():
    with pytest.raises(AlgebraError):
        Algebra.from_sparse(1, ["1"], [1], [(0, 0, 0, Fraction(1, 2))], "Z")


def test_left_mult_examples():
    D = preset("dual_numbers")
    assert left_mult(D, D.unit).matrix == RationalMatrix.identity(2)
    assert left_mult(D, (0, 1)).matrix == RationalMatrix.from_rows([[0, 0], [1, 0]])
    U = preset("upper_triangular", [2])  # basis E11, E12, E22
    l11 = left_mult(U, U.basis_vector(0)).matrix
    assert l11 == RationalMatrix.from_rows([[1, 0, 0], [0, 1, 0], [0, 0, 0]])


@pytest.mark.parametrize("case", ALL, ids=ident)
def test_mult_operator_laws(case):
    A = build(*case)
    rng = random.Random(7)
    for _ in range(5):
        a, b, x = (rand_elem(rng, A.dim) for _ in range(3))
        ab = A.mul(a, b)
        assert left_mult(A, ab).matrix == left_mult(A, a).matrix @ left_mult(A, b).matrix
        assert right_mult(A, ab).matrix == right_mult(A, b).matrix @ right_mult(A, a).matrix
        la, rb = left_mult(A, a).matrix, right_mult(A, b).matrix
        assert la @ rb == rb @ la
        assert la.apply(x) == A.mul(a, x)


@pytest.mark.parametrize("case", ALL, ids=ident)
def test_mult_spans(case):
    A = build(*case)
    L, R = mult_op_spans(A)
    assert L.dim == R.dim == A.dim
    assert (L == R) == A.commutative


def test_matrix_algebra_sandwich_is_everything():
    L, R = mult_op_spans(preset("matrix_algebra", [2]))
    assert product_span(L, R).dim == 16


def test_dual_numbers_left_times_right():
    # l_a r_b = l_(ab) for a commutative algebra, so the span is L itself (oracle value 2)
    L, R = mult_op_spans(preset("dual_numbers"))
    assert product_span(L, R).dim == 2
    assert product_span(L, R) == L


@pytest.mark.parametrize("case", ALL, ids=ident)
def test_tensor_square(case):
    A = build(*case)
    B, m = tensor_square(A)
    d = A.dim
    assert validate(B) == []
    one = [A.unit[u] * A.unit[v] for u in range(d) for v in range(d)]
    assert m.apply(one) == A.unit
    assert kernel(m).dim == d * d - d


def test_tensor_square_commutativity():
    assert tensor_square(preset("truncated_poly", [1, 2]))[0].commutative
    assert not tensor_square(preset("truncated_free", [2, 2]))[0].commutative


def test_dual_numbers_mult_map_kills_x_tensor_x():
    _, m = tensor_square(preset("dual_numbers"))
    assert not any(m.apply([0, 0, 0, 1]))


@pytest.mark.parametrize("case", ALL, ids=ident)
def test_derivations_satisfy_leibniz(case):
    A = build(*case)
    d = A.dim
    rng = random.Random(3)
    for v in derivations(A).basis:
        D = RationalMatrix.from_flat(d, v)
        for _ in range(3):
            x, y = rand_elem(rng, d), rand_elem(rng, d)
            assert D.apply(A.mul(x, y)) == A.add(A.mul(D.apply(x), y), A.mul(x, D.apply(y)))


def test_derivation_dimensions():
    assert derivations(preset("dual_numbers")).dim == 1
    assert derivations(preset("matrix_algebra", [2])).dim == 3  # all inner
    assert derivations(preset("field")).dim == 0
