"""Algebras shared by several test modules."""

from ncdiff.algebra_core import preset

COMMUTATIVE = [("field", []), ("dual_numbers", [])] + [("truncated_poly", [1, m]) for m in range(5)] + [
    ("truncated_poly", [2, 2])
]
NONCOMMUTATIVE = [("matrix_algebra", [2]), ("upper_triangular", [2]), ("truncated_free", [2, 2])]
ALL = COMMUTATIVE + NONCOMMUTATIVE


def build(name, params):
    return preset(name, params)


def ident(case):
    name, params = case
    return f"{name}{tuple(params)}" if params else name
