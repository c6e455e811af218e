"""Finite-dimensional associative unital algebras given by structure constants."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Literal, Sequence

from .exact_linalg import RationalMatrix, Subspace, canonicalize, kernel, to_fraction

__all__ = [
    "Algebra",
    "AlgebraError",
    "MultOperator",
    "Violation",
    "validate",
    "left_mult",
    "right_mult",
    "mult_op_spans",
    "derivations",
    "preset",
    "PRESETS",
    "tensor_square",
    "monomials",
    "words",
]

ScalarMode = Literal["Q", "Z"]


class AlgebraError(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    kind: str  # "associativity" | "left_unit" | "right_unit"
    indices: tuple[int, ...]
    detail: str

    def to_dict(self) -> dict:
        return {"kind": self.kind, "indices": list(self.indices), "detail": self.detail}


@dataclass(frozen=True, eq=False)
class Algebra:
    """e_i e_j = sum_k structure_constants[i][j][k] e_k.

    The constructor only checks shapes; call :func:`validate` for the
    associativity and unit laws.
    """

    dim: int
    basis_labels: tuple[str, ...]
    structure_constants: tuple[tuple[tuple[Fraction, ...], ...], ...]
    unit: tuple[Fraction, ...]
    scalar_mode: ScalarMode = "Q"
    name: str = ""
    commutative: bool = field(init=False)

    def __post_init__(self):
        d = self.dim
        if d < 1:
            raise AlgebraError("algebras must have dimension at least 1 (a unit is required)")
        if self.scalar_mode not in ("Q", "Z"):
            raise AlgebraError(f"unknown scalar mode {self.scalar_mode!r}")
        if len(self.basis_labels) != d:
            raise AlgebraError(f"expected {d} labels, got {len(self.basis_labels)}")
        if len(self.unit) != d:
            raise AlgebraError(f"unit vector has length {len(self.unit)}, expected {d}")
        sc = self.structure_constants
        if len(sc) != d or any(len(row) != d for row in sc) or any(len(v) != d for row in sc for v in row):
            raise AlgebraError(f"structure constants must form a {d}x{d}x{d} table")
        sc = tuple(tuple(tuple(to_fraction(c) for c in v) for v in row) for row in sc)
        unit = tuple(to_fraction(c) for c in self.unit)
        if self.scalar_mode == "Z":
            if any(c.denominator != 1 for row in sc for v in row for c in v):
                raise AlgebraError("Z-mode algebras need integer structure constants")
            if any(c.denominator != 1 for c in unit):
                raise AlgebraError("Z-mode algebras need an integral unit")
        object.__setattr__(self, "structure_constants", sc)
        object.__setattr__(self, "unit", unit)
        object.__setattr__(self, "basis_labels", tuple(str(s) for s in self.basis_labels))
        object.__setattr__(
            self, "commutative",
            all(sc[i][j] == sc[j][i] for i in range(d) for j in range(i + 1, d)),
        )

    @classmethod
    def from_sparse(cls, dim, labels, unit, triples, scalar_mode: ScalarMode = "Q", name: str = "") -> Algebra:
        """Build from (i, j, k, coefficient) entries; omitted entries are zero."""
        table = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
        for i, j, k, c in triples:
            table[i][j][k] += to_fraction(c)
        return cls(dim, tuple(labels), tuple(tuple(tuple(v) for v in row) for row in table),
                   tuple(unit), scalar_mode, name)

    # -- arithmetic on coordinate vectors ---------------------------------

    def basis_vector(self, i: int) -> tuple[Fraction, ...]:
        return tuple(Fraction(int(k == i)) for k in range(self.dim))

    def zero(self) -> tuple[Fraction, ...]:
        return (Fraction(0),) * self.dim

    def one(self) -> tuple[Fraction, ...]:
        return self.unit

    def add(self, a, b) -> tuple[Fraction, ...]:
        return tuple(x + y for x, y in zip(a, b))

    def scale(self, c, a) -> tuple[Fraction, ...]:
        c = to_fraction(c)
        return tuple(c * x for x in a)

    def mul(self, a: Sequence, b: Sequence) -> tuple[Fraction, ...]:
        d = self.dim
        if len(a) != d or len(b) != d:
            raise AlgebraError(f"elements must have {d} coordinates")
        out = [Fraction(0)] * d
        sc = self.structure_constants
        for i, ai in enumerate(a):
            if not ai:
                continue
            ai = to_fraction(ai)
            for j, bj in enumerate(b):
                if not bj:
                    continue
                c = ai * to_fraction(bj)
                for k, s in enumerate(sc[i][j]):
                    if s:
                        out[k] += c * s
        return tuple(out)

    def label(self, a: Sequence) -> str:
        terms = []
        for c, lab in zip(a, self.basis_labels):
            if c:
                terms.append(lab if c == 1 else f"{c}*{lab}")
        return " + ".join(terms) if terms else "0"

    @cached_property
    def left_matrices(self) -> tuple[RationalMatrix, ...]:
        return tuple(left_mult(self, self.basis_vector(i)).matrix for i in range(self.dim))

    @cached_property
    def right_matrices(self) -> tuple[RationalMatrix, ...]:
        return tuple(right_mult(self, self.basis_vector(i)).matrix for i in range(self.dim))

    def summary(self) -> dict:
        return {
            "name": self.name,
            "dim": self.dim,
            "labels": list(self.basis_labels),
            "commutative": self.commutative,
            "scalars": self.scalar_mode,
        }

    def __repr__(self) -> str:
        return f"Algebra({self.name or 'custom'}, dim={self.dim}, scalars={self.scalar_mode})"


def validate(A: Algebra) -> list[Violation]:
    """Every failure of associativity or of the unit laws; empty means valid."""
    d = A.dim
    sc = A.structure_constants
    out = []
    e = [A.basis_vector(i) for i in range(d)]
    for i in range(d):
        left = A.mul(A.unit, e[i])
        if left != e[i]:
            out.append(Violation("left_unit", (i,), f"1*{A.basis_labels[i]} = {A.label(left)}"))
        right = A.mul(e[i], A.unit)
        if right != e[i]:
            out.append(Violation("right_unit", (i,), f"{A.basis_labels[i]}*1 = {A.label(right)}"))
    for i, j in product(range(d), repeat=2):
        ij = sc[i][j]
        for k in range(d):
            lhs = A.mul(ij, e[k])
            rhs = A.mul(e[i], sc[j][k])
            if lhs != rhs:
                out.append(Violation(
                    "associativity", (i, j, k),
                    f"({A.basis_labels[i]}{A.basis_labels[j]}){A.basis_labels[k]} = {A.label(lhs)} but "
                    f"{A.basis_labels[i]}({A.basis_labels[j]}{A.basis_labels[k]}) = {A.label(rhs)}",
                ))
    return out


# ---------------------------------------------------------------------------
# multiplication operators
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MultOperator:
    matrix: RationalMatrix
    side: Literal["left", "right"]
    element: tuple[Fraction, ...]


def _mult_matrix(A: Algebra, a: Sequence, side: str) -> RationalMatrix:
    d = A.dim
    if len(a) != d:
        raise AlgebraError(f"element has {len(a)} coordinates, algebra has dimension {d}")
    cols = []
    for j in range(d):
        ej = A.basis_vector(j)
        cols.append(A.mul(a, ej) if side == "left" else A.mul(ej, a))
    # column j holds the image of e_j
    return RationalMatrix(d, d, tuple(cols[j][i] for i in range(d) for j in range(d)))


def left_mult(A: Algebra, a: Sequence) -> MultOperator:
    """l_a : x -> a x."""
    a = tuple(to_fraction(x) for x in a)
    return MultOperator(_mult_matrix(A, a, "left"), "left", a)


def right_mult(A: Algebra, a: Sequence) -> MultOperator:
    """r_a : x -> x a."""
    a = tuple(to_fraction(x) for x in a)
    return MultOperator(_mult_matrix(A, a, "right"), "right", a)


def mult_op_spans(A: Algebra) -> tuple[Subspace, Subspace]:
    """(L_A, R_A) inside the d^2-dimensional endomorphism space."""
    n = A.dim * A.dim
    L = canonicalize([m.entries for m in A.left_matrices], n)
    R = canonicalize([m.entries for m in A.right_matrices], n)
    return L, R


def derivations(A: Algebra) -> Subspace:
    """Der(A) inside the d^2-dimensional endomorphism space (row-major matrices).

    Solves D(e_i e_j) = D(e_i) e_j + e_i D(e_j) for all i, j; D[r][c] is the
    e_r coefficient of D(e_c).
    """
    d = A.dim
    c = A.structure_constants
    rows = []
    for i, j, m in product(range(d), repeat=3):
        row = [Fraction(0)] * (d * d)
        for k in range(d):
            if c[i][j][k]:
                row[m * d + k] += c[i][j][k]
        for a in range(d):
            if c[a][j][m]:
                row[a * d + i] -= c[a][j][m]
            if c[i][a][m]:
                row[a * d + j] -= c[i][a][m]
        if any(row):
            rows.append(row)
    if not rows:
        return kernel(RationalMatrix.zero(1, d * d))
    return kernel(RationalMatrix.from_rows(rows))


# ---------------------------------------------------------------------------
# presets
# ---------------------------------------------------------------------------

_LETTERS = "xyz"


def monomials(nvars: int, max_degree: int) -> list[tuple[int, ...]]:
    """Exponent tuples of total degree <= max_degree, by degree then lex (X first)."""
    out = []
    for deg in range(max_degree + 1):
        if nvars == 1:
            out.append((deg,))
        else:
            out.extend((a, deg - a) for a in range(deg, -1, -1))
    return out


def words(num_gens: int, max_degree: int) -> list[tuple[int, ...]]:
    """Words over generators 0..num_gens-1 of length <= max_degree, by length then lex."""
    out = [()]
    layer = [()]
    for _ in range(max_degree):
        layer = [w + (g,) for w in layer for g in range(num_gens)]
        out.extend(layer)
    return out


def _monomial_label(exps: tuple[int, ...]) -> str:
    names = "XY"
    parts = []
    for v, e in enumerate(exps):
        if e == 1:
            parts.append(names[v])
        elif e > 1:
            parts.append(f"{names[v]}^{e}")
    return "*".join(parts) if parts else "1"


def _gen_names(num_gens: int) -> list[str]:
    if num_gens <= len(_LETTERS):
        return list(_LETTERS[:num_gens])
    return [f"x{i + 1}" for i in range(num_gens)]


def truncated_poly(nvars: int, max_degree: int, scalars: ScalarMode = "Q") -> Algebra:
    """k[X] or k[X, Y] modulo all monomials of degree > max_degree."""
    if nvars not in (1, 2):
        raise AlgebraError("truncated_poly supports 1 or 2 variables")
    if max_degree < 0:
        raise AlgebraError("max_degree must be non-negative")
    mons = monomials(nvars, max_degree)
    index = {m: i for i, m in enumerate(mons)}
    triples = []
    for i, a in enumerate(mons):
        for j, b in enumerate(mons):
            c = tuple(x + y for x, y in zip(a, b))
            if c in index:
                triples.append((i, j, index[c], 1))
    unit = [int(i == 0) for i in range(len(mons))]
    return Algebra.from_sparse(len(mons), [_monomial_label(m) for m in mons], unit, triples,
                               scalars, f"truncated_poly({nvars},{max_degree})")


def truncated_free(num_gens: int, max_degree: int, scalars: ScalarMode = "Q") -> Algebra:
    """k<x_1..x_g> modulo all words longer than max_degree."""
    if num_gens < 1 or max_degree < 0:
        raise AlgebraError("truncated_free needs num_gens >= 1 and max_degree >= 0")
    ws = words(num_gens, max_degree)
    index = {w: i for i, w in enumerate(ws)}
    names = _gen_names(num_gens)
    labels = ["".join(names[g] for g in w) if w else "1" for w in ws]
    triples = []
    for i, a in enumerate(ws):
        for j, b in enumerate(ws):
            if a + b in index:
                triples.append((i, j, index[a + b], 1))
    unit = [int(i == 0) for i in range(len(ws))]
    return Algebra.from_sparse(len(ws), labels, unit, triples, scalars,
                               f"truncated_free({num_gens},{max_degree})")


def matrix_algebra(n: int, scalars: ScalarMode = "Q") -> Algebra:
    """Full n x n matrices with matrix units E_ij in row-major order."""
    if n < 1:
        raise AlgebraError("matrix_algebra needs n >= 1")
    units = [(i, j) for i in range(n) for j in range(n)]
    return _matrix_units(n, units, scalars, f"matrix_algebra({n})")


def upper_triangular(n: int, scalars: ScalarMode = "Q") -> Algebra:
    if n < 1:
        raise AlgebraError("upper_triangular needs n >= 1")
    units = [(i, j) for i in range(n) for j in range(n) if i <= j]
    return _matrix_units(n, units, scalars, f"upper_triangular({n})")


def _matrix_units(n, units, scalars, name) -> Algebra:
    index = {u: k for k, u in enumerate(units)}
    triples = []
    for a, (i, j) in enumerate(units):
        for b, (k, l) in enumerate(units):
            if j == k:
                triples.append((a, b, index[(i, l)], 1))
    unit = [int(i == j) for (i, j) in units]
    labels = [f"E{i + 1}{j + 1}" for (i, j) in units]
    return Algebra.from_sparse(len(units), labels, unit, triples, scalars, name)


def dual_numbers(scalars: ScalarMode = "Q") -> Algebra:
    A = truncated_poly(1, 1, scalars)
    return Algebra(A.dim, A.basis_labels, A.structure_constants, A.unit, scalars, "dual_numbers")


def base_field(scalars: ScalarMode = "Q") -> Algebra:
    """The base ring itself, as a 1-dimensional algebra."""
    return Algebra(1, ("1",), (((Fraction(1),),),), (Fraction(1),), scalars, "field")


PRESETS = {
    "truncated_poly": truncated_poly,
    "truncated_free": truncated_free,
    "matrix_algebra": matrix_algebra,
    "upper_triangular": upper_triangular,
    "dual_numbers": dual_numbers,
    "field": base_field,
}

_MAX_DIM = 50


def preset(name: str, params: Sequence[int] | dict = (), scalars: ScalarMode = "Q") -> Algebra:
    """Build a named preset; ``params`` is positional (list) or keyword (dict)."""
    try:
        builder = PRESETS[name]
    except KeyError:
        raise AlgebraError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
    try:
        if isinstance(params, dict):
            A = builder(**params, scalars=scalars)
        else:
            A = builder(*params, scalars=scalars)
    except TypeError as exc:
        raise AlgebraError(f"bad parameters for preset {name!r}: {exc}") from None
    if A.dim > _MAX_DIM:
        raise AlgebraError(f"preset {name}{tuple(params)} has dimension {A.dim} > {_MAX_DIM}")
    return A


# ---------------------------------------------------------------------------
# tensor square
# ---------------------------------------------------------------------------


def tensor_square(A: Algebra) -> tuple[Algebra, RationalMatrix]:
    """A (x) A with the componentwise product, and the multiplication map m.

    Basis element e_i (x) e_j sits at index i*d + j.
    """
    d = A.dim
    sc = A.structure_constants
    n = d * d
    table = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    nz = [[[(k, c) for k, c in enumerate(sc[i][j]) if c] for j in range(d)] for i in range(d)]
    for i, j, k, l in product(range(d), repeat=4):
        left = nz[i][k]
        right = nz[j][l]
        if not left or not right:
            continue
        row = table[i * d + j][k * d + l]
        for p, a in left:
            for q, b in right:
                row[p * d + q] += a * b
    unit = [A.unit[i] * A.unit[j] for i in range(d) for j in range(d)]
    labels = [f"{a}(x){b}" for a in A.basis_labels for b in A.basis_labels]
    B = Algebra(n, tuple(labels), tuple(tuple(tuple(v) for v in row) for row in table), tuple(unit),
                A.scalar_mode, f"{A.name or 'A'}(x)2")
    mult = RationalMatrix(d, n, tuple(sc[i][j][k] for k in range(d) for i in range(d) for j in range(d)))
    return B, mult
