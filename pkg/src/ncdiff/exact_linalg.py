"""Exact linear algebra over Q and Z.

Subspaces of a coordinate space are stored in reduced row echelon form, so
two equal subspaces always carry identical bases.  Integer lattices are
stored in row-style Hermite normal form without saturation.

Elimination itself is delegated to FLINT (``python-flint``); everything that
leaves this module is a :class:`fractions.Fraction` or a Python ``int``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import isqrt
from typing import Iterable, Sequence

import flint

__all__ = [
    "DimensionError",
    "RationalMatrix",
    "Subspace",
    "IntegerLattice",
    "canonicalize",
    "zero_subspace",
    "full_space",
    "contains",
    "subspace_sum",
    "intersect",
    "kernel",
    "preimage_under",
    "preimage_all",
    "product_span",
    "hnf_span",
    "lattice_contains",
    "integer_kernel",
    "lattice_preimage",
    "lattice_product_span",
    "lattice_sum",
    "to_fraction",
]


class DimensionError(ValueError):
    """Raised when vector lengths or matrix shapes do not line up."""


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, flint.fmpq):
        return Fraction(int(x.p), int(x.q))
    if isinstance(x, flint.fmpz):
        return Fraction(int(x))
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


def _q(x) -> flint.fmpq:
    if isinstance(x, flint.fmpq):
        return x
    if isinstance(x, int):
        return flint.fmpq(x)
    f = to_fraction(x)
    return flint.fmpq(f.numerator, f.denominator)


def _qmat(rows: int, cols: int, entries: Sequence) -> flint.fmpq_mat:
    if rows == 0 or cols == 0:
        return flint.fmpq_mat(rows, cols)
    return flint.fmpq_mat(rows, cols, [_q(e) for e in entries])


def _stack(mats: Sequence[flint.fmpq_mat], cols: int) -> flint.fmpq_mat:
    entries = []
    rows = 0
    for m in mats:
        if m.ncols() != cols:
            raise DimensionError("cannot stack matrices with different column counts")
        rows += m.nrows()
        entries.extend(m.entries())
    if rows == 0:
        return flint.fmpq_mat(0, cols)
    return flint.fmpq_mat(rows, cols, entries)


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RationalMatrix:
    """Dense row-major matrix of reduced fractions."""

    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise DimensionError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, "
                f"got {len(self.entries)}"
            )
        object.__setattr__(self, "entries", tuple(to_fraction(e) for e in self.entries))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> RationalMatrix:
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise DimensionError("ragged rows")
        return cls(len(rows), ncols, tuple(e for r in rows for e in r))

    @classmethod
    def identity(cls, n: int) -> RationalMatrix:
        return cls(n, n, tuple(Fraction(int(i == j)) for i in range(n) for j in range(n)))

    @classmethod
    def zero(cls, rows: int, cols: int) -> RationalMatrix:
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    @classmethod
    def from_flat(cls, n: int, vector: Sequence) -> RationalMatrix:
        """The n x n matrix whose row-major flattening is ``vector``."""
        if len(vector) != n * n:
            raise DimensionError(f"expected {n * n} coordinates, got {len(vector)}")
        return cls(n, n, tuple(vector))

    @classmethod
    def from_flint(cls, m: flint.fmpq_mat) -> RationalMatrix:
        return cls(m.nrows(), m.ncols(), tuple(to_fraction(e) for e in m.entries()))

    @cached_property
    def flint(self) -> flint.fmpq_mat:
        return _qmat(self.rows, self.cols, self.entries)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> RationalMatrix:
        return RationalMatrix(
            self.cols, self.rows,
            tuple(self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)),
        )

    def apply(self, v: Sequence) -> tuple[Fraction, ...]:
        if len(v) != self.cols:
            raise DimensionError(f"vector of length {len(v)} for {self.rows}x{self.cols} matrix")
        v = [to_fraction(x) for x in v]
        out = []
        for i in range(self.rows):
            r = self.entries[i * self.cols:(i + 1) * self.cols]
            out.append(sum((a * b for a, b in zip(r, v) if a and b), Fraction(0)))
        return tuple(out)

    def __matmul__(self, other: RationalMatrix) -> RationalMatrix:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        return RationalMatrix.from_flint(self.flint * other.flint)

    def __add__(self, other: RationalMatrix) -> RationalMatrix:
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        return RationalMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: RationalMatrix) -> RationalMatrix:
        if self.shape != other.shape:
            raise DimensionError(f"cannot subtract {other.shape} from {self.shape}")
        return RationalMatrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> RationalMatrix:
        return RationalMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, c) -> RationalMatrix:
        c = to_fraction(c)
        return RationalMatrix(self.rows, self.cols, tuple(c * a for a in self.entries))

    def is_zero(self) -> bool:
        return not any(self.entries)

    def is_integral(self) -> bool:
        return all(e.denominator == 1 for e in self.entries)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(e) for e in self.row(i)) for i in range(self.rows))
        return f"RationalMatrix({self.rows}x{self.cols}: [{body}])"


def _as_flint(m) -> flint.fmpq_mat:
    if isinstance(m, flint.fmpq_mat):
        return m
    if isinstance(m, RationalMatrix):
        return m.flint
    if isinstance(m, flint.fmpz_mat):
        return flint.fmpq_mat(m)
    return RationalMatrix.from_rows(m).flint


# ---------------------------------------------------------------------------
# subspaces over Q
# ---------------------------------------------------------------------------


def _rref_nonzero(m: flint.fmpq_mat) -> flint.fmpq_mat:
    if m.nrows() == 0:
        return flint.fmpq_mat(0, m.ncols())
    r, rank = m.rref()
    if rank == r.nrows():
        return r
    return flint.fmpq_mat(rank, m.ncols(), r.entries()[: rank * m.ncols()])


class Subspace:
    """A linear subspace of Q^n with its canonical RREF basis.

    Build instances with :func:`canonicalize`; the constructor trusts that
    ``rref`` is already reduced with no zero rows.
    """

    __slots__ = ("ambient_dim", "_rref", "_basis", "_pivots", "_key")

    def __init__(self, ambient_dim: int, rref: flint.fmpq_mat):
        self.ambient_dim = ambient_dim
        self._rref = rref
        self._basis = None
        self._pivots = None
        self._key = None

    @property
    def dim(self) -> int:
        return self._rref.nrows()

    @property
    def matrix(self) -> flint.fmpq_mat:
        return self._rref

    @property
    def basis(self) -> tuple[tuple[Fraction, ...], ...]:
        if self._basis is None:
            n = self.ambient_dim
            flat = [to_fraction(e) for e in self._rref.entries()]
            self._basis = tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(self.dim))
        return self._basis

    @property
    def pivots(self) -> tuple[int, ...]:
        if self._pivots is None:
            piv = []
            n = self.ambient_dim
            flat = self._rref.entries()
            for i in range(self.dim):
                row = flat[i * n:(i + 1) * n]
                piv.append(next(j for j, e in enumerate(row) if e != 0))
            self._pivots = tuple(piv)
        return self._pivots

    def _cmp_key(self):
        if self._key is None:
            self._key = (self.ambient_dim, self.basis)
        return self._key

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.dim == other.dim and self._rref == other._rref

    def __hash__(self):
        return hash(self._cmp_key())

    def __contains__(self, v) -> bool:
        return contains(self, v)

    def __le__(self, other: Subspace) -> bool:
        return self.issubset(other)

    def __add__(self, other: Subspace) -> Subspace:
        return subspace_sum(self, other)

    def __and__(self, other: Subspace) -> Subspace:
        return intersect(self, other)

    def issubset(self, other: Subspace) -> bool:
        if self.ambient_dim != other.ambient_dim:
            raise DimensionError("subspaces live in different ambient spaces")
        if self.dim > other.dim:
            return False
        return all(contains(other, row) for row in self.basis)

    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    def complement_projection(self) -> flint.fmpq_mat:
        """Matrix of x -> (x reduced modulo self), read on the non-pivot coordinates.

        Its kernel is exactly ``self``.
        """
        n = self.ambient_dim
        piv = self.pivots
        pivset = set(piv)
        free = [c for c in range(n) if c not in pivset]
        flat = self._rref.entries()
        entries = [flint.fmpq(0)] * (len(free) * n)
        for r, c in enumerate(free):
            entries[r * n + c] = flint.fmpq(1)
            for i, p in enumerate(piv):
                e = flat[i * n + c]
                if e != 0:
                    entries[r * n + p] = -e
        if not free:
            return flint.fmpq_mat(0, n)
        return flint.fmpq_mat(len(free), n, entries)

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def _check_vectors(vectors, ambient_dim: int) -> list[list]:
    rows = []
    for v in vectors:
        v = list(v)
        if len(v) != ambient_dim:
            raise DimensionError(f"vector of length {len(v)} in ambient dimension {ambient_dim}")
        rows.append(v)
    return rows


def canonicalize(vectors: Iterable[Sequence], ambient_dim: int) -> Subspace:
    """Canonical RREF subspace spanned by ``vectors``."""
    if isinstance(vectors, flint.fmpq_mat):
        if vectors.ncols() != ambient_dim:
            raise DimensionError(f"matrix has {vectors.ncols()} columns, ambient is {ambient_dim}")
        return Subspace(ambient_dim, _rref_nonzero(vectors))
    rows = _check_vectors(vectors, ambient_dim)
    m = _qmat(len(rows), ambient_dim, [e for r in rows for e in r])
    return Subspace(ambient_dim, _rref_nonzero(m))


def zero_subspace(n: int) -> Subspace:
    return Subspace(n, flint.fmpq_mat(0, n))


def full_space(n: int) -> Subspace:
    return Subspace(n, flint.fmpq_mat(n, n, [flint.fmpq(int(i == j)) for i in range(n) for j in range(n)]))


def contains(S: Subspace, v: Sequence) -> bool:
    """Exact membership test by reduction against the RREF basis."""
    n = S.ambient_dim
    if len(v) != n:
        raise DimensionError(f"vector of length {len(v)} in ambient dimension {n}")
    w = [to_fraction(x) for x in v]
    if S.dim == 0:
        return not any(w)
    for row, p in zip(S.basis, S.pivots):
        c = w[p]
        if c:
            for j in range(p, n):
                if row[j]:
                    w[j] -= c * row[j]
    return not any(w)


def subspace_sum(S1: Subspace, S2: Subspace) -> Subspace:
    if S1.ambient_dim != S2.ambient_dim:
        raise DimensionError("cannot add subspaces of different ambient spaces")
    if S2.dim == 0:
        return S1
    if S1.dim == 0:
        return S2
    return Subspace(S1.ambient_dim, _rref_nonzero(_stack([S1.matrix, S2.matrix], S1.ambient_dim)))


def kernel(M) -> Subspace:
    """Right kernel {v : M v = 0} of a rational matrix."""
    m = _as_flint(M)
    n = m.ncols()
    r = _rref_nonzero(m)
    rank = r.nrows()
    flat = r.entries()
    piv = []
    for i in range(rank):
        piv.append(next(j for j in range(n) if flat[i * n + j] != 0))
    pivset = set(piv)
    free = [c for c in range(n) if c not in pivset]
    if not free:
        return zero_subspace(n)
    entries = [flint.fmpq(0)] * (len(free) * n)
    for k, f in enumerate(free):
        entries[k * n + f] = flint.fmpq(1)
        for i, p in enumerate(piv):
            e = flat[i * n + f]
            if e != 0:
                entries[k * n + p] = -e
    return Subspace(n, _rref_nonzero(flint.fmpq_mat(len(free), n, entries)))


def intersect(S1: Subspace, S2: Subspace) -> Subspace:
    if S1.ambient_dim != S2.ambient_dim:
        raise DimensionError("cannot intersect subspaces of different ambient spaces")
    n = S1.ambient_dim
    if S1.is_full():
        return S2
    if S2.is_full():
        return S1
    return kernel(_stack([S1.complement_projection(), S2.complement_projection()], n))


def preimage_all(maps: Sequence, T: Subspace) -> Subspace:
    """{v : L v in T for every L in maps}, as a single kernel computation."""
    maps = [_as_flint(L) for L in maps]
    if not maps:
        raise ValueError("need at least one map")
    n = maps[0].ncols()
    for L in maps:
        if L.nrows() != T.ambient_dim or L.ncols() != n:
            raise DimensionError(
                f"map of shape {L.nrows()}x{L.ncols()} does not go from Q^{n} to Q^{T.ambient_dim}"
            )
    if T.is_full():
        return full_space(n)
    P = T.complement_projection()
    return kernel(_stack([P * L for L in maps], n))


def preimage_under(L, T: Subspace) -> Subspace:
    """{v : L v in T}: the kernel of L followed by projection away from T."""
    return preimage_all([L], T)


# ---------------------------------------------------------------------------
# products of operator subspaces
# ---------------------------------------------------------------------------


def _side(n2: int) -> int:
    n = isqrt(n2)
    if n * n != n2:
        raise DimensionError(f"ambient dimension {n2} is not a square; not a space of square matrices")
    return n


def _right_factor_kron(B: list, n: int) -> flint.fmpq_mat:
    """K with vec(X) K = vec(X B) for row-major vec, i.e. I (x) B."""
    entries = [flint.fmpq(0)] * (n ** 4)
    nn = n * n
    for i in range(n):
        for j in range(n):
            for k in range(n):
                b = B[j * n + k]
                if b != 0:
                    entries[(i * n + j) * nn + i * n + k] = b
    return flint.fmpq_mat(nn, nn, entries)


def _left_factor_kron(B: list, n: int) -> flint.fmpq_mat:
    """K with vec(X) K = vec(B X) for row-major vec, i.e. B^T (x) I."""
    entries = [flint.fmpq(0)] * (n ** 4)
    nn = n * n
    for i in range(n):
        for j in range(n):
            b = B[i * n + j]
            if b != 0:
                for k in range(n):
                    entries[(j * n + k) * nn + i * n + k] = b
    return flint.fmpq_mat(nn, nn, entries)


def product_span(S1: Subspace, S2: Subspace) -> Subspace:
    """Span of all products B1 B2 with B1 in S1, B2 in S2 (square matrices, row-major).

    By bilinearity the products of basis elements suffice.  The smaller of
    the two bases is turned into Kronecker factors so the other side is
    multiplied in one FLINT product per factor.
    """
    if S1.ambient_dim != S2.ambient_dim:
        raise DimensionError("product_span needs both subspaces in the same matrix space")
    nn = S1.ambient_dim
    n = _side(nn)
    if S1.dim == 0 or S2.dim == 0:
        return zero_subspace(nn)
    acc = flint.fmpq_mat(0, nn)
    if S2.dim <= S1.dim:
        many = S1.matrix
        factors = [_right_factor_kron(S2.matrix.entries()[i * nn:(i + 1) * nn], n) for i in range(S2.dim)]
    else:
        many = S2.matrix
        factors = [_left_factor_kron(S1.matrix.entries()[i * nn:(i + 1) * nn], n) for i in range(S1.dim)]
    for K in factors:
        acc = _rref_nonzero(_stack([acc, many * K], nn))
        if acc.nrows() == nn:
            break
    return Subspace(nn, acc)


# ---------------------------------------------------------------------------
# lattices over Z
# ---------------------------------------------------------------------------


def _int(x) -> int:
    if isinstance(x, bool):
        raise TypeError("booleans are not lattice coordinates")
    if isinstance(x, int):
        return x
    if isinstance(x, flint.fmpz):
        return int(x)
    f = to_fraction(x)
    if f.denominator != 1:
        raise ValueError(f"non-integer entry {f} in an integer lattice computation")
    return f.numerator


def _hnf_nonzero(m: flint.fmpz_mat) -> flint.fmpz_mat:
    if m.nrows() == 0:
        return flint.fmpz_mat(0, m.ncols())
    h = m.hnf()
    n = m.ncols()
    flat = h.entries()
    rank = 0
    for i in range(h.nrows()):
        if any(flat[i * n + j] != 0 for j in range(n)):
            rank = i + 1
    if rank == h.nrows():
        return h
    return flint.fmpz_mat(rank, n, flat[: rank * n])


def _zstack(mats: Sequence[flint.fmpz_mat], cols: int) -> flint.fmpz_mat:
    entries = []
    rows = 0
    for m in mats:
        rows += m.nrows()
        entries.extend(m.entries())
    if rows == 0:
        return flint.fmpz_mat(0, cols)
    return flint.fmpz_mat(rows, cols, entries)


class IntegerLattice:
    """A subgroup of Z^n, stored as the row-style Hermite normal form of its basis.

    No saturation is performed: span_Z{(2, 4)} does not contain (1, 2).
    """

    __slots__ = ("ambient_dim", "_hnf", "_basis")

    def __init__(self, ambient_dim: int, hnf: flint.fmpz_mat):
        self.ambient_dim = ambient_dim
        self._hnf = hnf
        self._basis = None

    @property
    def rank(self) -> int:
        return self._hnf.nrows()

    dim = rank

    @property
    def matrix(self) -> flint.fmpz_mat:
        return self._hnf

    @property
    def basis(self) -> tuple[tuple[int, ...], ...]:
        if self._basis is None:
            n = self.ambient_dim
            flat = [int(e) for e in self._hnf.entries()]
            self._basis = tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(self.rank))
        return self._basis

    def __eq__(self, other):
        if not isinstance(other, IntegerLattice):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.rank == other.rank and self._hnf == other._hnf

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __contains__(self, v) -> bool:
        return lattice_contains(self, v)

    def __le__(self, other: IntegerLattice) -> bool:
        return self.issubset(other)

    def issubset(self, other: IntegerLattice) -> bool:
        if self.ambient_dim != other.ambient_dim:
            raise DimensionError("lattices live in different ambient spaces")
        return all(lattice_contains(other, row) for row in self.basis)

    def rational_span(self) -> Subspace:
        return canonicalize(self.basis, self.ambient_dim)

    def index_in_saturation(self) -> int:
        """Index of the lattice in (Q-span intersected with Z^n); 1 means saturated."""
        if self.rank == 0:
            return 1
        snf = self._hnf.snf()
        n = self.ambient_dim
        flat = snf.entries()
        out = 1
        for i in range(self.rank):
            out *= abs(int(flat[i * n + i]))
        return out

    def __repr__(self) -> str:
        return f"IntegerLattice(rank={self.rank}, ambient={self.ambient_dim})"


def hnf_span(vectors: Iterable[Sequence], ambient_dim: int) -> IntegerLattice:
    """Canonical HNF basis of the Z-span of integer vectors."""
    if isinstance(vectors, flint.fmpz_mat):
        return IntegerLattice(ambient_dim, _hnf_nonzero(vectors))
    rows = _check_vectors(vectors, ambient_dim)
    if not rows:
        return IntegerLattice(ambient_dim, flint.fmpz_mat(0, ambient_dim))
    m = flint.fmpz_mat(len(rows), ambient_dim, [_int(e) for r in rows for e in r])
    return IntegerLattice(ambient_dim, _hnf_nonzero(m))


def lattice_contains(L: IntegerLattice, v: Sequence) -> bool:
    n = L.ambient_dim
    if len(v) != n:
        raise DimensionError(f"vector of length {len(v)} in ambient dimension {n}")
    try:
        w = [_int(x) for x in v]
    except ValueError:
        return False
    for row in L.basis:
        p = next(j for j, e in enumerate(row) if e)
        q, r = divmod(w[p], row[p])
        if r:
            return False
        if q:
            for j in range(p, n):
                if row[j]:
                    w[j] -= q * row[j]
    return not any(w)


def lattice_sum(L1: IntegerLattice, L2: IntegerLattice) -> IntegerLattice:
    if L1.ambient_dim != L2.ambient_dim:
        raise DimensionError("cannot add lattices of different ambient spaces")
    return IntegerLattice(L1.ambient_dim, _hnf_nonzero(_zstack([L1.matrix, L2.matrix], L1.ambient_dim)))


def _as_fmpz(m) -> flint.fmpz_mat:
    if isinstance(m, flint.fmpz_mat):
        return m
    if isinstance(m, flint.fmpq_mat):
        return flint.fmpz_mat(m.nrows(), m.ncols(), [_int(to_fraction(e)) for e in m.entries()])
    if isinstance(m, RationalMatrix):
        return flint.fmpz_mat(m.rows, m.cols, [_int(e) for e in m.entries])
    return _as_fmpz(RationalMatrix.from_rows(m))


def integer_kernel(M) -> IntegerLattice:
    """The lattice {v in Z^n : M v = 0}.

    Row-reduces [M^T | I] to Hermite form; the unimodular transform rows that
    annihilate M^T form a Z-basis of the kernel.
    """
    m = _as_fmpz(M)
    rows, n = m.nrows(), m.ncols()
    if rows == 0:
        return IntegerLattice(n, flint.fmpz_mat(n, n, [int(i == j) for i in range(n) for j in range(n)]))
    mt = m.transpose().entries()
    width = rows + n
    aug = []
    for i in range(n):
        aug.extend(mt[i * rows:(i + 1) * rows])
        aug.extend(int(i == j) for j in range(n))
    h = flint.fmpz_mat(n, width, aug).hnf()
    flat = h.entries()
    ker = []
    for i in range(n):
        head = flat[i * width:i * width + rows]
        if all(e == 0 for e in head):
            tail = flat[i * width + rows:(i + 1) * width]
            if any(e != 0 for e in tail):
                ker.append(tail)
    return hnf_span(ker, n)


def lattice_preimage(maps: Sequence, target: IntegerLattice) -> IntegerLattice:
    """{v in Z^n : L v in target for every L in maps}, solved over Z exactly.

    Unknowns are v together with integer coordinates w_L of each image in the
    target basis: L v - B^T w_L = 0 for every L.
    """
    maps = [_as_fmpz(L) for L in maps]
    if not maps:
        raise ValueError("need at least one map")
    n = maps[0].ncols()
    m = target.ambient_dim
    r = target.rank
    for L in maps:
        if L.nrows() != m or L.ncols() != n:
            raise DimensionError("map shape does not match the target lattice")
    k = len(maps)
    width = n + k * r
    B = target.basis
    entries = []
    for t, L in enumerate(maps):
        lf = L.entries()
        for i in range(m):
            row = [0] * width
            row[:n] = [int(e) for e in lf[i * n:(i + 1) * n]]
            for s in range(r):
                row[n + t * r + s] = -B[s][i]
            entries.extend(row)
    ker = integer_kernel(flint.fmpz_mat(k * m, width, entries))
    return hnf_span([row[:n] for row in ker.basis], n)


def lattice_product_span(L1: IntegerLattice, L2: IntegerLattice) -> IntegerLattice:
    """Z-span of all products B1 B2 of basis matrices."""
    if L1.ambient_dim != L2.ambient_dim:
        raise DimensionError("lattice_product_span needs both lattices in the same matrix space")
    nn = L1.ambient_dim
    n = _side(nn)
    if L1.rank == 0 or L2.rank == 0:
        return IntegerLattice(nn, flint.fmpz_mat(0, nn))
    mats1 = [flint.fmpz_mat(n, n, list(b)) for b in L1.basis]
    mats2 = [flint.fmpz_mat(n, n, list(b)) for b in L2.basis]
    acc = flint.fmpz_mat(0, nn)
    for B1 in mats1:
        block = _zstack([B1 * B2 for B2 in mats2], n)
        flat = block.entries()
        rows = [flat[i * nn:(i + 1) * nn] for i in range(len(mats2))]
        acc = _hnf_nonzero(_zstack([acc, flint.fmpz_mat(len(rows), nn, [e for r in rows for e in r])], nn))
    return IntegerLattice(nn, acc)
