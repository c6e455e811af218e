"""Filtrations of End_k(A) by differential operator order.

Endomorphisms of a d-dimensional algebra are d x d matrices acting on
column coordinates, flattened row-major into Q^(d*d).  Two recursions are
implemented:

* commutative:      D_{-1} = 0,  D_{n+1} = {d : d l_t - l_t d in D_n for all t}
* non-commutative:  D'_n = {phi : l_t phi - phi l_t in D_{n-1} for all t},
                    D_n = L_A D'_n L_A

"For all t in A" is reduced to the basis e_1..e_d: t -> ad(t) is linear and
each level is a subspace (or lattice), so the conditions for basis elements
imply the condition for every t.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Literal, Optional, Sequence, Union

import flint

from .algebra_core import Algebra, mult_op_spans
from .exact_linalg import (
    DimensionError,
    IntegerLattice,
    RationalMatrix,
    Subspace,
    contains,
    full_space,
    hnf_span,
    kernel,
    lattice_contains,
    lattice_preimage,
    lattice_product_span,
    preimage_all,
    product_span,
    to_fraction,
    zero_subspace,
    _rref_nonzero,
    _stack,
)

__all__ = [
    "Filtration",
    "FiltrationError",
    "CheckResult",
    "ad_matrix",
    "commutative_filtration",
    "noncommutative_filtration",
    "operator_order",
    "iterated_ad_test",
    "iterated_ad_space",
    "check_multiplicative",
    "check_left_stability",
    "default_nmax",
]

Level = Union[Subspace, IntegerLattice]


class FiltrationError(ValueError):
    pass


@dataclass(frozen=True)
class CheckResult:
    passed: bool
    witness: Optional[object] = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.passed


@dataclass(frozen=True, eq=False)
class Filtration:
    algebra: Algebra
    mode: Literal["commutative", "noncommutative"]
    levels: tuple[Level, ...]
    primed_levels: tuple[Level, ...] = ()
    integral: bool = False
    stabilized_at: Optional[int] = field(init=False, default=None)

    def __post_init__(self):
        object.__setattr__(self, "stabilized_at", _stabilization(self.levels, self.algebra.dim ** 2))

    @property
    def n_max(self) -> int:
        return len(self.levels) - 1

    def dims(self) -> list[int]:
        return [lvl.dim for lvl in self.levels]

    def primed_dims(self) -> list[int]:
        return [lvl.dim for lvl in self.primed_levels]


def _stabilization(levels: Sequence[Level], ambient: int) -> Optional[int]:
    """Least n with D_n = ... = D_{n_max}, provided the chain is visibly stable.

    Stability is visible when the last two levels agree or the top level is
    already the whole endomorphism space.
    """
    if not levels:
        return None
    top = levels[-1]
    last = len(levels) - 1
    n = last
    while n > 0 and levels[n - 1] == top:
        n -= 1
    if n < last or _is_everything(top, ambient):
        return n
    return None


def _is_everything(level: Level, ambient: int) -> bool:
    if isinstance(level, IntegerLattice):
        return level.rank == ambient and level.index_in_saturation() == 1
    return level.dim == ambient


def default_nmax(A: Algebra) -> int:
    return A.dim + 1


# ---------------------------------------------------------------------------
# ad(t) on the endomorphism space
# ---------------------------------------------------------------------------


def _kron_right(X: RationalMatrix) -> flint.fmpq_mat:
    """Matrix of phi -> phi X on row-major vectors: I (x) X^T."""
    d = X.rows
    n = d * d
    entries = [flint.fmpq(0)] * (n * n)
    for i in range(d):
        for j in range(d):
            for k in range(d):
                x = X[j, k]
                if x:
                    entries[(i * d + k) * n + i * d + j] = flint.fmpq(x.numerator, x.denominator)
    return flint.fmpq_mat(n, n, entries)


def _kron_left(X: RationalMatrix) -> flint.fmpq_mat:
    """Matrix of phi -> X phi on row-major vectors: X (x) I."""
    d = X.rows
    n = d * d
    entries = [flint.fmpq(0)] * (n * n)
    for i in range(d):
        for j in range(d):
            x = X[i, j]
            if x:
                q = flint.fmpq(x.numerator, x.denominator)
                for k in range(d):
                    entries[(i * d + k) * n + j * d + k] = q
    return flint.fmpq_mat(n, n, entries)


def ad_matrix(A: Algebra, t: Sequence) -> flint.fmpq_mat:
    """Matrix of phi -> phi l_t - l_t phi acting on the d^2 coordinates."""
    from .algebra_core import left_mult

    lt = left_mult(A, t).matrix
    return _kron_right(lt) - _kron_left(lt)


@lru_cache(maxsize=64)
def _basis_ads(A: Algebra) -> tuple[flint.fmpq_mat, ...]:
    return tuple(ad_matrix(A, A.basis_vector(i)) for i in range(A.dim))


def _is_zero(m: flint.fmpq_mat) -> bool:
    return m == flint.fmpq_mat(m.nrows(), m.ncols())


def _to_fmpz(m: flint.fmpq_mat) -> flint.fmpz_mat:
    return flint.fmpz_mat(m.nrows(), m.ncols(), [int(e.p) for e in m.entries()])


# ---------------------------------------------------------------------------
# the two recursions
# ---------------------------------------------------------------------------


def commutative_filtration(A: Algebra, n_max: Optional[int] = None) -> Filtration:
    """Levels D_0..D_{n_max} of the commutative recursion."""
    if not A.commutative:
        raise FiltrationError(f"{A!r} is not commutative; use noncommutative_filtration")
    n_max = default_nmax(A) if n_max is None else n_max
    if n_max < 0:
        raise FiltrationError("n_max must be non-negative")
    N = A.dim ** 2
    ads = _basis_ads(A)
    integral = A.scalar_mode == "Z"
    if integral:
        ads_z = [_to_fmpz(m) for m in ads]
        prev: Level = hnf_span([], N)
    else:
        prev = zero_subspace(N)
    levels: list[Level] = []
    for n in range(n_max + 1):
        # once two consecutive levels agree the recursion has reached a fixed point
        if n >= 2 and levels[-1] == levels[-2]:
            levels.append(levels[-1])
            continue
        level = lattice_preimage(ads_z, prev) if integral else preimage_all(ads, prev)
        levels.append(level)
        prev = level
    return Filtration(A, "commutative", tuple(levels), integral=integral)


def _left_span(A: Algebra, integral: bool) -> Level:
    if integral:
        return hnf_span([m.entries for m in A.left_matrices], A.dim ** 2)
    return mult_op_spans(A)[0]


def _sandwich(L: Level, middle: Level) -> Level:
    if isinstance(middle, IntegerLattice):
        return lattice_product_span(L, lattice_product_span(middle, L))
    return product_span(L, product_span(middle, L))


def noncommutative_filtration(A: Algebra, n_max: Optional[int] = None) -> Filtration:
    """Primed levels D'_n and sandwiched levels D_n = L_A D'_n L_A."""
    n_max = default_nmax(A) if n_max is None else n_max
    if n_max < 0:
        raise FiltrationError("n_max must be non-negative")
    N = A.dim ** 2
    # l_t phi - phi l_t = -ad(t) phi, and levels are closed under negation
    ads = _basis_ads(A)
    integral = A.scalar_mode == "Z"
    L = _left_span(A, integral)
    if integral:
        ads_z = [_to_fmpz(m) for m in ads]
        prev: Level = hnf_span([], N)
    else:
        prev = zero_subspace(N)
    levels: list[Level] = []
    primed: list[Level] = []
    for n in range(n_max + 1):
        if n >= 2 and levels[-1] == levels[-2]:
            levels.append(levels[-1])
            primed.append(primed[-1])
            continue
        p = lattice_preimage(ads_z, prev) if integral else preimage_all(ads, prev)
        level = _sandwich(L, p)
        primed.append(p)
        levels.append(level)
        prev = level
    return Filtration(A, "noncommutative", tuple(levels), tuple(primed), integral=integral)


# ---------------------------------------------------------------------------
# membership and order
# ---------------------------------------------------------------------------


def _flat(A: Algebra, D) -> tuple:
    d = A.dim
    if isinstance(D, RationalMatrix):
        if D.shape != (d, d):
            raise DimensionError(f"operator has shape {D.shape}, expected {(d, d)}")
        return D.entries
    D = list(D)
    if len(D) == d and all(isinstance(r, (list, tuple)) for r in D):
        return _flat(A, RationalMatrix.from_rows(D))
    if len(D) != d * d:
        raise DimensionError(f"operator needs {d * d} coordinates, got {len(D)}")
    return tuple(to_fraction(x) for x in D)


def _member(level: Level, v) -> bool:
    if isinstance(level, IntegerLattice):
        return lattice_contains(level, v)
    return contains(level, v)


def operator_order(F: Filtration, D) -> Optional[int]:
    """Least n with D in level n, or None when D is beyond level n_max."""
    v = _flat(F.algebra, D)
    for n, level in enumerate(F.levels):
        if _member(level, v):
            return n
    return None


def _iterated_ad(A: Algebra, D: flint.fmpq_mat, n: int) -> Optional[tuple[int, ...]]:
    """A multiset (i_0 <= ... <= i_n) with ad(e_i0)...ad(e_in) D != 0, if any."""
    Ls = [m.flint for m in A.left_matrices]

    def walk(M, start, remaining, path):
        if _is_zero(M):
            return None
        if remaining == 0:
            return path
        for i in range(start, len(Ls)):
            hit = walk(M * Ls[i] - Ls[i] * M, i, remaining - 1, path + (i,))
            if hit is not None:
                return hit
        return None

    return walk(D, 0, n + 1, ())


def iterated_ad_test(A: Algebra, D, n: int) -> bool:
    """True iff ad(x_0)...ad(x_n) D = 0 for all x_i in A.

    ad(x) D = D l_x - l_x D.  For commutative A the ad(e_i) commute, so only
    nondecreasing index tuples are enumerated; multilinearity covers the rest.
    """
    if not A.commutative:
        raise FiltrationError("the iterated-commutator criterion applies to commutative algebras only")
    if n < 0:
        raise FiltrationError("n must be non-negative")
    M = RationalMatrix.from_flat(A.dim, _flat(A, D)).flint
    return _iterated_ad(A, M, n) is None


def iterated_ad_space(A: Algebra, n: int) -> Subspace:
    """All D with ad(x_0)...ad(x_n) D = 0, as the common kernel of the composites."""
    if not A.commutative:
        raise FiltrationError("the iterated-commutator criterion applies to commutative algebras only")
    N = A.dim ** 2
    ads = _basis_ads(A)
    rows = flint.fmpq_mat(0, N)

    def walk(C, start, remaining):
        nonlocal rows
        if _is_zero(C) or rows.nrows() == N:
            return
        if remaining == 0:
            rows = _rref_nonzero(_stack([rows, C], N))
            return
        for i in range(start, len(ads)):
            walk(ads[i] * C, i, remaining - 1)

    ident = flint.fmpq_mat(N, N, [flint.fmpq(int(i == j)) for i in range(N) for j in range(N)])
    walk(ident, 0, n + 1)
    return kernel(rows) if rows.nrows() else full_space(N)


# ---------------------------------------------------------------------------
# multiplicativity and stability diagnostics
# ---------------------------------------------------------------------------


def _level_product(a: Level, b: Level) -> Level:
    if isinstance(a, IntegerLattice):
        return lattice_product_span(a, b)
    return product_span(a, b)


def _product_witness(a: Level, b: Level, target: Level, d: int):
    for u in a.basis:
        U = RationalMatrix.from_flat(d, u)
        for v in b.basis:
            W = U @ RationalMatrix.from_flat(d, v)
            if not _member(target, W.entries):
                return W
    return None


def check_multiplicative(F: Filtration, r: int, s: int) -> CheckResult:
    """Does D_r D_s lie inside D_{r+s}?  On failure the witness is an offending product."""
    if r < 0 or s < 0 or r + s > F.n_max:
        raise FiltrationError(f"levels r={r}, s={s} out of range for n_max={F.n_max}")
    target = F.levels[r + s]
    prod = _level_product(F.levels[r], F.levels[s])
    if prod.issubset(target):
        return CheckResult(True, detail=f"dim D_{r}D_{s} = {prod.dim} <= dim D_{r + s} = {target.dim}")
    W = _product_witness(F.levels[r], F.levels[s], target, F.algebra.dim)
    return CheckResult(False, W, f"D_{r}D_{s} not inside D_{r + s}")


def check_left_stability(F: Filtration) -> list[bool]:
    """Per level: L_A D_n = D_n = D_n L_A."""
    L = _left_span(F.algebra, F.integral)
    out = []
    for level in F.levels:
        out.append(_level_product(L, level) == level and _level_product(level, L) == level)
    return out
