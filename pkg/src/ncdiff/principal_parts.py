"""Principal parts P^n = (A (x) A) / J^{n+1} of a commutative algebra.

J is the kernel of the multiplication map m : A (x) A -> A.  An endomorphism
of A has order <= n exactly when it factors as phi o j^n, where
j^n(a) = 1 (x) a mod J^{n+1} and phi : P^n -> A is left A-linear; the left
A-structure on P^n comes from a -> a (x) 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import flint

from .algebra_core import Algebra, tensor_square
from .exact_linalg import (
    RationalMatrix,
    Subspace,
    canonicalize,
    full_space,
    kernel,
    zero_subspace,
    _rref_nonzero,
    _stack,
)

__all__ = [
    "PrincipalParts",
    "PrincipalPartsError",
    "mult_kernel",
    "ideal_power",
    "nilpotency_index",
    "build",
    "hom_space",
    "induced_operators",
]


class PrincipalPartsError(ValueError):
    pass


@lru_cache(maxsize=16)
def _tensor(A: Algebra):
    B, m = tensor_square(A)
    lefts = tuple(M.flint for M in B.left_matrices)
    return B, m, lefts


def _require_commutative(A: Algebra):
    if not A.commutative:
        raise PrincipalPartsError(
            "principal parts need a commutative algebra: otherwise m : A (x) A -> A "
            "is not an algebra morphism and its kernel is not an ideal"
        )


def mult_kernel(A: Algebra) -> Subspace:
    """J = ker(m) inside A (x) A; dim J = d^2 - d."""
    _require_commutative(A)
    _, m, _ = _tensor(A)
    return kernel(m)


def _ideal_product(A: Algebra, I: Subspace, J: Subspace) -> Subspace:
    """Span of u v for u in I, v in J, multiplied inside A (x) A."""
    _, _, lefts = _tensor(A)
    n = I.ambient_dim
    if I.dim == 0 or J.dim == 0:
        return zero_subspace(n)
    Jt = J.matrix.transpose()  # columns are basis vectors of J
    acc = flint.fmpq_mat(0, n)
    for u in I.basis:
        # l_u = sum_a u_a l_{e_a}
        lu = flint.fmpq_mat(n, n)
        for a, c in enumerate(u):
            if c:
                lu += lefts[a] * flint.fmpq(c.numerator, c.denominator)
        acc = _rref_nonzero(_stack([acc, (lu * Jt).transpose()], n))
        if acc.nrows() == n:
            break
    return Subspace(n, acc)


def ideal_power(A: Algebra, J: Subspace, k: int) -> Subspace:
    """J^k, with J^0 the unit ideal; J^k = J^{k-1} J by repeated two-factor products."""
    if k < 0:
        raise PrincipalPartsError("ideal powers need k >= 0")
    if k == 0:
        return full_space(J.ambient_dim)
    P = J
    for _ in range(k - 1):
        if P.dim == 0:
            break
        P = _ideal_product(A, P, J)
    return P


def nilpotency_index(A: Algebra, J: Subspace, limit: int = 64):
    """Least k with J^k = 0, or None if the powers stabilise at a nonzero ideal."""
    P = J
    k = 1
    while P.dim:
        Q = _ideal_product(A, P, J)
        k += 1
        if Q == P or k > limit:
            return None
        P = Q
    return k


@dataclass(frozen=True, eq=False)
class PrincipalParts:
    algebra: Algebra
    n: int
    ideal: Subspace  # J^{n+1}
    quotient_dim: int
    projection: RationalMatrix  # d^2 -> quotient coordinates
    j_n: RationalMatrix  # d -> quotient coordinates
    left_action: tuple[RationalMatrix, ...]  # quotient matrices of e_i (x) 1
    quotient_coords: tuple[int, ...]  # tensor indices kept as quotient coordinates

    def check_invariants(self) -> list[str]:
        """Exact verification of the structural identities; empty list when all hold."""
        problems = []
        A = self.algebra
        d = A.dim
        P = self.projection
        if kernel(P.flint) != self.ideal:
            problems.append("kernel of projection differs from J^{n+1}")
        if canonicalize(P.transpose().to_rows(), P.rows).dim != self.quotient_dim:
            problems.append("projection is not surjective")
        one_tensor = [A.unit[u] * A.unit[v] for u in range(d) for v in range(d)]
        if self.j_n.apply(A.unit) != P.apply(one_tensor):
            problems.append("j_n(1) is not the class of 1 (x) 1")
        acts = self.left_action
        sc = A.structure_constants
        for i in range(d):
            for j in range(d):
                lhs = acts[i] @ acts[j]
                rhs = RationalMatrix.zero(self.quotient_dim, self.quotient_dim)
                for k, c in enumerate(sc[i][j]):
                    if c:
                        rhs = rhs + acts[k].scale(c)
                if lhs != rhs:
                    problems.append(f"left action fails e_{i} e_{j}")
        unit_act = RationalMatrix.zero(self.quotient_dim, self.quotient_dim)
        for k, c in enumerate(A.unit):
            if c:
                unit_act = unit_act + acts[k].scale(c)
        if unit_act != RationalMatrix.identity(self.quotient_dim):
            problems.append("unit does not act as the identity")
        return problems


def build(A: Algebra, n: int) -> PrincipalParts:
    """P^n with coordinates on the non-pivot columns of the RREF of J^{n+1}."""
    if n < 0:
        raise PrincipalPartsError("order n must be non-negative")
    J = mult_kernel(A)
    I = ideal_power(A, J, n + 1)
    d = A.dim
    N = d * d
    pivots = set(I.pivots)
    keep = tuple(c for c in range(N) if c not in pivots)
    q = len(keep)
    proj_flint = I.complement_projection()  # rows indexed by `keep`
    projection = RationalMatrix.from_flint(proj_flint) if q else RationalMatrix.zero(0, N)

    # a -> 1 (x) a
    one_tensor_cols = []
    for a in range(d):
        col = [Fraction(0)] * N
        for u, c in enumerate(A.unit):
            if c:
                col[u * d + a] = c
        one_tensor_cols.append(col)
    embed = RationalMatrix(N, d, tuple(one_tensor_cols[a][r] for r in range(N) for a in range(d)))
    j_n = projection @ embed if q else RationalMatrix.zero(0, d)

    # section: quotient coordinate r -> basis tensor e_{keep[r]}
    section = RationalMatrix(N, q, tuple(Fraction(int(keep[c] == r)) for r in range(N) for c in range(q)))
    B, _, lefts = _tensor(A)
    actions = []
    for i in range(d):
        e_i_tensor_1 = [Fraction(0)] * N
        for v, c in enumerate(A.unit):
            if c:
                e_i_tensor_1[i * d + v] = c
        li = RationalMatrix.zero(N, N)
        for idx, c in enumerate(e_i_tensor_1):
            if c:
                li = li + RationalMatrix.from_flint(lefts[idx]).scale(c)
        actions.append(projection @ li @ section if q else RationalMatrix.zero(0, 0))
    return PrincipalParts(A, n, I, q, projection, j_n, tuple(actions), keep)


def hom_space(P: PrincipalParts) -> Subspace:
    """Left A-module maps F : P^n -> A, as d x q matrices flattened row-major.

    Solves F action(e_i) = l_{e_i} F for every i.
    """
    A = P.algebra
    d, q = A.dim, P.quotient_dim
    nvars = d * q
    rows = []
    for i in range(d):
        act = P.left_action[i]
        li = A.left_matrices[i]
        # (F act)_{r,c} - (l_i F)_{r,c} = sum_s F_{r,s} act_{s,c} - sum_s li_{r,s} F_{s,c}
        for r in range(d):
            for c in range(q):
                row = [Fraction(0)] * nvars
                for s in range(q):
                    a = act[s, c]
                    if a:
                        row[r * q + s] += a
                for s in range(d):
                    b = li[r, s]
                    if b:
                        row[s * q + c] -= b
                if any(row):
                    rows.append(row)
    if not rows:
        return full_space(nvars)
    return kernel(RationalMatrix.from_rows(rows))


@dataclass(frozen=True)
class InducedOperators:
    operators: Subspace
    hom_dim: int

    @property
    def injective(self) -> bool:
        return self.operators.dim == self.hom_dim


def induced_operators(A: Algebra, n: int, *, with_hom_dim: bool = False):
    """Span of F o j^n over all left-module maps F : P^n -> A, inside End(A).

    The hom-space dimension and the operator-space dimension are kept apart:
    F -> F o j^n is not assumed injective.  Pass ``with_hom_dim=True`` to get
    an :class:`InducedOperators` record instead of the bare subspace.
    """
    _require_commutative(A)
    P = build(A, n)
    H = hom_space(P)
    d, q = A.dim, P.quotient_dim
    ops = []
    for f in H.basis:
        F = RationalMatrix(d, q, f)
        ops.append((F @ P.j_n).entries)
    S = canonicalize(ops, d * d)
    if with_hom_dim:
        return InducedOperators(S, H.dim)
    return S
