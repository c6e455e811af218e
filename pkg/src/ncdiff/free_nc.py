"""Degree-truncated free associative algebras over Q.

Words are tuples of generator names.  Multiplication is concatenation
followed by truncation, i.e. the quotient by the two-sided ideal of words
longer than ``max_degree``.  No letters ever commute with each other.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import factorial
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .algebra_core import Algebra
from .exact_linalg import RationalMatrix, canonicalize, kernel, to_fraction

__all__ = [
    "FreeAlgebra",
    "FreeElement",
    "FreeAlgebraError",
    "LinearEndo",
    "Morphism",
    "HSSequence",
    "CheckReport",
    "multiply",
    "free_product",
    "universal_map",
    "codiagonal",
    "codiagonal_kernel_check",
    "check_uniqueness",
    "multimorphism_example11",
    "check_multimorphism",
    "hs_from_derivation",
    "hs_check",
    "is_derivation",
    "derivation_from_generators",
]

Word = tuple[str, ...]


class FreeAlgebraError(ValueError):
    pass


@dataclass(frozen=True)
class CheckReport:
    passed: bool
    checked: int = 0
    witness: Optional[dict] = None
    details: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed


_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*'*$")


@dataclass(frozen=True)
class FreeAlgebra:
    alphabet: tuple[str, ...]
    max_degree: int = 3

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        if len(set(self.alphabet)) != len(self.alphabet):
            raise FreeAlgebraError(f"repeated generator in {self.alphabet}")
        for g in self.alphabet:
            if not _NAME.match(g):
                raise FreeAlgebraError(f"bad generator name {g!r}")
        if self.max_degree < 0:
            raise FreeAlgebraError("max_degree must be non-negative")

    @cached_property
    def words(self) -> tuple[Word, ...]:
        """Basis words ordered by length, then lexicographically by alphabet position."""
        out = [()]
        layer = [()]
        for _ in range(self.max_degree):
            layer = [w + (g,) for w in layer for g in self.alphabet]
            out.extend(layer)
        return tuple(out)

    @cached_property
    def index(self) -> dict[Word, int]:
        return {w: i for i, w in enumerate(self.words)}

    @property
    def dim(self) -> int:
        return len(self.words)

    def element(self, terms: Mapping[Word, object] | None = None) -> FreeElement:
        return FreeElement(self, terms or {})

    def one(self) -> FreeElement:
        return FreeElement(self, {(): 1})

    def zero(self) -> FreeElement:
        return FreeElement(self, {})

    def gen(self, name: str) -> FreeElement:
        if name not in self.alphabet:
            raise FreeAlgebraError(f"{name!r} is not a generator of {self.alphabet}")
        return FreeElement(self, {(name,): 1})

    def word(self, w: Iterable[str]) -> FreeElement:
        return FreeElement(self, {tuple(w): 1})

    def mul(self, a: FreeElement, b: FreeElement) -> FreeElement:
        return multiply(a, b)

    def add(self, a: FreeElement, b: FreeElement) -> FreeElement:
        return a + b

    def scale(self, c, a: FreeElement) -> FreeElement:
        return a * to_fraction(c)

    def coords(self, a: FreeElement) -> tuple[Fraction, ...]:
        v = [Fraction(0)] * self.dim
        for w, c in a.terms.items():
            v[self.index[w]] = c
        return tuple(v)

    def from_coords(self, v: Sequence) -> FreeElement:
        return FreeElement(self, {w: c for w, c in zip(self.words, v) if c})

    def parse(self, text: str) -> FreeElement:
        return _parse_element(self, text)

    def to_algebra(self) -> Algebra:
        """The same algebra as a structure-constant table, basis in ``words`` order."""
        n = self.dim
        triples = []
        for i, a in enumerate(self.words):
            for j, b in enumerate(self.words):
                ab = a + b
                if len(ab) <= self.max_degree:
                    triples.append((i, j, self.index[ab], 1))
        labels = ["".join(w) if w else "1" for w in self.words]
        return Algebra.from_sparse(n, labels, [int(i == 0) for i in range(n)], triples,
                                   "Q", f"free<{','.join(self.alphabet)}>/deg>{self.max_degree}")

    def __repr__(self) -> str:
        return f"FreeAlgebra({','.join(self.alphabet)}; deg<={self.max_degree})"


class FreeElement:
    """Sparse word -> coefficient map inside a truncated free algebra."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: FreeAlgebra, terms: Mapping[Word, object]):
        clean: dict[Word, Fraction] = {}
        for w, c in terms.items():
            w = tuple(w)
            if len(w) > algebra.max_degree:
                continue
            for g in w:
                if g not in algebra.alphabet:
                    raise FreeAlgebraError(f"letter {g!r} not in alphabet {algebra.alphabet}")
            c = to_fraction(c)
            if c:
                clean[w] = clean.get(w, Fraction(0)) + c
        self.algebra = algebra
        self.terms = {w: c for w, c in clean.items() if c}

    def _check(self, other: FreeElement):
        if not isinstance(other, FreeElement):
            raise FreeAlgebraError(f"expected a free algebra element, got {type(other).__name__}")
        if other.algebra != self.algebra:
            raise FreeAlgebraError(f"alphabet mismatch: {self.algebra} vs {other.algebra}")

    def __add__(self, other: FreeElement) -> FreeElement:
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return FreeElement(self.algebra, out)

    def __neg__(self) -> FreeElement:
        return FreeElement(self.algebra, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: FreeElement) -> FreeElement:
        return self + (-other)

    def __mul__(self, other) -> FreeElement:
        if isinstance(other, FreeElement):
            return multiply(self, other)
        c = to_fraction(other)
        return FreeElement(self.algebra, {w: c * v for w, v in self.terms.items()})

    def __rmul__(self, other) -> FreeElement:
        return self * other

    def __eq__(self, other):
        if not isinstance(other, FreeElement):
            return NotImplemented
        return self.algebra == other.algebra and self.terms == other.terms

    def __hash__(self):
        return hash((self.algebra, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        idx = self.algebra.index
        out = []
        for w in sorted(self.terms, key=idx.__getitem__):
            c = self.terms[w]
            mono = "*".join(w)
            mag = abs(c)
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
            if not out:
                out.append(body if c > 0 else f"-{body}")
            else:
                out.append(f" + {body}" if c > 0 else f" - {body}")
        return "".join(out)

    def __repr__(self) -> str:
        return f"FreeElement({self})"


def multiply(u: FreeElement, v: FreeElement) -> FreeElement:
    """Bilinear concatenation product, truncated above max_degree."""
    u._check(v)
    D = u.algebra.max_degree
    out: dict[Word, Fraction] = {}
    for a, c in u.terms.items():
        for b, e in v.terms.items():
            if len(a) + len(b) <= D:
                w = a + b
                out[w] = out.get(w, 0) + c * e
    return FreeElement(u.algebra, out)


_ELEM_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*'*)|([-+*/()]))")


def _parse_element(F: FreeAlgebra, text: str) -> FreeElement:
    toks = []
    pos = 0
    while text[pos:].strip():
        m = _ELEM_TOKEN.match(text, pos)
        if not m:
            raise FreeAlgebraError(f"cannot parse {text!r} at position {pos}")
        toks.append((m.lastindex, m.group(m.lastindex), m.start(m.lastindex)))
        pos = m.end()
    toks.append((0, None, len(text)))
    i = 0

    def peek():
        return toks[i]

    def take():
        nonlocal i
        i += 1
        return toks[i - 1]

    def expr():
        val = term()
        while peek()[1] in ("+", "-"):
            op = take()[1]
            rhs = term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term():
        val = factor()
        while peek()[1] == "*":
            take()
            val = val * factor()
        return val

    def factor():
        kind, val, p = take()
        if val == "-":
            return -factor()
        if kind == 1:
            c = Fraction(int(val))
            if peek()[1] == "/":
                take()
                c = c / int(take()[1])
            return F.one() * c
        if kind == 2:
            if val == "1":
                return F.one()
            if val not in F.alphabet:
                raise FreeAlgebraError(f"unknown generator {val!r} at position {p} (alphabet {F.alphabet})")
            return F.gen(val)
        if val == "(":
            out = expr()
            if take()[1] != ")":
                raise FreeAlgebraError(f"missing ')' in {text!r}")
            return out
        raise FreeAlgebraError(f"unexpected {val!r} at position {p} in {text!r}")

    out = expr()
    if peek()[0] != 0:
        raise FreeAlgebraError(f"trailing input at position {peek()[2]} in {text!r}")
    return out


# ---------------------------------------------------------------------------
# linear maps
# ---------------------------------------------------------------------------


class LinearEndo:
    """A linear map given on the word basis of a truncated free algebra.

    ``codomain`` defaults to the domain.  ``base_letters`` optionally marks
    the sub-alphabet that generates the coefficient algebra A (used by the
    multimorphism check).
    """

    def __init__(self, domain: FreeAlgebra, images: Mapping[Word, object], codomain=None,
                 base_letters: Sequence[str] | None = None, name: str = ""):
        self.domain = domain
        self.codomain = codomain if codomain is not None else domain
        self.name = name
        self.base_letters = tuple(base_letters) if base_letters is not None else None
        zero = self.codomain.zero()
        self.images = {w: images.get(w, zero) for w in domain.words}
        extra = set(images) - set(self.images)
        if extra:
            raise FreeAlgebraError(f"images given for non-basis words {sorted(extra)}")

    @classmethod
    def from_function(cls, domain: FreeAlgebra, f: Callable[[Word], object], codomain=None, **kw) -> LinearEndo:
        return cls(domain, {w: f(w) for w in domain.words}, codomain, **kw)

    @classmethod
    def identity(cls, domain: FreeAlgebra) -> LinearEndo:
        return cls(domain, {w: domain.word(w) for w in domain.words}, name="id")

    def __call__(self, x: FreeElement):
        if x.algebra != self.domain:
            raise FreeAlgebraError("argument is not in the domain")
        out = self.codomain.zero()
        for w, c in x.terms.items():
            out = self.codomain.add(out, self.codomain.scale(c, self.images[w]))
        return out

    def compose(self, other: LinearEndo) -> LinearEndo:
        """self o other."""
        return LinearEndo(other.domain, {w: self(other.images[w]) for w in other.domain.words}, self.codomain)

    def scale(self, c) -> LinearEndo:
        return LinearEndo(self.domain, {w: self.codomain.scale(c, v) for w, v in self.images.items()}, self.codomain)

    def __eq__(self, other):
        if not isinstance(other, LinearEndo):
            return NotImplemented
        return self.domain == other.domain and self.images == other.images

    def matrix(self) -> RationalMatrix:
        """Matrix in the word bases (column j = image of word j)."""
        if not isinstance(self.codomain, FreeAlgebra):
            raise FreeAlgebraError("matrix() needs a free-algebra codomain")
        cols = [self.codomain.coords(self.images[w]) for w in self.domain.words]
        return RationalMatrix(self.codomain.dim, self.domain.dim,
                              tuple(cols[j][i] for i in range(self.codomain.dim) for j in range(self.domain.dim)))

    def __repr__(self) -> str:
        return f"LinearEndo({self.name or 'map'} on {self.domain})"


# ---------------------------------------------------------------------------
# free products and the universal property
# ---------------------------------------------------------------------------


class Morphism:
    """The algebra map out of a truncated free algebra fixed by generator images.

    ``target`` is a :class:`FreeAlgebra` or a structure-constant
    :class:`Algebra`; both expose ``one``, ``zero``, ``mul``, ``add`` and
    ``scale``.
    """

    def __init__(self, source: FreeAlgebra, target, assignment: Mapping[str, object], name: str = ""):
        missing = set(source.alphabet) - set(assignment)
        if missing:
            raise FreeAlgebraError(f"no image for generators {sorted(missing)}")
        self.source = source
        self.target = target
        self.assignment = {g: assignment[g] for g in source.alphabet}
        self.name = name

    def on_word(self, w: Word):
        out = self.target.one()
        for g in w:
            out = self.target.mul(out, self.assignment[g])
        return out

    def __call__(self, x: FreeElement):
        if x.algebra != self.source:
            raise FreeAlgebraError("argument is not in the source algebra")
        out = self.target.zero()
        for w, c in x.terms.items():
            out = self.target.add(out, self.target.scale(c, self.on_word(w)))
        return out

    def as_linear(self) -> LinearEndo:
        return LinearEndo(self.source, {w: self.on_word(w) for w in self.source.words}, self.target)

    def check_homomorphism(self) -> CheckReport:
        """psi(uv) = psi(u) psi(v) for basis words with |u| + |v| <= max_degree.

        Longer products vanish in the source but need not in the target, so
        only the pairs the truncation represents faithfully are compared.
        """
        S, T = self.source, self.target
        checked = 0
        for u in S.words:
            pu = self.on_word(u)
            for v in S.words:
                if len(u) + len(v) > S.max_degree:
                    continue
                checked += 1
                lhs = self(S.word(u) * S.word(v))
                rhs = T.mul(pu, self.on_word(v))
                if lhs != rhs:
                    return CheckReport(False, checked, {"u": "*".join(u) or "1", "v": "*".join(v) or "1",
                                                        "lhs": _show(T, lhs), "rhs": _show(T, rhs)})
        return CheckReport(True, checked)

    def __repr__(self) -> str:
        return f"Morphism({self.name or 'psi'}: {self.source} -> {self.target})"


def _show(T, x) -> str:
    if isinstance(T, Algebra):
        return T.label(x)
    return str(x)


def free_product(alphabet_a: Sequence[str], alphabet_b: Sequence[str], max_degree: int = 3,
                 rename: bool = False) -> tuple[FreeAlgebra, Morphism, Morphism]:
    """k<A> * k<B> = k<A, B>, truncated, with its two generator inclusions.

    With ``rename=True`` every letter of the second alphabet gets a prime.
    """
    alphabet_a = tuple(alphabet_a)
    alphabet_b = tuple(g + "'" for g in alphabet_b) if rename else tuple(alphabet_b)
    clash = set(alphabet_a) & set(alphabet_b)
    if clash:
        raise FreeAlgebraError(f"generator names collide: {sorted(clash)}")
    P = FreeAlgebra(alphabet_a + alphabet_b, max_degree)
    A = FreeAlgebra(alphabet_a, max_degree)
    B = FreeAlgebra(tuple(alphabet_b), max_degree)
    j1 = Morphism(A, P, {g: P.gen(g) for g in alphabet_a}, "j1")
    j2 = Morphism(B, P, {g: P.gen(g) for g in alphabet_b}, "j2")
    return P, j1, j2


def universal_map(assign_a: Mapping[str, object], assign_b: Mapping[str, object], target,
                  max_degree: Optional[int] = None) -> Morphism:
    """The morphism k<A> * k<B> -> target extending both generator assignments."""
    if max_degree is None:
        if not isinstance(target, FreeAlgebra):
            raise FreeAlgebraError("max_degree is required when the target is not a free algebra")
        max_degree = target.max_degree
    P, _, _ = free_product(tuple(assign_a), tuple(assign_b), max_degree)
    return Morphism(P, target, {**assign_a, **assign_b}, "psi")


def check_uniqueness(psi: Morphism) -> CheckReport:
    """A morphism is pinned down by its generator images.

    Rebuilds every basis word's image with a balanced bracketing of the
    generator images and compares with ``psi``; also checks psi(1) = 1.
    """
    T = psi.target

    def balanced(w: Word):
        if not w:
            return T.one()
        if len(w) == 1:
            return psi.assignment[w[0]]
        mid = len(w) // 2
        return T.mul(balanced(w[:mid]), balanced(w[mid:]))

    S = psi.source
    for k, w in enumerate(S.words):
        if psi(S.word(w)) != balanced(w):
            return CheckReport(False, k + 1, {"word": "*".join(w) or "1"})
    return CheckReport(True, len(S.words))


def codiagonal(alphabet: Sequence[str], max_degree: int = 3) -> Morphism:
    """A * A -> A with x -> x and x' -> x."""
    P, _, _ = free_product(alphabet, alphabet, max_degree, rename=True)
    A = FreeAlgebra(tuple(alphabet), max_degree)
    assignment = {g: A.gen(g) for g in alphabet}
    assignment.update({g + "'": A.gen(g) for g in alphabet})
    return Morphism(P, A, assignment, "codiag")


def codiagonal_kernel_check(alphabet: Sequence[str], max_degree: int = 3) -> CheckReport:
    """ker(codiagonal) versus the truncated ideal generated by the x' - x."""
    delta = codiagonal(alphabet, max_degree)
    P, A = delta.source, delta.target
    M = RationalMatrix(A.dim, P.dim, tuple(
        v for row in zip(*[A.coords(delta.on_word(w)) for w in P.words]) for v in row
    ))
    ker = kernel(M)
    gens = []
    for g in alphabet:
        diff = P.gen(g + "'") - P.gen(g)
        for u in P.words:
            for v in P.words:
                if len(u) + len(v) + 1 <= max_degree:
                    gens.append(P.coords(P.word(u) * diff * P.word(v)))
    ideal = canonicalize(gens, P.dim)
    per_degree = {}
    for k in range(max_degree + 1):
        sl = [i for i, w in enumerate(P.words) if len(w) == k]
        per_degree[k] = {
            "kernel": sum(1 for b in ker.basis if any(b[i] for i in sl)),
            "words": len(sl),
        }
    # degree-0 slice: constants map identically, so the kernel has no constant part
    const_ok = all(b[0] == 0 for b in ker.basis)
    passed = ker == ideal and const_ok
    return CheckReport(passed, P.dim, None if passed else {"kernel_dim": ker.dim, "ideal_dim": ideal.dim},
                       {"kernel_dim": ker.dim, "ideal_dim": ideal.dim, "ambient_dim": P.dim,
                        "per_degree": per_degree})


# ---------------------------------------------------------------------------
# multimorphisms
# ---------------------------------------------------------------------------


def multimorphism_example11(r: int, assignment: Mapping[str, object], source: FreeAlgebra,
                            target: FreeAlgebra | None = None) -> LinearEndo:
    """Substitute z_i for Y_i in words with exactly r Y-letters; kill all other words.

    The Y-letters are the keys of ``assignment``; every other letter of
    ``source`` is an X-letter and is sent to the same-named generator of
    ``target`` (which must contain it).
    """
    target = target or source
    ys = set(assignment)
    if not ys <= set(source.alphabet):
        raise FreeAlgebraError(f"assignment keys {sorted(ys - set(source.alphabet))} are not source letters")
    xs = tuple(g for g in source.alphabet if g not in ys)
    for x in xs:
        if x not in target.alphabet:
            raise FreeAlgebraError(f"target does not receive the X-generator {x!r}")
    images = {}
    for w in source.words:
        if sum(g in ys for g in w) != r:
            continue
        out = target.one()
        for g in w:
            out = out * (assignment[g] if g in ys else target.gen(g))
        images[w] = out
    return LinearEndo(source, images, target, base_letters=xs, name=f"substitution(r={r})")


def _random_element(rng: random.Random, F: FreeAlgebra, letters: Sequence[str], max_len: int):
    pool = [w for w in F.words if len(w) <= max_len and all(g in letters for g in w)]
    k = rng.randint(1, 3)
    terms = {}
    for w in rng.sample(pool, min(k, len(pool))):
        terms[w] = rng.choice([-2, -1, 1, 1, 2, 3])
    return F.element(terms)


def _split_budget(rng: random.Random, slots: int, budget: int) -> list[int]:
    caps = [0] * slots
    for _ in range(rng.randint(0, budget)):
        caps[rng.randrange(slots)] += 1
    return caps


def check_multimorphism(phi: LinearEndo, samples: int = 100, seed: int = 0,
                        arities: Sequence[int] = (1, 2),
                        base_letters: Sequence[str] | None = None) -> CheckReport:
    """Sample phi(a1 b1 ... an bn a_{n+1}) = a1 phi(b1) ... an phi(bn) a_{n+1}.

    The a's are random elements over the A-letters, the b's random elements of
    the whole domain.  Word lengths are budgeted so the product never exceeds
    the domain truncation, which keeps the comparison exact.  Sample k uses
    its own generator seeded from (seed, k).
    """
    base = tuple(base_letters) if base_letters is not None else phi.base_letters
    if base is None:
        raise FreeAlgebraError("designate the A-sub-alphabet (base_letters)")
    S, T = phi.domain, phi.codomain
    for g in base:
        if g not in T.alphabet:
            raise FreeAlgebraError(f"codomain does not receive A-letter {g!r}")
    D = S.max_degree
    for k in range(samples):
        rng = random.Random(f"{seed}:{k}")
        n = arities[k % len(arities)]
        caps = _split_budget(rng, 2 * n + 1, D)
        a_s = [_random_element(rng, S, base, caps[2 * i]) for i in range(n + 1)]
        b_s = [_random_element(rng, S, S.alphabet, caps[2 * i + 1]) for i in range(n)]
        prod = a_s[0]
        for i in range(n):
            prod = prod * b_s[i] * a_s[i + 1]
        lhs = phi(prod)
        a_img = [_embed(a, T) for a in a_s]
        rhs = a_img[0]
        for i in range(n):
            rhs = rhs * phi(b_s[i]) * a_img[i + 1]
        if lhs != rhs:
            return CheckReport(False, k + 1, {
                "sample": k, "arity": n,
                "a": [str(a) for a in a_s], "b": [str(b) for b in b_s],
                "lhs": str(lhs), "rhs": str(rhs),
            }, {"seed": seed})
    return CheckReport(True, samples, None, {"seed": seed, "arities": list(arities)})


def _embed(a: FreeElement, T: FreeAlgebra) -> FreeElement:
    return T.element(dict(a.terms))


# ---------------------------------------------------------------------------
# derivations and Hasse-Schmidt sequences
# ---------------------------------------------------------------------------


def is_derivation(d: LinearEndo) -> CheckReport:
    """d(uv) = d(u) v + u d(v) for every pair of basis words, inside the truncation."""
    F = d.domain
    if d.codomain != F:
        raise FreeAlgebraError("a derivation must map the algebra to itself")
    checked = 0
    for u in F.words:
        for v in F.words:
            checked += 1
            U, V = F.word(u), F.word(v)
            lhs = d(U * V)
            rhs = d.images[u] * V + U * d.images[v]
            if lhs != rhs:
                return CheckReport(False, checked, {"u": "*".join(u) or "1", "v": "*".join(v) or "1",
                                                    "lhs": str(lhs), "rhs": str(rhs)})
    return CheckReport(True, checked)


def derivation_from_generators(F: FreeAlgebra, assignment: Mapping[str, FreeElement]) -> LinearEndo:
    """The Leibniz extension of x -> assignment[x] to all words."""
    images = {}
    for w in F.words:
        out = F.zero()
        for i, g in enumerate(w):
            out = out + F.word(w[:i]) * assignment.get(g, F.zero()) * F.word(w[i + 1:])
        images[w] = out
    return LinearEndo(F, images, name="d")


@dataclass(frozen=True, eq=False)
class HSSequence:
    maps: tuple[LinearEndo, ...]

    @property
    def length(self) -> int:
        return len(self.maps) - 1

    def __getitem__(self, n: int) -> LinearEndo:
        return self.maps[n]


def hs_from_derivation(d: LinearEndo, N: int) -> HSSequence:
    """partial_n = d^n / n! for n = 0..N (needs n! invertible, fine over Q)."""
    if N < 0:
        raise FreeAlgebraError("N must be non-negative")
    rep = is_derivation(d)
    if not rep:
        raise FreeAlgebraError(f"not a derivation: {rep.witness}")
    maps = [LinearEndo.identity(d.domain)]
    power = LinearEndo.identity(d.domain)
    for n in range(1, N + 1):
        power = d.compose(power)
        maps.append(power.scale(Fraction(1, factorial(n))))
    return HSSequence(tuple(maps))


def hs_check(seq: HSSequence) -> CheckReport:
    """partial_0 = id and partial_n(t x) = sum_i partial_i(t) partial_{n-i}(x) for basis t, x."""
    maps = seq.maps
    F = maps[0].domain
    if maps[0] != LinearEndo.identity(F):
        return CheckReport(False, 0, {"reason": "partial_0 is not the identity"})
    checked = 0
    for n in range(len(maps)):
        for t in F.words:
            T = F.word(t)
            for x in F.words:
                X = F.word(x)
                checked += 1
                lhs = maps[n](T * X)
                rhs = F.zero()
                for i in range(n + 1):
                    rhs = rhs + maps[i].images[t] * maps[n - i].images[x]
                if lhs != rhs:
                    return CheckReport(False, checked, {"n": n, "t": "*".join(t) or "1",
                                                        "x": "*".join(x) or "1",
                                                        "lhs": str(lhs), "rhs": str(rhs)})
    return CheckReport(True, checked)
