"""Divided-power differential operators on k[X] and k[X, Y].

An operator is stored in normal form  sum f_{i,j} tX^i tY^j  with polynomial
coefficients on the left, where tX^i is the divided power
X^m -> C(m, i) X^(m-i)  (over Q this is d^i/dX^i divided by i!).  The divided
powers are a Z-basis of all differential operators on Z[X, Y], so Z-mode
needs no denominators.

Text syntax::

    (X^2+1)*tX^2*tY + 3*tX      tX, tY  divided powers (exponent = index)
    dX^2 - 2*tX^2               dX, dY  ordinary derivatives, dX^i = i! tX^i

``*`` is composition, ``^`` on X, Y or a parenthesised group is a
composition power, and ``^`` on tX/dX/tY/dY is read as described above.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Literal, Mapping

__all__ = [
    "Poly",
    "DPOp",
    "PolyOpError",
    "ParseError",
    "apply",
    "compose",
    "ad_mult",
    "order",
    "is_naive",
    "to_naive",
    "parse_operator",
    "parse_poly",
]

Mode = Literal["Q", "Z"]
Exp = tuple[int, int]


class PolyOpError(ValueError):
    pass


class ParseError(PolyOpError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        pointer = f"\n  {text}\n  {' ' * position}^" if text else ""
        super().__init__(f"{message} at position {position}{pointer}")


def _coerce(c, mode: Mode) -> Fraction:
    c = Fraction(c)
    if mode == "Z" and c.denominator != 1:
        raise PolyOpError(f"non-integer coefficient {c} in Z-mode")
    return c


class Poly:
    """Sparse polynomial in X (and Y) with exact coefficients."""

    __slots__ = ("nvars", "mode", "terms")

    def __init__(self, terms: Mapping[Exp, object] | None = None, nvars: int = 1, mode: Mode = "Q"):
        if nvars not in (1, 2):
            raise PolyOpError("only one or two variables are supported")
        if mode not in ("Q", "Z"):
            raise PolyOpError(f"unknown mode {mode!r}")
        clean: dict[Exp, Fraction] = {}
        for (a, b), c in (terms or {}).items():
            if a < 0 or b < 0:
                raise PolyOpError("negative exponent")
            if nvars == 1 and b:
                raise PolyOpError("Y used in a one-variable ring")
            c = _coerce(c, mode)
            if c:
                clean[(a, b)] = clean.get((a, b), Fraction(0)) + c
        self.nvars = nvars
        self.mode = mode
        self.terms = {e: c for e, c in sorted(clean.items()) if c}

    @classmethod
    def constant(cls, c, nvars: int = 1, mode: Mode = "Q") -> Poly:
        return cls({(0, 0): c}, nvars, mode)

    @classmethod
    def monomial(cls, a: int, b: int = 0, coeff=1, nvars: int = 1, mode: Mode = "Q") -> Poly:
        return cls({(a, b): coeff}, nvars, mode)

    def _check(self, other: Poly):
        if self.nvars != other.nvars or self.mode != other.mode:
            raise PolyOpError(
                f"ring mismatch: {self.nvars} vars/{self.mode} vs {other.nvars} vars/{other.mode}"
            )

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return (self.nvars, self.mode, self.terms) == (other.nvars, other.mode, other.terms)

    def __hash__(self):
        return hash((self.nvars, self.mode, tuple(self.terms.items())))

    def __add__(self, other: Poly) -> Poly:
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Poly(out, self.nvars, self.mode)

    def __neg__(self) -> Poly:
        return Poly({e: -c for e, c in self.terms.items()}, self.nvars, self.mode)

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def __mul__(self, other) -> Poly:
        if not isinstance(other, Poly):
            return Poly({e: c * other for e, c in self.terms.items()}, self.nvars, self.mode)
        self._check(other)
        out: dict[Exp, Fraction] = {}
        for (a, b), c in self.terms.items():
            for (p, q), d in other.terms.items():
                e = (a + p, b + q)
                out[e] = out.get(e, 0) + c * d
        return Poly(out, self.nvars, self.mode)

    __rmul__ = __mul__

    def degree(self) -> int:
        return max((a + b for a, b in self.terms), default=-1)

    def coefficients(self) -> Iterable[Fraction]:
        return self.terms.values()

    def __str__(self) -> str:
        return _poly_str(self)

    def __repr__(self) -> str:
        return f"Poly({self})"


def _mono_str(a: int, b: int) -> str:
    parts = []
    for name, e in (("X", a), ("Y", b)):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def _display_key(e: Exp):
    return (-(e[0] + e[1]), -e[0])


def _poly_str(p: Poly) -> str:
    if not p.terms:
        return "0"
    out = []
    for e in sorted(p.terms, key=_display_key):
        c = p.terms[e]
        mono = _mono_str(*e)
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not out:
            out.append(body if c > 0 else f"-{body}")
        else:
            out.append(f" + {body}" if c > 0 else f" - {body}")
    return "".join(out)


def _theta_poly(i: int, j: int, p: Poly) -> Poly:
    out = {}
    for (a, b), c in p.terms.items():
        if a >= i and b >= j:
            out[(a - i, b - j)] = c * comb(a, i) * comb(b, j)
    return Poly(out, p.nvars, p.mode)


class DPOp:
    """sum f_{i,j} tX^i tY^j with polynomial coefficients on the left."""

    __slots__ = ("nvars", "mode", "terms")

    def __init__(self, terms: Mapping[Exp, Poly] | None = None, nvars: int = 1, mode: Mode = "Q"):
        clean: dict[Exp, Poly] = {}
        for (i, j), f in (terms or {}).items():
            if i < 0 or j < 0:
                raise PolyOpError("negative operator index")
            if nvars == 1 and j:
                raise PolyOpError("tY used on a one-variable ring")
            if f.nvars != nvars or f.mode != mode:
                raise PolyOpError("coefficient ring does not match the operator ring")
            if f:
                clean[(i, j)] = clean[(i, j)] + f if (i, j) in clean else f
        self.nvars = nvars
        self.mode = mode
        self.terms = {e: f for e, f in sorted(clean.items()) if f}

    @classmethod
    def mult(cls, f: Poly) -> DPOp:
        return cls({(0, 0): f}, f.nvars, f.mode)

    @classmethod
    def theta(cls, i: int, j: int = 0, nvars: int = 1, mode: Mode = "Q") -> DPOp:
        return cls({(i, j): Poly.constant(1, nvars, mode)}, nvars, mode)

    @classmethod
    def identity(cls, nvars: int = 1, mode: Mode = "Q") -> DPOp:
        return cls.theta(0, 0, nvars, mode)

    @classmethod
    def zero(cls, nvars: int = 1, mode: Mode = "Q") -> DPOp:
        return cls({}, nvars, mode)

    def _check(self, other):
        if not isinstance(other, DPOp):
            raise PolyOpError(f"expected an operator, got {type(other).__name__}")
        if self.nvars != other.nvars or self.mode != other.mode:
            raise PolyOpError(
                f"ring mismatch: {self.nvars} vars/{self.mode} vs {other.nvars} vars/{other.mode}"
            )

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, DPOp):
            return NotImplemented
        return (self.nvars, self.mode, self.terms) == (other.nvars, other.mode, other.terms)

    def __hash__(self):
        return hash((self.nvars, self.mode, tuple(self.terms.items())))

    def __add__(self, other: DPOp) -> DPOp:
        self._check(other)
        out = dict(self.terms)
        for e, f in other.terms.items():
            out[e] = out[e] + f if e in out else f
        return DPOp(out, self.nvars, self.mode)

    def __neg__(self) -> DPOp:
        return DPOp({e: -f for e, f in self.terms.items()}, self.nvars, self.mode)

    def __sub__(self, other: DPOp) -> DPOp:
        return self + (-other)

    def scale(self, c) -> DPOp:
        return DPOp({e: f * _coerce(c, self.mode) for e, f in self.terms.items()}, self.nvars, self.mode)

    def __matmul__(self, other: DPOp) -> DPOp:
        return compose(self, other)

    def __call__(self, p: Poly) -> Poly:
        return apply(self, p)

    def order(self) -> int:
        return order(self)

    def __str__(self) -> str:
        return _op_str(self)

    def __repr__(self) -> str:
        return f"DPOp({self})"


def apply(D: DPOp, p: Poly) -> Poly:
    """Act on a polynomial: tX^i tY^j (X^a Y^b) = C(a,i) C(b,j) X^(a-i) Y^(b-j)."""
    if D.nvars != p.nvars or D.mode != p.mode:
        raise PolyOpError("operator and polynomial live over different rings")
    out = Poly({}, p.nvars, p.mode)
    for (i, j), f in D.terms.items():
        out = out + f * _theta_poly(i, j, p)
    return out


def compose(D1: DPOp, D2: DPOp) -> DPOp:
    """Normal form of D1 o D2.

    Rewrite rules (per variable):
      tX^i o l_g = sum_s l_{tX^s(g)} tX^(i-s)
      tX^i tX^k  = C(i+k, i) tX^(i+k)
    """
    D1._check(D2)
    nv, mode = D1.nvars, D1.mode
    out: dict[Exp, Poly] = {}
    for (i, j), f in D1.terms.items():
        for (k, l), g in D2.terms.items():
            for s in range(i + 1):
                for t in range(j + 1):
                    dg = _theta_poly(s, t, g)
                    if not dg:
                        continue
                    a, b = i - s, j - t
                    c = comb(a + k, k) * comb(b + l, l)
                    term = f * dg * c
                    key = (a + k, b + l)
                    out[key] = out[key] + term if key in out else term
    return DPOp(out, nv, mode)


def ad_mult(D: DPOp, f: Poly) -> DPOp:
    """D o l_f - l_f o D."""
    lf = DPOp.mult(f)
    return compose(D, lf) - compose(lf, D)


def order(D: DPOp) -> int:
    """Largest i + j with f_{i,j} != 0; -1 for the zero operator."""
    return max((i + j for i, j in D.terms), default=-1)


def is_naive(D: DPOp) -> bool:
    """Z-mode only: is D a Z-combination of f dX^i dY^j (every f_{i,j} divisible by i! j!)?"""
    if D.mode != "Z":
        raise PolyOpError("is_naive is only meaningful over Z; over Q every operator is naive")
    for (i, j), f in D.terms.items():
        m = factorial(i) * factorial(j)
        if any(c.numerator % m for c in f.coefficients()):
            return False
    return True


def to_naive(D: DPOp) -> dict[Exp, Poly]:
    """Coefficients g_{i,j} with D = sum g_{i,j} dX^i dY^j.

    Always succeeds over Q.  Over Z raises PolyOpError when D is not naive.
    """
    out = {}
    for (i, j), f in D.terms.items():
        m = factorial(i) * factorial(j)
        if D.mode == "Z":
            if any(c.numerator % m for c in f.coefficients()):
                raise PolyOpError(f"coefficient of tX^{i} tY^{j} is not divisible by {m}")
        out[(i, j)] = Poly({e: c / m for e, c in f.terms.items()}, D.nvars, D.mode)
    return out


def _op_str(D: DPOp) -> str:
    if not D.terms:
        return "0"
    pieces = []
    for (i, j) in sorted(D.terms, key=_display_key):
        f = D.terms[(i, j)]
        ops = []
        for name, e in (("tX", i), ("tY", j)):
            if e == 1:
                ops.append(name)
            elif e > 1:
                ops.append(f"{name}^{e}")
        op = "*".join(ops)
        neg = False
        if len(f.terms) == 1:
            (e, c), = f.terms.items()
            neg = c < 0
            coef = _poly_str(-f if neg else f)
            if op and coef == "1":
                body = op
            else:
                body = f"{coef}*{op}" if op else coef
        else:
            body = f"({_poly_str(f)})*{op}" if op else _poly_str(f)
        if not pieces:
            pieces.append(f"-{body}" if neg else body)
        else:
            pieces.append(f" - {body}" if neg else f" + {body}")
    return "".join(pieces)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(tX|tY|dX|dY|X|Y)|(\^|\*|\+|-|/|\(|\)))")


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[start]!r}", start, text)
        start = m.start(m.lastindex)
        if m.group(1):
            out.append(("num", int(m.group(1)), start))
        elif m.group(2):
            out.append(("name", m.group(2), start))
        else:
            out.append(("op", m.group(3), start))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class _Parser:
    def __init__(self, text: str, nvars: int, mode: Mode):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.nvars = nvars
        self.mode = mode

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, tok[2], self.text)

    def expect_op(self, op):
        tok = self.take()
        if tok[0] != "op" or tok[1] != op:
            self.error(f"expected {op!r}", tok)

    def parse(self) -> DPOp:
        if self.peek()[0] == "end":
            self.error("empty expression")
        value = self.expr()
        if self.peek()[0] != "end":
            self.error("unexpected trailing input")
        return value

    def expr(self) -> DPOp:
        value = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            sign = self.take()[1]
            rhs = self.term()
            value = value + rhs if sign == "+" else value - rhs
        return value

    def term(self) -> DPOp:
        value = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            value = compose(value, self.factor())
        return value

    def exponent(self):
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            tok = self.take()
            if tok[0] != "num":
                self.error("exponent must be a non-negative integer", tok)
            return tok[1]
        return None

    def factor(self) -> DPOp:
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            inner = self.factor()
            return -inner if tok[1] == "-" else inner
        base, divided = self.atom()
        e = self.exponent()
        if e is None:
            return base
        if divided is not None:
            var, kind = divided
            idx = (e, 0) if var == "X" else (0, e)
            op = DPOp.theta(*idx, nvars=self.nvars, mode=self.mode)
            return op.scale(factorial(e)) if kind == "d" else op
        out = DPOp.identity(self.nvars, self.mode)
        for _ in range(e):
            out = compose(out, base)
        return out

    def atom(self):
        tok = self.take()
        kind, val, pos = tok
        nv, mode = self.nvars, self.mode
        if kind == "num":
            c = Fraction(val)
            if self.peek()[0] == "op" and self.peek()[1] == "/":
                self.take()
                den = self.take()
                if den[0] != "num" or den[1] == 0:
                    self.error("expected a non-zero integer denominator", den)
                c = Fraction(val, den[1])
                if mode == "Z" and c.denominator != 1:
                    raise ParseError(f"non-integer constant {c} in Z-mode", pos, self.text)
            return DPOp.mult(Poly.constant(c, nv, mode)), None
        if kind == "name":
            if val.endswith("Y") and nv == 1:
                raise ParseError(f"{val} is not available in the one-variable ring", pos, self.text)
            var = val[-1]
            if val in ("X", "Y"):
                mono = (1, 0) if var == "X" else (0, 1)
                return DPOp.mult(Poly.monomial(*mono, nvars=nv, mode=mode)), None
            idx = (1, 0) if var == "X" else (0, 1)
            return DPOp.theta(*idx, nvars=nv, mode=mode), (var, val[0])
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner, None
        self.error("expected a number, variable, operator or '('", tok)


def parse_operator(text: str, nvars: int = 2, mode: Mode = "Q") -> DPOp:
    return _Parser(text, nvars, mode).parse()


def parse_poly(text: str, nvars: int = 2, mode: Mode = "Q") -> Poly:
    D = parse_operator(text, nvars, mode)
    if any(e != (0, 0) for e in D.terms):
        raise PolyOpError(f"{text!r} is an operator, not a polynomial")
    return D.terms.get((0, 0), Poly({}, nvars, mode))
