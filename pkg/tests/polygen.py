"""Seeded random polynomials and operators for the operator-calculus tests."""

import random

from ncdiff.poly_diffops import DPOp, Poly


def rand_poly(rng: random.Random, nvars: int, mode: str, max_deg: int = 3, terms: int = 3) -> Poly:
    out = {}
    for _ in range(rng.randint(1, terms)):
        a = rng.randint(0, max_deg)
        b = rng.randint(0, max_deg - a) if nvars == 2 else 0
        out[(a, b)] = rng.randint(-5, 5)
    return Poly(out, nvars, mode)


def rand_op(rng: random.Random, nvars: int, mode: str, max_order: int = 3, terms: int = 3) -> DPOp:
    out = {}
    for _ in range(rng.randint(1, terms)):
        i = rng.randint(0, max_order)
        j = rng.randint(0, max_order - i) if nvars == 2 else 0
        out[(i, j)] = rand_poly(rng, nvars, mode)
    return DPOp(out, nvars, mode)


def monomials(nvars: int, max_deg: int):
    for a in range(max_deg + 1):
        for b in range(max_deg + 1 - a if nvars == 2 else 1):
            yield a, b


def mono(a: int, b: int, nvars: int, mode: str) -> Poly:
    return Poly({(a, b): 1}, nvars, mode)
