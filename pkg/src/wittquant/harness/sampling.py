"""Seeded element samplers.

Every sampler draws from a ``random.Random`` it is handed, so a scenario's
stream is fixed by its seed.  Distributions:

* polynomial: term count uniform in [0, terms]; each term picks a total degree
  uniform in [0, degree], spreads it over the variables by uniform choices, and
  takes a coefficient uniform in [1, q-1];
* Witt vector: independent polynomials per component.
"""

from __future__ import annotations

import random

from ..polyring import Polynomial, PolyRingDesc
from ..witt import WittVector


def random_monomial(rng: random.Random, nvars: int, degree: int) -> tuple[int, ...]:
    e = [0] * nvars
    for _ in range(rng.randint(0, degree)):
        e[rng.randrange(nvars)] += 1
    return tuple(e)


def random_poly(rng: random.Random, ring, degree: int, terms: int, nonzero: bool = False) -> Polynomial:
    base = getattr(ring, "base", ring)
    q = base.modulus.q
    out = base.zero()
    while True:
        for _ in range(rng.randint(1 if nonzero else 0, terms)):
            out = out + base.monomial(random_monomial(rng, base.nvars, degree), rng.randrange(1, q))
        out = ring.normalize(out)
        if out or not nonzero:
            return out


def random_witt(rng: random.Random, ring, m: int, degree: int, terms: int, p: int | None = None) -> WittVector:
    return WittVector(ring, [random_poly(rng, ring, degree, terms) for _ in range(m)], p)


def random_univariate(rng: random.Random, ring: PolyRingDesc, below: int) -> Polynomial:
    """Uniform element of F_p[t] of degree < ``below``."""
    p = ring.modulus.q
    return Polynomial(ring, {(k,): rng.randrange(p) for k in range(below)})
