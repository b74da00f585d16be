"""p-typical Witt vectors of finite length.

The addition and multiplication polynomials are built once over the integers
from the ghost components and then evaluated in whatever coefficient ring the
vector lives in (a ``PolyRingDesc`` or a ``QuotientRing``).  Components are
1-indexed in the public surface: ``z.component(1)`` is the Teichmüller part.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Sequence

from . import expr
from .polyring import Polynomial, PolyRingDesc, QuotientRing

# Guards for the size of the universal polynomials; S_3 at p = 7 is already huge.
LIMITS = {"max_length": 4, "max_prime": 7}


class WittError(ValueError):
    pass


def _ghost_poly(vars_: Sequence[Polynomial], p: int, k: int) -> Polynomial:
    return sum((vars_[i] ** (p ** (k - i)) * p**i for i in range(k + 1)), vars_[0].ring.zero())


def _exact_div(f: Polynomial, d: int) -> Polynomial:
    for c in f.terms.values():
        assert c % d == 0, f"non-integral Witt polynomial coefficient {c}/{d}"
    return Polynomial._raw(f.ring, {e: c // d for e, c in f.terms.items()})


@dataclass(frozen=True)
class WittStructureTable:
    p: int
    length: int
    ring: PolyRingDesc  # Z[a0..a_{m-1}, b0..b_{m-1}]
    sum_polys: tuple[Polynomial, ...]
    prod_polys: tuple[Polynomial, ...]


def _solve_ghost(target: list[Polynomial], p: int) -> tuple[Polynomial, ...]:
    """Find X_0..X_{m-1} with w_k(X) = target[k] by exact division."""
    out: list[Polynomial] = []
    for k, t in enumerate(target):
        rest = t - sum((out[i] ** (p ** (k - i)) * p**i for i in range(k)), t.ring.zero())
        out.append(_exact_div(rest, p**k))
    return tuple(out)


_tables: dict[tuple[int, int], WittStructureTable] = {}
_frob_tables: dict[tuple[int, int], tuple[Polynomial, ...]] = {}
_lock = threading.Lock()


def _check_limits(p: int, m: int):
    if m < 1:
        raise WittError("length must be >= 1")
    if m > LIMITS["max_length"] or p > LIMITS["max_prime"]:
        raise WittError(f"structure table for p={p}, m={m} exceeds limits {LIMITS}")


def witt_structure_polynomials(p: int, m: int) -> WittStructureTable:
    _check_limits(p, m)
    key = (p, m)
    table = _tables.get(key)
    if table is not None:
        return table
    with _lock:
        if key not in _tables:
            ring = PolyRingDesc(tuple(f"a{i}" for i in range(m)) + tuple(f"b{i}" for i in range(m)))
            gens = ring.gens()
            a, b = gens[:m], gens[m:]
            wa = [_ghost_poly(a, p, k) for k in range(m)]
            wb = [_ghost_poly(b, p, k) for k in range(m)]
            sums = _solve_ghost([x + y for x, y in zip(wa, wb)], p)
            prods = _solve_ghost([x * y for x, y in zip(wa, wb)], p)
            _tables[key] = WittStructureTable(p, m, ring, sums, prods)
    return _tables[key]


def frobenius_polynomials(p: int, m: int) -> tuple[Polynomial, ...]:
    """F_0..F_{m-2} in Z[a0..a_{m-1}] with w_k(F(a)) = w_{k+1}(a)."""
    _check_limits(p, m)
    key = (p, m)
    with _lock:
        if key not in _frob_tables:
            ring = PolyRingDesc(tuple(f"a{i}" for i in range(m)))
            a = ring.gens()
            _frob_tables[key] = _solve_ghost([_ghost_poly(a, p, k + 1) for k in range(m - 1)], p)
    return _frob_tables[key]


def _evaluate(poly: Polynomial, values: Sequence[Polynomial], ring, cache: dict) -> Polynomial:
    """Evaluate an integer polynomial at coefficient-ring elements."""
    norm = ring.normalize
    total = ring.zero()
    for e, c in poly.terms.items():
        term = None
        for i, k in enumerate(e):
            if k:
                key = (i, k)
                if key not in cache:
                    cache[key] = norm(values[i] ** k) if k > 1 else values[i]
                term = cache[key] if term is None else norm(term * cache[key])
        term = ring.constant(c) if term is None else term * c
        total = total + term
    return norm(total)


class WittVector:
    """(z_1, ..., z_m) over a coefficient ring handle."""

    __slots__ = ("ring", "p", "components")

    def __init__(self, ring, components: Sequence[Polynomial], p: int | None = None):
        comps = tuple(components)
        if not comps:
            raise WittError("Witt vectors have length >= 1")
        if p is None:
            if ring.modulus is None:
                raise WittError("p must be given for Witt vectors over the integers")
            p = ring.modulus.p
        if ring.modulus is not None and ring.modulus.p != p:
            raise WittError(f"coefficient ring {ring} does not match p={p}")
        base = ring.base if isinstance(ring, QuotientRing) else ring
        coerced = []
        for c in comps:
            if isinstance(c, int):
                c = base.constant(c)
            if c.ring != base:
                raise WittError(f"component {c} is not in {ring}")
            coerced.append(ring.normalize(c))
        self.ring = ring
        self.p = p
        self.components = tuple(coerced)

    @property
    def length(self) -> int:
        return len(self.components)

    def component(self, i: int) -> Polynomial:
        return self.components[i - 1]

    @classmethod
    def zero(cls, ring, m: int, p: int | None = None) -> "WittVector":
        return cls(ring, [ring.zero()] * m, p)

    @classmethod
    def one(cls, ring, m: int, p: int | None = None) -> "WittVector":
        return cls(ring, [ring.one()] + [ring.zero()] * (m - 1), p)

    @classmethod
    def teichmuller(cls, x: Polynomial, m: int, ring=None, p: int | None = None) -> "WittVector":
        ring = ring or x.ring
        return cls(ring, [x] + [ring.zero()] * (m - 1), p)

    def _check(self, other: "WittVector"):
        if not isinstance(other, WittVector):
            raise TypeError(f"cannot combine a Witt vector with {type(other).__name__}")
        if other.ring != self.ring or other.p != self.p or other.length != self.length:
            raise WittError("Witt vectors differ in ring, prime or length")

    def _apply(self, polys, other: "WittVector") -> "WittVector":
        vals = self.components + other.components
        cache: dict = {}
        return WittVector(self.ring, [_evaluate(P, vals, self.ring, cache) for P in polys], self.p)

    def __add__(self, other: "WittVector") -> "WittVector":
        self._check(other)
        return self._apply(witt_structure_polynomials(self.p, self.length).sum_polys, other)

    def __mul__(self, other: "WittVector") -> "WittVector":
        if isinstance(other, int):
            return self.times_int(other)
        self._check(other)
        return self._apply(witt_structure_polynomials(self.p, self.length).prod_polys, other)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.times_int(other)
        return NotImplemented

    def __neg__(self) -> "WittVector":
        # componentwise negation is correct for odd p: (-1)^p = -1 in every ghost component
        if self.p == 2:
            raise WittError("negation for p=2 is not componentwise")
        return WittVector(self.ring, [-c for c in self.components], self.p)

    def __sub__(self, other: "WittVector") -> "WittVector":
        return self + (-other)

    def times_int(self, k: int) -> "WittVector":
        """k·a by double-and-add in the Witt ring."""
        if k < 0:
            return (-self).times_int(-k)
        result = WittVector.zero(self.ring, self.length, self.p)
        base = self
        while k:
            if k & 1:
                result = result + base
            k >>= 1
            if k:
                base = base + base
        return result

    def verschiebung(self) -> "WittVector":
        return WittVector(self.ring, (self.ring.zero(),) + self.components, self.p)

    def frobenius(self) -> "WittVector":
        if self.length < 2:
            raise WittError("Frobenius needs length >= 2")
        if self.ring.char_p:
            return WittVector(self.ring, [self.ring.normalize(c.pth_power(1)) for c in self.components[:-1]], self.p)
        if self.ring.modulus is None:
            polys = frobenius_polynomials(self.p, self.length)
            cache: dict = {}
            return WittVector(self.ring, [_evaluate(P, self.components, self.ring, cache) for P in polys], self.p)
        raise WittError(f"Frobenius is not available over {self.ring}")

    def truncate(self, m: int) -> "WittVector":
        return WittVector(self.ring, self.components[:m], self.p)

    def ghost(self) -> tuple[Polynomial, ...]:
        """(w_1, ..., w_m) with w_k = Σ_{i<=k} p^(i-1) z_i^(p^(k-i))."""
        if self.ring.modulus is not None:
            raise WittError("ghost components are only defined here over torsion-free rings")
        return tuple(_ghost_poly(self.components, self.p, k) for k in range(self.length))

    def __eq__(self, other):
        if not isinstance(other, WittVector):
            return NotImplemented
        return (self.ring, self.p, self.components) == (other.ring, other.p, other.components)

    def __hash__(self):
        return hash((self.ring, self.p, self.components))

    def __str__(self):
        return "[" + ", ".join(str(c) for c in self.components) + "]"

    def __repr__(self):
        return f"WittVector({self})"

    @classmethod
    def parse(cls, ring, text: str, p: int | None = None) -> "WittVector":
        base = ring.base if isinstance(ring, QuotientRing) else ring
        names = dict(zip(base.variables, base.gens()))

        def build(items):
            return cls(ring, [v if isinstance(v, Polynomial) else base.constant(v) for v in items], p)

        # bracketed lists become Witt vectors, so sums and products evaluate as Witt arithmetic
        try:
            val = expr.evaluate(text, names, on_list=build)
        except (WittError, TypeError, AttributeError) as exc:
            raise expr.ParseError(f"cannot evaluate {text!r} as Witt vectors: {exc}") from None
        if not isinstance(val, WittVector):
            raise expr.ParseError(f"expected a Witt vector expression, got {text!r}")
        return val


def zpm_to_witt(value: int, p: int, m: int) -> tuple[int, ...]:
    """Components of the Witt vector over F_p mapping to ``value`` in Z/p^m.

    Uses the Teichmüller expansion value = Σ p^(i-1) τ(c_i) with τ(c) = c^(p^(m-1)).
    """
    q = p**m
    comps = []
    rest = value % q
    for i in range(m):
        c = (rest // p**i) % p
        comps.append(c)
        rest = (rest - p**i * pow(c, p ** (m - 1 - i), q)) % q
    assert rest == 0
    return tuple(comps)


def witt_to_zpm(comps: Sequence[int], p: int) -> int:
    """Σ p^(i-1) τ(c_i) in Z/p^m, the oracle isomorphism W_m(F_p) ≅ Z/p^m."""
    m = len(comps)
    q = p**m
    # τ(c) mod p^(m-i) is c^(p^(m-1-i)); for the i-th slot only that precision matters
    return sum(p**i * pow(int(c), p ** (m - 1 - i), q) for i, c in enumerate(comps)) % q
