"""The Weyl algebra over Z/p^n as a deformation quantization.

Generators x_1..x_r, y_1..y_r with [y_i, x_j] = δ_ij (times ``relation_sign``),
elements stored in normal order (x's left of y's).  The centre of the reduction
mod p is F_p[x^p, y^p], identified with a polynomial ring in u_i = x_i^p,
v_i = y_i^p.

Products use the identity

    f * g = Σ_k s^|k| Π_i H_{y_i}^{k_i}(f) · ∂_{x_i}^{k_i}(g)     (commutative products)

with H the Hasse (divided) derivative, so every coefficient stays integral.
Large products go through Kronecker substitution and one big-integer
multiplication per k; small ones use the monomial-by-monomial rule.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import gmpy2
import numpy as np

from . import expr
from .chainring import (
    InsufficientValuation,
    PModulus,
    ZpnMatrix,
    exact_divide,
    howell_form,
    kernel,
    matmul_mod,
    pivots,
    rows_in_span,
    span_intersection,
    stack,
)
from .polyring import MonomialIdeal, Polynomial, PolyRingDesc, format_terms, term_order_key
from .witt import WittVector

Exps = tuple[int, ...]


class AlgebraMismatch(ValueError):
    pass


class NotCentral(ValueError):
    pass


class LevelError(ValueError):
    pass


@dataclass(frozen=True)
class QuantAlgebraDesc:
    """Weyl algebra in ``r`` symplectic pairs over Z/p^n.

    ``relation_sign`` and ``pairing_sign`` exist for mutation testing: they flip
    [y, x] = 1 and {u, v} = 1 respectively.
    """

    p: int
    n: int
    r: int = 1
    relation_sign: int = 1
    pairing_sign: int = 1

    def __post_init__(self):
        PModulus(self.p, self.n)
        if self.r < 1:
            raise ValueError("need at least one symplectic pair")
        if self.relation_sign not in (1, -1) or self.pairing_sign not in (1, -1):
            raise ValueError("signs must be +1 or -1")

    def modulus(self, level: int | None = None) -> PModulus:
        return PModulus(self.p, self.n if level is None else level)

    @property
    def x_names(self) -> tuple[str, ...]:
        return ("x",) if self.r == 1 else tuple(f"x{i}" for i in range(1, self.r + 1))

    @property
    def y_names(self) -> tuple[str, ...]:
        return ("y",) if self.r == 1 else tuple(f"y{i}" for i in range(1, self.r + 1))

    @property
    def variables(self) -> tuple[str, ...]:
        return self.x_names + self.y_names

    def center_ring(self) -> PolyRingDesc:
        """Z_1 = F_p[u_i, v_i] with u_i = x_i^p, v_i = y_i^p."""
        return PolyRingDesc.symplectic(PModulus(self.p, 1), self.r, pairing_sign=self.pairing_sign)

    def check_level(self, level: int):
        if not 1 <= level <= self.n:
            raise LevelError(f"level {level} outside 1..{self.n}")

    def element(self, terms: Mapping[Exps, int], level: int | None = None) -> "WeylElement":
        return WeylElement(self, self.n if level is None else level, terms)

    def zero(self, level=None):
        return self.element({}, level)

    def constant(self, c: int, level=None):
        return self.element({(0,) * (2 * self.r): c}, level)

    def one(self, level=None):
        return self.constant(1, level)

    def gen(self, name: str, level=None) -> "WeylElement":
        i = self.variables.index(name)
        e = [0] * (2 * self.r)
        e[i] = 1
        return self.element({tuple(e): 1}, level)

    def gens(self, level=None) -> tuple["WeylElement", ...]:
        return tuple(self.gen(v, level) for v in self.variables)

    def header(self, level: int) -> str:
        return f"p={self.p} n={self.n} level={level} r={self.r}"

    def parse(self, text: str, level: int | None = None) -> "WeylElement":
        """Evaluate an expression in x, y (``[a, b]`` is the commutator)."""
        level = self.n if level is None else level
        names = {v: self.gen(v, level) for v in self.variables}

        def bracket(items):
            if len(items) != 2:
                raise expr.ParseError("commutator brackets take exactly two entries")
            a, b = (self._coerce(t, level) for t in items)
            return commutator(a, b)

        val = expr.evaluate(text, names, on_list=bracket)
        return self._coerce(val, level)

    def _coerce(self, val, level):
        if isinstance(val, WeylElement):
            return val
        return self.constant(int(val), level)


# --- normal ordering -----------------------------------------------------------


@lru_cache(maxsize=200_000)
def _ordering_coeffs(b: int, c: int, q: int, sign: int) -> tuple[tuple[int, int], ...]:
    """y^b x^c = Σ_k coeff_k x^(c-k) y^(b-k); returns the nonzero (k, coeff_k) mod q."""
    out = []
    for k in range(min(b, c) + 1):
        coeff = math.factorial(k) * math.comb(b, k) * math.comb(c, k) * sign**k % q
        if coeff:
            out.append((k, coeff))
    return tuple(out)


def _mul_naive(f: Mapping[Exps, int], g: Mapping[Exps, int], r: int, q: int, sign: int) -> dict[Exps, int]:
    out: dict[Exps, int] = {}
    if r == 1:
        for (a, b), c1 in f.items():
            for (c, d), c2 in g.items():
                cc = c1 * c2
                for k, coeff in _ordering_coeffs(b, c, q, sign):
                    key = (a + c - k, b + d - k)
                    out[key] = (out.get(key, 0) + cc * coeff) % q
        return {e: c for e, c in out.items() if c}
    for e1, c1 in f.items():
        A, B = e1[:r], e1[r:]
        for e2, c2 in g.items():
            C, D = e2[:r], e2[r:]
            lists = [_ordering_coeffs(B[i], C[i], q, sign) for i in range(r)]
            for combo in itertools.product(*lists):
                coeff = c1 * c2
                ks = []
                for k, cf in combo:
                    coeff *= cf
                    ks.append(k)
                key = tuple(A[i] + C[i] - ks[i] for i in range(r)) + tuple(B[i] + D[i] - ks[i] for i in range(r))
                out[key] = (out.get(key, 0) + coeff) % q
    return {e: c for e, c in out.items() if c}


def _to_dense(terms: Mapping[Exps, int], nvars: int) -> np.ndarray:
    exps = np.array(list(terms.keys()), dtype=np.int64).reshape(-1, nvars)
    shape = tuple(int(m) + 1 for m in exps.max(axis=0))
    arr = np.zeros(shape, dtype=np.int64)
    arr[tuple(exps.T)] = np.fromiter(terms.values(), dtype=np.int64, count=len(terms))
    return arr


def _from_dense(arr: np.ndarray) -> dict[Exps, int]:
    idx = np.nonzero(arr)
    vals = arr[idx].tolist()
    return {tuple(int(i) for i in e): v for e, v in zip(zip(*idx), vals)}


def _pack(arr: np.ndarray, shape: tuple[int, ...], width: int) -> gmpy2.mpz:
    idx = np.nonzero(arr)
    flat = np.ravel_multi_index(idx, shape)
    top = int(flat.max()) + 1 if flat.size else 1
    slots = np.zeros(top, dtype="<u8")
    slots[flat] = arr[idx]
    raw = slots.view(np.uint8).reshape(top, 8)[:, :width]
    return gmpy2.mpz(int.from_bytes(raw.tobytes(), "little"))


def _comm_product(f: np.ndarray, g: np.ndarray, q: int) -> np.ndarray:
    """Exact commutative product of dense coefficient arrays, reduced mod q."""
    shape = tuple(a + b - 1 for a, b in zip(f.shape, g.shape))
    bound = (q - 1) ** 2 * max(1, min(np.count_nonzero(f), np.count_nonzero(g)))
    width = (bound.bit_length() + 7) // 8
    prod = _pack(f, shape, width) * _pack(g, shape, width)
    total = int(np.prod(shape))
    raw = int(prod).to_bytes(total * width, "little")
    buf = np.zeros((total, 8), dtype=np.uint8)
    buf[:, :width] = np.frombuffer(raw, dtype=np.uint8).reshape(total, width)
    return (buf.view("<u8").reshape(shape) % q).astype(np.int64)


@lru_cache(maxsize=4096)
def _hasse_weights(top: int, k: int, q: int) -> np.ndarray:
    """C(j + k, k) mod q for j = 0..top-1."""
    return np.array([math.comb(j + k, k) % q for j in range(top)], dtype=np.int64)


@lru_cache(maxsize=4096)
def _falling_weights(top: int, k: int, q: int) -> np.ndarray:
    """(j + k)! / j! mod q for j = 0..top-1."""
    return np.array([math.perm(j + k, k) % q for j in range(top)], dtype=np.int64)


def _shift_axis(arr: np.ndarray, axis: int, k: int, weights: np.ndarray, q: int) -> np.ndarray:
    sl = [slice(None)] * arr.ndim
    sl[axis] = slice(k, None)
    out = arr[tuple(sl)]
    shape = [1] * arr.ndim
    shape[axis] = -1
    return out * weights.reshape(shape) % q


def _kmax(p: int, level: int) -> int:
    """Largest k with v_p(k!) < level; larger k contribute nothing mod p^level."""
    k = 0
    while True:
        nxt = k + 1
        v, t = 0, nxt
        while t:
            t //= p
            v += t
        if v >= level:
            return k
        k = nxt


def _mul_dense(f: Mapping[Exps, int], g: Mapping[Exps, int], r: int, p: int, q: int, level: int, sign: int):
    F = _to_dense(f, 2 * r)
    G = _to_dense(g, 2 * r)
    kcap = _kmax(p, level)
    ranges = [range(min(F.shape[r + i] - 1, G.shape[i] - 1, kcap) + 1) for i in range(r)]
    acc = None
    for ks in itertools.product(*ranges):
        Fk, Gk = F, G
        for i, k in enumerate(ks):
            if k:
                Fk = _shift_axis(Fk, r + i, k, _hasse_weights(Fk.shape[r + i] - k, k, q), q)
                Gk = _shift_axis(Gk, i, k, _falling_weights(Gk.shape[i] - k, k, q), q)
        if not Fk.any() or not Gk.any():
            continue
        term = _comm_product(Fk, Gk, q)
        if sum(ks) % 2 and sign < 0:
            term = (-term) % q
        if acc is None:
            acc = term
        else:
            # Hasse/derivative shifts make each term smaller; embed at the origin
            sl = tuple(slice(0, s) for s in term.shape)
            acc[sl] = (acc[sl] + term) % q
    if acc is None:
        return {}
    return _from_dense(acc)


DENSE_THRESHOLD = 4000


def weyl_product_terms(f, g, r, p, level, sign=1, method: str = "auto") -> dict[Exps, int]:
    if not f or not g:
        return {}
    q = p**level
    if method == "naive" or (method == "auto" and len(f) * len(g) <= DENSE_THRESHOLD):
        return _mul_naive(f, g, r, q, sign)
    return _mul_dense(f, g, r, p, q, level, sign)


# --- elements ------------------------------------------------------------------------


class WeylElement:
    """Normally ordered Σ c x^a y^b with coefficients in Z/p^level."""

    __slots__ = ("algebra", "level", "terms", "_hash")

    def __init__(self, algebra: QuantAlgebraDesc, level: int, terms: Mapping[Exps, int] | None = None):
        algebra.check_level(level)
        q = algebra.p**level
        width = 2 * algebra.r
        clean = {}
        for e, c in (terms or {}).items():
            c = int(c) % q
            if c:
                e = tuple(int(a) for a in e)
                if len(e) != width or min(e) < 0:
                    raise ValueError(f"bad exponent {e}")
                clean[e] = c
        self.algebra = algebra
        self.level = level
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, algebra, level, terms):
        obj = cls.__new__(cls)
        obj.algebra, obj.level, obj.terms, obj._hash = algebra, level, terms, None
        return obj

    @property
    def q(self) -> int:
        return self.algebra.p**self.level

    def _same(self, other) -> "WeylElement":
        if isinstance(other, (int, np.integer)):
            return self.algebra.constant(int(other), self.level)
        if not isinstance(other, WeylElement):
            return NotImplemented
        if other.algebra != self.algebra or other.level != self.level:
            raise AlgebraMismatch(
                f"{self.algebra.header(self.level)} vs {other.algebra.header(other.level)}"
            )
        return other

    def __add__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return other
        q = self.q
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = (out.get(e, 0) + c) % q
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return WeylElement._raw(self.algebra, self.level, out)

    __radd__ = __add__

    def __neg__(self):
        q = self.q
        return WeylElement._raw(self.algebra, self.level, {e: (-c) % q for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def scale(self, k: int) -> "WeylElement":
        q = self.q
        out = {}
        for e, c in self.terms.items():
            v = c * k % q
            if v:
                out[e] = v
        return WeylElement._raw(self.algebra, self.level, out)

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return self.scale(int(other))
        other = self._same(other)
        if other is NotImplemented:
            return other
        a = self.algebra
        terms = weyl_product_terms(self.terms, other.terms, a.r, a.p, self.level, a.relation_sign)
        return WeylElement._raw(a, self.level, terms)

    def __rmul__(self, other):
        if isinstance(other, (int, np.integer)):
            return self.scale(int(other))
        return NotImplemented

    def __pow__(self, k: int) -> "WeylElement":
        if k < 0:
            raise ValueError("negative exponent")
        result = self.algebra.one(self.level)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, np.integer)):
            other = self.algebra.constant(int(other), self.level)
        if not isinstance(other, WeylElement):
            return NotImplemented
        return (self.algebra, self.level, self.terms) == (other.algebra, other.level, other.terms)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.algebra, self.level, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def coefficient(self, exps: Sequence[int]) -> int:
        return self.terms.get(tuple(exps), 0)

    def reduce_mod(self, m: int) -> "WeylElement":
        """The map r^(level-m): reduction mod p^m."""
        if m > self.level:
            raise LevelError(f"cannot reduce level {self.level} to {m}")
        return WeylElement(self.algebra, m, self.terms)

    def lift(self, m: int) -> "WeylElement":
        """Canonical lift: same monomials, same representatives."""
        if m < self.level:
            raise LevelError(f"cannot lift level {self.level} to {m}")
        return WeylElement(self.algebra, m, self.terms)

    def v_map(self, times: int = 1) -> "WeylElement":
        """x ↦ p·x̃, from level m-1 to level m (applied ``times`` times)."""
        m = self.level + times
        scale = self.algebra.p**times
        return WeylElement(self.algebra, m, {e: c * scale for e, c in self.terms.items()})

    def is_central(self) -> bool:
        return all(commutator(self, g).is_zero() for g in self.algebra.gens(self.level))

    def __str__(self):
        return format_terms(self.algebra.variables, self.terms)

    def __repr__(self):
        return f"WeylElement({self.algebra.header(self.level)}: {self})"

    def to_text(self) -> str:
        return f"{self.algebra.header(self.level)}\n{self}"


def parse_weyl(text: str, algebra: QuantAlgebraDesc | None = None) -> WeylElement:
    """Read ``to_text`` output (the header line is optional when ``algebra`` is given)."""
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    level = None
    if lines and "=" in lines[0]:
        fields = dict(kv.split("=") for kv in lines[0].split())
        hdr = QuantAlgebraDesc(int(fields["p"]), int(fields["n"]), int(fields.get("r", 1)))
        if algebra is None:
            algebra = hdr
        elif (algebra.p, algebra.n, algebra.r) != (hdr.p, hdr.n, hdr.r):
            raise AlgebraMismatch(f"header {lines[0]!r} does not match {algebra}")
        level = int(fields.get("level", hdr.n))
        lines = lines[1:]
    if algebra is None:
        raise expr.ParseError("no header and no algebra given")
    return algebra.parse(" ".join(lines) if lines else "0", level)


# --- commutators and brackets ------------------------------------------------------


def commutator(a: WeylElement, b: WeylElement) -> WeylElement:
    return a * b - b * a


def divide_by_p_power(a: WeylElement, m: int) -> WeylElement:
    if not 0 <= m < a.level:
        raise LevelError(f"cannot divide by p^{m} at level {a.level}")
    mod = a.algebra.modulus(a.level)
    try:
        terms = {e: exact_divide(c, mod, m) for e, c in a.terms.items()}
    except InsufficientValuation as exc:
        raise InsufficientValuation(f"coefficient not divisible by p^{m}: {exc}") from None
    return WeylElement(a.algebra, a.level - m, terms)


def divided_commutator(a: WeylElement, b: WeylElement, m: int) -> WeylElement:
    """(1/p^m)[a, b], landing at level (level - m)."""
    return divide_by_p_power(commutator(a, b), m)


def lift_center(w: Polynomial, algebra: QuantAlgebraDesc, level: int) -> WeylElement:
    """Canonical lift of w(u, v) ∈ Z_1 to A: u_i ↦ x_i^p, v_i ↦ y_i^p."""
    if w.ring.nvars != 2 * algebra.r:
        raise AlgebraMismatch(f"{w.ring} is not the centre ring of {algebra}")
    p = algebra.p
    return WeylElement(algebra, level, {tuple(p * a for a in e): c for e, c in w.terms.items()})


def to_center(a: WeylElement, ring: PolyRingDesc | None = None) -> Polynomial:
    """Express a level-1 central element as a polynomial in u = x^p, v = y^p."""
    if a.level != 1:
        raise LevelError("to_center expects a level-1 element")
    ring = ring or a.algebra.center_ring()
    p = a.algebra.p
    out = {}
    for e, c in a.terms.items():
        if any(x % p for x in e):
            raise NotCentral(f"{a} is not in F_p[x^p, y^p]")
        out[tuple(x // p for x in e)] = c
    return Polynomial(ring, out)


def deformation_bracket(a: WeylElement, b: WeylElement) -> Polynomial:
    """{ā, b̄} = (1/p)[ã, b̃] mod p for level-1 central elements."""
    alg = a.algebra
    if alg.n < 2:
        raise LevelError("the deformation bracket needs n >= 2")
    for z in (a, b):
        if z.level != 1:
            raise LevelError("deformation_bracket takes level-1 elements")
        to_center(z)
    return to_center(divided_commutator(a.lift(2), b.lift(2), 1))


def phi_map(z: WittVector, algebra: QuantAlgebraDesc, *, check: bool = True) -> WeylElement:
    """φ_m(z) = Σ_{i=1..m} p^(i-1) z̃_i^(p^(m-i)) at level m."""
    m = z.length
    if m > algebra.n:
        raise LevelError(f"φ_{m} needs level {m} <= n = {algebra.n}")
    p = algebra.p
    total = algebra.zero(m)
    for i, zi in enumerate(z.components, start=1):
        if zi.is_zero():
            continue
        # p^(i-1) X only depends on X mod p^(m-i+1)
        lvl = m - i + 1
        term = lift_center(zi, algebra, lvl) ** (p ** (m - i))
        total = total + (term.v_map(i - 1) if i > 1 else term)
    if check and not total.is_central():
        raise AssertionError(f"φ_{m}({z}) is not central")
    return total


def eq1_rhs(z: WittVector, w: Polynomial) -> Polynomial:
    """Σ z_i^(p^(m-i)-1) {z_i, w}."""
    from .polyring import std_poisson

    m, p = z.length, z.p
    total = w.ring.zero()
    for i, zi in enumerate(z.components, start=1):
        total = total + zi ** (p ** (m - i) - 1) * std_poisson(zi, w)
    return total


def eq1_lhs(z: WittVector, w: Polynomial, algebra: QuantAlgebraDesc, lift_noise: WeylElement | None = None) -> Polynomial:
    """((1/p^m)[x̃, w̃]) mod p for x = φ_m(z), x̃ its canonical lift to level m+1."""
    m = z.length
    if algebra.n < m + 1:
        raise LevelError(f"need n >= {m + 1} to lift φ_{m}")
    xt = phi_map(z, algebra).lift(m + 1)
    if lift_noise is not None:
        xt = xt + lift_noise.v_map(m) if lift_noise.level == 1 else xt + lift_noise
    wt = lift_center(w, algebra, m + 1)
    return to_center(divided_commutator(xt, wt, m))


# --- truncated linear algebra --------------------------------------------------------------


@dataclass(frozen=True)
class MonomialIndex:
    """Coordinates for elements of degree <= cap, highest degree first.

    ``excluded`` (a monomial ideal in the x, y exponents) removes monomials that
    vanish in a quotient by centrally generated monomial ideals.
    """

    algebra: QuantAlgebraDesc
    degree_cap: int
    excluded: tuple[Exps, ...] = ()
    monomials: tuple[Exps, ...] = field(init=False)
    position: dict = field(init=False, repr=False, compare=False)
    degrees: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        monos = _monomials(2 * self.algebra.r, self.degree_cap, self.excluded)
        object.__setattr__(self, "monomials", monos)
        object.__setattr__(self, "position", {e: i for i, e in enumerate(monos)})
        object.__setattr__(self, "degrees", np.array([sum(e) for e in monos], dtype=np.int64))

    def __len__(self):
        return len(self.monomials)

    def is_excluded(self, e: Exps) -> bool:
        return any(all(a <= b for a, b in zip(g, e)) for g in self.excluded)

    def normalize(self, a: WeylElement) -> WeylElement:
        if not self.excluded:
            return a
        return WeylElement._raw(a.algebra, a.level, {e: c for e, c in a.terms.items() if not self.is_excluded(e)})

    def vector(self, a: WeylElement) -> np.ndarray:
        v = np.zeros(len(self.monomials), dtype=np.int64)
        for e, c in self.normalize(a).terms.items():
            if e not in self.position:
                raise ValueError(f"{a} exceeds the degree cap {self.degree_cap}")
            v[self.position[e]] = c
        return v

    def element(self, vec: Sequence[int], level: int) -> WeylElement:
        return WeylElement(self.algebra, level, {self.monomials[i]: int(c) for i, c in enumerate(vec) if c})

    def row_degrees(self, basis: np.ndarray) -> list[int]:
        return [int(self.degrees[j]) for j in pivots(basis)]


@lru_cache(maxsize=64)
def _monomials(nvars: int, cap: int, excluded: tuple[Exps, ...]) -> tuple[Exps, ...]:
    from .polyring import monomials_upto

    return tuple(e for e in monomials_upto(nvars, cap) if not any(all(a <= b for a, b in zip(g, e)) for g in excluded))


@dataclass(frozen=True)
class CenterBasis:
    index: MonomialIndex
    level: int
    basis: ZpnMatrix

    def elements(self) -> list[WeylElement]:
        return [self.index.element(r, self.level) for r in self.basis.entries]


def center_basis(
    algebra: QuantAlgebraDesc, level: int, degree_cap: int, excluded: Sequence[Exps] = ()
) -> CenterBasis:
    """Howell basis of Z(A_level) ∩ {degree <= cap}, optionally in a monomial quotient.

    ad(x_i), ad(y_i) lower the degree by exactly one, so the kernel is computed
    one homogeneous degree at a time.
    """
    algebra.check_level(level)
    index = MonomialIndex(algebra, degree_cap, tuple(excluded))
    mod = algebra.modulus(level)
    gens = algebra.gens(level)
    blocks = []
    for deg in range(degree_cap, -1, -1):
        cols = [i for i, e in enumerate(index.monomials) if sum(e) == deg]
        if not cols:
            continue
        lower = [e for e in index.monomials if sum(e) == deg - 1]
        lpos = {e: k for k, e in enumerate(lower)}
        ad = np.zeros((len(cols), len(gens) * len(lower)), dtype=np.int64)
        for row, ci in enumerate(cols):
            mono = index.element(np.eye(1, len(index), ci, dtype=np.int64)[0], level)
            for g_i, g in enumerate(gens):
                for e, c in index.normalize(commutator(mono, g)).terms.items():
                    ad[row, g_i * len(lower) + lpos[e]] = c
        k = kernel(ZpnMatrix(mod, ad)) if ad.shape[1] else ZpnMatrix.identity(mod, len(cols))
        if k.rows:
            full = np.zeros((k.rows, len(index)), dtype=np.int64)
            full[:, cols] = k.entries
            blocks.append(ZpnMatrix(mod, full))
    return CenterBasis(index, level, howell_form(stack(mod, blocks, len(index))))


@dataclass(frozen=True)
class TruncatedIdealSpan:
    index: MonomialIndex
    level: int
    basis: ZpnMatrix
    passes: int = 0

    @property
    def algebra(self):
        return self.index.algebra

    @property
    def degree_cap(self):
        return self.index.degree_cap

    def elements(self) -> list[WeylElement]:
        return [self.index.element(r, self.level) for r in self.basis.entries]

    def contains(self, a: WeylElement) -> bool:
        return bool(rows_in_span(self.basis, self.index.vector(a)[None, :])[0])


def _at_level(g: WeylElement, level: int) -> WeylElement:
    if g.level == level:
        return g
    if g.level > level:
        return g.reduce_mod(level)
    raise LevelError(f"generator at level {g.level} cannot be read at level {level}")


def ideal_span_basis(
    algebra: QuantAlgebraDesc,
    generators: Iterable[WeylElement],
    level: int,
    degree_cap: int,
    index: MonomialIndex | None = None,
) -> TruncatedIdealSpan:
    """Two-sided ideal generated by ``generators``, truncated at ``degree_cap``.

    Howell rows of degree < cap are multiplied on both sides by every x_i, y_i
    until the span stops growing.  Rows whose products are already known are
    not multiplied again.
    """
    index = index or MonomialIndex(algebra, degree_cap)
    mod = algebra.modulus(level)
    rows = []
    for g in generators:
        g = _at_level(g, level)
        if g.degree > degree_cap:
            raise ValueError(f"generator of degree {g.degree} exceeds cap {degree_cap}")
        rows.append(index.vector(g))
    if not rows:
        return TruncatedIdealSpan(index, level, ZpnMatrix.zeros(mod, 0, len(index)))
    basis = howell_form(ZpnMatrix(mod, np.array(rows)))
    gens = algebra.gens(level)
    done: set[bytes] = set()
    passes = 0
    while True:
        passes += 1
        new = []
        for row, deg in zip(basis.entries, index.row_degrees(basis.entries)):
            key = row.tobytes()
            if deg >= degree_cap or key in done:
                continue
            done.add(key)
            e = index.element(row, level)
            for g in gens:
                new.append(index.vector(g * e))
                new.append(index.vector(e * g))
        if not new:
            break
        cand = np.array(new)
        fresh = cand[~rows_in_span(basis, cand)]
        if fresh.shape[0] == 0:
            continue
        basis = howell_form(ZpnMatrix(mod, np.vstack([basis.entries, fresh])))
    return TruncatedIdealSpan(index, level, basis, passes)


def ideal_intersect_center(ideal: TruncatedIdealSpan, center: CenterBasis | None = None) -> ZpnMatrix:
    """Howell basis of I ∩ Z(A) inside the degree window of ``ideal``."""
    center = center or center_basis(ideal.algebra, ideal.level, ideal.degree_cap, ideal.index.excluded)
    return span_intersection(ideal.basis, center.basis)


@dataclass(frozen=True)
class CentralGenReport:
    verdict: str  # "generated" | "not-generated-within-cap"
    witness: WeylElement | None
    center_intersection_basis: ZpnMatrix
    ideal: TruncatedIdealSpan
    central_span: TruncatedIdealSpan
    window: int
    boundary_failures: int = 0

    @property
    def generated(self) -> bool:
        return self.verdict == "generated"

    @property
    def truncated(self) -> bool:
        """True when rows beyond the comparison window were not reproduced."""
        return self.boundary_failures > 0


def central_generation_check(
    algebra: QuantAlgebraDesc,
    generators: Sequence[WeylElement],
    level: int,
    degree_cap: int,
) -> CentralGenReport:
    """Compare I with (I ∩ Z(A))A inside degree <= cap - p."""
    gens = [_at_level(g, level) for g in generators]
    # a non-central g only yields central elements of I from g^(p^(level-1)) on
    need = max((g.degree if g.is_central() else algebra.p ** (level - 1) * g.degree for g in gens), default=0)
    if degree_cap < need:
        warnings.warn(
            f"degree cap {degree_cap} is below {need}; central elements of I may be cut off",
            stacklevel=2,
        )
    ideal = ideal_span_basis(algebra, gens, level, degree_cap)
    inter = ideal_intersect_center(ideal)
    central = ideal_span_basis(algebra, [ideal.index.element(r, level) for r in inter.entries], level, degree_cap, ideal.index)
    window = degree_cap - algebra.p
    degs = ideal.index.row_degrees(ideal.basis.entries)
    inside = rows_in_span(central.basis, ideal.basis.entries) if ideal.basis.rows else np.zeros(0, bool)
    failing = [i for i, ok in enumerate(inside) if not ok and degs[i] <= window]
    boundary = sum(1 for i, ok in enumerate(inside) if not ok and degs[i] > window)
    witness = None
    if failing:
        # lowest-degree offender; Howell rows are sorted by decreasing degree
        row = ideal.basis.entries[failing[-1]]
        witness = ideal.index.element(row, level)
        assert ideal.contains(witness) and not central.contains(witness)
    verdict = "not-generated-within-cap" if failing else "generated"
    return CentralGenReport(verdict, witness, inter, ideal, central, window, boundary)


def flat_within_window(ideal: TruncatedIdealSpan, window: int) -> bool:
    """Check I ∩ p^k V = p^k I on rows of degree <= window, for 0 < k < level."""
    mod = ideal.basis.modulus
    p, q = mod.p, mod.q
    H = ideal.basis.entries
    if H.shape[0] == 0:
        return True
    for k in range(1, ideal.level):
        # c H ≡ 0 mod p^k depends only on c mod p^k
        K = kernel(ZpnMatrix(PModulus(p, k), H)).entries
        if K.shape[0] == 0:
            continue
        torsion = howell_form(ZpnMatrix(mod, matmul_mod(K, H, q)))
        degs = ideal.index.row_degrees(torsion.entries)
        rows = torsion.entries[[i for i, d in enumerate(degs) if d <= window]]
        scaled = howell_form(ZpnMatrix(mod, H * p**k))
        if rows.shape[0] and not rows_in_span(scaled, rows).all():
            return False
    return True
