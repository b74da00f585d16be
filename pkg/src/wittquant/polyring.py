"""Sparse multivariate polynomials, monomial quotients and Kähler 1-forms.

Coefficients live in Z/p^n (``PModulus``) or in the integers (``modulus=None``).
Polynomials are immutable; every operation returns a new object.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import expr
from .chainring import PModulus, ZpnMatrix, howell_form, in_row_span

Exps = tuple[int, ...]


class RingMismatch(ValueError):
    pass


class NoPairing(ValueError):
    pass


@dataclass(frozen=True)
class PolyRingDesc:
    """Polynomial ring over Z/p^n or Z with optional symplectic pairs.

    ``pairs`` lists (u_i, v_i) variable-index pairs with {u_i, v_i} = pairing_sign.
    """

    variables: tuple[str, ...]
    modulus: PModulus | None = None
    pairs: tuple[tuple[int, int], ...] = ()
    pairing_sign: int = 1

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"duplicate variable names in {self.variables}")
        used = [i for pr in self.pairs for i in pr]
        if len(set(used)) != len(used) or any(not 0 <= i < len(self.variables) for i in used):
            raise ValueError(f"bad symplectic pairs {self.pairs}")
        if self.pairing_sign not in (1, -1):
            raise ValueError("pairing_sign must be +1 or -1")

    @classmethod
    def symplectic(cls, modulus: PModulus | None, r: int = 1, names=("u", "v"), pairing_sign: int = 1):
        if r == 1:
            variables = tuple(names)
        else:
            variables = tuple(f"{names[0]}{i}" for i in range(1, r + 1)) + tuple(
                f"{names[1]}{i}" for i in range(1, r + 1)
            )
        return cls(variables, modulus, tuple((i, r + i) for i in range(r)), pairing_sign)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def q(self) -> int | None:
        return None if self.modulus is None else self.modulus.q

    @property
    def characteristic(self) -> int:
        return 0 if self.modulus is None else self.modulus.q

    @property
    def char_p(self) -> bool:
        return self.modulus is not None and self.modulus.n == 1

    def reduce(self, c: int) -> int:
        return c if self.modulus is None else c % self.modulus.q

    def with_modulus(self, modulus: PModulus | None) -> "PolyRingDesc":
        return PolyRingDesc(self.variables, modulus, self.pairs, self.pairing_sign)

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c: int) -> "Polynomial":
        return Polynomial(self, {(0,) * self.nvars: c})

    def gen(self, name_or_index) -> "Polynomial":
        i = self.variables.index(name_or_index) if isinstance(name_or_index, str) else name_or_index
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): 1})

    def gens(self) -> tuple["Polynomial", ...]:
        return tuple(self.gen(i) for i in range(self.nvars))

    def monomial(self, exps: Sequence[int], c: int = 1) -> "Polynomial":
        return Polynomial(self, {tuple(exps): c})

    def normalize(self, f: "Polynomial") -> "Polynomial":
        return f

    def parse(self, text: str) -> "Polynomial":
        val = expr.evaluate(text, dict(zip(self.variables, self.gens())))
        return val if isinstance(val, Polynomial) else self.constant(val)

    def __str__(self):
        base = "Z" if self.modulus is None else (f"F_{self.modulus.p}" if self.char_p else str(self.modulus))
        return f"{base}[{', '.join(self.variables)}]"


def _fmt_term(names, exps, c, with_coeff=True) -> str:
    factors = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, exps) if e]
    if not factors:
        return str(c)
    if c == 1 or not with_coeff:
        return "*".join(factors)
    return f"{c}*" + "*".join(factors)


def term_order_key(exps: Exps):
    return (-sum(exps), tuple(-e for e in exps))


def format_terms(names: Sequence[str], terms: Mapping[Exps, int]) -> str:
    if not terms:
        return "0"
    parts = []
    for exps in sorted(terms, key=term_order_key):
        c = terms[exps]
        if c < 0:
            parts.append(("-", _fmt_term(names, exps, -c)))
        else:
            parts.append(("+", _fmt_term(names, exps, c)))
    out = parts[0][1] if parts[0][0] == "+" else "-" + parts[0][1]
    for sign, t in parts[1:]:
        out += f" {sign} {t}"
    return out


class Polynomial:
    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRingDesc, terms: Mapping[Exps, int] | None = None):
        self.ring = ring
        clean = {}
        for e, c in (terms or {}).items():
            c = ring.reduce(int(c))
            if c:
                e = tuple(e)
                if len(e) != ring.nvars or min(e, default=0) < 0:
                    raise ValueError(f"bad exponent {e} for {ring}")
                clean[e] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ring, terms):
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.terms = terms
        obj._hash = None
        return obj

    # -- arithmetic ---------------------------------------------------------

    def _lift_other(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatch(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, np.integer)):
            return self.ring.constant(int(other))
        return NotImplemented

    def __add__(self, other):
        other = self._lift_other(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        red = self.ring.reduce
        for e, c in other.terms.items():
            v = red(out.get(e, 0) + c)
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Polynomial._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        red = self.ring.reduce
        return Polynomial._raw(self.ring, {e: red(-c) for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift_other(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift_other(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            red = self.ring.reduce
            out = {}
            for e, c in self.terms.items():
                v = red(c * int(other))
                if v:
                    out[e] = v
            return Polynomial._raw(self.ring, out)
        other = self._lift_other(other)
        if other is NotImplemented:
            return other
        out: dict[Exps, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Polynomial(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        if self.ring.char_p and len(self.terms) > 1:
            # freshman's dream on base-p digits of k
            p = self.ring.modulus.p
            result = self.ring.one()
            shift = 1
            while k:
                k, digit = divmod(k, p)
                if digit:
                    result = result * (self._frob(shift) ** digit if shift > 1 else self._plain_pow(digit))
                shift *= p
            return result
        return self._plain_pow(k)

    def _frob(self, e: int) -> "Polynomial":
        """f^e for e a power of p in characteristic p."""
        return Polynomial._raw(
            self.ring,
            {tuple(a * e for a in ex): pow(c, e, self.ring.q) for ex, c in self.terms.items()},
        )

    def _plain_pow(self, k: int) -> "Polynomial":
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def pth_power(self, k: int = 1) -> "Polynomial":
        """f^(p^k)."""
        if self.ring.modulus is None:
            raise ValueError("pth_power needs a prime p; use ** over the integers")
        e = self.ring.modulus.p**k
        if self.ring.char_p:
            return self._frob(e)
        return self._plain_pow(e)

    # -- structure -----------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, np.integer)):
            other = self.ring.constant(int(other))
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def coefficient(self, exps: Sequence[int]) -> int:
        return self.terms.get(tuple(exps), 0)

    def derivative(self, var) -> "Polynomial":
        i = self.ring.variables.index(var) if isinstance(var, str) else var
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = e[:i] + (e[i] - 1,) + e[i + 1 :]
                out[ne] = c * e[i]
        return Polynomial(self.ring, out)

    def substitute(self, values: Sequence, one=None):
        """Evaluate with variable i replaced by ``values[i]`` (any ring elements)."""
        if one is None:
            one = values[0] ** 0 if values else 1
        powers: dict[tuple[int, int], object] = {}

        def power(i, e):
            key = (i, e)
            if key not in powers:
                powers[key] = values[i] ** e
            return powers[key]

        total = one * 0
        for e, c in self.terms.items():
            term = one * c
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            total = total + term
        return total

    def map_ring(self, ring: PolyRingDesc) -> "Polynomial":
        if ring.nvars != self.ring.nvars:
            raise RingMismatch(f"{self.ring} -> {ring}")
        return Polynomial(ring, self.terms)

    def __str__(self):
        return format_terms(self.ring.variables, self.terms)

    def __repr__(self):
        return f"Polynomial({self.ring}, {self})"


# --- monomial ideals and quotients ------------------------------------------


def _divides(g: Exps, e: Exps) -> bool:
    return all(a <= b for a, b in zip(g, e))


def _minimalize(gens: Iterable[Exps]) -> tuple[Exps, ...]:
    uniq = sorted(set(gens), key=lambda g: (sum(g), g))
    out: list[Exps] = []
    for g in uniq:
        if not any(_divides(h, g) for h in out):
            out.append(g)
    return tuple(sorted(out, key=term_order_key))


@dataclass(frozen=True)
class MonomialIdeal:
    ring: PolyRingDesc
    generators: tuple[Exps, ...]

    def __post_init__(self):
        gens = tuple(tuple(g) for g in self.generators)
        if any(len(g) != self.ring.nvars for g in gens):
            raise ValueError("generator arity does not match the ring")
        object.__setattr__(self, "generators", _minimalize(gens))

    @classmethod
    def from_polys(cls, gens: Iterable[Polynomial]) -> "MonomialIdeal":
        gens = list(gens)
        exps = []
        for g in gens:
            if len(g.terms) != 1:
                raise ValueError(f"{g} is not a monomial")
            exps.extend(g.terms)
        return cls(gens[0].ring, tuple(exps))

    def contains_monomial(self, exps: Sequence[int]) -> bool:
        return any(_divides(g, tuple(exps)) for g in self.generators)

    def power(self, e: int) -> "MonomialIdeal":
        return ideal_power_generators(self, e)

    def is_zero_dimensional(self) -> bool:
        pure = set()
        for g in self.generators:
            nz = [i for i, a in enumerate(g) if a]
            if len(nz) == 1:
                pure.add(nz[0])
        return len(pure) == self.ring.nvars

    def polys(self) -> list[Polynomial]:
        return [self.ring.monomial(g) for g in self.generators]

    def __str__(self):
        return "(" + ", ".join(str(p) for p in self.polys()) + ")"


def ideal_power_generators(m: MonomialIdeal, e: int) -> MonomialIdeal:
    """Minimal monomial generators of m^e."""
    if e < 1:
        raise ValueError("exponent must be >= 1")
    cur = m.generators
    for _ in range(e - 1):
        cur = _minimalize(tuple(a + b for a, b in zip(g, h)) for g in cur for h in m.generators)
    return MonomialIdeal(m.ring, cur)


@dataclass(frozen=True)
class QuotientRing:
    """base / ideal for a monomial ideal; elements are normal-form polynomials."""

    base: PolyRingDesc
    ideal: MonomialIdeal

    def __post_init__(self):
        if self.ideal.ring != self.base:
            raise RingMismatch("ideal lives in a different ring")

    # ring-handle surface shared with PolyRingDesc
    @property
    def modulus(self):
        return self.base.modulus

    @property
    def char_p(self):
        return self.base.char_p

    @property
    def characteristic(self):
        return self.base.characteristic

    @property
    def variables(self):
        return self.base.variables

    def normalize(self, f: Polynomial) -> Polynomial:
        keep = {e: c for e, c in f.terms.items() if not self.ideal.contains_monomial(e)}
        return Polynomial._raw(self.base, keep)

    def zero(self):
        return self.base.zero()

    def one(self):
        return self.normalize(self.base.one())

    def constant(self, c):
        return self.normalize(self.base.constant(c))

    def gen(self, name_or_index):
        return self.normalize(self.base.gen(name_or_index))

    def parse(self, text):
        return self.normalize(self.base.parse(text))

    def monomial_basis(self, degree_cap: int | None = None) -> list[Exps]:
        """Standard monomials, sorted with the highest degree first."""
        if degree_cap is None:
            if not self.ideal.is_zero_dimensional():
                raise ValueError("quotient is infinite-dimensional; supply a degree cap")
            degree_cap = sum(max(g[i] for g in self.ideal.generators) for i in range(self.base.nvars))
        return [e for e in monomials_upto(self.base.nvars, degree_cap) if not self.ideal.contains_monomial(e)]

    def __str__(self):
        return f"{self.base}/{self.ideal}"


@lru_cache(maxsize=None)
def monomials_upto(nvars: int, degree: int) -> tuple[Exps, ...]:
    out = [e for e in itertools.product(range(degree + 1), repeat=nvars) if sum(e) <= degree]
    return tuple(sorted(out, key=term_order_key))


# --- differential forms -------------------------------------------------------


class OneForm:
    """Σ f_i dx_i over a polynomial ring; zero coefficients are dropped."""

    __slots__ = ("ring", "coefficients")

    def __init__(self, ring: PolyRingDesc, coefficients: Mapping[int, Polynomial] | None = None):
        self.ring = ring
        self.coefficients = {i: f for i, f in (coefficients or {}).items() if not f.is_zero()}

    def __add__(self, other: "OneForm") -> "OneForm":
        out = dict(self.coefficients)
        for i, f in other.coefficients.items():
            out[i] = out[i] + f if i in out else f
        return OneForm(self.ring, out)

    def __neg__(self):
        return OneForm(self.ring, {i: -f for i, f in self.coefficients.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, g: Polynomial) -> "OneForm":
        return OneForm(self.ring, {i: g * f for i, f in self.coefficients.items()})

    def coefficient(self, var) -> Polynomial:
        i = self.ring.variables.index(var) if isinstance(var, str) else var
        return self.coefficients.get(i, self.ring.zero())

    def map_coefficients(self, fn) -> "OneForm":
        return OneForm(self.ring, {i: fn(f) for i, f in self.coefficients.items()})

    def is_zero(self) -> bool:
        return not self.coefficients

    def d(self) -> dict[tuple[int, int], Polynomial]:
        """Exterior derivative as a 2-form {(i, j): coefficient of dx_i ∧ dx_j}, i < j."""
        out = {}
        n = self.ring.nvars
        for i in range(n):
            for j in range(i + 1, n):
                c = self.coefficient(j).derivative(i) - self.coefficient(i).derivative(j)
                if not c.is_zero():
                    out[(i, j)] = c
        return out

    def is_closed(self) -> bool:
        return not self.d()

    def __eq__(self, other):
        if not isinstance(other, OneForm):
            return NotImplemented
        return self.ring == other.ring and self.coefficients == other.coefficients

    def __hash__(self):
        return hash((self.ring, frozenset(self.coefficients.items())))

    def __str__(self):
        if not self.coefficients:
            return "0"
        parts = []
        for i in sorted(self.coefficients):
            f = self.coefficients[i]
            name = self.ring.variables[i]
            if f == 1:
                parts.append(f"d({name})")
            elif len(f.terms) == 1 and min(f.terms.values()) > 0:
                parts.append(f"{f} d({name})")
            else:
                parts.append(f"({f}) d({name})")
        return " + ".join(parts)

    def __repr__(self):
        return f"OneForm({self})"

    @classmethod
    def parse(cls, ring: PolyRingDesc, text: str) -> "OneForm":
        """Inverse of ``str``: ``f_1 d(x) + (f_2) d(y)``."""
        text = text.strip()
        if text == "0":
            return cls(ring)
        coeffs: dict[int, Polynomial] = {}
        for chunk in _split_top_level(text):
            chunk = chunk.strip()
            if not chunk.endswith(")") or "d(" not in chunk:
                raise expr.ParseError(f"bad one-form term {chunk!r}")
            k = chunk.rfind("d(")
            name = chunk[k + 2 : -1].strip()
            if name not in ring.variables:
                raise expr.ParseError(f"unknown variable {name!r}")
            head = chunk[:k].strip()
            f = ring.parse(head) if head else ring.one()
            i = ring.variables.index(name)
            coeffs[i] = coeffs[i] + f if i in coeffs else f
        return cls(ring, coeffs)


def _split_top_level(text: str) -> list[str]:
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "+" and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    return parts


def exterior_d(f: Polynomial) -> OneForm:
    return OneForm(f.ring, {i: f.derivative(i) for i in range(f.ring.nvars)})


def _require_char_p(ring):
    if not ring.char_p:
        raise ValueError(f"{ring} does not have characteristic p")
    return ring.modulus.p


def cartier_inverse(presentation: Iterable[tuple[Polynomial, Polynomial]]) -> OneForm:
    """Σ f^p g^(p-1) dg for a presentation Σ f dg given as (f, g) pairs."""
    presentation = list(presentation)
    if not presentation:
        raise ValueError("empty presentation; pass at least one (f, g) pair")
    ring = presentation[0][0].ring
    p = _require_char_p(ring)
    total = OneForm(ring)
    for f, g in presentation:
        total = total + exterior_d(g).scale(f.pth_power(1) * g ** (p - 1))
    return total


def fd_composite(components: Sequence[Polynomial], n: int | None = None, normalize=None) -> OneForm:
    """Σ_{i=1..n} z_i^(p^(n-i) - 1) dz_i for a Witt vector (z_1, ..., z_n) over a char-p ring."""
    comps = list(getattr(components, "components", components))
    if n is not None and n != len(comps):
        raise ValueError(f"expected a length-{n} vector, got length {len(comps)}")
    n = len(comps)
    ring = comps[0].ring
    p = _require_char_p(ring)
    norm = normalize or (lambda f: f)
    total = OneForm(ring)
    for i, z in enumerate(comps, start=1):
        total = total + exterior_d(z).scale(norm(z ** (p ** (n - i) - 1)))
    return total.map_coefficients(norm)


def _pairing(ring: PolyRingDesc):
    if not ring.pairs:
        raise NoPairing(f"{ring} has no symplectic pairing")
    return ring.pairs


def std_poisson(f: Polynomial, g: Polynomial) -> Polynomial:
    """{f, g} = s Σ (∂f/∂u_i ∂g/∂v_i - ∂f/∂v_i ∂g/∂u_i), s the pairing sign."""
    total = f.ring.zero()
    for u, v in _pairing(f.ring):
        total = total + f.derivative(u) * g.derivative(v) - f.derivative(v) * g.derivative(u)
    return total * f.ring.pairing_sign


@dataclass(frozen=True)
class Derivation:
    """A derivation of a polynomial ring, stored by its values on the variables."""

    ring: PolyRingDesc
    values: tuple[Polynomial, ...]

    def __call__(self, f: Polynomial) -> Polynomial:
        total = self.ring.zero()
        for i, val in enumerate(self.values):
            if not val.is_zero():
                total = total + val * f.derivative(i)
        return total

    @classmethod
    def hamiltonian(cls, f: Polynomial) -> "Derivation":
        """{f, -}."""
        ring = f.ring
        return cls(ring, tuple(std_poisson(f, x) for x in ring.gens()))

    def __add__(self, other):
        return Derivation(self.ring, tuple(a + b for a, b in zip(self.values, other.values)))

    def scale(self, g: Polynomial):
        return Derivation(self.ring, tuple(g * v for v in self.values))

    def is_zero(self):
        return all(v.is_zero() for v in self.values)


def iota(omega: OneForm) -> Derivation:
    """g df ↦ g {f, -}."""
    ring = omega.ring
    out = Derivation(ring, tuple(ring.zero() for _ in range(ring.nvars)))
    for i, f in omega.coefficients.items():
        out = out + Derivation.hamiltonian(ring.gen(i)).scale(f)
    return out


def iota_inverse(delta: Derivation) -> OneForm:
    ring = delta.ring
    s = ring.pairing_sign
    coeffs = {}
    for u, v in _pairing(ring):
        # ι(a du + b dv) sends u to -s b and v to s a
        coeffs[u] = delta.values[v] * s
        coeffs[v] = delta.values[u] * (-s)
    return OneForm(ring, coeffs)


# --- the decomposition z = a^p + b with b in m^(p^i) B ----------------------------


@dataclass(frozen=True)
class Decomposition:
    member: bool
    pth_root: Polynomial | None = None
    remainder: Polynomial | None = None


@dataclass(frozen=True)
class DecompositionSpace:
    """F_p-basis of B^p + m^e B as rows over the standard monomials of B."""

    quotient: QuotientRing
    monomials: tuple[Exps, ...]
    matrix: ZpnMatrix
    n_pth: int  # leading rows are the p-th powers of ``monomials[:n_pth]``
    sources: tuple[Exps, ...] = field(default=())

    def vector(self, f: Polynomial) -> np.ndarray:
        index = {e: k for k, e in enumerate(self.monomials)}
        v = np.zeros(len(self.monomials), dtype=np.int64)
        for e, c in self.quotient.normalize(f).terms.items():
            if e not in index:
                raise ValueError(f"{f} leaves the degree window")
            v[index[e]] = c
        return v


def decomposition_space(B: QuotientRing, m: MonomialIdeal, i: int, degree_cap: int | None = None) -> DecompositionSpace:
    p = _require_char_p(B.base)
    monos = tuple(B.monomial_basis(degree_cap))
    index = {e: k for k, e in enumerate(monos)}
    rows, sources = [], []
    for e in monos:
        pe = tuple(a * p for a in e)
        if pe in index and not B.ideal.contains_monomial(pe):
            row = np.zeros(len(monos), dtype=np.int64)
            row[index[pe]] = 1
            rows.append(row)
            sources.append(e)
    n_pth = len(rows)
    mpow = m.power(p**i)
    for e in monos:
        if mpow.contains_monomial(e):
            row = np.zeros(len(monos), dtype=np.int64)
            row[index[e]] = 1
            rows.append(row)
    mat = ZpnMatrix(B.base.modulus, np.array(rows, dtype=np.int64).reshape(len(rows), len(monos)))
    return DecompositionSpace(B, monos, mat, n_pth, tuple(sources))


def pth_power_decomposition_check(
    z: Polynomial, i: int, m: MonomialIdeal, B: QuotientRing, degree_cap: int | None = None
) -> Decomposition:
    """Decide z ∈ B^p + m^(p^i) B; on success return z = a^p + b."""
    space = decomposition_space(B, m, i, degree_cap)
    vec = space.vector(z)
    mat = space.matrix
    # prefer a pure p-th power, then a pure ideal element, then a mix
    attempts = [(0, space.n_pth), (space.n_pth, mat.rows), (0, mat.rows)]
    for lo, hi in attempts:
        sub = ZpnMatrix(mat.modulus, mat.entries[lo:hi])
        res = in_row_span(sub, vec) if hi > lo else None
        if res is not None and res.member:
            break
    else:
        return Decomposition(False)
    ring = B.base
    a = ring.zero()
    if lo == 0:
        for c, e in zip(res.coefficients[: space.n_pth], space.sources):
            a = a + ring.monomial(e, c)
    a = B.normalize(a)
    b = B.normalize(z - a.pth_power(1))
    return Decomposition(True, a, b)
