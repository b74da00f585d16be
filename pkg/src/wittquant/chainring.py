"""Arithmetic in Z/p^n and linear algebra over that chain ring.

Matrices are dense ``int64`` numpy arrays of canonical residues.  The central
routine is :func:`howell_form`, which gives a canonical generating set for a
row span; kernels, span membership and span intersection are all built on it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np


class ModulusMismatch(ValueError):
    pass


class NonUnitError(ArithmeticError):
    pass


class InsufficientValuation(ArithmeticError):
    """Raised when an exact division by a power of p is impossible."""


@lru_cache(maxsize=None)
def is_prime(k: int) -> bool:
    if k < 2:
        return False
    i = 2
    while i * i <= k:
        if k % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class PModulus:
    """The ring Z/p^n with p an odd prime."""

    p: int
    n: int

    def __post_init__(self):
        if not is_prime(self.p) or self.p == 2:
            raise ValueError(f"p must be an odd prime, got {self.p}")
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")

    @property
    def q(self) -> int:
        return self.p**self.n

    def with_length(self, n: int) -> "PModulus":
        return PModulus(self.p, n)

    def valuation(self, value: int) -> int:
        value %= self.q
        if value == 0:
            return self.n
        v = 0
        while value % self.p == 0:
            value //= self.p
            v += 1
        return v

    def __str__(self):
        return f"Z/{self.p}^{self.n}"


@dataclass(frozen=True)
class ZpnScalar:
    modulus: PModulus
    value: int

    def __post_init__(self):
        object.__setattr__(self, "value", int(self.value) % self.modulus.q)

    def _coerce(self, other) -> int:
        if isinstance(other, ZpnScalar):
            if other.modulus != self.modulus:
                raise ModulusMismatch(f"{self.modulus} vs {other.modulus}")
            return other.value
        if isinstance(other, (int, np.integer)):
            return int(other)
        return NotImplemented

    def _new(self, value):
        return ZpnScalar(self.modulus, value)

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(self.value - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(o - self.value)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(self.value * o)

    __rmul__ = __mul__

    def __neg__(self):
        return self._new(-self.value)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return self._new(pow(self.value, k, self.modulus.q))

    @property
    def valuation(self) -> int:
        return self.modulus.valuation(self.value)

    def is_unit(self) -> bool:
        return self.valuation == 0

    def inverse(self) -> "ZpnScalar":
        if not self.is_unit():
            raise NonUnitError(f"{self.value} is not a unit in {self.modulus}")
        return self._new(pow(self.value, -1, self.modulus.q))

    def divide_by_p_power(self, m: int) -> "ZpnScalar":
        """Exact quotient by p^m, landing in Z/p^(n-m)."""
        return ZpnScalar(self.modulus.with_length(self.modulus.n - m), exact_divide(self.value, self.modulus, m))

    def __int__(self):
        return self.value

    def __str__(self):
        return str(self.value)


def exact_divide(value: int, modulus: PModulus, m: int) -> int:
    """Return b in [0, p^(n-m)) with p^m * b = value mod p^n."""
    if not 0 <= m < modulus.n:
        raise ValueError(f"cannot divide by p^{m} in {modulus}")
    value %= modulus.q
    if modulus.valuation(value) < m:
        raise InsufficientValuation(f"{value} is not divisible by {modulus.p}^{m} in {modulus}")
    return (value // modulus.p**m) % modulus.p ** (modulus.n - m)


# --- matrices -------------------------------------------------------------


def _valuations(arr: np.ndarray, p: int, n: int) -> np.ndarray:
    """Elementwise valuation of nonzero residues (entries must be nonzero)."""
    v = np.zeros(arr.shape, dtype=np.int64)
    for k in range(1, n):
        v += arr % p**k == 0
    return v


@dataclass(frozen=True, eq=False)
class ZpnMatrix:
    modulus: PModulus
    entries: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=np.int64)
        if a.ndim == 1:
            a = a.reshape(1, -1) if a.size else a.reshape(0, 0)
        a = np.mod(a, self.modulus.q)
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @classmethod
    def zeros(cls, modulus: PModulus, rows: int, cols: int) -> "ZpnMatrix":
        return cls(modulus, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, modulus: PModulus, size: int) -> "ZpnMatrix":
        return cls(modulus, np.eye(size, dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def shape(self):
        return self.entries.shape

    def __eq__(self, other):
        if not isinstance(other, ZpnMatrix):
            return NotImplemented
        return self.modulus == other.modulus and np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash((self.modulus, self.entries.shape, self.entries.tobytes()))

    def __matmul__(self, other: "ZpnMatrix") -> "ZpnMatrix":
        if other.modulus != self.modulus:
            raise ModulusMismatch(f"{self.modulus} vs {other.modulus}")
        return ZpnMatrix(self.modulus, matmul_mod(self.entries, other.entries, self.modulus.q))

    def tolist(self) -> list[list[int]]:
        return self.entries.tolist()

    def row(self, i: int) -> tuple[ZpnScalar, ...]:
        return tuple(ZpnScalar(self.modulus, int(x)) for x in self.entries[i])

    def howell(self) -> "ZpnMatrix":
        return howell_form(self)

    def __repr__(self):
        return f"ZpnMatrix({self.modulus}, {self.tolist()})"


def matmul_mod(a: np.ndarray, b: np.ndarray, q: int) -> np.ndarray:
    if a.shape[1] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    # Entries are < q <= 7^4, so a chunk of 2^16 products cannot overflow int64.
    step = 1 << 16
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for s in range(0, a.shape[1], step):
        out = (out + a[:, s : s + step] @ b[s : s + step]) % q
    return out


def _howell_array(a: np.ndarray, p: int, n: int) -> np.ndarray:
    q = p**n
    ncols = a.shape[1]
    work = np.mod(a, q)
    work = work[work.any(axis=1)]
    piv_cols: list[int] = []
    piv_vals: list[int] = []
    piv_rows: list[np.ndarray] = []
    top = 0  # rows above ``top`` are already pivots
    for j in range(ncols):
        if top >= work.shape[0]:
            break
        col = work[top:, j]
        nz = np.flatnonzero(col)
        if nz.size == 0:
            continue
        vals = _valuations(col[nz], p, n)
        i = top + int(nz[np.argmin(vals)])
        k = int(vals.min())
        pk = p**k
        if i != top:
            work[[top, i]] = work[[i, top]]
        unit = int(work[top, j]) // pk
        row = work[top] * pow(unit, -1, q) % q
        work[top] = row
        below = work[top + 1 :]
        factors = below[:, j] // pk
        hit = np.flatnonzero(factors)
        if hit.size:
            below[hit] = (below[hit] - np.outer(factors[hit], row)) % q
        top += 1
        if k > 0:
            ann = row * p ** (n - k) % q
            if ann.any():
                work = np.vstack([work, ann[None, :]])
        if len(piv_rows) % 16 == 15:
            rest = work[top:]
            work = np.vstack([work[:top], rest[rest.any(axis=1)]])
        piv_cols.append(j)
        piv_vals.append(pk)
        piv_rows.append(row)
    if not piv_rows:
        return np.zeros((0, ncols), dtype=np.int64)
    h = np.array(piv_rows, dtype=np.int64)
    for t, (j, pk) in enumerate(zip(piv_cols, piv_vals)):
        if t == 0:
            continue
        factors = h[:t, j] // pk
        hit = np.flatnonzero(factors)
        if hit.size:
            h[hit] = (h[hit] - np.outer(factors[hit], h[t])) % q
    return h


def pivots(h: np.ndarray) -> list[int]:
    """Leading column of every row of an echelon matrix."""
    return [int(np.flatnonzero(r)[0]) for r in h]


def howell_form(m: ZpnMatrix) -> ZpnMatrix:
    """Unique Howell basis of the row span of ``m``.

    Pivots are exact powers of p, entries above a pivot p^k lie in [0, p^k),
    and for every j the rows with pivot column >= j generate the part of the
    span that vanishes on the first j coordinates.
    """
    return ZpnMatrix(m.modulus, _howell_array(m.entries, m.modulus.p, m.modulus.n))


def _augmented_howell(m: ZpnMatrix) -> np.ndarray:
    aug = np.hstack([m.entries, np.eye(m.rows, dtype=np.int64)])
    return _howell_array(aug, m.modulus.p, m.modulus.n)


def kernel(m: ZpnMatrix) -> ZpnMatrix:
    """Howell basis of the left kernel {v : v m = 0}."""
    if m.rows == 0:
        return ZpnMatrix.zeros(m.modulus, 0, 0)
    h = _augmented_howell(m)
    keep = [i for i, j in enumerate(pivots(h)) if j >= m.cols]
    k = h[keep, m.cols :] if keep else np.zeros((0, m.rows), dtype=np.int64)
    return ZpnMatrix(m.modulus, _howell_array(k, m.modulus.p, m.modulus.n))


@dataclass(frozen=True)
class SpanMembership:
    member: bool
    coefficients: tuple[int, ...] | None = None

    def __bool__(self):
        return self.member


def _reduce(h: np.ndarray, v: np.ndarray, p: int, n: int):
    """Reduce rows of ``v`` by an echelon ``h``; return (remainders, ok, factors)."""
    q = p**n
    v = np.mod(np.array(v, dtype=np.int64, ndmin=2), q)
    ok = np.ones(v.shape[0], dtype=bool)
    factors = np.zeros((v.shape[0], h.shape[0]), dtype=np.int64)
    for t, j in enumerate(pivots(h)):
        pk = int(h[t, j])
        col = v[:, j]
        ok &= col % pk == 0
        f = col // pk
        factors[:, t] = f
        hit = np.flatnonzero(f)
        if hit.size:
            v[hit] = (v[hit] - np.outer(f[hit], h[t])) % q
    return v, ok & ~v.any(axis=1), factors


def in_row_span(m: ZpnMatrix, v: Sequence[int | ZpnScalar]) -> SpanMembership:
    """Decide whether ``v`` lies in the row span of ``m``.

    On success the certificate ``c`` satisfies ``c @ m == v``.
    """
    vec = np.array([int(x) for x in v], dtype=np.int64)
    if vec.shape[0] != m.cols:
        raise ValueError(f"vector of length {vec.shape[0]} against {m.cols} columns")
    if not vec.any():
        return SpanMembership(True, (0,) * m.rows)
    if m.rows == 0:
        return SpanMembership(False)
    p, n = m.modulus.p, m.modulus.n
    h = _augmented_howell(m)
    lead = pivots(h)
    top = h[[i for i, j in enumerate(lead) if j < m.cols]]
    _, ok, factors = _reduce(top[:, : m.cols], vec, p, n)
    if not ok[0]:
        return SpanMembership(False)
    coeffs = matmul_mod(factors, top[:, m.cols :], m.modulus.q)[0]
    return SpanMembership(True, tuple(int(c) for c in coeffs))


def rows_in_span(basis: ZpnMatrix, vectors: np.ndarray) -> np.ndarray:
    """Vectorised membership of many vectors in the span of a Howell basis."""
    vectors = np.asarray(vectors, dtype=np.int64)
    if vectors.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    if basis.rows == 0:
        return ~np.mod(vectors, basis.modulus.q).any(axis=1)
    _, ok, _ = _reduce(basis.entries, vectors, basis.modulus.p, basis.modulus.n)
    return ok


def span_contains(big: ZpnMatrix, small: ZpnMatrix) -> bool:
    return bool(rows_in_span(howell_form(big), small.entries).all())


def span_equal(a: ZpnMatrix, b: ZpnMatrix) -> bool:
    return howell_form(a) == howell_form(b)


def stack(modulus: PModulus, blocks: Iterable[ZpnMatrix], cols: int) -> ZpnMatrix:
    arrs = [b.entries for b in blocks if b.rows]
    if not arrs:
        return ZpnMatrix.zeros(modulus, 0, cols)
    return ZpnMatrix(modulus, np.vstack(arrs))


def span_intersection(a: ZpnMatrix, b: ZpnMatrix) -> ZpnMatrix:
    """Howell basis of rowspan(a) ∩ rowspan(b)."""
    if a.modulus != b.modulus:
        raise ModulusMismatch(f"{a.modulus} vs {b.modulus}")
    if a.rows == 0 or b.rows == 0:
        return ZpnMatrix.zeros(a.modulus, 0, a.cols)
    k = kernel(stack(a.modulus, [a, b], a.cols))
    if k.rows == 0:
        return ZpnMatrix.zeros(a.modulus, 0, a.cols)
    inter = matmul_mod(k.entries[:, : a.rows], a.entries, a.modulus.q)
    return howell_form(ZpnMatrix(a.modulus, inter))


def span_cardinality(h: ZpnMatrix) -> int:
    """Number of elements of the span of a Howell basis."""
    total = 1
    for t, j in enumerate(pivots(h.entries)):
        total *= h.modulus.q // int(h.entries[t, j])
    return total


def reduce_level(m: ZpnMatrix, level: int) -> ZpnMatrix:
    """Image of the span under Z/p^n -> Z/p^level."""
    return howell_form(ZpnMatrix(m.modulus.with_length(level), m.entries))
