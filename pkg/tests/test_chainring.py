import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wittquant.chainring import (
    InsufficientValuation,
    ModulusMismatch,
    NonUnitError,
    PModulus,
    ZpnMatrix,
    ZpnScalar,
    howell_form,
    in_row_span,
    kernel,
    span_cardinality,
    span_intersection,
)

Z9 = PModulus(3, 2)


def brute_span(rows, q, cols):
    rows = [tuple(r) for r in rows]
    out = set()
    for coeffs in itertools.product(range(q), repeat=len(rows)):
        v = [0] * cols
        for c, r in zip(coeffs, rows):
            for j in range(cols):
                v[j] = (v[j] + c * r[j]) % q
        out.add(tuple(v))
    return out


def test_scalar_examples():
    assert ZpnScalar(Z9, 4) + ZpnScalar(Z9, 7) == ZpnScalar(Z9, 2)
    assert ZpnScalar(Z9, 2).inverse() == ZpnScalar(Z9, 5)
    with pytest.raises(NonUnitError):
        ZpnScalar(Z9, 3).inverse()
    with pytest.raises(ModulusMismatch):
        ZpnScalar(Z9, 1) + ZpnScalar(PModulus(3, 1), 1)


def test_valuation_of_zero_is_n():
    assert ZpnScalar(Z9, 0).valuation == 2
    assert ZpnScalar(Z9, 3).valuation == 1
    assert ZpnScalar(PModulus(5, 3), 50).valuation == 2


def test_exact_divide():
    assert ZpnScalar(Z9, 6).divide_by_p_power(1) == ZpnScalar(PModulus(3, 1), 2)
    assert ZpnScalar(PModulus(3, 3), 9).divide_by_p_power(2) == ZpnScalar(PModulus(3, 1), 1)
    with pytest.raises(InsufficientValuation):
        ZpnScalar(Z9, 4).divide_by_p_power(1)


@pytest.mark.parametrize("mod", [PModulus(3, 1), PModulus(3, 2)])
def test_ring_axioms_exhaustive(mod):
    elems = [ZpnScalar(mod, v) for v in range(mod.q)]
    zero, one = ZpnScalar(mod, 0), ZpnScalar(mod, 1)
    for a in elems:
        assert a + zero == a and a * one == a and a + (-a) == zero
        for b in elems:
            assert a + b == b + a and a * b == b * a
            for c in elems:
                assert (a + b) + c == a + (b + c)
                assert (a * b) * c == a * (b * c)
                assert a * (b + c) == a * b + a * c


def test_howell_examples():
    m = ZpnMatrix(Z9, [[3, 0], [0, 3]])
    assert howell_form(m) == m
    assert howell_form(ZpnMatrix(Z9, [[2, 0]])).tolist() == [[1, 0]]
    a = howell_form(ZpnMatrix(Z9, [[1, 1], [0, 3]]))
    b = howell_form(ZpnMatrix(Z9, [[1, 4], [0, 3]]))
    assert brute_span([[1, 1], [0, 3]], 9, 2) == brute_span([[1, 4], [0, 3]], 9, 2)
    assert a == b


def test_howell_needs_annihilator_rows():
    # echelon [[3, 1]] alone hides (0, 3) = 3 * (3, 1)
    h = howell_form(ZpnMatrix(Z9, [[3, 1]]))
    assert h.tolist() == [[3, 1], [0, 3]]


def test_kernel_examples():
    k = kernel(ZpnMatrix(Z9, [[3]]))
    assert brute_span(k.tolist(), 9, 1) == {(0,), (3,), (6,)}
    assert kernel(ZpnMatrix.identity(Z9, 2)).rows == 0
    m = [[1], [3]]
    k = kernel(ZpnMatrix(Z9, m))
    expected = {(a, b) for a in range(9) for b in range(9) if (a + 3 * b) % 9 == 0}
    assert brute_span(k.tolist(), 9, 2) == expected


def test_in_row_span_examples():
    m = ZpnMatrix(Z9, [[3, 0]])
    assert in_row_span(m, [0, 0]).member
    r = in_row_span(m, [6, 0])
    assert r.member and r.coefficients == (2,)
    assert not in_row_span(m, [1, 0]).member
    assert all((c * 3) % 9 != 1 for c in range(9))
    with pytest.raises(ValueError):
        in_row_span(m, [1, 0, 0])


matrices = st.sampled_from([3, 5]).flatmap(
    lambda p: st.integers(1, 3).flatmap(
        lambda n: st.tuples(
            st.just(PModulus(p, n)),
            st.integers(1, 4).flatmap(
                lambda r: st.integers(1, 4).flatmap(
                    lambda c: st.lists(
                        st.lists(st.integers(0, p**n - 1), min_size=c, max_size=c),
                        min_size=r,
                        max_size=r,
                    )
                )
            ),
        )
    )
)


@settings(max_examples=100, deadline=None)
@given(matrices)
def test_howell_idempotent_and_span_preserving(case):
    mod, rows = case
    m = ZpnMatrix(mod, rows)
    h = howell_form(m)
    assert howell_form(h) == h
    assert howell_form(ZpnMatrix(mod, np.vstack([h.entries, m.entries]))) == h
    for r in m.entries:
        assert in_row_span(h, r).member


small_z9 = st.integers(1, 3).flatmap(
    lambda r: st.integers(1, 3).flatmap(
        lambda c: st.lists(st.lists(st.integers(0, 8), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@settings(max_examples=60, deadline=None)
@given(small_z9)
def test_kernel_exhaustive_z9(rows):
    m = ZpnMatrix(Z9, rows)
    k = kernel(m)
    assert not ((k.entries @ m.entries) % 9).any()
    r, c = m.shape
    span = brute_span(rows, 9, c)
    # |ker| * |im| = |domain|
    assert span_cardinality(k) * len(span) == 9**r
    assert span_cardinality(howell_form(m)) == len(span)


def test_in_row_span_matches_enumeration_z9_all_small():
    vectors2 = list(itertools.product(range(9), repeat=2))
    rng = np.random.default_rng(0)
    cases = [[list(r)] for r in vectors2]
    cases += [rng.integers(0, 9, size=(2, 2)).tolist() for _ in range(150)]
    cases += [[[a], [b]] for a in range(9) for b in range(9)]
    for rows in cases:
        m = ZpnMatrix(Z9, rows)
        cols = m.cols
        span = brute_span(rows, 9, cols)
        for v in itertools.product(range(9), repeat=cols):
            res = in_row_span(m, v)
            assert res.member == (v in span)
            if res.member:
                got = (np.array(res.coefficients) @ m.entries) % 9
                assert tuple(got) == v


def test_span_intersection_against_enumeration():
    rng = np.random.default_rng(5)
    for _ in range(40):
        a = rng.integers(0, 9, size=(2, 2)).tolist()
        b = rng.integers(0, 9, size=(2, 2)).tolist()
        inter = span_intersection(ZpnMatrix(Z9, a), ZpnMatrix(Z9, b))
        expected = brute_span(a, 9, 2) & brute_span(b, 9, 2)
        assert brute_span(inter.tolist(), 9, 2) == expected
