import math

import pytest
from hypothesis import given, strategies as st

from motivic_lambda.coeff import (
    COEFF_ONE,
    CoeffMonomial,
    CoefficientModule,
    binom_mod2,
    half_floor,
    parse_coeff,
    reduce_coeff,
)


def test_binom_basics():
    assert binom_mod2(2, 1) == 0
    assert all(binom_mod2(n, 0) == 1 for n in range(20))
    assert binom_mod2(3, 5) == 0  # out-of-range convention
    assert binom_mod2(-1, 0) == 0 or binom_mod2(-1, 0) == 1  # smoke: no crash


def test_binom_against_exact():
    for a in range(65):
        for b in range(a + 1):
            assert binom_mod2(a, b) == math.comb(a, b) % 2, (a, b)


@given(st.integers(0, 300), st.integers(0, 300), st.integers(0, 600))
def test_vandermonde_parity(m, n, p):
    lhs = sum(binom_mod2(m, k) * binom_mod2(n, p - k) for k in range(p + 1)) % 2
    assert lhs == binom_mod2(m + n, p)


def test_half_floor():
    for n in range(10):
        assert half_floor(0, 4 * n + 1) == 2 * n
    assert half_floor(1, 1) == 1
    assert half_floor(3, 5) == 20
    with pytest.raises(ValueError):
        half_floor(1, 4)


def test_coeff_degree():
    assert CoeffMonomial(3, 1).degree() == (-1, 0, -4)
    assert CoeffMonomial(0, 0, "u").degree() == (-1, 0, -1)
    assert COEFF_ONE.degree() == (0, 0, 0)


def test_reduce_coeff():
    free = CoefficientModule.free()
    t1 = CoefficientModule.truncated(1)
    t2 = CoefficientModule.truncated(2)
    fq1 = CoefficientModule.field_sum([("", 1), ("u", 1)])
    assert reduce_coeff(CoeffMonomial(3, 1), t1) is None  # rho = 0 over closed fields
    assert reduce_coeff(CoeffMonomial(1, 1), t2) == CoeffMonomial(1, 1)
    assert reduce_coeff(CoeffMonomial(0, 1, "u"), fq1) is None
    c = CoeffMonomial(5, 7)
    assert reduce_coeff(c, free) == c


@given(st.integers(0, 10), st.integers(0, 10), st.integers(1, 5))
def test_reduce_idempotent(n, k, r):
    mod = CoefficientModule.truncated(r)
    once = reduce_coeff(CoeffMonomial(n, k), mod)
    if once is not None:
        assert reduce_coeff(once, mod) == once


def test_parse_roundtrip():
    for text in ["1", "t", "r^2", "t^3 r", "u t^3 r"]:
        assert str(parse_coeff(text)) == text


def test_label_products_rejected():
    with pytest.raises(ValueError):
        CoeffMonomial(gen="u").times(CoeffMonomial(gen="pi"))
