import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from padic_dyson.errors import DivisionByZero, PrimeMismatch
from padic_dyson.padic import (
    INF,
    LowerBound,
    PAdicScalar,
    ZeroAtPrecision,
    add,
    from_integer,
    from_rational,
    inv,
    mul,
    neg,
    scalar_from_json,
    scalar_to_json,
    valuation_of,
)

PRIMES = st.sampled_from([2, 3, 5, 7])


def test_from_integer_examples():
    x = from_integer(12, 2, 8)
    assert x.valuation == 2
    assert x.digits == (1, 1, 0, 0, 0, 0, 0, 0)
    assert from_integer(0, 5, 4).valuation == INF
    m = from_integer(-1, 2, 4)
    assert m.valuation == 0 and m.digits == (1, 1, 1, 1)


def test_add_examples():
    z = add(from_integer(1, 2, 4), from_integer(-1, 2, 4))
    assert isinstance(z, ZeroAtPrecision)
    assert z.certified_min_valuation == 4
    s = add(from_integer(2, 2, 8), from_integer(3, 2, 8))
    assert s.valuation == 0 and s.unit == 5
    # the carry of 2 + 2 is exact: absolute precision stays at 9
    d = add(from_integer(2, 2, 8), from_integer(2, 2, 8))
    assert d.valuation == 2 and d.unit == 1
    assert d.absprec == from_integer(2, 2, 8).absprec


def test_mul_inv_examples():
    m = mul(from_integer(2, 2, 8), from_integer(3, 2, 8))
    assert (m.valuation, m.unit) == (1, 3)
    assert inv(from_integer(3, 2, 4)).unit == 11
    z = mul(from_integer(20, 2, 6), from_integer(0, 2, 6))
    assert z.valuation == INF


def test_inv_errors():
    with pytest.raises(DivisionByZero):
        inv(from_integer(0, 3, 4))
    with pytest.raises(DivisionByZero):
        inv(ZeroAtPrecision(3, 4))


def test_prime_mismatch():
    with pytest.raises(PrimeMismatch):
        add(from_integer(1, 2, 4), from_integer(1, 3, 4))
    with pytest.raises(PrimeMismatch):
        mul(from_integer(1, 2, 4), from_integer(1, 3, 4))


def test_valuation_examples():
    assert valuation_of(from_integer(12, 2, 8)) == 2
    assert valuation_of(from_integer(0, 7, 3)) == INF
    assert valuation_of(from_rational(Fraction(1, 3), 3, 5)) == -1
    lb = valuation_of(ZeroAtPrecision(5, 6))
    assert isinstance(lb, LowerBound) and lb == 6 and not lb.certified


def test_invariant_checks():
    with pytest.raises(ValueError):
        PAdicScalar(2, 0, 4, 3)
    with pytest.raises(ValueError):
        PAdicScalar(2, INF, 1, 3)


@st.composite
def scalars(draw, p=None, n=None, allow_negative=True):
    p = p or draw(PRIMES)
    n = n or draw(st.integers(1, 12))
    k = draw(st.integers(-(10**9), 10**9))
    shift = draw(st.integers(-3 if allow_negative else 0, 3))
    x = from_integer(k, p, n)
    if shift and x.valuation != INF:
        x = PAdicScalar._raw(p, x.valuation + shift, x.unit, n)
    return x


def _absprec(x):
    return x.certified_min_valuation if isinstance(x, ZeroAtPrecision) else x.absprec


@settings(max_examples=200)
@given(st.data())
def test_ring_laws(data):
    p = data.draw(PRIMES)
    n = data.draw(st.integers(2, 10))
    a, b, c = (data.draw(scalars(p=p, n=n)) for _ in range(3))
    pairs = [
        (add(add(a, b), c), add(a, add(b, c))),
        (mul(a, add(b, c)), add(mul(a, b), mul(a, c))),
        (mul(mul(a, b), c), mul(a, mul(b, c))),
    ]
    for x, y in pairs:
        d = add(x, neg(y))
        if isinstance(d, ZeroAtPrecision):
            continue
        # a surviving difference may only live beyond what both sides certify
        assert d.valuation == INF or d.valuation >= min(_absprec(x), _absprec(y))


@given(scalars(), scalars())
def test_valuation_multiplicative(a, b):
    if a.prime != b.prime:
        return
    m = mul(a, b)
    if a.valuation != INF and b.valuation != INF:
        assert m.valuation == a.valuation + b.valuation


@given(st.data())
def test_ultrametric(data):
    p = data.draw(PRIMES)
    a = data.draw(scalars(p=p, n=8))
    b = data.draw(scalars(p=p, n=8))
    s = add(a, b)
    va, vb = a.valuation, b.valuation
    vs = s.certified_min_valuation if isinstance(s, ZeroAtPrecision) else s.valuation
    assert vs >= min(va, vb)
    if va != vb:
        assert vs == min(va, vb)


@given(PRIMES, st.integers(1, 10), st.data())
def test_residue_round_trip(p, n, data):
    k = data.draw(st.integers(0, p**n - 1))
    assert from_integer(k, p, n).residue(n) == k


@given(st.data())
def test_inverse(data):
    p = data.draw(PRIMES)
    a = data.draw(scalars(p=p, n=data.draw(st.integers(1, 10))))
    if a.valuation == INF:
        return
    one = mul(a, inv(a))
    assert one.valuation == 0 and one.unit == 1 and one.precision == a.precision


@given(st.data())
def test_neg_exact(data):
    a = data.draw(scalars())
    z = add(a, neg(a))
    if a.valuation == INF:
        assert z.valuation == INF
    else:
        assert isinstance(z, ZeroAtPrecision) and z.certified_min_valuation == a.absprec


@given(scalars())
def test_json_round_trip(a):
    d = scalar_to_json(a)
    assert set(d) == {"p", "val", "digits", "prec"}
    assert scalar_from_json(d) == a


def test_json_zero_forms():
    z = from_integer(0, 3, 4)
    assert scalar_to_json(z) == {"p": 3, "val": "inf", "digits": [], "prec": 4}
    assert scalar_from_json(scalar_to_json(z)).valuation == INF
    zap = ZeroAtPrecision(3, 7)
    assert scalar_from_json(scalar_to_json(zap)) == zap


def test_json_rejects_non_unit():
    with pytest.raises(ValueError):
        scalar_from_json({"p": 2, "val": 0, "digits": [0, 1], "prec": 2})


def test_from_rational_matches_integer_arithmetic():
    x = from_rational(Fraction(5, 3), 2, 10)
    back = mul(x, from_integer(3, 2, 10))
    assert back == from_integer(5, 2, 10)


def test_absprec_of_power():
    x = from_integer(2**5 * 3, 2, 6)
    assert x.absprec == 11
    assert math.isinf(from_integer(0, 2, 3).absprec)
