from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qqw.errors import ConfigError, NotPrime, QIsTrivial, SingularMatrix, ZeroInput
from qqw.field import (
    INF,
    PrimeField,
    RationalField,
    context_from_config,
    make_prime_field_context,
    make_rational_context,
    multiplicative_order,
)


@pytest.mark.parametrize("p,q,order", [(7, 2, 3), (13, 5, 4), (13, 3, 3), (11, 3, 5)])
def test_prime_context_order(p, q, order):
    assert make_prime_field_context(p, q).order == order


@pytest.mark.parametrize("p,q", [(5, 4), (7, 1), (7, 6), (7, 0)])
def test_trivial_q_rejected(p, q):
    with pytest.raises(QIsTrivial):
        make_prime_field_context(p, q)


def test_rational_trivial_q_rejected():
    with pytest.raises(QIsTrivial):
        make_rational_context(-1)


def test_not_prime():
    with pytest.raises(NotPrime):
        PrimeField(9)


def test_multiplicative_order_examples():
    F7, Q = PrimeField(7), RationalField()
    assert multiplicative_order(1, F7) == 1
    assert multiplicative_order(Fraction(2), Q) == INF
    assert multiplicative_order(2, F7) == 3
    assert multiplicative_order(Fraction(-1), Q) == 2
    with pytest.raises(ZeroInput):
        multiplicative_order(0, F7)


def test_context_from_config_paths():
    with pytest.raises(ConfigError) as e:
        context_from_config({"field": {"kind": "prime", "p": 7}})
    assert e.value.path == "q"
    with pytest.raises(ConfigError) as e:
        context_from_config({"field": {"kind": "quaternion"}, "q": "2"})
    assert e.value.path == "field.kind"
    ctx = context_from_config({"field": {"kind": "rational"}, "q": "3/2"})
    assert ctx.q == Fraction(3, 2) and ctx.order == INF


def test_scalar_parsing():
    F7, Q = PrimeField(7), RationalField()
    assert F7("3/2") == 5
    assert Q("-3/7") == Fraction(-3, 7)
    with pytest.raises(ConfigError):
        F7("1/7")
    with pytest.raises(ConfigError):
        Q("x")


def _mat(field, entries, n, m):
    return field.matrix([[entries[(i * m + j) % len(entries)] for j in range(m)] for i in range(n)])


fields = st.sampled_from([PrimeField(7), PrimeField(13), RationalField()])
small = st.lists(st.integers(-6, 6), min_size=1, max_size=30)


@settings(max_examples=60, deadline=None)
@given(fields, small, st.integers(1, 5), st.integers(1, 5))
def test_nullspace_is_kernel(field, entries, n, m):
    a = _mat(field, entries, n, m)
    N = field.nullspace(a)
    assert N.shape == (m, m - field.rank(a))
    assert field.is_zero_matrix(field.matmul(a, N))


@settings(max_examples=60, deadline=None)
@given(fields, small, st.integers(1, 5))
def test_inverse_or_singular(field, entries, n):
    a = _mat(field, entries, n, n)
    if field.rank(a) < n:
        with pytest.raises(SingularMatrix):
            field.inv_matrix(a)
    else:
        assert field.equal(field.matmul(a, field.inv_matrix(a)), field.eye(n))


@settings(max_examples=60, deadline=None)
@given(fields, small, small, st.integers(1, 4), st.integers(1, 4), st.integers(1, 4))
def test_matmul_matches_naive(field, e1, e2, n, k, m):
    a, b = _mat(field, e1, n, k), _mat(field, e2, k, m)
    c = field.matmul(a, b)
    for i in range(n):
        for j in range(m):
            acc = field.zero
            for t in range(k):
                acc = field.add(acc, field.mul(a[i, t], b[t, j]))
            assert c[i, j] == acc


@settings(max_examples=40, deadline=None)
@given(fields, small, st.integers(1, 4), st.integers(-3, 3))
def test_matpow_and_scale(field, entries, n, c):
    a = _mat(field, entries, n, n)
    assert field.equal(field.matpow(a, 3), field.matmul(a, field.matmul(a, a)))
    s = field.scale(field(c), a)
    assert all(s[i, j] == field.mul(field(c), a[i, j]) for i in range(n) for j in range(n))


def test_rational_matrices_are_exact():
    Q = RationalField()
    a = Q.matrix([["1/3", "1/7"], ["2", "5/11"]])
    inv = Q.inv_matrix(a)
    assert Q.equal(Q.matmul(a, inv), Q.eye(2))
    assert all(isinstance(x, Fraction) for x in inv.flat)
    assert np.asarray(a).dtype == object
