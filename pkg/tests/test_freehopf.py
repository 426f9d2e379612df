import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qqw.errors import OutOfRange, WrongOrderOfQ
from qqw.field import make_prime_field_context, make_rational_context
from qqw.freehopf import (
    BorelAlgebra,
    Element,
    SL2Algebra,
    TensorElement,
    g_tensor_lambda,
    skew_power,
    skew_power_closed_form,
)

Q2 = make_rational_context(2)
F7 = make_prime_field_context(7, 2)
F13 = make_prime_field_context(13, 3)


def test_normal_form_examples():
    B = BorelAlgebra(Q2)
    f = Q2.field
    assert B.normal_form(["x", "g"]) == B.element((1, 1), Q2.q_inv)
    assert B.normal_form(["g", "G"]) == B.one()
    S = SL2Algebra(Q2)
    c = f.inv(f.sub(Q2.q, Q2.q_inv))
    want = S.element((0, 1, 1)) + S.element((1, 0, 0), f.neg(c)) + S.element((-1, 0, 0), c)
    assert S.normal_form(["F", "E"]) == want


def test_g_tensor_lambda_examples():
    B = BorelAlgebra(Q2)
    one, x, g = (0, 0), (0, 1), (1, 0)
    assert g_tensor_lambda((0, 1, 0), B) == TensorElement.pure(B, [one, x, g])
    assert g_tensor_lambda((3,), B) == TensorElement.pure(B, [(0, 3)])
    assert g_tensor_lambda((1, 1), B) == TensorElement.pure(B, [x, (1, 1)])
    with pytest.raises(OutOfRange):
        g_tensor_lambda((1, -1), B)


def test_coproduct_examples():
    B = BorelAlgebra(Q2)
    f = Q2.field
    g, x = B.generator("g"), B.generator("x")
    assert B.coproduct_power(1, g) == TensorElement.pure(B, [(1, 0), (1, 0)])
    assert B.coproduct_power(1, x) == TensorElement.pure(B, [(0, 0), (0, 1)]) + TensorElement.pure(B, [(0, 1), (1, 0)])
    want = (TensorElement.pure(B, [(0, 0), (0, 2)])
            + TensorElement.pure(B, [(0, 1), (1, 1)], f.add(f.one, Q2.q_inv))
            + TensorElement.pure(B, [(0, 2), (2, 0)]))
    assert B.coproduct_power(1, x * x) == want
    assert skew_power_closed_form(1, 2, B) == want


def test_closed_form_small_cases():
    B = BorelAlgebra(F7)
    one, x, g = (0, 0), (0, 1), (1, 0)
    want = (TensorElement.pure(B, [one, one, x]) + TensorElement.pure(B, [one, x, g])
            + TensorElement.pure(B, [x, g, g]))
    assert skew_power_closed_form(2, 1, B) == want
    for l in range(1, 4):
        total = TensorElement(B, l + 1, {})
        for i in range(l + 1):
            lam = [0] * (l + 1)
            lam[i] = 1
            total = total + g_tensor_lambda(lam, B)
        assert skew_power_closed_form(l, 1, B) == total


@pytest.mark.parametrize("ctx", [Q2, F7, F13], ids=["Q", "F7", "F13"])
@pytest.mark.parametrize("kind", ["borel", "sl2"])
def test_closed_form_matches_iterated_coproduct(ctx, kind):
    alg = BorelAlgebra(ctx) if kind == "borel" else SL2Algebra(ctx)
    for l in range(1, 4):
        for k in range(1, 4):
            assert skew_power_closed_form(l, k, alg) == alg.coproduct_power(l, skew_power(alg, k))


words_b = st.lists(st.sampled_from(["g", "G", "x"]), max_size=6)
words_s = st.lists(st.sampled_from(["K", "k", "E", "F"]), max_size=5)


@settings(max_examples=40, deadline=None)
@given(words_s, st.integers(0, 2**16))
def test_normal_form_is_confluent(word, seed):
    S = SL2Algebra(F7)
    assert S.normal_form(word) == S.normal_form(word, rng=random.Random(seed))


@settings(max_examples=40, deadline=None)
@given(words_b, words_b, words_b)
def test_borel_product_is_associative_and_matches_words(a, b, c):
    B = BorelAlgebra(Q2)
    A, Bb, C = B.normal_form(a), B.normal_form(b), B.normal_form(c)
    assert (A * Bb) * C == A * (Bb * C)
    assert A * Bb == B.normal_form(a + b)


@settings(max_examples=30, deadline=None)
@given(words_s, words_s)
def test_coproduct_is_multiplicative(a, b):
    S = SL2Algebra(F13)
    A, Bb = S.normal_form(a), S.normal_form(b)
    assert S.coproduct_power(1, A * Bb) == S.coproduct_power(1, A) * S.coproduct_power(1, Bb)


@settings(max_examples=30, deadline=None)
@given(words_b, st.integers(0, 1), st.integers(0, 2))
def test_coproduct_is_coassociative(word, s1, s2):
    B = BorelAlgebra(F7)
    e = B.normal_form(word)
    assert B.coproduct_power(2, e, [0, s1]) == B.coproduct_power(2, e)
    assert B.coproduct_power(3, e, [0, s1, s2]) == B.coproduct_power(3, e)


def test_quotients():
    T = BorelAlgebra(F7, quotient=(3, 6))
    assert T.normal_form(["x"] * 3) == Element(T, {})
    assert T.normal_form(["g"] * 6) == T.one()
    with pytest.raises(WrongOrderOfQ):
        BorelAlgebra(F7, quotient=(4, 4))
    u = SL2Algebra(F7, quotient=3)
    assert u.normal_form(["E"] * 3) == Element(u, {})
    assert u.normal_form(["K"] * 3) == u.one()
    with pytest.raises(WrongOrderOfQ):
        SL2Algebra(make_prime_field_context(5, 2), quotient=4)
