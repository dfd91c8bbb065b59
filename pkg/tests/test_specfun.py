import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from zernstab.specfun import binomial_general, half, is_exact, jacobi_all, jacobi_eval, pochhammer


def test_pochhammer_examples():
    assert pochhammer(3, 4) == 360
    assert pochhammer(Fraction(7, 3), 0) == 1
    assert pochhammer(2.5, 0) == 1.0
    assert pochhammer(-2, 3) == 0


def test_pochhammer_exact_type():
    v = pochhammer(Fraction(1, 2), 3)
    assert isinstance(v, Fraction) and v == Fraction(15, 8)
    assert isinstance(pochhammer(0.5, 3), float)


def test_pochhammer_negative_q():
    with pytest.raises(ValueError):
        pochhammer(1, -1)


@given(st.fractions(min_value=-20, max_value=20, max_denominator=4), st.integers(0, 50))
def test_pochhammer_step(x, q):
    assert pochhammer(x, q + 1) == pochhammer(x, q) * (x + q)


def test_binomial_examples():
    assert binomial_general(Fraction(5, 2), 2) == Fraction(15, 8)
    assert binomial_general(half(5), 2) == Fraction(15, 8)
    for n in range(6):
        assert binomial_general(n, 0) == 1
    assert binomial_general(3, 5) == 0
    assert binomial_general(3.0, 5) == 0.0


def test_binomial_factorial_formula():
    for n in range(41):
        for k in range(n + 1):
            assert binomial_general(n, k) == math.comb(n, k)


def test_binomial_float_matches_exact():
    for top2 in range(-21, 400, 7):
        top = Fraction(top2, 2)
        for k in (0, 1, 5, 17, 40):
            ex = binomial_general(top, k)
            fl = binomial_general(float(top), k)
            assert fl == pytest.approx(float(ex), rel=1e-12, abs=1e-300)


def test_binomial_float_large_top_no_overflow():
    v = binomial_general(600.5, 300)
    assert math.isfinite(v) and v > 0


def test_binomial_rejects_negative_k():
    with pytest.raises(ValueError):
        binomial_general(3, -1)


def test_half_and_exactness():
    assert half(7) == Fraction(7, 2)
    assert is_exact(Fraction(1, 2)) and is_exact(3) and not is_exact(0.5)


def test_jacobi_examples():
    xs = np.linspace(-1, 1, 9)
    assert np.all(jacobi_eval(0, 2.3, xs) == 1.0)
    np.testing.assert_allclose(jacobi_eval(1, 0.0, xs), xs, atol=1e-15)
    # P_2^{(1,0)}(x) = (5 x^2 + 2 x - 1) / 2, expanded symbolically
    assert jacobi_eval(2, 1.0, 0.5) == pytest.approx(5 / 8, rel=1e-14)


def test_jacobi_legendre_against_numpy():
    x = np.linspace(-1, 1, 31)
    for k in range(12):
        ref = np.polynomial.legendre.legval(x, [0] * k + [1])
        np.testing.assert_allclose(jacobi_eval(k, 0.0, x), ref, atol=1e-13)


def test_jacobi_against_scipy_oracle():
    from scipy.special import eval_jacobi

    rng = np.random.default_rng(5)
    for _ in range(100):
        k = int(rng.integers(0, 40))
        a = float(rng.uniform(-0.9, 20))
        x = float(rng.uniform(-1, 1))
        ref = eval_jacobi(k, a, 0.0, x)
        assert jacobi_eval(k, a, x) == pytest.approx(ref, rel=1e-11, abs=1e-11)


def test_jacobi_recurrence_residual():
    rng = np.random.default_rng(1)
    for _ in range(100):
        n = int(rng.integers(1, 40))
        a = float(rng.uniform(-0.5, 15))
        x = float(rng.uniform(-1, 1))
        P = jacobi_all(n + 1, a, np.array(x))
        s = 2 * n + a
        c1 = 2 * (n + 1) * (n + a + 1) * s
        c2 = (s + 1) * (s * (s + 2) * x + a * a)
        c3 = 2 * (n + a) * n * (s + 2)
        res = c1 * P[n + 1] - c2 * P[n] + c3 * P[n - 1]
        scale = abs(c1 * P[n + 1]) + abs(c2 * P[n]) + abs(c3 * P[n - 1])
        assert abs(res) <= 1e-13 * scale
