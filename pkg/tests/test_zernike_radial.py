import math
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from zernstab.zernike_radial import (
    RadialIndex,
    _F,
    _Ftilde,
    boundary_derivative,
    build_radial,
    eigenvalue,
    eval_radial,
    eval_radial_exact,
    eval_radial_monomial,
    monomial_expansion,
    monomial_expansion_exact,
    normalizer,
    pochhammer_form_coeffs,
    radial_table,
    sturm_liouville_residual,
    zernike_2d_coeffs,
    zernike_3d_coeffs,
)

dims = st.integers(2, 9)
small = st.integers(0, 8)


def gl_inner(d, f, g, n=80):
    # Gauss-Legendre on [0,1] with the weight applied explicitly; independent of radial_rule
    x, w = np.polynomial.legendre.leggauss(n)
    r = 0.5 * (x + 1)
    return 0.5 * np.sum(w * f(r) * g(r) * r ** (d - 1))


def test_index_validation():
    with pytest.raises(ValueError):
        RadialIndex(1, 0, 0)
    with pytest.raises(ValueError):
        RadialIndex(2, -1, 0)
    with pytest.raises(ValueError):
        RadialIndex(2, 0, -1)
    assert RadialIndex(3, 2, 1).degree == 4
    assert RadialIndex(3, 2, 1).norm_sq == 11


def test_build_examples():
    p = build_radial(RadialIndex(2, 0, 0))
    assert p.coeffs == (1,) and p.norm_sq == 2
    assert p.normalizer == pytest.approx(math.sqrt(2))
    p = build_radial(RadialIndex(2, 0, 1))
    # sqrt(6) (2 r^2 - 1)
    assert p.coeffs == (-1, 2) and p.norm_sq == 6
    assert gl_inner(2, lambda r: eval_radial(p, r), lambda r: eval_radial(p, r)) == pytest.approx(1, abs=1e-14)
    p = build_radial(RadialIndex(3, 1, 0))
    assert p.coeffs == (1,) and p.norm_sq == 5
    assert gl_inner(3, lambda r: 5 * r * r, lambda r: 1 + 0 * r) == pytest.approx(1, abs=1e-14)


def test_eval_examples():
    p = build_radial(RadialIndex(2, 0, 1))
    assert eval_radial(p, 1 / math.sqrt(2)) == pytest.approx(0, abs=1e-15)
    for d in range(2, 9):
        r = np.linspace(0, 1, 7)
        np.testing.assert_allclose(eval_radial(RadialIndex(d, 0, 0), r), math.sqrt(d), rtol=1e-15)


def test_eval_domain():
    p = RadialIndex(2, 1, 1)
    for bad in (-0.1, 1.0000001, float("nan")):
        with pytest.raises(ValueError):
            eval_radial(p, bad)
    with pytest.raises(ValueError):
        eval_radial_exact(build_radial(p), Fraction(3, 2))


def test_eigenvalue_examples():
    assert eigenvalue(RadialIndex(5, 0, 0)) == 0
    assert eigenvalue(RadialIndex(2, 1, 1)) == 15
    assert eigenvalue(RadialIndex(3, 2, 0)) == 10
    assert build_radial(RadialIndex(2, 1, 1)).eigenvalue == 15


def test_boundary_derivative_examples():
    for d in (2, 3, 7):
        assert boundary_derivative(build_radial(RadialIndex(d, 0, 0))) == 0
    assert boundary_derivative(build_radial(RadialIndex(2, 0, 1))) == pytest.approx(4 * math.sqrt(6))
    assert boundary_derivative(build_radial(RadialIndex(2, 1, 0))) == pytest.approx(2)


def test_monomial_expansion_examples():
    np.testing.assert_allclose(monomial_expansion(2, 0, 0), [1 / math.sqrt(2)])
    np.testing.assert_allclose(monomial_expansion(2, 0, 1), [math.sqrt(2) / 4, math.sqrt(6) / 12])
    # brute-force inner products
    for k, chi in enumerate(monomial_expansion(2, 0, 1)):
        ip = gl_inner(2, lambda r: r**2, lambda r, k=k: eval_radial(RadialIndex(2, 0, k), r))
        assert ip == pytest.approx(chi, abs=1e-14)
    with pytest.raises(ValueError):
        monomial_expansion(1, 0, 0)


@given(dims, small, small)
def test_monomial_k0_entry(d, l, p):
    assert monomial_expansion(d, l, p)[0] == pytest.approx(math.sqrt(2 * l + d) / (2 * p + 2 * l + d), rel=1e-14)


def test_sturm_liouville_examples():
    p = build_radial(RadialIndex(2, 0, 0))
    assert sturm_liouville_residual(p, 0.5) == 0
    p = build_radial(RadialIndex(2, 0, 1))
    assert abs(sturm_liouville_residual(p, 0.3)) < 1e-14
    p = build_radial(RadialIndex(3, 2, 2))
    assert sturm_liouville_residual(p, 0.7, relative=True) < 1e-9
    with pytest.raises(ValueError):
        sturm_liouville_residual(p, 1.0)


def test_sturm_liouville_symbolic_oracle():
    r = sp.symbols("r", positive=True)
    for d, l, k in [(2, 0, 1), (3, 2, 2), (4, 1, 3), (7, 3, 2)]:
        poly = build_radial(RadialIndex(d, l, k))
        R = sum(sp.Rational(c.numerator, c.denominator) * r ** int(q) for c, q in zip(poly.coeffs, poly.powers))
        expr = sp.diff(r ** (d - 1) * (1 - r**2) * sp.diff(R, r), r) - l * (l + d - 2) * r ** (d - 3) * R
        expr += poly.eigenvalue * r ** (d - 1) * R
        assert sp.expand(expr) == 0


@given(dims, small, small)
def test_structure_invariants(d, l, k):
    poly = build_radial(RadialIndex(d, l, k))
    assert poly.degree == l + 2 * k
    assert list(poly.powers) == [l + 2 * q for q in range(k + 1)]
    assert poly.boundary_value == pytest.approx(math.sqrt(2 * l + 4 * k + d))
    assert sum(poly.coeffs) == 1  # R(1) = sqrt(norm_sq) exactly
    assert (poly.normalizer > 0) == (k % 2 == 0)
    assert poly.normalizer == pytest.approx(normalizer(RadialIndex(d, l, k)))
    # leading coefficient of R is the lowest power's coefficient times the root: C_{l,k}
    assert poly.coeffs[0] == poly.normalizer_rational


@given(dims, small, small, small)
def test_orthonormality_independent_rule(d, l, k1, k2):
    ip = gl_inner(
        d, lambda r: eval_radial(RadialIndex(d, l, k1), r), lambda r: eval_radial(RadialIndex(d, l, k2), r)
    )
    assert ip == pytest.approx(float(k1 == k2), abs=1e-12)


def test_radial_table_matches_single():
    r = np.linspace(0, 1, 33)
    T = radial_table(4, 3, 10, r)
    for k in range(11):
        np.testing.assert_allclose(T[k], eval_radial(RadialIndex(4, 3, k), r), rtol=1e-14, atol=1e-14)


def test_monomial_path_low_degree():
    r = np.linspace(0, 1, 21)
    for d, l, k in [(2, 0, 3), (3, 4, 2), (5, 1, 5)]:
        poly = build_radial(RadialIndex(d, l, k))
        np.testing.assert_allclose(eval_radial_monomial(poly, r), eval_radial(poly, r), atol=1e-11)


def test_jacobi_vs_exact_monomial_high_degree():
    rs = [Fraction(i, 10) for i in range(11)]
    for d in (2, 3):
        for l, k in [(0, 30), (20, 20), (58, 1), (1, 29)]:
            poly = build_radial(RadialIndex(d, l, k))
            ref = np.array([eval_radial_exact(poly, x) for x in rs])
            got = eval_radial(poly, np.array([float(x) for x in rs]))
            assert np.max(np.abs(got - ref)) <= 1e-10 * poly.boundary_value


def test_pochhammer_form_equals_sum_form():
    for d in (2, 3, 6):
        for l in range(6):
            for k in range(6):
                idx = RadialIndex(d, l, k)
                assert pochhammer_form_coeffs(idx) == build_radial(idx).coeffs


def test_2d_and_3d_explicit_forms():
    for j in range(-6, 7):
        for k in range(6):
            assert zernike_2d_coeffs(j, k, 1) == zernike_2d_coeffs(j, k, 2)
            assert tuple(zernike_2d_coeffs(j, k)[::-1]) == build_radial(RadialIndex(2, abs(j), k)).coeffs
    for l in range(6):
        for k in range(6):
            assert zernike_3d_coeffs(l, k)[::-1] == build_radial(RadialIndex(3, l, k)).coeffs
    with pytest.raises(ValueError):
        zernike_2d_coeffs(1, 1, form=3)


def test_monomial_expansion_exact_roundtrip():
    for d in (2, 3, 5):
        for l in range(4):
            for p in range(5):
                q = monomial_expansion_exact(d, l, p)
                acc = [Fraction(0)] * (p + 1)
                for k in range(p + 1):
                    poly = build_radial(RadialIndex(d, l, k))
                    for i, c in enumerate(poly.coeffs):
                        acc[i] += q[k] * c * poly.norm_sq
                assert acc == [0] * p + [1]


def test_hypergeometric_factors():
    # R = C r^l F_k(r^2) with F_k(1) = (-1)^k / binom(l+k+(d-2)/2, k)
    for d in (2, 3):
        for l in range(4):
            for k in range(4):
                poly = build_radial(RadialIndex(d, l, k))
                F = _F(d, l, k)
                assert all(isinstance(c, Fraction) for c in F)
                assert [poly.normalizer_rational * c for c in F] == list(poly.coeffs)
    assert _Ftilde(2, 0, 0) == []
