"""Radial Zernike polynomials on the unit ball of R^d.

``R_{l,k}(r) = C_{l,k} r^l 2F1(-k, l+k+d/2; l+d/2; r^2)`` is a polynomial of degree
``l + 2k``, orthonormal in ``L^2([0,1], r^{d-1} dr)`` for fixed ``l``, with
``R_{l,k}(1) = sqrt(2l + 4k + d)``.

Coefficients are stored exactly. Every coefficient carries the common factor
``sqrt(2l + 4k + d)``, so a :class:`RadialPolynomial` keeps rational coefficients
plus the integer under the root (``norm_sq``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .specfun import binomial_general, jacobi_all, pochhammer

__all__ = [
    "RadialIndex",
    "RadialPolynomial",
    "build_radial",
    "eval_radial",
    "eval_radial_monomial",
    "eval_radial_exact",
    "radial_table",
    "eigenvalue",
    "normalizer",
    "monomial_expansion",
    "monomial_expansion_exact",
    "sturm_liouville_residual",
    "boundary_derivative",
    "zernike_2d_coeffs",
    "zernike_3d_coeffs",
    "pochhammer_form_coeffs",
]


@dataclass(frozen=True)
class RadialIndex:
    d: int
    l: int
    k: int

    def __post_init__(self):
        if self.d < 2:
            raise ValueError(f"dimension must be >= 2, got {self.d}")
        if self.l < 0 or self.k < 0:
            raise ValueError(f"indices must be nonnegative, got l={self.l}, k={self.k}")

    @property
    def degree(self) -> int:
        return self.l + 2 * self.k

    @property
    def norm_sq(self) -> int:
        """``2l + 4k + d``, the square of the boundary value."""
        return 2 * self.l + 4 * self.k + self.d

    @property
    def alpha(self) -> float:
        """Jacobi parameter ``l + d/2 - 1``."""
        return self.l + self.d / 2 - 1


@dataclass(frozen=True)
class RadialPolynomial:
    """Radial Zernike polynomial with exact coefficients.

    ``coeffs[q]`` multiplies ``sqrt(norm_sq) * r^(l + 2q)`` for ``q = 0..k``.
    """

    index: RadialIndex
    coeffs: tuple[Fraction, ...]
    normalizer_rational: Fraction
    eigenvalue: int
    norm_sq: int
    float_coeffs: np.ndarray = field(repr=False, compare=False)

    @property
    def normalizer(self) -> float:
        """``C_{l,k}``; carries the sign ``(-1)^k``."""
        return float(self.normalizer_rational) * math.sqrt(self.norm_sq)

    @property
    def boundary_value(self) -> float:
        return math.sqrt(self.norm_sq)

    @property
    def powers(self) -> np.ndarray:
        return self.index.l + 2 * np.arange(self.index.k + 1)

    @property
    def degree(self) -> int:
        return self.index.degree


def eigenvalue(index: RadialIndex) -> int:
    """Zernike operator eigenvalue ``(l+2k)(l+2k+d)``."""
    n = index.l + 2 * index.k
    return n * (n + index.d)


def _half_shift(d: int) -> Fraction:
    # (d - 2) / 2, exact
    return Fraction(d - 2, 2)


def normalizer(index: RadialIndex, exact: bool = False):
    """``C_{l,k} = (-1)^k sqrt(2l+4k+d) binom(l+k+(d-2)/2, k)``.

    With ``exact=True`` the rational part is returned (without the root).
    """
    b = binomial_general(index.l + index.k + _half_shift(index.d), index.k)
    rational = (-1) ** index.k * b
    if exact:
        return rational
    return float(rational) * math.sqrt(index.norm_sq)


@lru_cache(maxsize=4096)
def _coeffs(d: int, l: int, k: int) -> tuple[Fraction, ...]:
    # summation over s = k - q, so coefficient of r^(l + 2q) has s = k - q
    shift = _half_shift(d)
    out = []
    for q in range(k + 1):
        s = k - q
        c = (-1) ** s * math.comb(k, s) * binomial_general(l + 2 * k - s + shift, k)
        out.append(Fraction(c))
    return tuple(out)


def build_radial(index: RadialIndex) -> RadialPolynomial:
    """Construct ``R_{l,k}`` with exact coefficients."""
    coeffs = _coeffs(index.d, index.l, index.k)
    root = math.sqrt(index.norm_sq)
    return RadialPolynomial(
        index=index,
        coeffs=coeffs,
        normalizer_rational=normalizer(index, exact=True),
        eigenvalue=eigenvalue(index),
        norm_sq=index.norm_sq,
        float_coeffs=np.array([float(c) * root for c in coeffs]),
    )


def pochhammer_form_coeffs(index: RadialIndex) -> tuple[Fraction, ...]:
    """Rational coefficients from the Pochhammer (hypergeometric) representation.

    Same normalization as :attr:`RadialPolynomial.coeffs`: the returned values
    multiply ``sqrt(2l+4k+d) r^(l+2q)``.
    """
    d, l, k = index.d, index.l, index.k
    b = Fraction(l + k) + Fraction(d, 2)
    c = Fraction(l) + Fraction(d, 2)
    cnorm = normalizer(index, exact=True)
    return tuple(
        cnorm * (-1) ** q * math.comb(k, q) * pochhammer(b, q) / pochhammer(c, q)
        for q in range(k + 1)
    )


def _check_r(r) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    if np.any(r < 0) or np.any(r > 1) or np.any(~np.isfinite(r)):
        raise ValueError("radial argument must lie in [0, 1]")
    return r


def eval_radial(poly: RadialPolynomial | RadialIndex, r):
    """Evaluate ``R_{l,k}(r)`` through the Jacobi recurrence.

    ``R_{l,k}(r) = (-1)^k sqrt(2l+4k+d) r^l P_k^{(l+d/2-1, 0)}(1 - 2r^2)``;
    this is stable at high degree where the monomial sum cancels badly.
    """
    index = poly.index if isinstance(poly, RadialPolynomial) else poly
    r = _check_r(r)
    P = jacobi_all(index.k, index.alpha, 1.0 - 2.0 * r * r)[index.k]
    out = (-1) ** index.k * math.sqrt(index.norm_sq) * r**index.l * P
    return out if out.ndim else float(out)


def radial_table(d: int, l: int, kmax: int, r) -> np.ndarray:
    """All ``R_{l,k}(r)`` for ``k = 0..kmax`` in one recurrence pass, shape ``(kmax+1, ...)``."""
    r = _check_r(r)
    P = jacobi_all(kmax, l + d / 2 - 1, 1.0 - 2.0 * r * r)
    ks = np.arange(kmax + 1)
    scale = (-1.0) ** ks * np.sqrt(2 * l + 4 * ks + d)
    scale = scale.reshape((-1,) + (1,) * r.ndim)
    return scale * r**l * P


def eval_radial_monomial(poly: RadialPolynomial, r):
    """Direct floating-point monomial summation; accurate only at low degree."""
    r = _check_r(r)
    out = np.zeros_like(r)
    for c, p in zip(poly.float_coeffs[::-1], poly.powers[::-1]):
        out = out + c * r**p
    return out if out.ndim else float(out)


def eval_radial_exact(poly: RadialPolynomial, r) -> float:
    """Monomial sum in rational arithmetic at rational `r`, rounded once at the end."""
    r = Fraction(r)
    if not 0 <= r <= 1:
        raise ValueError("radial argument must lie in [0, 1]")
    s = sum(c * r ** int(p) for c, p in zip(poly.coeffs, poly.powers))
    return float(s) * math.sqrt(poly.norm_sq)


def monomial_expansion_exact(d: int, l: int, p: int) -> list[Fraction]:
    """Rational parts of ``chi_{l,k,p}``; the full value is this times ``sqrt(2l+4k+d)``."""
    shift = _half_shift(d)
    return [
        Fraction(1, 2 * p + 2 * l + 2 * k + d)
        * math.comb(p, k)
        / binomial_general(p + l + k + shift, k)
        for k in range(p + 1)
    ]


def monomial_expansion(d: int, l: int, p: int) -> np.ndarray:
    """Coefficients ``chi_{l,k,p}``, ``k = 0..p``, with ``r^(l+2p) = sum_k chi_k R_{l,k}(r)``."""
    if d < 2 or l < 0 or p < 0:
        raise ValueError("need d >= 2 and l, p >= 0")
    return np.array(
        [
            float(q) * math.sqrt(2 * l + 4 * k + d)
            for k, q in enumerate(monomial_expansion_exact(d, l, p))
        ]
    )


def sturm_liouville_residual(poly: RadialPolynomial, r, relative: bool = False):
    """Residual of ``(r^{d-1}(1-r^2) R')' + lambda_l r^{d-3} R + mu r^{d-1} R``.

    The operator is applied termwise to the monomial representation. With
    ``relative=True`` the residual is divided by the sum of absolute term
    magnitudes, which is the natural scale given binomial coefficient growth.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0) or np.any(r >= 1):
        raise ValueError("residual is evaluated on the open interval (0, 1)")
    d, l = poly.index.d, poly.index.l
    lam = -l * (l + d - 2)
    mu = poly.eigenvalue
    res = np.zeros_like(r)
    scale = np.zeros_like(r)
    for c, p in zip(poly.float_coeffs, poly.powers):
        p = int(p)
        lo = c * (p * (p + d - 2) + lam) * r ** (p + d - 3)
        hi = c * (mu - p * (p + d)) * r ** (p + d - 1)
        # lo/hi are each sums of several physical terms; track their raw sizes
        res = res + lo + hi
        scale = scale + abs(c) * (
            (p * (p + d - 2) + abs(lam)) * r ** (p + d - 3) + (mu + p * (p + d)) * r ** (p + d - 1)
        )
    if relative:
        res = np.abs(res) / np.where(scale > 0, scale, 1.0)
    return res if res.ndim else float(res)


def boundary_derivative(poly: RadialPolynomial) -> float:
    """``dR/dr`` at ``r = 1``, from the exact coefficients."""
    s = sum(c * int(p) for c, p in zip(poly.coeffs, poly.powers))
    return float(s) * math.sqrt(poly.norm_sq)


def zernike_2d_coeffs(j: int, k: int, form: int = 1) -> tuple[int, ...]:
    """Integer coefficients of the 2D radial part in one of its two classical forms.

    Entry ``s`` multiplies ``sqrt(2|j|+4k+2) r^(|j|+2k-2s)``. ``form=1`` uses
    ``binom(k,s) binom(|j|+2k-s, k)``; ``form=2`` the optics-style
    ``binom(|j|+2k-s, s) binom(|j|+2k-2s, k-s)``.
    """
    a = abs(j)
    if form == 1:
        return tuple((-1) ** s * math.comb(k, s) * math.comb(a + 2 * k - s, k) for s in range(k + 1))
    if form == 2:
        return tuple(
            (-1) ** s * math.comb(a + 2 * k - s, s) * math.comb(a + 2 * k - 2 * s, k - s)
            for s in range(k + 1)
        )
    raise ValueError("form must be 1 or 2")


def zernike_3d_coeffs(l: int, k: int) -> tuple[Fraction, ...]:
    """Rational coefficients of the 3D radial part, indexed by ``s`` (power ``l+2k-2s``)."""
    return tuple(
        (-1) ** s * math.comb(k, s) * binomial_general(Fraction(2 * (l + 2 * k - s) + 1, 2), k)
        for s in range(k + 1)
    )


# --- hypergeometric factors used only by the identity checks ---------------------

def _hyp_coeffs(a: int, b: Fraction, c: Fraction) -> list[Fraction]:
    # terminating 2F1(-a, b; c; z) as coefficients in z
    return [
        Fraction(pochhammer(Fraction(-a), q) * pochhammer(b, q)) / (pochhammer(c, q) * math.factorial(q))
        for q in range(a + 1)
    ]


def _F(d: int, l: int, k: int) -> list[Fraction]:
    """``F_k = 2F1(-k, l+k+d/2; l+d/2; z)`` in powers of ``z = r^2``."""
    return _hyp_coeffs(k, Fraction(l + k) + Fraction(d, 2), Fraction(l) + Fraction(d, 2))


def _Ftilde(d: int, l: int, k: int) -> list[Fraction]:
    """``F~_k = 2F1(-(k-1), l+k+d/2; l+d/2; z)``."""
    return _hyp_coeffs(k - 1, Fraction(l + k) + Fraction(d, 2), Fraction(l) + Fraction(d, 2))
