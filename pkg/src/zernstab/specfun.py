"""Special-function kernels: Pochhammer symbols, generalized binomials, Jacobi polynomials.

Two arithmetic modes are supported. Exact mode works on :class:`fractions.Fraction`
(integers and half-integers such as ``d/2`` are represented exactly), floating
mode works on Python floats / numpy arrays and computes large binomials through
``lgamma`` with explicit sign tracking.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

import numpy as np

__all__ = [
    "half",
    "is_exact",
    "pochhammer",
    "binomial_general",
    "jacobi_eval",
    "jacobi_all",
]


def half(twice_value: int) -> Fraction:
    """Exact half-integer ``twice_value / 2``."""
    return Fraction(int(twice_value), 2)


def is_exact(x) -> bool:
    return isinstance(x, Rational)


def pochhammer(x, q: int):
    """Rising factorial ``x (x+1) ... (x+q-1)``.

    Exact when `x` is an int or Fraction, float otherwise.
    """
    if q < 0:
        raise ValueError("pochhammer requires q >= 0")
    out = 1 if is_exact(x) else 1.0
    for i in range(q):
        out *= x + i
    return out


def _is_int(x) -> bool:
    if isinstance(x, Rational):
        return Fraction(x).denominator == 1
    return float(x).is_integer()


def _gamma_sign(x: float) -> int:
    # sign of Gamma(x) for x not a nonpositive integer
    if x > 0:
        return 1
    return -1 if math.floor(x) % 2 else 1


def binomial_general(top, k: int, exact: bool | None = None):
    """Generalized binomial coefficient ``top (top-1) ... (top-k+1) / k!``.

    Parameters
    ----------
    top : int, Fraction or float
        Upper argument; integral or half-integral in all uses in this package.
    k : int
        Lower argument, ``k >= 0``.
    exact : bool, optional
        Force exact (Fraction) or floating evaluation. Defaults to exact for
        rational `top` and floating otherwise.

    Notes
    -----
    For a nonnegative integer ``top < k`` the result is zero, which the
    falling-factorial definition gives automatically. The floating path uses
    ``lgamma`` so that ``top`` in the hundreds does not overflow intermediates.
    """
    if k < 0:
        raise ValueError("binomial_general requires k >= 0")
    if exact is None:
        exact = is_exact(top)
    if exact:
        top = Fraction(top)
        return Fraction(pochhammer(top - k + 1, k)) / math.factorial(k)

    t = float(top)
    if k == 0:
        return 1.0
    lo = t - k + 1
    # a zero factor or a pole in Gamma(lo) / Gamma(t+1): use the direct product
    if _is_int(lo) and lo <= 0 or _is_int(t) and t < 0:
        return float(pochhammer(lo, k)) / math.factorial(k)
    sign = _gamma_sign(t + 1) * _gamma_sign(lo)
    logval = math.lgamma(t + 1) - math.lgamma(lo) - math.lgamma(k + 1)
    return sign * math.exp(logval)


def jacobi_all(kmax: int, alpha: float, x):
    """Values of ``P_k^{(alpha,0)}(x)`` for ``k = 0..kmax``, stacked on axis 0.

    Uses the standard three-term recurrence with ``beta = 0``.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty((kmax + 1,) + x.shape)
    out[0] = 1.0
    if kmax == 0:
        return out
    a = float(alpha)
    out[1] = 0.5 * (a + 2.0) * x + 0.5 * a
    for n in range(2, kmax + 1):
        s = 2 * n + a
        c1 = 2 * n * (n + a) * (s - 2)
        c2 = (s - 1) * (s * (s - 2) * x + a * a)
        c3 = 2 * (n + a - 1) * (n - 1) * s
        out[n] = (c2 * out[n - 1] - c3 * out[n - 2]) / c1
    return out


def jacobi_eval(k: int, alpha: float, x):
    """Jacobi polynomial ``P_k^{(alpha,0)}(x)`` by three-term recurrence.

    >>> float(jacobi_eval(1, 0.0, 0.3))
    0.3
    """
    if k < 0:
        raise ValueError("degree must be nonnegative")
    if alpha <= -1:
        raise ValueError("alpha must exceed -1")
    vals = jacobi_all(k, alpha, x)[k]
    return vals if vals.ndim else float(vals)
