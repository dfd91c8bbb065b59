"""Spherical harmonics on the unit sphere of R^d.

Dimension counts, Laplace-Beltrami eigenvalues and the sharp sup-norm bound
work for every ``d >= 2``. Pointwise evaluation is available for ``d = 2``
(Fourier modes ``e^{ij theta}/sqrt(2 pi)``, ``l = |j|``) and ``d = 3`` (complex
Laplace harmonics ``Y_l^m`` with the Condon-Shortley phase).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "AngularIndex",
    "SphereGeometry",
    "surface_measure",
    "dim_harmonic",
    "lb_eigenvalue",
    "angular_orders",
    "eval_harmonic",
    "eval_harmonics",
    "normalized_legendre",
    "addition_constant",
    "linf_bound",
    "zonal_witness",
    "random_sphere_points",
]


@dataclass(frozen=True)
class AngularIndex:
    """Spherical harmonic index.

    For ``d = 2`` the order is the Fourier index ``m = j`` with ``|j| = l``;
    for ``d = 3``, ``m`` ranges over ``-l..l``.
    """

    d: int
    l: int
    m: int

    def __post_init__(self):
        if self.d < 2 or self.l < 0:
            raise ValueError("need d >= 2 and l >= 0")
        if self.d == 2 and abs(self.m) != self.l:
            raise ValueError(f"d=2 order must satisfy |m| = l, got l={self.l}, m={self.m}")
        if self.d == 3 and abs(self.m) > self.l:
            raise ValueError(f"d=3 order must satisfy |m| <= l, got l={self.l}, m={self.m}")

    @classmethod
    def from_j(cls, j: int) -> "AngularIndex":
        return cls(2, abs(j), j)


@dataclass(frozen=True)
class SphereGeometry:
    d: int

    @property
    def surface_measure(self) -> float:
        return surface_measure(self.d)


def surface_measure(d: int) -> float:
    """``|S^{d-1}| = 2 pi^{d/2} / Gamma(d/2)``."""
    return 2.0 * math.pi ** (d / 2) / math.gamma(d / 2)


def _binom0(m: int, k: int) -> int:
    # binom with the convention binom(m, k) = 0 for m < k (including m < 0)
    return math.comb(m, k) if m >= k >= 0 else 0


def dim_harmonic(d: int, l: int) -> int:
    """``dim H_l = binom(l+d-1, d-1) - binom(l+d-3, d-1)``."""
    if d < 2 or l < 0:
        raise ValueError("need d >= 2 and l >= 0")
    return _binom0(l + d - 1, d - 1) - _binom0(l + d - 3, d - 1)


def lb_eigenvalue(d: int, l: int) -> int:
    """Laplace-Beltrami eigenvalue ``-l(l+d-2)`` on ``H_l``."""
    return -l * (l + d - 2)


def angular_orders(d: int, l: int) -> list[int]:
    """The order set ``I_l`` used by :func:`eval_harmonic`."""
    if d == 2:
        return [0] if l == 0 else [-l, l]
    if d == 3:
        return list(range(-l, l + 1))
    raise NotImplementedError(f"harmonic evaluation supports d in (2, 3), got d={d}")


def _as_points(d: int, point) -> np.ndarray:
    p = np.asarray(point, dtype=float)
    if d == 2 and (p.ndim == 0 or p.shape[-1] != 2):
        # angles
        p = np.stack([np.cos(p), np.sin(p)], axis=-1)
    if p.shape[-1] != d:
        raise ValueError(f"points must have last dimension {d}")
    nrm = np.linalg.norm(p, axis=-1)
    if np.any(np.abs(nrm - 1.0) > 1e-12):
        raise ValueError("points must lie on the unit sphere")
    return p


def normalized_legendre(lmax: int, x) -> np.ndarray:
    """Orthonormalized associated Legendre functions for ``m >= 0``.

    Returns ``P[l, m]`` such that ``Y_l^m = P[l, m](cos theta) e^{i m phi}`` for
    ``m >= 0`` including the Condon-Shortley phase; entries with ``m > l`` are zero.
    """
    x = np.asarray(x, dtype=float)
    s = np.sqrt(np.clip(1.0 - x * x, 0.0, None))
    P = np.zeros((lmax + 1, lmax + 1) + x.shape)
    P[0, 0] = 1.0 / math.sqrt(4.0 * math.pi)
    for m in range(1, lmax + 1):
        P[m, m] = -math.sqrt((2 * m + 1) / (2 * m)) * s * P[m - 1, m - 1]
    for m in range(0, lmax):
        P[m + 1, m] = math.sqrt(2 * m + 3) * x * P[m, m]
    for m in range(0, lmax + 1):
        for l in range(m + 2, lmax + 1):
            a = math.sqrt((4 * l * l - 1) / (l * l - m * m))
            b = math.sqrt(((l - 1) ** 2 - m * m) / (4 * (l - 1) ** 2 - 1))
            P[l, m] = a * (x * P[l - 1, m] - b * P[l - 2, m])
    return P


def eval_harmonics(d: int, l: int, point) -> np.ndarray:
    """All ``f_{l,m}(point)`` for ``m`` in :func:`angular_orders`, stacked on axis 0."""
    p = _as_points(d, point)
    if d == 2:
        theta = np.arctan2(p[..., 1], p[..., 0])
        return np.stack([np.exp(1j * m * theta) for m in angular_orders(2, l)]) / math.sqrt(2 * math.pi)
    if d == 3:
        ct = np.clip(p[..., 2], -1.0, 1.0)
        phi = np.arctan2(p[..., 1], p[..., 0])
        P = normalized_legendre(l, ct)[l]
        rows = []
        for m in range(-l, l + 1):
            y = P[abs(m)] * np.exp(1j * abs(m) * phi)
            if m < 0:
                # Y_l^{-m} = (-1)^m conj(Y_l^m)
                y = (-1) ** m * np.conj(y)
            rows.append(y)
        return np.stack(rows)
    raise NotImplementedError(f"harmonic evaluation supports d in (2, 3), got d={d}")


def eval_harmonic(index: AngularIndex, point):
    """Orthonormal spherical harmonic ``f_{l,m}`` at unit-sphere points.

    For ``d = 2`` the point may be given as an angle or as a 2-vector.
    """
    orders = angular_orders(index.d, index.l)
    vals = eval_harmonics(index.d, index.l, point)[orders.index(index.m)]
    return vals if np.ndim(vals) else complex(vals)


def addition_constant(d: int, l: int, point):
    """``sum_m |f_{l,m}(x)|^2``; independent of ``x`` and equal to ``dim H_l / |S^{d-1}|``."""
    vals = eval_harmonics(d, l, point)
    out = np.sum(np.abs(vals) ** 2, axis=0)
    return out if np.ndim(out) else float(out)


def linf_bound(d: int, l: int) -> float:
    """Sharp constant ``(dim H_l / |S^{d-1}|)^{1/2}`` in ``||f||_inf <= c ||f||_2``."""
    return math.sqrt(dim_harmonic(d, l) / surface_measure(d))


def zonal_witness(d: int, l: int, x):
    """Reproducing kernel ``v_x = sum_m conj(f_{l,m}(x)) f_{l,m}`` as a callable.

    ``v_x / ||v_x||_2`` attains the bound of :func:`linf_bound` at ``x``.
    """
    coef = np.conj(eval_harmonics(d, l, x))

    def v(y):
        vals = eval_harmonics(d, l, y)
        return np.tensordot(coef, vals, axes=(0, 0))

    return v


def random_sphere_points(d: int, n: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((n, d))
    return g / np.linalg.norm(g, axis=1, keepdims=True)
