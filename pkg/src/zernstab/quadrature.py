"""Quadrature rules on [0, 1] with weight r^{d-1}, on the circle, on S^2, and on the ball."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

__all__ = [
    "QuadratureRule",
    "radial_rule",
    "circle_rule",
    "sphere_rule",
    "ball_rule",
    "ball_inner_product",
    "nodes_for_degree",
]


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    exactness_degree: int
    weight_description: str

    def __post_init__(self):
        if np.any(self.weights <= 0):
            raise ValueError("quadrature weights must be positive")

    def integrate(self, values) -> complex | float:
        """Apply the rule to function values sampled at :attr:`nodes` (on axis 0)."""
        return np.tensordot(self.weights, values, axes=(0, 0))


def nodes_for_degree(degree: int) -> int:
    """Gauss node count exact for polynomials of `degree`, with margin."""
    return degree // 2 + 2


def radial_rule(d: int, n_nodes: int) -> QuadratureRule:
    """Gauss rule for ``int_0^1 p(r) r^{d-1} dr``, exact for ``deg p <= 2 n - 1``.

    Built from Gauss-Jacobi nodes on ``[-1, 1]`` with weight ``(1+x)^{d-1}``
    under ``r = (1 + x) / 2``, which keeps odd powers of ``r`` exact.
    """
    if n_nodes < 1:
        raise ValueError("n_nodes must be >= 1")
    x, w = roots_jacobi(n_nodes, 0.0, float(d - 1))
    if np.any(w <= 0) or not np.all(np.isfinite(w)):
        raise FloatingPointError(f"Gauss-Jacobi construction lost positivity at n={n_nodes}")
    r = 0.5 * (1.0 + x)
    w = w / 2.0**d
    return QuadratureRule(r, w, 2 * n_nodes - 1, f"radial-power r^{d - 1}")


def circle_rule(n_nodes: int) -> QuadratureRule:
    """Trapezoid rule on ``[0, 2 pi)``; exact for ``e^{ij theta}`` with ``|j| < n``."""
    theta = 2.0 * math.pi * np.arange(n_nodes) / n_nodes
    w = np.full(n_nodes, 2.0 * math.pi / n_nodes)
    return QuadratureRule(theta, w, n_nodes - 1, "uniform-circle")


def sphere_rule(n_polar: int, n_azimuth: int | None = None) -> QuadratureRule:
    """Gauss-Legendre in ``cos theta`` times trapezoid in ``phi``; nodes are 3-vectors.

    Exact for spherical polynomials of degree ``<= min(2 n_polar - 1, n_azimuth - 1)``.
    """
    if n_azimuth is None:
        n_azimuth = 2 * n_polar
    ct, wt = roots_legendre(n_polar)
    phi = 2.0 * math.pi * np.arange(n_azimuth) / n_azimuth
    CT, PHI = np.meshgrid(ct, phi, indexing="ij")
    ST = np.sqrt(1.0 - CT * CT)
    pts = np.stack([ST * np.cos(PHI), ST * np.sin(PHI), CT], axis=-1).reshape(-1, 3)
    w = (wt[:, None] * np.full(n_azimuth, 2.0 * math.pi / n_azimuth)[None, :]).ravel()
    return QuadratureRule(pts, w, min(2 * n_polar - 1, n_azimuth - 1), "sphere-product")


def _angular_points(d: int, angular_nodes: int) -> tuple[np.ndarray, np.ndarray]:
    if d == 2:
        rule = circle_rule(angular_nodes)
        pts = np.stack([np.cos(rule.nodes), np.sin(rule.nodes)], axis=-1)
        return pts, rule.weights
    if d == 3:
        rule = sphere_rule(angular_nodes)
        return rule.nodes, rule.weights
    raise NotImplementedError("ball integration supports d in (2, 3)")


def ball_rule(d: int, radial_nodes: int, angular_nodes: int) -> tuple[np.ndarray, np.ndarray]:
    """Tensor rule on the unit ball: returns points ``(N, d)`` and weights ``(N,)``."""
    rad = radial_rule(d, radial_nodes)
    ang_pts, ang_w = _angular_points(d, angular_nodes)
    pts = (rad.nodes[:, None, None] * ang_pts[None, :, :]).reshape(-1, d)
    w = (rad.weights[:, None] * ang_w[None, :]).ravel()
    return pts, w


def ball_inner_product(
    d: int,
    f: Callable[[np.ndarray], np.ndarray],
    g: Callable[[np.ndarray], np.ndarray],
    radial_nodes: int,
    angular_nodes: int,
) -> complex:
    """``<f, g>_{L^2(B)} = int_B f conj(g) dx`` by the tensor rule of :func:`ball_rule`.

    `f` and `g` take an ``(N, d)`` array of points and return ``(N,)`` values.
    """
    pts, w = ball_rule(d, radial_nodes, angular_nodes)
    return complex(np.sum(w * f(pts) * np.conj(g(pts))))
