"""
Radial Zernike polynomials in any dimension
===========================================

Build a few radial polynomials, look at their exact coefficients, and
check orthonormality against the weight r^(d-1).
"""
import numpy as np

from zernstab import RadialIndex, build_radial, eval_radial
from zernstab.quadrature import nodes_for_degree, radial_rule
from zernstab.zernike_radial import monomial_expansion, radial_table

# The 2D polynomial with l = 0, k = 1 is sqrt(6) (2 r^2 - 1).
poly = build_radial(RadialIndex(d=2, l=0, k=1))
print("coefficients of r^0, r^2:", poly.coeffs, "times sqrt", poly.norm_sq)
print("C =", poly.normalizer, " mu =", poly.eigenvalue, " R(1) =", poly.boundary_value)

# Odd dimensions give half-integer binomials, still exact rationals.
print("d=3, l=1, k=2:", build_radial(RadialIndex(3, 1, 2)).coeffs)

# Evaluation runs through the Jacobi recurrence, which stays accurate at high degree.
r = np.linspace(0, 1, 5)
print("R_{3,20}(r) in d=7:", eval_radial(RadialIndex(7, 3, 20), r))

# Gram matrix for l = 4, k <= 12 in d = 5 with an exactness-matched Gauss rule.
rule = radial_rule(5, nodes_for_degree(2 * (4 + 2 * 12)))
R = radial_table(5, 4, 12, rule.nodes)
G = (R * rule.weights) @ R.T
print("max |G - I| =", np.abs(G - np.eye(13)).max())

# Monomials expand in finitely many radial polynomials.
chi = monomial_expansion(3, 2, 4)
x = np.linspace(0, 1, 7)
print("r^10 reconstruction error:", np.abs(chi @ radial_table(3, 2, 4, x) - x**10).max())
