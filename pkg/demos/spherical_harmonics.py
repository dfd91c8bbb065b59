"""
Spherical harmonics and the sharp sup-norm bound
================================================

The sum of |f_{l,m}(x)|^2 over an orthonormal basis of degree-l harmonics
does not depend on x. That constant gives the sharp bound
||f||_inf <= (dim H_l / |S^{d-1}|)^{1/2} ||f||_2.
"""
import numpy as np

from zernstab.harmonics import (
    addition_constant,
    dim_harmonic,
    linf_bound,
    random_sphere_points,
    surface_measure,
    zonal_witness,
)
from zernstab.quadrature import sphere_rule

for d in (2, 3, 4, 7):
    print(f"d={d}: dim H_l for l=0..5 ->", [dim_harmonic(d, l) for l in range(6)])

rng = np.random.default_rng(0)
pts = random_sphere_points(3, 5, rng)
print("sum_m |Y_6^m|^2 at five points:", addition_constant(3, 6, pts))
print("13 / (4 pi)                     :", 13 / surface_measure(3))

# The reproducing kernel at x attains the bound at x.
x = pts[0]
v = zonal_witness(3, 6, x)
rule = sphere_rule(10)
norm = np.sqrt(np.sum(rule.weights * np.abs(v(rule.nodes)) ** 2))
print("|v_x(x)| / ||v_x|| =", abs(complex(v(x))) / norm, " bound =", linf_bound(3, 6))
