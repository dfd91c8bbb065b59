"""
Coefficient fields and stability constants
==========================================

A conductivity difference expanded in the Zernike basis of the ball is a
finite map (l, m, k) -> c. From it we read off the parameter epsilon, the
class flags, and the constants of the Lipschitz estimate. Constants are in
units of the boundary-stability constant, which is a free parameter.
"""
import math

from zernstab import BasisIndex, CoefficientField, class_membership, extract_epsilon, verify_core_inequality
from zernstab.stability import interior_boundary_norms

B = BasisIndex.from_j

# A field living on a single radial index k = 1.
f = CoefficientField(2, {B(0, 1): 1.0, B(3, 1): 0.4, B(-3, 1): 0.4})
rep = class_membership(f)
print("epsilon (inf over all k):     ", rep.epsilon)
print("epsilon (occupied k only):    ", rep.epsilon_occupied)
print("A_k flags:", rep.in_A_k, " constant for k=1:", rep.constant_corollary2)

# Rows whose coefficients share one sign keep the interior norm below eps^-1 times the boundary norm.
g = CoefficientField(2, {B(2, 0): 1.0, B(2, 3): 0.5, B(-1, 2): -2.0})
print(verify_core_inequality(g))

# A row that sums to zero has no admissible epsilon.
h = CoefficientField(2, {B(0, 0): 1.0, B(0, 1): -1.0})
print("cancelling row ->", extract_epsilon(h), class_membership(h).status)

# Mixed signs that do not cancel still admit an epsilon, but the norm inequality can fail.
m = CoefficientField(2, {B(0, 0): 2.0, B(0, 1): -1.0})
inner, bnd = interior_boundary_norms(m)
eps = extract_epsilon(m)
print(f"mixed row: ||f||_B = {inner:.3f}, eps^-1 ||f||_dB = {bnd / eps:.3f}, sqrt(5) = {math.sqrt(5):.3f}")
