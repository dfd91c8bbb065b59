"""General d-dimensional Zernike bases and Lipschitz-stability tools for the Calderon problem."""
from .harmonics import addition_constant, dim_harmonic, eval_harmonic, lb_eigenvalue, linf_bound, surface_measure
from .quadrature import ball_inner_product, circle_rule, radial_rule, sphere_rule
from .specfun import binomial_general, jacobi_eval, pochhammer
from .stability import (
    BasisIndex,
    CoefficientField,
    bound_ank,
    class_membership,
    extract_epsilon,
    interior_boundary_norms,
    max_principle_check,
    trace_expansion,
    verify_core_inequality,
    weighted_l1_norm,
)
from .zernike_radial import (
    RadialIndex,
    RadialPolynomial,
    boundary_derivative,
    build_radial,
    eigenvalue,
    eval_radial,
    monomial_expansion,
    sturm_liouville_residual,
)

__version__ = "0.1.0"
