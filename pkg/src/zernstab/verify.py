"""Numerical verification suites for the radial Zernike polynomials and spherical harmonics.

Each suite returns a list of check records ``{"name", "max_error", "tolerance", "passed", ...}``.
Oracles are independent of the evaluation path under test: Gauss quadrature
for inner products, exact rational arithmetic for identities, finite
differences for eigenrelations.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .harmonics import (
    addition_constant,
    angular_orders,
    dim_harmonic,
    eval_harmonics,
    lb_eigenvalue,
    linf_bound,
    random_sphere_points,
    surface_measure,
    zonal_witness,
)
from .quadrature import circle_rule, nodes_for_degree, radial_rule, sphere_rule
from .specfun import binomial_general
from .zernike_radial import (
    RadialIndex,
    _F,
    _Ftilde,
    boundary_derivative,
    build_radial,
    eval_radial,
    eval_radial_exact,
    monomial_expansion,
    monomial_expansion_exact,
    pochhammer_form_coeffs,
    radial_table,
    sturm_liouville_residual,
    zernike_2d_coeffs,
    zernike_3d_coeffs,
)

__all__ = [
    "SUITES",
    "check_orthonormality",
    "check_boundary_data",
    "check_uniform_bound",
    "check_boundary_sup",
    "check_monomial_expansion",
    "check_sturm_liouville",
    "check_identities_exact",
    "check_identities_float",
    "check_jacobi_vs_monomial",
    "check_explicit_bases",
    "check_harmonic_orthonormality",
    "check_addition_constant",
    "check_sharpness",
    "check_lb_eigenrelation",
    "check_monomial_expansion_exact",
    "DEFAULT_TOLERANCES",
    "run_suite",
]


def _record(name, err, tol, **extra):
    err = float(err)
    return {"name": name, "max_error": err, "tolerance": tol, "passed": bool(err <= tol), **extra}


# --- radial polynomials ------------------------------------------------------------

def check_orthonormality(d: int, l_max: int, k_max: int, tol: float = 1e-10, extra_nodes: int = 0) -> dict:
    """``max |<R_{l,k}, R_{l,k'}> - delta|`` over ``l, k, k' <= caps`` with an exactness-matched rule."""
    worst = 0.0
    rule = radial_rule(d, nodes_for_degree(2 * (l_max + 2 * k_max)) + extra_nodes)
    for l in range(l_max + 1):
        R = radial_table(d, l, k_max, rule.nodes)
        G = (R * rule.weights) @ R.T
        worst = max(worst, float(np.max(np.abs(G - np.eye(k_max + 1)))))
    return _record(f"orthonormality d={d}", worst, tol, nodes=len(rule.nodes))


def check_boundary_data(d: int, l_max: int, k_max: int, tol: float = 1e-12) -> dict:
    """``R(1) = sqrt(2l+4k+d)``, ``sign C = (-1)^k``, ``R'(1) > 0`` except ``l = k = 0``."""
    worst = 0.0
    sign_ok = deriv_ok = True
    for l in range(l_max + 1):
        vals = radial_table(d, l, k_max, np.array(1.0))
        for k in range(k_max + 1):
            idx = RadialIndex(d, l, k)
            target = math.sqrt(idx.norm_sq)
            worst = max(worst, abs(vals[k] - target) / target)
            poly = build_radial(idx)
            sign_ok &= (poly.normalizer > 0) == (k % 2 == 0)
            dr = boundary_derivative(poly)
            deriv_ok &= (dr == 0) if l == k == 0 else (dr > 0)
    rec = _record(f"boundary data d={d}", worst, tol)
    rec.update(sign_ok=bool(sign_ok), derivative_ok=bool(deriv_ok))
    rec["passed"] = rec["passed"] and rec["sign_ok"] and rec["derivative_ok"]
    return rec


def check_uniform_bound(d: int, l_max: int, k_max: int, n_samples: int = 10_000, rel: float = 1e-12) -> dict:
    """``max |R_{l,k}| <= |C_{l,k}| (1 + rel)`` on a sampled grid including both endpoints."""
    r = np.linspace(0.0, 1.0, n_samples)
    worst = -math.inf
    for l in range(l_max + 1):
        R = radial_table(d, l, k_max, r)
        for k in range(k_max + 1):
            c = abs(float(build_radial(RadialIndex(d, l, k)).normalizer_rational)) * math.sqrt(2 * l + 4 * k + d)
            worst = max(worst, float(np.max(np.abs(R[k]))) / c - 1.0)
    return _record(f"uniform bound d={d}", max(worst, 0.0), rel, max_excess=worst)


def check_boundary_sup(d: int, l_max: int, k_max: int, tol: float = 1e-10) -> dict:
    """For each index there is a shell ``[1 - eta, 1]`` on which ``|R|`` peaks at ``r = 1``.

    Only existence per index is tested; eta is found by halving from 1/2.
    """
    worst = 0.0
    etas = []
    for l in range(l_max + 1):
        for k in range(k_max + 1):
            if l == k == 0:
                continue
            idx = RadialIndex(d, l, k)
            top = math.sqrt(idx.norm_sq)
            eta = 0.5
            found = False
            while eta > 1e-8:
                r = np.linspace(1.0 - eta, 1.0, 2001)
                if np.max(np.abs(eval_radial(idx, r))) <= top * (1 + tol):
                    found = True
                    break
                eta /= 2
            etas.append(eta)
            if not found:
                worst = math.inf
    return _record(f"boundary sup attainment d={d}", worst, tol, min_eta=min(etas) if etas else None)


def check_monomial_expansion(d: int, l_max: int, p_max: int, tol: float = 1e-10, extra_nodes: int = 0) -> list[dict]:
    """Reconstruction of ``r^{l+2p}`` from chi and agreement of chi with quadrature inner products."""
    r = np.linspace(0.0, 1.0, 2001)
    rule = radial_rule(d, nodes_for_degree(2 * (l_max + 2 * p_max)) + extra_nodes)
    rec_err = ip_err = 0.0
    for l in range(l_max + 1):
        Rg = radial_table(d, l, p_max, r)
        Rq = radial_table(d, l, p_max, rule.nodes)
        for p in range(p_max + 1):
            chi = monomial_expansion(d, l, p)
            approx = chi @ Rg[: p + 1]
            rec_err = max(rec_err, float(np.max(np.abs(approx - r ** (l + 2 * p)))))
            ip = (Rq[: p + 1] * rule.weights) @ rule.nodes ** (l + 2 * p)
            ip_err = max(ip_err, float(np.max(np.abs(ip - chi))))
    return [
        _record(f"monomial reconstruction d={d}", rec_err, tol),
        _record(f"chi vs quadrature d={d}", ip_err, tol),
    ]


def check_monomial_expansion_exact(d: int, l_max: int, p_max: int) -> dict:
    """``sum_k chi_k R_k = r^{l+2p}`` as an identity of rational polynomials."""
    bad = 0
    for l in range(l_max + 1):
        for p in range(p_max + 1):
            q = monomial_expansion_exact(d, l, p)
            acc = [Fraction(0)] * (p + 1)
            for k in range(p + 1):
                poly = build_radial(RadialIndex(d, l, k))
                n = poly.norm_sq
                for i, c in enumerate(poly.coeffs):
                    acc[i] += q[k] * c * n
            target = [Fraction(0)] * p + [Fraction(1)]
            bad += acc != target
    return _record(f"monomial reconstruction exact d={d}", bad, 0)


def check_sturm_liouville(d: int, l_max: int, k_max: int, n_points: int = 50, tol: float = 1e-9) -> dict:
    r = np.linspace(0.0, 1.0, n_points + 2)[1:-1]
    worst = 0.0
    for l in range(l_max + 1):
        for k in range(k_max + 1):
            poly = build_radial(RadialIndex(d, l, k))
            worst = max(worst, float(np.max(sturm_liouville_residual(poly, r, relative=True))))
    return _record(f"Sturm-Liouville residual d={d}", worst, tol)


# --- hypergeometric identities -----------------------------------------------------

def _padd(a, b, sa=1, sb=1):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return [sa * x + sb * y for x, y in zip(a, b)]


def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _norm_sq_exact(coeffs_z, l: int, d: int) -> Fraction:
    # int_0^1 (r^l F(r^2))^2 r^{d-1} dr for F given in powers of z = r^2
    s = Fraction(0)
    for i, a in enumerate(coeffs_z):
        for j, b in enumerate(coeffs_z):
            s += a * b / (2 * l + 2 * i + 2 * j + d)
    return s


def _identity_defects(d: int, l: int, k: int) -> dict[str, Fraction]:
    """Exact defects of the contiguous relation, derivative relation, norm identity, Chu-Vandermonde."""
    h = Fraction(d - 2, 2)
    Fk = _F(d, l, k)
    out = {}
    # contiguous relation for j = 1..k
    worst = Fraction(0)
    for j in range(1, k + 1):
        lhs = _Ftilde(d, l, j)
        a = (l + 2 * j + h - 1) / (l + j + h)
        b = Fraction(j - 1) / (l + j + h)
        rhs = _padd([a * c for c in _F(d, l, j - 1)], [b * c for c in (_Ftilde(d, l, j - 1) if j > 1 else [])], 1, -1)
        diff = _trim(_padd(lhs, rhs, 1, -1))
        worst = max([worst] + [abs(x) for x in diff])
    out["contiguous"] = worst
    # r d/dr F_k = 2 z dF/dz = -2k (F~_k - F_k)
    lhs = [2 * q * c for q, c in enumerate(Fk)]
    rhs = [-2 * k * c for c in _padd(_Ftilde(d, l, k) if k else [], Fk, 1, -1)]
    out["derivative"] = max([Fraction(0)] + [abs(x) for x in _padd(lhs, rhs, 1, -1)])
    F1 = sum(Fk)
    out["norm"] = abs(_norm_sq_exact(Fk, l, d) - F1 * F1 / (2 * l + 4 * k + d))
    out["chu_vandermonde"] = abs(F1 - Fraction((-1) ** k) / binomial_general(l + k + h, k))
    return out


def check_identities_exact(d: int, l_max: int, k_max: int) -> list[dict]:
    worst: dict[str, Fraction] = {}
    for l in range(l_max + 1):
        for k in range(k_max + 1):
            for name, v in _identity_defects(d, l, k).items():
                worst[name] = max(worst.get(name, Fraction(0)), v)
    return [_record(f"{name} identity exact d={d}", float(v), 0.0, exact=True) for name, v in worst.items()]


def _hyp_float(a: int, b: float, c: float, z):
    """Terminating ``2F1(-a, b; c; z)`` by forward term ratios, plus the sum of ``|terms|``."""
    term = np.ones_like(z)
    s = np.ones_like(z)
    mag = np.ones_like(z)
    for q in range(a):
        term = term * (q - a) * (b + q) / ((c + q) * (q + 1)) * z
        s = s + term
        mag = mag + np.abs(term)
    return s, mag


def check_identities_float(d: int, l_max: int, k_max: int, n_points: int = 50, tol: float = 1e-12) -> list[dict]:
    """Floating-point versions of the identities at sampled radii.

    Errors are relative to the summed magnitude of the series terms, the
    scale at which rounding enters an alternating terminating series.
    """
    r = np.linspace(0.02, 0.98, n_points)
    z = r * r
    h = (d - 2) / 2
    cont = deriv = norm = 0.0
    for l in range(l_max + 1):
        c = l + d / 2
        F = lambda j, zz=z: _hyp_float(j, c + j, c, zz)
        Ft = lambda j, zz=z: _hyp_float(j - 1, c + j, c, zz) if j > 0 else (0 * zz, 0 * zz)
        for k in range(1, k_max + 1):
            for j in range(1, k + 1):
                a = (l + 2 * j + h - 1) / (l + j + h)
                bb = (j - 1) / (l + j + h)
                (lhs, m0), (f1, m1), (f2, m2) = Ft(j), F(j - 1), Ft(j - 1)
                scale = m0 + abs(a) * m1 + abs(bb) * m2
                cont = max(cont, float(np.max(np.abs(lhs - a * f1 + bb * f2) / scale)))
            coef = [float(x) for x in _F(d, l, k)]
            dF = sum(2 * q * cq * z**q for q, cq in enumerate(coef))
            dmag = sum(2 * q * abs(cq) * z**q for q, cq in enumerate(coef))
            (fk, mk), (ftk, mtk) = F(k), Ft(k)
            scale = dmag + 2 * k * (mk + mtk)
            deriv = max(deriv, float(np.max(np.abs(dF + 2 * k * (ftk - fk)) / scale)))
            rule = radial_rule(d, nodes_for_degree(2 * (l + 2 * k)))
            Fq, Mq = _hyp_float(k, c + k, c, rule.nodes**2)
            lhs_n = float(rule.weights @ (Fq * Fq * rule.nodes ** (2 * l)))
            scale_n = float(rule.weights @ (Mq * Mq * rule.nodes ** (2 * l)))
            F1 = float(_hyp_float(k, c + k, c, np.array(1.0))[0])
            norm = max(norm, abs(lhs_n - F1 * F1 / (2 * l + 4 * k + d)) / scale_n)
    return [
        _record(f"contiguous identity float d={d}", cont, tol),
        _record(f"derivative identity float d={d}", deriv, tol),
        _record(f"norm identity quadrature d={d}", norm, tol),
    ]


def check_jacobi_vs_monomial(d: int, max_degree: int = 60, tol: float = 1e-10) -> dict:
    """Jacobi-recurrence values against the monomial sum evaluated in exact arithmetic."""
    rs = [Fraction(i, 16) for i in range(17)]
    rf = np.array([float(x) for x in rs])
    worst = 0.0
    for l in range(max_degree + 1):
        for k in range((max_degree - l) // 2 + 1):
            poly = build_radial(RadialIndex(d, l, k))
            jac = eval_radial(poly, rf)
            ref = np.array([eval_radial_exact(poly, x) for x in rs])
            scale = np.maximum(np.abs(ref), poly.boundary_value)
            worst = max(worst, float(np.max(np.abs(jac - ref) / scale)))
    return _record(f"Jacobi vs monomial d={d}", worst, tol)


def check_explicit_bases(j_max: int = 15, k_max: int = 15) -> list[dict]:
    """The two classical 2D forms agree with each other and with the general formula; same in 3D."""
    bad2 = bad2g = 0
    for j in range(-j_max, j_max + 1):
        for k in range(k_max + 1):
            f1, f2 = zernike_2d_coeffs(j, k, 1), zernike_2d_coeffs(j, k, 2)
            bad2 += f1 != f2
            gen = build_radial(RadialIndex(2, abs(j), k)).coeffs[::-1]
            bad2g += tuple(Fraction(x) for x in f1) != tuple(gen)
    bad3 = badp = 0
    for d in (2, 3, 4, 5):
        for l in range(j_max + 1):
            for k in range(k_max + 1):
                idx = RadialIndex(d, l, k)
                if d == 3:
                    bad3 += zernike_3d_coeffs(l, k) != build_radial(idx).coeffs[::-1]
                badp += pochhammer_form_coeffs(idx) != build_radial(idx).coeffs
    return [
        _record("2D forms agree exactly", bad2, 0),
        _record("2D form matches general d=2", bad2g, 0),
        _record("3D form matches general d=3", bad3, 0),
        _record("Pochhammer form matches summed form", badp, 0),
    ]


# --- spherical harmonics -----------------------------------------------------------

def check_harmonic_orthonormality(d: int, l_max: int = 20, tol: float = 1e-10) -> dict:
    if d == 2:
        rule = circle_rule(4 * l_max + 4)
        pts = np.stack([np.cos(rule.nodes), np.sin(rule.nodes)], axis=1)
    else:
        rule = sphere_rule(l_max + 2, 2 * l_max + 4)
        pts = rule.nodes
    Y = np.concatenate([eval_harmonics(d, l, pts) for l in range(l_max + 1)])
    G = (Y * rule.weights) @ Y.conj().T
    return _record(f"harmonic orthonormality d={d}", np.max(np.abs(G - np.eye(len(G)))), tol, count=len(G))


def check_addition_constant(d: int, l_max: int = 20, n_points: int = 100, seed: int = 0, tol: float = 1e-11) -> dict:
    rng = np.random.default_rng(seed)
    pts = random_sphere_points(d, n_points, rng)
    worst = 0.0
    for l in range(l_max + 1):
        V = addition_constant(d, l, pts)
        worst = max(worst, float(np.max(np.abs(V - dim_harmonic(d, l) / surface_measure(d)))))
    return _record(f"addition constant d={d}", worst, tol)


def check_sharpness(d: int, l_max: int = 20, seed: int = 0, tol: float = 1e-9) -> dict:
    """``v_x / ||v_x||`` reaches ``linf_bound`` at ``x``; ``||v_x||`` by quadrature."""
    rng = np.random.default_rng(seed)
    if d == 2:
        rule = circle_rule(4 * l_max + 4)
        qpts = np.stack([np.cos(rule.nodes), np.sin(rule.nodes)], axis=1)
    else:
        rule = sphere_rule(l_max + 2, 2 * l_max + 4)
        qpts = rule.nodes
    worst = 0.0
    for l in range(l_max + 1):
        x = random_sphere_points(d, 1, rng)[0]
        v = zonal_witness(d, l, x)
        nrm = math.sqrt(float(np.sum(rule.weights * np.abs(v(qpts)) ** 2)))
        samples = np.concatenate([x[None, :], random_sphere_points(d, 2000, rng)])
        sup = float(np.max(np.abs(v(samples)))) / nrm
        worst = max(worst, abs(sup - linf_bound(d, l)))
    return _record(f"sharpness witness d={d}", worst, tol)


def check_lb_eigenrelation(l_max: int = 10, h: float = 1e-3) -> dict:
    """Second difference in theta of ``e^{ij theta}`` against ``lambda_l f``; error is O(h^2)."""
    theta = np.linspace(0, 2 * math.pi, 37)
    worst = 0.0
    for l in range(l_max + 1):
        for j in angular_orders(2, l):
            f = lambda t: np.exp(1j * j * t) / math.sqrt(2 * math.pi)
            fd = (f(theta + h) - 2 * f(theta) + f(theta - h)) / h**2
            worst = max(worst, float(np.max(np.abs(fd - lb_eigenvalue(2, l) * f(theta)))))
    # leading error term is l^4 h^2 / 12 |f|
    tol = (l_max**4) * h * h / 12 / math.sqrt(2 * math.pi) * 1.01 + 1e-6
    return _record("Laplace-Beltrami eigenrelation d=2", worst, tol)


# --- suite dispatch ----------------------------------------------------------------

SUITES = ("ortho", "sturm", "identities", "expansion", "harmonics", "all")

DEFAULT_TOLERANCES = {
    "orthonormality": 1e-10,
    "boundary": 1e-12,
    "uniform_bound": 1e-12,
    "sturm": 1e-9,
    "expansion": 1e-10,
    "identities_float": 1e-12,
    "jacobi_monomial": 1e-10,
    "harmonic_orthonormality": 1e-10,
    "addition": 1e-11,
    "sharpness": 1e-9,
}


def run_suite(
    suite: str,
    d: int = 2,
    l_max: int = 25,
    k_max: int = 25,
    p_max: int = 20,
    seed: int = 0,
    tolerances: dict | None = None,
    extra_nodes: int = 0,
    exact: bool = True,
) -> list[dict]:
    """Run one named suite (or ``"all"``) and return its check records.

    Identity checks run in exact rational arithmetic when `exact` is set and in
    floating point otherwise; odd dimensions always get the floating variant too.
    Harmonic checks apply only to ``d`` in (2, 3).
    """
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    unknown = set(tolerances or {}) - set(DEFAULT_TOLERANCES)
    if unknown:
        raise ValueError(f"unknown tolerance keys: {sorted(unknown)}")
    tol = {**DEFAULT_TOLERANCES, **(tolerances or {})}
    checks: list[dict] = []
    if suite in ("ortho", "all"):
        checks += [
            check_orthonormality(d, l_max, k_max, tol["orthonormality"], extra_nodes),
            check_boundary_data(d, l_max, k_max, tol["boundary"]),
            check_uniform_bound(d, l_max, k_max, rel=tol["uniform_bound"]),
            check_boundary_sup(d, min(l_max, 10), min(k_max, 10)),
        ]
    if suite in ("sturm", "all"):
        checks.append(check_sturm_liouville(d, min(l_max, 15), min(k_max, 15), tol=tol["sturm"]))
    if suite in ("identities", "all"):
        lm, km = min(l_max, 10), min(k_max, 10)
        if exact:
            checks += check_identities_exact(d, lm, km)
        if d % 2 or not exact:
            checks += check_identities_float(d, lm, km, tol=tol["identities_float"])
        checks.append(check_jacobi_vs_monomial(d, min(l_max + 2 * k_max, 60), tol["jacobi_monomial"]))
        if d == 2:
            checks += check_explicit_bases(min(l_max, 15), min(k_max, 15))
    if suite in ("expansion", "all"):
        checks += check_monomial_expansion(d, min(l_max, 10), p_max, tol["expansion"], extra_nodes)
        checks.append(check_monomial_expansion_exact(d, min(l_max, 6), min(p_max, 8)))
    if suite in ("harmonics", "all") and d in (2, 3):
        lh = min(l_max, 20)
        checks += [
            check_harmonic_orthonormality(d, lh, tol["harmonic_orthonormality"]),
            check_addition_constant(d, lh, seed=seed, tol=tol["addition"]),
            check_sharpness(d, lh, seed=seed, tol=tol["sharpness"]),
        ]
        if d == 2:
            checks.append(check_lb_eigenrelation(min(lh, 10)))
    return checks
