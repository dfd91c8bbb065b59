"""Dirichlet-to-Neumann maps of the conductivity equation on the unit disk.

Matrices are expressed in the boundary Fourier basis ``e^{ij theta}/sqrt(2 pi)``,
``|j| <= N``, with entry ``[j', j] = <Lambda(gamma) e_j, e_j'>_{L^2(dB)}``.

Two forward paths are provided: a spectral path for radial conductivities
(one Riccati ODE per Fourier mode) and a P1 finite-element path on a
deterministic disk mesh for general conductivities. Operator norms from
``H^{1/2}`` to ``H^{-1/2}`` use the Fourier weights ``(1 + j^2)^{+-1/4}``; this is
one of several equivalent norm conventions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import sparse
from scipy.integrate import solve_ivp
from scipy.sparse.linalg import splu

from .quadrature import ball_rule
from .stability import (
    CoefficientField,
    eval_field,
    extract_epsilon,
    interior_boundary_norms,
    weighted_l1_norm,
)

__all__ = [
    "NORM_CONVENTION",
    "SolverError",
    "Conductivity2D",
    "DtnMatrix",
    "DiskMesh",
    "disk_mesh",
    "assemble_stiffness",
    "dtn_spectral_radial",
    "dtn_fem",
    "dtn_fem_difference",
    "operator_norm_h12",
    "ConductivityPair",
    "lipschitz_ratio_experiment",
    "stable_family",
    "contrast_family",
    "bounded_verdict",
    "growth_verdict",
]

NORM_CONVENTION = "H^{+-1/2}(dB) via Fourier multipliers (1+j^2)^{+-1/4}"


class SolverError(RuntimeError):
    """Forward solve failed (ODE breakdown, mesh or linear-solver failure)."""


# --- conductivities ----------------------------------------------------------------

@dataclass(frozen=True)
class Conductivity2D:
    """Positive conductivity on the closed unit disk.

    ``func(x, y)`` evaluates on arrays. Radial conductivities also carry
    ``profile(r)`` and the radii where the profile is discontinuous.
    """

    func: Callable[[np.ndarray, np.ndarray], np.ndarray]
    profile: Callable[[np.ndarray], np.ndarray] | None = None
    breakpoints: tuple[float, ...] = ()
    smoothness: str = "smooth"
    name: str = "gamma"

    def __call__(self, x, y):
        return np.asarray(self.func(np.asarray(x, float), np.asarray(y, float)), dtype=float)

    @property
    def is_radial(self) -> bool:
        return self.profile is not None

    def min_value(self, n: int = 20_000, seed: int = 0) -> float:
        rng = np.random.default_rng(seed)
        r = np.sqrt(rng.random(n))
        t = 2 * math.pi * rng.random(n)
        r = np.concatenate([r, np.ones(256), np.zeros(1)])
        t = np.concatenate([t, np.linspace(0, 2 * math.pi, 256, endpoint=False), [0.0]])
        return float(np.min(self(r * np.cos(t), r * np.sin(t))))

    def check_positive(self, margin: float = 0.0) -> None:
        m = self.min_value()
        if not m > margin:
            raise ValueError(f"conductivity {self.name!r} is not positive (sampled min {m:.3g})")

    @classmethod
    def radial(cls, profile, breakpoints=(), smoothness="smooth", name="radial") -> "Conductivity2D":
        def func(x, y):
            return profile(np.hypot(x, y))

        return cls(func, profile, tuple(breakpoints), smoothness, name)

    @classmethod
    def constant(cls, value: float = 1.0) -> "Conductivity2D":
        v = float(value)
        return cls.radial(lambda r: np.full_like(np.asarray(r, float), v), name=f"constant({v:g})")

    @classmethod
    def two_phase(cls, inner: float, outer: float = 1.0, radius: float = 0.5) -> "Conductivity2D":
        def profile(r):
            return np.where(np.asarray(r) < radius, inner, outer).astype(float)

        return cls.radial(profile, (radius,), "piecewise-constant", f"two_phase({inner:g},{outer:g},{radius:g})")

    @classmethod
    def from_field(cls, field_: CoefficientField, base: float = 1.0, name: str = "zernike") -> "Conductivity2D":
        """``base + Re(sum c psi)`` for a coefficient field in d = 2."""
        if field_.d != 2:
            raise ValueError("DtN solvers are two-dimensional")

        def func(x, y):
            pts = np.stack([x, y], axis=-1)
            return base + np.real(eval_field(field_, pts))

        return cls(func, None, (), "polynomial", name)

    @classmethod
    def bump(cls, amplitude: float, frequency: int, radius: float = 0.5, base: float = 1.0) -> "Conductivity2D":
        """``base + amplitude (1 - (r/radius)^2)^3 cos(frequency theta)`` inside ``r < radius``."""

        def func(x, y):
            r = np.hypot(x, y)
            s = np.clip(r / radius, 0.0, 1.0)
            return base + amplitude * (1.0 - s * s) ** 3 * np.cos(frequency * np.arctan2(y, x))

        return cls(func, None, (), "C2", f"bump(l={frequency})")


# --- DtN matrices ------------------------------------------------------------------

@dataclass(frozen=True)
class DtnMatrix:
    N: int
    matrix: np.ndarray
    convention: str = "e^{ij theta}/sqrt(2 pi)"

    @property
    def modes(self) -> np.ndarray:
        return np.arange(-self.N, self.N + 1)

    def entry(self, jp: int, j: int) -> complex:
        return complex(self.matrix[jp + self.N, j + self.N])

    def diagonal(self) -> np.ndarray:
        return np.diag(self.matrix)

    def hermitian_defect(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))

    def __sub__(self, other: "DtnMatrix") -> "DtnMatrix":
        if other.N != self.N:
            raise ValueError("truncation mismatch")
        return DtnMatrix(self.N, self.matrix - other.matrix)


def operator_norm_h12(diff: DtnMatrix | np.ndarray, modes=None) -> float:
    """Largest singular value of ``W M W``, ``W = diag((1 + j^2)^{-1/4})``."""
    if isinstance(diff, DtnMatrix):
        M, modes = diff.matrix, diff.modes
    else:
        M = np.asarray(diff)
        if modes is None:
            n = (M.shape[0] - 1) // 2
            modes = np.arange(-n, n + 1)
    w = (1.0 + np.asarray(modes, float) ** 2) ** -0.25
    return float(np.linalg.norm(w[:, None] * M * w[None, :], 2))


# --- spectral path -----------------------------------------------------------------

def _radial_mode(profile, breakpoints, n: int, r0: float, rtol: float) -> float:
    # w = r gamma u'/u obeys dw/ds = n^2 gamma - w^2 / gamma in s = log r
    if n == 0:
        return 0.0
    edges = [r0] + [b for b in sorted(breakpoints) if r0 < b < 1.0] + [1.0]
    w = float(profile(np.array(r0))) * n
    for a, b in zip(edges[:-1], edges[1:]):
        pad = 1e-12 * (b - a)

        def rhs(s, y, a=a, b=b, pad=pad):
            g = float(profile(np.array(min(max(math.exp(s), a + pad), b - pad))))
            return [n * n * g - y[0] * y[0] / g]

        sol = solve_ivp(rhs, (math.log(a), math.log(b)), [w], method="LSODA", rtol=rtol, atol=rtol * 1e-2)
        if not sol.success or not np.isfinite(sol.y[0, -1]):
            raise SolverError(f"radial ODE failed for mode {n}: {sol.message}")
        w = float(sol.y[0, -1])
        if w <= 0:
            raise SolverError(f"radial solution lost positivity for mode {n}")
    return w


def dtn_spectral_radial(gamma: Conductivity2D, N: int, r0: float = 1e-8, rtol: float = 1e-12) -> DtnMatrix:
    """Diagonal DtN matrix of a radial conductivity.

    Mode ``j`` solves ``(r gamma u')' - (j^2 / r) gamma u = 0`` with ``u ~ r^{|j|}``
    at ``r0``, written as a Riccati equation for ``w = r gamma u' / u``; the
    eigenvalue is ``gamma(1) u'(1) / u(1) = w(1)``.
    """
    if not gamma.is_radial:
        raise ValueError("spectral path needs a radial conductivity")
    lam = {n: _radial_mode(gamma.profile, gamma.breakpoints, n, r0, rtol) for n in range(N + 1)}
    diag = np.array([lam[abs(j)] for j in range(-N, N + 1)], dtype=complex)
    return DtnMatrix(N, np.diag(diag))


# --- finite elements ---------------------------------------------------------------

@dataclass(frozen=True)
class DiskMesh:
    points: np.ndarray
    triangles: np.ndarray
    boundary: np.ndarray
    h: float
    areas: np.ndarray = field(repr=False)
    grads: np.ndarray = field(repr=False)

    @property
    def boundary_angles(self) -> np.ndarray:
        p = self.points[self.boundary]
        return np.arctan2(p[:, 1], p[:, 0])

    @property
    def interior(self) -> np.ndarray:
        mask = np.ones(len(self.points), bool)
        mask[self.boundary] = False
        return np.flatnonzero(mask)


def disk_mesh(h: float, n_angular: int | None = None) -> DiskMesh:
    """Deterministic polar triangulation of the unit disk with spacing about `h`.

    Every ring ``r_i = i / n_r`` carries the same ``n_angular`` nodes (default
    about ``2 pi / h``, a multiple of 4), odd rings rotated by half a step, and
    neighbouring rings are stitched into strips of triangles. The mesh is
    invariant under rotation by ``2 pi / n_angular``, so rotationally invariant
    data couple Fourier modes only modulo ``n_angular``. The boundary polygon
    is inscribed in the unit circle.
    """
    if not h > 0:
        raise ValueError("mesh size must be positive")
    n_r = max(2, math.ceil(1.0 / h))
    M = n_angular or 4 * max(2, math.ceil(2 * math.pi / h / 4))
    k = np.arange(M)
    rings = [np.zeros((1, 2))]
    for i in range(1, n_r + 1):
        t = 2 * math.pi * (k + 0.5 * (i % 2)) / M
        rings.append((i / n_r) * np.stack([np.cos(t), np.sin(t)], axis=1))
    points = np.concatenate(rings)

    def node(i, j):
        return 1 + (i - 1) * M + (j % M)

    tris = [np.stack([np.zeros(M, np.int64), node(1, k), node(1, k + 1)], axis=1)]
    for i in range(1, n_r):
        a0, a1 = node(i, k), node(i, k + 1)
        if i % 2:
            # ring i is shifted forward by half a step relative to ring i+1
            b0, b1 = node(i + 1, k), node(i + 1, k + 1)
            tris.append(np.stack([a0, b1, a1], axis=1))
            tris.append(np.stack([a0, b0, b1], axis=1))
        else:
            b0, b1 = node(i + 1, k), node(i + 1, k + 1)
            tris.append(np.stack([a0, b0, a1], axis=1))
            tris.append(np.stack([a1, b0, b1], axis=1))
    tri = np.concatenate(tris).astype(np.int64)

    P = points[tri]
    e1 = P[:, 1] - P[:, 0]
    e2 = P[:, 2] - P[:, 0]
    det = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]
    flip = det < 0
    tri[flip] = tri[flip][:, [0, 2, 1]]
    det = np.abs(det)
    if np.any(det <= 1e-15):
        raise SolverError("degenerate triangles in disk mesh")
    P = points[tri]
    # gradients of barycentric coordinates: rotated opposite edges
    grads = np.empty((len(tri), 3, 2))
    for a in range(3):
        b, c = (a + 1) % 3, (a + 2) % 3
        e = P[:, c] - P[:, b]
        grads[:, a, 0] = -e[:, 1] / det
        grads[:, a, 1] = e[:, 0] / det
    boundary = node(n_r, k)
    return DiskMesh(points, tri, boundary, h, 0.5 * det, grads)


# interior 3-point rule, exact for quadratics
_BARY = np.array([[2 / 3, 1 / 6, 1 / 6], [1 / 6, 2 / 3, 1 / 6], [1 / 6, 1 / 6, 2 / 3]])


def _element_integrals(mesh: DiskMesh, gamma: Callable) -> np.ndarray:
    P = mesh.points[mesh.triangles]
    q = np.einsum("qa,tad->tqd", _BARY, P)
    vals = np.asarray(gamma(q[..., 0], q[..., 1]), float)
    return mesh.areas * vals.mean(axis=1)


def assemble_stiffness(mesh: DiskMesh, gamma: Callable) -> sparse.csr_matrix:
    """P1 stiffness matrix of ``int gamma grad u . grad v``."""
    g = _element_integrals(mesh, gamma)
    Ke = g[:, None, None] * np.einsum("tad,tbd->tab", mesh.grads, mesh.grads)
    rows = np.repeat(mesh.triangles, 3, axis=1).ravel()
    cols = np.tile(mesh.triangles, (1, 3)).ravel()
    n = len(mesh.points)
    return sparse.coo_matrix((Ke.ravel(), (rows, cols)), shape=(n, n)).tocsr()


def _extensions(mesh: DiskMesh, K: sparse.csr_matrix, N: int) -> np.ndarray:
    # discrete gamma-harmonic extensions of e^{ij theta}/sqrt(2 pi), |j| <= N
    theta = mesh.boundary_angles
    js = np.arange(-N, N + 1)
    G = np.exp(1j * np.outer(theta, js)) / math.sqrt(2 * math.pi)
    inner, bnd = mesh.interior, mesh.boundary
    K_ii = K[inner][:, inner].tocsc()
    K_ib = K[inner][:, bnd]
    try:
        lu = splu(K_ii)
    except RuntimeError as exc:
        raise SolverError(f"stiffness factorization failed: {exc}") from exc
    rhs = -(K_ib @ G)
    U = np.zeros((len(mesh.points), len(js)), dtype=complex)
    U[bnd] = G
    U[inner] = lu.solve(np.ascontiguousarray(rhs.real)) + 1j * lu.solve(np.ascontiguousarray(rhs.imag))
    if not np.all(np.isfinite(U)):
        raise SolverError("non-finite FEM solution")
    return U


def dtn_fem(gamma: Conductivity2D, N: int, mesh_h: float, mesh: DiskMesh | None = None) -> DtnMatrix:
    """DtN matrix from linear finite elements.

    Fluxes are extracted by duality, ``[j', j] = int gamma grad u_j . grad conj(u_j')``,
    which is the discrete energy pairing of the two harmonic extensions.
    """
    mesh = mesh or disk_mesh(mesh_h)
    K = assemble_stiffness(mesh, gamma)
    U = _extensions(mesh, K, N)
    M = U.conj().T @ (K @ U)
    return DtnMatrix(N, M)


def dtn_fem_difference(
    gamma1: Conductivity2D, gamma2: Conductivity2D, N: int, mesh_h: float, mesh: DiskMesh | None = None
) -> DtnMatrix:
    """``Lambda(gamma1) - Lambda(gamma2)`` without subtractive cancellation.

    Uses ``[j', j] = int (gamma1 - gamma2) grad u1_j . grad conj(u2_j')``, exact
    for the discrete maps as well as the continuous ones.
    """
    mesh = mesh or disk_mesh(mesh_h)
    K1 = assemble_stiffness(mesh, gamma1)
    K2 = assemble_stiffness(mesh, gamma2)
    dK = assemble_stiffness(mesh, lambda x, y: gamma1(x, y) - gamma2(x, y))
    U1 = _extensions(mesh, K1, N)
    U2 = _extensions(mesh, K2, N)
    return DtnMatrix(N, U2.conj().T @ (dK @ U1))


# --- experiments -------------------------------------------------------------------

@dataclass
class ConductivityPair:
    gamma1: Conductivity2D
    gamma2: Conductivity2D
    name: str = "pair"
    difference: CoefficientField | None = None
    parameter: float | None = None


def _l2_difference(pair: ConductivityPair) -> float:
    if pair.difference is not None:
        return pair.difference.l2_norm()
    pts, w = ball_rule(2, 96, 256)
    diff = pair.gamma1(pts[:, 0], pts[:, 1]) - pair.gamma2(pts[:, 0], pts[:, 1])
    return float(math.sqrt(np.sum(w * diff * diff)))


def _dtn_difference(pair: ConductivityPair, N: int, mesh_h: float, mesh: DiskMesh | None) -> DtnMatrix:
    if pair.gamma1.is_radial and pair.gamma2.is_radial:
        return dtn_spectral_radial(pair.gamma1, N) - dtn_spectral_radial(pair.gamma2, N)
    return dtn_fem_difference(pair.gamma1, pair.gamma2, N, mesh_h, mesh)


def lipschitz_ratio_experiment(
    family: Sequence[ConductivityPair], N: int, mesh_h: float = 0.04, c_boundary: float = 1.0
) -> list[dict]:
    """Measure ``||gamma1 - gamma2||_{L^2(B)} / ||Lambda1 - Lambda2||`` for each pair.

    Pairs whose difference is given as a coefficient field additionally report
    epsilon, the stability bound in units of ``C_dB``, and the interior vs.
    boundary inequality. A failing pair is reported with ``status="solver-failure"``
    and does not stop the run.
    """
    mesh = None if all(p.gamma1.is_radial and p.gamma2.is_radial for p in family) else disk_mesh(mesh_h)
    rows = []
    for pair in family:
        row: dict = {"name": pair.name, "parameter": pair.parameter, "norm_convention": NORM_CONVENTION}
        try:
            pair.gamma1.check_positive()
            pair.gamma2.check_positive()
            l2 = _l2_difference(pair)
            dnorm = operator_norm_h12(_dtn_difference(pair, N, mesh_h, mesh))
        except (SolverError, ValueError) as exc:
            row.update(status="solver-failure", error=str(exc))
            rows.append(row)
            continue
        ratio = l2 / dnorm if dnorm > 0 else None
        row.update(status="ok" if ratio is not None else "undefined", l2_difference=l2, dtn_norm=dnorm, ratio=ratio)
        if pair.difference is not None:
            eps = extract_epsilon(pair.difference, "occupied")
            inner, bnd = interior_boundary_norms(pair.difference)
            row["epsilon"] = eps
            row["weighted_l1"] = weighted_l1_norm(pair.difference)
            if eps is not None and not math.isinf(eps):
                row["stability_bound"] = math.sqrt(2 * math.pi) * c_boundary / eps
                row["boundary_l2"] = bnd
                row["core_inequality_holds"] = inner <= bnd / eps * (1 + 1e-12)
        rows.append(row)
    return rows


def _random_real_field(rng: np.random.Generator, l_max: int, k: int) -> CoefficientField:
    from .stability import BasisIndex

    entries = {}
    for l in range(0, l_max + 1):
        c = complex(rng.standard_normal(), rng.standard_normal() if l else 0.0)
        entries[BasisIndex.from_j(l, k)] = c
        if l:
            entries[BasisIndex.from_j(-l, k)] = c.conjugate()
    return CoefficientField(2, entries)


def stable_family(
    n_pairs: int = 10, seed: int = 0, l_max: int = 3, amplitude: float = 0.2, decay: float = 0.7, k: int = 0
) -> list[ConductivityPair]:
    """Pairs ``1 + f1``, ``1 + f2`` whose difference lies in ``A_k`` (real-valued, ``d = 2``).

    Pair ``i`` has its fields scaled so the weighted l1 norm equals
    ``amplitude * decay**i``, which keeps both conductivities above ``1 - amplitude``.
    """
    rng = np.random.default_rng(seed)
    out = []
    for i in range(n_pairs):
        target = amplitude * decay**i
        f1 = _random_real_field(rng, l_max, k)
        f2 = _random_real_field(rng, l_max, k)
        f1 = f1.scaled(target / weighted_l1_norm(f1))
        f2 = f2.scaled(target / weighted_l1_norm(f2))
        diff = CoefficientField(
            2, {idx: f1.entries.get(idx, 0) - f2.entries.get(idx, 0) for idx in set(f1.entries) | set(f2.entries)}
        )
        out.append(
            ConductivityPair(
                Conductivity2D.from_field(f1, name=f"stable{i}a"),
                Conductivity2D.from_field(f2, name=f"stable{i}b"),
                name=f"stable-{i}",
                difference=diff,
                parameter=target,
            )
        )
    return out


def contrast_family(
    frequencies: Sequence[int] = (2, 4, 8, 16), amplitude: float = 1e-6, radius: float = 0.5
) -> list[ConductivityPair]:
    """Localized oscillations ``1 + A chi(r) cos(l theta)`` against the background ``1``.

    The default amplitude keeps the data in the regime where the first-order
    response dominates; at fixed finite amplitude the response to fast
    oscillations levels off at a homogenized second-order value.
    """
    bg = Conductivity2D.constant(1.0)
    return [
        ConductivityPair(Conductivity2D.bump(amplitude, l, radius), bg, name=f"bump-l{l}", parameter=float(l))
        for l in frequencies
    ]


def bounded_verdict(rows: Sequence[dict], max_spread: float = 10.0) -> dict:
    ratios = [r["ratio"] for r in rows if r.get("ratio") is not None]
    if not ratios:
        return {"verdict": "undefined", "spread": None}
    spread = max(ratios) / min(ratios)
    return {"verdict": "bounded" if spread <= max_spread else "unbounded", "spread": spread}


def growth_verdict(rows: Sequence[dict]) -> dict:
    ratios = [r["ratio"] for r in rows if r.get("ratio") is not None]
    grows = len(ratios) >= 2 and all(b > a for a, b in zip(ratios, ratios[1:]))
    return {"verdict": "growth" if grows else "no-growth", "ratios": ratios}
