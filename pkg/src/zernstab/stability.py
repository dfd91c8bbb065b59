"""Lipschitz-stability classes built on the Zernike basis of the unit ball.

A conductivity difference is represented by finitely many coefficients
``c_{n,k}`` against ``psi_{n,k}(r theta) = R_{l,k}(r) f_{l,m}(theta)`` with
``n = (l, m)``. The module computes the sup-norm weights ``a_{n,k}``, the
weighted l1 norm, the mixed-term parameter epsilon, class membership,
boundary traces, and the interior/boundary norm chain behind the stability
estimate.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

import numpy as np

from .harmonics import AngularIndex, dim_harmonic, eval_harmonic, surface_measure
from .zernike_radial import RadialIndex, eval_radial, normalizer

__all__ = [
    "BasisIndex",
    "CoefficientField",
    "StabilityReport",
    "bound_ank",
    "eval_basis",
    "eval_field",
    "weighted_l1_norm",
    "extract_epsilon",
    "sign_class_epsilon",
    "mixed_term_condition",
    "mixed_term_condition_re",
    "class_membership",
    "trace_expansion",
    "interior_boundary_norms",
    "verify_core_inequality",
    "max_principle_check",
    "positivity_offset",
]


@dataclass(frozen=True, order=True)
class BasisIndex:
    """``(d, l, m, k)``; for ``d = 2`` the order ``m`` is the Fourier index ``j`` with ``|j| = l``."""

    d: int
    l: int
    m: int
    k: int

    def __post_init__(self):
        if self.d < 2 or self.l < 0 or self.k < 0:
            raise ValueError(f"invalid basis index {self}")
        if self.d == 2 and abs(self.m) != self.l:
            raise ValueError(f"d=2 requires |m| = l, got {self}")
        if self.d == 3 and abs(self.m) > self.l:
            raise ValueError(f"d=3 requires |m| <= l, got {self}")

    @classmethod
    def from_j(cls, j: int, k: int) -> "BasisIndex":
        return cls(2, abs(j), j, k)

    @property
    def row(self) -> tuple[int, int]:
        """Angular label ``n = (l, m)``."""
        return (self.l, self.m)

    @property
    def radial(self) -> RadialIndex:
        return RadialIndex(self.d, self.l, self.k)

    @property
    def boundary_value(self) -> float:
        return math.sqrt(2 * self.l + 4 * self.k + self.d)


@dataclass(frozen=True)
class CoefficientField:
    """Finitely supported coefficient map ``BasisIndex -> complex``; zeros are dropped."""

    d: int
    entries: Mapping[BasisIndex, complex] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for idx, c in self.entries.items():
            if idx.d != self.d:
                raise ValueError(f"index {idx} does not match field dimension {self.d}")
            c = complex(c)
            if c != 0:
                clean[idx] = clean.get(idx, 0) + c
        object.__setattr__(self, "entries", dict(sorted(clean.items())))

    @classmethod
    def from_records(cls, d: int, records: Iterable[Mapping]) -> "CoefficientField":
        """Build from ``{l, m (or j), k, re, im}`` records."""
        entries: dict[BasisIndex, complex] = {}
        for rec in records:
            k = int(rec["k"])
            if d == 2 and "j" in rec:
                idx = BasisIndex.from_j(int(rec["j"]), k)
            else:
                m = int(rec["m"])
                l = int(rec.get("l", abs(m)))
                idx = BasisIndex(d, l, m, k)
            c = complex(float(rec.get("re", 0.0)), float(rec.get("im", 0.0)))
            entries[idx] = entries.get(idx, 0) + c
        return cls(d, entries)

    def to_records(self) -> list[dict]:
        out = []
        for idx, c in self.entries.items():
            rec = {"l": idx.l, "m": idx.m, "k": idx.k, "re": c.real, "im": c.imag}
            if self.d == 2:
                rec = {"j": idx.m, "k": idx.k, "re": c.real, "im": c.imag}
            out.append(rec)
        return out

    def scaled(self, t: complex) -> "CoefficientField":
        return CoefficientField(self.d, {i: t * c for i, c in self.entries.items()})

    def rows(self) -> dict[tuple[int, int], dict[int, complex]]:
        """Group coefficients by angular label: ``{(l, m): {k: c}}``."""
        out: dict[tuple[int, int], dict[int, complex]] = defaultdict(dict)
        for idx, c in self.entries.items():
            out[idx.row][idx.k] = c
        return dict(out)

    @property
    def occupied_k(self) -> set[int]:
        return {idx.k for idx in self.entries}

    def l2_norm(self) -> float:
        return math.sqrt(sum(abs(c) ** 2 for c in self.entries.values()))

    def __len__(self) -> int:
        return len(self.entries)


@dataclass
class StabilityReport:
    """Class membership and stability constants, in units of ``C_dB``.

    ``epsilon`` is the infimum over all radial indices;
    ``epsilon_occupied`` uses only radial indices carrying coefficients.
    """

    d: int
    epsilon: float | None
    epsilon_occupied: float | None
    weighted_l1: float
    in_A: bool
    in_A_k: dict[int, bool]
    constant_theorem: float | None
    constant_theorem_occupied: float | None
    constant_corollary2: float | None
    constant_common: float
    c_boundary: float
    interior_norm: float
    boundary_norm: float

    @property
    def status(self) -> str:
        return "ok" if self.epsilon is not None else "no-epsilon"

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "d": self.d,
            "epsilon": self.epsilon,
            "epsilon_occupied": self.epsilon_occupied,
            "weighted_l1": self.weighted_l1,
            "class_flags": {
                "A": self.in_A,
                "A_k": {str(k): v for k, v in sorted(self.in_A_k.items())},
            },
            "constant_theorem": self.constant_theorem,
            "constant_theorem_occupied": self.constant_theorem_occupied,
            "constant_corollary2": self.constant_corollary2,
            "constant_common": self.constant_common,
            "c_boundary": self.c_boundary,
            "interior_norm": self.interior_norm,
            "boundary_norm": self.boundary_norm,
        }


def bound_ank(index: BasisIndex) -> float:
    """Sup-norm bound ``|C_{l,k}| (dim H_l / |dB|)^{1/2}`` of ``psi_{n,k}`` on the ball."""
    c = abs(normalizer(index.radial))
    return c * math.sqrt(dim_harmonic(index.d, index.l) / surface_measure(index.d))


def _split(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    rho = np.linalg.norm(points, axis=-1)
    safe = np.where(rho > 0, rho, 1.0)
    theta = points / safe[..., None]
    # direction is irrelevant at the origin except for l = 0; pick e_1
    theta[rho == 0] = 0.0
    theta[rho == 0, 0] = 1.0
    return np.minimum(rho, 1.0), theta


def eval_basis(index: BasisIndex, points) -> np.ndarray:
    """``psi_{l,m,k}`` at points of the closed ball, shape ``(..., d)``."""
    pts = np.asarray(points, dtype=float)
    r, theta = _split(pts)
    R = eval_radial(index.radial, r)
    f = eval_harmonic(AngularIndex(index.d, index.l, index.m), theta)
    return R * f


def eval_field(field_: CoefficientField, points) -> np.ndarray:
    """Interior expansion ``sum c_{n,k} psi_{n,k}(x)``."""
    pts = np.asarray(points, dtype=float)
    out = np.zeros(pts.shape[:-1], dtype=complex)
    for idx, c in field_.entries.items():
        out = out + c * eval_basis(idx, pts)
    return out


def weighted_l1_norm(field_: CoefficientField) -> float:
    """``sum |c_{n,k}| a_{n,k}``."""
    return float(sum(abs(c) * bound_ank(idx) for idx, c in field_.entries.items()))


def _row_inf_g(d: int, l: int, ks: Iterable[int], variant: str) -> float:
    if variant == "all":
        return math.sqrt(2 * l + d)
    if variant == "occupied":
        return math.sqrt(2 * l + 4 * min(ks) + d)
    raise ValueError(f"unknown epsilon variant {variant!r}")


def extract_epsilon(field_: CoefficientField, variant: str = "all") -> float | None:
    """Largest epsilon for which the mixed-term condition holds on every row.

    For a row ``n`` with coefficients ``c_{n,k}`` the admissible epsilon is
    ``inf_k |g_{n,k}(1)| |sum_k c| / (sum_k |c|^2)^{1/2}``. ``variant="all"``
    takes the infimum over all ``k >= 0`` (that is, ``sqrt(2l + d)``);
    ``variant="occupied"`` only over ``k`` with nonzero coefficients.
    Returns ``None`` when some nonzero row sums to zero, and ``inf`` for an empty field.
    """
    eps = math.inf
    # deterministic order over rows
    for (l, _m), row in sorted(field_.rows().items()):
        total = sum(row.values())
        sq = sum(abs(c) ** 2 for c in row.values())
        if abs(total) <= 1e-14 * math.sqrt(sq):
            return None
        g = _row_inf_g(field_.d, l, row.keys(), variant)
        eps = min(eps, g * abs(total) / math.sqrt(sq))
    return eps


def sign_class_epsilon(field_: CoefficientField) -> float | None:
    """``inf_{n,k} |g_{n,k}(1)| = sqrt(d)`` when every row is real with a single sign.

    Returns ``None`` if the field is not in that sign class.
    """
    for row in field_.rows().values():
        vals = np.array(list(row.values()))
        if np.any(np.abs(vals.imag) > 0):
            return None
        if not (np.all(vals.real > 0) or np.all(vals.real < 0)):
            return None
    return math.sqrt(field_.d)


def mixed_term_condition(field_: CoefficientField, epsilon: float, variant: str = "all") -> bool:
    """``sum_k |c|^2 <= inf_k|g(1)|^2 / eps^2 |sum_k c|^2`` on every row."""
    for (l, _m), row in field_.rows().items():
        g = _row_inf_g(field_.d, l, row.keys(), variant)
        lhs = sum(abs(c) ** 2 for c in row.values())
        rhs = g * g / epsilon**2 * abs(sum(row.values())) ** 2
        if lhs > rhs * (1 + 1e-12):
            return False
    return True


def mixed_term_condition_re(field_: CoefficientField, epsilon: float, variant: str = "all") -> bool:
    """Equivalent form via cross terms ``sum_{k != k'} Re(c_k conj(c_k'))``."""
    for (l, _m), row in field_.rows().items():
        g = _row_inf_g(field_.d, l, row.keys(), variant)
        cs = list(row.values())
        sq = sum(abs(c) ** 2 for c in cs)
        cross = sum((a * np.conj(b)).real for i, a in enumerate(cs) for j, b in enumerate(cs) if i != j)
        if cross < (epsilon**2 / g**2 - 1) * sq - 1e-12 * max(sq, 1.0) * (epsilon**2 / g**2 + 1):
            return False
    return True


def interior_boundary_norms(field_: CoefficientField) -> tuple[float, float]:
    """``(||f||_{L^2(B)}, ||f||_{L^2(dB)})`` by Parseval in the Zernike and harmonic bases."""
    interior = field_.l2_norm()
    bsq = 0.0
    for (l, _m), row in field_.rows().items():
        s = sum(c * math.sqrt(2 * l + 4 * k + field_.d) for k, c in row.items())
        bsq += abs(s) ** 2
    return interior, math.sqrt(bsq)


def class_membership(field_: CoefficientField, c_boundary: float = 1.0) -> StabilityReport:
    """Membership in ``A`` and ``A_k`` plus the stability constants for `field_`."""
    d = field_.d
    dB = surface_measure(d)
    occupied = field_.occupied_k
    in_A_k = {k: occupied <= {k} for k in (occupied or {0})}
    eps = extract_epsilon(field_, "all")
    eps_occ = extract_epsilon(field_, "occupied")

    def const(e):
        if e is None:
            return None
        if math.isinf(e):
            return 0.0
        return math.sqrt(dB) * c_boundary / e

    cor2 = None
    if len(occupied) == 1:
        (k,) = occupied
        cor2 = math.sqrt(dB / (4 * k + d)) * c_boundary
    elif not occupied:
        cor2 = math.sqrt(dB / d) * c_boundary
    inner, bnd = interior_boundary_norms(field_)
    return StabilityReport(
        d=d,
        epsilon=eps,
        epsilon_occupied=eps_occ,
        weighted_l1=weighted_l1_norm(field_),
        in_A=True,
        in_A_k=in_A_k,
        constant_theorem=const(eps),
        constant_theorem_occupied=const(eps_occ),
        constant_corollary2=cor2,
        constant_common=math.sqrt(dB / d) * c_boundary,
        c_boundary=c_boundary,
        interior_norm=inner,
        boundary_norm=bnd,
    )


def trace_expansion(field_: CoefficientField, boundary_point) -> np.ndarray | complex:
    """Boundary trace ``sum_n (sum_k c_{n,k} g_{n,k}(1)) f_n(theta)``."""
    out = 0j
    for idx, c in field_.entries.items():
        f = eval_harmonic(AngularIndex(idx.d, idx.l, idx.m), boundary_point)
        out = out + c * idx.boundary_value * f
    return out


def verify_core_inequality(field_: CoefficientField, epsilon: float | None = None, variant: str = "all") -> dict:
    """Compare ``||f||_{L^2(B)}`` with ``eps^{-1} ||f||_{L^2(dB)}``.

    `epsilon` defaults to :func:`extract_epsilon` with the given `variant`.
    Raises ``ValueError`` when no admissible epsilon exists.
    """
    if epsilon is None:
        epsilon = extract_epsilon(field_, variant)
    if epsilon is None:
        raise ValueError("no-epsilon: a row of the field cancels completely")
    inner, bnd = interior_boundary_norms(field_)
    rhs = bnd / epsilon if not math.isinf(epsilon) else 0.0
    ratio = inner / rhs if rhs > 0 else (0.0 if inner == 0 else math.inf)
    return {
        "interior_norm": inner,
        "boundary_norm": bnd,
        "epsilon": epsilon,
        "rhs": rhs,
        "ratio": ratio,
        "holds": ratio <= 1 + 1e-12,
    }


def _ball_samples(d: int, n: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((n, d))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return g * rng.random(n)[:, None] ** (1.0 / d)


def max_principle_check(
    f: Callable[[np.ndarray], np.ndarray],
    d: int = 2,
    n_interior: int = 100_000,
    n_boundary: int = 10_000,
    seed: int = 0,
) -> dict:
    """Sampled test that ``max_B f <= max_dB f`` for a real-valued `f`.

    A sampling check can only falsify the weak maximum principle. The
    tolerance is ``1e-9 + 1e-6 * scale`` with ``scale`` the largest sampled ``|f|``.
    """
    rng = np.random.default_rng(seed)
    inner = np.real(f(_ball_samples(d, n_interior, rng)))
    g = rng.standard_normal((n_boundary, d))
    bnd = np.real(f(g / np.linalg.norm(g, axis=1, keepdims=True)))
    scale = max(np.max(np.abs(inner)), np.max(np.abs(bnd)))
    tol = 1e-9 + 1e-6 * scale
    imax, bmax = float(np.max(inner)), float(np.max(bnd))
    return {"interior_max": imax, "boundary_max": bmax, "tolerance": tol, "passed": imax <= bmax + tol}


def positivity_offset(field_: CoefficientField) -> float:
    """Offset magnitude ``sum |c| a_{n,k}`` bounding ``sup_B |f|``; any ``gamma_0`` above it keeps ``gamma_0 + f`` positive."""
    return weighted_l1_norm(field_)
