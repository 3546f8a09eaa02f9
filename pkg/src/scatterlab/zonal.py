"""Zonal harmonics Z_ell^q, their normalized versions z_ell^q, and the interpolation matrix.

Z_ell^q(x) = (m_ell / vol(S^d)) C_ell(cos r) / C_ell(1) with r = d(x, q) and
Gegenbauer index (d - 1)/2. Cross-center inner products come from the
reproducing identity <Z_ell^p, Z_ell^q> = Z_ell^q(p); quadrature is only used
as an oracle in the tests.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import ANTIPODAL_TOL, SphereContext, as_point, is_antipodal
from .specfun import gegenbauer_ratio, ratio_table


def _cosines(center, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return np.clip(x @ np.asarray(center, dtype=float), -1.0, 1.0)


def zonal_radial(ctx: SphereContext, ell: int, r, normalized: bool = False):
    """Value of Z_ell (or z_ell when ``normalized``) at geodesic radius r."""
    s = np.cos(np.asarray(r, dtype=float))
    ratio = gegenbauer_ratio(ctx.alpha, ell, s)
    scale = ctx.zonal_norm(ell) if normalized else ctx.mult(ell) / ctx.vol_sphere
    return scale * ratio


def zonal_eval(ctx: SphereContext, center, ell: int, x, normalized: bool = False):
    """Z_ell^center(x); ``x`` may be one point or an (n, d+1) array of points."""
    if ell < 0:
        raise ValueError("ell must be nonnegative")
    ratio = gegenbauer_ratio(ctx.alpha, ell, _cosines(center, x))
    scale = ctx.zonal_norm(ell) if normalized else ctx.mult(ell) / ctx.vol_sphere
    return scale * ratio


def zonal_inner_product(ctx: SphereContext, p, q, ell: int, normalized: bool = False) -> float:
    """<Z_ell^p, Z_ell^q> = Z_ell^q(p); the normalized variant is <z_ell^p, z_ell^q>."""
    if is_near_antipodal(p, q):
        ratio = (-1.0) ** ell
    else:
        ratio = gegenbauer_ratio(ctx.alpha, ell, float(np.clip(np.dot(p, q), -1, 1)))
    if normalized:
        return float(ratio)
    return float(ctx.mult(ell) / ctx.vol_sphere * ratio)


def cross_ratio_table(ctx: SphereContext, p, q, ell_max: int) -> np.ndarray:
    """<z_ell^p, z_ell^q> = C_ell(p.q)/C_ell(1) for ell = 0..ell_max."""
    if is_near_antipodal(p, q):
        return (-1.0) ** np.arange(ell_max + 1)
    return ratio_table(ctx.alpha, ell_max, float(np.clip(np.dot(p, q), -1, 1)))


def is_near_antipodal(p, q, tol: float = ANTIPODAL_TOL) -> bool:
    return is_antipodal(p, q, tol)


@dataclass
class ZonalExpansion:
    """Complex coefficients over the normalized zonal basis {z_ell^center}, ell = 0..len-1."""

    ctx: SphereContext
    center: np.ndarray
    coeffs: np.ndarray

    def __post_init__(self):
        self.center = as_point(self.center)
        if len(self.center) != self.ctx.d + 1:
            raise ValueError("center dimension does not match the sphere")
        self.coeffs = np.asarray(self.coeffs, dtype=complex)

    @property
    def ell_max(self) -> int:
        return len(self.coeffs) - 1

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.coeffs) ** 2))

    def norm(self) -> float:
        return float(np.sqrt(self.norm_sq()))

    def normalized(self) -> "ZonalExpansion":
        return ZonalExpansion(self.ctx, self.center, self.coeffs / self.norm())

    def padded(self, ell_max: int) -> np.ndarray:
        out = np.zeros(ell_max + 1, dtype=complex)
        n = min(ell_max, self.ell_max) + 1
        out[:n] = self.coeffs[:n]
        return out

    def inner(self, other: "ZonalExpansion") -> complex:
        """<self, other>, antilinear in ``self``; both must share the center."""
        if not np.allclose(self.center, other.center, atol=1e-12):
            raise ValueError("inner product of expansions about different centers")
        n = min(self.ell_max, other.ell_max) + 1
        return complex(np.vdot(self.coeffs[:n], other.coeffs[:n]))

    def evaluate(self, x) -> np.ndarray:
        """Pointwise value sum_ell c_ell z_ell(x)."""
        s = _cosines(self.center, x)
        table = ratio_table(self.ctx.alpha, self.ell_max, s)
        norms = self.ctx.zonal_norm(np.arange(self.ell_max + 1))
        return np.tensordot(self.coeffs * norms, table, axes=(0, 0))


@dataclass
class InterpolationMatrix:
    """Matrix (z_ell^q(p))_{p,q} over a scatterer set, with Gershgorin radii."""

    ell: int
    scatterers: list
    entries: np.ndarray
    gershgorin_radii: np.ndarray = field(init=False)

    def __post_init__(self):
        off = np.abs(self.entries) - np.diag(np.abs(np.diag(self.entries)))
        self.gershgorin_radii = off.sum(axis=1)


@dataclass(frozen=True)
class Certificate:
    invertible: bool
    inverse_norm_bound: float
    margin: float


def build_interpolation_matrix(ctx: SphereContext, scatterers, ell: int) -> InterpolationMatrix:
    pts = [as_point(p) for p in scatterers]
    n = len(pts)
    for i in range(n):
        for j in range(i + 1, n):
            if np.linalg.norm(pts[i] - pts[j]) < 1e-12:
                raise ValueError(f"duplicate scatterers at indices {i} and {j}")
    diag = float(ctx.zonal_norm(ell))
    a = np.empty((n, n))
    for i in range(n):
        a[i, i] = diag
        for j in range(i + 1, n):
            a[i, j] = a[j, i] = diag * zonal_inner_product(ctx, pts[i], pts[j], ell, normalized=True)
    return InterpolationMatrix(ell, pts, a)


def certify_invertible(m: InterpolationMatrix) -> Certificate:
    """Gershgorin test: every disk D(a_pp, R_p) must avoid the origin.

    When it does, ||A^{-1}|| <= 1 / min_p (|a_pp| - R_p) in the infinity norm
    (a strictly diagonally dominant row bound).
    """
    margins = np.abs(np.diag(m.entries)) - m.gershgorin_radii
    margin = float(margins.min())
    if margin > 0:
        return Certificate(True, 1.0 / margin, margin)
    return Certificate(False, float("inf"), margin)


def dominance_threshold(ctx: SphereContext, scatterers, ell_max: int, ell_min: int = 0):
    """Smallest ell0 such that certification holds for every ell in [ell0, ell_max].

    Returns None if certification fails at ell_max itself. Uses one ratio table
    per scatterer pair, so the whole scan costs O(N^2 ell_max).
    """
    pts = [as_point(p) for p in scatterers]
    n = len(pts)
    radii = np.zeros((n, ell_max + 1))
    for i in range(n):
        for j in range(i + 1, n):
            t = np.abs(cross_ratio_table(ctx, pts[i], pts[j], ell_max))
            radii[i] += t
            radii[j] += t
    ok = radii.max(axis=0) < 1.0  # radius relative to the diagonal
    if not ok[ell_max]:
        return None
    bad = np.nonzero(~ok[ell_min:])[0]
    return ell_min if len(bad) == 0 else ell_min + int(bad[-1]) + 1
