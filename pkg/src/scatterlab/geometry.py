"""Points on the unit sphere S^d in R^{d+1}, distances, and the Laplace spectrum."""
from __future__ import annotations

from dataclasses import dataclass
from math import comb, gamma, pi

import numpy as np

UNIT_TOL = 1e-12
ANTIPODAL_TOL = 1e-9


def sphere_volume(n: int) -> float:
    """Surface measure of the unit sphere S^n (vol(S^0) = 2 counts two points)."""
    if n < 0:
        raise ValueError(f"sphere dimension must be >= 0, got {n}")
    return 2.0 * pi ** ((n + 1) / 2) / gamma((n + 1) / 2)


def multiplicity(d: int, ell: int) -> int:
    """Dimension of the degree-``ell`` eigenspace of the Laplacian on S^d.

    Harmonic homogeneous polynomials of degree ell in d+1 variables:
    binom(ell+d, ell) - binom(ell+d-2, ell-2), in exact integer arithmetic.
    """
    if d <= 0:
        raise ValueError(f"dimension must be positive, got d={d}")
    if ell < 0:
        raise ValueError(f"degree must be nonnegative, got ell={ell}")
    lower = comb(ell + d - 2, ell - 2) if ell >= 2 else 0
    return comb(ell + d, ell) - lower


def multiplicities(d: int, ells) -> np.ndarray:
    """Vectorized :func:`multiplicity` returning float64 (exact below 2**53)."""
    ells = np.asarray(ells, dtype=np.int64)
    if np.any(ells < 0):
        raise ValueError("degrees must be nonnegative")
    if d == 2:
        return (2 * ells + 1).astype(float)
    if d == 3:
        return ((ells + 1) ** 2).astype(float)
    return np.array([multiplicity(d, int(k)) for k in ells.ravel()], dtype=float).reshape(ells.shape)


def eigenvalue(d: int, ell):
    """lambda_ell^2 = ell (ell + d - 1); exact for integer input."""
    if isinstance(ell, (int, np.integer)):
        return int(ell) * (int(ell) + d - 1)
    ell = np.asarray(ell, dtype=float)
    return ell * (ell + d - 1)


@dataclass(frozen=True)
class SpectralLevel:
    ell: int
    lambda_sq: int
    mult: int


@dataclass(frozen=True)
class SphereContext:
    """Spectral ground truth for S^d."""

    d: int

    def __post_init__(self):
        if self.d < 2:
            raise ValueError(f"SphereContext needs d >= 2, got {self.d}")

    @property
    def vol_sphere(self) -> float:
        return sphere_volume(self.d)

    @property
    def vol_equator(self) -> float:
        return sphere_volume(self.d - 1)

    @property
    def alpha(self) -> float:
        """Gegenbauer index (d-1)/2 attached to zonal harmonics."""
        return (self.d - 1) / 2

    def level(self, ell: int) -> SpectralLevel:
        return SpectralLevel(ell, eigenvalue(self.d, ell), multiplicity(self.d, ell))

    def lambda_sq(self, ell):
        return eigenvalue(self.d, ell)

    def mult(self, ell):
        if isinstance(ell, (int, np.integer)):
            return multiplicity(self.d, int(ell))
        return multiplicities(self.d, ell)

    def zonal_norm(self, ell):
        """||Z_ell^q||_{L^2} = sqrt(m_ell / vol(S^d))."""
        return np.sqrt(np.asarray(self.mult(ell), dtype=float) / self.vol_sphere)

    def require_scenario_dim(self):
        if self.d not in (2, 3):
            raise ValueError(f"scenario operations support d in {{2, 3}}, got d={self.d}")


def as_point(coords, tol: float = UNIT_TOL) -> np.ndarray:
    """Validate and return a unit vector as a float array."""
    p = np.asarray(coords, dtype=float)
    if p.ndim != 1:
        raise ValueError(f"a point must be a 1-D coordinate vector, got shape {p.shape}")
    nrm = np.linalg.norm(p)
    if abs(nrm - 1.0) > tol:
        raise ValueError(f"point is not on the unit sphere: |p| = {nrm!r}")
    return p


def normalize(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


def basis_vector(d: int, i: int) -> np.ndarray:
    e = np.zeros(d + 1)
    e[i] = 1.0
    return e


def geodesic_distance(p, q) -> float:
    """Great-circle distance arccos(<p, q>), with the dot product clamped to [-1, 1]."""
    c = float(np.dot(p, q))
    return float(np.arccos(min(1.0, max(-1.0, c))))


def distances_to(points, q) -> np.ndarray:
    """Row-wise geodesic distance from each row of ``points`` to ``q``."""
    c = np.asarray(points, dtype=float) @ np.asarray(q, dtype=float)
    return np.arccos(np.clip(c, -1.0, 1.0))


def antipode(q) -> np.ndarray:
    return -np.asarray(q, dtype=float)


def is_antipodal(p, q, tol: float = ANTIPODAL_TOL) -> bool:
    """True when d(p, q) lies within ``tol`` of pi.

    Measured through the chord |p + q| = 2 sin((pi - d)/2), which keeps full
    precision where arccos near -1 does not.
    """
    chord = float(np.linalg.norm(np.asarray(p, dtype=float) + np.asarray(q, dtype=float)))
    return 2 * np.arcsin(min(1.0, chord / 2)) < tol


def random_point(rng: np.random.Generator, d: int) -> np.ndarray:
    v = rng.standard_normal(d + 1)
    return v / np.linalg.norm(v)


def decompose_scatterers(points, tol: float = ANTIPODAL_TOL):
    """Split a scatterer list into antipodal pairs and lone points.

    Returns ``(pairs, singles)`` as index tuples ``(i, j)`` with
    ``points[j] ~ -points[i]`` and indices without an antipode in the set.
    """
    pts = [np.asarray(p, dtype=float) for p in points]
    used = set()
    pairs, singles = [], []
    for i, p in enumerate(pts):
        if i in used:
            continue
        partner = None
        for j in range(i + 1, len(pts)):
            if j not in used and is_antipodal(p, pts[j], tol):
                partner = j
                break
        if partner is None:
            singles.append(i)
        else:
            pairs.append((i, partner))
            used.add(partner)
        used.add(i)
    return pairs, singles
