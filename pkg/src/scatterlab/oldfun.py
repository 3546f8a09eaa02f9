"""Highest-weight harmonics concentrating on great circles, and their correction to vanish on Q.

In a frame whose first two axes span the plane of a great circle gamma,
Y_ell^gamma(x) = N_ell (x_1 + i x_2)^ell with

    N_ell = (Gamma(ell + (d+1)/2) / Gamma(ell + 1))^{1/2} / (sqrt(2) pi^{(d+1)/4}),

the constant that makes ||Y_ell^gamma||_{L^2(S^d)} = 1, since
int_{S^d} |x_1 + i x_2|^{2 ell} = 2 pi^{(d+1)/2} Gamma(ell+1) / Gamma(ell + (d+1)/2).
"""
from __future__ import annotations

from dataclasses import dataclass
from math import pi

import numpy as np
from scipy.special import gammaln, roots_jacobi

from .geometry import SphereContext, as_point, sphere_volume
from .quadrature import sphere_rule
from .zonal import build_interpolation_matrix, certify_invertible, zonal_eval

DISJOINT_TOL = 1e-6


class NotCertifiedError(ValueError):
    """The interpolation matrix at this degree could not be certified invertible."""


@dataclass(frozen=True)
class GeodesicFrame:
    """Rotation R taking span(e_1, e_2) to the plane of the target great circle.

    The circle is gamma(s) = cos(s) R e_1 + sin(s) R e_2.
    """

    rotation: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.rotation, dtype=float)
        n = r.shape[0]
        if r.shape != (n, n) or n < 3:
            raise ValueError("rotation must be square of size d + 1 >= 3")
        if np.max(np.abs(r.T @ r - np.eye(n))) > 1e-12:
            raise ValueError("rotation is not orthogonal")
        if np.linalg.det(r) < 0:
            raise ValueError("rotation must have determinant +1")
        object.__setattr__(self, "rotation", r)

    @classmethod
    def reference(cls, d: int) -> "GeodesicFrame":
        return cls(np.eye(d + 1))

    @classmethod
    def from_plane(cls, u, v) -> "GeodesicFrame":
        """Frame for the great circle through u heading toward v (u, v need not be orthogonal)."""
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        n = len(u)
        basis = np.column_stack([u, v, np.eye(n)])
        q, r = np.linalg.qr(basis)
        q = q[:, :n] * np.where(np.diag(r)[:n] < 0, -1.0, 1.0)
        if abs(np.dot(q[:, 1], v - np.dot(q[:, 0], v) * q[:, 0])) < 1e-12:
            raise ValueError("u and v must be linearly independent")
        if np.linalg.det(q) < 0:
            q[:, -1] = -q[:, -1]
        return cls(q)

    @property
    def d(self) -> int:
        return self.rotation.shape[0] - 1

    @property
    def isotropic(self) -> np.ndarray:
        """a = R (e_1 + i e_2), so that x_1 + i x_2 in frame coordinates is a . x."""
        return self.rotation[:, 0] + 1j * self.rotation[:, 1]

    def local(self, x) -> np.ndarray:
        return np.asarray(x, dtype=float) @ self.rotation

    def point(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        return np.multiply.outer(np.cos(s), self.rotation[:, 0]) + np.multiply.outer(np.sin(s), self.rotation[:, 1])


def log_beam_normalizer(d: int, ell: int) -> float:
    return float(0.5 * (gammaln(ell + (d + 1) / 2) - gammaln(ell + 1)) - 0.5 * np.log(2.0) - (d + 1) / 4 * np.log(pi))


def beam_normalizer(d: int, ell: int) -> float:
    return float(np.exp(log_beam_normalizer(d, ell)))


def beam_eval(frame: GeodesicFrame, ell: int, x) -> np.ndarray:
    """Y_ell^gamma(x), formed as exp(log N + ell log|z|) e^{i ell arg z} to avoid underflow."""
    if ell < 0:
        raise ValueError("ell must be nonnegative")
    y = frame.local(x)
    z = y[..., 0] + 1j * y[..., 1]
    mag = np.abs(z)
    logn = log_beam_normalizer(frame.d, ell)
    if ell == 0:
        return np.full(mag.shape, np.exp(logn), dtype=complex) if mag.ndim else complex(np.exp(logn))
    with np.errstate(divide="ignore"):
        logmag = logn + ell * np.log(mag)
    out = np.exp(logmag) * np.exp(1j * ell * np.angle(z))
    return out if np.ndim(out) else complex(out)


def beam_inner_product(fa: GeodesicFrame, fb: GeodesicFrame, ell: int) -> complex:
    """<Y_ell^a, Y_ell^b> = (conj(a) . b / 2)^ell for the isotropic vectors a, b of the two frames."""
    return complex((np.vdot(fa.isotropic, fb.isotropic) / 2) ** ell)


def beam_norm_sq_quadrature(d: int, ell: int) -> float:
    """||Y_ell||^2 by one-dimensional quadrature in u = x_1^2 + x_2^2.

    |Y|^2 = N^2 u^ell and the push-forward of surface measure to u is
    pi vol(S^{d-2}) (1 - u)^{(d-3)/2} du on [0, 1].
    """
    a = (d - 3) / 2
    x, w = roots_jacobi(ell // 2 + 2, a, 0.0)
    u = (x + 1) / 2
    logs = 2 * log_beam_normalizer(d, ell) + ell * np.log(u)
    return float(pi * sphere_volume(d - 2) / 2 ** (a + 1) * np.sum(w * np.exp(logs)))


def distance_to_geodesic(frame: GeodesicFrame, x) -> np.ndarray:
    """Geodesic distance from x to the great circle: arccos of the in-plane length."""
    y = frame.local(x)
    rho = np.hypot(y[..., 0], y[..., 1])
    return np.arccos(np.clip(rho, -1.0, 1.0))


@dataclass
class BeamCombination:
    """Y_ell^T = sum_gamma sqrt(b_gamma) Y_ell^gamma."""

    geodesics: list
    weights: np.ndarray
    ell: int

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=float)
        if len(self.weights) != len(self.geodesics) or not self.geodesics:
            raise ValueError("one weight per geodesic, at least one geodesic")
        if np.any(self.weights < 0) or abs(self.weights.sum() - 1) > 1e-12:
            raise ValueError("weights must be nonnegative and sum to 1")
        if len({g.d for g in self.geodesics}) != 1:
            raise ValueError("geodesics live on spheres of different dimension")

    @property
    def d(self) -> int:
        return self.geodesics[0].d

    def at(self, ell: int) -> "BeamCombination":
        return BeamCombination(self.geodesics, self.weights, ell)

    def evaluate(self, x) -> np.ndarray:
        out = 0
        for g, b in zip(self.geodesics, self.weights):
            if b:
                out = out + np.sqrt(b) * beam_eval(g, self.ell, x)
        return out

    def gram(self) -> np.ndarray:
        n = len(self.geodesics)
        return np.array([[beam_inner_product(self.geodesics[i], self.geodesics[j], self.ell)
                          for j in range(n)] for i in range(n)])

    def norm_sq(self) -> float:
        s = np.sqrt(self.weights)
        return float(np.real(s @ self.gram() @ s))


def quadrature_norm_sq(fn, d: int, degree: int) -> float:
    """||fn||^2 over S^d with the tensor rule exact to ``degree``."""
    pts, w = sphere_rule(d, degree)
    return float(np.sum(w * np.abs(fn(pts)) ** 2))


@dataclass
class VanishingCorrection:
    alpha: np.ndarray
    scatterers: list
    beam: BeamCombination
    defect: float
    rhs_norm: float
    min_distance: float
    inverse_norm_bound: float

    @property
    def decay_asserted(self) -> bool:
        """Exponential smallness of alpha is only claimed for Q away from every geodesic."""
        return self.min_distance > DISJOINT_TOL

    def correction(self, x) -> np.ndarray:
        ctx = SphereContext(self.beam.d)
        out = 0
        for a, q in zip(self.alpha, self.scatterers):
            out = out + a * zonal_eval(ctx, q, self.beam.ell, x, normalized=True)
        return out

    def evaluate(self, x) -> np.ndarray:
        """w_ell = Y_ell^T - sum_q alpha_q z_ell^q."""
        return self.beam.evaluate(x) - self.correction(x)

    def correction_norm(self) -> float:
        """||sum_q alpha_q z_ell^q||, from the normalized zonal Gram matrix."""
        ctx = SphereContext(self.beam.d)
        m = build_interpolation_matrix(ctx, self.scatterers, self.beam.ell)
        gram = m.entries / ctx.zonal_norm(self.beam.ell)
        return float(np.sqrt(max(np.real(np.vdot(self.alpha, gram @ self.alpha)), 0.0)))


def vanishing_correction(beam: BeamCombination, scatterers) -> VanishingCorrection:
    """Solve Z_ell alpha = (Y_ell^T(p))_p so that Y_ell^T - sum alpha_q z_ell^q vanishes on Q."""
    ctx = SphereContext(beam.d)
    pts = [as_point(p) for p in scatterers]
    m = build_interpolation_matrix(ctx, pts, beam.ell)
    cert = certify_invertible(m)
    if not cert.invertible:
        raise NotCertifiedError(f"interpolation matrix not certified at ell={beam.ell}; raise ell")
    rhs = np.array([beam.evaluate(p) for p in pts], dtype=complex)
    alpha = np.linalg.solve(m.entries, rhs)
    corr = VanishingCorrection(alpha, pts, beam, 0.0, float(np.linalg.norm(rhs)),
                               float(min(distance_to_geodesic(g, np.array(pts)).min() for g in beam.geodesics)),
                               cert.inverse_norm_bound)
    corr.defect = float(np.max(np.abs(corr.evaluate(np.array(pts)))))
    return corr


# ---------------------------------------------------------------------------
# observables


def geodesic_average(frame: GeodesicFrame, q, power: int, n: int = 64) -> float:
    """int_0^{2 pi} cos(d(gamma(s), q))^power ds / (2 pi), by the trapezoid rule."""
    s = 2 * pi * np.arange(n) / n
    return float(np.mean((frame.point(s) @ np.asarray(q, dtype=float)) ** power))


def beam_position_moment(frame: GeodesicFrame, ell: int, q, power: int) -> float:
    """<Y_ell^gamma, (q . x)^power Y_ell^gamma> in closed form for power 1 or 2.

    Power 1 vanishes by the x -> -x symmetry of |Y|^2. For power 2 the moments are
    x_1^2, x_2^2 -> r/2 and each remaining coordinate -> (1 - r)/(d - 1), with
    r = I_{ell+1}/I_ell = (ell + 1)/(ell + (d+1)/2).
    """
    if power == 1:
        return 0.0
    if power != 2:
        raise ValueError("closed form available for power 1 or 2")
    d = frame.d
    y = frame.local(q)
    r = (ell + 1) / (ell + (d + 1) / 2)
    in_plane = y[0] ** 2 + y[1] ** 2
    return float(in_plane * r / 2 + (1 - in_plane) * (1 - r) / (d - 1))


@dataclass(frozen=True)
class ObservableRow:
    ell: int
    measured: float
    limit: float
    error: float


def beam_observable_check(beam: BeamCombination, ell_list, q, power: int = 1,
                          cross_degree_cap: int = 80) -> list[ObservableRow]:
    """<Y_ell^T, (cos r_q)^power Y_ell^T> against the weighted geodesic averages.

    Diagonal terms are exact; cross terms between distinct geodesics go through
    the tensor quadrature and are limited to ell <= ``cross_degree_cap``.
    """
    q = as_point(q)
    limit = float(sum(b * geodesic_average(g, q, power) for g, b in zip(beam.geodesics, beam.weights)))
    rows = []
    for ell in ell_list:
        val = sum(b * beam_position_moment(g, ell, q, power) for g, b in zip(beam.geodesics, beam.weights))
        active = [(g, b) for g, b in zip(beam.geodesics, beam.weights) if b > 0]
        if len(active) > 1:
            if ell > cross_degree_cap:
                raise ValueError(f"cross terms need quadrature; ell={ell} exceeds cap {cross_degree_cap}")
            pts, w = sphere_rule(beam.d, 2 * ell + power)
            obs = (pts @ q) ** power
            for i, (ga, ba) in enumerate(active):
                ya = beam_eval(ga, ell, pts)
                for gb, bb in active[i + 1:]:
                    yb = beam_eval(gb, ell, pts)
                    val += 2 * np.sqrt(ba * bb) * float(np.real(np.sum(w * np.conj(ya) * obs * yb)))
        rows.append(ObservableRow(int(ell), float(val), limit, abs(float(val) - limit)))
    return rows
