"""Quadrature rules on S^d that are exact for polynomials of a given degree.

These serve two purposes: reducing radial (zonal) inner products to a single
integral in s = cos r, and providing independent oracles for identities that
production code evaluates in closed form.
"""
from __future__ import annotations

from functools import lru_cache
from math import pi

import numpy as np
from scipy.special import roots_jacobi

from .geometry import sphere_volume


@lru_cache(maxsize=64)
def _jacobi(n: int, a: float, b: float):
    x, w = roots_jacobi(n, a, b)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def radial_rule(d: int, n: int):
    """Nodes s and weights for  int_{S^d} f(x . q) dx = int_{-1}^{1} f(s) vol(S^{d-1}) (1 - s^2)^{(d-2)/2} ds.

    Gauss-Jacobi with n nodes; exact for polynomial f of degree <= 2n - 1.
    For d = 2 this is plain Gauss-Legendre.
    """
    a = (d - 2) / 2
    s, w = _jacobi(n, a, a)
    return s, w * sphere_volume(d - 1)


def radial_nodes_for(ell: int) -> int:
    """Node count max(200, 2 ell + 20) used for degree-ell radial products."""
    return max(200, 2 * ell + 20)


def plane_rule(d: int, degree: int):
    """Rule for functions of (x_1, x_2) only, integrated over S^d.

    The push-forward of surface measure onto the unit disk is
    vol(S^{d-2}) (1 - rho^2)^{(d-3)/2} dx_1 dx_2. In polar form with u = rho^2
    this becomes (vol(S^{d-2}) / 2) (1 - u)^{(d-3)/2} du dphi. Returns arrays
    ``(x1, x2, weights)`` exact for polynomials in (x_1, x_2) of total degree
    <= ``degree``.
    """
    nu = degree // 2 + 1
    a = (d - 3) / 2
    x, w = _jacobi(nu, a, 0.0)
    u = (x + 1) / 2
    wu = w / 2 ** (a + 1)
    nphi = degree + 1
    phi = 2 * pi * np.arange(nphi) / nphi
    rho = np.sqrt(u)
    x1 = np.outer(rho, np.cos(phi)).ravel()
    x2 = np.outer(rho, np.sin(phi)).ravel()
    weights = np.outer(wu, np.full(nphi, 2 * pi / nphi)).ravel() * sphere_volume(d - 2) / 2
    return x1, x2, weights


def sphere_rule(d: int, degree: int):
    """Full tensor rule on S^d, exact for polynomials of degree <= ``degree``.

    Built recursively: the last coordinate carries Gauss-Jacobi weight
    (1 - s^2)^{(k-2)/2} on S^k, the rest is a scaled S^{k-1} rule; S^1 uses the
    trapezoid rule. Returns ``(points, weights)`` with points of shape (n, d + 1).
    """
    if d < 1:
        raise ValueError("sphere_rule needs d >= 1")
    nphi = degree + 1
    phi = 2 * pi * np.arange(nphi) / nphi
    pts = np.column_stack([np.cos(phi), np.sin(phi)])
    wts = np.full(nphi, 2 * pi / nphi)
    for k in range(2, d + 1):
        a = (k - 2) / 2
        s, w = _jacobi(degree // 2 + 1, a, a)
        c = np.sqrt(1 - s**2)
        new_pts = np.concatenate(
            [np.column_stack([ci * pts, np.full(len(pts), si)]) for si, ci in zip(s, c)]
        )
        wts = np.concatenate([wi * wts for wi in w])
        pts = new_pts
    return pts, wts


def plane_frame(p, q) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal (e1, e2) with e1 = p and q in span(e1, e2)."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    v = q - np.dot(p, q) * p
    nv = np.linalg.norm(v)
    if nv < 1e-14:
        # q = +-p: any direction orthogonal to p completes the frame
        trial = np.eye(len(p))[np.argmin(np.abs(p))]
        v = trial - np.dot(p, trial) * p
        nv = np.linalg.norm(v)
    return p, v / nv
