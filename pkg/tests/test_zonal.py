from math import pi

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from numpy.polynomial.legendre import leggauss

from oracles import SeriesSpace, radial_nodes, vol
from scatterlab.geometry import SphereContext, antipode, basis_vector, random_point
from scatterlab.quadrature import plane_rule, radial_rule, sphere_rule
from scatterlab.zonal import (
    ZonalExpansion, build_interpolation_matrix, certify_invertible, cross_ratio_table,
    dominance_threshold, zonal_eval, zonal_inner_product, zonal_radial,
)

seeds = st.integers(0, 2**31 - 1)


def s2_tensor_rule(n):
    """Gauss-Legendre in z times trapezoid in phi; independent of the package."""
    z, wz = leggauss(n)
    phi = 2 * pi * np.arange(2 * n) / (2 * n)
    r = np.sqrt(1 - z**2)
    pts = np.stack([np.outer(r, np.cos(phi)), np.outer(r, np.sin(phi)),
                    np.outer(z, np.ones_like(phi))], axis=-1).reshape(-1, 3)
    w = np.outer(wz, np.full(len(phi), pi / n)).ravel()
    return pts, w


@pytest.mark.parametrize("d", [2, 3])
@pytest.mark.parametrize("ell", [0, 1, 5, 40, 150])
def test_zonal_unit_norm_oracle(d, ell):
    ctx = SphereContext(d)
    s, w = radial_nodes(d, 200)
    vals = zonal_radial(ctx, ell, np.arccos(s), normalized=True)
    assert np.sum(w * vals**2) == pytest.approx(1.0, rel=1e-10)


@pytest.mark.parametrize("d", [2, 3])
def test_radial_rule_matches_oracle(d):
    s, w = radial_rule(d, 30)
    so, wo = radial_nodes(d, 30)
    f = lambda x: x**10 + x**3 + 1
    assert np.sum(w * f(s)) == pytest.approx(np.sum(wo * f(so)), rel=1e-13)
    assert np.sum(w) == pytest.approx(vol(d))


@pytest.mark.parametrize("d", [2, 3, 4])
def test_sphere_rule_moments(d):
    pts, w = sphere_rule(d, 8)
    assert np.sum(w) == pytest.approx(vol(d))
    assert np.allclose(np.linalg.norm(pts, axis=1), 1)
    # int x_i^2 = vol/(d+1), int x_i^4 = 3 vol/((d+1)(d+3))
    for i in range(d + 1):
        assert np.sum(w * pts[:, i] ** 2) == pytest.approx(vol(d) / (d + 1))
        assert np.sum(w * pts[:, i] ** 4) == pytest.approx(3 * vol(d) / ((d + 1) * (d + 3)))


@pytest.mark.parametrize("d", [2, 3, 5])
def test_plane_rule_moments(d):
    x1, x2, w = plane_rule(d, 6)
    assert np.sum(w) == pytest.approx(vol(d))
    assert np.sum(w * x1**2) == pytest.approx(vol(d) / (d + 1))
    assert np.sum(w * x1**2 * x2**2) == pytest.approx(vol(d) / ((d + 1) * (d + 3)))


@given(seeds, st.integers(0, 25))
def test_reproducing_identity_s2(seed, ell):
    ctx = SphereContext(2)
    rng = np.random.default_rng(seed)
    p, q = random_point(rng, 2), random_point(rng, 2)
    pts, w = s2_tensor_rule(40)
    quad = np.sum(w * zonal_eval(ctx, p, ell, pts) * zonal_eval(ctx, q, ell, pts))
    assert quad == pytest.approx(zonal_inner_product(ctx, p, q, ell), abs=1e-10)
    assert zonal_eval(ctx, q, ell, p) == pytest.approx(zonal_eval(ctx, p, ell, q), abs=1e-12)


@given(seeds, st.integers(0, 60), st.sampled_from([2, 3]))
def test_parity(seed, ell, d):
    ctx = SphereContext(d)
    rng = np.random.default_rng(seed)
    q, x = random_point(rng, d), random_point(rng, d)
    a = zonal_eval(ctx, q, ell, -x)
    b = zonal_eval(ctx, q, ell, x)
    assert a == pytest.approx((-1) ** ell * b, abs=1e-10 * max(1, abs(b)))
    assert zonal_eval(ctx, antipode(q), ell, x) == pytest.approx(a, abs=1e-10 * max(1, abs(b)))


def test_distinct_degrees_orthogonal_s3():
    ctx = SphereContext(3)
    space = SeriesSpace(3, 100)
    for a, b in ((3, 5), (10, 12), (0, 40)):
        ca, cb = space.zonal(a), space.zonal(b)
        assert abs(space.inner(ca, cb)) < 1e-12
    s, w = radial_nodes(3, 100)
    va = zonal_radial(ctx, 7, np.arccos(s))
    vb = zonal_radial(ctx, 9, np.arccos(s))
    assert abs(np.sum(w * va * vb)) < 1e-12


def test_cross_ratio_table_antipodal_and_equal():
    ctx = SphereContext(2)
    q = basis_vector(2, 2)
    assert np.allclose(cross_ratio_table(ctx, q, -q, 6), [1, -1, 1, -1, 1, -1, 1])
    assert np.allclose(cross_ratio_table(ctx, q, q, 6), 1)


def test_expansion_evaluate_and_inner():
    ctx = SphereContext(3)
    q = basis_vector(3, 0)
    e = ZonalExpansion(ctx, q, [0, 2.0, 0, 1j])
    x = np.array([0.6, 0.8, 0, 0])
    expected = 2 * zonal_eval(ctx, q, 1, x, True) + 1j * zonal_eval(ctx, q, 3, x, True)
    assert e.evaluate(x) == pytest.approx(expected)
    assert e.norm_sq() == pytest.approx(5)
    assert e.normalized().norm() == pytest.approx(1)
    assert e.inner(e) == pytest.approx(5)
    assert len(e.padded(10)) == 11
    with pytest.raises(ValueError):
        e.inner(ZonalExpansion(ctx, basis_vector(3, 1), [1]))


def test_interpolation_two_orthogonal_points():
    ctx = SphereContext(2)
    pts = [basis_vector(2, 0), basis_vector(2, 1)]
    m = build_interpolation_matrix(ctx, pts, 3)
    # odd degree and orthogonal points: C_3(0) = 0, so the matrix is diagonal
    assert np.allclose(m.entries - np.diag(np.diag(m.entries)), 0)
    cert = certify_invertible(m)
    assert cert.invertible
    assert cert.inverse_norm_bound == pytest.approx(1 / ctx.zonal_norm(3))


def test_interpolation_antipodal_never_certified():
    ctx = SphereContext(2)
    q = basis_vector(2, 2)
    for ell in (10, 11, 500):
        assert not certify_invertible(build_interpolation_matrix(ctx, [q, -q], ell)).invertible
    assert dominance_threshold(ctx, [q, -q], 200) is None


def test_interpolation_rejects_duplicates():
    q = basis_vector(2, 2)
    with pytest.raises(ValueError):
        build_interpolation_matrix(SphereContext(2), [q, q], 4)


def test_dominance_threshold_matches_direct_scan():
    ctx = SphereContext(2)
    rng = np.random.default_rng(7)
    pts = [random_point(rng, 2) for _ in range(4)]
    ell0 = dominance_threshold(ctx, pts, 400)
    assert ell0 is not None
    for ell in range(ell0, 401, 37):
        assert certify_invertible(build_interpolation_matrix(ctx, pts, ell)).invertible
    if ell0 > 0:
        assert not certify_invertible(build_interpolation_matrix(ctx, pts, ell0 - 1)).invertible


def test_certified_bound_controls_inverse():
    ctx = SphereContext(3)
    rng = np.random.default_rng(3)
    pts = [random_point(rng, 3) for _ in range(3)]
    ell0 = dominance_threshold(ctx, pts, 300)
    m = build_interpolation_matrix(ctx, pts, 300)
    cert = certify_invertible(m)
    inv_inf = np.abs(np.linalg.inv(m.entries)).sum(axis=1).max()
    assert ell0 is not None and inv_inf <= cert.inverse_norm_bound * (1 + 1e-12)
