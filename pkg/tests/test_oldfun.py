from math import pi

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import vol
from scatterlab.geometry import basis_vector, random_point
from scatterlab.oldfun import (
    BeamCombination, GeodesicFrame, NotCertifiedError, beam_eval, beam_inner_product, beam_norm_sq_quadrature,
    beam_normalizer, beam_observable_check, beam_position_moment, distance_to_geodesic, geodesic_average,
    quadrature_norm_sq, vanishing_correction,
)
from scatterlab.quadrature import sphere_rule

seeds = st.integers(0, 10**6)


def random_frame(rng, d):
    return GeodesicFrame.from_plane(random_point(rng, d), random_point(rng, d))


@pytest.mark.parametrize("d", [2, 3, 4])
def test_normalizer_degree_zero(d):
    assert beam_normalizer(d, 0) == pytest.approx(1 / np.sqrt(vol(d)))


@pytest.mark.parametrize("d", [2, 3, 5])
@pytest.mark.parametrize("ell", [0, 1, 2, 7])
def test_unit_norm_tensor_quadrature(d, ell):
    frame = random_frame(np.random.default_rng(ell), d)
    val = quadrature_norm_sq(lambda x: beam_eval(frame, ell, x), d, 2 * ell + 2)
    assert val == pytest.approx(1.0, rel=1e-12)


@pytest.mark.parametrize("d", [2, 3])
@pytest.mark.parametrize("ell", [10, 300, 1000])
def test_unit_norm_radial_quadrature(d, ell):
    assert beam_norm_sq_quadrature(d, ell) == pytest.approx(1.0, abs=1e-9)


@given(seeds, st.sampled_from([2, 3]), st.integers(1, 200))
def test_decay_off_geodesic(seed, d, ell):
    rng = np.random.default_rng(seed)
    frame = random_frame(rng, d)
    x = random_point(rng, d)
    theta = float(distance_to_geodesic(frame, x))
    on = abs(beam_eval(frame, ell, frame.point(0.3)))
    assert on == pytest.approx(beam_normalizer(d, ell))
    assert abs(beam_eval(frame, ell, x)) == pytest.approx(on * np.cos(theta) ** ell, rel=1e-9, abs=1e-300)


def test_no_underflow_far_from_geodesic():
    frame = GeodesicFrame.reference(2)
    val = beam_eval(frame, 100000, np.array([0.0, 0.0, 1.0]))
    assert val == 0
    assert np.isfinite(beam_eval(frame, 100000, np.array([0.6, 0.8, 0.0])))


@given(seeds, st.sampled_from([2, 3]))
def test_isotropic_vector(seed, d):
    frame = random_frame(np.random.default_rng(seed), d)
    a = frame.isotropic
    assert abs(a @ a) < 1e-12
    assert np.vdot(a, a).real == pytest.approx(2)


@pytest.mark.parametrize("ell", [1, 3, 6])
def test_harmonic_ambient_extension(ell):
    """The homogeneous extension N (a . x)^ell has zero Euclidean Laplacian."""
    rng = np.random.default_rng(ell)
    frame = random_frame(rng, 3)
    x0 = 0.8 * random_point(rng, 3)
    step = 1e-3
    lap = 0
    for i in range(4):
        e = step * basis_vector(3, i)
        lap += beam_eval(frame, ell, x0 + e) - 2 * beam_eval(frame, ell, x0) + beam_eval(frame, ell, x0 - e)
    assert abs(lap / step**2) < 1e-5


@pytest.mark.parametrize("d", [2, 3])
@pytest.mark.parametrize("ell", [0, 2, 5])
def test_cross_inner_product_vs_quadrature(d, ell):
    rng = np.random.default_rng(10 * d + ell)
    fa, fb = random_frame(rng, d), random_frame(rng, d)
    pts, w = sphere_rule(d, 2 * ell + 2)
    quad = np.sum(w * np.conj(beam_eval(fa, ell, pts)) * beam_eval(fb, ell, pts))
    assert beam_inner_product(fa, fb, ell) == pytest.approx(quad, abs=1e-12)


def test_frame_validation():
    with pytest.raises(ValueError):
        GeodesicFrame(np.diag([1.0, 1.0, -1.0]))
    with pytest.raises(ValueError):
        GeodesicFrame(2 * np.eye(3))
    with pytest.raises(ValueError):
        GeodesicFrame.from_plane([1, 0, 0], [2, 0, 0])
    f = GeodesicFrame.from_plane([0, 0, 1], [1, 0, 1])
    assert np.allclose(f.point(0.0), [0, 0, 1])
    assert np.allclose(f.point(pi / 2), [1, 0, 0])


def test_combination_validation_and_norm():
    rng = np.random.default_rng(0)
    frames = [random_frame(rng, 2) for _ in range(3)]
    with pytest.raises(ValueError):
        BeamCombination(frames, [0.5, 0.5], 10)
    with pytest.raises(ValueError):
        BeamCombination(frames, [0.5, 0.6, -0.1], 10)
    beam = BeamCombination(frames, [0.2, 0.3, 0.5], 400)
    assert beam.norm_sq() == pytest.approx(1, abs=1e-6)
    small = beam.at(3)
    quad = quadrature_norm_sq(small.evaluate, 2, 8)
    assert small.norm_sq() == pytest.approx(quad, rel=1e-12)


def test_vanishing_correction_vanishes_on_q():
    rng = np.random.default_rng(4)
    frame = GeodesicFrame.reference(2)
    pts = [np.array([0.3, 0.2, 0.9]), np.array([-0.5, 0.1, -0.6])]
    pts = [p / np.linalg.norm(p) for p in pts]
    beam = BeamCombination([frame], [1.0], 60)
    corr = vanishing_correction(beam, pts)
    assert corr.defect < 1e-12
    assert corr.decay_asserted
    assert np.max(np.abs(corr.evaluate(np.array(pts)))) < 1e-12
    x = random_point(rng, 2)
    assert corr.evaluate(x) == pytest.approx(beam.evaluate(x) - corr.correction(x))


def test_vanishing_correction_shrinks_with_degree():
    pts = [np.array([0.0, 0.6, 0.8]), np.array([0.6, 0.0, -0.8])]
    frame = GeodesicFrame.reference(2)
    norms = [vanishing_correction(BeamCombination([frame], [1.0], ell), pts).correction_norm()
             for ell in (40, 80, 160)]
    assert norms[0] > norms[1] > norms[2]
    assert norms[2] < 1e-10


def test_vanishing_correction_not_certified_for_antipodes():
    q = np.array([0.0, 0.6, 0.8])
    beam = BeamCombination([GeodesicFrame.reference(2)], [1.0], 50)
    with pytest.raises(NotCertifiedError):
        vanishing_correction(beam, [q, -q])


@given(seeds, st.sampled_from([2, 3]), st.integers(1, 8))
def test_position_moment_vs_quadrature(seed, d, ell):
    rng = np.random.default_rng(seed)
    frame = random_frame(rng, d)
    q = random_point(rng, d)
    pts, w = sphere_rule(d, 2 * ell + 2)
    y = beam_eval(frame, ell, pts)
    for power in (1, 2):
        quad = np.sum(w * np.abs(y) ** 2 * (pts @ q) ** power)
        assert beam_position_moment(frame, ell, q, power) == pytest.approx(quad, abs=1e-12)
    with pytest.raises(ValueError):
        beam_position_moment(frame, ell, q, 3)


def test_geodesic_average_examples():
    frame = GeodesicFrame.reference(2)
    assert geodesic_average(frame, [1, 0, 0], 2) == pytest.approx(0.5)
    assert geodesic_average(frame, [0, 0, 1], 2) == pytest.approx(0.0)
    assert geodesic_average(frame, [1, 0, 0], 1) == pytest.approx(0.0, abs=1e-15)


def test_observable_rate_single_and_combined():
    rng = np.random.default_rng(2)
    q = random_point(rng, 3)
    single = BeamCombination([random_frame(rng, 3)], [1.0], 0)
    for row in beam_observable_check(single, [50, 200, 1000], q, power=2):
        assert row.error <= 5 / row.ell
    combo = BeamCombination([random_frame(rng, 3), random_frame(rng, 3)], [0.4, 0.6], 0)
    rows = beam_observable_check(combo, [10, 20, 40], q, power=2)
    assert all(r.error <= 5 / r.ell for r in rows)
    with pytest.raises(ValueError):
        beam_observable_check(combo, [100], q, power=2)
