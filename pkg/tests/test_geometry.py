from math import pi

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from scatterlab.geometry import (
    SphereContext, antipode, as_point, decompose_scatterers, eigenvalue, geodesic_distance,
    is_antipodal, multiplicities, multiplicity, random_point, sphere_volume,
)


def unit_vectors(d):
    return st.lists(st.floats(-1, 1), min_size=d + 1, max_size=d + 1).filter(
        lambda v: np.linalg.norm(v) > 0.1).map(lambda v: np.array(v) / np.linalg.norm(v))


def test_sphere_volumes():
    assert sphere_volume(1) == pytest.approx(2 * pi)
    assert sphere_volume(2) == pytest.approx(4 * pi)
    assert sphere_volume(3) == pytest.approx(2 * pi**2)
    with pytest.raises(ValueError):
        sphere_volume(-1)


@pytest.mark.parametrize("d, ell, expected", [(2, 3, 7), (3, 3, 16), (2, 0, 1), (3, 1, 4), (4, 2, 14)])
def test_multiplicity_examples(d, ell, expected):
    assert multiplicity(d, ell) == expected


def test_multiplicity_matches_closed_forms():
    ells = np.arange(0, 300)
    assert np.array_equal(multiplicities(2, ells), 2 * ells + 1)
    assert np.array_equal(multiplicities(3, ells), (ells + 1) ** 2)
    assert [multiplicity(5, int(k)) for k in range(10)] == list(multiplicities(5, range(10)).astype(int))


def test_multiplicity_rejects_bad_input():
    with pytest.raises(ValueError):
        multiplicity(2, -1)
    with pytest.raises(ValueError):
        multiplicity(0, 3)


def test_eigenvalue_integer_exact():
    assert eigenvalue(2, 10) == 110
    assert eigenvalue(3, 10) == 120


def test_context_basics():
    ctx = SphereContext(3)
    assert ctx.alpha == 1.0
    assert ctx.level(4).mult == 25
    assert ctx.zonal_norm(0) == pytest.approx(1 / np.sqrt(2 * pi**2))
    with pytest.raises(ValueError):
        SphereContext(1)
    with pytest.raises(ValueError):
        SphereContext(4).require_scenario_dim()


def test_as_point_validation():
    with pytest.raises(ValueError):
        as_point([1.0, 1.0, 0.0])
    with pytest.raises(ValueError):
        as_point([[1.0, 0.0]])


@given(unit_vectors(2), unit_vectors(2))
def test_distance_is_symmetric_and_bounded(p, q):
    d = geodesic_distance(p, q)
    assert 0 <= d <= pi
    assert d == pytest.approx(geodesic_distance(q, p), abs=1e-12)
    assert geodesic_distance(p, antipode(q)) == pytest.approx(pi - d, abs=1e-7)


@given(unit_vectors(3))
def test_antipode_detected(p):
    assert is_antipodal(p, antipode(p))
    assert not is_antipodal(p, p)


def test_near_antipodal_within_tolerance():
    p = np.array([0.0, 0.0, 1.0])
    eps = 1e-10
    q = -np.array([np.sin(eps), 0.0, np.cos(eps)])
    assert is_antipodal(p, q)
    eps = 1e-7
    q = -np.array([np.sin(eps), 0.0, np.cos(eps)])
    assert not is_antipodal(p, q)


def test_decompose_scatterers():
    rng = np.random.default_rng(0)
    a, b = random_point(rng, 2), random_point(rng, 2)
    pairs, singles = decompose_scatterers([a, b, -a])
    assert pairs == [(0, 2)] and singles == [1]
