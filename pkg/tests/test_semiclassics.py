from itertools import product
from math import pi

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import SeriesSpace
from scatterlab.geometry import SphereContext, basis_vector, random_point
from scatterlab.greens import ScenarioClassification, series_constant
from scatterlab.semiclassics import (
    FourierProfile, MeasureSpec, Monomial, SymbolPoly, carleson_check, flow_integral, fourier_profile,
    ladder_coefficients, matrix_element, measure_for_pair, measure_integral, momentum_matrix,
    multiplication_matrix, profile_norm_sq, symmetrized_element, witness_value, word_operators,
)
from scatterlab.zonal import ZonalExpansion

WORDS = ["".join(w) for n in range(1, 5) for w in product("KV", repeat=n)]


def unit(ctx, ell, ell_max):
    c = np.zeros(ell_max + 1, dtype=complex)
    c[ell] = 1
    return ZonalExpansion(ctx, basis_vector(ctx.d, ctx.d), c)


def test_ladder_entries_closed_forms():
    ells = np.arange(200)
    assert np.allclose(ladder_coefficients(SphereContext(3), 200), 0.5, atol=1e-14)
    expected = (ells + 1) / np.sqrt((2 * ells + 1) * (2 * ells + 3))
    assert np.allclose(ladder_coefficients(SphereContext(2), 200), expected, atol=1e-14)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_operators_hermitian(d):
    ctx = SphereContext(d)
    q = basis_vector(d, 0)
    k = multiplication_matrix(ctx, q, 50)
    v = momentum_matrix(ctx, q, 0.01, 50)
    assert k.hermitian_defect() == 0
    assert v.hermitian_defect() == 0
    assert np.allclose(v.dense(), v.dense().conj().T)


def test_operator_argument_checks():
    ctx = SphereContext(2)
    q = basis_vector(2, 0)
    with pytest.raises(ValueError):
        multiplication_matrix(ctx, q, 1)
    with pytest.raises(ValueError):
        momentum_matrix(ctx, q, -0.1, 10)
    with pytest.raises(ValueError):
        word_operators(ctx, q, 0.1, 10, "KX")
    with pytest.raises(ValueError):
        multiplication_matrix(ctx, q, 10).apply(np.ones(5))


@pytest.mark.parametrize("d", [2, 3])
def test_quantization_matches_series_oracle(d):
    """Every word of length <= 4 in K and V_h agrees with direct action on polynomials."""
    ctx = SphereContext(d)
    space = SeriesSpace(d, 80)
    h = 0.037
    n = 14
    basis = [space.zonal(ell) for ell in range(n + 5)]
    q = basis_vector(d, d)
    for word in WORDS:
        ops = word_operators(ctx, q, h, n + 8, word)
        worst = 0.0
        for ell in (0, 1, 5, n):
            image = space.word(word, basis[ell], h)
            u_in = unit(ctx, ell, ell)
            for m in range(max(0, ell - 4), ell + 5):
                ref = space.inner(basis[m], image)
                ours = matrix_element(unit(ctx, m, m), ops, u_in)
                worst = max(worst, abs(ours - ref))
        assert worst <= 1e-8, word


def test_matrix_element_truncation_guard():
    ctx = SphereContext(2)
    u = unit(ctx, 5, 10)
    ops = word_operators(ctx, u.center, 0.1, 11, "KK")
    with pytest.raises(ValueError):
        matrix_element(u, ops, u)
    other = ZonalExpansion(ctx, basis_vector(2, 0), [1.0])
    with pytest.raises(ValueError):
        matrix_element(other, ops, u)


@pytest.mark.parametrize("d", [2, 3])
@pytest.mark.parametrize("ell", [50, 400])
def test_energy_surface_and_commutator(d, ell):
    ctx = SphereContext(d)
    h = 1 / np.sqrt(ctx.lambda_sq(ell))
    u = unit(ctx, ell, ell)
    q = u.center
    k = multiplication_matrix(ctx, q, ell + 2)
    v = momentum_matrix(ctx, q, h, ell + 2)
    energy = matrix_element(u, [k, k], u) + matrix_element(u, [v, v], u)
    assert abs(energy - 1) <= 3 * h
    c = u.padded(ell + 2)
    comm = k.apply(v.apply(c)) - v.apply(k.apply(c))
    assert np.linalg.norm(comm) <= 3 * h


@given(st.integers(0, 10**6), st.sampled_from([2, 3]))
def test_witness_matches_matrix_element(seed, d):
    ctx = SphereContext(d)
    rng = np.random.default_rng(seed)
    c = rng.normal(size=30) + 1j * rng.normal(size=30)
    g = ZonalExpansion(ctx, basis_vector(d, 0), c)
    v = momentum_matrix(ctx, g.center, 0.05, 30)
    assert witness_value(g, 0.05) == pytest.approx(matrix_element(g, v, g).real, rel=1e-12, abs=1e-12)
    assert abs(matrix_element(g, v, g).imag) < 1e-10 * g.norm_sq()


def test_witness_zero_for_real_coefficients():
    ctx = SphereContext(2)
    g = ZonalExpansion(ctx, basis_vector(2, 0), np.arange(1.0, 20.0))
    assert witness_value(g, 0.1) == 0.0


def test_symmetrized_element_real():
    ctx = SphereContext(3)
    rng = np.random.default_rng(5)
    g = ZonalExpansion(ctx, basis_vector(3, 1), rng.normal(size=20) + 1j * rng.normal(size=20))
    for n_k, n_v in ((1, 1), (2, 1), (1, 2), (2, 2)):
        val = symmetrized_element(ctx, g, g, 0.02, n_k, n_v)
        assert abs(val.imag) <= 1e-12 * g.norm_sq()


def test_flow_integrals_centered():
    ctx = SphereContext(2)
    q = basis_vector(2, 2)
    one = Monomial(q)
    assert flow_integral(ctx, q, one, False) == pytest.approx(1)
    assert flow_integral(ctx, q, one, True) == pytest.approx(0.5)
    assert flow_integral(ctx, q, Monomial(q, 2, 0), False) == pytest.approx(0.5)
    assert flow_integral(ctx, q, Monomial(q, 1, 0), True) == pytest.approx(0, abs=1e-14)
    assert flow_integral(ctx, q, Monomial(q, 0, 1), True) == pytest.approx(1 / pi)
    # launched from -q the roles flip: kappa -> -kappa, varsigma -> -varsigma
    assert flow_integral(ctx, -q, Monomial(q, 0, 1), True) == pytest.approx(-1 / pi)


@pytest.mark.parametrize("d", [2, 3, 4])
@given(seed=st.integers(0, 10**6))
def test_flow_integral_cross_center_second_moment(d, seed):
    ctx = SphereContext(d)
    rng = np.random.default_rng(seed)
    p, q = random_point(rng, d), random_point(rng, d)
    c = float(p @ q)
    expected = 0.5 * (c * c + (1 - c * c) / d)
    assert flow_integral(ctx, p, Monomial(q, 2, 0), False).real == pytest.approx(expected, abs=1e-10)
    assert flow_integral(ctx, p, Monomial(q, 0, 2), False).real == pytest.approx(expected, abs=1e-10)


@given(st.floats(0, 2))
def test_pair_measure_mass(m_plus):
    ctx = SphereContext(3)
    m = measure_for_pair(ctx, basis_vector(3, 0), m_plus, 2 - m_plus)
    assert m.total_mass() == pytest.approx(1)
    assert measure_integral(m, Monomial(basis_vector(3, 0))) == pytest.approx(1)


def test_measure_validation():
    ctx = SphereContext(2)
    p, q = basis_vector(2, 0), basis_vector(2, 1)
    MeasureSpec(ctx, [p, q], [0.5, 0.5])
    with pytest.raises(ValueError):
        MeasureSpec(ctx, [p, q], [0.5, 0.6])
    with pytest.raises(ValueError):
        MeasureSpec(ctx, [p, q], [1.5, -0.5])
    with pytest.raises(ValueError):
        MeasureSpec(ctx, [p, -p, q], [2.5, 0.0, -0.25])
    with pytest.raises(ValueError):
        MeasureSpec(ctx, [p], [0.5, 0.5])


def test_symbol_poly_values():
    q = basis_vector(2, 0)
    s = SymbolPoly(q, [0, 1, 1])
    t = np.linspace(0, 2 * pi, 7)
    vals = s(np.cos(t), np.sin(t))
    assert np.allclose(vals, (1 + np.exp(1j * t)) / np.sqrt(2))
    with pytest.raises(ValueError):
        SymbolPoly(q, [1, 0])
    with pytest.raises(ValueError):
        SymbolPoly(q, [0, 0, 0])


def _cls1(sigma, beta, rho):
    c = ScenarioClassification(1, sigma, np.asarray(beta, complex), rho)
    return ScenarioClassification(1, sigma, c.beta_limit, rho, None, series_constant(c))


@given(st.floats(0.05, 0.95), st.sampled_from([1, -1]), st.floats(0, 2 * pi))
def test_profile_parseval_and_weights(sigma, rho, angle):
    prof = fourier_profile(_cls1(sigma, [np.cos(angle), np.sin(angle) * 1j], rho))
    assert profile_norm_sq(prof) == pytest.approx(2 * pi, rel=1e-9)
    mp, mm = prof.weights
    assert (mp + mm) / 2 == pytest.approx(1, rel=1e-9)


def test_profile_trivial_scenarios():
    prof = FourierProfile(4, 0.0, np.array([1, -1]), 1)
    assert np.allclose(prof(np.linspace(0, 6, 5)), 1)
    assert prof.weights == (1.0, 1.0)


def test_carleson_errors_decrease():
    rows = carleson_check(_cls1(0.3, [1, 0.5], 1), [16, 64, 256])
    errs = [r.sup_error for r in rows]
    assert errs[0] > errs[1] > errs[2]
    with pytest.raises(ValueError):
        carleson_check(ScenarioClassification(4, 0.0, np.array([1, -1]), 1), [4])
