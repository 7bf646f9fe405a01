import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from qcbxy.xy_model import (CouplingPoint, Region, ThermalPoint, dispersion, gap, mode_data,
                            modes, quasiparticle_energies)

gammas = st.floats(-1.0, 1.0)
lams = st.floats(-2.5, 2.5)
momenta = st.floats(-np.pi, np.pi)


def brute_force_gap(c, n=2_000_001):
    k = np.linspace(0.0, np.pi, n)
    return dispersion(k, c)[2].min()


def test_modes_three():
    np.testing.assert_allclose(modes(3), [-2 * np.pi / 3, 0.0, 2 * np.pi / 3])


def test_modes_five_symmetric():
    k = modes(5)
    assert len(k) == 5
    assert abs(k.sum()) < 1e-15
    assert 0.0 in k


@pytest.mark.parametrize("n", [4, 2, 0, -3, 1, 3.5])
def test_modes_rejects_bad_n(n):
    with pytest.raises(ValueError):
        modes(n)


def test_mode_data_quarter_turn():
    m = mode_data(np.pi / 2, CouplingPoint(0.0, 1.0))
    assert abs(m.epsilon) < 1e-15
    assert m.delta == pytest.approx(1.0)
    assert m.lambda_k == pytest.approx(1.0)
    assert m.theta == pytest.approx(np.pi / 2)


def test_mode_data_zero_momentum():
    m = mode_data(0.0, CouplingPoint(0.3, 0.42))
    assert m.epsilon == pytest.approx(0.7)
    assert m.delta == 0.0
    assert m.lambda_k == pytest.approx(0.7)
    assert m.theta == 0.0


def test_dtheta_dlambda_finite_difference():
    h = 1e-6
    def theta(lam):
        return mode_data(np.pi / 2, CouplingPoint(lam, 1.0)).theta
    fd = (theta(h) - theta(-h)) / (2 * h)
    assert fd == pytest.approx(1.0, rel=1e-8)
    assert mode_data(np.pi / 2, CouplingPoint(0.0, 1.0)).dtheta_dlambda == pytest.approx(1.0)


def test_gapless_mode_flags_derivatives():
    m = mode_data(0.0, CouplingPoint(1.0, 0.5))
    assert m.lambda_k == 0
    assert np.isnan(m.dtheta_dlambda) and np.isnan(m.dtheta_dgamma)


def test_dtheta_dgamma_regular_at_gamma_zero():
    m = mode_data(1.0, CouplingPoint(0.2, 0.0))
    assert np.isfinite(m.dtheta_dgamma)
    assert m.dtheta_dgamma == pytest.approx(np.sin(1.0) / (np.cos(1.0) - 0.2))


@pytest.mark.parametrize("lam, gamma, region, value", [
    (1.5, 1.0, Region.A, 0.5),
    (1.0, 0.5, Region.CRITICAL, 0.0),
    (0.5, 0.6, Region.B, 0.6 * np.sqrt(1 - 0.25 / 0.64)),
    (0.3, 0.0, Region.CRITICAL, 0.0),
    (-1.0, 0.0, Region.CRITICAL, 0.0),
    (1.4, 0.0, Region.A, 0.4),
])
def test_gap_examples(lam, gamma, region, value):
    g = gap(CouplingPoint(lam, gamma))
    assert g.region is region
    assert g.value == pytest.approx(value, abs=1e-15)


def test_gap_region_b_value():
    g = gap(CouplingPoint(0.5, 0.6))
    assert g.value == pytest.approx(0.468375, abs=1e-6)
    assert g.value == pytest.approx(brute_force_gap(CouplingPoint(0.5, 0.6)), abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(lams, gammas)
def test_gap_matches_brute_force_minimum(lam, gamma):
    c = CouplingPoint(lam, gamma)
    assert gap(c).value == pytest.approx(brute_force_gap(c), abs=1e-6)


def test_gap_on_region_boundary_reports_a():
    g = gap(CouplingPoint(1 - 0.36, 0.6))
    assert g.region is Region.A
    assert g.value == pytest.approx(0.36)


def test_quasiparticle_energies_ising_free_point():
    np.testing.assert_allclose(quasiparticle_energies(3, CouplingPoint(0.0, 1.0)), 1.0)


def test_quasiparticle_energies_xx_critical():
    np.testing.assert_allclose(quasiparticle_energies(3, CouplingPoint(1.0, 0.0)),
                               [1.5, 0.0, 1.5], atol=1e-15)


def test_quasiparticle_energies_large_field():
    lam = 1e6
    e = quasiparticle_energies(7, CouplingPoint(lam, 0.7))
    assert np.all(np.abs(e - lam) <= 1.0 + 1e-9)


@given(momenta, lams, gammas)
def test_mode_data_invariants(k, lam, gamma):
    m = mode_data(k, CouplingPoint(lam, gamma))
    assert m.lambda_k == pytest.approx(np.sqrt(m.epsilon**2 + m.delta**2), rel=1e-15, abs=1e-300)
    if m.lambda_k > 0:
        assert np.cos(m.theta) * m.lambda_k == pytest.approx(m.epsilon, abs=1e-14)
        assert np.sin(m.theta) * m.lambda_k == pytest.approx(m.delta, abs=1e-14)


@given(momenta, lams, gammas)
def test_dispersion_symmetries(k, lam, gamma):
    c = CouplingPoint(lam, gamma)
    e, d, L = dispersion(k, c)
    assert dispersion(-k, c)[2] == L
    assert dispersion(k, CouplingPoint(lam, -gamma))[2] == L
    e2, d2, L2 = dispersion(np.pi - k, CouplingPoint(-lam, gamma))
    assert e2 == pytest.approx(-e, abs=1e-14)
    assert d2 == pytest.approx(d, abs=1e-14)
    assert L2 == pytest.approx(L, abs=1e-14)


@settings(max_examples=80)
@given(st.floats(-3.0, 3.0), lams, gammas)
def test_theta_derivatives_match_finite_differences(k, lam, gamma):
    c = CouplingPoint(lam, gamma)
    m = mode_data(k, c)
    assume(m.lambda_k > 0.05)
    h = 1e-6
    th = lambda lam_, g_: mode_data(k, CouplingPoint(lam_, g_)).theta
    # differences taken modulo 2 pi: theta = +-pi are the same angle
    diff = lambda a, b: np.angle(np.exp(1j * (a - b)))
    fd_l = diff(th(lam + h, gamma), th(lam - h, gamma)) / (2 * h)
    assert m.dtheta_dlambda == pytest.approx(fd_l, rel=1e-6, abs=1e-8)
    assume(abs(gamma) < 1 - 2 * h)
    fd_g = diff(th(lam, gamma + h), th(lam, gamma - h)) / (2 * h)
    assert m.dtheta_dgamma == pytest.approx(fd_g, rel=1e-6, abs=1e-8)


def test_gap_continuity_on_boundary():
    for g in np.linspace(-0.99, 0.99, 50):
        lam = 1 - g * g
        a = abs(1 - lam)
        b = abs(g) * np.sqrt(max(0.0, 1 - lam * lam / (1 - g * g)))
        assert abs(a - b) < 1e-12
        assert abs(a - g * g) < 1e-12


def test_coupling_validation():
    with pytest.raises(ValueError):
        CouplingPoint(0.0, 1.5)
    with pytest.raises(ValueError):
        CouplingPoint(np.inf, 0.5)
    with pytest.raises(ValueError):
        ThermalPoint.from_values(-1.0, 0.5, 0.0)
    assert ThermalPoint.from_values(np.inf, 0.5, 0.0).zero_temperature
