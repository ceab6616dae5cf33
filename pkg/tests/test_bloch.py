import cmath
import math

import numpy as np
import pytest

from gdkp import (
    bloch_state,
    evaluate_spinor,
    evaluate_zak_gauge,
    family_bdi,
    family_d,
    state_norm_sq,
    zak_gauge_overlap,
)
from gdkp.bloch import _kernel_matrix, coupling_condition_residual
from gdkp.errors import BandEdgeError, MomentumMismatchError
from gdkp.spectral import _column_roots, band_structure
from conftest import quad_overlap, random_coupling


def _band_state(c, k, mass=1.0, band_index=0, window=(-8.0, 8.0)):
    roots = _column_roots(c, k, mass, window, 800, 1e-12)
    positive = [r for r in roots if r > mass + 1e-6]
    return bloch_state(c, k, positive[band_index], mass)


def test_coefficients_equal_kernel_row():
    rng = np.random.default_rng(51)
    for _ in range(50):
        c = random_coupling(rng)
        k = float(rng.uniform(-math.pi, math.pi))
        eps = float(rng.uniform(1.2, 8.0))  # kernel row identity holds off-shell too
        s = bloch_state(c, k, eps, 1.0)
        m = _kernel_matrix(c, k, eps, 1.0, s.q)
        assert abs(s.c_plus - m[0, 1]) < 1e-12
        assert abs(s.c_minus + m[0, 0]) < 1e-12


def test_state_satisfies_coupling_and_pseudo_periodicity():
    rng = np.random.default_rng(53)
    for _ in range(25):
        c = random_coupling(rng)
        k = float(rng.uniform(-math.pi, math.pi))
        s = _band_state(c, k)
        assert coupling_condition_residual(s) < 1e-9
        left = evaluate_spinor(s, np.array([-0.5]))[0]
        right = evaluate_spinor(s, np.array([0.5 - 1e-300]))[0]
        # the x > 0 branch extends to x = 1/2
        scale = max(np.linalg.norm(left), 1e-30)
        assert np.linalg.norm(right - np.exp(1j * s.k) * left) / scale < 1e-9


def test_free_junction_lowest_band_state():
    c = family_bdi(math.pi / 2)
    k = 0.5
    s = _band_state(c, k, band_index=0)
    assert s.eps == pytest.approx(math.sqrt((math.pi - k) ** 2 + 1.0), abs=1e-8)
    assert s.q.real == pytest.approx(math.pi - k, abs=1e-8)
    # free-junction band states are single plane waves: c+ = (1+r)(1-1) = 0
    # identically on this band, all weight in the left-moving component
    assert abs(s.c_plus) < 1e-10
    assert abs(s.c_minus) > 1e-3


def test_degenerate_point_is_gauge_singular():
    # at k = 0 bands 1 and 2 of the free junction touch; the eigenvalue is
    # doubly degenerate, the kernel matrix vanishes identically, and the
    # coefficient formula is indeterminate
    from gdkp.errors import GaugeSingularError

    c = family_bdi(math.pi / 2)
    with pytest.raises(GaugeSingularError):
        bloch_state(c, 0.0, math.sqrt(math.pi**2 + 1.0), 1.0)


def test_confining_junction_coefficients_independent_of_k():
    c = family_d(0.0)  # i sigma_z: the e^{ik} factor carries i m1 + m2 = 0
    s1 = bloch_state(c, -1.1, 2.5, 1.0)
    s2 = bloch_state(c, 0.9, 2.5, 1.0)
    assert s1.c_plus == pytest.approx(s2.c_plus, abs=1e-14)
    assert s1.c_minus == pytest.approx(s2.c_minus, abs=1e-14)


def test_self_overlap_is_norm():
    c = family_bdi(0.8)
    s = _band_state(c, 0.4)
    val = zak_gauge_overlap(s, s).value
    assert val.imag == pytest.approx(0.0, abs=1e-12 * val.real)
    assert val.real > 0.0
    assert state_norm_sq(s) == pytest.approx(val.real)
    # matches brute-force quadrature of |u|^2
    assert abs(val - quad_overlap(s, s)) < 1e-8 * val.real


def test_overlap_contributions_sum():
    c = family_bdi(0.8)
    s1 = _band_state(c, 0.4)
    s2 = _band_state(c, 0.4 + 2 * math.pi / 128)
    overlap = zak_gauge_overlap(s1, s2)
    assert overlap.value == pytest.approx(sum(overlap.contributions))


def test_cross_band_orthogonality():
    rng = np.random.default_rng(57)
    for _ in range(10):
        c = random_coupling(rng)
        k = float(rng.uniform(-math.pi, math.pi))
        s1 = _band_state(c, k, band_index=0)
        s2 = _band_state(c, k, band_index=1)
        scale = math.sqrt(state_norm_sq(s1) * state_norm_sq(s2))
        assert abs(zak_gauge_overlap(s1, s2).value) < 1e-9 * scale


def test_adjacent_k_overlap_near_norm():
    c = family_bdi(0.8)
    m_points = 256
    s1 = _band_state(c, 0.3)
    s2 = _band_state(c, 0.3 + 2 * math.pi / m_points)
    val = abs(zak_gauge_overlap(s1, s2).value)
    scale = math.sqrt(state_norm_sq(s1) * state_norm_sq(s2))
    assert val / scale > 1.0 - 20.0 / m_points**2


def test_overlap_matches_quadrature():
    rng = np.random.default_rng(61)
    checked = 0
    while checked < 20:
        c = random_coupling(rng)
        k = float(rng.uniform(-math.pi, math.pi - 0.1))
        band = int(rng.integers(0, 3))
        try:
            s1 = _band_state(c, k, band_index=band)
            s2 = _band_state(c, k + 2 * math.pi / 128, band_index=band)
        except IndexError:
            continue
        formula = zak_gauge_overlap(s1, s2).value
        brute = quad_overlap(s1, s2)
        scale = max(1.0, math.sqrt(state_norm_sq(s1) * state_norm_sq(s2)))
        assert abs(formula - brute) < 1e-7 * scale
        checked += 1


def test_overlap_evanescent_states():
    # zero band of the confining junction: q = i*m exercises the conjugation
    c = family_d(0.0)
    s1 = bloch_state(c, -0.4, 0.0, 1.0)
    s2 = bloch_state(c, -0.4 + 2 * math.pi / 128, 0.0, 1.0)
    assert s1.q == 1j
    formula = zak_gauge_overlap(s1, s2).value
    brute = quad_overlap(s1, s2)
    assert abs(formula - brute) < 1e-8 * max(1.0, abs(brute))


def test_band_edge_raises_without_fallback():
    c = family_bdi(0.8)
    with pytest.raises(BandEdgeError):
        bloch_state(c, 0.1, 1.0, 1.0)
    s = bloch_state(c, 0.1, 1.0, 1.0, band_edge_fallback=True)
    assert s.eps != 1.0


def test_momentum_mismatch():
    s1 = _band_state(family_bdi(0.8), 0.3)
    s2 = _band_state(family_bdi(0.9), 0.3)
    with pytest.raises(MomentumMismatchError):
        zak_gauge_overlap(s1, s2)


def test_zak_gauge_periodicity_at_zone_edge():
    # u(pi, x) must equal e^{-2 pi i x} u(-pi, x): the periodic gauge
    c = family_bdi(0.8)
    s_minus = _band_state(c, -math.pi)
    s_plus = _band_state(c, math.pi)
    x = np.linspace(-0.49, 0.49, 101)
    u_minus = evaluate_zak_gauge(s_minus, x)
    u_plus = evaluate_zak_gauge(s_plus, x)
    phase = np.exp(-2j * math.pi * x)[:, None]
    assert np.max(np.abs(u_plus - phase * u_minus)) < 1e-8 * np.max(np.abs(u_minus))


def test_eigenvalue_residual_on_grid():
    # the reconstructed spinor satisfies the Dirac equation pointwise:
    # -i sigma_x Psi' + m sigma_z Psi = eps Psi, checked by finite differences
    c = family_bdi(0.8)
    s = _band_state(c, 0.7)
    h = 1e-5
    x = np.linspace(-0.45, -0.05, 41)
    psi = evaluate_spinor(s, x)
    dpsi = (evaluate_spinor(s, x + h) - evaluate_spinor(s, x - h)) / (2 * h)
    sx = np.array([[0, 1], [1, 0]])
    sz = np.array([[1, 0], [0, -1]])
    lhs = -1j * dpsi @ sx.T + psi @ sz.T
    assert np.max(np.abs(lhs - s.eps * psi)) < 1e-7 * np.max(np.abs(psi))
