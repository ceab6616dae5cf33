import cmath
import math

import numpy as np
import pytest

from gdkp import (
    band_condition,
    bbc_verdict,
    boundary_spectral_value,
    edge_counts,
    edge_states,
    edge_sweep,
    family_bdi,
    family_d,
    propagator,
    pseudo_periodic,
    sign_factor,
    split_eigenpairs,
    transfer_matrix,
    zak_phase,
)
from gdkp.boundary import _gap_profile
from gdkp.errors import ImpermeableCouplingError, UnimodularError
from gdkp.spectral import _column_roots, band_structure
from conftest import random_permeable

THETA_M = math.acos(math.tanh(1.0))


def test_propagator_identity_and_det():
    assert np.allclose(propagator(0.7, 1.0, 0.0), np.eye(2))
    rng = np.random.default_rng(3)
    for _ in range(200):
        eps = float(rng.uniform(-6, 6))
        d = float(rng.uniform(0, 1))
        p = propagator(eps, 1.0, d)
        assert abs(np.linalg.det(p) - 1.0) < 1e-12


def test_propagator_band_edge_series():
    # q = 0: P = I + i d Q(m)
    d = 0.37
    p = propagator(1.0, 1.0, d)
    q_mat = np.array([[0.0, 2.0], [0.0, 0.0]])
    assert np.allclose(p, np.eye(2) + 1j * d * q_mat, atol=1e-12)


def test_transfer_free_junction_trace():
    rng = np.random.default_rng(5)
    c = pseudo_periodic(0.0)
    for _ in range(30):
        eps = float(rng.uniform(1.1, 6.0))
        d = float(rng.uniform(0, 1))
        t = transfer_matrix(c, eps, 1.0, d)
        q = math.sqrt(eps * eps - 1.0)
        assert np.trace(t.t) == pytest.approx(2.0 * math.cos(q), abs=1e-10)


def test_transfer_unimodular_random():
    rng = np.random.default_rng(7)
    for _ in range(500):
        c = random_permeable(rng)
        eps = float(rng.uniform(-8, 8))
        d = float(rng.uniform(0, 1))
        t = transfer_matrix(c, eps, 1.0, d)
        assert abs(abs(np.linalg.det(t.t)) - 1.0) < 1e-12


def test_transfer_rejects_impermeable():
    with pytest.raises(ImpermeableCouplingError):
        transfer_matrix(family_d(0.0), 1.0, 1.0, 0.5)


def test_d_composition_trace_independence():
    rng = np.random.default_rng(9)
    for _ in range(50):
        c = random_permeable(rng)
        eps = float(rng.uniform(-6, 6))
        t1 = transfer_matrix(c, eps, 1.0, float(rng.uniform(0, 1)))
        t2 = transfer_matrix(c, eps, 1.0, float(rng.uniform(0, 1)))
        assert abs(np.trace(t1.t) - np.trace(t2.t)) < 1e-10


def test_band_condition_examples():
    c = family_bdi(math.pi / 2)
    assert not band_condition(c, 0.5, 1.0)
    assert band_condition(c, 1.2, 1.0)


def test_band_condition_at_spectral_roots():
    rng = np.random.default_rng(11)
    for _ in range(30):
        c = random_permeable(rng)
        k = float(rng.uniform(-math.pi, math.pi))
        roots = _column_roots(c, k, 1.0, (-8.0, 8.0), 600, 1e-11)
        for root in roots:
            assert band_condition(c, root, 1.0, tol=1e-9)


def test_split_eigenpairs_structure():
    rng = np.random.default_rng(13)
    checked = 0
    while checked < 40:
        c = random_permeable(rng)
        bs = band_structure(c, 1.0, k_count=16, n_max=2)
        if not bs.gaps:
            continue
        gap = bs.gaps[int(rng.integers(0, len(bs.gaps)))]
        if gap.hi - gap.lo < 1e-3:
            continue
        eps = float(rng.uniform(gap.lo + 0.2 * (gap.hi - gap.lo), gap.hi - 0.2 * (gap.hi - gap.lo)))
        t = transfer_matrix(c, eps, 1.0, float(rng.uniform(0, 1)))
        es = split_eigenpairs(t)
        assert abs(abs(es.lambda_minus * es.lambda_plus) - 1.0) < 1e-10
        assert abs(es.lambda_minus) < 1.0 < abs(es.lambda_plus)
        assert abs(es.w_plus @ es.v_minus) < 1e-10
        # defining relations
        assert np.max(np.abs(t.t @ es.v_minus - es.lambda_minus * es.v_minus)) < 1e-9
        assert np.max(np.abs(es.w_plus @ t.t - es.lambda_plus * es.w_plus)) < 1e-9
        checked += 1


def test_split_eigenpairs_in_band_raises():
    c = family_bdi(0.3)
    roots = _column_roots(c, 0.4, 1.0, (-8.0, 8.0), 600, 1e-11)
    t = transfer_matrix(c, roots[len(roots) // 2], 1.0, 0.5)
    with pytest.raises(UnimodularError):
        split_eigenpairs(t)


def test_boundary_spectral_zero_at_central_mode():
    # theta in (0, theta_m): the pinned zero mode at alpha = +pi/2
    value = boundary_spectral_value(family_bdi(0.3), 0.0, 1.0, 0.5, math.pi / 2)
    assert abs(value) < 1e-8


def test_vectorized_profile_matches_scalar_path():
    # edge_states scans with the componentwise profile; boundary_spectral_value
    # goes through the full eigensplit -- the two must agree in modulus
    rng = np.random.default_rng(15)
    c = family_bdi(0.3)
    bs = band_structure(c, 1.0, k_count=24, n_max=2)
    central = bs.central_gap()
    grid = np.linspace(central.lo + 0.02, central.hi - 0.02, 40)
    for d, alpha in ((0.5, math.pi / 2), (0.2, 0.9), (0.0, -1.3)):
        abs_f, abs_lam = _gap_profile(c, grid, 1.0, d, alpha)
        for i in np.linspace(0, len(grid) - 1, 9, dtype=int):
            eps = float(grid[i])
            scalar = abs(boundary_spectral_value(c, eps, 1.0, d, alpha))
            assert scalar == pytest.approx(float(abs_f[i]), abs=1e-12)


def test_boundary_spectral_deterministic_and_continuous():
    c = family_bdi(0.3)
    bs = band_structure(c, 1.0, k_count=24, n_max=2)
    central = bs.central_gap()
    grid = np.linspace(central.lo + 0.05, central.hi - 0.05, 101)
    vals = np.array([boundary_spectral_value(c, float(e), 1.0, 0.5, 1.0) for e in grid])
    again = np.array([boundary_spectral_value(c, float(e), 1.0, 0.5, 1.0) for e in grid])
    assert np.array_equal(vals, again)
    steps = np.abs(np.diff(vals))
    assert np.max(steps) < 10.0 * np.median(steps) + 1e-12


def test_no_edge_state_gap_has_positive_floor():
    # theta in (theta_m, pi/2) at alpha = +pi/2: central gap hosts nothing
    c = family_bdi(1.0)
    bs = band_structure(c, 1.0, k_count=24, n_max=2)
    central = bs.central_gap()
    grid = np.linspace(central.lo, central.hi, 800)[1:-1]
    abs_f, _ = _gap_profile(c, grid, 1.0, 0.5, math.pi / 2)
    assert np.min(abs_f) > 1e-4


def test_edge_states_examples():
    mass = 1.0
    c = family_bdi(0.3)
    bs = band_structure(c, mass, k_count=24, n_max=2)
    central = bs.central_gap()
    found = edge_states(c, mass, 0.5, math.pi / 2, central)
    assert len(found) == 1
    assert abs(found[0].eps) < 1e-6
    assert found[0].decay < 1.0 - 1e-8

    # Z = 0 region: empty central gap
    c2 = family_bdi(1.0)
    bs2 = band_structure(c2, mass, k_count=24, n_max=2)
    assert edge_states(c2, mass, 0.5, math.pi / 2, bs2.central_gap()) == []

    # alpha = 0: states coalesce with the bulk bands
    merged = edge_states(c, mass, 0.5, 0.0, central)
    assert all(s.touching for s in merged)


def test_chiral_pinning_across_theta_and_d():
    mass = 1.0
    for theta in (0.15, 0.3, 0.55):
        c = family_bdi(theta)
        bs = band_structure(c, mass, k_count=24, n_max=2)
        central = bs.central_gap()
        for d in (0.0, 0.3, 0.5, 0.8):
            for alpha in (math.pi / 2, -math.pi / 2):
                for s in edge_states(c, mass, d, alpha, central):
                    assert abs(s.eps) < 1e-6


def test_edge_counts_bdi():
    mass = 1.0
    c = family_bdi(0.3)
    bs = band_structure(c, mass, k_count=32, n_max=3)
    n_b, n_a = edge_counts(c, mass, 0.5, math.pi / 2, 1, bands=bs)
    assert (n_b, n_a) == (1, 0)
    n_b, n_a = edge_counts(c, mass, 0.5, math.pi / 2, -1, bands=bs)
    assert (n_b, n_a) == (0, 1)
    c2 = family_bdi(1.0)
    bs2 = band_structure(c2, mass, k_count=32, n_max=3)
    n_b, n_a = edge_counts(c2, mass, 0.5, math.pi / 2, 1, bands=bs2)
    assert n_b == n_a


def test_edge_counts_unresolved_gap():
    from gdkp.errors import GapUnresolvedError

    c = family_bdi(0.3)
    bs = band_structure(c, 1.0, k_count=16, n_max=2)
    with pytest.raises(GapUnresolvedError):
        edge_counts(c, 1.0, 0.5, math.pi / 2, 5, bands=bs)


def test_edge_counts_cumulative_mode():
    mass = 1.0
    c = family_bdi(0.3)
    bs = band_structure(c, mass, k_count=32, n_max=3)
    adj = edge_counts(c, mass, 0.5, math.pi / 2, 1, bands=bs)
    cum = edge_counts(c, mass, 0.5, math.pi / 2, 1, bands=bs, cumulative=True)
    assert cum[0] >= adj[0] and cum[1] >= adj[1]


def test_sign_factor_table():
    a = math.pi / 2
    assert sign_factor(1, 0.3, a) == 1
    assert sign_factor(-1, 0.3, a) == -1
    assert sign_factor(2, 0.3, a) == -1
    assert sign_factor(1, 2.0, a) == -1
    assert sign_factor(1, 0.3, -a) == -1


def test_bbc_verdict_holds_and_violated():
    v = bbc_verdict("BDI", 0.3, mass=1.0, band=1, d=0.5, alpha=math.pi / 2, m_points=256)
    assert v.verdict == "holds" and v.sign_matches
    assert (v.n_below, v.n_above) == (1, 0)

    v = bbc_verdict("BDI", 0.3, mass=1.0, band=1, d=0.0, alpha=math.pi / 2, m_points=256)
    assert v.verdict == "holds"

    # translated phase demands an imbalance the coalesced boundary cannot give
    v = bbc_verdict("BDI", 1.0, mass=1.0, band=1, d=0.0, alpha=0.7, m_points=256)
    assert v.verdict == "violated"


def test_bbc_verdict_degenerate_for_class_d():
    v = bbc_verdict("D", math.pi / 4, mass=1.0, band=1, d=0.5, alpha=math.pi / 2, m_points=256)
    assert v.verdict == "degenerate"
    assert not v.quantized


def test_edge_sweep_alpha_axis():
    rows = edge_sweep(
        "BDI",
        [0.3, 1.0],
        1.0,
        axis="alpha",
        axis_values=[-2.0, 0.7, math.pi / 2],
        d=0.5,
        gap_count=2,
        scan_points=600,
    )
    assert len(rows) == 2 * 3 * 2
    ok = [r for r in rows if not r["error"]]
    assert len(ok) == len(rows)
    lookup = {
        (r["theta"], r["alpha"], r["gap_below"], r["gap_above"]): r["count"] for r in rows
    }
    assert lookup[(0.3, math.pi / 2, -1, 1)] == 1
    assert lookup[(1.0, math.pi / 2, -1, 1)] == 0


def test_edge_sweep_d_axis_central_gap_insensitive():
    rows = edge_sweep(
        "BDI",
        [0.3],
        1.0,
        axis="d",
        axis_values=[0.0, 0.25, 0.5, 0.75],
        alpha=math.pi / 2,
        gap_count=1,
        scan_points=600,
    )
    counts = {r["d"]: r["count"] for r in rows}
    assert all(v == 1 for v in counts.values())


def test_edge_sweep_d_zero_row_differs_from_half():
    # higher gaps empty out when the junction sits at the edge (d = 0) for a
    # symmetry-breaking alpha, unlike the d = 1/2 row
    rows = edge_sweep(
        "BDI",
        [0.3],
        1.0,
        axis="d",
        axis_values=[0.0, 0.5],
        alpha=0.7,
        gap_count=2,
        scan_points=600,
    )
    lookup = {(r["d"], r["gap_below"], r["gap_above"]): r["count"] for r in rows}
    assert lookup[(0.0, -1, 1)] != lookup[(0.5, -1, 1)] or lookup[(0.0, 1, 2)] != lookup[(0.5, 1, 2)]


def test_edge_sweep_records_errors_for_impermeable():
    rows = edge_sweep(
        "BDI", [0.0], 1.0, axis="alpha", axis_values=[1.0], gap_count=1, scan_points=400
    )
    assert all("Impermeable" in r["error"] or r["error"] for r in rows)
