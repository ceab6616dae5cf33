"""Zak phase of an isolated band via the discretized Wilson loop.

The Brillouin zone is sampled at k_i = -pi + 2*pi*i/M for i = 0..M; the state
at k_M = pi is evaluated by the same coefficient formulas, which realizes the
periodic gauge because the coefficients depend on k only through e^{ik}.  The
phase is Z = -sum_i arg <u_i|u_{i+1}>, reduced into [0, 2*pi).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .bloch import BlochState, bloch_state, state_norm_sq, zak_gauge_overlap
from .coupling import Coupling, family_aiii, family_bdi, family_d
from .errors import (
    BandEdgeError,
    BandNotIsolatedError,
    GaugeSingularError,
    GdkpError,
)
from .spectral import BandStructure, band_structure, spectral_value

DEFAULT_M = 2048

#: minimum gap width for a band to count as isolated
ISOLATION_TOL = 1e-6
#: |S_i| below this fraction of the state norms marks a gauge singularity
_COLLAPSE_TOL = 1e-10


@dataclass(frozen=True)
class ZakResult:
    phase: float
    band: int
    m_points: int
    convergence: float

    def to_dict(self) -> dict:
        return {
            "phase": self.phase,
            "band": self.band,
            "M": self.m_points,
            "convergence": self.convergence,
        }


def _circular_distance(a: float, b: float) -> float:
    d = abs(a - b) % (2.0 * math.pi)
    return min(d, 2.0 * math.pi - d)


def _band_corridor(bs: BandStructure, band: int) -> tuple[float, float]:
    """Energy corridor around one isolated band, guaranteed to contain its
    root and no other at every k: the adjacent gaps shrunk by a safety
    margin against coarse-grid sampling error."""
    if band not in bs.bands:
        raise BandNotIsolatedError(f"band {band} not resolved in the window")
    below = bs.gap_below(band)
    above = bs.gap_above(band)
    if below is None or above is None:
        raise BandNotIsolatedError(f"bands adjacent to {band} not resolved")
    if below.hi - below.lo < ISOLATION_TOL or above.hi - above.lo < ISOLATION_TOL:
        raise BandNotIsolatedError(f"a gap adjacent to band {band} is closed")
    lo = below.lo + 0.3 * (below.hi - below.lo)
    hi = above.hi - 0.3 * (above.hi - above.lo)
    return lo, hi


def _refine_root(
    c: Coupling,
    mass: float,
    k: float,
    corridor: tuple[float, float],
    seed: float | None,
    seed_step: float,
    tol: float = 1e-12,
) -> float:
    """Single root of the spectral function inside the corridor at fixed k,
    warm-started from the previous momentum's root when available."""
    f = lambda e: spectral_value(c, k, e, mass)
    lo_c, hi_c = corridor
    if seed is not None:
        delta = max(4.0 * seed_step, 1e-4)
        for _ in range(40):
            lo = max(lo_c, seed - delta)
            hi = min(hi_c, seed + delta)
            flo, fhi = f(lo), f(hi)
            if flo == 0.0:
                return lo
            if fhi == 0.0:
                return hi
            if (flo < 0.0) != (fhi < 0.0):
                return _bisect(f, lo, hi, flo, tol)
            if lo == lo_c and hi == hi_c:
                break
            delta *= 2.0
    flo, fhi = f(lo_c), f(hi_c)
    if (flo < 0.0) == (fhi < 0.0):
        raise GdkpError(
            f"lost the band inside corridor ({lo_c:.6g}, {hi_c:.6g}) at k={k:.6g}"
        )
    return _bisect(f, lo_c, hi_c, flo, tol)


def _bisect(f, lo: float, hi: float, flo: float, tol: float) -> float:
    for _ in range(200):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (flo < 0.0) != (fm < 0.0):
            hi = mid
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


def _loop_states(
    c: Coupling, mass: float, band: int, m_points: int, coarse: BandStructure
) -> list[BlochState]:
    """Eigenstates of one band at k_i = -pi + 2*pi*i/M, i = 0..M."""
    corridor = _band_corridor(coarse, band)
    ks = -math.pi + 2.0 * math.pi * np.arange(m_points + 1) / m_points
    states: list[BlochState] = []
    seed = None
    step = 1e-3
    prev_root = None
    for k in ks:
        root = _refine_root(c, mass, float(k), corridor, seed, step)
        if prev_root is not None:
            step = abs(root - prev_root) + 1e-9
        seed, prev_root = root, root
        states.append(bloch_state(c, float(k), root, mass))
    return states


def _accumulate_phase(states: list[BlochState], cell_shift: float) -> float:
    """-sum arg <u_i|u_{i+1}>, with the optional analytic phase of a unit-cell
    translation applied per overlap; reduced into [0, 2*pi)."""
    norms = [math.sqrt(state_norm_sq(s)) for s in states]
    total = 0.0
    for s1, s2, n1, n2 in zip(states[:-1], states[1:], norms[:-1], norms[1:]):
        overlap = zak_gauge_overlap(s1, s2).value
        if abs(overlap) < _COLLAPSE_TOL * n1 * n2:
            raise GaugeSingularError(
                f"overlap collapse between k={s1.k:.6g} and k={s2.k:.6g}"
            )
        if cell_shift != 0.0:
            overlap *= cmath.exp(1j * (s2.k - s1.k) * cell_shift)
        total += cmath.phase(overlap)
    return (-total) % (2.0 * math.pi)


def zak_phase(
    c: Coupling,
    mass: float,
    band: int,
    m_points: int = DEFAULT_M,
    *,
    coarse: BandStructure | None = None,
    max_retries: int = 2,
) -> ZakResult:
    """Wilson-loop Zak phase of an isolated band.

    Convergence is the circular distance to the half-resolution loop built
    from every other state (NaN when the grid size ends up odd).  Gauge
    singularities and band-edge hits retry once per attempt on a grid
    shifted by one point (M -> M+1).
    """
    if m_points < 64:
        raise ValueError("m_points must be at least 64")
    if coarse is None:
        coarse = band_structure(c, mass, k_count=48, n_max=max(abs(band), 1) + 1)
    m_eff = m_points
    last_err: GdkpError | None = None
    for _ in range(max_retries + 1):
        try:
            states = _loop_states(c, mass, band, m_eff, coarse)
            phase = _accumulate_phase(states, 0.0)
            convergence = math.nan
            if m_eff % 2 == 0:
                half = _accumulate_phase(states[::2], 0.0)
                convergence = _circular_distance(phase, half)
            return ZakResult(phase, band, m_eff, convergence)
        except (GaugeSingularError, BandEdgeError) as err:
            last_err = err
            m_eff += 1
    raise last_err  # type: ignore[misc]


def translated_zak(z: ZakResult | float, d: float) -> float:
    """Zak phase for the unit cell translated to [-1+d, d):
    (Z - pi*(1-2d)) mod 2*pi; d = 1/2 is the identity."""
    phase = z.phase if isinstance(z, ZakResult) else float(z)
    return (phase - math.pi * (1.0 - 2.0 * d)) % (2.0 * math.pi)


def translated_cell_zak(
    c: Coupling,
    mass: float,
    band: int,
    d: float,
    m_points: int = DEFAULT_M,
    *,
    coarse: BandStructure | None = None,
    max_retries: int = 2,
) -> float:
    """Zak phase recomputed with the Wilson loop of cell-shifted states (the
    shift 1/2 - d enters each overlap as an exact phase factor)."""
    if coarse is None:
        coarse = band_structure(c, mass, k_count=48, n_max=max(abs(band), 1) + 1)
    m_eff = m_points
    last_err: GdkpError | None = None
    for _ in range(max_retries + 1):
        try:
            states = _loop_states(c, mass, band, m_eff, coarse)
            return _accumulate_phase(states, 0.5 - d)
        except (GaugeSingularError, BandEdgeError) as err:
            last_err = err
            m_eff += 1
    raise last_err  # type: ignore[misc]


def make_family_coupling(family: str, theta: float, m2: float = 0.0) -> Coupling:
    fam = family.upper()
    if fam == "D":
        return family_d(theta)
    if fam == "BDI":
        return family_bdi(theta)
    if fam == "AIII":
        return family_aiii(theta, m2)
    raise ValueError(f"unknown family {family!r}")


def near_gap_closing(family: str, theta: float, m2: float, mass: float, margin: float) -> bool:
    """Proximity flag for the loci where some bulk gap closes."""
    fam = family.upper()
    if fam == "D":
        return False
    if abs(abs(theta) - math.pi / 2) < margin:
        return True
    if fam == "BDI":
        theta_m = math.acos(math.tanh(mass))
        return abs(abs(theta) - theta_m) < margin
    root = math.sqrt(max(0.0, 1.0 - m2 * m2))
    return abs(root * math.cos(theta) - math.tanh(mass)) < margin


def zak_sweep(
    family: str,
    param_grid,
    mass: float,
    bands,
    m_points: int = DEFAULT_M,
    *,
    margin: float = 0.05,
) -> list[dict]:
    """Zak phases over a family parameter grid.

    param_grid holds theta values for D/BDI or (theta, m2) pairs for AIII.
    Rows near gap-closing loci are flagged; per-row failures are recorded and
    the sweep continues.
    """
    rows: list[dict] = []
    for point in param_grid:
        if family.upper() == "AIII":
            theta, m2 = float(point[0]), float(point[1])
        else:
            theta, m2 = float(point), 0.0
        c = make_family_coupling(family, theta, m2)
        flagged = near_gap_closing(family, theta, m2, mass, margin)
        coarse = None
        for band in bands:
            row = {
                "family": family.upper(),
                "theta": theta,
                "m2": m2,
                "band": band,
                "phase": None,
                "convergence": None,
                "flagged": flagged,
                "error": "",
            }
            try:
                if coarse is None:
                    n_need = max(abs(int(b)) for b in bands) + 1
                    coarse = band_structure(c, mass, k_count=48, n_max=max(n_need, 2))
                z = zak_phase(c, mass, band, m_points, coarse=coarse)
                row["phase"] = z.phase
                row["convergence"] = z.convergence
            except GdkpError as err:
                row["error"] = f"{type(err).__name__}: {err}"
            rows.append(row)
    return rows
