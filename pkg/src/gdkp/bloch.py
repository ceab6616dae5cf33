"""Analytic fiber eigenspinors and their adjacent-momentum overlaps.

A simple eigenvalue eps of the fiber problem at momentum k has the
plane-wave eigenspinor

    Psi(x) = xi+ e^{iqx} + xi- e^{-iqx}              on (-1/2, 0),
    Psi(x) = xi+ e^{i[q(x-1)+k]} + xi- e^{-i[q(x-1)-k]}  on (0, 1/2),

with xi+- = c+- (1, +-q/(eps+mass)).  The coefficients below are the first
row of the coupling-condition kernel, which keeps the gauge smooth in k; the
inner products between such states in the periodic (Zak) gauge reduce to four
closed-form contributions.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .coupling import Coupling, coupling_matrix
from .errors import BandEdgeError, GaugeSingularError, MomentumMismatchError
from .spectral import wavenumber
from .special import csinc

#: |c+|^2 + |c-|^2 below this triggers the second-row gauge fallback
_ROW_TOL = 1e-20


@dataclass(frozen=True)
class BlochState:
    """Unnormalized fiber eigenspinor data in the Bloch-Floquet-Zak gauge."""

    coupling: Coupling
    k: float
    eps: float
    mass: float
    q: complex
    c_plus: complex
    c_minus: complex
    xi_plus: np.ndarray
    xi_minus: np.ndarray

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "eps": self.eps,
            "q": [self.q.real, self.q.imag],
            "c_plus": [self.c_plus.real, self.c_plus.imag],
            "c_minus": [self.c_minus.real, self.c_minus.imag],
        }


@dataclass(frozen=True)
class Overlap:
    """Zak-gauge inner product split into its four plane-wave contributions."""

    value: complex
    contributions: tuple[complex, complex, complex, complex]


def _coefficients(c: Coupling, k: float, eps: float, mass: float, q: complex):
    """Closed-form (c+, c-) from the first row of the coupling-condition
    kernel."""
    m0, m1, m2, m3 = c.m
    r = q / (eps + mass)
    off = cmath.exp(1j * c.eta) * (m0 + 1j * m3)
    mix = 1j * m1 + m2
    c_plus = (1.0 + r) * (1.0 - cmath.exp(1j * (k + c.eta + q)) * mix) - (
        1.0 - r
    ) * off
    c_minus = -(1.0 - r) * (1.0 - cmath.exp(1j * (k + c.eta - q)) * mix) + (
        1.0 + r
    ) * off
    return c_plus, c_minus


def _kernel_matrix(c: Coupling, k: float, eps: float, mass: float, q: complex):
    """Coupling-condition matrix M whose kernel holds (c+, c-)."""
    r = q / (eps + mass)
    e_minus = cmath.exp(1j * (k - q))
    e_plus = cmath.exp(1j * (k + q))
    a_plus = np.array(
        [[1.0 + r, 1.0 - r], [(1.0 - r) * e_minus, (1.0 + r) * e_plus]]
    )
    a_minus = np.array(
        [[1.0 - r, 1.0 + r], [(1.0 + r) * e_minus, (1.0 - r) * e_plus]]
    )
    return a_minus - coupling_matrix(c) @ a_plus


def bloch_state(
    c: Coupling,
    k: float,
    eps: float,
    mass: float,
    *,
    band_edge_fallback: bool = False,
    edge_tol: float = 1e-12,
) -> BlochState:
    """Construct the eigenspinor at (k, eps); eps must be a simple root of the
    spectral function (not enforced here).

    States are kept unnormalized: Wilson-loop phases are insensitive to
    k-independent rescaling and the analytic coefficients provide the smooth
    gauge.  At a mass-gap edge the plane-wave basis degenerates; with
    band_edge_fallback the energy is nudged 1e-9 outward as a series-limit
    approximation, otherwise BandEdgeError is raised.
    """
    if mass <= 0.0:
        raise ValueError("mass must be positive")
    if abs(abs(eps) - mass) <= edge_tol:
        if not band_edge_fallback:
            raise BandEdgeError(f"eps = {eps!r} lies at a mass-gap edge")
        eps = eps + math.copysign(1e-9, eps if eps != 0.0 else 1.0)
    q = wavenumber(eps, mass)
    c_plus, c_minus = _coefficients(c, k, eps, mass, q)
    if abs(c_plus) ** 2 + abs(c_minus) ** 2 < _ROW_TOL:
        m = _kernel_matrix(c, k, eps, mass, q)
        c_plus, c_minus = m[1, 1], -m[1, 0]
        if abs(c_plus) ** 2 + abs(c_minus) ** 2 < _ROW_TOL:
            raise GaugeSingularError(
                f"both gauge-fixing rows vanish at k={k:.6g}, eps={eps:.6g}"
            )
    r = q / (eps + mass)
    xi_plus = np.array([c_plus, c_plus * r])
    xi_minus = np.array([c_minus, -c_minus * r])
    return BlochState(c, k, eps, mass, q, c_plus, c_minus, xi_plus, xi_minus)


def zak_gauge_overlap(s1: BlochState, s2: BlochState) -> Overlap:
    """Inner product <u1|u2> of two states in the Zak gauge over the unit
    cell, conjugate-linear in the first argument.

    The integral splits into four terms A_j e^{-i a_j/2} sinc(a_j/2) with
    a_j = (+-q2) - (+-conj(q1)) - (k2 - k1); the conjugation on q1 only
    matters for evanescent (imaginary-q) states.
    """
    if s1.coupling != s2.coupling or s1.mass != s2.mass:
        raise MomentumMismatchError("states do not share coupling and mass")
    dk = s2.k - s1.k
    qb = s1.q.conjugate()
    q2 = s2.q
    terms = (
        (np.vdot(s1.xi_plus, s2.xi_plus), q2 - qb - dk),
        (np.vdot(s1.xi_minus, s2.xi_plus), q2 + qb - dk),
        (np.vdot(s1.xi_plus, s2.xi_minus), -q2 - qb - dk),
        (np.vdot(s1.xi_minus, s2.xi_minus), -q2 + qb - dk),
    )
    contributions = tuple(
        complex(amp) * cmath.exp(-0.5j * alpha) * csinc(0.5 * alpha)
        for amp, alpha in terms
    )
    return Overlap(sum(contributions), contributions)


def state_norm_sq(s: BlochState) -> float:
    """Squared L2 norm over the unit cell, via the self-overlap."""
    return zak_gauge_overlap(s, s).value.real


def evaluate_zak_gauge(s: BlochState, x: np.ndarray) -> np.ndarray:
    """Zak-gauge spinor u(x) = e^{-ikx} Psi(x) on sample points; shape (len(x), 2).

    x = 0 belongs to the right-limit branch; pass x slightly negative for the
    left limit.
    """
    x = np.asarray(x, dtype=float)
    w = np.where(x < 0.0, x, x - 1.0)
    e_plus = np.exp(1j * (s.q - s.k) * w)
    e_minus = np.exp(-1j * (s.q + s.k) * w)
    return s.xi_plus[None, :] * e_plus[:, None] + s.xi_minus[None, :] * e_minus[:, None]


def evaluate_spinor(s: BlochState, x: np.ndarray) -> np.ndarray:
    """Real-space eigenspinor Psi(x) = e^{ikx} u(x)."""
    x = np.asarray(x, dtype=float)
    return evaluate_zak_gauge(s, x) * np.exp(1j * s.k * x)[:, None]


def coupling_condition_residual(s: BlochState) -> float:
    """Residual of Psi_-(0) = U Psi_+(0) for the reconstructed spinor,
    relative to the boundary-data norm."""
    psi_left = s.xi_plus + s.xi_minus
    psi_right = s.xi_plus * cmath.exp(1j * (s.k - s.q)) + s.xi_minus * cmath.exp(
        1j * (s.k + s.q)
    )
    plus = np.array(
        [psi_left[0] + psi_left[1], psi_right[0] - psi_right[1]]
    ) / math.sqrt(2.0)
    minus = np.array(
        [psi_left[0] - psi_left[1], psi_right[0] + psi_right[1]]
    ) / math.sqrt(2.0)
    res = minus - coupling_matrix(s.coupling) @ plus
    scale = max(np.linalg.norm(plus), np.linalg.norm(minus), 1e-300)
    return float(np.linalg.norm(res) / scale)
