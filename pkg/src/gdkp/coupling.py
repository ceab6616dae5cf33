"""U(2) coupling matrices of the periodic Dirac point interaction.

A junction is parametrized as U = e^{i eta} (m0*I + i m.sigma) with
eta in [0, pi) and m a unit 4-vector (m0, m1, m2, m3).  The pair
(eta + pi, -m) describes the same matrix, so construction canonicalizes
eta into [0, pi) with the compensating sign flip on m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

#: default tolerance for the symmetry / permeability equality tests
SYMMETRY_TOL = 1e-10


@dataclass(frozen=True)
class Coupling:
    """A point on U(2): phase eta in [0, pi) and a unit 4-vector m."""

    eta: float
    m: tuple[float, float, float, float]

    def matrix(self) -> np.ndarray:
        return coupling_matrix(self)

    def to_dict(self) -> dict:
        return {"eta": self.eta, "m": list(self.m)}


@dataclass(frozen=True)
class SymmetryClass:
    """Altland-Zirnbauer-Cartan class restricted to symmetries squaring to +1."""

    label: str
    has_t: bool
    has_c: bool
    has_s: bool


class Permeability(Enum):
    PERMEABLE = "permeable"
    IMPERMEABLE = "impermeable"


def make_coupling(
    eta: float,
    m: tuple[float, float, float, float] | list[float] | np.ndarray,
    *,
    norm_tol: float = 1e-9,
) -> Coupling:
    """Build a canonical Coupling from a phase and a (near-)unit 4-vector.

    The vector is renormalized to exact unit norm; eta is reduced mod pi into
    [0, pi), flipping the sign of m once per pi crossed.
    """
    vec = np.asarray(m, dtype=float)
    if vec.shape != (4,):
        raise ValueError("m must be a 4-vector")
    if not (np.all(np.isfinite(vec)) and math.isfinite(eta)):
        raise ValueError("coupling parameters must be finite")
    norm = float(np.linalg.norm(vec))
    if norm == 0.0:
        raise ValueError("m must be nonzero")
    if abs(norm - 1.0) > norm_tol:
        raise ValueError(f"m must have unit norm within {norm_tol:g} (got {norm:.12g})")
    vec = vec / norm

    n = math.floor(eta / math.pi)
    eta = eta - n * math.pi
    if n % 2:
        vec = -vec
    # rounding can land exactly on pi (or marginally below 0); fix up
    while eta >= math.pi:
        eta -= math.pi
        vec = -vec
    while eta < 0.0:
        eta += math.pi
        vec = -vec
    return Coupling(eta, tuple(float(x) for x in vec))


def coupling_matrix(c: Coupling) -> np.ndarray:
    """The 2x2 unitary e^{i eta} [[m0+i m3, m2+i m1], [-m2+i m1, m0-i m3]]."""
    m0, m1, m2, m3 = c.m
    phase = complex(math.cos(c.eta), math.sin(c.eta))
    return phase * np.array(
        [[m0 + 1j * m3, m2 + 1j * m1], [-m2 + 1j * m1, m0 - 1j * m3]]
    )


def coupling_from_matrix(u: np.ndarray, *, tol: float = 1e-9) -> Coupling:
    """Extract the canonical (eta, m) parameters from a 2x2 unitary.

    det(U) = e^{2 i eta} fixes eta up to pi; the canonicalization in
    make_coupling resolves the sign ambiguity of e^{i eta}.
    """
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise ValueError("expected a 2x2 matrix")
    det = u[0, 0] * u[1, 1] - u[0, 1] * u[1, 0]
    if abs(abs(det) - 1.0) > 1e-6:
        raise ValueError("matrix is not unitary")
    eta = 0.5 * math.atan2(det.imag, det.real)
    body = u * complex(math.cos(-eta), math.sin(-eta))
    m0 = 0.5 * (body[0, 0].real + body[1, 1].real)
    m3 = 0.5 * (body[0, 0].imag - body[1, 1].imag)
    m2 = 0.5 * (body[0, 1].real - body[1, 0].real)
    m1 = 0.5 * (body[0, 1].imag + body[1, 0].imag)
    c = make_coupling(eta, (m0, m1, m2, m3), norm_tol=1e-6)
    if np.max(np.abs(coupling_matrix(c) - u)) > tol:
        raise ValueError("matrix is not unitary within tolerance")
    return c


def _check_theta(theta: float) -> None:
    if not (-math.pi <= theta < math.pi):
        raise ValueError("theta out of range [-pi, pi)")


def family_d(theta: float) -> Coupling:
    """Charge-conjugation symmetric junction: matrix
    [[i cos(theta), sin(theta)], [-sin(theta), -i cos(theta)]]."""
    _check_theta(theta)
    return make_coupling(0.0, (0.0, 0.0, math.sin(theta), math.cos(theta)))


def family_bdi(theta: float) -> Coupling:
    """Junction with time-reversal, charge-conjugation and chiral symmetry:
    matrix [[i cos(theta), -sin(theta)], [-sin(theta), i cos(theta)]]."""
    _check_theta(theta)
    return make_coupling(math.pi / 2, (math.cos(theta), math.sin(theta), 0.0, 0.0))


def family_aiii(theta: float, m2: float) -> Coupling:
    """Chiral-only junction; family_aiii(theta, 0) == family_bdi(theta)."""
    _check_theta(theta)
    if abs(m2) > 1.0:
        raise ValueError("m2 out of range [-1, 1]")
    root = math.sqrt(max(0.0, 1.0 - m2 * m2))
    return make_coupling(
        math.pi / 2, (root * math.cos(theta), root * math.sin(theta), m2, 0.0)
    )


def pseudo_periodic(alpha: float) -> Coupling:
    """Pseudo-periodic junction Psi(n+) = e^{i alpha} Psi(n-):
    anti-diagonal matrix [[0, e^{-i alpha}], [e^{i alpha}, 0]]."""
    return make_coupling(
        math.pi / 2, (0.0, -math.cos(alpha), -math.sin(alpha), 0.0)
    )


def chiral_impermeable(alpha_minus: float, alpha_plus: float) -> Coupling:
    """Confining junction diag(e^{i a-}, e^{i a+}) on the two sides."""
    half_sum = 0.5 * (alpha_minus + alpha_plus)
    half_diff = 0.5 * (alpha_minus - alpha_plus)
    return make_coupling(
        half_sum, (math.cos(half_diff), 0.0, 0.0, math.sin(half_diff))
    )


def classify_symmetry(c: Coupling, tol: float = SYMMETRY_TOL) -> SymmetryClass:
    """Detect which of T, C, S the junction preserves and the implied class.

    The conditions are exact equalities on (eta, m); the eta tests use the
    mod-pi circular distance because eta ~ pi is equivalent to eta ~ 0 with
    m -> -m, which leaves every condition invariant.
    """
    m0, m1, m2, m3 = c.m
    at_zero = min(c.eta, math.pi - c.eta) <= tol
    at_half = abs(c.eta - math.pi / 2) <= tol

    has_t = abs(m2) <= tol
    has_c = (at_zero and abs(m0) <= tol and abs(m1) <= tol) or (
        at_half and abs(m2) <= tol and abs(m3) <= tol
    )
    has_s = (at_zero and abs(m0) <= tol and abs(m1) <= tol and abs(m2) <= tol) or (
        at_half and abs(m3) <= tol
    )

    if has_t and has_c and has_s:
        label = "BDI"
    elif has_c:
        label = "D"
    elif has_s:
        label = "AIII"
    elif has_t:
        label = "AI"
    else:
        label = "A"
    return SymmetryClass(label, has_t, has_c, has_s)


def permeability(c: Coupling, tol: float = SYMMETRY_TOL) -> Permeability:
    """Impermeable (confining) iff m1 = m2 = 0: no current crosses the point."""
    if abs(c.m[1]) <= tol and abs(c.m[2]) <= tol:
        return Permeability.IMPERMEABLE
    return Permeability.PERMEABLE


def coupling_from_dict(data: dict) -> Coupling:
    """Deserialize either raw {"eta", "m"} or family shorthand
    {"family": "D"|"BDI"|"AIII", "theta": ..., "m2": ...}."""
    if "family" in data:
        fam = str(data["family"]).upper()
        theta = float(data["theta"])
        if fam == "D":
            return family_d(theta)
        if fam == "BDI":
            return family_bdi(theta)
        if fam == "AIII":
            return family_aiii(theta, float(data.get("m2", 0.0)))
        raise ValueError(f"unknown family {fam!r}")
    return make_coupling(float(data["eta"]), [float(x) for x in data["m"]])
