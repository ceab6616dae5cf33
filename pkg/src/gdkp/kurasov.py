"""Correspondence between U(2) junctions and delta-potential strength vectors.

A junction U for which -sigma_x U has no unit eigenvalue is equivalent to a
periodic array of matrix delta potentials V_g with strengths
g = (g0, g1, g2, g3); the two pictures are related by an inverse Cayley
transform.  When a unit eigenvalue appears the strengths degenerate
("singular"): the physics is still well defined, only the g chart fails, so
Singular is a value here, not an error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coupling import Coupling, Permeability, make_coupling, permeability
from .errors import ImpermeableCouplingError, NumericalDegeneracyError

#: tolerance band for the branch dispatch and singularity test
BRANCH_TOL = 1e-12


@dataclass(frozen=True)
class Strengths:
    """Delta-potential strength 4-vector, or Singular when the chart fails."""

    g: tuple[float, float, float, float] | None

    @property
    def singular(self) -> bool:
        return self.g is None

    def to_dict(self) -> dict:
        if self.g is None:
            return {"singular": True}
        return {"g": list(self.g)}


SINGULAR = Strengths(None)


def strengths_from_dict(data: dict) -> Strengths:
    if data.get("singular"):
        return SINGULAR
    return Strengths(tuple(float(x) for x in data["g"]))


def delta_invariant(g) -> float:
    """Delta = 4 - g0^2 + g1^2 + g2^2 + g3^2, the branch discriminant of the
    inverse map."""
    g0, g1, g2, g3 = g
    return 4.0 - g0 * g0 + g1 * g1 + g2 * g2 + g3 * g3


def coupling_to_strengths(c: Coupling, tol: float = BRANCH_TOL) -> Strengths:
    """Map a junction to its strength vector; Singular when sin(eta) = m1."""
    m0, m1, m2, m3 = c.m
    den = math.sin(c.eta) - m1
    if abs(den) <= tol:
        return SINGULAR
    f = 2.0 / den
    return Strengths((f * math.cos(c.eta), f * m2, f * m3, -f * m0))


def strengths_to_coupling(g, tol: float = BRANCH_TOL) -> Coupling:
    """Invert the strength map on finite g.

    Three exhaustive branches keyed on (g0, Delta); ties inside the tolerance
    band are resolved in branch order.
    """
    g0, g1, g2, g3 = (float(x) for x in g)
    if not all(math.isfinite(x) for x in (g0, g1, g2, g3)):
        raise ValueError("strength vector must be finite")
    delta = delta_invariant((g0, g1, g2, g3))

    if abs(g0) > tol and abs(delta) > tol:
        eta = math.atan(delta / (4.0 * g0)) % math.pi
        scale = math.copysign(1.0, delta) / math.hypot(4.0 * g0, delta)
        m = (
            scale * -4.0 * g3,
            scale * (delta - 8.0),
            scale * 4.0 * g1,
            scale * 4.0 * g2,
        )
        return make_coupling(eta, m, norm_tol=1e-6)
    if abs(g0) <= tol:
        s = g1 * g1 + g2 * g2 + g3 * g3
        # g0 = 0 forces Delta = 4 + s >= 4
        m = (
            -4.0 * g3 / (4.0 + s),
            (s - 4.0) / (4.0 + s),
            4.0 * g1 / (4.0 + s),
            4.0 * g2 / (4.0 + s),
        )
        return make_coupling(math.pi / 2, m, norm_tol=1e-6)
    if abs(delta) <= tol:
        # Delta = 0 forces g0^2 = 4 + g1^2 + g2^2 + g3^2 >= 4
        m = (-g3 / g0, -2.0 / g0, g1 / g0, g2 / g0)
        return make_coupling(0.0, m, norm_tol=1e-6)
    raise NumericalDegeneracyError(
        f"no inversion branch applies to g={g!r} (Delta={delta:.3g})"
    )


def delta_matrix(g) -> np.ndarray:
    """Hermitian potential matrix [[g0+g3, g1-i g2], [g1+i g2, g0-g3]]."""
    g0, g1, g2, g3 = (float(x) for x in g)
    return np.array(
        [[g0 + g3, g1 - 1j * g2], [g1 + 1j * g2, g0 - g3]], dtype=complex
    )


def interaction_matrix(c: Coupling) -> np.ndarray:
    """Junction factor D_U of the transfer matrix; |det D_U| = 1.

    Defined only for permeable junctions (prefactor 1/(m1 - i m2)).
    """
    if permeability(c) is Permeability.IMPERMEABLE:
        raise ImpermeableCouplingError(
            "impermeable coupling: the chain decouples and no transfer matrix exists"
        )
    m0, m1, m2, m3 = c.m
    sin_eta = math.sin(c.eta)
    cos_eta = math.cos(c.eta)
    return (
        1.0
        / (m1 - 1j * m2)
        * np.array(
            [
                [-sin_eta - m3, 1j * (cos_eta + m0)],
                [1j * (cos_eta - m0), -sin_eta + m3],
            ]
        )
    )
