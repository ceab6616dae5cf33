"""Transfer-matrix machinery for the half-line truncated chain.

At energy eps inside a bulk gap the unit-cell transfer matrix has one
decaying and one growing eigendirection; an edge state of the truncation
with edge-to-junction distance d and confining boundary angle alpha exists
exactly where the boundary spectral function

    F(eps) = w_plus(eps, d) . (i cos(alpha/2), sin(alpha/2))

vanishes, w_plus being the left eigenvector of the growing eigenvalue.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .coupling import Coupling
from .errors import (
    GapUnresolvedError,
    GdkpError,
    UnimodularError,
)
from .kurasov import interaction_matrix
from .spectral import BandStructure, Gap, band_structure
from .special import cos_sqrt, cos_sqrt_arr, sinc_sqrt, sinc_sqrt_arr
from .zak import ZakResult, make_family_coupling, near_gap_closing, translated_zak, zak_phase

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0

DEFAULT_SCAN_POINTS = 2000
RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class TransferMatrix:
    t: np.ndarray
    eps: float
    d: float


@dataclass(frozen=True)
class EigenSplit:
    lambda_minus: complex
    lambda_plus: complex
    v_minus: np.ndarray
    w_plus: np.ndarray


@dataclass(frozen=True)
class EdgeState:
    eps: float
    decay: float
    touching: bool


@dataclass(frozen=True)
class BbcVerdict:
    family: str
    theta: float
    m2: float
    band: int
    d: float
    alpha: float
    zak: float
    translated: float
    n_below: int
    n_above: int
    sign: int
    quantized: bool
    sign_matches: bool
    verdict: str

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "theta": self.theta,
            "m2": self.m2,
            "band": self.band,
            "d": self.d,
            "alpha": self.alpha,
            "zak": self.zak,
            "translated_zak": self.translated,
            "n_b": self.n_below,
            "n_a": self.n_above,
            "sign": self.sign,
            "quantized": self.quantized,
            "sign_matches": self.sign_matches,
            "verdict": self.verdict,
        }


def propagator(eps: float, mass: float, d: float) -> np.ndarray:
    """Free propagator over a path of length d:
    P = cos(qd) I + i d sinc(qd) Q(eps), Q = eps sigma_x + i mass sigma_y;
    det P = 1."""
    if not 0.0 <= d <= 1.0:
        raise ValueError("path length d must lie in [0, 1]")
    w = eps * eps - mass * mass
    a = cos_sqrt(d * d * w)
    s = d * sinc_sqrt(d * d * w)  # sin(qd)/q
    return np.array(
        [[a, 1j * s * (eps + mass)], [1j * s * (eps - mass), a]], dtype=complex
    )


def transfer_matrix(c: Coupling, eps: float, mass: float, d: float) -> TransferMatrix:
    """Unit-cell transfer matrix T = P(eps, d) D_U P(eps, 1-d); unimodular."""
    if not 0.0 <= d < 1.0:
        raise ValueError("cut position d must lie in [0, 1)")
    d_u = interaction_matrix(c)
    t = propagator(eps, mass, d) @ d_u @ propagator(eps, mass, 1.0 - d)
    return TransferMatrix(t, eps, d)


def band_condition(c: Coupling, eps: float, mass: float, tol: float = 0.0) -> bool:
    """Whether eps satisfies the energy band condition |tr T| <= 2, in the
    closed form |cos(q) sin(eta) + sinc(q)(eps cos(eta) - mass*m0)| <=
    sqrt(m1^2 + m2^2); independent of the cut position."""
    m0, m1, m2, m3 = c.m
    w = eps * eps - mass * mass
    lhs = abs(
        cos_sqrt(w) * math.sin(c.eta)
        + sinc_sqrt(w) * (eps * math.cos(c.eta) - mass * m0)
    )
    return lhs <= math.hypot(m1, m2) + tol


def split_eigenpairs(t: TransferMatrix, tol: float = 1e-10) -> EigenSplit:
    """Eigenvalues ordered by modulus with the decaying right eigenvector and
    the growing left eigenvector; raises when eps lies in a band (both
    eigenvalues on the unit circle)."""
    m = t.t
    tr = m[0, 0] + m[1, 1]
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    disc = cmath.sqrt(tr * tr - 4.0 * det)
    lam_plus = 0.5 * (tr + disc) if abs(tr + disc) >= abs(tr - disc) else 0.5 * (tr - disc)
    lam_minus = det / lam_plus
    if abs(lam_minus) > 1.0 - tol:
        raise UnimodularError(
            f"both eigenvalue moduli within {tol:g} of 1 at eps={t.eps:.6g}"
        )

    v_a = np.array([m[0, 1], lam_minus - m[0, 0]])
    v_b = np.array([lam_minus - m[1, 1], m[1, 0]])
    v = v_a if np.linalg.norm(v_a) >= np.linalg.norm(v_b) else v_b
    v = v / np.linalg.norm(v)

    w_a = np.array([m[1, 0], lam_plus - m[0, 0]])
    w_b = np.array([lam_plus - m[1, 1], m[0, 1]])
    w = w_a if np.linalg.norm(w_a) >= np.linalg.norm(w_b) else w_b
    w = w / np.linalg.norm(w)
    # deterministic phase: first component exceeding tolerance made real-positive
    pivot = w[0] if abs(w[0]) > 1e-12 else w[1]
    w = w * (pivot.conjugate() / abs(pivot))
    return EigenSplit(complex(lam_minus), complex(lam_plus), v, w)


def _boundary_vector(alpha: float) -> np.ndarray:
    # orientation fixed so that alpha = +pi/2 hosts the central zero mode of
    # the theta in (0, theta_m) junctions; see sign_factor
    return np.array([1j * math.cos(alpha / 2.0), math.sin(alpha / 2.0)])


def _edge_transfer(c: Coupling, eps: float, mass: float, d: float) -> TransferMatrix:
    """Transfer matrix seen from the edge of the truncated chain.

    The truncation parameter d places the nearest junction a distance d
    beyond the edge, so the matrix propagating the boundary data is
    P(1-d) D_U P(d); at d = 0 the junction sits directly at the edge.
    """
    if not 0.0 <= d < 1.0:
        raise ValueError("cut position d must lie in [0, 1)")
    d_u = interaction_matrix(c)
    t = propagator(eps, mass, 1.0 - d) @ d_u @ propagator(eps, mass, d)
    return TransferMatrix(t, eps, d)


def boundary_spectral_value(
    c: Coupling, eps: float, mass: float, d: float, alpha: float
) -> complex:
    """Scalar whose zeros inside bulk gaps locate the edge states of the
    truncated chain; w_plus is normalized deterministically so the value is
    reproducible across runs."""
    es = split_eigenpairs(_edge_transfer(c, eps, mass, d))
    return complex(es.w_plus @ _boundary_vector(alpha))


def _gap_profile(
    c: Coupling, eps: np.ndarray, mass: float, d: float, alpha: float
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized (|F|, |lambda_minus|) over an energy array inside a gap;
    d is the edge-to-junction distance (see _edge_transfer)."""
    eps = np.asarray(eps, dtype=float)
    d_u = interaction_matrix(c)
    w = eps * eps - mass * mass

    d1 = 1.0 - d
    a1 = cos_sqrt_arr(d1 * d1 * w)
    s1 = d1 * sinc_sqrt_arr(d1 * d1 * w)
    a2 = cos_sqrt_arr(d * d * w)
    s2 = d * sinc_sqrt_arr(d * d * w)
    up = eps + mass
    dn = eps - mass

    # A = P(1-d) D_U, T = A P(d)
    a00 = a1 * d_u[0, 0] + 1j * s1 * up * d_u[1, 0]
    a01 = a1 * d_u[0, 1] + 1j * s1 * up * d_u[1, 1]
    a10 = 1j * s1 * dn * d_u[0, 0] + a1 * d_u[1, 0]
    a11 = 1j * s1 * dn * d_u[0, 1] + a1 * d_u[1, 1]
    t00 = a00 * a2 + a01 * 1j * s2 * dn
    t01 = a00 * 1j * s2 * up + a01 * a2
    t10 = a10 * a2 + a11 * 1j * s2 * dn
    t11 = a10 * 1j * s2 * up + a11 * a2

    tr = t00 + t11
    det = d_u[0, 0] * d_u[1, 1] - d_u[0, 1] * d_u[1, 0]
    disc = np.sqrt(tr * tr - 4.0 * det + 0j)
    pick = np.abs(tr + disc) >= np.abs(tr - disc)
    lam_plus = np.where(pick, 0.5 * (tr + disc), 0.5 * (tr - disc))
    lam_minus = det / lam_plus

    w0_a, w1_a = t10, lam_plus - t00
    w0_b, w1_b = lam_plus - t11, t01
    use_a = np.abs(w0_a) ** 2 + np.abs(w1_a) ** 2 >= np.abs(w0_b) ** 2 + np.abs(w1_b) ** 2
    w0 = np.where(use_a, w0_a, w0_b)
    w1 = np.where(use_a, w1_a, w1_b)
    norm = np.sqrt(np.abs(w0) ** 2 + np.abs(w1) ** 2)
    bvec = _boundary_vector(alpha)
    abs_f = np.abs(w0 * bvec[0] + w1 * bvec[1]) / norm
    return abs_f, np.abs(lam_minus)


def edge_states(
    c: Coupling,
    mass: float,
    d: float,
    alpha: float,
    gap: Gap | tuple[float, float],
    *,
    scan_points: int = DEFAULT_SCAN_POINTS,
    residual_tol: float = RESIDUAL_TOL,
    decay_margin: float = 1e-8,
    refine_tol: float = 1e-10,
    edge_pad: float = 1e-6,
) -> list[EdgeState]:
    """All edge states inside one bulk gap.

    |F| is scanned on a uniform grid; each local minimum is refined by
    golden section and accepted when the residual drops below residual_tol
    with a strictly decaying transfer eigenvalue.  States within edge_pad of
    a gap boundary are flagged as touching (callers exclude them from
    counts: they are merging with the bulk bands).
    """
    lo, hi = (gap.lo, gap.hi) if isinstance(gap, Gap) else (float(gap[0]), float(gap[1]))
    if hi <= lo:
        raise ValueError("empty gap interval")
    grid = np.linspace(lo, hi, scan_points + 2)[1:-1]
    abs_f, _ = _gap_profile(c, grid, mass, d, alpha)

    def f_single(e: float) -> float:
        return float(_gap_profile(c, np.array([e]), mass, d, alpha)[0][0])

    candidates: list[tuple[float, float]] = []
    n = len(grid)
    for i in range(n):
        left = abs_f[i - 1] if i > 0 else math.inf
        right = abs_f[i + 1] if i + 1 < n else math.inf
        if abs_f[i] < left and abs_f[i] <= right and abs_f[i] < 0.2:
            a = grid[i - 1] if i > 0 else lo + 1e-13
            b = grid[i + 1] if i + 1 < n else hi - 1e-13
            candidates.append((a, b))

    states: list[EdgeState] = []
    for a, b in candidates:
        x, fx = _golden_min(f_single, a, b, refine_tol)
        if fx >= residual_tol:
            continue
        decay = float(_gap_profile(c, np.array([x]), mass, d, alpha)[1][0])
        if decay >= 1.0 - decay_margin:
            continue
        if any(abs(x - s.eps) < 1e-8 for s in states):
            continue
        touching = (x - lo) < edge_pad or (hi - x) < edge_pad
        states.append(EdgeState(float(x), decay, touching))
    return sorted(states, key=lambda s: s.eps)


def _golden_min(f, a: float, b: float, tol: float):
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > tol:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = f(x2)
    return (x1, f1) if f1 <= f2 else (x2, f2)


def edge_counts(
    c: Coupling,
    mass: float,
    d: float,
    alpha: float,
    band: int,
    *,
    bands: BandStructure | None = None,
    cumulative: bool = False,
    scan_points: int = DEFAULT_SCAN_POINTS,
) -> tuple[int, int]:
    """Edge-state counts (N_b, N_a) in the gaps below and above one band.

    Adjacent-gap counting by default; cumulative=True instead counts every
    resolved gap below/above the band.  Boundary-touching states never
    count.
    """
    if bands is None:
        bands = band_structure(c, mass, k_count=48, n_max=max(abs(band) + 1, 2))
    below = bands.gap_below(band)
    above = bands.gap_above(band)
    if below is None or above is None:
        raise GapUnresolvedError(f"gaps adjacent to band {band} not resolved")

    def count(g: Gap) -> int:
        found = edge_states(c, mass, d, alpha, g, scan_points=scan_points)
        return sum(1 for s in found if not s.touching)

    if not cumulative:
        return count(below), count(above)
    n_b = sum(count(g) for g in bands.gaps if g.hi <= below.hi)
    n_a = sum(count(g) for g in bands.gaps if g.lo >= above.lo)
    return n_b, n_a


def sign_factor(band: int, theta: float, alpha: float) -> int:
    """Orientation factor relating the translated Zak phase to the edge-state
    count difference: (-1)^n sign(n) sign(alpha) sign(|theta| - pi/2)."""
    parity = -1 if band % 2 else 1
    s_n = 1 if band > 0 else -1
    s_alpha = 1 if alpha >= 0.0 else -1
    s_theta = 1 if abs(theta) > math.pi / 2 else -1
    return parity * s_n * s_alpha * s_theta


def bbc_verdict(
    family: str,
    theta: float,
    m2: float = 0.0,
    *,
    mass: float,
    band: int,
    d: float,
    alpha: float,
    m_points: int = 2048,
    zak_result: ZakResult | None = None,
    bands: BandStructure | None = None,
    quant_tol: float = 0.1,
    scan_points: int = DEFAULT_SCAN_POINTS,
) -> BbcVerdict:
    """Bulk-boundary comparison for one band of a named coupling family.

    The bulk side is the translated Zak phase in units of pi (an integer 0
    or 1 mod 2 when quantized); the boundary side is the edge-state count
    difference across the adjacent gaps.  The verdict is 'holds' when
    N_b - N_a equals the quantized phase times the orientation factor of
    sign_factor, 'violated' when it does not, and 'degenerate' when the
    phase is not quantized or edge states are merging with the bulk bands.
    """
    c = make_family_coupling(family, theta, m2)
    if bands is None:
        bands = band_structure(c, mass, k_count=48, n_max=max(abs(band) + 1, 2))
    if zak_result is None:
        zak_result = zak_phase(c, mass, band, m_points, coarse=bands)
    translated = translated_zak(zak_result, d)
    units = translated / math.pi
    nearest = round(units)
    quantized = abs(units - nearest) <= quant_tol / math.pi
    parity = int(nearest) % 2

    below = bands.gap_below(band)
    above = bands.gap_above(band)
    if below is None or above is None:
        raise GapUnresolvedError(f"gaps adjacent to band {band} not resolved")
    st_below = edge_states(c, mass, d, alpha, below, scan_points=scan_points)
    st_above = edge_states(c, mass, d, alpha, above, scan_points=scan_points)
    touching = any(s.touching for s in st_below + st_above)
    n_b = sum(1 for s in st_below if not s.touching)
    n_a = sum(1 for s in st_above if not s.touching)

    s = sign_factor(band, theta, alpha)
    diff = n_b - n_a
    sign_matches = diff == s * parity
    if not quantized or touching:
        verdict = "degenerate"
    elif sign_matches:
        verdict = "holds"
    else:
        verdict = "violated"
    return BbcVerdict(
        family.upper(),
        theta,
        m2,
        band,
        d,
        alpha,
        zak_result.phase,
        translated,
        n_b,
        n_a,
        s,
        quantized,
        sign_matches,
        verdict,
    )


def edge_sweep(
    family: str,
    thetas,
    mass: float,
    *,
    axis: str,
    axis_values,
    d: float = 0.5,
    alpha: float = math.pi / 2,
    m2: float = 0.0,
    gap_count: int = 3,
    scan_points: int = 1200,
    margin: float = 0.05,
) -> list[dict]:
    """Edge-state counts over a (theta x alpha) or (theta x d) grid.

    For each theta the central gap and the first gap_count - 1 positive gaps
    are scanned at every axis value.  Per-row failures are recorded and the
    sweep continues.
    """
    if axis not in ("alpha", "d"):
        raise ValueError("axis must be 'alpha' or 'd'")
    rows: list[dict] = []
    for theta in thetas:
        theta = float(theta)
        c = make_family_coupling(family, theta, m2)
        flagged = near_gap_closing(family, theta, m2, mass, margin)
        try:
            bs = band_structure(c, mass, k_count=48, n_max=max(gap_count, 2))
            gaps = [bs.central_gap()]
            label = 1
            while len(gaps) < gap_count:
                nxt = bs.gap_above(label)
                if nxt is None:
                    break
                gaps.append(nxt)
                label += 1
        except GdkpError as err:
            for v in axis_values:
                rows.append(
                    {
                        "family": family.upper(),
                        "theta": theta,
                        "m2": m2,
                        "d": d if axis == "alpha" else float(v),
                        "alpha": float(v) if axis == "alpha" else alpha,
                        "gap_below": None,
                        "gap_above": None,
                        "count": None,
                        "touching": None,
                        "flagged": flagged,
                        "error": f"{type(err).__name__}: {err}",
                    }
                )
            continue
        for v in axis_values:
            d_eff = d if axis == "alpha" else float(v)
            alpha_eff = float(v) if axis == "alpha" else alpha
            for g in gaps:
                row = {
                    "family": family.upper(),
                    "theta": theta,
                    "m2": m2,
                    "d": d_eff,
                    "alpha": alpha_eff,
                    "gap_below": g.below,
                    "gap_above": g.above,
                    "count": None,
                    "touching": None,
                    "flagged": flagged,
                    "error": "",
                }
                try:
                    found = edge_states(
                        c, mass, d_eff, alpha_eff, g, scan_points=scan_points
                    )
                    row["count"] = sum(1 for s in found if not s.touching)
                    row["touching"] = sum(1 for s in found if s.touching)
                except GdkpError as err:
                    row["error"] = f"{type(err).__name__}: {err}"
                rows.append(row)
    return rows
