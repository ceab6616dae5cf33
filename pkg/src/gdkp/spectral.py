"""Bulk spectral function and band structure of the periodic Dirac chain.

The fiber eigenvalues at momentum k are the real zeros of

    F(eps) = m1 cos(k) + m2 sin(k) + cos(q) sin(eta)
             + sinc(q) (eps cos(eta) - mass*m0),

with q**2 = eps**2 - mass**2.  Bands are found by bracketing sign changes of
F over an energy window, column by column in k, and tracking roots across
columns by continuity.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .coupling import Coupling, Permeability, SymmetryClass, coupling_matrix, permeability
from .errors import (
    BandEdgeError,
    GridNotSymmetricError,
    WindowTooSmallError,
)
from .special import cos_sqrt, cos_sqrt_arr, sinc_sqrt, sinc_sqrt_arr, wrap_momentum

DEFAULT_K_COUNT = 64
DEFAULT_EPS_SCAN = 600

#: refined |F| below this at a no-sign-change minimum counts as a double root
DOUBLE_ROOT_TOL = 1e-10
#: grid |F| below this triggers refinement of a suspicious minimum
_MIN_ACTIVATION = 5e-2

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def wavenumber(eps: float, mass: float) -> complex:
    """Bulk wavenumber: real >= 0 outside the mass gap, positive imaginary
    inside it."""
    if mass <= 0.0:
        raise ValueError("mass must be positive")
    w = eps * eps - mass * mass
    if w >= 0.0:
        return complex(math.sqrt(w), 0.0)
    return complex(0.0, math.sqrt(-w))


def spectral_value(c: Coupling, k: float, eps: float, mass: float) -> float:
    """Real spectral function whose zeros in eps are the fiber eigenvalues."""
    m0, m1, m2, m3 = c.m
    w = eps * eps - mass * mass
    return (
        m1 * math.cos(k)
        + m2 * math.sin(k)
        + cos_sqrt(w) * math.sin(c.eta)
        + sinc_sqrt(w) * (eps * math.cos(c.eta) - mass * m0)
    )


def _spectral_values(c: Coupling, k: float, eps: np.ndarray, mass: float) -> np.ndarray:
    """Vectorized spectral_value over an energy array at fixed k."""
    m0, m1, m2, m3 = c.m
    w = eps * eps - mass * mass
    return (
        m1 * math.cos(k)
        + m2 * math.sin(k)
        + cos_sqrt_arr(w) * math.sin(c.eta)
        + sinc_sqrt_arr(w) * (eps * math.cos(c.eta) - mass * m0)
    )


def spectral_value_matrix_form(
    c: Coupling,
    k: float,
    eps: float,
    mass: float,
    *,
    series_fallback: bool = False,
    edge_tol: float = 1e-9,
) -> complex:
    """Determinant form of the spectral condition, det(B_k(eps) - U) expanded
    as a**2 - b**2 + det U - a tr U + b tr(U sigma_k).

    Complex valued; its zero set coincides with that of spectral_value (the
    two differ by a non-vanishing factor).  Useful as an independent oracle.
    """
    if abs(abs(eps) - mass) <= edge_tol:
        if not series_fallback:
            raise BandEdgeError("eps at a mass-gap edge; pass series_fallback=True")
        a = mass / (eps - 1j)
        b = -1j / (eps - 1j)
    else:
        q = wavenumber(eps, mass)
        den = eps * cmath.sin(q) - 1j * q * cmath.cos(q)
        a = mass * cmath.sin(q) / den
        b = -1j * q / den
    u = coupling_matrix(c)
    sigma_k = np.array(
        [[0.0, cmath.exp(-1j * k)], [cmath.exp(1j * k), 0.0]], dtype=complex
    )
    det_u = u[0, 0] * u[1, 1] - u[0, 1] * u[1, 0]
    return complex(
        a * a
        - b * b
        + det_u
        - a * np.trace(u)
        + b * np.trace(u @ sigma_k)
    )


class Gap(NamedTuple):
    lo: float
    hi: float
    below: int
    above: int


@dataclass(frozen=True)
class ZeroModeReport:
    """Zero-energy solutions of the fiber problem.

    For impermeable couplings the spectrum is k-independent; flat_zero_band
    marks the case where eps = 0 is an eigenvalue at every k (count/momenta
    then stay empty since the solution set is the whole zone).
    """

    count: int
    momenta: tuple[float, ...]
    g_value: float
    flat_zero_band: bool = False


@dataclass(frozen=True)
class BandStructure:
    mass: float
    k_grid: np.ndarray
    bands: dict[int, np.ndarray]
    gaps: tuple[Gap, ...]

    def labels(self) -> list[int]:
        return sorted(self.bands)

    def central_gap(self) -> Gap:
        for g in self.gaps:
            if g.lo < 0.0 < g.hi:
                return g
        raise WindowTooSmallError("no gap containing eps = 0 was resolved")

    def gap_below(self, n: int) -> Gap | None:
        for g in self.gaps:
            if g.above == n:
                return g
        return None

    def gap_above(self, n: int) -> Gap | None:
        for g in self.gaps:
            if g.below == n:
                return g
        return None

    def to_dict(self) -> dict:
        return {
            "mass": self.mass,
            "k": [float(k) for k in self.k_grid],
            "bands": {str(n): [float(e) for e in v] for n, v in self.bands.items()},
            "gaps": [
                {"lo": g.lo, "hi": g.hi, "below": g.below, "above": g.above}
                for g in self.gaps
            ],
        }

    def rows(self):
        """(k, n, eps) rows for delimited output."""
        for n in self.labels():
            vals = self.bands[n]
            for k, e in zip(self.k_grid, vals):
                yield float(k), n, float(e)


def default_window(mass: float, n_max: int) -> tuple[float, float]:
    """Energy window guaranteed to contain bands -n_max..n_max (free-Dirac
    spacing bounds the root locations)."""
    edge = (n_max + 1) * math.pi + mass
    return (-edge, edge)


def _bisect(f, lo: float, hi: float, flo: float, tol: float) -> float:
    """Bisection on a bracketing interval; flo = f(lo) already known."""
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


def _golden_min(f, a: float, b: float, tol: float = 1e-12):
    """Golden-section minimization of f on [a, b]; returns (x, f(x))."""
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


def _column_roots(
    c: Coupling,
    k: float,
    mass: float,
    window: tuple[float, float],
    eps_scan: int,
    refine_tol: float,
) -> list[float]:
    """All roots of the spectral function at fixed k, with multiplicity.

    Sign-change cells are bisected.  Cells where |F| dips near zero without a
    sign change are subdivided and re-scanned; if still no crossing, the
    minimum is refined and counted as a double root (band touching) when it
    lies below DOUBLE_ROOT_TOL.
    """
    grid = np.linspace(window[0], window[1], eps_scan)
    vals = _spectral_values(c, k, grid, mass)
    f = lambda e: spectral_value(c, k, e, mass)

    roots: list[float] = []
    sign = np.sign(vals)
    zero_pts = np.abs(vals) < 1e-13
    sign[zero_pts] = 0.0

    for i in np.nonzero(zero_pts)[0]:
        left = sign[i - 1] if i > 0 else 0.0
        right = sign[i + 1] if i + 1 < len(sign) else 0.0
        roots.append(float(grid[i]))
        if left != 0.0 and left == right:
            roots.append(float(grid[i]))  # tangential zero at a grid point

    crossings = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
    for i in crossings:
        roots.append(_bisect(f, grid[i], grid[i + 1], vals[i], refine_tol))

    # suspicious interior minima of |F| with no adjacent sign change
    absv = np.abs(vals)
    for i in range(1, len(grid) - 1):
        if sign[i] == 0.0 or sign[i - 1] != sign[i] or sign[i] != sign[i + 1]:
            continue
        if absv[i] >= _MIN_ACTIVATION or absv[i] >= absv[i - 1] or absv[i] > absv[i + 1]:
            continue
        lo, hi = grid[i - 1], grid[i + 1]
        sub = np.linspace(lo, hi, 21)
        sub_vals = _spectral_values(c, k, sub, mass)
        sub_sign = np.sign(sub_vals)
        sub_cross = np.nonzero(sub_sign[:-1] * sub_sign[1:] < 0)[0]
        if len(sub_cross):
            for j in sub_cross:
                roots.append(_bisect(f, sub[j], sub[j + 1], sub_vals[j], refine_tol))
            continue
        x, fx = _golden_min(lambda e: abs(f(e)), lo, hi, tol=refine_tol)
        if fx < DOUBLE_ROOT_TOL:
            roots.extend((x, x))
    roots.sort()
    return roots


def _best_offset(short: list[float], long: list[float]) -> int:
    best_cost, best_off = math.inf, 0
    for off in range(len(long) - len(short) + 1):
        cost = sum(abs(s - long[i + off]) for i, s in enumerate(short))
        if cost < best_cost:
            best_cost, best_off = cost, off
    return best_off


def _track_bands(columns: list[list[float]]) -> list[np.ndarray]:
    """Join per-column sorted roots into bands by nearest-value alignment.

    Roots may appear/disappear only at the window edges; trajectories that do
    not span every column are discarded.
    """
    n_cols = len(columns)
    trajs: list[list[float]] = [[v] for v in columns[0]]
    alive = list(range(len(trajs)))
    for col in columns[1:]:
        prev_vals = [trajs[i][-1] for i in alive]
        if len(col) >= len(prev_vals):
            off = _best_offset(prev_vals, col)
            new_alive = []
            for j, v in enumerate(col):
                i = j - off
                if 0 <= i < len(prev_vals):
                    trajs[alive[i]].append(v)
                    new_alive.append(alive[i])
                else:
                    trajs.append([v])
                    new_alive.append(len(trajs) - 1)
        else:
            off = _best_offset(col, prev_vals)
            new_alive = []
            for i in range(len(prev_vals)):
                j = i - off
                if 0 <= j < len(col):
                    trajs[alive[i]].append(col[j])
                    new_alive.append(alive[i])
        alive = new_alive
    return [np.asarray(t) for t in trajs if len(t) == n_cols]


def band_structure(
    c: Coupling,
    mass: float,
    k_count: int = DEFAULT_K_COUNT,
    eps_window: tuple[float, float] | None = None,
    eps_scan: int = DEFAULT_EPS_SCAN,
    *,
    n_max: int = 3,
    refine_tol: float = 1e-10,
    zero_tol: float = 1e-7,
    gap_tol: float = 1e-9,
) -> BandStructure:
    """Solve the band structure on a uniform Brillouin-zone grid.

    Bands are labeled n = +-1, +-2, ... outward from zero; a band containing
    eps = 0 (flat zero band of a confining junction, or a band crossing zero)
    gets the label n = 0.  Gaps are the maximal energy intervals between
    consecutive tracked bands that contain no root at any k.
    """
    if mass <= 0.0:
        raise ValueError("mass must be positive")
    if k_count < 2:
        raise ValueError("k_count must be at least 2")
    if eps_scan < 100:
        raise ValueError("eps_scan must be at least 100")
    if eps_window is None:
        eps_window = default_window(mass, n_max)
    if not (eps_window[0] < 0.0 < eps_window[1]):
        raise ValueError("eps_window must contain 0")

    k_grid = -math.pi + 2.0 * math.pi * np.arange(k_count) / k_count
    columns = [
        _column_roots(c, float(k), mass, eps_window, eps_scan, refine_tol)
        for k in k_grid
    ]
    tracked = _track_bands(columns)
    if len(tracked) < 2:
        raise WindowTooSmallError(
            f"only {len(tracked)} band(s) found in window {eps_window}"
        )

    zero_candidates = [
        b for b in tracked if b.min() <= zero_tol and b.max() >= -zero_tol
    ]
    zero_band = None
    if zero_candidates:
        zero_band = min(zero_candidates, key=lambda b: abs(float(np.mean(b))))
    rest = [b for b in tracked if b is not zero_band]
    positives = sorted(
        (b for b in rest if float(np.mean(b)) > 0.0), key=lambda b: float(np.mean(b))
    )
    negatives = sorted(
        (b for b in rest if float(np.mean(b)) <= 0.0),
        key=lambda b: -float(np.mean(b)),
    )
    bands: dict[int, np.ndarray] = {}
    if zero_band is not None:
        bands[0] = zero_band
    for i, b in enumerate(positives):
        bands[i + 1] = b
    for i, b in enumerate(negatives):
        bands[-(i + 1)] = b

    order = sorted(bands, key=lambda n: float(np.mean(bands[n])))
    gaps = []
    for la, lb in zip(order[:-1], order[1:]):
        lo = float(bands[la].max())
        hi = float(bands[lb].min())
        if hi - lo > gap_tol:
            gaps.append(Gap(lo, hi, la, lb))
    return BandStructure(mass, k_grid, bands, tuple(gaps))


def zero_modes(c: Coupling, mass: float, tol: float = 1e-12) -> ZeroModeReport:
    """Classify zero-energy fiber eigenvalues via
    G = cosh(mass) sin(eta) - m0 sinh(mass).

    Permeable junction: F(0) = 0 has no k-solution when |G| exceeds
    sqrt(m1^2+m2^2), one (tangential) solution at equality, two otherwise.
    Impermeable junction: either no zero mode or a flat zero band.
    """
    if mass <= 0.0:
        raise ValueError("mass must be positive")
    m0, m1, m2, m3 = c.m
    g_val = math.cosh(mass) * math.sin(c.eta) - m0 * math.sinh(mass)
    if permeability(c) is Permeability.IMPERMEABLE:
        return ZeroModeReport(0, (), g_val, flat_zero_band=abs(g_val) <= tol)

    radius = math.hypot(m1, m2)
    phi = math.atan2(m2, m1)
    if abs(abs(g_val) - radius) <= tol:
        k = wrap_momentum(phi + (math.pi if g_val > 0.0 else 0.0))
        return ZeroModeReport(1, (k,), g_val)
    if abs(g_val) > radius:
        return ZeroModeReport(0, (), g_val)
    delta = math.acos(max(-1.0, min(1.0, -g_val / radius)))
    momenta = sorted((wrap_momentum(phi - delta), wrap_momentum(phi + delta)))
    return ZeroModeReport(2, tuple(momenta), g_val)


def check_spectral_symmetries(
    bands: BandStructure, sym: SymmetryClass, tol: float = 1e-9
) -> dict[str, float]:
    """Maximum deviation of the band energies from each symmetry relation the
    junction preserves: T -> eps_n(k) = eps_n(-k), C -> eps_n(k) = -eps_{-n}(-k),
    S -> eps_n(k) = -eps_{-n}(k)."""
    k = bands.k_grid
    neg_index = np.empty(len(k), dtype=int)
    for i, ki in enumerate(k):
        target = wrap_momentum(-float(ki))
        j = np.argmin(np.abs(k - target))
        if abs(float(k[j]) - target) > tol:
            raise GridNotSymmetricError("k grid is not symmetric under k -> -k")
        neg_index[i] = j

    report: dict[str, float] = {}
    labels = set(bands.bands)
    if sym.has_t:
        report["T"] = max(
            float(np.max(np.abs(v - v[neg_index]))) for v in bands.bands.values()
        )
    if sym.has_c:
        pairs = [n for n in labels if -n in labels]
        report["C"] = max(
            float(np.max(np.abs(bands.bands[n] + bands.bands[-n][neg_index])))
            for n in pairs
        )
    if sym.has_s:
        pairs = [n for n in labels if -n in labels]
        report["S"] = max(
            float(np.max(np.abs(bands.bands[n] + bands.bands[-n])))
            for n in pairs
        )
    return report
